//! The finite Heisenberg group H_n and its dihedral extension 𝔇H_n = μ₂ ⋉ H_n.
//!
//! All three coordinates of H_n are stored as exponents modulo n: the
//! central coordinate λ = γ^lambda, the translation a, and the character
//! α^alpha with α(k) = γ^k. Matrices only appear in [`crate::reps`].

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot combine elements of the order-{left} and order-{right} groups")]
    OrderMismatch { left: u32, right: u32 },
    #[error("invalid group element: {0}")]
    Invalid(String),
}

fn md(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

/// Element (λ; a, α) of H_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HeisenbergElement {
    pub n: u32,
    pub lambda: u32,
    pub a: u32,
    pub alpha: u32,
}

impl HeisenbergElement {
    pub fn new(n: u32, lambda: i64, a: i64, alpha: i64) -> Self {
        HeisenbergElement {
            n,
            lambda: md(lambda, n),
            a: md(a, n),
            alpha: md(alpha, n),
        }
    }

    pub fn identity(n: u32) -> Self {
        Self::new(n, 0, 0, 0)
    }

    /// (λ;a,α)(λ';a',α') = (λλ'α'(a); a+a', αα').
    pub fn mul(&self, o: &Self) -> Result<Self, GroupError> {
        Ok(DihedralElement::from_h(*self).mul(&DihedralElement::from_h(*o))?.h)
    }

    pub fn is_central(&self) -> bool {
        self.a == 0 && self.alpha == 0
    }
}

/// Element (ε, λ, a, α) of 𝔇H_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DihedralElement {
    /// +1 or −1.
    pub eps: i8,
    pub h: HeisenbergElement,
}

impl DihedralElement {
    pub fn new(n: u32, eps: i8, lambda: i64, a: i64, alpha: i64) -> Self {
        assert!(eps == 1 || eps == -1, "eps must be ±1");
        DihedralElement {
            eps,
            h: HeisenbergElement::new(n, lambda, a, alpha),
        }
    }

    pub fn from_h(h: HeisenbergElement) -> Self {
        DihedralElement { eps: 1, h }
    }

    pub fn identity(n: u32) -> Self {
        Self::new(n, 1, 0, 0, 0)
    }

    /// 𝛔 = (−1, 1, 0, 𝟙).
    pub fn sigma(n: u32) -> Self {
        Self::new(n, -1, 0, 0, 0)
    }

    /// 𝐚 = (1, 1, 1, 𝟙).
    pub fn gen_a(n: u32) -> Self {
        Self::new(n, 1, 0, 1, 0)
    }

    /// 𝛂 = (1, 1, 0, α).
    pub fn gen_alpha(n: u32) -> Self {
        Self::new(n, 1, 0, 0, 1)
    }

    /// Central element (1, γ^k, 0, 𝟙).
    pub fn central(n: u32, k: i64) -> Self {
        Self::new(n, 1, k, 0, 0)
    }

    pub fn n(&self) -> u32 {
        self.h.n
    }

    pub fn lambda(&self) -> u32 {
        self.h.lambda
    }

    pub fn a(&self) -> u32 {
        self.h.a
    }

    pub fn alpha(&self) -> u32 {
        self.h.alpha
    }

    pub fn is_identity(&self) -> bool {
        self.eps == 1 && self.h.lambda == 0 && self.h.a == 0 && self.h.alpha == 0
    }

    /// (ε,λ,a,α)(ε',λ',a',α') = (εε', λλ'α'^ε(a), a+εa', αα'^ε).
    pub fn mul(&self, o: &Self) -> Result<Self, GroupError> {
        let n = self.n();
        if n != o.n() {
            return Err(GroupError::OrderMismatch {
                left: n,
                right: o.n(),
            });
        }
        let e = self.eps as i64;
        let (l, a, al) = (self.h.lambda as i64, self.h.a as i64, self.h.alpha as i64);
        let (l2, a2, al2) = (o.h.lambda as i64, o.h.a as i64, o.h.alpha as i64);
        Ok(Self::new(
            n,
            self.eps * o.eps,
            l + l2 + e * al2 * a,
            a + e * a2,
            al + e * al2,
        ))
    }

    pub fn inverse(&self) -> Self {
        let e = self.eps as i64;
        let (l, a, al) = (self.h.lambda as i64, self.h.a as i64, self.h.alpha as i64);
        Self::new(self.n(), self.eps, -l + al * a, -e * a, -e * al)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = Self::identity(self.n());
        for _ in 0..k.unsigned_abs() {
            acc = dh_mul(&acc, &base);
        }
        acc
    }

    /// Flat JSON object {eps, lambda, a, alpha}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DihedralJson::from(*self)).expect("serializable")
    }

    pub fn from_json(n: u32, v: &serde_json::Value) -> Result<Self, GroupError> {
        let j: DihedralJson =
            serde_json::from_value(v.clone()).map_err(|e| GroupError::Invalid(e.to_string()))?;
        if j.eps != 1 && j.eps != -1 {
            return Err(GroupError::Invalid(format!("eps = {}", j.eps)));
        }
        Ok(Self::new(n, j.eps, j.lambda, j.a, j.alpha))
    }
}

/// Serialized shape of a [`DihedralElement`]; n is supplied by context.
#[derive(Serialize, Deserialize)]
struct DihedralJson {
    eps: i8,
    lambda: i64,
    a: i64,
    alpha: i64,
}

impl From<DihedralElement> for DihedralJson {
    fn from(x: DihedralElement) -> Self {
        DihedralJson {
            eps: x.eps,
            lambda: x.h.lambda as i64,
            a: x.h.a as i64,
            alpha: x.h.alpha as i64,
        }
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, g^{}, {}, alpha^{})",
            if self.eps == 1 { "+1" } else { "-1" },
            self.h.lambda,
            self.h.a,
            self.h.alpha
        )
    }
}

/// Product in 𝔇H_n; panics on mismatched n (use [`DihedralElement::mul`]
/// for the fallible form).
pub fn dh_mul(x: &DihedralElement, y: &DihedralElement) -> DihedralElement {
    x.mul(y).expect("dihedral Heisenberg order mismatch")
}

/// Subgroup generated by `gens`, listed in breadth-first discovery order
/// starting from the identity.
pub fn dh_generate(gens: &[DihedralElement]) -> Vec<DihedralElement> {
    assert!(!gens.is_empty(), "need at least one generator");
    let n = gens[0].n();
    let id = DihedralElement::identity(n);
    let mut seen = HashSet::from([id]);
    let mut out = vec![id];
    let mut queue = VecDeque::from([id]);
    // finite group: closure under right multiplication by generators suffices
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = dh_mul(&x, g);
            if seen.insert(y) {
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}

/// Image in μ₂ ⋉ (ℤ/n × ẑ/n): (eps, a, alpha).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct QuotientElement {
    pub n: u32,
    pub eps: i8,
    pub a: u32,
    pub alpha: u32,
}

impl QuotientElement {
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let e = self.eps as i64;
        QuotientElement {
            n: self.n,
            eps: self.eps * o.eps,
            a: md(self.a as i64 + e * o.a as i64, self.n),
            alpha: md(self.alpha as i64 + e * o.alpha as i64, self.n),
        }
    }
}

/// Drop the central coordinate.
pub fn dh_quotient_abelianized(x: &DihedralElement) -> QuotientElement {
    QuotientElement {
        n: x.n(),
        eps: x.eps,
        a: x.h.a,
        alpha: x.h.alpha,
    }
}

/// All 2n³ elements in a fixed lexicographic order.
pub fn dh_all(n: u32) -> Vec<DihedralElement> {
    let mut out = Vec::with_capacity(2 * (n as usize).pow(3));
    for eps in [1i8, -1] {
        for l in 0..n {
            for a in 0..n {
                for al in 0..n {
                    out.push(DihedralElement::new(n, eps, l as i64, a as i64, al as i64));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_examples() {
        let n = 3;
        let s = DihedralElement::sigma(n);
        let a = DihedralElement::gen_a(n);
        let al = DihedralElement::gen_alpha(n);
        assert!(dh_mul(&s, &s).is_identity());
        assert_eq!(dh_mul(&a, &al), DihedralElement::new(n, 1, 1, 1, 1));
        assert_eq!(dh_mul(&al, &a), DihedralElement::new(n, 1, 0, 1, 1));
        let comm = dh_mul(&dh_mul(&a, &al), &dh_mul(&a.inverse(), &al.inverse()));
        assert_eq!(comm, DihedralElement::central(n, 1));
        assert_eq!(dh_mul(&dh_mul(&s, &a), &s), a.inverse());
        assert_eq!(a.inverse(), DihedralElement::new(n, 1, 0, -1, 0));
    }

    #[test]
    fn mismatched_orders_rejected() {
        let x = DihedralElement::gen_a(3);
        let y = DihedralElement::gen_a(5);
        assert_eq!(x.mul(&y), Err(GroupError::OrderMismatch { left: 3, right: 5 }));
    }

    #[test]
    fn generated_subgroups() {
        for n in [3u32, 5, 7] {
            let full = dh_generate(&[
                DihedralElement::sigma(n),
                DihedralElement::gen_a(n),
                DihedralElement::gen_alpha(n),
            ]);
            assert_eq!(full.len(), 2 * (n as usize).pow(3));
        }
        assert_eq!(dh_generate(&[DihedralElement::identity(3)]).len(), 1);
        assert_eq!(dh_generate(&[DihedralElement::gen_a(5)]).len(), 5);
    }

    #[test]
    fn inverses_and_center() {
        let n = 3;
        for x in dh_all(n) {
            assert!(dh_mul(&x, &x.inverse()).is_identity());
            assert!(dh_mul(&x.inverse(), &x).is_identity());
        }
        let h: Vec<_> = dh_all(n).into_iter().filter(|x| x.eps == 1).collect();
        let center: Vec<_> = h
            .iter()
            .filter(|x| h.iter().all(|y| dh_mul(x, y) == dh_mul(y, x)))
            .collect();
        assert_eq!(center.len(), n as usize);
        assert!(center.iter().all(|x| x.h.is_central()));
    }

    #[test]
    fn quotient_examples() {
        let q = dh_quotient_abelianized(&DihedralElement::sigma(3));
        assert_eq!((q.eps, q.a, q.alpha), (-1, 0, 0));
        let q = dh_quotient_abelianized(&DihedralElement::new(3, 1, 2, 1, 1));
        assert_eq!((q.eps, q.a, q.alpha), (1, 1, 1));
    }

    #[test]
    fn json_round_trip() {
        let x = DihedralElement::new(5, -1, 3, 4, 2);
        let v = x.to_json();
        assert_eq!(v, serde_json::json!({"eps": -1, "lambda": 3, "a": 4, "alpha": 2}));
        assert_eq!(DihedralElement::from_json(5, &v).unwrap(), x);
        assert!(DihedralElement::from_json(5, &serde_json::json!({"eps": 0, "lambda": 0, "a": 0, "alpha": 0})).is_err());
    }
}
