//! Word-sized prime fields F_p with p ≡ 1 (mod n), used as a fast image of
//! Z[ζ_n] under ζ ↦ ω for a primitive n-th root of unity ω in F_p.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{CycScalar, ExactError, Scalar};

/// An element of F_p. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Fp {
        Fp {
            v: v.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn pow(self, e: u64) -> Fp {
        Fp {
            v: powmod(self.v, e, self.p),
            p: self.p,
        }
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }

    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Fp::new(v, self.p)
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn is_one(&self) -> bool {
        self.v == 1
    }

    fn add(&self, rhs: &Self) -> Self {
        let s = self.v + rhs.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fp {
            v: if self.v >= rhs.v {
                self.v - rhs.v
            } else {
                self.v + self.p - rhs.v
            },
            p: self.p,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Fp {
            v: mulmod(self.v, rhs.v, self.p),
            p: self.p,
        }
    }

    fn neg(&self) -> Self {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }

    fn dot(zero: &Self, a: &[Self], b: &[Self]) -> Self {
        // products are below 2^62, so a u128 accumulator cannot overflow
        let mut acc: u128 = 0;
        for (x, y) in a.iter().zip(b) {
            acc += x.v as u128 * y.v as u128;
        }
        Fp {
            v: (acc % zero.p as u128) as u64,
            p: zero.p,
        }
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let t = mulmod(a.v, b.v, self.p);
        *self = Scalar::sub(self, &Fp { v: t, p: self.p });
    }
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Reduction map Z[ζ_n] → F_p sending ζ to a fixed primitive n-th root ω.
#[derive(Clone, Debug)]
pub struct CyclotomicReduction {
    pub n: u32,
    pub p: u64,
    pub omega: u64,
}

impl CyclotomicReduction {
    /// The `index`-th prime p ≡ 1 (mod n) below 2^31, searching downwards,
    /// together with the smallest-generator primitive n-th root of unity.
    pub fn new(n: u32, index: usize) -> CyclotomicReduction {
        let n64 = n as u64;
        let mut p = ((1u64 << 31) / n64) * n64 + 1;
        let mut found = 0;
        loop {
            if p < (1u64 << 31) && is_prime(p) {
                if found == index {
                    break;
                }
                found += 1;
            }
            p -= n64;
        }
        let qs = prime_factors(n64);
        let mut g = 2;
        let omega = loop {
            let w = powmod(g, (p - 1) / n64, p);
            if qs.iter().all(|q| powmod(w, n64 / q, p) != 1) && (n64 > 1 || w == 1) {
                break w;
            }
            g += 1;
        };
        CyclotomicReduction { n, p, omega }
    }

    pub fn one(&self) -> Fp {
        Fp { v: 1, p: self.p }
    }

    fn reduce_int(&self, c: &BigInt) -> u64 {
        let r = c % BigInt::from(self.p);
        let r = if r < BigInt::zero() {
            r + BigInt::from(self.p)
        } else {
            r
        };
        r.to_u64().expect("residue fits in u64")
    }

    /// Image of `x`; fails when p divides the denominator.
    pub fn reduce(&self, x: &CycScalar) -> Result<Fp, ExactError> {
        let den = self.reduce_int(x.denominator());
        if den == 0 {
            return Err(ExactError::BadReduction(self.p));
        }
        let mut acc = 0u64;
        let mut wk = 1u64;
        for c in x.numerators() {
            acc = (acc + mulmod(self.reduce_int(c), wk, self.p)) % self.p;
            wk = mulmod(wk, self.omega, self.p);
        }
        Ok(Fp {
            v: mulmod(acc, powmod(den, self.p - 2, self.p), self.p),
            p: self.p,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::CyclotomicField;

    #[test]
    fn field_axioms_small() {
        let p = 101;
        for a in 0..p as i64 {
            let x = Fp::new(a, p);
            if a != 0 {
                assert!(x.mul(&x.inv().unwrap()).is_one());
            }
            assert!(x.add(&x.neg()).is_zero());
        }
    }

    #[test]
    fn reduction_is_a_ring_map() {
        for n in [3u32, 5, 9] {
            let red = CyclotomicReduction::new(n, 0);
            assert_eq!((red.p - 1) % n as u64, 0);
            assert_eq!(powmod(red.omega, n as u64, red.p), 1);
            let f = CyclotomicField::get(n).unwrap();
            let x = CycScalar::zeta_pow(&f, 1).add(&CycScalar::from_int(&f, 2));
            let y = CycScalar::zeta_pow(&f, 2).sub(&CycScalar::from_int(&f, 5));
            let rx = red.reduce(&x).unwrap();
            let ry = red.reduce(&y).unwrap();
            assert_eq!(red.reduce(&x.mul(&y)).unwrap(), rx.mul(&ry));
            assert_eq!(red.reduce(&x.add(&y)).unwrap(), rx.add(&ry));
            assert_eq!(red.reduce(&x.inv().unwrap()).unwrap(), rx.inv().unwrap());
        }
        let a = CyclotomicReduction::new(3, 0);
        let b = CyclotomicReduction::new(3, 1);
        assert_ne!(a.p, b.p);
    }
}
