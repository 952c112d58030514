//! Dehn twists along the loops L_ij acting on twisted homology.
//!
//! With e_a a basis of the fixed space of M_L and e_a* the Q-dual basis
//! inside it, the k-th power of the twist acts by
//!
//!   D^k(x) = x + k Σ_a ⟨x, e_a L⟩ e_a* L,
//!
//! which on the trivial system is the transvection x ↦ x + ⟨x, a⟩ a. For a
//! reflection loop only k = 2 lifts to the local system; the factor comes
//! from (1 + M) applied to the transported coefficient.

use serde_json::{json, Value};
use thiserror::Error;

use crate::curve::{BranchConfig, FixedSpace, MonodromyKind};
use crate::exactmath::{matrix_to_json, CycMatrix, CycScalar, Matrix, Scalar};
use crate::heisenberg::DihedralElement;
use crate::homology::{build_basis, HomologyBasis, HomologyError};
use crate::reps::CharOrbit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("M_({i},{j}) is a rotation; no power of D_({i},{j}) acts on this local system")]
    Rotation { i: usize, j: usize },
    #[error("M_({i},{j}) is a reflection; only the square D_({i},{j})^2 acts")]
    ReflectionNeedsSquare { i: usize, j: usize },
    #[error("power must be 1 or 2, got {0}")]
    BadPower(u32),
    #[error("word and vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// D_ij^power as a matrix acting on coordinate columns.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistOperator {
    pub i: usize,
    pub j: usize,
    pub power: u32,
    pub orbit: CharOrbit,
    pub kind: MonodromyKind,
    pub matrix: CycMatrix,
}

impl TwistOperator {
    /// A = D^power − 1.
    pub fn nilpotent(&self) -> CycMatrix {
        self.matrix
            .sub(&Matrix::identity(self.matrix.rows(), self.matrix.zero_elem()))
    }

    pub fn key(&self) -> String {
        format!("({},{},{},{})", self.i, self.j, self.power, self.orbit)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "i": self.i,
            "j": self.j,
            "power": self.power,
            "orbit": [self.orbit.b, self.orbit.c],
            "matrix": matrix_to_json(&self.matrix),
        })
    }
}

/// Fixed-space basis of M_L and its Q-dual basis.
fn dual_pairs(basis: &HomologyBasis, idx: usize) -> Vec<(Vec<CycScalar>, Vec<CycScalar>)> {
    let ctx = &basis.ctx;
    let z = ctx.zero();
    let one = z.one_like();
    if ctx.u.is_trivial() {
        return vec![(vec![one.clone()], vec![one])];
    }
    match crate::curve::fixed_vector(&ctx.classes[idx]) {
        FixedSpace::WholePlane => vec![
            (vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]),
            (vec![z.clone(), one.clone()], vec![one, z]),
        ],
        FixedSpace::Line(f) => {
            // Q(f, f) = 2 f₀ f₁
            let qff = f[0].mul(&f[1]).add(&f[1].mul(&f[0]));
            let inv = qff.inv().expect("Q is nondegenerate on the fixed line");
            let dual = f.iter().map(|x| x.mul(&inv)).collect();
            vec![(f, dual)]
        }
        FixedSpace::Zero => vec![],
    }
}

/// Matrix of D_ij^power in the coordinates of `basis`.
pub fn dehn_twist_matrix(basis: &HomologyBasis, i: usize, j: usize, power: u32) -> Result<TwistOperator, TwistError> {
    if power != 1 && power != 2 {
        return Err(TwistError::BadPower(power));
    }
    let ctx = &basis.ctx;
    let idx = ctx
        .table
        .loop_index(i, j)
        .ok_or(HomologyError::UnknownLoop(i, j))?;
    let kind = ctx.classes[idx].kind;
    match kind {
        MonodromyKind::Rotation => return Err(TwistError::Rotation { i, j }),
        MonodromyKind::Reflection if power != 2 => {
            return Err(TwistError::ReflectionNeedsSquare { i, j })
        }
        _ => {}
    }
    let d = basis.dim();
    let z = ctx.zero();
    let k = z.from_i64_like(power as i64);
    let mut m = Matrix::identity(d, &z);
    for (e, dual) in dual_pairs(basis, idx) {
        let e_cycle = ctx.cycle(i, j, e)?;
        let dual_cycle = ctx.cycle(i, j, dual)?;
        let col = basis.coords(&dual_cycle);
        // row_t = ⟨b_t, e L⟩
        let row: Vec<CycScalar> = basis
            .basis
            .iter()
            .map(|b| ctx.intersection_pairing(b, &e_cycle))
            .collect();
        for (s, cs) in col.iter().enumerate() {
            if cs.is_zero() {
                continue;
            }
            let cs = cs.mul(&k);
            for (t, rt) in row.iter().enumerate() {
                if !rt.is_zero() {
                    let v = cs.mul(rt);
                    m[(s, t)].add_assign(&v);
                }
            }
        }
    }
    Ok(TwistOperator {
        i,
        j,
        power,
        orbit: ctx.u,
        kind,
        matrix: m,
    })
}

/// The smallest admissible power: 1 for Identity loops, 2 for Reflections.
pub fn primitive_twist(basis: &HomologyBasis, i: usize, j: usize) -> Result<TwistOperator, TwistError> {
    let idx = basis
        .ctx
        .table
        .loop_index(i, j)
        .ok_or(HomologyError::UnknownLoop(i, j))?;
    let power = match basis.ctx.classes[idx].kind {
        MonodromyKind::Identity => 1,
        _ => 2,
    };
    dehn_twist_matrix(basis, i, j, power)
}

/// All squared twists D_ij² with non-rotation monodromy, in (i, j) order.
pub fn admissible_squares(basis: &HomologyBasis) -> Vec<TwistOperator> {
    basis
        .ctx
        .cfg
        .loop_pairs()
        .into_iter()
        .filter_map(|(i, j)| dehn_twist_matrix(basis, i, j, 2).ok())
        .collect()
}

/// Configuration with all passing transformations trivial; on the trivial
/// orbit it models the untwisted hyperelliptic curve of genus g.
pub fn untwisted_config(g: u32) -> BranchConfig {
    let n = 3;
    BranchConfig::custom(g, n, vec![DihedralElement::identity(n); g as usize + 1])
        .expect("g >= 2")
}

/// Twists along a_k = L_{k,k+1}, k = 1..2g+1, on ordinary homology (dim 2g).
pub fn braid_generators(g: u32) -> Result<(HomologyBasis, Vec<TwistOperator>), TwistError> {
    let cfg = untwisted_config(g);
    let basis = build_basis(&cfg, &CharOrbit::trivial(cfg.n))?;
    let ops = (1..=2 * g as usize + 1)
        .map(|k| dehn_twist_matrix(&basis, k, k + 1, 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((basis, ops))
}

/// Letter of a group-algebra word.
#[derive(Clone, Copy, Debug)]
pub enum Letter<'a> {
    /// The twist D^power itself.
    Twist(&'a TwistOperator),
    /// A = D^power − 1.
    Nilpotent(&'a TwistOperator),
}

/// Applies the word right to left: [w₁, …, w_k] acts as w₁ ∘ ⋯ ∘ w_k.
pub fn apply_word(word: &[Letter<'_>], x: &[CycScalar]) -> Result<Vec<CycScalar>, TwistError> {
    let mut v = x.to_vec();
    for letter in word.iter().rev() {
        let op = match letter {
            Letter::Twist(t) | Letter::Nilpotent(t) => t,
        };
        if op.matrix.cols() != v.len() {
            return Err(TwistError::DimensionMismatch(op.matrix.cols(), v.len()));
        }
        let image = op.matrix.mul_vec(&v);
        v = match letter {
            Letter::Twist(_) => image,
            Letter::Nilpotent(_) => image.iter().zip(&v).map(|(a, b)| a.sub(b)).collect(),
        };
    }
    Ok(v)
}

/// Matrix of a word, built from the same right-to-left convention.
pub fn word_matrix(word: &[Letter<'_>], dim: usize, zero: &CycScalar) -> CycMatrix {
    let mut m = Matrix::identity(dim, zero);
    for letter in word {
        let f = match letter {
            Letter::Twist(t) => t.matrix.clone(),
            Letter::Nilpotent(t) => t.nilpotent(),
        };
        m = m.mul(&f);
    }
    m
}

/// Dᵀ G D = G.
pub fn preserves_form(d: &CycMatrix, gram: &CycMatrix) -> bool {
    d.transpose().mul(gram).mul(d) == *gram
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Preset;

    #[test]
    fn braid_relations_g6() {
        let (basis, t) = braid_generators(6).unwrap();
        assert_eq!(basis.dim(), 12);
        for k in 0..t.len() {
            assert!(preserves_form(&t[k].matrix, &basis.gram));
            if k + 1 < t.len() {
                let (a, b) = (&t[k].matrix, &t[k + 1].matrix);
                assert_eq!(a.mul(b).mul(a), b.mul(a).mul(b));
            }
            for l in k + 2..t.len() {
                let (a, b) = (&t[k].matrix, &t[l].matrix);
                assert_eq!(a.mul(b), b.mul(a));
            }
        }
    }

    #[test]
    fn transvection_on_trivial_orbit() {
        let (basis, t) = braid_generators(6).unwrap();
        let ctx = &basis.ctx;
        let one = ctx.zero().one_like();
        let a = ctx.cycle(3, 4, vec![one.clone()]).unwrap();
        let a_coords = basis.coords(&a);
        for (s, b) in basis.basis.iter().enumerate() {
            // T(b) = b + ⟨b, a⟩ a
            let pair = ctx.intersection_pairing(b, &a);
            let mut expected = vec![ctx.zero(); basis.dim()];
            expected[s] = one.clone();
            for (e, c) in expected.iter_mut().zip(&a_coords) {
                e.add_assign(&pair.mul(c));
            }
            assert_eq!(t[2].matrix.column(s), expected);
        }
    }

    #[test]
    fn jordan_ranks_irr() {
        let cfg = BranchConfig::preset(6, 3, Preset::Irr).unwrap();
        let basis = build_basis(&cfg, &CharOrbit::new(3, 1, 0)).unwrap();
        let d211 = dehn_twist_matrix(&basis, 2, 11, 2).unwrap();
        assert_eq!(d211.nilpotent().rank(), 1);
        let d12 = dehn_twist_matrix(&basis, 1, 2, 2).unwrap();
        assert_eq!(d12.nilpotent().rank(), 2);
        assert!(d12.nilpotent().mul(&d12.nilpotent()).is_zero());
        assert_eq!(
            dehn_twist_matrix(&basis, 2, 11, 1),
            Err(TwistError::ReflectionNeedsSquare { i: 2, j: 11 })
        );
        assert_eq!(
            dehn_twist_matrix(&basis, 2, 3, 2),
            Err(TwistError::Rotation { i: 2, j: 3 })
        );
        assert!(preserves_form(&d211.matrix, &basis.gram));
    }

    #[test]
    fn words() {
        let cfg = BranchConfig::preset(6, 3, Preset::Irr).unwrap();
        let basis = build_basis(&cfg, &CharOrbit::new(3, 1, 1)).unwrap();
        let d = dehn_twist_matrix(&basis, 1, 2, 2).unwrap();
        let x: Vec<CycScalar> = (0..basis.dim())
            .map(|k| basis.ctx.zero().from_i64_like(k as i64 - 3))
            .collect();
        assert_eq!(apply_word(&[], &x).unwrap(), x);
        let y = apply_word(&[Letter::Nilpotent(&d), Letter::Nilpotent(&d)], &x).unwrap();
        assert!(y.iter().all(|c| c.is_zero()));
        assert!(apply_word(&[Letter::Twist(&d)], &x[..3]).is_err());
    }
}
