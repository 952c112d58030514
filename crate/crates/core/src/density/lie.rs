//! Lie algebra closure inside sp(V, G) and the Killing form.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::exactmath::{Matrix, Scalar};
use crate::homology::Echelon;

use super::DensityError;

/// How a basis element of the closure was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketWord {
    Generator(usize),
    /// [generator, element]
    Bracket(usize, usize),
}

/// Basis of the Lie algebra generated by a set of matrices.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis<T: Scalar> {
    pub ambient: usize,
    /// Linearly independent elements in discovery order.
    pub elements: Vec<Matrix<T>>,
    pub words: Vec<BracketWord>,
    pub generated_from: Vec<String>,
    echelon: Echelon<T>,
    /// Whether bracket closure was checked pairwise; it is implied when the
    /// algebra fills sp(V).
    pub closure_verified: bool,
}

pub fn sp_dimension(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn bracket<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Matrix<T> {
    x.mul(y).sub(&y.mul(x))
}

/// Xᵀ G + G X = 0.
pub fn in_sp<T: Scalar>(x: &Matrix<T>, gram: &Matrix<T>) -> bool {
    x.transpose().mul(gram).add(&gram.mul(x)).is_zero()
}

fn flatten<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    m.to_rows().into_iter().flatten().collect()
}

fn unflatten<T: Scalar>(v: &[T], d: usize, zero: &T) -> Matrix<T> {
    Matrix::from_fn(d, d, zero, |i, j| v[i * d + j].clone())
}

impl<T: Scalar> LieAlgebraBasis<T> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn is_full_sp(&self) -> bool {
        self.dim() == sp_dimension(self.ambient)
    }

    pub fn contains(&self, x: &Matrix<T>) -> bool {
        self.echelon.contains(flatten(x))
    }

    /// Reduced echelon basis: coordinates of a member are its entries at the pivots.
    pub fn echelon_basis(&self) -> Vec<Matrix<T>> {
        let z = self.elements[0].zero_elem();
        self.echelon
            .rows()
            .iter()
            .map(|r| unflatten(r, self.ambient, z))
            .collect()
    }

    fn coords(&self, x: &Matrix<T>) -> Vec<T> {
        let v = flatten(x);
        self.echelon.pivots().iter().map(|&p| v[p].clone()).collect()
    }

    /// Gram matrix of tr(ad X ad Y) on the echelon basis.
    pub fn killing_form(&self) -> Matrix<T> {
        let basis = self.echelon_basis();
        let m = basis.len();
        let z = basis[0].zero_elem().clone();
        // ad[a] stored row-major: ad[a][e * m + b] = coefficient of B_e in [B_a, B_b]
        let ads: Vec<Vec<T>> = (0..m)
            .into_par_iter()
            .map(|a| {
                let mut ad = vec![z.clone(); m * m];
                for b in 0..m {
                    for (e, c) in self.coords(&bracket(&basis[a], &basis[b])).into_iter().enumerate() {
                        ad[e * m + b] = c;
                    }
                }
                ad
            })
            .collect();
        let ads_t: Vec<Vec<T>> = ads
            .par_iter()
            .map(|ad| {
                let mut t = vec![z.clone(); m * m];
                for e in 0..m {
                    for b in 0..m {
                        t[b * m + e] = ad[e * m + b].clone();
                    }
                }
                t
            })
            .collect();
        let rows: Vec<Vec<T>> = (0..m)
            .into_par_iter()
            .map(|a| (0..m).map(|b| T::dot(&z, &ads[a], &ads_t[b])).collect())
            .collect();
        Matrix::from_rows(rows, &z)
    }
}

/// Lie algebra generated by `generators`, each checked to lie in sp(V, gram).
///
/// Breadth-first: every new element is bracketed with every generator, in
/// generator order, so the result is deterministic. Right-normed brackets of
/// generators span the generated algebra, so this reaches all of it. The
/// search stops as soon as the dimension of sp(V) is reached.
pub fn lie_closure<T: Scalar>(
    generators: &[Matrix<T>],
    gram: &Matrix<T>,
    names: Vec<String>,
) -> Result<LieAlgebraBasis<T>, DensityError> {
    let d = gram.rows();
    for (k, g) in generators.iter().enumerate() {
        if g.rows() != d || g.cols() != d {
            return Err(DensityError::Dimension(format!(
                "generator {k} is {}x{}, form is {d}x{d}",
                g.rows(),
                g.cols()
            )));
        }
        if !in_sp(g, gram) {
            return Err(DensityError::NotSymplectic(k));
        }
    }
    let mut out = LieAlgebraBasis {
        ambient: d,
        elements: Vec::new(),
        words: Vec::new(),
        generated_from: names,
        echelon: Echelon::new(),
        closure_verified: false,
    };
    let target = sp_dimension(d);
    let mut queue = VecDeque::new();
    for (k, g) in generators.iter().enumerate() {
        if out.echelon.insert(flatten(g)) {
            queue.push_back(out.elements.len());
            out.elements.push(g.clone());
            out.words.push(BracketWord::Generator(k));
        }
    }
    while let Some(e) = queue.pop_front() {
        if out.dim() == target {
            break;
        }
        let x = out.elements[e].clone();
        let brackets: Vec<Matrix<T>> = generators.par_iter().map(|g| bracket(g, &x)).collect();
        for (k, b) in brackets.into_iter().enumerate() {
            if out.echelon.insert(flatten(&b)) {
                queue.push_back(out.elements.len());
                out.elements.push(b);
                out.words.push(BracketWord::Bracket(k, e));
                if out.dim() == target {
                    break;
                }
            }
        }
    }
    if out.dim() == target {
        out.closure_verified = true;
    } else if !out.elements.is_empty() {
        let basis = out.elements.clone();
        let ok = (0..basis.len()).into_par_iter().all(|a| {
            (a + 1..basis.len()).all(|b| out.contains(&bracket(&basis[a], &basis[b])))
        });
        if !ok {
            return Err(DensityError::NotClosed);
        }
        out.closure_verified = true;
    } else {
        out.closure_verified = true;
    }
    Ok(out)
}

/// The standard basis of sp(2) with respect to [[0, 1], [−1, 0]].
pub fn sl2_basis<T: Scalar>(zero: &T) -> (Vec<Matrix<T>>, Matrix<T>) {
    let o = zero.one_like();
    let z = zero.clone();
    let m = |r: [[i64; 2]; 2]| {
        Matrix::from_fn(2, 2, zero, |i, j| z.from_i64_like(r[i][j]))
    };
    let gram = Matrix::from_rows(
        vec![vec![z.clone(), o.clone()], vec![o.neg(), z.clone()]],
        zero,
    );
    (
        vec![m([[0, 1], [0, 0]]), m([[0, 0], [1, 0]]), m([[1, 0], [0, -1]])],
        gram,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{CycScalar, CyclotomicField, Fp};

    #[test]
    fn sl2_closure_and_killing() {
        let f = CyclotomicField::get(3).unwrap();
        let z = CycScalar::zero(&f);
        let (gens, gram) = sl2_basis(&z);
        let l = lie_closure(&gens[..2], &gram, vec![]).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(l.is_full_sp());
        let k = l.killing_form();
        assert!(!k.det().is_zero());
        assert!(l.elements.iter().all(|x| x.trace().is_zero()));
    }

    #[test]
    fn abelian_algebra_has_degenerate_killing_form() {
        let z = Fp::new(0, 101);
        let (gens, gram) = sl2_basis(&z);
        let l = lie_closure(&gens[..1], &gram, vec![]).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(l.killing_form().is_zero());
    }

    #[test]
    fn rejects_non_symplectic() {
        let z = Fp::new(0, 101);
        let (_, gram) = sl2_basis(&z);
        let id = Matrix::identity(2, &z);
        assert_eq!(
            lie_closure(&[id], &gram, vec![]).unwrap_err(),
            DensityError::NotSymplectic(0)
        );
    }
}
