//! Univariate polynomials over an exact field.

use super::{Matrix, Scalar};

/// Coefficients from constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
    zero: T,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>, zero: &T) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            zero: zero.zero_like(),
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                Poly::new(self.coeffs.iter().map(|c| c.mul(&inv)).collect(), &self.zero)
            }
        }
    }

    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let linv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let f = r[top].mul(&linv);
            if !f.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[top - dd + i].sub_mul_assign(&f, dc);
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r, &self.zero)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier.
    /// Requires the field characteristic to exceed the matrix size.
    pub fn charpoly(a: &Matrix<T>) -> Self {
        assert!(a.is_square());
        let n = a.rows();
        let zero = a.zero_elem().clone();
        let mut c = vec![zero.clone(); n + 1];
        c[n] = zero.one_like();
        let ident = Matrix::identity(n, &zero);
        let mut m = Matrix::zeros(n, n, &zero);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = a.mul(&m).add(&ident.scale(&c[n - k + 1]));
            let am = a.mul(&m);
            let kk = zero.from_i64_like(k as i64);
            c[n - k] = am.trace().neg().div(&kk).expect("characteristic too small");
        }
        Poly::new(c, &zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Fp;

    #[test]
    fn charpoly_and_gcd() {
        let p = 1_000_003;
        let e = |v: i64| Fp::new(v, p);
        let a = Matrix::from_rows(vec![vec![e(2), e(1)], vec![e(1), e(2)]], &e(0));
        let cp = Poly::charpoly(&a);
        assert_eq!(cp.coeffs(), &[e(3), e(-4), e(1)]);
        assert!(cp.eval(&e(1)).is_zero());
        let lin = Poly::new(vec![e(-3), e(1)], &e(0));
        assert_eq!(cp.gcd(&lin), lin);
        let other = Poly::new(vec![e(5), e(1)], &e(0));
        assert_eq!(cp.gcd(&other).degree(), Some(0));
    }
}
