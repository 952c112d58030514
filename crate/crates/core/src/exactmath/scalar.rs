use std::fmt;

/// Field element interface shared by the exact cyclotomic scalars and the
/// word-sized prime field used to accelerate large rank computations.
///
/// Elements carry their own field context (the cyclotomic order or the
/// prime), so constants are produced relative to an existing element with
/// [`Scalar::zero_like`] and [`Scalar::one_like`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Two-sided inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Scalar::add(self, rhs);
    }

    /// `self -= a * b`, the inner step of every elimination loop.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = Scalar::sub(self, &Scalar::mul(a, b));
    }

    /// Σ a_i b_i over equal-length slices; `zero` fixes the field for empty input.
    fn dot(zero: &Self, a: &[Self], b: &[Self]) -> Self {
        let mut acc = zero.zero_like();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc.add_assign(&x.mul(y));
            }
        }
        acc
    }
}
