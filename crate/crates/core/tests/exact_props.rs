use dhmono::exactmath::{CycMatrix, CycScalar, CyclotomicField, CyclotomicReduction, Matrix, Poly, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn scalar(n: u32) -> impl Strategy<Value = CycScalar> {
    let f = CyclotomicField::get(n).unwrap();
    let d = f.degree();
    (prop::collection::vec(-20i64..=20, d), 1i64..=6).prop_map(move |(nums, den)| {
        let coeffs: Vec<BigRational> = nums
            .iter()
            .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(den)))
            .collect();
        CycScalar::from_coeffs(&f, &coeffs)
    })
}

fn matrix(n: u32, d: usize) -> impl Strategy<Value = CycMatrix> {
    prop::collection::vec(scalar(n), d * d).prop_map(move |v| {
        let z = v[0].zero_like();
        Matrix::from_fn(d, d, &z, |i, j| v[i * d + j].clone())
    })
}

proptest! {
    #[test]
    fn field_axioms_q_zeta_15(a in scalar(15), b in scalar(15), c in scalar(15)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn reduction_mod_p_is_a_ring_map(a in scalar(5), b in scalar(5)) {
        let red = CyclotomicReduction::new(5, 0);
        let (ra, rb) = (red.reduce(&a).unwrap(), red.reduce(&b).unwrap());
        prop_assert_eq!(red.reduce(&a.mul(&b)).unwrap(), ra.mul(&rb));
        prop_assert_eq!(red.reduce(&a.sub(&b)).unwrap(), ra.sub(&rb));
    }

    #[test]
    fn inverse_and_determinant(m in matrix(3, 3)) {
        let det = m.det();
        match m.inverse() {
            Some(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert!(m.mul(&inv).is_identity());
                prop_assert_eq!(m.rank(), 3);
            }
            None => prop_assert!(det.is_zero()),
        }
    }

    #[test]
    fn rank_nullity(m in matrix(5, 3)) {
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.len(), 3);
        for v in k {
            prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn cayley_hamilton(m in matrix(3, 3)) {
        let chi = Poly::charpoly(&m);
        let z = m.zero_elem().clone();
        let mut acc = Matrix::zeros(3, 3, &z);
        for c in chi.coeffs().iter().rev() {
            acc = acc.mul(&m).add(&Matrix::identity(3, &z).scale(c));
        }
        prop_assert!(acc.is_zero());
    }
}
