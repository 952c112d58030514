use dhmono::heisenberg::{dh_quotient_abelianized, DihedralElement};
use dhmono::reps::{dihedral_schrodinger_matrix, w_u_matrix, CharOrbit};
use proptest::prelude::*;

fn element(n: u32) -> impl Strategy<Value = DihedralElement> {
    let m = n as i64;
    (prop::bool::ANY, 0..m, 0..m, 0..m)
        .prop_map(move |(r, l, a, al)| DihedralElement::new(n, if r { -1 } else { 1 }, l, a, al))
}

proptest! {
    #[test]
    fn associativity_and_inverses(x in element(7), y in element(7), z in element(7)) {
        let xy_z = x.mul(&y).unwrap().mul(&z).unwrap();
        let x_yz = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert!(x.mul(&x.inverse()).unwrap().is_identity());
        prop_assert!(x.inverse().mul(&x).unwrap().is_identity());
    }

    #[test]
    fn schrodinger_is_a_homomorphism(x in element(5), y in element(5)) {
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(
            dihedral_schrodinger_matrix(&xy),
            dihedral_schrodinger_matrix(&x).mul(&dihedral_schrodinger_matrix(&y))
        );
    }

    #[test]
    fn w_u_is_a_homomorphism(x in element(5), y in element(5), b in 0i64..5, c in 0i64..5) {
        let u = CharOrbit::new(5, b, c);
        prop_assume!(!u.is_trivial());
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(w_u_matrix(&u, &xy), w_u_matrix(&u, &x).mul(&w_u_matrix(&u, &y)));
    }

    #[test]
    fn abelianized_quotient_is_a_homomorphism(x in element(9), y in element(9)) {
        let q = dh_quotient_abelianized(&x.mul(&y).unwrap());
        prop_assert_eq!(q, dh_quotient_abelianized(&x).mul(&dh_quotient_abelianized(&y)));
    }

    #[test]
    fn order_divides_2n(x in element(5)) {
        prop_assert!(x.pow(10).is_identity());
    }
}

#[test]
fn mismatched_orders_are_rejected() {
    let x = DihedralElement::sigma(3);
    let y = DihedralElement::sigma(5);
    assert!(x.mul(&y).is_err());
}
