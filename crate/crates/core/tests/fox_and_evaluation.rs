mod common;

use common::{element, word};
use kazlab_core::ring::GroupRingElement;
use kazlab_core::{
    abelian_quotient_relators, fox_derivative, todd_coxeter, GroupRingMatrix, Presentation, Representation, Word,
};
use proptest::prelude::*;

fn quotient_reps() -> Vec<Representation> {
    let f2 = Presentation::free_group(2);
    let s3 = Presentation::parse(&["a", "b"], &["a^2", "b^3", "a*b*a*b"]).unwrap();
    vec![
        Representation::from_coset_table(&todd_coxeter(&f2, &abelian_quotient_relators(2, 3), 100).unwrap(), "Z3^2"),
        Representation::from_coset_table(&todd_coxeter(&s3, &[], 100).unwrap(), "S3"),
    ]
}

proptest! {
    #[test]
    fn fundamental_formula(w in word(3, 10)) {
        // Σ_g (∂w/∂g)(g − 1) = w − 1
        let mut sum = GroupRingElement::zero();
        for g in 0..3 {
            let d = fox_derivative(&w, g, 3).unwrap();
            let g_minus_one = &GroupRingElement::from_word(Word::generator(g)) - &GroupRingElement::one();
            sum = &sum + &(&d * &g_minus_one);
        }
        prop_assert_eq!(sum, &GroupRingElement::from_word(w.clone()) - &GroupRingElement::one());
    }

    #[test]
    fn fox_product_rule(u in word(2, 6), v in word(2, 6)) {
        for g in 0..2 {
            let lhs = fox_derivative(&u.mul(&v), g, 2).unwrap();
            let rhs = &fox_derivative(&u, g, 2).unwrap()
                + &(&GroupRingElement::from_word(u.clone()) * &fox_derivative(&v, g, 2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in element(2, 4, 3), y in element(2, 4, 3)) {
        for rep in quotient_reps() {
            let px = rep.evaluate_element(&x).unwrap();
            let py = rep.evaluate_element(&y).unwrap();
            prop_assert_eq!(rep.evaluate_element(&(&x * &y)).unwrap(), px.mul(&py).unwrap());
            prop_assert_eq!(rep.evaluate_element(&x.involution()).unwrap(), px.transpose());
        }
    }

    #[test]
    fn matrix_evaluation_respects_products(
        a in prop::collection::vec(element(2, 3, 2), 4),
        b in prop::collection::vec(element(2, 3, 2), 2),
    ) {
        let a = GroupRingMatrix::new(2, 2, a).unwrap();
        let b = GroupRingMatrix::new(2, 1, b).unwrap();
        for rep in quotient_reps() {
            let lhs = rep.evaluate(&a.mul(&b).unwrap()).unwrap();
            let rhs = rep.evaluate(&a).unwrap().mul(&rep.evaluate(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(rep.evaluate(&a.adjoint()).unwrap(), rep.evaluate(&a).unwrap().transpose());
        }
    }
}
