//! Algebraic identities of the differential-polynomial layer, checked on
//! random inputs.

use proptest::prelude::*;

use walg_core::diffalg::{
    frechet_derivative, parse_poly, render_poly, variational_derivative, DiffPoly,
    LinDiffOp, LocalFunctional, MatDiffOp,
};
use walg_core::examples;
use walg_core::liealg::derive_subspaces;
use walg_core::lpb::{bracket, BracketTable};
use walg_core::rational::q;
use walg_core::reduction::{reduce, Method};

const FIELDS: usize = 2;

fn monomial() -> impl Strategy<Value = DiffPoly> {
    (
        -4i64..=4,
        prop::collection::vec((0..FIELDS, 0usize..3), 0..3),
    )
        .prop_map(|(c, vars)| {
            vars.into_iter()
                .fold(DiffPoly::int(c), |acc, (f, k)| &acc * &DiffPoly::var(f, k))
        })
}

fn poly() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec(monomial(), 0..4)
        .prop_map(|ms| ms.into_iter().fold(DiffPoly::zero(), |a, m| &a + &m))
}

fn poly_with_params() -> impl Strategy<Value = DiffPoly> {
    (poly(), poly(), poly()).prop_map(|(a, b, c)| {
        &(&a + &(&b * &DiffPoly::lam())) + &(&c * &DiffPoly::eps())
    })
}

fn lin_op() -> impl Strategy<Value = LinDiffOp> {
    prop::collection::vec(poly(), 0..4).prop_map(LinDiffOp::from_coeffs)
}

fn mat_op() -> impl Strategy<Value = MatDiffOp> {
    prop::collection::vec(lin_op(), 4).prop_map(|es| {
        MatDiffOp::from_fn(2, 2, |i, j| es[2 * i + j].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_kills_total_derivatives(p in poly()) {
        let dp = p.total_derivative();
        for f in 0..FIELDS {
            prop_assert!(variational_derivative(&dp, f).is_zero());
        }
    }

    #[test]
    fn total_derivative_is_a_derivation(a in poly(), b in poly()) {
        let lhs = (&a * &b).total_derivative();
        let rhs = &(&a.total_derivative() * &b) + &(&a * &b.total_derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_is_an_involution(a in lin_op()) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn adjoint_reverses_composition(a in lin_op(), b in lin_op()) {
        prop_assert_eq!(a.compose(&b).adjoint(), b.adjoint().compose(&a.adjoint()));
    }

    #[test]
    fn composition_is_associative(a in lin_op(), b in lin_op(), c in lin_op()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_acts_as_application(a in lin_op(), b in lin_op(), v in poly()) {
        prop_assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
    }

    #[test]
    fn adjoint_pairing(a in lin_op(), u in poly(), v in poly()) {
        // ∫ u A(v) = ∫ A*(u) v
        let lhs = &u * &a.apply(&v);
        let rhs = &a.adjoint().apply(&u) * &v;
        prop_assert!(LocalFunctional::new(lhs).functional_eq(&LocalFunctional::new(rhs)));
    }

    #[test]
    fn matrix_adjoint_reverses_composition(a in mat_op(), b in mat_op()) {
        let lhs = a.compose(&b).unwrap().adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn skew_part_is_skew(a in mat_op()) {
        let s = a.try_sub(&a.adjoint()).unwrap();
        prop_assert!(s.is_skew_adjoint());
    }

    #[test]
    fn frechet_commutes_with_derivative(p in poly(), r in poly()) {
        // D(∂q) = ∂ ∘ D(q)
        let qs = vec![p.clone(), r.clone()];
        let dqs: Vec<DiffPoly> = qs.iter().map(DiffPoly::total_derivative).collect();
        let lhs = frechet_derivative(&dqs, FIELDS);
        let d = MatDiffOp::from_fn(2, 2, |i, j| if i == j { LinDiffOp::d(1) } else { LinDiffOp::zero() });
        let rhs = d.compose(&frechet_derivative(&qs, FIELDS)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frechet_chain_rule(p in poly(), a in poly(), b in poly()) {
        // D(p ∘ r) = D(p)|_r ∘ D(r)
        let r = vec![a, b];
        let composed = vec![p.substitute(&r)];
        let lhs = frechet_derivative(&composed, FIELDS);
        let outer = frechet_derivative(std::slice::from_ref(&p), FIELDS)
            .map_coeffs(|c| c.substitute(&r));
        let rhs = outer.compose(&frechet_derivative(&r, FIELDS)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_round_trip(p in poly_with_params()) {
        prop_assert_eq!(parse_poly(&render_poly(&p, "u"), "u").unwrap(), p);
    }

    #[test]
    fn table_round_trip(a in mat_op()) {
        let s = a.try_sub(&a.adjoint()).unwrap();
        let t = BracketTable::from_op(&s, "q");
        let back = BracketTable::parse_text(&t.to_text(), "q").unwrap();
        prop_assert_eq!(back.to_op().unwrap(), s);
    }
}

fn fkdv_p2() -> MatDiffOp {
    let s = derive_subspaces(examples::fkdv()).unwrap();
    reduce(&s, Method::Tensor).unwrap().p2()
}

fn slice_poly() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec(
        (-3i64..=3, prop::collection::vec((0usize..4, 0usize..2), 1..3)),
        1..3,
    )
    .prop_map(|ms| {
        ms.into_iter().fold(DiffPoly::zero(), |acc, (c, vars)| {
            let m = vars
                .into_iter()
                .fold(DiffPoly::constant(q(c)), |a, (f, k)| &a * &DiffPoly::var(f, k));
            &acc + &m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_bracket_is_antisymmetric(f in slice_poly(), g in slice_poly()) {
        let p = fkdv_p2();
        let fg = bracket(&p, &LocalFunctional::new(f.clone()), &LocalFunctional::new(g.clone())).unwrap();
        let gf = bracket(&p, &LocalFunctional::new(g), &LocalFunctional::new(f)).unwrap();
        prop_assert!(LocalFunctional::new(&fg.density + &gf.density).is_trivial());
    }
}
