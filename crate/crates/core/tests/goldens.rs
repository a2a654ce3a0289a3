//! The computed pencils shipped in `golden/` stay reproducible.

use walg_core::examples;
use walg_core::liealg::derive_subspaces;
use walg_core::lpb::BracketTable;
use walg_core::reduction::{reduce, Method};

const KDV: &str = include_str!("../golden/kdv_pencil.txt");
const FKDV_A_PLUS: &str = include_str!("../golden/fkdv_pencil_a_plus.txt");
const FKDV_A_E21: &str = include_str!("../golden/fkdv_pencil_a_e21.txt");

fn variant(name: &str) -> walg_core::liealg::SetupInputs {
    examples::fkdv_variants()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, i)| i)
        .unwrap()
}

fn check(inp: walg_core::liealg::SetupInputs, golden: &str) {
    let s = derive_subspaces(inp).unwrap();
    let want = BracketTable::parse_text(golden, "q").unwrap();
    for m in Method::ALL {
        let got = reduce(&s, m).unwrap().table("q");
        assert_eq!(got.first_difference(&want), None, "{m}");
        assert_eq!(got.to_text(), golden, "{m}");
    }
}

#[test]
fn kdv_pencil() {
    check(examples::kdv(), KDV);
}

#[test]
fn fkdv_pencil_a_plus() {
    check(variant("g1_lplus_a_plus"), FKDV_A_PLUS);
}

#[test]
fn fkdv_pencil_a_e21() {
    check(variant("g3_a_e21"), FKDV_A_E21);
}

#[test]
fn pencils_share_p2() {
    let a = BracketTable::parse_text(FKDV_A_PLUS, "q").unwrap().to_op().unwrap();
    let b = BracketTable::parse_text(FKDV_A_E21, "q").unwrap().to_op().unwrap();
    let p2 = |op: &walg_core::diffalg::MatDiffOp| op.map_coeffs(|c| c.lam_coeff(0));
    assert_eq!(p2(&a), p2(&b));
    assert_ne!(a, b);
}
