use dgs_core::criterion::{Analysis, VerdictKind};
use dgs_core::{parse_adjacency_text, Budget, SquarefreeStatus};
use num_bigint::BigInt;

fn golden_graph() -> dgs_core::Graph {
    parse_adjacency_text(include_str!("data/golden_n20.txt")).unwrap()
}

fn golden_b() -> BigInt {
    BigInt::from(7 * 11 * 383 * 210857u64) * "231734663160530708115251000501057".parse::<BigInt>().unwrap()
}

#[test]
fn walk_determinant() {
    let a = Analysis::new(&golden_graph(), &Budget::default()).unwrap();
    assert_eq!(a.det(), &(-(BigInt::from(1) << 13usize) * golden_b()));
}

#[test]
fn outside_fn_but_extended_holds() {
    let g = golden_graph();
    let mut a = Analysis::new(&g, &Budget::default()).unwrap();
    assert_eq!(a.check_fn().kind, VerdictKind::CriterionInconclusive);
    let v = a.certify();
    assert_eq!(v.kind, VerdictKind::DgsByExtended);
    assert!(v.failed.is_empty());
    let sf = v.evidence.squarefree.as_ref().unwrap();
    assert_eq!(sf.status, SquarefreeStatus::SquareFree);
}

#[test]
fn smith_form_text() {
    let mut a = Analysis::new(&golden_graph(), &Budget::default()).unwrap();
    let (shape, b) = a.snf().shape();
    assert_eq!(shape, "1×10, 2×7, 4, 4, 4b");
    assert_eq!(b, golden_b());
}
