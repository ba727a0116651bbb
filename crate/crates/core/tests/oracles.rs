mod common;

use maclane::abgroup::{self_bimodule, RingTable};
use maclane::hochschild::{hml_range, TotalOptions};
use maclane::qcomplex::DEFAULT_BUDGET;

fn hml_strings(n: u64, k: usize, options: TotalOptions) -> Vec<String> {
    let r = RingTable::cyclic(n).unwrap();
    hml_range(&r, &self_bimodule(&r), k, DEFAULT_BUDGET, options)
        .unwrap()
        .iter()
        .map(ToString::to_string)
        .collect()
}

#[test]
fn dense_oracle_f2() {
    let dense = common::dense_hml(2, 3);
    assert_eq!(dense, ["Z/2", "0", "Z/2", "0"]);
    assert_eq!(hml_strings(2, 3, TotalOptions::default()), dense);
}

#[test]
fn dense_oracle_f3() {
    let dense = common::dense_hml(3, 2);
    assert_eq!(dense, ["Z/3", "0", "Z/3"]);
    assert_eq!(hml_strings(3, 2, TotalOptions::default()), dense);
}

#[test]
fn dense_oracle_f5_low_degrees() {
    assert_eq!(
        hml_strings(5, 1, TotalOptions::default()),
        common::dense_hml(5, 1)
    );
}

#[test]
fn normalized_matches_unnormalized() {
    for n in [2, 3] {
        assert_eq!(
            hml_strings(n, 2, TotalOptions { normalized: true }),
            hml_strings(n, 2, TotalOptions::default())
        );
    }
}

#[test]
fn delta_squared() {
    common::delta_squared().unwrap();
}

#[test]
fn n_stability() {
    common::n_stability().unwrap();
}

#[test]
fn leibniz_rule() {
    common::leibniz().unwrap();
}

#[test]
fn dixmier_associativity() {
    common::associativity().unwrap();
}

#[test]
fn augmentation_is_monoidal() {
    common::augmentation_monoidal().unwrap();
}

#[test]
fn total_differential_squares_to_zero() {
    common::total_d_squared().unwrap();
}

#[test]
fn simplicial_identities() {
    common::simplicial_identities().unwrap();
}

#[test]
fn minors_oracle_known_values() {
    use num_bigint::BigInt;
    let f = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(
        common::invariant_factors_by_minors(&[vec![2, 4], vec![6, 8]]),
        f(&[2, 4])
    );
    assert_eq!(
        common::invariant_factors_by_minors(&[vec![2, 0], vec![0, 3]]),
        f(&[1, 6])
    );
    assert_eq!(common::invariant_factors_by_minors(&[vec![0, 0]]), f(&[]));
}
