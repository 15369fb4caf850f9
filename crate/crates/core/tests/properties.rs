mod support;

use support::*;

#[test]
fn topological_sort_matches_cycle_check() {
    topological_sort_suite(500).unwrap();
}

#[test]
fn mincut_equals_disjoint_paths() {
    menger_suite(300).unwrap();
}

#[test]
fn backends_agree() {
    backend_agreement_suite(200).unwrap();
}

#[test]
fn code_graph_round_trip() {
    code_graph_round_trip_suite(300).unwrap();
}

#[test]
fn labeling_counts_match_brute_force() {
    labeling_brute_force_suite(150).unwrap();
}

#[test]
fn raw_count_is_source_identity_times_gl() {
    raw_vs_source_identity_suite(150).unwrap();
}

#[test]
fn field_axioms_and_frobenius() {
    field_axioms_suite(1000).unwrap();
}

#[test]
fn determinant_and_rank() {
    matrix_suite(300).unwrap();
}
