mod common;

use common::properties as p;

#[test]
fn ring_axioms() {
    p::ring_axioms().unwrap();
}

#[test]
fn float_and_exact_arithmetic_agree() {
    p::float_matches_exact().unwrap();
}

#[test]
fn det_congruence_identity() {
    p::det_congruence_identity().unwrap();
}

#[test]
fn g_tangent_inside_extended_tangent() {
    p::g_inside_ge().unwrap();
}

#[test]
fn codimension_is_invariant_under_the_group() {
    p::codim_invariance().unwrap();
}

#[test]
fn stabilizer_algebra_is_a_module() {
    p::lda_module().unwrap();
}

#[test]
fn stabilizer_algebra_conjugates_with_linear_equivalence() {
    p::lda_conjugation().unwrap();
}
