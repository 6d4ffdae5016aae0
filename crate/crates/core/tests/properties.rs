mod common;

use common::props::{self, word_strategy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kappa_is_additive_under_direct_sum(s1 in any::<u64>(), s2 in any::<u64>(), n1 in 1usize..7, n2 in 1usize..7) {
        props::additivity(s1, s2, n1, n2)?;
    }

    #[test]
    fn kappa_is_conjugation_invariant(s in any::<u64>(), n in 2usize..9) {
        props::conjugation(s, n)?;
    }

    #[test]
    fn kappa_is_odd_under_inversion(s in any::<u64>(), n in 1usize..9) {
        props::inversion(s, n)?;
    }

    #[test]
    fn kappa_is_integral_on_special_unitaries(s in any::<u64>(), n in 2usize..11) {
        props::integrality(s, n)?;
    }

    #[test]
    fn exp_of_log_reconstructs(s in any::<u64>(), n in 1usize..11) {
        props::exp_log(s, n)?;
    }

    #[test]
    fn spectral_projection_is_idempotent(s in any::<u64>(), n in 1usize..11) {
        props::projection(s, n)?;
    }

    #[test]
    fn parser_round_trips_display(w in word_strategy()) {
        props::parser_round_trip(w)?;
    }

    #[test]
    fn reduction_properties(w in word_strategy(), v in word_strategy()) {
        props::reduction(w, v)?;
    }

    #[test]
    fn eigenvalues_are_conjugation_invariant(s in any::<u64>(), n in 1usize..9) {
        props::eigen_conjugation(s, n)?;
    }

    #[test]
    fn determinant_is_multiplicative(s1 in any::<u64>(), s2 in any::<u64>(), n in 1usize..9) {
        props::det_multiplicative(s1, s2, n)?;
    }
}
