mod common;

use num_traits::ToPrimitive;
use proptest::prelude::*;
use rectcover::boolmat::kronecker;
use rectcover::covers::covering_cost;
use rectcover::exact::{exact_boolean_rank, exact_or2, exact_sum2};
use rectcover::lp::fractional_rank;

/// Pinned slack for comparisons that pass through `log₂`.
const LOG_TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn or2_below_sum2_and_witnesses(a in common::matrix(5, 5, 0.5), seed in any::<u64>()) {
        let or2 = exact_or2(&a).unwrap();
        let sum2 = exact_sum2(&a).unwrap();
        let rank = exact_boolean_rank(&a).unwrap();
        prop_assert!(or2.optimal && sum2.optimal && rank.optimal);
        prop_assert!(or2.value <= sum2.value);
        prop_assert_eq!(covering_cost(&a, &or2.covering).unwrap(), or2.value);
        prop_assert_eq!(covering_cost(&a, &sum2.covering).unwrap(), sum2.value);
        prop_assert!(rectcover::covers::is_partition(&a, &sum2.covering).unwrap());
        prop_assert_eq!(rank.covering.len(), rank.value);
        prop_assert!(rank.value <= or2.covering.len());
        prop_assert!(or2.value <= common::random_covering(&a, seed).cost());
    }

    #[test]
    fn kronecker_rank_within_log_of_fractional(k in common::matrix(3, 3, 0.6), m in common::matrix(2, 3, 0.6)) {
        let p = kronecker(&k, &m).unwrap();
        let star = fractional_rank(&p).unwrap().to_f64().unwrap();
        let rank = exact_boolean_rank(&p).unwrap();
        prop_assert!(rank.optimal);
        let factor = 1.0 + ((p.rows() * p.cols()) as f64).log2();
        prop_assert!(rank.value as f64 / factor <= star + LOG_TOL);
    }
}
