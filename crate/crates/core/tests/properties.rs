use proptest::prelude::*;

use pdaforge::coloring::ColoringStrategy;
use pdaforge::construct::{closed_form, construct_pda, PartitionKind};
use pdaforge::pda::{parse, serialize};
use pdaforge::qvec::enumerate_space;
use pdaforge::{CellCap, QVec};

fn small_params() -> impl Strategy<Value = (u8, usize, usize)> {
    (2u8..=4, 2usize..=4).prop_flat_map(|(q, m)| (Just(q), Just(m), 1..m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trivial_partition_is_always_a_pda((q, m, omega) in small_params()) {
        let p = construct_pda(q, m, omega, PartitionKind::Trivial, CellCap::DEFAULT).unwrap();
        prop_assert!(p.verify_c1().is_ok());
        prop_assert!(p.verify_c2().is_ok());
    }

    #[test]
    fn primary_partitions_meet_closed_forms(q in 2u8..=3, m in 2usize..=5, pick in 0usize..16) {
        let omega = 1 + pick % (m - 1);
        let p = construct_pda(q, m, omega, PartitionKind::Primary, CellCap::DEFAULT).unwrap();
        let params = p.scheme_params().unwrap();
        prop_assert!(closed_form(q, m, omega).unwrap().mismatches(&params).is_empty());
    }

    #[test]
    fn improved_never_exceeds_primary(q in 2u8..=3, m in 3usize..=6, pick in 0usize..16) {
        let omega = 1 + pick % (m - 1);
        let feasible = if q == 2 { m > 2 * omega } else { 2 * m > 3 * omega };
        prop_assume!(feasible && (q as u64).pow(m as u32) <= 729);
        let improved = construct_pda(q, m, omega, PartitionKind::Improved(ColoringStrategy::Auto), CellCap::DEFAULT).unwrap();
        let primary = construct_pda(q, m, omega, PartitionKind::Primary, CellCap::DEFAULT).unwrap();
        prop_assert!(improved.verify_c1().is_ok());
        prop_assert!(improved.symbol_count() <= primary.symbol_count());
    }

    #[test]
    fn text_format_round_trips((q, m, omega) in small_params()) {
        let p = construct_pda(q, m, omega, PartitionKind::Trivial, CellCap::DEFAULT).unwrap();
        let text = serialize(&p);
        prop_assert_eq!(parse(&text).unwrap(), p);
    }

    #[test]
    fn distance_is_symmetric_and_translation_invariant(q in 2u8..=5, m in 1usize..=6, seed in any::<u64>()) {
        let space = enumerate_space(q, m, CellCap::DEFAULT).unwrap();
        let n = space.len() as u64;
        let pick = |i: u64| &space[((seed.wrapping_mul(6364136223846793005).wrapping_add(i)) % n) as usize];
        let (a, b, c) = (pick(1), pick(2 * n / 3 + 1), pick(n / 2 + 7));
        let d = |x: &QVec, y: &QVec| x.hamming_distance(y).unwrap();
        prop_assert_eq!(d(a, b), d(b, a));
        prop_assert_eq!(d(a, b), d(&a.add_mod(c).unwrap(), &b.add_mod(c).unwrap()));
        prop_assert_eq!(d(a, b), a.sub_mod(b).unwrap().weight());
    }
}
