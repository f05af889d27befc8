mod common;

use brho_core::antirho::{
    check_general_condition, check_monotone, check_recurrences, default_window, example_term,
    in_example_t, in_tkn, lemma_discrepancies, orbit_stats, orbit_stats_oracle, TknSpec,
};
use common::random_bterm;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn closure_monotonicity_and_no_repeats() {
    for k in 0..=2 {
        for n in 1..=2 {
            let spec = TknSpec::new(k, n);
            let r = check_recurrences(spec, 150).unwrap();
            assert!(r.get("iterates in T_(k,n)").unwrap().holds, "{r}");
            assert!(r.get("l recurrence").unwrap().holds, "{r}");
            assert!(r.get("a recurrence").unwrap().holds, "{r}");
            let m = check_monotone(&spec.z(), 150, spec.window()).unwrap();
            assert!(m.get("l non-decreasing").unwrap().holds, "{m}");
            assert!(m.get("l increases within N1 depth").unwrap().holds, "{m}");
            assert!(m.get("no repeated iterate").unwrap().holds, "{m}");
            let g = check_general_condition(&spec.z(), |t| in_tkn(t, spec), 150).unwrap();
            assert!(g.all_hold(), "{g}");
        }
    }
}

#[test]
fn worked_example_stays_in_its_set() {
    let x = example_term();
    let m = check_monotone(&x, 100, default_window(&x).unwrap()).unwrap();
    assert!(m.get("no repeated iterate").unwrap().holds, "{m}");
    assert!(m.get("l non-decreasing").unwrap().holds, "{m}");
    let g = check_general_condition(&x, in_example_t, 100).unwrap();
    assert!(g.all_hold(), "{g}");
}

#[test]
fn tree_statistics_match_oracle_on_small_orbits() {
    for spec in [
        TknSpec::new(0, 1),
        TknSpec::new(0, 2),
        TknSpec::new(1, 1),
        TknSpec::new(2, 1),
    ] {
        let z = spec.z();
        assert_eq!(
            orbit_stats(&z, 10).unwrap(),
            orbit_stats_oracle(&z, 10).unwrap()
        );
    }
}

#[test]
fn head_statistics_lemma_on_random_pairs() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut failures = Vec::new();
    for _ in 0..2_000 {
        let x = {
            let n = rng.gen_range(1..=10);
            random_bterm(&mut rng, n)
        };
        let y = {
            let n = rng.gen_range(1..=10);
            random_bterm(&mut rng, n)
        };
        let bad = lemma_discrepancies(&x, &y).unwrap();
        if !bad.is_empty() {
            failures.push(format!("{x} | {y}: {bad:?}"));
        }
    }
    assert!(
        failures.is_empty(),
        "{} discrepancies, e.g. {:?}",
        failures.len(),
        &failures[..3.min(failures.len())]
    );
}
