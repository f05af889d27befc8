mod common;

use brho_core::canonical::{canonicalize, equivalent_bterms, seq_to_bterm};
use brho_core::BTerm;
use common::{all_up_to, oracle_nf, random_bterm};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn exhaustive_pairs_up_to_seven_leaves() {
    let terms = all_up_to(7);
    assert_eq!(terms.len(), 197);
    let nfs: Vec<_> = terms.iter().map(oracle_nf).collect();
    let mut mismatches = Vec::new();
    let mut equal_pairs = 0;
    for (i, e1) in terms.iter().enumerate() {
        for (j, e2) in terms.iter().enumerate() {
            let oracle = nfs[i] == nfs[j];
            equal_pairs += usize::from(oracle);
            if equivalent_bterms(e1, e2) != oracle {
                mismatches.push((e1.to_string(), e2.to_string()));
            }
        }
    }
    assert!(
        mismatches.is_empty(),
        "{:?}",
        &mismatches[..mismatches.len().min(5)]
    );
    assert!(
        equal_pairs > terms.len(),
        "the sample has non-trivial equalities"
    );
}

#[test]
fn random_pairs_up_to_twelve_leaves() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut positives = 0;
    for _ in 0..10_000 {
        let e1 = {
            let n = rng.gen_range(1..=12);
            random_bterm(&mut rng, n)
        };
        // half the pairs are equal by construction, via the canonical form's term
        let e2 = if rng.gen_bool(0.5) {
            {
                let n = rng.gen_range(1..=12);
                random_bterm(&mut rng, n)
            }
        } else {
            seq_to_bterm(&canonicalize(&e1))
        };
        let oracle = oracle_nf(&e1) == oracle_nf(&e2);
        positives += usize::from(oracle);
        assert_eq!(equivalent_bterms(&e1, &e2), oracle, "{e1} vs {e2}");
    }
    assert!(positives >= 4_000);
}

#[test]
fn canonical_term_is_oracle_equal_to_input() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..2_000 {
        let e = {
            let n = rng.gen_range(1..=14);
            random_bterm(&mut rng, n)
        };
        let c: BTerm = seq_to_bterm(&canonicalize(&e));
        assert_eq!(oracle_nf(&c), oracle_nf(&e), "{e}");
    }
}
