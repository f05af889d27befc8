mod common;

use brho_core::canonical::nodes_seq;
use brho_core::canonical::{canonicalize, seq_to_bterm};
use brho_core::fast_apply::{apply_poly, compose_decreasing, raise, strip_and_lower};
use brho_core::lambda::lambda_to_tree;
use brho_core::BTerm;
use common::{all_seqs, oracle_nf};

#[test]
fn apply_matches_canonicalized_application() {
    let seqs = all_seqs(4, 4);
    assert_eq!(seqs.len(), 125);
    let terms: Vec<BTerm> = seqs.iter().map(seq_to_bterm).collect();
    for (s1, t1) in seqs.iter().zip(&terms) {
        for (s2, t2) in seqs.iter().zip(&terms) {
            let direct = canonicalize(&BTerm::app(t1.clone(), t2.clone()));
            assert_eq!(apply_poly(s1, s2).unwrap(), direct, "{s1} {s2}");
        }
    }
}

#[test]
fn apply_matches_lambda_oracle() {
    let seqs = all_seqs(3, 3);
    let terms: Vec<BTerm> = seqs.iter().map(seq_to_bterm).collect();
    for (s1, t1) in seqs.iter().zip(&terms) {
        for (s2, t2) in seqs.iter().zip(&terms) {
            let nf = oracle_nf(&BTerm::app(t1.clone(), t2.clone()));
            let from_oracle = nodes_seq(&lambda_to_tree(&nf).unwrap()).unwrap();
            assert_eq!(apply_poly(s1, s2).unwrap(), from_oracle, "{s1} {s2}");
        }
    }
}

#[test]
fn staged_pipeline_agrees_with_fused_apply() {
    for s1 in all_seqs(3, 5) {
        for s2 in all_seqs(3, 5) {
            let staged = strip_and_lower(&compose_decreasing(&s1, &raise(&s2).unwrap()).unwrap());
            assert_eq!(apply_poly(&s1, &s2).unwrap(), staged.unwrap());
        }
    }
}
