use brho_core::bterm::monomial;
use brho_core::canonical::canonicalize;
use brho_core::cycle::iterate;
use brho_core::cycle::Algorithm;
use brho_core::restricted::{
    find_rho_restricted, find_rho_restricted_with, run_with_big_stack, RTerm, RestrictedOrbit,
};

#[test]
fn quoted_monomial_pairs() {
    for (n, k, c) in [(0, 9, 4), (1, 36, 20), (2, 274, 36)] {
        for alg in [Algorithm::Floyd, Algorithm::Brent] {
            let r = find_rho_restricted_with(&RTerm::monomial(n), alg, 100_000).unwrap();
            assert_eq!((r.entry, r.cycle), (k, c), "B^{n} B with {alg}");
        }
    }
}

#[test]
fn b3_reaches_4267_10063_within_budget() {
    let r = find_rho_restricted(&RTerm::monomial(3), 20_000 * 3).unwrap();
    assert_eq!((r.entry, r.entry + r.cycle), (4267, 10063));
    let equal = run_with_big_stack(|| {
        let p = RestrictedOrbit::new(&RTerm::monomial(3))
            .powers(10063)
            .unwrap();
        p[4266] == p[10062]
    });
    assert!(equal);
}

#[test]
fn restricted_equality_implies_canonical_equality() {
    for n in 0..=2u64 {
        let count = match n {
            0 => 20,
            1 => 80,
            _ => 400,
        };
        let (ids, forms) = run_with_big_stack(move || {
            let ids = RestrictedOrbit::new(&RTerm::monomial(n))
                .powers(count)
                .unwrap();
            let forms: Vec<_> = iterate(&monomial(n), count as u64)
                .map(Result::unwrap)
                .collect();
            (ids, forms)
        });
        for i in 0..count {
            for j in 0..i {
                if ids[i] == ids[j] {
                    assert_eq!(forms[i], forms[j], "B^{n} B at {} and {}", j + 1, i + 1);
                }
            }
        }
    }
}

#[test]
fn restricted_iterates_denote_the_canonical_iterates() {
    let forms: Vec<_> = iterate(&monomial(1), 40).map(Result::unwrap).collect();
    let terms = run_with_big_stack(|| {
        let mut orbit = RestrictedOrbit::new(&RTerm::monomial(1));
        let ids = orbit.powers(40).unwrap();
        ids.iter()
            .map(|&id| orbit.store().get(id))
            .collect::<Vec<_>>()
    });
    for (t, f) in terms.iter().zip(&forms) {
        assert_eq!(&t.to_degree_seq().unwrap(), f);
    }
    assert_eq!(canonicalize(&monomial(1)), forms[0]);
}
