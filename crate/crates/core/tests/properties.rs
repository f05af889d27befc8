use brho_core::bterm::{self, flat, BTerm};
use brho_core::canonical::{canonicalize, nodes_seq, seq_to_bterm, tree_of, DegreeSeq};
use brho_core::cycle::{iterate, search, Algorithm, PolyOrbit};
use brho_core::fast_apply::{apply_assign, apply_poly};
use brho_core::lambda::BinTree;
use brho_core::Error;
use proptest::prelude::*;

fn arb_bterm() -> impl Strategy<Value = BTerm> {
    Just(BTerm::B).prop_recursive(6, 24, 2, |inner| {
        (inner.clone(), inner).prop_map(|(f, a)| BTerm::app(f, a))
    })
}

fn arb_seq() -> impl Strategy<Value = DegreeSeq> {
    prop::collection::vec(0u64..8, 1..8).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSeq::from_degrees(&v).unwrap()
    })
}

proptest! {
    #[test]
    fn print_parse_roundtrip(e in arb_bterm(), sugar in any::<bool>()) {
        prop_assert_eq!(bterm::parse(&e.to_text(sugar)).unwrap(), e);
    }

    #[test]
    fn canonical_form_is_a_fixed_point(e in arb_bterm()) {
        let c = canonicalize(&e);
        prop_assert_eq!(canonicalize(&seq_to_bterm(&c)), c.clone());
        let ds = c.to_vec();
        prop_assert!(ds.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn apply_agrees_with_term_application(e1 in arb_bterm(), e2 in arb_bterm()) {
        let direct = canonicalize(&BTerm::app(e1.clone(), e2.clone()));
        prop_assert_eq!(apply_poly(&canonicalize(&e1), &canonicalize(&e2)).unwrap(), direct);
    }

    #[test]
    fn apply_assign_matches_apply(s1 in arb_seq(), s2 in arb_seq()) {
        let mut s = s1.clone();
        apply_assign(&mut s, &s2).unwrap();
        prop_assert_eq!(s, apply_poly(&s1, &s2).unwrap());
    }

    #[test]
    fn nodes_inverts_tree_of(s in arb_seq()) {
        prop_assert_eq!(nodes_seq(&tree_of(&s)).unwrap(), s);
    }

    #[test]
    fn rle_and_expanded_formats_roundtrip(s in arb_seq()) {
        prop_assert_eq!(DegreeSeq::parse_rle(&s.to_rle_string()).unwrap(), s.clone());
        prop_assert_eq!(s.to_string().parse::<DegreeSeq>().unwrap(), s);
    }

    #[test]
    fn iterate_matches_flat_powers(e in arb_bterm(), k in 1usize..12) {
        let streamed = iterate(&e, k as u64).last().unwrap().unwrap();
        prop_assert_eq!(streamed, canonicalize(&flat(&e, k)));
    }

    #[test]
    fn brent_and_floyd_agree(e in arb_bterm()) {
        let base = canonicalize(&e);
        let f = search(&mut PolyOrbit::new(base.clone()), Algorithm::Floyd, 20_000);
        let b = search(&mut PolyOrbit::new(base), Algorithm::Brent, 20_000);
        match (f, b) {
            (Ok(f), Ok(b)) => prop_assert_eq!(f, b),
            (Err(Error::NotFound(_)), Err(Error::NotFound(_))) => {}
            // the two spend their budgets differently near the horizon
            (Err(Error::NotFound(_)), Ok(_)) | (Ok(_), Err(Error::NotFound(_))) => {}
            (f, b) => prop_assert!(false, "{:?} vs {:?}", f, b),
        }
    }

    #[test]
    fn binary_tree_text_roundtrip(n in 1usize..7, pick in any::<prop::sample::Index>()) {
        let trees = BinTree::all_with_leaves(n);
        let t = pick.get(&trees);
        prop_assert_eq!(&t.to_string().parse::<BinTree>().unwrap(), t);
    }
}
