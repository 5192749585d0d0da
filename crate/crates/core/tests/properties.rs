mod common;

use braid_growth::dynnikov::{dynnikov, hash64};
use braid_growth::series::{pade_fit, RationalFn};
use braid_growth::symmetry::{group, map_template, orbit, reduce, SymmetryGroup};
use braid_growth::template::template_of_word;
use braid_growth::words::{pack_letters, unpack_letters, Alphabet, Kind, Word};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Artin), Just(Kind::Dual)]
}

fn word() -> impl Strategy<Value = Word> {
    kind().prop_flat_map(|k| any_word(k, 2..=7, 24))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn packing_round_trips(w in word()) {
        let a = w.alphabet();
        let bytes = pack_letters(a, w.letters());
        prop_assert_eq!(bytes.len(), a.packed_len(w.len()));
        prop_assert_eq!(unpack_letters(a, &bytes, w.len()).unwrap(), w.letters().to_vec());
        prop_assert_eq!(pack_letters(a, &unpack_letters(a, &bytes, w.len()).unwrap()), bytes);
    }

    #[test]
    fn template_is_a_homomorphism(u in word(), k in 0usize..24) {
        let a = u.alphabet();
        let (left, right) = u.letters().split_at(k.min(u.len()));
        let (l, r) = (Word::new(a, left.to_vec()).unwrap(), Word::new(a, right.to_vec()).unwrap());
        let tl = template_of_word(&l);
        let joined = right.iter().fold(tl, |t, &x| t.extend(a, x));
        prop_assert_eq!(joined, template_of_word(&l.concat(&r)));
    }

    #[test]
    fn equal_braids_share_templates_and_hashes(u in word()) {
        let a = u.alphabet();
        // Insert a cancelling pair anywhere; the braid is unchanged.
        let mut letters = u.letters().to_vec();
        let at = letters.len() / 2;
        letters.splice(at..at, [0, a.inverse(0)]);
        let v = Word::new(a, letters).unwrap();
        prop_assert_eq!(dynnikov(&u).unwrap(), dynnikov(&v).unwrap());
        prop_assert_eq!(hash64(&dynnikov(&u).unwrap()), hash64(&dynnikov(&v).unwrap()));
        prop_assert_eq!(template_of_word(&u), template_of_word(&v));
    }

    #[test]
    fn reduce_is_idempotent_and_minimal(w in word()) {
        let a = w.alphabet();
        let t = template_of_word(&w);
        let (r, g) = reduce(a, &t);
        prop_assert_eq!(map_template(g, a.kind(), &t).unwrap(), r.clone());
        prop_assert_eq!(reduce(a, &r).0, r.clone());
        let members = orbit(a, &t);
        prop_assert_eq!(members.iter().min().unwrap(), &r);
        prop_assert!(SymmetryGroup::new(a).is_reduced(&r));
        prop_assert_eq!(orbit(a, &r), members);
    }

    #[test]
    fn group_elements_invert(w in word()) {
        let a = w.alphabet();
        let t = template_of_word(&w);
        for g in group(a) {
            let image = map_template(g, a.kind(), &t).unwrap();
            prop_assert_eq!(map_template(g.inverse(a.strands()), a.kind(), &image).unwrap(), t.clone());
        }
    }

    #[test]
    fn maps_preserve_length_and_omega(w in word()) {
        let a = w.alphabet();
        let w = w.with_omega(17);
        for g in group(a) {
            let image = braid_growth::symmetry::map_word(g, &w).unwrap();
            prop_assert_eq!(image.len(), w.len());
            prop_assert_eq!(image.omega, 17);
        }
    }
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 0..=max_deg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pade_recovers_rational_functions(num in small_poly(3), den_tail in small_poly(3)) {
        let mut num = num;
        num.insert(0, 1);
        let mut den = vec![1];
        den.extend(den_tail);
        let r = RationalFn::from_i64(&num, &den).unwrap();
        let (dn, dd) = r.degrees();
        let coeffs = r.expand(dn + dd + 8).unwrap().coeffs;
        let fitted = pade_fit(&coeffs, dn, dd).unwrap();
        prop_assert_eq!(fitted.as_ref(), Some(&r));
        let again = fitted.unwrap().expand(coeffs.len()).unwrap().coeffs;
        prop_assert_eq!(again, coeffs);
    }

    #[test]
    fn canonical_form_ignores_scaling(num in small_poly(3), den_tail in small_poly(3), k in 1i64..50) {
        let mut den = vec![1];
        den.extend(den_tail);
        let r = RationalFn::from_i64(&num, &den).unwrap();
        let scaled: Vec<i64> = num.iter().map(|c| -k * c).collect();
        let sden: Vec<i64> = den.iter().map(|c| -k * c).collect();
        prop_assert_eq!(RationalFn::from_i64(&scaled, &sden).unwrap(), r.clone());
        prop_assert!(r.den()[0] > BigInt::from(0));
    }

    #[test]
    fn fit_is_stable_under_longer_windows(num in small_poly(2), den_tail in small_poly(2), extra in 0usize..6) {
        let mut den = vec![1];
        den.extend(den_tail);
        let r = RationalFn::from_i64(&num, &den).unwrap();
        let (dn, dd) = r.degrees();
        let short = r.expand(dn + dd + 5).unwrap().coeffs;
        let long = r.expand(dn + dd + 5 + extra).unwrap().coeffs;
        prop_assert_eq!(pade_fit(&short, dn, dd).unwrap(), pade_fit(&long, dn, dd).unwrap());
    }
}

#[test]
fn far_commutation_contexts() {
    relation_invariance(Kind::Artin, Relation::Far, 500).unwrap();
    relation_invariance(Kind::Dual, Relation::Far, 500).unwrap();
}

#[test]
fn dual_letters_hash_like_their_spelling() {
    let d = Alphabet::dual(5).unwrap();
    for x in d.letters() {
        let w = Word::new(d, vec![x]).unwrap();
        let spelled = braid_growth::words::dual_to_artin(&w).unwrap();
        assert_eq!(dynnikov(&w).unwrap(), dynnikov(&spelled).unwrap());
    }
}
