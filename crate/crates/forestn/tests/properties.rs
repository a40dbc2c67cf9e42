//! Randomized properties over words and diagrams.

use forestn::forest::{ForestDiagram, Letter};
use forestn::word::Word;
use forestn::{geodesic, metric, plmap};
use proptest::prelude::*;

/// An arity together with a random word over its 2n letters.
fn arity_and_word() -> impl Strategy<Value = (usize, Word)> {
    (2usize..=5).prop_flat_map(|n| {
        let letter = (0..n, any::<bool>()).prop_map(
            |(i, inverse)| {
                if inverse {
                    Letter::inv(i)
                } else {
                    Letter::gen(i)
                }
            },
        );
        (Just(n), prop::collection::vec(letter, 0..14).prop_map(Word::from_letters))
    })
}

fn inverse_word(w: &Word) -> Word {
    Word::from_letters(w.letters().iter().rev().map(|s| s.inverted()).collect())
}

proptest! {
    #[test]
    fn word_text_round_trips((n, w) in arity_and_word()) {
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(&back, &w);
        prop_assert!(back.validate(n).is_ok());
    }

    #[test]
    fn canonical_key_round_trips((n, w) in arity_and_word()) {
        let d = ForestDiagram::evaluate_word(n, &w).unwrap();
        let back: ForestDiagram = d.canonical_key().parse().unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn letters_undo((n, w) in arity_and_word()) {
        let d = ForestDiagram::evaluate_word(n, &w).unwrap();
        for s in forestn::forest::all_letters(n) {
            prop_assert_eq!(d.apply_letter(s).apply_letter(s.inverted()), d.clone());
        }
    }

    #[test]
    fn inverse_by_word_matches_invert((n, w) in arity_and_word()) {
        let d = ForestDiagram::evaluate_word(n, &w).unwrap();
        let di = ForestDiagram::evaluate_word(n, &inverse_word(&w)).unwrap();
        prop_assert_eq!(&di, &d.invert());
        prop_assert!(d.multiply(&di).unwrap().is_identity());
    }

    #[test]
    fn concatenation_is_multiplication((n, a) in arity_and_word(), b in prop::collection::vec((0usize..2, any::<bool>()), 0..10)) {
        // Reuse a's arity for b by clamping indices.
        let b = Word::from_letters(
            b.into_iter()
                .map(|(i, inv)| if inv { Letter::inv(i % n) } else { Letter::gen(i % n) })
                .collect(),
        );
        let mut joined = a.letters().to_vec();
        joined.extend_from_slice(b.letters());
        let da = ForestDiagram::evaluate_word(n, &a).unwrap();
        let db = ForestDiagram::evaluate_word(n, &b).unwrap();
        let joined = ForestDiagram::evaluate_word(n, &Word::from_letters(joined)).unwrap();
        prop_assert_eq!(joined, da.multiply(&db).unwrap());
    }

    #[test]
    fn length_is_a_norm((n, w) in arity_and_word()) {
        let d = ForestDiagram::evaluate_word(n, &w).unwrap();
        let len = metric::length(&d);
        prop_assert!(len <= w.letter_count() as u64);
        prop_assert_eq!(len == 0, d.is_identity());
        prop_assert_eq!(len, metric::length(&d.invert()));
    }

    #[test]
    fn geodesic_attains_the_length((n, w) in arity_and_word()) {
        let d = ForestDiagram::evaluate_word(n, &w).unwrap();
        let g = geodesic::geodesic_word(&d);
        prop_assert_eq!(g.letter_count() as u64, metric::length(&d));
        prop_assert_eq!(ForestDiagram::evaluate_word(n, &g).unwrap(), d);
    }

    #[test]
    fn pl_realization_is_exact((n, w) in arity_and_word()) {
        let d = ForestDiagram::evaluate_word(n, &w).unwrap();
        let map = plmap::diagram_to_plmap(&d);
        prop_assert!(map.check_membership().is_ok());
        prop_assert_eq!(plmap::diagram_to_plmap(&d.invert()), map.invert());
        prop_assert_eq!(map.compose(&map.invert()), plmap::PLMap::identity(n as u32));
    }
}
