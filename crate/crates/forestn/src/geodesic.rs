//! Length descent, geodesic word synthesis, and dead-end elements.
//!
//! The descent step picks, by a fixed priority, a letter that strictly
//! decreases the length; iterating it to the identity and inverting the
//! collected letters yields a minimum-length word.

use crate::forest::{all_letters, ForestDiagram, Letter};
use crate::metric::{self, SpaceLabel};
use crate::word::Word;
use crate::{Error, Result};

/// How left-multiplication by a letter acts on the diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ActionKind {
    PointerMove,
    CaretBuiltTop,
    CaretRemovedTop,
    CaretBuiltBottom,
    CaretRemovedBottom,
}

/// Per-letter outcome of left multiplication: resulting length and action.
#[derive(Clone, Debug)]
pub struct NeighborReport {
    pub entries: Vec<(Letter, u64, ActionKind)>,
}

/// Classifies what a letter does to `d` without applying the full reduction.
pub fn action_kind(d: &ForestDiagram, s: Letter) -> ActionKind {
    if s.index == 0 {
        return ActionKind::PointerMove;
    }
    let pos = d.top_pointer() + s.index - 1;
    if s.inverse {
        let nontrivial = pos < d.top_trees().len() && !d.top_trees()[pos].is_leaf();
        if nontrivial {
            ActionKind::CaretRemovedTop
        } else {
            ActionKind::CaretBuiltBottom
        }
    } else if d.apply_letter(s).bottom_caret_count() < d.bottom_caret_count() {
        ActionKind::CaretRemovedBottom
    } else {
        ActionKind::CaretBuiltTop
    }
}

/// Lengths and action kinds for all 2n letters.
pub fn neighbor_report(d: &ForestDiagram) -> NeighborReport {
    let entries = all_letters(d.arity())
        .into_iter()
        .map(|s| (s, metric::length(&d.apply_letter(s)), action_kind(d, s)))
        .collect();
    NeighborReport { entries }
}

/// A letter whose left multiplication decreases the length by exactly one.
///
/// Priority: a bottom-caret cancellation by some x_i wins; otherwise the
/// first x_i^{-1} whose top-caret removal decreases the length; otherwise
/// whichever of x_0^{±1} decreases. Ties scan i = 1, ..., n-1 in increasing
/// order. A non-identity element always admits a decreasing letter (the
/// inverse of the first letter of any geodesic is one).
pub fn descent_letter(d: &ForestDiagram) -> Result<Letter> {
    if d.is_identity() {
        return Err(Error::IdentityDescent);
    }
    let n = d.arity();
    let len = metric::length(d);
    let check = |s: Letter| -> Letter {
        debug_assert!(
            metric::length(&d.apply_letter(s)) + 1 == len,
            "descent letter {s} failed to decrease length {len}"
        );
        s
    };
    for i in 1..n {
        let s = Letter::gen(i);
        if action_kind(d, s) == ActionKind::CaretRemovedBottom {
            return Ok(check(s));
        }
    }
    for i in 1..n {
        let s = Letter::inv(i);
        if action_kind(d, s) == ActionKind::CaretRemovedTop
            && metric::length(&d.apply_letter(s)) < len
        {
            return Ok(check(s));
        }
    }
    for s in [Letter::gen(0), Letter::inv(0)] {
        if metric::length(&d.apply_letter(s)) < len {
            return Ok(check(s));
        }
    }
    unreachable!("non-identity element {d} has no length-decreasing letter");
}

/// A minimum-length word for `d`: iterated descent to the identity, with the
/// collected letters inverted.
pub fn geodesic_word(d: &ForestDiagram) -> Word {
    let mut current = d.clone();
    let mut letters = Vec::new();
    while !current.is_identity() {
        let s = descent_letter(&current).expect("non-identity element has a descent letter");
        current = current.apply_letter(s);
        letters.push(s.inverted());
    }
    Word::from_letters(letters)
}

/// Dead-end test by exhausting all 2n neighbors.
pub fn is_dead_end_brute(d: &ForestDiagram) -> bool {
    if d.is_identity() {
        return false;
    }
    let len = metric::length(d);
    all_letters(d.arity()).into_iter().all(|s| metric::length(&d.apply_letter(s)) <= len)
}

/// Dead-end test by the structural characterization: every x_i^{-1} removes a
/// top caret, the left space is [L;L], the right space is [R;R], and no
/// x_i^{-1}·d has right space [R;R].
pub fn is_dead_end_structural(d: &ForestDiagram) -> bool {
    if d.is_identity() {
        return false;
    }
    let n = d.arity();
    for i in 1..n {
        if action_kind(d, Letter::inv(i)) != ActionKind::CaretRemovedTop {
            return false;
        }
    }
    let labels = metric::label_spaces(d);
    if labels.at(metric::left_space(d)) != (SpaceLabel::L, SpaceLabel::L) {
        return false;
    }
    if labels.at(metric::right_space(d)) != (SpaceLabel::R, SpaceLabel::R) {
        return false;
    }
    for i in 1..n {
        let e = d.apply_letter(Letter::inv(i));
        let labels = metric::label_spaces(&e);
        if labels.at(metric::right_space(&e)) == (SpaceLabel::R, SpaceLabel::R) {
            return false;
        }
    }
    true
}

/// Depth of a dead end: one less than the length of the shortest word over
/// the 2n letters whose left action strictly increases the length.
pub fn dead_end_depth(d: &ForestDiagram) -> Result<u32> {
    if !is_dead_end_brute(d) {
        return Err(Error::NotDeadEnd);
    }
    let len = metric::length(d);
    let letters = all_letters(d.arity());
    // Frontier of elements w·d for all words w of the current length.
    let mut frontier = vec![d.clone()];
    for k in 1..=3u32 {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for e in &frontier {
            for &s in &letters {
                let f = e.apply_letter(s);
                if metric::length(&f) > len {
                    return Ok(k - 1);
                }
                next.push(f);
            }
        }
        frontier = next;
    }
    unreachable!("every dead end escapes within three letters");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn eval(n: usize, w: &str) -> ForestDiagram {
        ForestDiagram::evaluate_word(n, &w.parse::<Word>().unwrap()).unwrap()
    }

    #[test]
    fn descent_on_generators() {
        assert_eq!(descent_letter(&eval(3, "x1")).unwrap(), Letter::inv(1));
        assert_eq!(descent_letter(&eval(3, "x0^-1")).unwrap(), Letter::gen(0));
        let e = ForestDiagram::identity(3).unwrap();
        assert_eq!(descent_letter(&e), Err(Error::IdentityDescent));
    }

    #[test]
    fn descent_priority_prefers_bottom_cancellation() {
        // A top caret at the pointer opposing nothing, and a bottom caret one
        // slot to the right of where x2 would build: x2 cancels the bottom
        // caret while x1^-1 removes the top caret without decreasing length.
        let d: ForestDiagram = "F(3)\ntop: *(. . .) . . .\nbottom: *. . . (. . .)"
            .parse()
            .unwrap();
        let len = metric::length(&d);
        assert_eq!(
            action_kind(&d, Letter::gen(2)),
            ActionKind::CaretRemovedBottom
        );
        assert_eq!(action_kind(&d, Letter::inv(1)), ActionKind::CaretRemovedTop);
        assert!(metric::length(&d.apply_letter(Letter::inv(1))) >= len);
        assert_eq!(metric::length(&d.apply_letter(Letter::gen(2))), len - 1);
        assert_eq!(descent_letter(&d).unwrap(), Letter::gen(2));
    }

    #[test]
    fn geodesic_word_round_trips() {
        let e = ForestDiagram::identity(3).unwrap();
        assert!(geodesic_word(&e).is_empty());

        let d = eval(4, "x0^-2 x1 x0^2 x2");
        let w = geodesic_word(&d);
        assert_eq!(w.letter_count(), 6);
        assert_eq!(ForestDiagram::evaluate_word(4, &w).unwrap(), d);

        let d = eval(3, "x0^-1 x2 x0^-1 x1^2 x0 x1 x0 x1 x0^-1 x1 x0 x1");
        let w = geodesic_word(&d);
        assert_eq!(w.letter_count(), 13);
        assert_eq!(ForestDiagram::evaluate_word(3, &w).unwrap(), d);
    }

    #[test]
    fn x0_is_not_a_dead_end() {
        let d = eval(3, "x0");
        assert!(!is_dead_end_brute(&d));
        assert!(!is_dead_end_structural(&d));
        assert_eq!(dead_end_depth(&d), Err(Error::NotDeadEnd));
    }

    #[test]
    fn dead_end_exemplars() {
        // F(2): a length-11 dead end (none exist at length <= 7).
        let d: ForestDiagram = "F(2)\ntop: (. .) *(. .) . (. .)\nbottom: . . . *. . . ."
            .parse()
            .unwrap();
        assert_eq!(metric::length(&d), 11);
        assert!(is_dead_end_brute(&d));
        assert!(is_dead_end_structural(&d));
        assert_eq!(dead_end_depth(&d), Ok(2));
        assert_eq!(geodesic_word(&d).letter_count(), 11);

        // F(3): the analogous caret configuration, length 13.
        let d: ForestDiagram =
            "F(3)\ntop: (. . .) *(. . .) (. . .) . . (. . .)\nbottom: . . . . . . . *. . . . . . ."
                .parse()
                .unwrap();
        let len = metric::length(&d);
        assert_eq!(len, 13);
        assert!(is_dead_end_brute(&d));
        assert!(is_dead_end_structural(&d));
        assert_eq!(dead_end_depth(&d), Ok(2));
        // All (n-1)^2 escape words x_i x_j x_0 raise the length by exactly one.
        for i in 1..3 {
            for j in 1..3 {
                let e = d
                    .apply_letter(Letter::gen(0))
                    .apply_letter(Letter::gen(j))
                    .apply_letter(Letter::gen(i));
                assert_eq!(metric::length(&e), len + 1, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn neighbor_report_shape() {
        let d = eval(3, "x1 x0^-1");
        let report = neighbor_report(&d);
        assert_eq!(report.entries.len(), 6);
        let len = metric::length(&d);
        for (s, l, _) in &report.entries {
            assert!(l.abs_diff(len) <= 1, "letter {s} jumped by more than one");
        }
    }
}
