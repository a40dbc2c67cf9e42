//! Space numbering, marked-space classification, L/N/R/I labelling, the
//! weight table, and the word-length formula ℓ = ℓ₀ + ℓ₁.
//!
//! Gaps between adjacent leaf columns are indexed relative to the top pointer:
//! gap 0 is immediately left of the top pointer tree, positive gaps run right.
//! A gap is *marked* when its index is a multiple of n-1. Only marked gaps in
//! the support of the diagram are labelled and weighted.

use std::collections::{BTreeMap, BTreeSet};

use crate::forest::{ForestDiagram, NaryTree};
use crate::{Error, Result};

/// Which forest of the diagram a per-side query refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Top,
    Bottom,
}

/// Classification of a gap on one side.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GapClass {
    /// The gap lies between two trees (or outside the window).
    Exterior,
    /// The gap separates two leaves of the same tree. The enclosing caret is
    /// the deepest caret whose i-th / (i+1)-st child boundary the gap sits on.
    Interior {
        tree: usize,
        path: Vec<usize>,
        /// 1-based position: the gap is between leaves i and i+1 of the caret.
        position: usize,
    },
}

/// Per-side label of a marked space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum SpaceLabel {
    L,
    N,
    R,
    I,
    Unlabelled,
}

impl std::fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpaceLabel::L => "L",
            SpaceLabel::N => "N",
            SpaceLabel::R => "R",
            SpaceLabel::I => "I",
            SpaceLabel::Unlabelled => "-",
        };
        write!(f, "{s}")
    }
}

/// Labels of all marked gaps in the support, top and bottom, with the weight
/// each gap contributes to ℓ₀.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpaceLabelling {
    entries: BTreeMap<i64, (SpaceLabel, SpaceLabel, u32)>,
}

impl SpaceLabelling {
    /// (gap, top label, bottom label, weight) in increasing gap order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, SpaceLabel, SpaceLabel, u32)> + '_ {
        self.entries.iter().map(|(g, (t, b, w))| (*g, *t, *b, *w))
    }

    /// Labels at a marked gap; `Unlabelled` outside the support.
    pub fn at(&self, gap: i64) -> (SpaceLabel, SpaceLabel) {
        self.entries
            .get(&gap)
            .map(|(t, b, _)| (*t, *b))
            .unwrap_or((SpaceLabel::Unlabelled, SpaceLabel::Unlabelled))
    }

    /// Sum of weights over all labelled gaps.
    pub fn total_weight(&self) -> u64 {
        self.entries.values().map(|(_, _, w)| *w as u64).sum()
    }
}

/// Weight of a labelled marked space; rows are bottom labels, columns top.
pub fn weight(top: SpaceLabel, bottom: SpaceLabel) -> Result<u32> {
    const TABLE: [[u32; 4]; 4] = [
        // top:  L  N  R  I      bottom:
        [2, 1, 1, 1], // L
        [1, 2, 2, 2], // N
        [1, 2, 2, 0], // R
        [1, 2, 0, 0], // I
    ];
    let idx = |l: SpaceLabel| match l {
        SpaceLabel::L => Ok(0usize),
        SpaceLabel::N => Ok(1),
        SpaceLabel::R => Ok(2),
        SpaceLabel::I => Ok(3),
        SpaceLabel::Unlabelled => Err(Error::UnlabelledWeight),
    };
    Ok(TABLE[idx(bottom)?][idx(top)?])
}

fn forest_of(d: &ForestDiagram, side: Side) -> &[NaryTree] {
    match side {
        Side::Top => d.top_trees(),
        Side::Bottom => d.bottom_trees(),
    }
}

/// Column boundary of a gap: the gap lies between columns c-1 and c.
fn gap_boundary(d: &ForestDiagram, gap: i64) -> i64 {
    d.top_pointer_col() as i64 + gap
}

pub fn is_marked(d: &ForestDiagram, gap: i64) -> bool {
    gap.rem_euclid(d.arity() as i64 - 1) == 0
}

/// Whether the gap separates two leaves of one tree on the given side, and if
/// so which caret encloses it.
pub fn classify_gap(d: &ForestDiagram, side: Side, gap: i64) -> GapClass {
    let c = gap_boundary(d, gap);
    let forest = forest_of(d, side);
    if c <= 0 {
        return GapClass::Exterior;
    }
    let mut start = 0i64;
    for (ti, tree) in forest.iter().enumerate() {
        let lc = tree.leaf_count() as i64;
        if c < start + lc {
            if c == start {
                return GapClass::Exterior;
            }
            let (path, position) = enclosing_caret(tree, (c - start) as usize);
            return GapClass::Interior { tree: ti, path, position };
        }
        start += lc;
    }
    GapClass::Exterior
}

/// Descends to the deepest caret whose child boundary the local gap sits on.
/// `boundary` is strictly between 0 and the tree's leaf count.
fn enclosing_caret(tree: &NaryTree, boundary: usize) -> (Vec<usize>, usize) {
    let mut path = Vec::new();
    let mut node = tree;
    let mut b = boundary;
    loop {
        let children = match node {
            NaryTree::Node(c) => c,
            NaryTree::Leaf => unreachable!("interior gap inside a leaf"),
        };
        let mut acc = 0usize;
        let mut descended = false;
        for (k, child) in children.iter().enumerate() {
            let lc = child.leaf_count();
            if b == acc + lc && k + 1 < children.len() {
                return (path, k + 1);
            }
            if b < acc + lc {
                path.push(k);
                node = child;
                b -= acc;
                descended = true;
                break;
            }
            acc += lc;
        }
        debug_assert!(descended, "boundary outside node span");
    }
}

/// Column spans (first column, last column) of the feature trees: both pointer
/// trees and every nontrivial tree of either forest.
fn feature_spans(d: &ForestDiagram) -> Vec<(i64, i64)> {
    let mut spans = Vec::new();
    for (side, ptr) in [(Side::Top, d.top_pointer()), (Side::Bottom, d.bottom_pointer())] {
        let forest = forest_of(d, side);
        let mut start = 0i64;
        for (i, tree) in forest.iter().enumerate() {
            let lc = tree.leaf_count() as i64;
            if i == ptr || !tree.is_leaf() {
                spans.push((start, start + lc - 1));
            }
            start += lc;
        }
    }
    spans
}

/// The marked gaps in the support: interior to some tree on either side, or
/// flanked by a feature strictly left and a feature strictly right.
pub fn support(d: &ForestDiagram) -> BTreeSet<i64> {
    let spans = feature_spans(d);
    let min_end = spans.iter().map(|s| s.1).min().expect("pointer features always exist");
    let max_start = spans.iter().map(|s| s.0).max().expect("pointer features always exist");
    let c0 = d.top_pointer_col() as i64;
    let cols = d.total_columns() as i64;
    let mut out = BTreeSet::new();
    for c in 1..cols {
        let g = c - c0;
        if !is_marked(d, g) {
            continue;
        }
        let flanked = min_end < c && c <= max_start;
        if flanked
            || matches!(classify_gap(d, Side::Top, g), GapClass::Interior { .. })
            || matches!(classify_gap(d, Side::Bottom, g), GapClass::Interior { .. })
        {
            out.insert(g);
        }
    }
    out
}

/// Gap immediately left of the pointer tree of a side.
fn pointer_gap(d: &ForestDiagram, side: Side) -> i64 {
    match side {
        Side::Top => 0,
        Side::Bottom => d.bottom_pointer_col() as i64 - d.top_pointer_col() as i64,
    }
}

/// Column spans (first, last) of every caret subtree of a forest, including
/// nested ones.
fn caret_spans(forest: &[NaryTree]) -> Vec<(i64, i64)> {
    fn walk(node: &NaryTree, col: i64, out: &mut Vec<(i64, i64)>) -> i64 {
        match node {
            NaryTree::Leaf => col + 1,
            NaryTree::Node(children) => {
                let mut c = col;
                for child in children {
                    c = walk(child, c, out);
                }
                out.push((col, c - 1));
                c
            }
        }
    }
    let mut out = Vec::new();
    let mut col = 0;
    for t in forest {
        col = walk(t, col, &mut out);
    }
    out
}

/// Column span of the subtree rooted at the caret enclosing the gap, per side.
fn enclosing_span(d: &ForestDiagram, side: Side, gap: i64) -> Option<(i64, i64)> {
    let GapClass::Interior { tree, path, .. } = classify_gap(d, side, gap) else {
        return None;
    };
    let forest = forest_of(d, side);
    let mut start: i64 = forest[..tree].iter().map(|t| t.leaf_count() as i64).sum();
    let mut node = &forest[tree];
    for &k in &path {
        let children = match node {
            NaryTree::Node(c) => c,
            NaryTree::Leaf => unreachable!(),
        };
        start += children[..k].iter().map(|c| c.leaf_count() as i64).sum::<i64>();
        node = &children[k];
    }
    Some((start, start + node.leaf_count() as i64 - 1))
}

/// Whether the marked gap `g` must be crossed to build a caret spanning
/// columns `span`: true unless some enclosing caret of the gap, on either
/// side, lies entirely clear of the span. (A clear enclosing caret lets the
/// construction reach the build site without the pointer passing the gap —
/// either by standing on it, or because it inserted the gap's columns after
/// the caret was built.)
fn gap_is_necessary_for(d: &ForestDiagram, g: i64, span: (i64, i64)) -> bool {
    for side in [Side::Top, Side::Bottom] {
        if let Some((p, q)) = enclosing_span(d, side, g) {
            if q < span.0 || span.1 < p {
                return false;
            }
        }
    }
    true
}

fn label_side(d: &ForestDiagram, side: Side, gaps: &BTreeSet<i64>) -> BTreeMap<i64, SpaceLabel> {
    let m = d.arity() as i64 - 1;
    let c0 = d.top_pointer_col() as i64;
    let ptr_gap = pointer_gap(d, side);

    // Rule N(a): for each caret of this side, the rightmost marked gap at or
    // left of its leftmost leaf, when exterior on this side and necessary for
    // building that caret.
    let mut n_eligible = BTreeSet::new();
    for span in caret_spans(forest_of(d, side)) {
        let v = span.0 - c0;
        let g = v - v.rem_euclid(m);
        if classify_gap(d, side, g) == GapClass::Exterior && gap_is_necessary_for(d, g, span) {
            n_eligible.insert(g);
        }
    }

    let mut out = BTreeMap::new();
    for &g in gaps {
        let label = match classify_gap(d, side, g) {
            GapClass::Exterior => {
                if g <= ptr_gap {
                    SpaceLabel::L
                } else if n_eligible.contains(&g) {
                    SpaceLabel::N
                } else {
                    SpaceLabel::R
                }
            }
            GapClass::Interior { tree, path, position } => {
                // Rule N(b): the enclosing caret has a caret child attached
                // strictly right of the gap, and the gap is necessary for
                // building that child.
                let forest = forest_of(d, side);
                let mut start: i64 =
                    forest[..tree].iter().map(|t| t.leaf_count() as i64).sum();
                let mut node = &forest[tree];
                for &k in &path {
                    let children = match node {
                        NaryTree::Node(c) => c,
                        NaryTree::Leaf => unreachable!(),
                    };
                    start +=
                        children[..k].iter().map(|c| c.leaf_count() as i64).sum::<i64>();
                    node = &children[k];
                }
                let children = match node {
                    NaryTree::Node(c) => c,
                    NaryTree::Leaf => unreachable!(),
                };
                let mut child_start = start;
                let mut label = SpaceLabel::I;
                for (j, child) in children.iter().enumerate() {
                    let lc = child.leaf_count() as i64;
                    if j >= position
                        && !child.is_leaf()
                        && gap_is_necessary_for(d, g, (child_start, child_start + lc - 1))
                    {
                        label = SpaceLabel::N;
                        break;
                    }
                    child_start += lc;
                }
                label
            }
        };
        out.insert(g, label);
    }
    out
}

/// Labels every marked gap in the support, each side independently.
pub fn label_spaces(d: &ForestDiagram) -> SpaceLabelling {
    let gaps = support(d);
    let top = label_side(d, Side::Top, &gaps);
    let bottom = label_side(d, Side::Bottom, &gaps);
    let entries = gaps
        .iter()
        .map(|&g| {
            let (t, b) = (top[&g], bottom[&g]);
            let w = weight(t, b).expect("support gaps are labelled");
            (g, (t, b, w))
        })
        .collect();
    SpaceLabelling { entries }
}

/// (ℓ₀, ℓ₁): sum of weights over labelled marked gaps, and total caret count.
pub fn length_parts(d: &ForestDiagram) -> (u64, u64) {
    (label_spaces(d).total_weight(), d.caret_count() as u64)
}

/// Word length ℓ(d) = ℓ₀ + ℓ₁ with respect to {x_0, ..., x_{n-1}}.
pub fn length(d: &ForestDiagram) -> u64 {
    let (l0, l1) = length_parts(d);
    l0 + l1
}

/// The rightmost exterior marked gap at or left of the current tree.
pub fn left_space(d: &ForestDiagram) -> i64 {
    let m = d.arity() as i64 - 1;
    let mut g = 0;
    while classify_gap(d, Side::Top, g) != GapClass::Exterior {
        g -= m;
    }
    g
}

/// The leftmost exterior marked gap right of the current tree.
pub fn right_space(d: &ForestDiagram) -> i64 {
    let m = d.arity() as i64 - 1;
    let lc = d.top_trees()[d.top_pointer()].leaf_count() as i64;
    let mut g = lc + (-lc).rem_euclid(m);
    while classify_gap(d, Side::Top, g) != GapClass::Exterior {
        g += m;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn eval(n: usize, w: &str) -> ForestDiagram {
        ForestDiagram::evaluate_word(n, &w.parse::<Word>().unwrap()).unwrap()
    }

    #[test]
    fn identity_has_empty_support_and_zero_length() {
        let e = ForestDiagram::identity(3).unwrap();
        assert!(support(&e).is_empty());
        assert_eq!(length(&e), 0);
    }

    #[test]
    fn generators_have_length_one() {
        for n in 2..=5 {
            for i in 0..n {
                let w = format!("x{i}");
                assert_eq!(length(&eval(n, &w)), 1, "x{i} in F({n})");
                let w = format!("x{i}^-1");
                assert_eq!(length(&eval(n, &w)), 1, "x{i}^-1 in F({n})");
            }
        }
    }

    #[test]
    fn classify_gap_examples() {
        let x1 = eval(3, "x1");
        assert_eq!(
            classify_gap(&x1, Side::Top, 2),
            GapClass::Interior { tree: 0, path: vec![], position: 2 }
        );
        assert_eq!(classify_gap(&x1, Side::Bottom, 2), GapClass::Exterior);
        let x0 = eval(3, "x0");
        assert_eq!(classify_gap(&x0, Side::Top, 0), GapClass::Exterior);
        assert_eq!(classify_gap(&x0, Side::Bottom, 0), GapClass::Exterior);
    }

    #[test]
    fn support_examples() {
        let x0 = eval(3, "x0");
        assert_eq!(support(&x0).into_iter().collect::<Vec<_>>(), vec![0]);
        let x1 = eval(3, "x1");
        assert_eq!(support(&x1).into_iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn label_examples() {
        let x0 = eval(3, "x0");
        let lab = label_spaces(&x0);
        assert_eq!(lab.at(0), (SpaceLabel::L, SpaceLabel::R));
        assert_eq!(weight(SpaceLabel::L, SpaceLabel::R).unwrap(), 1);

        let d = eval(3, "x0^-1 x1");
        let lab = label_spaces(&d);
        assert_eq!(lab.at(2), (SpaceLabel::N, SpaceLabel::L));
        assert_eq!(lab.at(4), (SpaceLabel::I, SpaceLabel::R));
        assert_eq!(length(&d), 2);
    }

    #[test]
    fn weight_table_is_symmetric() {
        use SpaceLabel::*;
        for a in [L, N, R, I] {
            for b in [L, N, R, I] {
                assert_eq!(weight(a, b).unwrap(), weight(b, a).unwrap());
            }
        }
        assert_eq!(weight(L, L).unwrap(), 2);
        assert_eq!(weight(R, I).unwrap(), 0);
        assert_eq!(weight(Unlabelled, L), Err(Error::UnlabelledWeight));
    }

    #[test]
    fn worked_length_examples() {
        let d = eval(4, "x0^-2 x1 x0^2 x2");
        assert_eq!(length_parts(&d), (4, 2));

        let d = eval(4, "x0^-1 x1^-1 x0^-2 x1 x3 x0^-1 x1^-1 x0^2 x1 x3^-1 x2^-1 x0^2");
        assert_eq!(length_parts(&d), (8, 7));

        let d = eval(5, "x0 x1^-1 x0 x1^-1 x0 x4 x0^-1 x4 x0^-2");
        assert_eq!(length_parts(&d), (6, 4));

        let d = eval(
            3,
            "x0^-1 x1^2 x0^-2 x1 x0 x1^-2 x0 x2^-1 x0^4 x1^-1 x0 x1 x2 x0^-1 x1 x0 x1^-1 x0^-1 x1^-2",
        );
        assert_eq!(length_parts(&d), (13, 13));

        let d = eval(3, "x0^-1 x2 x0^-1 x1^2 x0 x1 x0 x1 x0^-1 x1 x0 x1");
        assert_eq!(length(&d), 13);
    }

    #[test]
    fn length_is_symmetric_under_inversion() {
        for w in ["x0", "x1 x0^-1", "x2^-1 x1 x0", "x0^-1 x2 x0^-1 x1^2 x0 x1"] {
            let d = eval(3, w);
            assert_eq!(length(&d), length(&d.invert()), "word {w}");
        }
    }

    #[test]
    #[ignore = "broad oracle sweep; the default suite certifies smaller balls"]
    fn length_formula_matches_bfs_on_medium_balls() {
        for (n, r) in [(2usize, 8u32), (3, 6), (4, 4), (5, 3)] {
            let ball = crate::oracle::enumerate_ball(n, r, 2_000_000).unwrap();
            let mut sample = None;
            let mut mismatches = 0usize;
            for (d, dist) in ball.interior() {
                let f = length(d);
                if f != *dist as u64 {
                    mismatches += 1;
                    if sample.is_none() {
                        sample = Some((d.canonical_key(), *dist, f));
                    }
                }
            }
            assert_eq!(mismatches, 0, "n={n} r={r}, sample {sample:?}");
        }
    }

    #[test]
    fn sided_spaces() {
        let x1 = eval(3, "x1");
        assert_eq!(left_space(&x1), 0);
        assert_eq!(right_space(&x1), 4);
        let e = ForestDiagram::identity(3).unwrap();
        assert_eq!(left_space(&e), 0);
        assert_eq!(right_space(&e), 2);
    }
}
