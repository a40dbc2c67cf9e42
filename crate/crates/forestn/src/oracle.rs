//! Brute-force certification: breadth-first search over the Cayley graph,
//! exact distance tables, and cross-validation of the length formula and the
//! descent/dead-end propositions.
//!
//! Only interior elements (distance < radius) are used for certification,
//! since boundary distances could be shortened outside the ball.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::forest::{all_letters, ForestDiagram};
use crate::geodesic::{self, ActionKind};
use crate::metric::{self, SpaceLabel};
use crate::{Error, Result};

/// All elements within a given word-metric radius of a start element, with
/// exact distances.
#[derive(Debug)]
pub struct Ball {
    n: usize,
    radius: u32,
    elements: Vec<(ForestDiagram, u32)>,
    index: HashMap<String, usize>,
}

impl Ball {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in breadth-first order (distances non-decreasing).
    pub fn elements(&self) -> &[(ForestDiagram, u32)] {
        &self.elements
    }

    /// Elements with distance strictly below the radius; their BFS distance
    /// is the exact word length.
    pub fn interior(&self) -> impl Iterator<Item = &(ForestDiagram, u32)> {
        self.elements.iter().filter(move |(_, dist)| *dist < self.radius)
    }

    pub fn distance_of(&self, d: &ForestDiagram) -> Option<u32> {
        self.index.get(&d.canonical_key()).map(|&i| self.elements[i].1)
    }

    pub fn sphere_count(&self, r: u32) -> usize {
        self.elements.iter().filter(|(_, dist)| *dist == r).count()
    }
}

/// BFS over all 2n letters from an arbitrary start element.
pub fn bfs_from(start: &ForestDiagram, radius: u32, cap: usize) -> Result<Ball> {
    let n = start.arity();
    let letters = all_letters(n);
    let mut elements = vec![(start.clone(), 0u32)];
    let mut index = HashMap::new();
    index.insert(start.canonical_key(), 0usize);
    let mut frontier_start = 0;
    for dist in 1..=radius {
        let frontier_end = elements.len();
        for i in frontier_start..frontier_end {
            let d = elements[i].0.clone();
            for &s in &letters {
                let e = d.apply_letter(s);
                let key = e.canonical_key();
                if let std::collections::hash_map::Entry::Vacant(v) = index.entry(key) {
                    if elements.len() >= cap {
                        return Err(Error::BallCapExceeded { cap });
                    }
                    v.insert(elements.len());
                    elements.push((e, dist));
                }
            }
        }
        frontier_start = frontier_end;
    }
    Ok(Ball { n, radius, elements, index })
}

/// Default element cap for ball enumeration.
pub const DEFAULT_CAP: usize = 2_000_000;

/// BFS ball around the identity; distances are exact word lengths in the
/// generating set {x_0, ..., x_{n-1}}.
pub fn enumerate_ball(n: usize, radius: u32, cap: usize) -> Result<Ball> {
    bfs_from(&ForestDiagram::identity(n)?, radius, cap)
}

/// Exact word length of `target` by bidirectional BFS: enumerate a ball
/// around the identity and one around the target, and take the minimum
/// distance sum over the intersection. Returns `None` if the two balls do
/// not meet (distance exceeds `r_from_identity + r_from_target`).
pub fn distance_bidirectional(
    target: &ForestDiagram,
    r_from_identity: u32,
    r_from_target: u32,
    cap: usize,
) -> Result<Option<u32>> {
    let near = enumerate_ball(target.arity(), r_from_identity, cap)?;
    let far = bfs_from(target, r_from_target, cap)?;
    // far holds elements w·target at distance |w|; d(target, x) = |w| when
    // x = w·target, so the sum of layers over a common element bounds (and at
    // the optimum equals) the distance from the identity to the target.
    let mut best = None;
    for (d, dist_far) in far.elements() {
        if let Some(dist_near) = near.distance_of(d) {
            let total = dist_near + dist_far;
            if best.is_none_or(|b| total < b) {
                best = Some(total);
            }
        }
    }
    Ok(best)
}

#[derive(Serialize, Clone, Debug)]
pub struct Mismatch {
    pub key: String,
    pub bfs_distance: u32,
    pub formula_length: u64,
}

/// Outcome of checking the length formula against BFS distances.
#[derive(Serialize, Clone, Debug)]
pub struct LengthReport {
    pub arity: usize,
    pub radius: u32,
    pub elements: usize,
    pub interior_checked: usize,
    pub counts_per_radius: Vec<usize>,
    pub mismatches: Vec<Mismatch>,
}

impl LengthReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Asserts formula length = BFS distance on every interior element.
pub fn certify_length(ball: &Ball) -> LengthReport {
    let mut counts = vec![0usize; ball.radius() as usize + 1];
    for (_, dist) in ball.elements() {
        counts[*dist as usize] += 1;
    }
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (d, dist) in ball.interior() {
        checked += 1;
        let len = metric::length(d);
        if len != *dist as u64 {
            mismatches.push(Mismatch {
                key: d.canonical_key(),
                bfs_distance: *dist,
                formula_length: len,
            });
        }
    }
    LengthReport {
        arity: ball.arity(),
        radius: ball.radius(),
        elements: ball.len(),
        interior_checked: checked,
        counts_per_radius: counts,
        mismatches,
    }
}

const MAX_REPORTED: usize = 20;

/// Violation tallies for the length-function conditions and the per-letter
/// propositions, over the interior of a ball.
#[derive(Serialize, Clone, Debug)]
pub struct LemmaReport {
    pub arity: usize,
    pub radius: u32,
    pub interior_checked: usize,
    /// ℓ(e) = 0.
    pub identity_length: u64,
    /// |ℓ(s·d) - ℓ(d)| ≤ 1 for every letter.
    pub step_violations: usize,
    /// The descent procedure's letter strictly decreases the length.
    pub descent_violations: usize,
    /// x_0^{±1} changes the length by exactly ±1.
    pub x0_violations: usize,
    /// A bottom-caret cancellation by x_i decreases the length by one.
    pub bottom_cancel_violations: usize,
    /// A bottom-caret creation by x_i^{-1} increases the length by one.
    pub bottom_build_violations: usize,
    /// A right space labelled [R;R] forces every caret-building x_i to
    /// decrease the length. (The converse fails: a build can also absorb a
    /// weighted space to the pointer's right.)
    pub rr_criterion_violations: usize,
    pub sample_keys: Vec<String>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.identity_length == 0
            && self.step_violations == 0
            && self.descent_violations == 0
            && self.x0_violations == 0
            && self.bottom_cancel_violations == 0
            && self.bottom_build_violations == 0
            && self.rr_criterion_violations == 0
    }
}

/// Checks the three length-function conditions plus the exact per-letter
/// propositions on all interior elements of the ball.
pub fn certify_lemma_conditions(ball: &Ball) -> LemmaReport {
    let n = ball.arity();
    let identity = ForestDiagram::identity(n).expect("ball arity is valid");
    let mut report = LemmaReport {
        arity: n,
        radius: ball.radius(),
        interior_checked: 0,
        identity_length: metric::length(&identity),
        step_violations: 0,
        descent_violations: 0,
        x0_violations: 0,
        bottom_cancel_violations: 0,
        bottom_build_violations: 0,
        rr_criterion_violations: 0,
        sample_keys: Vec::new(),
    };
    let letters = all_letters(n);
    for (d, _) in ball.interior() {
        report.interior_checked += 1;
        let len = metric::length(d);
        let mut bad = false;
        let right_rr = metric::label_spaces(d).at(metric::right_space(d))
            == (SpaceLabel::R, SpaceLabel::R);
        for &s in &letters {
            let new_len = metric::length(&d.apply_letter(s));
            if new_len.abs_diff(len) > 1 {
                report.step_violations += 1;
                bad = true;
            }
            let kind = geodesic::action_kind(d, s);
            match kind {
                ActionKind::PointerMove => {
                    if new_len == len {
                        report.x0_violations += 1;
                        bad = true;
                    }
                }
                ActionKind::CaretRemovedBottom => {
                    if new_len + 1 != len {
                        report.bottom_cancel_violations += 1;
                        bad = true;
                    }
                }
                ActionKind::CaretBuiltBottom => {
                    if new_len != len + 1 {
                        report.bottom_build_violations += 1;
                        bad = true;
                    }
                }
                ActionKind::CaretBuiltTop => {
                    if right_rr && new_len + 1 != len {
                        report.rr_criterion_violations += 1;
                        bad = true;
                    }
                }
                ActionKind::CaretRemovedTop => {}
            }
        }
        if !d.is_identity() {
            match geodesic::descent_letter(d) {
                Ok(s) => {
                    if metric::length(&d.apply_letter(s)) + 1 != len {
                        report.descent_violations += 1;
                        bad = true;
                    }
                }
                Err(_) => {
                    report.descent_violations += 1;
                    bad = true;
                }
            }
        }
        if bad && report.sample_keys.len() < MAX_REPORTED {
            report.sample_keys.push(d.canonical_key());
        }
    }
    report
}

/// Dead-end census over a ball: brute/structural agreement and depths.
#[derive(Serialize, Clone, Debug)]
pub struct DeadEndReport {
    pub arity: usize,
    pub radius: u32,
    pub checked: usize,
    pub dead_ends: usize,
    pub brute_structural_mismatches: Vec<String>,
    pub depth_not_two: Vec<String>,
    pub dead_end_keys: Vec<String>,
}

impl DeadEndReport {
    pub fn is_clean(&self) -> bool {
        self.brute_structural_mismatches.is_empty() && self.depth_not_two.is_empty()
    }
}

pub fn dead_end_census(ball: &Ball) -> DeadEndReport {
    let mut report = DeadEndReport {
        arity: ball.arity(),
        radius: ball.radius(),
        checked: 0,
        dead_ends: 0,
        brute_structural_mismatches: Vec::new(),
        depth_not_two: Vec::new(),
        dead_end_keys: Vec::new(),
    };
    for (d, _) in ball.elements() {
        if d.is_identity() {
            continue;
        }
        report.checked += 1;
        let brute = geodesic::is_dead_end_brute(d);
        let structural = geodesic::is_dead_end_structural(d);
        if brute != structural && report.brute_structural_mismatches.len() < MAX_REPORTED {
            report.brute_structural_mismatches.push(d.canonical_key());
        }
        if brute {
            report.dead_ends += 1;
            if report.dead_end_keys.len() < MAX_REPORTED {
                report.dead_end_keys.push(d.canonical_key());
            }
            if geodesic::dead_end_depth(d) != Ok(2) && report.depth_not_two.len() < MAX_REPORTED
            {
                report.depth_not_two.push(d.canonical_key());
            }
        }
    }
    report
}

// -- disk cache --------------------------------------------------------------

/// One record per line: `<distance> <canonical_key>`, with the key's newlines
/// written as `|`.
pub fn write_cache<W: Write>(ball: &Ball, mut out: W) -> std::io::Result<()> {
    for (d, dist) in ball.elements() {
        writeln!(out, "{} {}", dist, d.canonical_key().replace('\n', "|"))?;
    }
    Ok(())
}

/// Reads a cache written by [`write_cache`]. The radius is taken to be the
/// largest recorded distance.
pub fn read_cache<R: BufRead>(input: R) -> Result<Ball> {
    let mut elements = Vec::new();
    let mut index = HashMap::new();
    let mut radius = 0;
    let mut n = 0;
    for line in input.lines() {
        let line = line.map_err(|e| Error::Parse { pos: 0, msg: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let (dist, key) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse { pos: 0, msg: "missing distance field".into() })?;
        let dist: u32 =
            dist.parse().map_err(|_| Error::Parse { pos: 0, msg: "bad distance".into() })?;
        let text = key.replace('|', "\n");
        let d: ForestDiagram = text.parse()?;
        n = d.arity();
        radius = radius.max(dist);
        index.insert(d.canonical_key(), elements.len());
        elements.push((d, dist));
    }
    Ok(Ball { n, radius, elements, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn eval(n: usize, w: &str) -> ForestDiagram {
        ForestDiagram::evaluate_word(n, &w.parse::<Word>().unwrap()).unwrap()
    }

    #[test]
    fn ball_zero_is_identity() {
        let ball = enumerate_ball(3, 0, DEFAULT_CAP).unwrap();
        assert_eq!(ball.len(), 1);
        assert_eq!(ball.distance_of(&ForestDiagram::identity(3).unwrap()), Some(0));
    }

    #[test]
    fn sphere_one_has_2n_elements() {
        for n in 2..=5 {
            let ball = enumerate_ball(n, 1, DEFAULT_CAP).unwrap();
            assert_eq!(ball.sphere_count(1), 2 * n, "n={n}");
        }
    }

    #[test]
    fn cap_overflow_is_reported() {
        assert_eq!(
            enumerate_ball(3, 3, 5).unwrap_err(),
            Error::BallCapExceeded { cap: 5 }
        );
    }

    #[test]
    fn certify_small_balls() {
        for (n, r) in [(2, 5), (3, 4), (4, 3)] {
            let ball = enumerate_ball(n, r, DEFAULT_CAP).unwrap();
            let report = certify_length(&ball);
            assert!(report.is_clean(), "n={n} r={r}: {:?}", report.mismatches);
            let lemma = certify_lemma_conditions(&ball);
            assert!(lemma.is_clean(), "n={n} r={r}: {lemma:?}");
        }
    }

    #[test]
    fn bfs_is_deterministic() {
        let a = enumerate_ball(3, 3, DEFAULT_CAP).unwrap();
        let b = enumerate_ball(3, 3, DEFAULT_CAP).unwrap();
        let keys = |ball: &Ball| {
            ball.elements()
                .iter()
                .map(|(d, dist)| (d.canonical_key(), *dist))
                .collect::<Vec<_>>()
        };
        assert_eq!(keys(&a), keys(&b));
    }

    #[test]
    fn invert_closure_with_equal_distance() {
        let ball = enumerate_ball(3, 4, DEFAULT_CAP).unwrap();
        for (d, dist) in ball.elements() {
            assert_eq!(ball.distance_of(&d.invert()), Some(*dist));
        }
    }

    #[test]
    fn key_equality_iff_diagram_equality_on_a_ball() {
        let ball = enumerate_ball(2, 5, DEFAULT_CAP).unwrap();
        let keys: std::collections::HashSet<String> =
            ball.elements().iter().map(|(d, _)| d.canonical_key()).collect();
        assert_eq!(keys.len(), ball.len());
        for (d, _) in ball.elements() {
            let reparsed: ForestDiagram = d.canonical_key().parse().unwrap();
            assert_eq!(&reparsed, d);
        }
    }

    #[test]
    fn paper_word_has_distance_thirteen() {
        let d = eval(3, "x0^-1 x2 x0^-1 x1^2 x0 x1 x0 x1 x0^-1 x1 x0 x1");
        let dist = distance_bidirectional(&d, 7, 6, DEFAULT_CAP).unwrap();
        assert_eq!(dist, Some(13));
    }

    #[test]
    fn cache_round_trips() {
        let ball = enumerate_ball(3, 3, DEFAULT_CAP).unwrap();
        let mut buf = Vec::new();
        write_cache(&ball, &mut buf).unwrap();
        let back = read_cache(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back.len(), ball.len());
        for (d, dist) in ball.elements() {
            assert_eq!(back.distance_of(d), Some(*dist));
        }
    }
}
