//! Exact realization of forest diagrams as piecewise-linear homeomorphisms
//! of the real line with breakpoints in Z[1/n] and slopes that are powers of
//! n, used as an independent correctness oracle for the group operations.
//!
//! Values are base-n normalized fractions k / n^p, so the membership checks
//! (breakpoints in Z[1/n], slopes n^e) are structural.

use std::cmp::Ordering;
use std::fmt;

use crate::forest::{ForestDiagram, NaryTree};

/// An exact n-adic rational k / n^p, normalized so p is minimal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct NAdic {
    num: i64,
    exp: u32,
    n: u32,
}

impl NAdic {
    pub fn new(n: u32, num: i64, exp: u32) -> NAdic {
        assert!(n >= 2);
        let mut v = NAdic { num, exp, n };
        v.normalize();
        v
    }

    pub fn integer(n: u32, k: i64) -> NAdic {
        NAdic::new(n, k, 0)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    fn normalize(&mut self) {
        let n = self.n as i64;
        while self.exp > 0 && self.num % n == 0 {
            self.num /= n;
            self.exp -= 1;
        }
    }

    fn npow(&self, e: u32) -> i64 {
        (self.n as i64).checked_pow(e).expect("n-adic exponent overflow")
    }

    /// Multiplication by n^e for a signed exponent e.
    pub fn mul_npow(self, e: i32) -> NAdic {
        if e >= 0 {
            let factor = self.npow(e as u32);
            NAdic::new(self.n, self.num.checked_mul(factor).expect("n-adic overflow"), self.exp)
        } else {
            NAdic::new(self.n, self.num, self.exp + (-e) as u32)
        }
    }

    pub fn mul_int(self, k: i64) -> NAdic {
        NAdic::new(self.n, self.num.checked_mul(k).expect("n-adic overflow"), self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl std::ops::Add for NAdic {
    type Output = NAdic;

    fn add(self, other: NAdic) -> NAdic {
        assert_eq!(self.n, other.n);
        let exp = self.exp.max(other.exp);
        let a = self.num.checked_mul(self.npow(exp - self.exp)).expect("n-adic overflow");
        let b = other.num.checked_mul(other.npow(exp - other.exp)).expect("n-adic overflow");
        NAdic::new(self.n, a.checked_add(b).expect("n-adic overflow"), exp)
    }
}

impl std::ops::Sub for NAdic {
    type Output = NAdic;

    fn sub(self, other: NAdic) -> NAdic {
        self + (-other)
    }
}

impl std::ops::Neg for NAdic {
    type Output = NAdic;

    fn neg(self) -> NAdic {
        NAdic { num: -self.num, ..self }
    }
}

impl PartialOrd for NAdic {
    fn partial_cmp(&self, other: &NAdic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NAdic {
    fn cmp(&self, other: &NAdic) -> Ordering {
        assert_eq!(self.n, other.n);
        let exp = self.exp.max(other.exp);
        let a = self.num as i128 * (self.n as i128).pow(exp - self.exp);
        let b = other.num as i128 * (other.n as i128).pow(exp - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for NAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}^{}", self.num, self.n, self.exp)
        }
    }
}

/// Exponent e with ratio/1 = n^e if the ratio of two n-adic values is a power
/// of n; `None` otherwise. Both values must be positive.
fn slope_exponent(dx: NAdic, dy: NAdic) -> Option<i32> {
    assert_eq!(dx.n, dy.n);
    assert!(dx.num > 0 && dy.num > 0);
    let n = dx.n as i64;
    let strip = |mut k: i64| {
        let mut e = 0i32;
        while k % n == 0 {
            k /= n;
            e += 1;
        }
        (k, e)
    };
    let (kx, ex) = strip(dx.num);
    let (ky, ey) = strip(dy.num);
    if kx != ky {
        return None;
    }
    Some(ey - ex + dx.exp as i32 - dy.exp as i32)
}

/// A piecewise-linear bijection of the real line: finitely many breakpoints
/// with their images, interpolated by slopes that are powers of n, and slope-1
/// translations by `left_shift` / `right_shift` outside the breakpoint span.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PLMap {
    n: u32,
    /// (x, f(x)) at the breakpoints, strictly increasing in both coordinates.
    points: Vec<(NAdic, NAdic)>,
    left_shift: i64,
    right_shift: i64,
}

impl PLMap {
    pub fn identity(n: u32) -> PLMap {
        PLMap { n, points: Vec::new(), left_shift: 0, right_shift: 0 }
    }

    /// Builds a map from sample points and outer shifts, dropping collinear
    /// points so equality is structural. The samples must describe a strictly
    /// increasing continuous map.
    pub fn from_points(
        n: u32,
        mut points: Vec<(NAdic, NAdic)>,
        left_shift: i64,
        right_shift: i64,
    ) -> PLMap {
        points.sort_by_key(|p| p.0);
        points.dedup();
        // Drop interior points where the slope continues unchanged.
        let mut i = 1;
        while i + 1 < points.len() {
            let (a, b, c) = (points[i - 1], points[i], points[i + 1]);
            let s1 = slope_exponent(b.0 - a.0, b.1 - a.1);
            let s2 = slope_exponent(c.0 - b.0, c.1 - b.1);
            if s1.is_some() && s1 == s2 {
                points.remove(i);
            } else {
                i += 1;
            }
        }
        // Drop end points absorbed by the outer translations.
        while points.len() >= 2 {
            let (a, b) = (points[0], points[1]);
            if slope_exponent(b.0 - a.0, b.1 - a.1) == Some(0)
                && a.1 - a.0 == NAdic::integer(n, left_shift)
            {
                points.remove(0);
            } else {
                break;
            }
        }
        while points.len() >= 2 {
            let (a, b) = (points[points.len() - 2], points[points.len() - 1]);
            if slope_exponent(b.0 - a.0, b.1 - a.1) == Some(0)
                && b.1 - b.0 == NAdic::integer(n, right_shift)
            {
                points.pop();
            } else {
                break;
            }
        }
        if points.len() == 1 && left_shift == right_shift {
            let p = points[0];
            if p.1 - p.0 == NAdic::integer(n, left_shift) {
                points.clear();
            }
        }
        let map = PLMap { n, points, left_shift, right_shift };
        debug_assert!(map.check_membership().is_ok(), "{:?}", map.check_membership());
        map
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn breakpoints(&self) -> &[(NAdic, NAdic)] {
        &self.points
    }

    pub fn left_shift(&self) -> i64 {
        self.left_shift
    }

    pub fn right_shift(&self) -> i64 {
        self.right_shift
    }

    /// The three membership checks for PL_n(R): finitely many breakpoints in
    /// Z[1/n] (structural), slopes powers of n, outer pieces of slope 1 with
    /// integer translation by a multiple of n-1.
    pub fn check_membership(&self) -> Result<(), String> {
        let m = self.n as i64 - 1;
        if self.left_shift % m != 0 || self.right_shift % m != 0 {
            return Err(format!(
                "outer translations {} / {} not multiples of {m}",
                self.left_shift, self.right_shift
            ));
        }
        if self.points.is_empty() {
            if self.left_shift != self.right_shift {
                return Err("translation map with inconsistent shifts".into());
            }
            return Ok(());
        }
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.0 <= a.0 || b.1 <= a.1 {
                return Err("breakpoints not strictly increasing".into());
            }
            if slope_exponent(b.0 - a.0, b.1 - a.1).is_none() {
                return Err(format!("slope between {:?} and {:?} is not a power of n", a, b));
            }
        }
        let first = self.points[0];
        if first.1 - first.0 != NAdic::integer(self.n, self.left_shift) {
            return Err("left translation does not meet the first breakpoint".into());
        }
        let last = self.points[self.points.len() - 1];
        if last.1 - last.0 != NAdic::integer(self.n, self.right_shift) {
            return Err("right translation does not meet the last breakpoint".into());
        }
        Ok(())
    }

    /// Exact pointwise evaluation.
    pub fn evaluate(&self, x: NAdic) -> NAdic {
        if self.points.is_empty() || x <= self.points[0].0 {
            return x + NAdic::integer(self.n, self.left_shift);
        }
        let last = self.points[self.points.len() - 1];
        if x >= last.0 {
            return x + NAdic::integer(self.n, self.right_shift);
        }
        let i = self.points.partition_point(|p| p.0 < x);
        let (x0, y0) = self.points[i - 1];
        let (x1, y1) = self.points[i];
        let e = slope_exponent(x1 - x0, y1 - y0).expect("validated slope");
        y0 + (x - x0).mul_npow(e)
    }

    /// The inverse homeomorphism.
    pub fn invert(&self) -> PLMap {
        PLMap {
            n: self.n,
            points: self.points.iter().map(|(x, y)| (*y, *x)).collect(),
            left_shift: -self.left_shift,
            right_shift: -self.right_shift,
        }
    }

    /// Exact composition x ↦ other(self(x)): `self` is applied first, so
    /// `a.compose(&b)` realizes the diagram product a·b.
    pub fn compose(&self, other: &PLMap) -> PLMap {
        assert_eq!(self.n, other.n);
        let self_inv = self.invert();
        let mut xs: Vec<NAdic> = self.points.iter().map(|(x, _)| *x).collect();
        xs.extend(other.points.iter().map(|(x, _)| self_inv.evaluate(*x)));
        xs.sort();
        xs.dedup();
        let points =
            xs.into_iter().map(|x| (x, other.evaluate(self.evaluate(x)))).collect();
        PLMap::from_points(
            self.n,
            points,
            self.left_shift + other.left_shift,
            self.right_shift + other.right_shift,
        )
    }

    /// Text dump: one line per piece with n-adic interval ends.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if self.points.is_empty() {
            out.push_str(&format!("[-inf, +inf) slope=n^0 intercept={}\n", self.left_shift));
            return out;
        }
        let fmt_piece = |lo: &str, hi: &str, e: i32, intercept: NAdic| {
            format!("[{lo}, {hi}) slope=n^{e} intercept={intercept}\n")
        };
        let first = self.points[0];
        out.push_str(&fmt_piece(
            "-inf",
            &first.0.to_string(),
            0,
            NAdic::integer(self.n, self.left_shift),
        ));
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let e = slope_exponent(b.0 - a.0, b.1 - a.1).expect("validated slope");
            // intercept = y0 - n^e x0
            let intercept = a.1 - a.0.mul_npow(e);
            out.push_str(&fmt_piece(&a.0.to_string(), &b.0.to_string(), e, intercept));
        }
        let last = self.points[self.points.len() - 1];
        out.push_str(&fmt_piece(
            &last.0.to_string(),
            "+inf",
            0,
            NAdic::integer(self.n, self.right_shift),
        ));
        out
    }
}

/// n-adic leaf boundaries of a forest whose j-th tree spans [j+offset, j+1+offset].
fn forest_boundaries(forest: &[NaryTree], offset: i64, n: u32) -> Vec<NAdic> {
    fn subdivide(tree: &NaryTree, lo: NAdic, width_exp: i32, out: &mut Vec<NAdic>) {
        match tree {
            NaryTree::Leaf => out.push(lo),
            NaryTree::Node(children) => {
                let child_width = width_exp - 1;
                for (k, child) in children.iter().enumerate() {
                    let child_lo =
                        lo + NAdic::integer(lo.n, k as i64).mul_npow(child_width);
                    subdivide(child, child_lo, child_width, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (j, tree) in forest.iter().enumerate() {
        subdivide(tree, NAdic::integer(n, j as i64 + offset), 0, &mut out);
    }
    out.push(NAdic::integer(n, forest.len() as i64 + offset));
    out
}

/// Realizes a diagram as the PL map sending the k-th top leaf interval
/// linearly onto the k-th bottom leaf interval, with the top pointer tree
/// anchored over [0, 1].
pub fn diagram_to_plmap(d: &ForestDiagram) -> PLMap {
    let n = d.arity() as u32;
    let top = forest_boundaries(d.top_trees(), -(d.top_pointer() as i64), n);
    let bottom = forest_boundaries(d.bottom_trees(), -(d.bottom_pointer() as i64), n);
    assert_eq!(top.len(), bottom.len(), "leaf columns must align");
    let left_shift = d.top_pointer() as i64 - d.bottom_pointer() as i64;
    let right_shift = (d.bottom_trees().len() as i64 - d.bottom_pointer() as i64)
        - (d.top_trees().len() as i64 - d.top_pointer() as i64);
    let points = top.into_iter().zip(bottom).collect();
    let map = PLMap::from_points(n, points, left_shift, right_shift);
    map.check_membership().expect("diagram realization is in PL_n(R)");
    map
}

/// Breakpoint value ψ_n(k) of the conjugating homeomorphism ψ_n: R → [0, 1].
pub fn psi_breakpoint(n: u32, k: i64) -> NAdic {
    assert!(n >= 2);
    let m = n as i64 - 1;
    if k < 0 {
        let q = (-k).div_euclid(m);
        let r = (-k).rem_euclid(m);
        // 1/n^(q+1) - r/n^(q+2)
        NAdic::new(n, 1, q as u32 + 1) - NAdic::new(n, r, q as u32 + 2)
    } else {
        let t = k - n as i64 + 2;
        let q = t.div_euclid(m);
        let r = t.rem_euclid(m);
        // 1 - 1/n^(q+1) + r/n^(q+2); q >= -1 since t >= 2-n >= -m.
        let one = NAdic::integer(n, 1);
        let qe = (q + 1) as u32;
        one - NAdic::new(n, 1, qe) + NAdic::new(n, r, qe + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn eval(n: usize, w: &str) -> ForestDiagram {
        ForestDiagram::evaluate_word(n, &w.parse::<Word>().unwrap()).unwrap()
    }

    fn frac(n: u32, num: i64, exp: u32) -> NAdic {
        NAdic::new(n, num, exp)
    }

    #[test]
    fn nadic_normalization_and_order() {
        assert_eq!(frac(3, 3, 1), NAdic::integer(3, 1));
        assert_eq!(frac(2, 6, 2), frac(2, 3, 1));
        assert!(frac(2, 1, 2) < frac(2, 3, 2));
        assert!(frac(2, -1, 0) < frac(2, 1, 3));
        assert_eq!(frac(2, 1, 1) + frac(2, 1, 2), frac(2, 3, 2));
        assert_eq!(frac(3, 1, 0).mul_npow(-2), frac(3, 1, 2));
    }

    #[test]
    fn psi_anchor_values() {
        assert_eq!(psi_breakpoint(2, 1), frac(2, 3, 2));
        assert_eq!(psi_breakpoint(3, 0), frac(3, 1, 1));
        assert_eq!(psi_breakpoint(3, 1), frac(3, 2, 1));
        assert_eq!(psi_breakpoint(2, -1), frac(2, 1, 2));
        assert_eq!(psi_breakpoint(2, 0), frac(2, 1, 1));
    }

    #[test]
    fn psi_is_strictly_increasing_within_unit_interval() {
        for n in 2..=5 {
            for k in -12..12 {
                let a = psi_breakpoint(n, k);
                let b = psi_breakpoint(n, k + 1);
                assert!(a < b, "psi_{n} not increasing at {k}");
                assert!(a > NAdic::integer(n, 0) && a < NAdic::integer(n, 1));
            }
        }
    }

    #[test]
    fn x0_realizes_as_translation() {
        let map = diagram_to_plmap(&eval(3, "x0"));
        assert!(map.breakpoints().is_empty());
        assert_eq!(map.left_shift(), 2);
        assert_eq!(map.right_shift(), 2);
    }

    #[test]
    fn x1_in_f2_has_expected_pieces() {
        let map = diagram_to_plmap(&eval(2, "x1"));
        // [0,1/2] -> [0,1] with slope 2, [1/2,1] -> [1,2] with slope 1;
        // identity left of 0, x+1 right of 1.
        assert_eq!(map.left_shift(), 0);
        assert_eq!(map.right_shift(), 1);
        assert_eq!(map.evaluate(frac(2, 1, 1)), NAdic::integer(2, 1));
        assert_eq!(map.evaluate(frac(2, 1, 2)), frac(2, 1, 1));
        assert_eq!(map.evaluate(NAdic::integer(2, -5)), NAdic::integer(2, -5));
        assert_eq!(map.evaluate(NAdic::integer(2, 4)), NAdic::integer(2, 5));
    }

    #[test]
    fn identity_diagram_maps_to_identity() {
        let map = diagram_to_plmap(&ForestDiagram::identity(4).unwrap());
        assert_eq!(map, PLMap::identity(4));
    }

    #[test]
    fn inverse_and_composition() {
        let d = eval(3, "x1 x0^-1 x2");
        let map = diagram_to_plmap(&d);
        assert_eq!(map.compose(&map.invert()), PLMap::identity(3));
        assert_eq!(diagram_to_plmap(&d.invert()), map.invert());

        let x1 = diagram_to_plmap(&eval(3, "x1"));
        let x1inv = diagram_to_plmap(&eval(3, "x1^-1"));
        assert_eq!(x1.compose(&x1inv), PLMap::identity(3));
    }

    #[test]
    fn generators_are_distinct_maps() {
        for n in [2usize, 3, 4] {
            let maps: Vec<PLMap> =
                (0..n).map(|i| diagram_to_plmap(&eval(n, &format!("x{i}")))).collect();
            for i in 0..n {
                for j in (i + 1)..n {
                    assert_ne!(maps[i], maps[j], "x{i} vs x{j} in F({n})");
                }
            }
        }
    }

    #[test]
    fn homomorphism_on_sample_words() {
        for (a, b) in [("x1", "x0"), ("x0^-1 x2", "x1 x1"), ("x2^-1", "x0 x1^-1")] {
            let da = eval(3, a);
            let db = eval(3, b);
            let product = da.multiply(&db).unwrap();
            assert_eq!(
                diagram_to_plmap(&product),
                diagram_to_plmap(&da).compose(&diagram_to_plmap(&db)),
                "{a} * {b}"
            );
        }
    }
}
