//! n-ary trees, two-way pointed forest diagrams, and the generator actions.
//!
//! A [`ForestDiagram`] is the canonical representation of an element of F(n):
//! a top (domain) forest and a bottom (range) forest over a shared window of
//! leaf columns, each carrying a pointer. The k-th leaf of the top window
//! corresponds to the k-th leaf of the bottom window; all columns outside the
//! window are implicitly trivial on both sides.

use std::fmt;
use std::str::FromStr;

use crate::word::Word;
use crate::{Error, Result};

/// A rooted tree in which every internal node has exactly n children.
///
/// The arity is not stored in the tree itself; it is fixed by the containing
/// [`ForestDiagram`] and checked on construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NaryTree {
    Leaf,
    Node(Vec<NaryTree>),
}

impl NaryTree {
    pub fn leaf_count(&self) -> usize {
        match self {
            NaryTree::Leaf => 1,
            NaryTree::Node(children) => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn caret_count(&self) -> usize {
        match self {
            NaryTree::Leaf => 0,
            NaryTree::Node(children) => {
                1 + children.iter().map(|c| c.caret_count()).sum::<usize>()
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, NaryTree::Leaf)
    }

    /// A caret over n leaves.
    pub fn caret(n: usize) -> NaryTree {
        NaryTree::Node(vec![NaryTree::Leaf; n])
    }

    fn check_arity(&self, n: usize) -> bool {
        match self {
            NaryTree::Leaf => true,
            NaryTree::Node(children) => {
                children.len() == n && children.iter().all(|c| c.check_arity(n))
            }
        }
    }
}

/// A signed generator x_i^{±1} with i in {0, ..., n-1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(index: usize) -> Letter {
        Letter { index, inverse: false }
    }

    pub fn inv(index: usize) -> Letter {
        Letter { index, inverse: true }
    }

    pub fn inverted(self) -> Letter {
        Letter { index: self.index, inverse: !self.inverse }
    }

    pub fn validate(self, n: usize) -> Result<()> {
        if self.index >= n {
            Err(Error::BadGenerator { index: self.index, arity: n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

/// The 2n letters {x_0^{±1}, ..., x_{n-1}^{±1}}, positives first per index.
pub fn all_letters(n: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(Letter::gen(i));
        out.push(Letter::inv(i));
    }
    out
}

/// A reduced, canonical two-way forest diagram for an element of F(n).
///
/// Invariants maintained by every operation:
/// - top and bottom windows hold the same total number of leaves,
/// - `top_ptr ≡ bottom_ptr (mod n-1)`,
/// - no opposing caret pair remains (reduced),
/// - the window is trimmed to the span of its feature columns (canonical).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ForestDiagram {
    n: usize,
    top: Vec<NaryTree>,
    bottom: Vec<NaryTree>,
    top_ptr: usize,
    bottom_ptr: usize,
}

impl ForestDiagram {
    /// The reduced diagram of the identity: one trivial-trivial column.
    pub fn identity(n: usize) -> Result<ForestDiagram> {
        if n < 2 {
            return Err(Error::InvalidArity(n));
        }
        Ok(ForestDiagram {
            n,
            top: vec![NaryTree::Leaf],
            bottom: vec![NaryTree::Leaf],
            top_ptr: 0,
            bottom_ptr: 0,
        })
    }

    /// Builds a diagram from raw parts, validating the structural invariants.
    /// The input must already be reduced and canonical; this is checked.
    pub fn from_parts(
        n: usize,
        top: Vec<NaryTree>,
        bottom: Vec<NaryTree>,
        top_ptr: usize,
        bottom_ptr: usize,
    ) -> Result<ForestDiagram> {
        if n < 2 {
            return Err(Error::InvalidArity(n));
        }
        let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
        if top.is_empty() || bottom.is_empty() {
            return Err(bad("forests must be non-empty"));
        }
        if top_ptr >= top.len() || bottom_ptr >= bottom.len() {
            return Err(bad("pointer index out of range"));
        }
        if !top.iter().chain(bottom.iter()).all(|t| t.check_arity(n)) {
            return Err(bad("tree node with wrong arity"));
        }
        let tl: usize = top.iter().map(|t| t.leaf_count()).sum();
        let bl: usize = bottom.iter().map(|t| t.leaf_count()).sum();
        if tl != bl {
            return Err(bad("leaf counts of top and bottom windows differ"));
        }
        if top_ptr % (n - 1) != bottom_ptr % (n - 1) {
            return Err(bad("pointers not congruent mod n-1"));
        }
        let d = ForestDiagram { n, top, bottom, top_ptr, bottom_ptr };
        if !d.is_reduced() {
            return Err(bad("diagram has an opposing caret pair"));
        }
        let mut c = d.clone();
        c.trim();
        if c != d {
            return Err(bad("diagram window is not canonically trimmed"));
        }
        Ok(d)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn top_trees(&self) -> &[NaryTree] {
        &self.top
    }

    pub fn bottom_trees(&self) -> &[NaryTree] {
        &self.bottom
    }

    pub fn top_pointer(&self) -> usize {
        self.top_ptr
    }

    pub fn bottom_pointer(&self) -> usize {
        self.bottom_ptr
    }

    pub fn is_identity(&self) -> bool {
        self.top.len() == 1 && self.top[0].is_leaf() && self.bottom[0].is_leaf()
    }

    /// Total number of leaf columns in the window.
    pub fn total_columns(&self) -> usize {
        self.top.iter().map(|t| t.leaf_count()).sum()
    }

    /// Leftmost leaf column of the top pointer tree.
    pub fn top_pointer_col(&self) -> usize {
        self.top[..self.top_ptr].iter().map(|t| t.leaf_count()).sum()
    }

    /// Leftmost leaf column of the bottom pointer tree.
    pub fn bottom_pointer_col(&self) -> usize {
        self.bottom[..self.bottom_ptr].iter().map(|t| t.leaf_count()).sum()
    }

    pub fn caret_count(&self) -> usize {
        self.top.iter().map(|t| t.caret_count()).sum::<usize>()
            + self.bottom.iter().map(|t| t.caret_count()).sum::<usize>()
    }

    pub fn bottom_caret_count(&self) -> usize {
        self.bottom.iter().map(|t| t.caret_count()).sum()
    }

    pub fn top_caret_count(&self) -> usize {
        self.top.iter().map(|t| t.caret_count()).sum()
    }

    /// Left-multiplies by a single letter and returns the reduced canonical
    /// result. Panics if the letter index is out of range for the arity.
    pub fn apply_letter(&self, s: Letter) -> ForestDiagram {
        assert!(s.index < self.n, "letter {s} invalid for arity {}", self.n);
        let n = self.n;
        let mut d = self.clone();
        match (s.index, s.inverse) {
            (0, false) => {
                d.ensure_top_index(d.top_ptr + n - 1);
                d.top_ptr += n - 1;
            }
            (0, true) => {
                if d.top_ptr < n - 1 {
                    d.extend_left(n - 1 - d.top_ptr);
                }
                d.top_ptr -= n - 1;
            }
            (i, false) => {
                // Merge the n consecutive top trees starting at the (i-1)-th
                // tree right of the pointer under one new caret.
                let start = d.top_ptr + i - 1;
                d.ensure_top_index(start + n - 1);
                let children: Vec<NaryTree> = d.top.drain(start..start + n).collect();
                d.top.insert(start, NaryTree::Node(children));
            }
            (i, true) => {
                let pos = d.top_ptr + i - 1;
                d.ensure_top_index(pos);
                match std::mem::replace(&mut d.top[pos], NaryTree::Leaf) {
                    NaryTree::Node(children) => {
                        d.top.splice(pos..pos + 1, children);
                    }
                    NaryTree::Leaf => {
                        // The caret falls through to the bottom forest.
                        let col = d.top[..pos].iter().map(|t| t.leaf_count()).sum();
                        attach_caret_at_column(&mut d.bottom, col, n);
                        for _ in 0..n - 1 {
                            d.top.insert(pos + 1, NaryTree::Leaf);
                        }
                    }
                }
            }
        }
        d.reduce_in_place();
        d.trim();
        d
    }

    /// Cancels opposing caret pairs until none remain and re-trims the window.
    /// Idempotent; by uniqueness of the reduced diagram the cancellation order
    /// does not matter.
    pub fn reduce(mut self) -> ForestDiagram {
        self.reduce_in_place();
        self.trim();
        self
    }

    pub fn is_reduced(&self) -> bool {
        self.find_opposing_pairs().is_empty()
    }

    /// Swaps the domain and range forests, giving the diagram of the inverse.
    pub fn invert(&self) -> ForestDiagram {
        ForestDiagram {
            n: self.n,
            top: self.bottom.clone(),
            bottom: self.top.clone(),
            top_ptr: self.bottom_ptr,
            bottom_ptr: self.top_ptr,
        }
    }

    /// Evaluates a word s_1 s_2 ... s_m as the product acting on the identity:
    /// s_m is applied first, then s_{m-1}, and so on (left multiplication).
    pub fn evaluate_word(n: usize, w: &Word) -> Result<ForestDiagram> {
        let mut d = ForestDiagram::identity(n)?;
        for s in w.letters().iter().rev() {
            s.validate(n)?;
            d = d.apply_letter(*s);
        }
        Ok(d)
    }

    /// The product f·g, computed by synthesizing a word for `self` and
    /// left-applying its letters to `g`.
    pub fn multiply(&self, g: &ForestDiagram) -> Result<ForestDiagram> {
        if self.n != g.n {
            return Err(Error::ArityMismatch(self.n, g.n));
        }
        let w = crate::geodesic::geodesic_word(self);
        let mut d = g.clone();
        for s in w.letters().iter().rev() {
            d = d.apply_letter(*s);
        }
        Ok(d)
    }

    /// Injective serialization of the canonical diagram; equal elements yield
    /// equal keys. This is exactly the diagram text format.
    pub fn canonical_key(&self) -> String {
        self.to_string()
    }

    // -- window management ---------------------------------------------------

    /// Extends the window to the right with trivial-trivial columns until the
    /// top forest has a tree at `idx`.
    fn ensure_top_index(&mut self, idx: usize) {
        while self.top.len() <= idx {
            self.top.push(NaryTree::Leaf);
            self.bottom.push(NaryTree::Leaf);
        }
    }

    /// Prepends `k` trivial-trivial columns.
    fn extend_left(&mut self, k: usize) {
        for _ in 0..k {
            self.top.insert(0, NaryTree::Leaf);
            self.bottom.insert(0, NaryTree::Leaf);
        }
        self.top_ptr += k;
        self.bottom_ptr += k;
    }

    /// Trims the window so its first and last columns each carry a feature
    /// (a pointer tree or a nontrivial tree in either forest).
    fn trim(&mut self) {
        let first_feature = |trees: &[NaryTree], ptr: usize| -> usize {
            let nt = trees.iter().position(|t| !t.is_leaf()).unwrap_or(ptr);
            ptr.min(nt)
        };
        let last_feature = |trees: &[NaryTree], ptr: usize| -> usize {
            let nt = trees.iter().rposition(|t| !t.is_leaf()).unwrap_or(ptr);
            ptr.max(nt)
        };
        let lead = first_feature(&self.top, self.top_ptr)
            .min(first_feature(&self.bottom, self.bottom_ptr));
        self.top.drain(..lead);
        self.bottom.drain(..lead);
        self.top_ptr -= lead;
        self.bottom_ptr -= lead;
        let trail = (self.top.len() - 1 - last_feature(&self.top, self.top_ptr))
            .min(self.bottom.len() - 1 - last_feature(&self.bottom, self.bottom_ptr));
        self.top.truncate(self.top.len() - trail);
        self.bottom.truncate(self.bottom.len() - trail);
    }

    // -- reduction -----------------------------------------------------------

    /// Starting columns at which a top fringe caret opposes a bottom fringe
    /// caret over the same n columns.
    fn find_opposing_pairs(&self) -> Vec<usize> {
        let top = fringe_carets(&self.top);
        let bottom = fringe_carets(&self.bottom);
        top.iter()
            .filter(|(col, _)| bottom.iter().any(|(c, _)| c == col))
            .map(|(col, _)| *col)
            .collect()
    }

    fn reduce_in_place(&mut self) {
        self.reduce_with(|pairs| pairs[0]);
    }

    /// Reduction with an explicit choice of which opposing pair to cancel at
    /// each step; used to check order-independence.
    pub(crate) fn reduce_with(&mut self, mut pick: impl FnMut(&[usize]) -> usize) {
        loop {
            let pairs = self.find_opposing_pairs();
            if pairs.is_empty() {
                return;
            }
            let col = pick(&pairs);
            self.cancel_pair_at(col);
        }
    }

    fn cancel_pair_at(&mut self, col: usize) {
        for forest in [&mut self.top, &mut self.bottom] {
            let carets = fringe_carets(forest);
            let (_, loc) = carets
                .into_iter()
                .find(|(c, _)| *c == col)
                .expect("opposing pair vanished during cancellation");
            set_leaf(forest, &loc);
        }
    }
}

/// Location of a node inside a forest: tree index plus child path.
type NodeLoc = (usize, Vec<usize>);

/// All carets whose children are all leaves, with their starting leaf column.
fn fringe_carets(forest: &[NaryTree]) -> Vec<(usize, NodeLoc)> {
    fn walk(
        node: &NaryTree,
        col: usize,
        tree: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<(usize, NodeLoc)>,
    ) -> usize {
        match node {
            NaryTree::Leaf => col + 1,
            NaryTree::Node(children) => {
                if children.iter().all(|c| c.is_leaf()) {
                    out.push((col, (tree, path.clone())));
                    return col + children.len();
                }
                let mut c = col;
                for (k, child) in children.iter().enumerate() {
                    path.push(k);
                    c = walk(child, c, tree, path, out);
                    path.pop();
                }
                c
            }
        }
    }
    let mut out = Vec::new();
    let mut col = 0;
    for (i, t) in forest.iter().enumerate() {
        col = walk(t, col, i, &mut Vec::new(), &mut out);
    }
    out
}

fn set_leaf(forest: &mut [NaryTree], loc: &NodeLoc) {
    let mut node = &mut forest[loc.0];
    for &k in &loc.1 {
        match node {
            NaryTree::Node(children) => node = &mut children[k],
            NaryTree::Leaf => unreachable!("path into a leaf"),
        }
    }
    *node = NaryTree::Leaf;
}

/// Replaces the leaf at absolute column `col` of the forest by a caret.
fn attach_caret_at_column(forest: &mut [NaryTree], col: usize, n: usize) {
    fn attach(node: &mut NaryTree, idx: usize, n: usize) {
        match node {
            NaryTree::Leaf => {
                debug_assert_eq!(idx, 0);
                *node = NaryTree::caret(n);
            }
            NaryTree::Node(children) => {
                let mut idx = idx;
                for child in children.iter_mut() {
                    let lc = child.leaf_count();
                    if idx < lc {
                        attach(child, idx, n);
                        return;
                    }
                    idx -= lc;
                }
                unreachable!("leaf index out of range");
            }
        }
    }
    let mut col = col;
    for tree in forest.iter_mut() {
        let lc = tree.leaf_count();
        if col < lc {
            attach(tree, col, n);
            return;
        }
        col -= lc;
    }
    unreachable!("column outside window");
}

// -- text format -------------------------------------------------------------

fn write_tree(f: &mut fmt::Formatter<'_>, t: &NaryTree) -> fmt::Result {
    match t {
        NaryTree::Leaf => write!(f, "."),
        NaryTree::Node(children) => {
            write!(f, "(")?;
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write_tree(f, c)?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for ForestDiagram {
    /// The bit-exact diagram text format used by the CLI and `canonical_key`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F({})", self.n)?;
        for (name, trees, ptr) in
            [("top", &self.top, self.top_ptr), ("bottom", &self.bottom, self.bottom_ptr)]
        {
            write!(f, "{name}:")?;
            for (i, t) in trees.iter().enumerate() {
                write!(f, " ")?;
                if i == ptr {
                    write!(f, "*")?;
                }
                write_tree(f, t)?;
            }
            if name == "top" {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

struct TreeParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> TreeParser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ')) {
            self.bump();
        }
    }

    fn tree(&mut self) -> Result<NaryTree> {
        match self.peek() {
            Some('.') => {
                self.bump();
                Ok(NaryTree::Leaf)
            }
            Some('(') => {
                self.bump();
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => children.push(self.tree()?),
                        None => return self.err("unclosed caret"),
                    }
                }
                Ok(NaryTree::Node(children))
            }
            _ => self.err("expected '.' or '('"),
        }
    }

    /// A whitespace-separated forest line; the `*`-prefixed tree is pointed.
    fn forest(&mut self) -> Result<(Vec<NaryTree>, usize)> {
        let mut trees = Vec::new();
        let mut ptr = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('*') => {
                    self.bump();
                    if ptr.replace(trees.len()).is_some() {
                        return self.err("multiple pointers in one forest");
                    }
                    trees.push(self.tree()?);
                }
                Some(_) => trees.push(self.tree()?),
            }
        }
        match ptr {
            Some(p) => Ok((trees, p)),
            None => self.err("forest has no pointer"),
        }
    }
}

impl FromStr for ForestDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<ForestDiagram> {
        let mut lines = s.lines();
        let header = lines.next().unwrap_or("");
        let n: usize = header
            .strip_prefix("F(")
            .and_then(|h| h.strip_suffix(")"))
            .and_then(|h| h.parse().ok())
            .ok_or_else(|| Error::Parse { pos: 0, msg: "expected header F(<n>)".into() })?;
        let top_line = lines
            .next()
            .and_then(|l| l.strip_prefix("top:"))
            .ok_or_else(|| Error::Parse { pos: 0, msg: "expected 'top:' line".into() })?;
        let bottom_line = lines
            .next()
            .and_then(|l| l.strip_prefix("bottom:"))
            .ok_or_else(|| Error::Parse { pos: 0, msg: "expected 'bottom:' line".into() })?;
        let (top, top_ptr) = TreeParser { src: top_line, pos: 0 }.forest()?;
        let (bottom, bottom_ptr) = TreeParser { src: bottom_line, pos: 0 }.forest()?;
        ForestDiagram::from_parts(n, top, bottom, top_ptr, bottom_ptr)
    }
}
