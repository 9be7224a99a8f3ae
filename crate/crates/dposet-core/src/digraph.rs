//! Finite digraphs with loops, their canonical forms, and the basic
//! transforms everything else is built from.
//!
//! Vertices are `0..n` internally; all textual I/O is 1-based. The adjacency
//! relation is stored one bitmask row per vertex, so the capacity is fixed at
//! [`MAX_VERTICES`] and membership tests are single bit probes.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{DgfError, DigraphError};

/// Hard capacity of the adjacency representation.
pub const MAX_VERTICES: usize = 64;

/// A finite directed graph with loops allowed.
///
/// Equality is *labeled* equality of adjacency matrices; use
/// [`Digraph::canonical_form`] or [`Digraph::is_isomorphic`] to compare
/// isomorphism types.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    /// `rows[i]` bit `j` set iff the edge `i -> j` exists.
    rows: Vec<u64>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph({}; {:?})", self.n, self.edges())
    }
}

/// Canonical string form of an isomorphism type: `"<n>:<bits>"` where the
/// bits are the row-major rendering of the lexicographically minimal
/// adjacency matrix over all vertex permutations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonCode(String);

impl CanonCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn n(&self) -> usize {
        let colon = self.0.find(':').expect("canon code has a colon");
        self.0[..colon].parse().expect("canon code has a vertex count")
    }

    fn bits(&self) -> &str {
        let colon = self.0.find(':').expect("canon code has a colon");
        &self.0[colon + 1..]
    }

    /// Reconstruct the representative digraph encoded by this code.
    pub fn to_digraph(&self) -> Digraph {
        let n = self.n();
        let bits = self.bits().as_bytes();
        let mut g = Digraph::empty(n).expect("canon code within capacity");
        for i in 0..n {
            for j in 0..n {
                if bits[i * n + j] == b'1' {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Parse and validate an externally supplied code.
    pub fn parse(text: &str) -> Result<CanonCode, String> {
        let colon = text.find(':').ok_or("missing `:`")?;
        let n: usize = text[..colon]
            .parse()
            .map_err(|_| "vertex count is not a number".to_string())?;
        if n == 0 || n > MAX_VERTICES {
            return Err(format!("vertex count {n} out of range"));
        }
        let bits = &text[colon + 1..];
        if bits.len() != n * n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(format!("expected {} matrix bits", n * n));
        }
        let code = CanonCode(text.to_string());
        let canon = code.to_digraph().canonical_form();
        if canon != code {
            return Err("matrix is not in canonical (minimal) form".to_string());
        }
        Ok(code)
    }
}

impl PartialOrd for CanonCode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonCode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n(), &self.0).cmp(&(other.n(), &other.0))
    }
}

impl fmt::Display for CanonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CanonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonCode({})", self.0)
    }
}

/// The three unary transforms of Definition-level interest: loop exchange,
/// edge reversal, and complementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryKind {
    LoopExchange,
    Reverse,
    Complement,
}

/// Selects the loop-full or the loop-free part of a digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopPart {
    Full,
    Free,
}

impl Digraph {
    /// The edgeless digraph on `n` vertices.
    pub fn empty(n: usize) -> Result<Digraph, DigraphError> {
        if n == 0 {
            return Err(DigraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(DigraphError::TooLarge(n));
        }
        Ok(Digraph { n, rows: vec![0; n] })
    }

    /// Build from an explicit 0-based edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Digraph, DigraphError> {
        let mut g = Digraph::empty(n)?;
        for &(i, j) in edges {
            if i >= n {
                return Err(DigraphError::OutOfRange(i, n));
            }
            if j >= n {
                return Err(DigraphError::OutOfRange(j, n));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.n && j < self.n);
        self.rows[i] |= 1 << j;
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.rows[i] &= !(1 << j);
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    /// Out-neighbour mask of `v` (bit `j` set iff `v -> j`).
    pub fn out_mask(&self, v: usize) -> u64 {
        self.rows[v]
    }

    /// In-neighbour mask of `v` (bit `j` set iff `j -> v`).
    pub fn in_mask(&self, v: usize) -> u64 {
        let mut m = 0;
        for i in 0..self.n {
            m |= (self.rows[i] >> v & 1) << i;
        }
        m
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// In-degree plus out-degree of `v`, loops excluded.
    pub fn loop_free_degree(&self, v: usize) -> usize {
        let non_loop = !(1u64 << v);
        let out = (self.rows[v] & non_loop).count_ones() as usize;
        let inn = (self.in_mask(v) & non_loop).count_ones() as usize;
        out + inn
    }

    pub fn is_loop_full(&self) -> bool {
        (0..self.n).all(|v| self.has_loop(v))
    }

    pub fn is_loop_free(&self) -> bool {
        (0..self.n).all(|v| !self.has_loop(v))
    }

    /// The grade of this digraph in the embeddability order: `|V| + |E|`.
    pub fn grade(&self) -> usize {
        self.n + self.edge_count()
    }

    /// Induced substructure on the given 0-based vertex subset, in the order
    /// listed (duplicates are rejected by debug assertion only).
    pub fn induced(&self, subset: &[usize]) -> Result<Digraph, DigraphError> {
        if subset.is_empty() {
            return Err(DigraphError::EmptySubset);
        }
        for &v in subset {
            if v >= self.n {
                return Err(DigraphError::OutOfRange(v, self.n));
            }
        }
        let mut g = Digraph::empty(subset.len())?;
        for (a, &va) in subset.iter().enumerate() {
            for (b, &vb) in subset.iter().enumerate() {
                if self.has_edge(va, vb) {
                    g.add_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    /// Induced substructure on the vertices selected by a bitmask.
    pub fn induced_mask(&self, mask: u64) -> Result<Digraph, DigraphError> {
        let subset: Vec<usize> = (0..self.n).filter(|&v| mask >> v & 1 == 1).collect();
        self.induced(&subset)
    }

    /// Canonical codes of all (n-1)-vertex induced substructures.
    pub fn one_vertex_deletions(&self) -> Result<BTreeSet<CanonCode>, DigraphError> {
        if self.n < 2 {
            return Err(DigraphError::NoDeletion);
        }
        let mut out = BTreeSet::new();
        for dropped in 0..self.n {
            let subset: Vec<usize> = (0..self.n).filter(|&v| v != dropped).collect();
            out.insert(self.induced(&subset)?.canonical_form());
        }
        Ok(out)
    }

    /// Block-diagonal disjoint union.
    pub fn disjoint_union(&self, other: &Digraph) -> Result<Digraph, DigraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(DigraphError::TooLarge(n));
        }
        let mut g = Digraph::empty(n)?;
        for i in 0..self.n {
            g.rows[i] = self.rows[i];
        }
        for i in 0..other.n {
            g.rows[self.n + i] = other.rows[i] << self.n;
        }
        Ok(g)
    }

    pub fn unary_transform(&self, kind: UnaryKind) -> Digraph {
        match kind {
            UnaryKind::LoopExchange => self.loop_exchange(),
            UnaryKind::Reverse => self.reverse(),
            UnaryKind::Complement => self.complement(),
        }
    }

    /// Flip exactly the diagonal.
    pub fn loop_exchange(&self) -> Digraph {
        let mut g = self.clone();
        for v in 0..self.n {
            g.rows[v] ^= 1 << v;
        }
        g
    }

    /// Transpose the adjacency relation.
    pub fn reverse(&self) -> Digraph {
        let mut g = Digraph::empty(self.n).expect("same size");
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    g.add_edge(j, i);
                }
            }
        }
        g
    }

    /// Replace the edge relation by its complement on all of `V x V`.
    pub fn complement(&self) -> Digraph {
        let full = if self.n == 64 { !0u64 } else { (1u64 << self.n) - 1 };
        Digraph {
            n: self.n,
            rows: self.rows.iter().map(|r| !r & full).collect(),
        }
    }

    /// Induced substructure on the looped (`Full`) or unlooped (`Free`)
    /// vertices; `None` when that vertex set is empty.
    pub fn loop_part(&self, which: LoopPart) -> Option<Digraph> {
        let subset: Vec<usize> = (0..self.n)
            .filter(|&v| match which {
                LoopPart::Full => self.has_loop(v),
                LoopPart::Free => !self.has_loop(v),
            })
            .collect();
        if subset.is_empty() {
            None
        } else {
            Some(self.induced(&subset).expect("nonempty subset"))
        }
    }

    /// Vertex sets of the weakly connected components, each sorted, in order
    /// of their smallest vertex.
    pub fn wcc_vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut comps = Vec::new();
        // symmetrised adjacency
        let mut sym: Vec<u64> = self.rows.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    sym[j] |= 1 << i;
                }
            }
        }
        for start in 0..self.n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            loop {
                let mut next = comp;
                let mut m = comp;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    next |= sym[v];
                }
                if next == comp {
                    break;
                }
                comp = next;
            }
            seen |= comp;
            comps.push((0..self.n).filter(|&v| comp >> v & 1 == 1).collect());
        }
        comps
    }

    /// The weakly connected components as induced digraphs.
    pub fn wccs(&self) -> Vec<Digraph> {
        self.wcc_vertex_sets()
            .iter()
            .map(|s| self.induced(s).expect("nonempty component"))
            .collect()
    }

    /// Canonical codes of all k-vertex induced substructures, deduplicated.
    pub fn substructure_types(&self, k: usize) -> Result<BTreeSet<CanonCode>, DigraphError> {
        if k == 0 || k > self.n {
            return Err(DigraphError::BadSize(k, self.n));
        }
        let mut out = BTreeSet::new();
        let mut subset = Vec::with_capacity(k);
        self.subsets_rec(0, k, &mut subset, &mut out);
        Ok(out)
    }

    fn subsets_rec(
        &self,
        from: usize,
        k: usize,
        subset: &mut Vec<usize>,
        out: &mut BTreeSet<CanonCode>,
    ) {
        if subset.len() == k {
            out.insert(self.induced(subset).expect("nonempty").canonical_form());
            return;
        }
        let remaining = k - subset.len();
        for v in from..=self.n.saturating_sub(remaining) {
            subset.push(v);
            self.subsets_rec(v + 1, k, subset, out);
            subset.pop();
        }
    }

    /// True iff every weakly connected component is a line `I_m` or a circle
    /// `O_m` (the ground-truth IO-graph characterization).
    pub fn is_io(&self) -> bool {
        self.wcc_vertex_sets().iter().all(|comp| {
            let g = self.induced(comp).expect("nonempty component");
            is_line(&g) || is_circle(&g)
        })
    }

    pub fn is_isomorphic(&self, other: &Digraph) -> bool {
        self.n == other.n
            && self.edge_count() == other.edge_count()
            && self.canonical_form() == other.canonical_form()
    }

    /// Apply a relabeling: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        debug_assert_eq!(perm.len(), self.n);
        let mut g = Digraph::empty(self.n).expect("same size");
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    g.add_edge(perm[i], perm[j]);
                }
            }
        }
        g
    }

    /// The canonical form: minimum row-major adjacency rendering over all
    /// vertex permutations, found by branch-and-bound.
    pub fn canonical_form(&self) -> CanonCode {
        let min = canon_search(self);
        let mut text = String::with_capacity(self.n * self.n + 4);
        text.push_str(&self.n.to_string());
        text.push(':');
        for i in 0..self.n {
            for j in 0..self.n {
                text.push(if min[i * self.n + j] { '1' } else { '0' });
            }
        }
        CanonCode(text)
    }

    /// Render in the DGF text format.
    pub fn to_dgf(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.n.to_string());
        s.push('\n');
        for i in 0..self.n {
            for j in 0..self.n {
                s.push(if self.has_edge(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parse the DGF text format: a decimal vertex count line, then `n` lines
    /// of exactly `n` characters from `{0,1}`.
    pub fn parse_dgf(text: &str) -> Result<Digraph, DgfError> {
        let mut lines = text.lines();
        let first = lines.next().ok_or(DgfError::Malformed {
            line: 1,
            msg: "missing vertex count line".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| DgfError::Malformed {
            line: 1,
            msg: format!("invalid vertex count `{first}`"),
        })?;
        let mut g = Digraph::empty(n)?;
        for i in 0..n {
            let line_no = i + 2;
            let row = lines.next().ok_or(DgfError::Malformed {
                line: line_no,
                msg: "missing matrix row".into(),
            })?;
            if row.len() != n {
                return Err(DgfError::Malformed {
                    line: line_no,
                    msg: format!("expected {} characters, found {}", n, row.len()),
                });
            }
            for (j, b) in row.bytes().enumerate() {
                match b {
                    b'1' => g.add_edge(i, j),
                    b'0' => {}
                    _ => {
                        return Err(DgfError::Malformed {
                            line: line_no,
                            msg: format!("invalid character `{}`", b as char),
                        })
                    }
                }
            }
        }
        if let Some(extra) = lines.next() {
            if !extra.trim().is_empty() {
                return Err(DgfError::Malformed {
                    line: n + 2,
                    msg: "trailing content after matrix".into(),
                });
            }
        }
        Ok(g)
    }
}

/// A nonempty weakly connected digraph is a line iff it is loop-free with
/// `m - 1` edges and every in/out degree at most 1.
fn is_line(g: &Digraph) -> bool {
    g.is_loop_free()
        && g.edge_count() == g.n() - 1
        && (0..g.n()).all(|v| g.out_mask(v).count_ones() <= 1 && g.in_mask(v).count_ones() <= 1)
}

/// A nonempty weakly connected digraph is a circle iff it is loop-free with
/// `m >= 3` vertices, `m` edges and every in/out degree exactly 1.
fn is_circle(g: &Digraph) -> bool {
    g.n() >= 3
        && g.is_loop_free()
        && g.edge_count() == g.n()
        && (0..g.n()).all(|v| g.out_mask(v).count_ones() == 1 && g.in_mask(v).count_ones() == 1)
}

/// Exact search for the minimal row-major adjacency matrix, committed one
/// row at a time.
///
/// A search state is a placed prefix plus an ordered partition of the
/// remaining vertices; the partition captures exactly the tail arrangements
/// compatible with every row committed so far (cells above and left of the
/// frontier are fixed, and inside each block the order is still free). At
/// row `k` a state proposes each first-block vertex: the row it yields is
/// its adjacency to the placed prefix, its loop bit, and then, per block,
/// the block's non-neighbours before its neighbours — the minimal
/// arrangement, which is then locked in by splitting the block. Depth-first
/// search over these states, pruning any branch whose committed rows exceed
/// the best full matrix found so far, yields the true minimum over all
/// permutations. Cost grows with the number of tied prefixes, so this is
/// intended for the pattern sizes the catalogs and gadgets use; large hosts
/// are only ever searched, not canonicalized.
fn canon_search(g: &Digraph) -> Vec<bool> {
    let n = g.n();
    if n == 1 {
        return vec![g.has_loop(0)];
    }
    let mut search = CanonSearch {
        g,
        n,
        committed: Vec::with_capacity(n * n),
        best: None,
    };
    let root = CanonState {
        placed: Vec::new(),
        blocks: vec![(0..n).collect()],
    };
    search.dfs(&root);
    search.best.expect("at least one permutation")
}

struct CanonState {
    placed: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

struct CanonSearch<'a> {
    g: &'a Digraph,
    n: usize,
    /// rows committed along the current branch
    committed: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl<'a> CanonSearch<'a> {
    /// Swapping `u` and `v` is an automorphism, so branches through them are
    /// interchangeable.
    fn twin(&self, u: usize, v: usize) -> bool {
        let g = self.g;
        if g.has_loop(u) != g.has_loop(v) || g.has_edge(u, v) != g.has_edge(v, u) {
            return false;
        }
        let pair = 1u64 << u | 1u64 << v;
        (g.out_mask(u) & !pair) == (g.out_mask(v) & !pair)
            && (g.in_mask(u) & !pair) == (g.in_mask(v) & !pair)
    }

    /// The row committed by placing `v` next in `st`, in column order:
    /// placed prefix, the vertex itself, then each block minimally.
    fn row_for(&self, st: &CanonState, v: usize) -> Vec<bool> {
        let g = self.g;
        let mut row = Vec::with_capacity(self.n);
        for &p in &st.placed {
            row.push(g.has_edge(v, p));
        }
        row.push(g.has_loop(v));
        for (bi, block) in st.blocks.iter().enumerate() {
            let mut ones = 0usize;
            let mut total = 0usize;
            for &w in block {
                if bi == 0 && w == v {
                    continue;
                }
                total += 1;
                if g.has_edge(v, w) {
                    ones += 1;
                }
            }
            row.resize(row.len() + (total - ones), false);
            row.resize(row.len() + ones, true);
        }
        row
    }

    fn child(&self, st: &CanonState, v: usize) -> CanonState {
        let g = self.g;
        let mut placed = st.placed.clone();
        placed.push(v);
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (bi, block) in st.blocks.iter().enumerate() {
            let mut zeros = Vec::new();
            let mut ones = Vec::new();
            for &w in block {
                if bi == 0 && w == v {
                    continue;
                }
                if g.has_edge(v, w) {
                    ones.push(w);
                } else {
                    zeros.push(w);
                }
            }
            if !zeros.is_empty() {
                blocks.push(zeros);
            }
            if !ones.is_empty() {
                blocks.push(ones);
            }
        }
        CanonState { placed, blocks }
    }

    fn dfs(&mut self, st: &CanonState) {
        if st.placed.len() == self.n {
            match &self.best {
                Some(b) if *b <= self.committed => {}
                _ => self.best = Some(self.committed.clone()),
            }
            return;
        }
        // candidates with their rows, minimal rows first so the greedy
        // matrix is the first leaf
        let mut cands: Vec<(Vec<bool>, usize)> = Vec::new();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &st.blocks[0] {
            if tried.iter().any(|&u| self.twin(u, v)) {
                continue;
            }
            tried.push(v);
            cands.push((self.row_for(st, v), v));
        }
        cands.sort();
        let base = self.committed.len();
        for (row, v) in cands {
            // Prune against the best full matrix. The committed prefix is
            // never lexicographically above the best (pruning guarantees
            // it), so only a tied prefix constrains the next row.
            if let Some(best) = &self.best {
                let tied = self.committed.as_slice() == &best[..base];
                if tied && row.as_slice() > &best[base..base + row.len()] {
                    // rows are sorted, every later candidate is worse too
                    break;
                }
            }
            self.committed.extend_from_slice(&row);
            let child = self.child(st, v);
            self.dfs(&child);
            self.committed.truncate(base);
        }
    }
}
