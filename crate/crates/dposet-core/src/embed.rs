//! Decision procedures for the two orders: substructure (induced copy, only
//! vertex deletion) and embeddability (injective homomorphism, vertex and
//! edge deletion).
//!
//! Both are backtracking searches over partial injections with bitmask
//! candidate filtering; hosts in the edge-supporting pipeline reach ~40
//! vertices, where enumerating all injections outright is infeasible.

use crate::digraph::Digraph;

/// True iff some vertex subset of `host` induces a digraph isomorphic to
/// `pattern`.
pub fn is_substructure(pattern: &Digraph, host: &Digraph) -> bool {
    Matcher::new(pattern, host, true).run()
}

/// True iff an injective map carries every edge of `pattern` to an edge of
/// `host` (non-edges unconstrained).
pub fn is_embeddable(pattern: &Digraph, host: &Digraph) -> bool {
    Matcher::new(pattern, host, false).run()
}

struct Matcher<'a> {
    pattern: &'a Digraph,
    host: &'a Digraph,
    induced: bool,
    /// in-neighbour masks of the host, by vertex
    host_in: Vec<u64>,
    /// pattern vertices in matching order
    order: Vec<usize>,
    /// loop/degree-feasible host vertices per pattern vertex
    base: Vec<u64>,
    /// image of pattern vertex, usize::MAX when unplaced
    image: Vec<usize>,
    used: u64,
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Digraph, host: &'a Digraph, induced: bool) -> Matcher<'a> {
        let np = pattern.n();
        let nh = host.n();
        let host_in: Vec<u64> = (0..nh).map(|v| host.in_mask(v)).collect();

        let mut base = vec![0u64; np];
        for v in 0..np {
            let p_loop = pattern.has_loop(v);
            let p_out = (pattern.out_mask(v) & !(1 << v)).count_ones();
            let p_in = (pattern.in_mask(v) & !(1 << v)).count_ones();
            for u in 0..nh {
                let h_loop = host.has_loop(u);
                let loop_ok = if induced { p_loop == h_loop } else { !p_loop || h_loop };
                let h_out = (host.out_mask(u) & !(1 << u)).count_ones();
                let h_in = (host_in[u] & !(1 << u)).count_ones();
                if loop_ok && p_out <= h_out && p_in <= h_in {
                    base[v] |= 1 << u;
                }
            }
        }

        // Matching order: start from the most constrained vertex, then grow
        // along pattern adjacency so edge constraints bite early.
        let mut order = Vec::with_capacity(np);
        let mut placed = vec![false; np];
        let sym = |v: usize| pattern.out_mask(v) | pattern.in_mask(v);
        while order.len() < np {
            let next = (0..np)
                .filter(|&v| !placed[v])
                .min_by_key(|&v| {
                    let placed_nbrs = order
                        .iter()
                        .filter(|&&w| sym(v) >> w & 1 == 1)
                        .count();
                    let cands = base[v].count_ones();
                    // more placed neighbours first, then fewer candidates,
                    // then higher degree
                    (
                        usize::MAX - placed_nbrs,
                        cands,
                        u32::MAX - sym(v).count_ones(),
                        v,
                    )
                })
                .expect("unplaced vertex exists");
            placed[next] = true;
            order.push(next);
        }

        Matcher {
            pattern,
            host,
            induced,
            host_in,
            order,
            base,
            image: vec![usize::MAX; np],
            used: 0,
        }
    }

    fn run(&mut self) -> bool {
        if self.pattern.n() > self.host.n()
            || self.pattern.edge_count() > self.host.edge_count()
        {
            return false;
        }
        self.dfs(0)
    }

    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let mut cands = self.base[v] & !self.used;
        // constraints against already placed pattern vertices
        for &w in &self.order[..depth] {
            let x = self.image[w];
            if self.pattern.has_edge(v, w) {
                cands &= self.host_in[x]; // u -> x required
            } else if self.induced {
                cands &= !self.host_in[x];
            }
            if self.pattern.has_edge(w, v) {
                cands &= self.host.out_mask(x); // x -> u required
            } else if self.induced {
                cands &= !self.host.out_mask(x);
            }
            if cands == 0 {
                return false;
            }
        }
        let mut m = cands;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            self.image[v] = u;
            self.used |= 1 << u;
            if self.dfs(depth + 1) {
                return true;
            }
            self.used &= !(1 << u);
            self.image[v] = usize::MAX;
        }
        false
    }
}
