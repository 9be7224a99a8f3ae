//! Enumeration of all isomorphism types up to a vertex bound, the two order
//! relations on the stored universe, both Hasse diagrams, and a plain-text
//! cache.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::digraph::{CanonCode, Digraph};
use crate::error::{CacheError, CatalogError};

/// Default enumeration bound; level 5 is allowed but must be asked for.
pub const DEFAULT_MAX_LEVEL: usize = 4;
/// Hard enumeration bound.
pub const HARD_MAX_LEVEL: usize = 5;

/// All isomorphism types with a fixed vertex count, sorted by code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub n: usize,
    pub members: Vec<CanonCode>,
}

/// Which of the two orders a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    /// substructure, graded by `|V|`
    Sub,
    /// embeddability, graded by `|V| + |E|`
    Emb,
}

/// Enumerated levels plus the cover pairs of both Hasse diagrams.
///
/// `emb_covers` is computed within the stored truncation only; covers whose
/// upper element has the maximal vertex count are exact because a cover step
/// raises the `|V|+|E|` grade by exactly one and never raises `|V|` by more
/// than one.
#[derive(Debug, Clone)]
pub struct Catalog {
    max_n: usize,
    levels: Vec<Level>,
    sub_covers: Vec<(CanonCode, CanonCode)>,
    emb_covers: Vec<(CanonCode, CanonCode)>,
    relations: Relations,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.max_n == other.max_n
            && self.levels == other.levels
            && self.sub_covers == other.sub_covers
            && self.emb_covers == other.emb_covers
    }
}

/// Square bit matrix with u64 rows.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> BitMatrix {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn or_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            let v = self.bits[src * self.words + w];
            self.bits[dst * self.words + w] |= v;
        }
    }

    fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for w in 0..self.words {
                let mut word = self.bits[i * self.words + w];
                while word != 0 {
                    let j = w * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    t.set(j, i);
                }
            }
        }
        t
    }
}

/// Global element table of a catalog with both order relations precomputed.
///
/// Element ids follow level order, then code order within a level.
#[derive(Debug, Clone)]
pub struct Relations {
    codes: Vec<CanonCode>,
    graphs: Vec<Digraph>,
    ids: HashMap<CanonCode, usize>,
    level_end: Vec<usize>,
    sub: BitMatrix,
    sub_up: BitMatrix,
    emb: BitMatrix,
    emb_up: BitMatrix,
}

impl Relations {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn code(&self, id: usize) -> &CanonCode {
        &self.codes[id]
    }

    pub fn graph(&self, id: usize) -> &Digraph {
        &self.graphs[id]
    }

    pub fn id_of(&self, code: &CanonCode) -> Option<usize> {
        self.ids.get(code).copied()
    }

    /// Ids of every element with at most `n` vertices.
    pub fn ids_up_to(&self, n: usize) -> std::ops::Range<usize> {
        let end = if n >= self.level_end.len() {
            self.len()
        } else {
            self.level_end[n]
        };
        0..end
    }

    /// `a <= b` in the requested order; both ids must be in range.
    pub fn le(&self, order: OrderKind, a: usize, b: usize) -> bool {
        match order {
            OrderKind::Sub => self.sub.get(b, a),
            OrderKind::Emb => self.emb.get(b, a),
        }
    }

    fn down_row(&self, order: OrderKind, b: usize) -> &[u64] {
        match order {
            OrderKind::Sub => self.sub.row(b),
            OrderKind::Emb => self.emb.row(b),
        }
    }

    fn up_row(&self, order: OrderKind, a: usize) -> &[u64] {
        match order {
            OrderKind::Sub => self.sub_up.row(a),
            OrderKind::Emb => self.emb_up.row(a),
        }
    }

    /// `(a, b)` is a cover pair: `a < b` with no stored element strictly
    /// between.
    pub fn is_cover(&self, order: OrderKind, a: usize, b: usize) -> bool {
        if a == b || !self.le(order, a, b) {
            return false;
        }
        let down = self.down_row(order, b);
        let up = self.up_row(order, a);
        let between: u32 = down
            .iter()
            .zip(up.iter())
            .map(|(x, y)| (x & y).count_ones())
            .sum();
        between == 2 // exactly {a, b}
    }
}

/// Enumerate one level by augmenting the previous one.
pub fn enumerate_level(n: usize) -> Result<Level, CatalogError> {
    let levels = enumerate_levels(n)?;
    Ok(levels.into_iter().nth(n - 1).expect("level built"))
}

/// Enumerate levels `1..=max_n`.
///
/// Each (n-1)-vertex representative is extended by one vertex in all
/// `2^(2(n-1)+1)` ways and the results are deduplicated by canonical form,
/// which avoids the `2^(n^2)` blowup of raw matrix enumeration.
pub fn enumerate_levels(max_n: usize) -> Result<Vec<Level>, CatalogError> {
    if max_n == 0 || max_n > HARD_MAX_LEVEL {
        return Err(CatalogError::TooLarge(max_n, HARD_MAX_LEVEL));
    }
    let mut levels: Vec<Level> = Vec::with_capacity(max_n);
    let mut reps: Vec<Digraph> = vec![
        Digraph::empty(1).expect("one vertex"),
        Digraph::from_edges(1, &[(0, 0)]).expect("one vertex"),
    ];
    levels.push(Level {
        n: 1,
        members: reps.iter().map(|g| g.canonical_form()).collect(),
    });
    for n in 2..=max_n {
        let patterns = 1u32 << (2 * (n - 1) + 1);
        let codes: BTreeSet<CanonCode> = reps
            .par_iter()
            .map(|g| {
                let mut local = BTreeSet::new();
                for bits in 0..patterns {
                    let mut h = g
                        .disjoint_union(&Digraph::empty(1).expect("one vertex"))
                        .expect("within capacity");
                    let v = n - 1;
                    for w in 0..n - 1 {
                        if bits >> w & 1 == 1 {
                            h.add_edge(v, w);
                        }
                        if bits >> (n - 1 + w) & 1 == 1 {
                            h.add_edge(w, v);
                        }
                    }
                    if bits >> (2 * (n - 1)) & 1 == 1 {
                        h.add_edge(v, v);
                    }
                    local.insert(h.canonical_form());
                }
                local
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        let members: Vec<CanonCode> = codes.into_iter().collect();
        reps = members.iter().map(|c| c.to_digraph()).collect();
        levels.push(Level { n, members });
    }
    Ok(levels)
}

fn build_relations(levels: &[Level]) -> Relations {
    let mut codes = Vec::new();
    let mut level_end = vec![0usize];
    for level in levels {
        codes.extend(level.members.iter().cloned());
        level_end.push(codes.len());
    }
    let graphs: Vec<Digraph> = codes.iter().map(|c| c.to_digraph()).collect();
    let ids: HashMap<CanonCode, usize> = codes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let m = codes.len();

    // Both relations are reflexive-transitive closures of one-step deletion:
    // vertex deletions for substructure, vertex or single-edge deletions for
    // embeddability. Process by grade so predecessors are already closed.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| graphs[i].grade());

    let mut sub = BitMatrix::new(m);
    let mut emb = BitMatrix::new(m);
    for &i in &order {
        sub.set(i, i);
        emb.set(i, i);
        let g = &graphs[i];
        if g.n() >= 2 {
            for del in g.one_vertex_deletions().expect("n >= 2") {
                let j = ids[&del];
                sub.or_into(j, i);
                emb.or_into(j, i);
            }
        }
        for (a, b) in g.edges() {
            let mut h = g.clone();
            h.remove_edge(a, b);
            let j = ids[&h.canonical_form()];
            emb.or_into(j, i);
        }
    }
    let sub_up = sub.transpose();
    let emb_up = emb.transpose();
    Relations {
        codes,
        graphs,
        ids,
        level_end,
        sub,
        sub_up,
        emb,
        emb_up,
    }
}

impl Catalog {
    /// Enumerate levels `1..=max_n` and compute both cover relations.
    pub fn build(max_n: usize) -> Result<Catalog, CatalogError> {
        let levels = enumerate_levels(max_n)?;
        Ok(Catalog::from_levels(max_n, levels))
    }

    fn from_levels(max_n: usize, levels: Vec<Level>) -> Catalog {
        let relations = build_relations(&levels);
        let m = relations.len();

        let mut sub_covers = Vec::new();
        for level in &levels[1..] {
            for upper in &level.members {
                let g = upper.to_digraph();
                for lower in g.one_vertex_deletions().expect("n >= 2") {
                    sub_covers.push((lower, upper.clone()));
                }
            }
        }
        sub_covers.sort();

        let mut emb_covers = Vec::new();
        for b in 0..m {
            for a in 0..m {
                if a != b && relations.le(OrderKind::Emb, a, b)
                    && relations.is_cover(OrderKind::Emb, a, b)
                {
                    emb_covers.push((relations.code(a).clone(), relations.code(b).clone()));
                }
            }
        }
        emb_covers.sort();

        Catalog {
            max_n,
            levels,
            sub_covers,
            emb_covers,
            relations,
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n - 1]
    }

    pub fn sub_covers(&self) -> &[(CanonCode, CanonCode)] {
        &self.sub_covers
    }

    pub fn emb_covers(&self) -> &[(CanonCode, CanonCode)] {
        &self.emb_covers
    }

    pub fn relations(&self) -> &Relations {
        &self.relations
    }

    /// Convenience: `a <= b` looked up by code; `None` when a code is not
    /// stored.
    pub fn le_codes(&self, order: OrderKind, a: &CanonCode, b: &CanonCode) -> Option<bool> {
        let ia = self.relations.id_of(a)?;
        let ib = self.relations.id_of(b)?;
        Some(self.relations.le(order, ia, ib))
    }

    /// Serialize levels or one of the Hasse diagrams.
    pub fn export(&self, what: ExportWhat, format: ExportFormat) -> String {
        match format {
            ExportFormat::Json => self.export_json(what),
            ExportFormat::Dot => self.export_dot(what),
        }
    }

    fn truncation_note(&self, what: ExportWhat) -> String {
        match what {
            ExportWhat::HasseEmb => format!(
                "embeddability covers computed within the stored universe (|V| <= {}); \
                 covers are exact for elements with |V| < {}",
                self.max_n, self.max_n
            ),
            _ => format!("complete for all types with |V| <= {}", self.max_n),
        }
    }

    fn export_json(&self, what: ExportWhat) -> String {
        let value = match what {
            ExportWhat::Levels => serde_json::json!({
                "max_n": self.max_n,
                "note": self.truncation_note(what),
                "levels": self.levels.iter().map(|l| serde_json::json!({
                    "n": l.n,
                    "count": l.members.len(),
                    "members": l.members.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
            ExportWhat::HasseSub | ExportWhat::HasseEmb => {
                let (order, covers) = match what {
                    ExportWhat::HasseSub => ("sub", &self.sub_covers),
                    _ => ("emb", &self.emb_covers),
                };
                serde_json::json!({
                    "order": order,
                    "max_n": self.max_n,
                    "note": self.truncation_note(what),
                    "nodes": self.relations.codes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "covers": covers.iter()
                        .map(|(a, b)| vec![a.to_string(), b.to_string()])
                        .collect::<Vec<_>>(),
                })
            }
        };
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    }

    fn export_dot(&self, what: ExportWhat) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "// {}", self.truncation_note(what));
        match what {
            ExportWhat::Levels => {
                let _ = writeln!(s, "graph levels {{");
                for level in &self.levels {
                    for c in &level.members {
                        let _ = writeln!(s, "  \"{c}\" [rank={}];", level.n);
                    }
                }
                let _ = writeln!(s, "}}");
            }
            ExportWhat::HasseSub | ExportWhat::HasseEmb => {
                let (name, covers) = match what {
                    ExportWhat::HasseSub => ("hasse_sub", &self.sub_covers),
                    _ => ("hasse_emb", &self.emb_covers),
                };
                let _ = writeln!(s, "digraph {name} {{");
                for c in &self.relations.codes {
                    let _ = writeln!(s, "  \"{c}\";");
                }
                for (a, b) in covers {
                    let _ = writeln!(s, "  \"{a}\" -> \"{b}\";");
                }
                let _ = writeln!(s, "}}");
            }
        }
        s
    }

    /// Write the cache layout: `level<n>.txt` with one code per line, plus
    /// `sub_covers.txt` and `emb_covers.txt` with tab-separated pairs.
    pub fn save_cache(&self, dir: &Path) -> Result<(), CacheError> {
        let io_err = |path: &Path, source| CacheError::Io {
            path: path.display().to_string(),
            source,
        };
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for level in &self.levels {
            let path = dir.join(format!("level{}.txt", level.n));
            let mut text = String::new();
            for c in &level.members {
                let _ = writeln!(text, "{c}");
            }
            fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        }
        for (name, covers) in [
            ("sub_covers.txt", &self.sub_covers),
            ("emb_covers.txt", &self.emb_covers),
        ] {
            let path = dir.join(name);
            let mut text = String::new();
            for (a, b) in covers {
                let _ = writeln!(text, "{a}\t{b}");
            }
            fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        }
        Ok(())
    }

    /// Load a cache directory written by [`Catalog::save_cache`].
    pub fn load_cache(dir: &Path) -> Result<Catalog, CacheError> {
        let mut levels = Vec::new();
        let mut n = 1;
        loop {
            let path = dir.join(format!("level{n}.txt"));
            if !path.exists() {
                break;
            }
            let text = fs::read_to_string(&path).map_err(|e| CacheError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let mut members = Vec::new();
            for (k, line) in text.lines().enumerate() {
                let code = CanonCode::parse(line).map_err(|msg| CacheError::Corrupt {
                    path: path.display().to_string(),
                    line: k + 1,
                    msg,
                })?;
                if code.n() != n {
                    return Err(CacheError::Corrupt {
                        path: path.display().to_string(),
                        line: k + 1,
                        msg: format!("expected a {n}-vertex code"),
                    });
                }
                members.push(code);
            }
            if members.is_empty() {
                return Err(CacheError::Corrupt {
                    path: path.display().to_string(),
                    line: 1,
                    msg: "empty level file".into(),
                });
            }
            levels.push(Level { n, members });
            n += 1;
        }
        if levels.is_empty() {
            return Err(CacheError::Corrupt {
                path: dir.join("level1.txt").display().to_string(),
                line: 1,
                msg: "no level files found".into(),
            });
        }
        let max_n = levels.len();
        let known: BTreeSet<CanonCode> = levels
            .iter()
            .flat_map(|l| l.members.iter().cloned())
            .collect();

        let load_covers = |name: &str| -> Result<Vec<(CanonCode, CanonCode)>, CacheError> {
            let path = dir.join(name);
            let text = fs::read_to_string(&path).map_err(|e| CacheError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let mut covers = Vec::new();
            for (k, line) in text.lines().enumerate() {
                let corrupt = |msg: String| CacheError::Corrupt {
                    path: path.display().to_string(),
                    line: k + 1,
                    msg,
                };
                let (a, b) = line
                    .split_once('\t')
                    .ok_or_else(|| corrupt("expected two tab-separated codes".into()))?;
                let a = CanonCode::parse(a).map_err(corrupt)?;
                let b = CanonCode::parse(b).map_err(corrupt)?;
                if !known.contains(&a) || !known.contains(&b) {
                    return Err(corrupt("cover code not present in any level".into()));
                }
                covers.push((a, b));
            }
            Ok(covers)
        };
        let sub_covers = load_covers("sub_covers.txt")?;
        let emb_covers = load_covers("emb_covers.txt")?;

        let relations = build_relations(&levels);
        Ok(Catalog {
            max_n,
            levels,
            sub_covers,
            emb_covers,
            relations,
        })
    }
}

/// What to export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportWhat {
    Levels,
    HasseSub,
    HasseEmb,
}

/// Export serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Cache directory: `DPOSET_CACHE_DIR` when set, else `./.dposet-cache`.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("DPOSET_CACHE_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from("./.dposet-cache"),
    }
}

/// Group a catalog's cover pairs by lower element (used by reports/tests).
pub fn covers_above(covers: &[(CanonCode, CanonCode)]) -> BTreeMap<CanonCode, Vec<CanonCode>> {
    let mut map: BTreeMap<CanonCode, Vec<CanonCode>> = BTreeMap::new();
    for (lower, upper) in covers {
        map.entry(lower.clone()).or_default().push(upper.clone());
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{is_embeddable, is_substructure};
    use crate::families;

    #[test]
    fn small_level_sizes() {
        let levels = enumerate_levels(3).unwrap();
        assert_eq!(levels[0].members.len(), 2);
        assert_eq!(levels[1].members.len(), 10);
        assert_eq!(levels[2].members.len(), 104);
        assert!(matches!(
            enumerate_levels(6).unwrap_err(),
            CatalogError::TooLarge(6, 5)
        ));
    }

    #[test]
    fn relations_agree_with_search_on_level_3() {
        let catalog = Catalog::build(3).unwrap();
        let rel = catalog.relations();
        for a in 0..rel.len() {
            for b in 0..rel.len() {
                let ga = rel.graph(a);
                let gb = rel.graph(b);
                assert_eq!(
                    rel.le(OrderKind::Sub, a, b),
                    is_substructure(ga, gb),
                    "sub mismatch at {} vs {}",
                    rel.code(a),
                    rel.code(b)
                );
                assert_eq!(
                    rel.le(OrderKind::Emb, a, b),
                    is_embeddable(ga, gb),
                    "emb mismatch at {} vs {}",
                    rel.code(a),
                    rel.code(b)
                );
            }
        }
    }

    #[test]
    fn sub_cover_grading() {
        let catalog = Catalog::build(3).unwrap();
        for (lower, upper) in catalog.sub_covers() {
            assert_eq!(upper.n(), lower.n() + 1);
            assert!(is_substructure(&lower.to_digraph(), &upper.to_digraph()));
        }
        // every level-2+ member has at least one lower cover
        for level in &catalog.levels()[1..] {
            for m in &level.members {
                assert!(catalog.sub_covers().iter().any(|(_, u)| u == m));
            }
        }
    }

    #[test]
    fn emb_covers_step_one_grade() {
        let catalog = Catalog::build(3).unwrap();
        for (lower, upper) in catalog.emb_covers() {
            let gl = lower.to_digraph();
            let gu = upper.to_digraph();
            assert_eq!(gu.grade(), gl.grade() + 1, "{lower} -> {upper}");
        }
    }

    #[test]
    fn export_is_deterministic() {
        let catalog = Catalog::build(2).unwrap();
        let a = catalog.export(ExportWhat::HasseSub, ExportFormat::Dot);
        let b = catalog.export(ExportWhat::HasseSub, ExportFormat::Dot);
        assert_eq!(a, b);
        // node count for max_n = 2: all 12 stored types
        let nodes = a
            .lines()
            .filter(|l| l.ends_with("\";") && !l.contains("->"))
            .count();
        assert_eq!(nodes, 12);
        let json = catalog.export(ExportWhat::Levels, ExportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["levels"][0]["count"], 2);
        assert_eq!(v["levels"][1]["count"], 10);
    }

    #[test]
    fn cache_round_trip() {
        let catalog = Catalog::build(3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        catalog.save_cache(dir.path()).unwrap();
        let loaded = Catalog::load_cache(dir.path()).unwrap();
        assert_eq!(catalog, loaded);
        assert_eq!(
            loaded.levels().iter().map(|l| l.members.len()).collect::<Vec<_>>(),
            vec![2, 10, 104]
        );
    }

    #[test]
    fn cache_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            Catalog::load_cache(dir.path()).unwrap_err(),
            CacheError::Corrupt { .. }
        ));
        let catalog = Catalog::build(2).unwrap();
        catalog.save_cache(dir.path()).unwrap();
        std::fs::write(dir.path().join("level2.txt"), "2:0000\nnot-a-code\n").unwrap();
        let err = Catalog::load_cache(dir.path()).unwrap_err();
        match err {
            CacheError::Corrupt { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn le_codes_lookup() {
        let catalog = Catalog::build(3).unwrap();
        let i2 = families::line(2).unwrap().canonical_form();
        let o3 = families::circle(3).unwrap().canonical_form();
        assert_eq!(catalog.le_codes(OrderKind::Sub, &i2, &o3), Some(true));
        assert_eq!(catalog.le_codes(OrderKind::Emb, &o3, &i2), Some(false));
        let o4 = families::circle(4).unwrap().canonical_form();
        assert_eq!(catalog.le_codes(OrderKind::Sub, &i2, &o4), None);
    }
}
