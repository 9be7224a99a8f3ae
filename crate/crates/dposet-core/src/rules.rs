//! Local automorphism rules: order-automorphism candidates determined by
//! their action on the 1- and 2-vertex labeled digraphs.
//!
//! A rule rewrites loops vertexwise and, for every vertex pair, rewrites the
//! cross edges as a function of the pair's original labeled type. All
//! rewrites are simultaneous, so composition and group closure can be
//! computed exactly on the rule tables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::catalog::{OrderKind, Relations};
use crate::digraph::{CanonCode, Digraph};
use crate::error::RuleError;

/// Labeled 2-vertex type index: bit 0 = loop on a, bit 1 = loop on b,
/// bit 2 = edge a->b, bit 3 = edge b->a.
const TYPES: usize = 16;

fn swap_type(t: usize) -> usize {
    let la = t & 1;
    let lb = t >> 1 & 1;
    let ab = t >> 2 & 1;
    let ba = t >> 3 & 1;
    lb | la << 1 | ba << 2 | ab << 3
}

/// A locality-respecting automorphism candidate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LocalRule {
    /// image of the loop bit on 1-vertex types
    vmap: [bool; 2],
    /// image of each labeled 2-vertex type
    pmap: [u8; TYPES],
}

impl LocalRule {
    pub fn identity() -> LocalRule {
        let mut pmap = [0u8; TYPES];
        for (t, entry) in pmap.iter_mut().enumerate() {
            *entry = t as u8;
        }
        LocalRule {
            vmap: [false, true],
            pmap,
        }
    }

    /// Build without validating; [`LocalRule::validate`] or
    /// [`verify_automorphism`] will expose a broken table.
    pub fn from_tables_raw(vmap: [bool; 2], pmap: [u8; TYPES]) -> LocalRule {
        LocalRule { vmap, pmap }
    }

    pub fn from_tables(vmap: [bool; 2], pmap: [u8; TYPES]) -> Result<LocalRule, RuleError> {
        let rule = LocalRule { vmap, pmap };
        rule.validate()?;
        Ok(rule)
    }

    /// Check the three local-rule invariants: both tables are bijections,
    /// the pair table commutes with exchanging the two vertices, and the
    /// loop bits of every pair image agree with the vertex table.
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.vmap[0] == self.vmap[1] {
            return Err(RuleError::InvalidRule("vmap is not a bijection".into()));
        }
        let mut seen = [false; TYPES];
        for t in 0..TYPES {
            let img = self.pmap[t] as usize;
            if img >= TYPES || seen[img] {
                return Err(RuleError::InvalidRule("pmap is not a bijection".into()));
            }
            seen[img] = true;
            if self.pmap[swap_type(t)] as usize != swap_type(img) {
                return Err(RuleError::InvalidRule(format!(
                    "pmap is not swap-equivariant at type {t}"
                )));
            }
            let la = self.vmap[t & 1] as usize;
            let lb = self.vmap[t >> 1 & 1] as usize;
            if img & 3 != la | lb << 1 {
                return Err(RuleError::InvalidRule(format!(
                    "pmap loop bits disagree with vmap at type {t}"
                )));
            }
        }
        Ok(())
    }

    /// Rewrite a digraph: loops by the vertex table, every pair's cross
    /// edges by the pair table, all reads against the original.
    pub fn apply(&self, g: &Digraph) -> Digraph {
        let n = g.n();
        let mut out = Digraph::empty(n).expect("same size");
        for v in 0..n {
            if self.vmap[g.has_loop(v) as usize] {
                out.add_edge(v, v);
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let t = g.has_loop(a) as usize
                    | (g.has_loop(b) as usize) << 1
                    | (g.has_edge(a, b) as usize) << 2
                    | (g.has_edge(b, a) as usize) << 3;
                let img = self.pmap[t] as usize;
                if img >> 2 & 1 == 1 {
                    out.add_edge(a, b);
                }
                if img >> 3 & 1 == 1 {
                    out.add_edge(b, a);
                }
            }
        }
        out
    }

    pub fn inverse(&self) -> LocalRule {
        let mut vmap = [false; 2];
        vmap[self.vmap[0] as usize] = false;
        vmap[self.vmap[1] as usize] = true;
        let mut pmap = [0u8; TYPES];
        for t in 0..TYPES {
            pmap[self.pmap[t] as usize] = t as u8;
        }
        LocalRule { vmap, pmap }
    }

    /// Image of a 2-vertex isomorphism type under this rule's tables.
    pub fn type_image(&self, code: &CanonCode) -> CanonCode {
        self.apply(&code.to_digraph()).canonical_form()
    }
}

/// The unique rule with `apply(result, g) = apply(r2, apply(r1, g))`.
pub fn compose(r1: &LocalRule, r2: &LocalRule) -> LocalRule {
    let mut vmap = [false; 2];
    for x in 0..2 {
        vmap[x] = r2.vmap[r1.vmap[x] as usize];
    }
    let mut pmap = [0u8; TYPES];
    for t in 0..TYPES {
        pmap[t] = r2.pmap[r1.pmap[t] as usize];
    }
    LocalRule { vmap, pmap }
}

/// A permutation of the four mixed-pair letters `{A, B, C, D}`.
///
/// `A` is the loop-plus-isolated-vertex pair; `B` has the edge leaving the
/// looped vertex, `C` the edge entering it, `D` both.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub fn identity() -> Perm4 {
        Perm4([0, 1, 2, 3])
    }

    pub fn image(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self` after `other`.
    pub fn compose_after(&self, other: &Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for (x, entry) in out.iter_mut().enumerate() {
            *entry = self.0[other.0[x] as usize];
        }
        Perm4(out)
    }

    /// Conjugate by the transposition `(BC)`.
    pub fn bc_conjugate(&self) -> Perm4 {
        let bc = Perm4([0, 2, 1, 3]);
        bc.compose_after(self).compose_after(&bc)
    }

    /// Parse cycle notation over `{A,B,C,D}` (e.g. `(AB)(CD)`), one-line
    /// notation (`BACD` = images of A,B,C,D), or `id`.
    pub fn parse(text: &str) -> Result<Perm4, RuleError> {
        let bad = || RuleError::BadPermutation(text.to_string());
        let letter = |c: char| "ABCD".find(c).ok_or_else(bad);
        if text == "id" || text == "()" {
            return Ok(Perm4::identity());
        }
        if text.starts_with('(') {
            let mut map = [4u8; 4];
            let mut chars = text.chars().peekable();
            while chars.peek().is_some() {
                if chars.next() != Some('(') {
                    return Err(bad());
                }
                let mut cycle = Vec::new();
                for c in chars.by_ref() {
                    if c == ')' {
                        break;
                    }
                    cycle.push(letter(c)?);
                }
                if cycle.is_empty() {
                    return Err(bad());
                }
                for (k, &x) in cycle.iter().enumerate() {
                    let img = cycle[(k + 1) % cycle.len()] as u8;
                    if map[x] != 4 {
                        return Err(bad());
                    }
                    map[x] = img;
                }
            }
            for (x, entry) in map.iter_mut().enumerate() {
                if *entry == 4 {
                    *entry = x as u8;
                }
            }
            let p = Perm4(map);
            return if is_perm(&p.0) { Ok(p) } else { Err(bad()) };
        }
        if text.len() == 4 {
            let mut map = [0u8; 4];
            for (x, c) in text.chars().enumerate() {
                map[x] = letter(c)? as u8;
            }
            if is_perm(&map) {
                return Ok(Perm4(map));
            }
        }
        Err(bad())
    }

    /// One-line rendering, e.g. `BACD`.
    pub fn one_line(&self) -> String {
        self.0.iter().map(|&x| "ABCD".as_bytes()[x as usize] as char).collect()
    }

    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        let mut items = [0u8, 1, 2, 3];
        permute(&mut items, 0, &mut out);
        out.sort_by_key(|p| p.0);
        out
    }
}

fn permute(items: &mut [u8; 4], k: usize, out: &mut Vec<Perm4>) {
    if k == 4 {
        out.push(Perm4(*items));
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn is_perm(map: &[u8; 4]) -> bool {
    let mut seen = [false; 4];
    for &x in map {
        if x > 3 || seen[x as usize] {
            return false;
        }
        seen[x as usize] = true;
    }
    true
}

/// The loop-exchange rule: clear every loop, insert one where there is none.
pub fn phi1() -> LocalRule {
    let mut pmap = [0u8; TYPES];
    for (t, entry) in pmap.iter_mut().enumerate() {
        *entry = (t ^ 0b0011) as u8;
    }
    LocalRule {
        vmap: [true, false],
        pmap,
    }
}

fn swap_two_types(a: usize, b: usize) -> LocalRule {
    let mut rule = LocalRule::identity();
    rule.pmap[a] = b as u8;
    rule.pmap[b] = a as u8;
    rule
}

/// Exchange the loopless empty pair `E` with the loopless 2-cycle `E'`.
pub fn phi2() -> LocalRule {
    swap_two_types(0b0000, 0b1100)
}

/// Exchange the double-loop pair `L` with the double-loop 2-cycle `L'`.
pub fn phi3() -> LocalRule {
    swap_two_types(0b0011, 0b1111)
}

/// Reverse the edge in single-edge loopless pairs (`P`).
pub fn phi4() -> LocalRule {
    swap_two_types(0b0100, 0b1000)
}

/// Reverse the edge in single-edge double-loop pairs (`Q`).
pub fn phi5() -> LocalRule {
    swap_two_types(0b0111, 0b1011)
}

/// Permute the mixed-pair letters by `pi`, keeping loops in place.
pub fn phi_pi(pi: &Perm4) -> LocalRule {
    let mut rule = LocalRule::identity();
    for ab in 0..2usize {
        for ba in 0..2usize {
            // loop on a
            let letter = ab | ba << 1;
            let img = pi.image(letter);
            rule.pmap[0b0001 | ab << 2 | ba << 3] =
                (0b0001 | (img & 1) << 2 | (img >> 1) << 3) as u8;
            // loop on b: the letter reads the edge at the looped vertex first
            let letter = ba | ab << 1;
            let img = pi.image(letter);
            rule.pmap[0b0010 | ab << 2 | ba << 3] =
                (0b0010 | (img >> 1) << 2 | (img & 1) << 3) as u8;
        }
    }
    rule
}

/// Resolve a generator name: `phi1`..`phi5` or `pi:<permutation of ABCD>`.
pub fn rule_of_generator(name: &str) -> Result<LocalRule, RuleError> {
    match name {
        "phi1" => Ok(phi1()),
        "phi2" => Ok(phi2()),
        "phi3" => Ok(phi3()),
        "phi4" => Ok(phi4()),
        "phi5" => Ok(phi5()),
        _ => match name.strip_prefix("pi:") {
            Some(perm) => Ok(phi_pi(&Perm4::parse(perm)?)),
            None => Err(RuleError::UnknownGenerator(name.to_string())),
        },
    }
}

/// All conjectured generators with their CLI names.
pub fn all_generators() -> Vec<(String, LocalRule)> {
    let mut out = vec![
        ("phi1".to_string(), phi1()),
        ("phi2".to_string(), phi2()),
        ("phi3".to_string(), phi3()),
        ("phi4".to_string(), phi4()),
        ("phi5".to_string(), phi5()),
    ];
    for pi in Perm4::all() {
        out.push((format!("pi:{}", pi.one_line()), phi_pi(&pi)));
    }
    out
}

/// Smallest composition-closed set containing the generators and the
/// identity, in table order.
pub fn closure(generators: &[LocalRule]) -> Vec<LocalRule> {
    let mut known: BTreeSet<LocalRule> = BTreeSet::new();
    known.insert(LocalRule::identity());
    let mut frontier: Vec<LocalRule> = vec![LocalRule::identity()];
    while let Some(next) = {
        let mut new_elems = Vec::new();
        for elem in &frontier {
            for gen in generators {
                let prod = compose(elem, gen);
                if !known.contains(&prod) {
                    known.insert(prod);
                    new_elems.push(prod);
                }
            }
        }
        if new_elems.is_empty() {
            None
        } else {
            Some(new_elems)
        }
    } {
        frontier = next;
    }
    known.into_iter().collect()
}

/// One verification check in a report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            status: "pass".into(),
            witness: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            status: "fail".into(),
            witness: Some(witness.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed())
}

/// Check that a rule acts as an order automorphism on the stored universe:
/// it must permute every level's codes and preserve the substructure
/// relation on all pairs.
pub fn verify_automorphism(rule: &LocalRule, rel: &Relations, max_n: usize) -> Vec<CheckReport> {
    let mut reports = Vec::new();
    let range = rel.ids_up_to(max_n);
    let mut image = vec![usize::MAX; range.end];
    let mut image_seen = vec![false; range.end];
    let mut bijective = true;
    for id in range.clone() {
        let img_code = rule.apply(rel.graph(id)).canonical_form();
        match rel.id_of(&img_code) {
            Some(img) if img < range.end && !image_seen[img] => {
                image_seen[img] = true;
                image[id] = img;
            }
            _ => {
                reports.push(CheckReport::fail(
                    format!("level-bijection(max_n={max_n})"),
                    format!("{} -> {}", rel.code(id), img_code),
                ));
                bijective = false;
                break;
            }
        }
    }
    if bijective {
        reports.push(CheckReport::pass(format!("level-bijection(max_n={max_n})")));
        let mut violation = None;
        'outer: for a in range.clone() {
            for b in range.clone() {
                let before = rel.le(OrderKind::Sub, a, b);
                let after = rel.le(OrderKind::Sub, image[a], image[b]);
                if before != after {
                    violation = Some((a, b));
                    break 'outer;
                }
            }
        }
        match violation {
            None => reports.push(CheckReport::pass(format!("order-preservation(max_n={max_n})"))),
            Some((a, b)) => reports.push(CheckReport::fail(
                format!("order-preservation(max_n={max_n})"),
                format!("({}, {})", rel.code(a), rel.code(b)),
            )),
        }
    }
    reports
}

fn power(rule: &LocalRule, e: usize) -> LocalRule {
    let mut out = LocalRule::identity();
    for _ in 0..e {
        out = compose(&out, rule);
    }
    out
}

/// The group element written `phi2^p phi3^q phi4^r phi5^s phi_pi phi1^eps`
/// (rightmost factor applied first).
fn word(p: usize, q: usize, r: usize, s: usize, pi: &Perm4, eps: usize) -> LocalRule {
    let mut out = power(&phi1(), eps);
    out = compose(&out, &phi_pi(pi));
    out = compose(&out, &power(&phi5(), s));
    out = compose(&out, &power(&phi4(), r));
    out = compose(&out, &power(&phi3(), q));
    out = compose(&out, &power(&phi2(), p));
    out
}

/// Verify the structural identities of the conjectured group as rule-table
/// identities: involutions, commutation, the permutation subgroup law, the
/// conjugation action of the loop exchange, the subgroup orders, and the
/// semidirect-product normal form.
pub fn verify_structure() -> Vec<CheckReport> {
    let mut reports = Vec::new();
    let id = LocalRule::identity();
    let gens = [phi1(), phi2(), phi3(), phi4(), phi5()];
    let names = ["phi1", "phi2", "phi3", "phi4", "phi5"];

    for (g, name) in gens.iter().zip(names) {
        if compose(g, g) == id {
            reports.push(CheckReport::pass(format!("{name} is an involution")));
        } else {
            reports.push(CheckReport::fail(format!("{name} is an involution"), "table"));
        }
    }

    let mut commute_ok = true;
    let mut witness = String::new();
    for i in 1..5 {
        for j in i + 1..5 {
            if compose(&gens[i], &gens[j]) != compose(&gens[j], &gens[i]) {
                commute_ok = false;
                witness = format!("{} vs {}", names[i], names[j]);
            }
        }
        for pi in Perm4::all() {
            let p = phi_pi(&pi);
            if compose(&gens[i], &p) != compose(&p, &gens[i]) {
                commute_ok = false;
                witness = format!("{} vs pi:{}", names[i], pi.one_line());
            }
        }
    }
    reports.push(if commute_ok {
        CheckReport::pass("phi2..phi5 commute pairwise and with every phi_pi")
    } else {
        CheckReport::fail("phi2..phi5 commute pairwise and with every phi_pi", witness)
    });

    let mut pi_law = true;
    let mut witness = String::new();
    for a in Perm4::all() {
        for b in Perm4::all() {
            // phi_a phi_b applies phi_b first
            let lhs = compose(&phi_pi(&b), &phi_pi(&a));
            let rhs = phi_pi(&a.compose_after(&b));
            if lhs != rhs {
                pi_law = false;
                witness = format!("pi:{} * pi:{}", a.one_line(), b.one_line());
            }
        }
    }
    reports.push(if pi_law {
        CheckReport::pass("phi_pi . phi_sigma = phi_(pi sigma)")
    } else {
        CheckReport::fail("phi_pi . phi_sigma = phi_(pi sigma)", witness)
    });

    let conj = |g: &LocalRule| compose(&compose(&phi1(), g), &phi1());
    let pairs = [
        ("phi1 phi2 phi1 = phi3", conj(&phi2()) == phi3()),
        ("phi1 phi3 phi1 = phi2", conj(&phi3()) == phi2()),
        ("phi1 phi4 phi1 = phi5", conj(&phi4()) == phi5()),
        ("phi1 phi5 phi1 = phi4", conj(&phi5()) == phi4()),
    ];
    for (name, ok) in pairs {
        reports.push(if ok {
            CheckReport::pass(name)
        } else {
            CheckReport::fail(name, "table")
        });
    }
    let mut conj_pi = true;
    let mut witness = String::new();
    for pi in Perm4::all() {
        if conj(&phi_pi(&pi)) != phi_pi(&pi.bc_conjugate()) {
            conj_pi = false;
            witness = format!("pi:{}", pi.one_line());
        }
    }
    reports.push(if conj_pi {
        CheckReport::pass("phi1 phi_pi phi1 = phi_((BC) pi (BC))")
    } else {
        CheckReport::fail("phi1 phi_pi phi1 = phi_((BC) pi (BC))", witness)
    });

    let all: Vec<LocalRule> = all_generators().into_iter().map(|(_, g)| g).collect();
    let full = closure(&all);
    reports.push(if full.len() == 768 {
        CheckReport::pass("closure of all generators has order 768")
    } else {
        CheckReport::fail(
            "closure of all generators has order 768",
            format!("order {}", full.len()),
        )
    });
    let without: Vec<LocalRule> = all_generators()
        .into_iter()
        .filter(|(name, _)| name != "phi1")
        .map(|(_, g)| g)
        .collect();
    let sub = closure(&without);
    reports.push(if sub.len() == 384 && full.len() == 2 * sub.len() {
        CheckReport::pass("subgroup without phi1 has order 384 and index 2")
    } else {
        CheckReport::fail(
            "subgroup without phi1 has order 384 and index 2",
            format!("order {}", sub.len()),
        )
    });

    // normal form bijection and the semidirect multiplication law
    let pis = Perm4::all();
    let mut tuples = Vec::new();
    let mut elems = BTreeSet::new();
    for eps in 0..2usize {
        for pi in &pis {
            for bits in 0..16usize {
                let (p, q, r, s) = (bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1);
                let elem = word(p, q, r, s, pi, eps);
                tuples.push(((p, q, r, s, *pi, eps), elem));
                elems.insert(elem);
            }
        }
    }
    let full_set: BTreeSet<LocalRule> = full.iter().copied().collect();
    reports.push(if elems.len() == 768 && elems == full_set {
        CheckReport::pass("(p,q,r,s,pi,eps) normal form is a bijection onto the closure")
    } else {
        CheckReport::fail(
            "(p,q,r,s,pi,eps) normal form is a bijection onto the closure",
            format!("{} distinct words", elems.len()),
        )
    });

    let mul_tuple = |a: &(usize, usize, usize, usize, Perm4, usize),
                     b: &(usize, usize, usize, usize, Perm4, usize)| {
        let (p1, q1, r1, s1, pi1, e1) = *a;
        let (p2, q2, r2, s2, pi2, e2) = *b;
        // alpha(1) swaps p<->q, r<->s and conjugates pi by (BC)
        let (p2, q2, r2, s2, pi2) = if e1 == 1 {
            (q2, p2, s2, r2, pi2.bc_conjugate())
        } else {
            (p2, q2, r2, s2, pi2)
        };
        (
            p1 ^ p2,
            q1 ^ q2,
            r1 ^ r2,
            s1 ^ s2,
            pi1.compose_after(&pi2),
            e1 ^ e2,
        )
    };
    let mut law_ok = true;
    let mut witness = String::new();
    'law: for (ta, ea) in &tuples {
        for (tb, eb) in &tuples {
            // the product (a, b) applies b first
            let prod = compose(eb, ea);
            let (p, q, r, s, pi, eps) = mul_tuple(ta, tb);
            if prod != word(p, q, r, s, &pi, eps) {
                law_ok = false;
                witness = format!("{ta:?} * {tb:?}");
                break 'law;
            }
        }
    }
    reports.push(if law_ok {
        CheckReport::pass("multiplication matches the semidirect law")
    } else {
        CheckReport::fail("multiplication matches the semidirect law", witness)
    });

    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn generator_actions() {
        let l1 = families::loops(1).unwrap();
        let e1 = families::empty(1).unwrap();
        assert_eq!(phi1().apply(&l1), e1);
        assert_eq!(phi1().apply(&e1), l1);

        let e2 = families::empty(2).unwrap();
        let two_cycle = families::two_vertex_type(false, false, true, true);
        assert_eq!(phi2().apply(&e2), two_cycle);

        // pi:(AB) sends the A-type pair to the B-type pair, i.e. L_arrow
        let a_pair = families::two_vertex_type(true, false, false, false);
        let rule = rule_of_generator("pi:(AB)").unwrap();
        assert!(rule.apply(&a_pair).is_isomorphic(&families::l_arrow()));
    }

    #[test]
    fn generators_are_valid_rules() {
        for (name, rule) in all_generators() {
            assert!(rule.validate().is_ok(), "{name} table invalid");
        }
    }

    #[test]
    fn apply_identity_and_involutions() {
        let id = LocalRule::identity();
        let o3 = families::circle(3).unwrap();
        assert_eq!(id.apply(&o3), o3);
        for rule in [phi1(), phi2(), phi3(), phi4(), phi5()] {
            assert_eq!(compose(&rule, &rule), id);
            assert_eq!(rule.apply(&rule.apply(&o3)), o3);
        }
        assert_eq!(compose(&phi1(), &phi1().inverse()), id);
    }

    #[test]
    fn phi4_preserves_the_type_but_moves_the_matrix() {
        let p = families::two_vertex_type(false, false, true, false);
        let img = phi4().apply(&p);
        assert_ne!(img, p);
        assert!(img.is_isomorphic(&p));
    }

    #[test]
    fn compose_matches_sequential_application() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let composed = compose(&phi1(), &phi2());
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let mut g = Digraph::empty(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(i, j);
                    }
                }
            }
            assert_eq!(composed.apply(&g), phi2().apply(&phi1().apply(&g)));
        }
    }

    #[test]
    fn closure_orders() {
        assert_eq!(closure(&[phi1()]).len(), 2);
        let pis: Vec<LocalRule> = Perm4::all().iter().map(phi_pi).collect();
        assert_eq!(closure(&pis).len(), 24);
    }

    #[test]
    fn permutation_parsing() {
        assert_eq!(Perm4::parse("(AB)").unwrap().one_line(), "BACD");
        assert_eq!(Perm4::parse("(AB)(CD)").unwrap().one_line(), "BADC");
        assert_eq!(Perm4::parse("(ABCD)").unwrap().one_line(), "BCDA");
        assert_eq!(Perm4::parse("BACD").unwrap().one_line(), "BACD");
        assert_eq!(Perm4::parse("id").unwrap().one_line(), "ABCD");
        assert!(Perm4::parse("(AA)").is_err());
        assert!(Perm4::parse("BBCD").is_err());
        assert!(Perm4::parse("(AX)").is_err());
        assert!(rule_of_generator("pi:(AX)").is_err());
        assert!(rule_of_generator("nope").is_err());
    }

    #[test]
    fn generators_pass_at_level_3() {
        let catalog = crate::catalog::Catalog::build(3).unwrap();
        for (name, rule) in all_generators() {
            let reports = verify_automorphism(&rule, catalog.relations(), 3);
            assert!(all_passed(&reports), "{name} failed: {reports:?}");
        }
    }

    #[test]
    fn corrupted_rule_fails_with_witness() {
        // swap E and P: bijective and loop-consistent but not
        // swap-equivariant, so it cannot be an automorphism
        let mut pmap = LocalRule::identity().pmap;
        pmap[0b0000] = 0b0100;
        pmap[0b0100] = 0b0000;
        let rule = LocalRule::from_tables_raw([false, true], pmap);
        assert!(rule.validate().is_err());
        let catalog = crate::catalog::Catalog::build(3).unwrap();
        let reports = verify_automorphism(&rule, catalog.relations(), 3);
        assert!(!all_passed(&reports));
        assert!(reports.iter().any(|r| !r.passed() && r.witness.is_some()));
    }

    #[test]
    fn structure_identities_hold() {
        let reports = verify_structure();
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.check, r.witness);
        }
    }

    #[test]
    fn grading_is_preserved() {
        let gens = all_generators();
        let o4 = families::circle(4).unwrap();
        for (_, rule) in &gens {
            assert_eq!(rule.apply(&o4).n(), 4);
        }
    }
}
