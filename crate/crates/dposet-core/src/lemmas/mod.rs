//! The lemma verifier: a registry of structural claims, each executed
//! either over the truncated universe against a ground-truth oracle
//! (universe mode) or on constructed witness digraphs with per-condition
//! checks, uniqueness sweeps, and negative controls (targeted mode).

mod decode;
mod patterns;
mod targeted;
mod universe;

pub use decode::{decode, forward_witness, LOOP_DECODE_NOTE};
pub use universe::io_definition;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::Catalog;
use crate::digraph::{CanonCode, Digraph};
use crate::error::LemmaError;
use crate::families::{self, SupportSpec};

/// Identifies one registered lemma verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LemmaId {
    IoDef,
    IoChar,
    CirclesSet,
    LoopParts,
    ArrowRel,
    Addition,
    SameSize,
    Multiplication,
    IoUnion,
    DistinctCircles,
    CountedAttach,
    CircleCount,
    GnPart,
    UnionWithCircles,
    MaleRel,
    AttachRel,
    SupportRel,
    Certificate,
    MainTheorem,
}

/// How a lemma is verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaMode {
    Universe,
    Targeted,
}

impl LemmaId {
    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaId::IoDef => "io-def",
            LemmaId::IoChar => "io-char",
            LemmaId::CirclesSet => "circles-set",
            LemmaId::LoopParts => "loop-parts",
            LemmaId::ArrowRel => "arrow-rel",
            LemmaId::Addition => "addition",
            LemmaId::SameSize => "same-size",
            LemmaId::Multiplication => "multiplication",
            LemmaId::IoUnion => "io-union",
            LemmaId::DistinctCircles => "distinct-circles",
            LemmaId::CountedAttach => "counted-attach",
            LemmaId::CircleCount => "circle-count",
            LemmaId::GnPart => "gn-part",
            LemmaId::UnionWithCircles => "union-with-circles",
            LemmaId::MaleRel => "male-rel",
            LemmaId::AttachRel => "attach-rel",
            LemmaId::SupportRel => "support-rel",
            LemmaId::Certificate => "certificate",
            LemmaId::MainTheorem => "main-theorem",
        }
    }

    pub fn mode(&self) -> LemmaMode {
        match self {
            LemmaId::IoDef
            | LemmaId::IoChar
            | LemmaId::CirclesSet
            | LemmaId::LoopParts
            | LemmaId::SameSize
            | LemmaId::DistinctCircles
            | LemmaId::Certificate => LemmaMode::Universe,
            _ => LemmaMode::Targeted,
        }
    }

    /// Universe-mode default margin: 1 where the conditions reference upper
    /// covers, 0 for substructure-closed conditions.
    pub fn default_margin(&self) -> usize {
        match self {
            LemmaId::CirclesSet | LemmaId::DistinctCircles => 1,
            _ => 0,
        }
    }

    pub fn all() -> Vec<LemmaId> {
        vec![
            LemmaId::IoDef,
            LemmaId::IoChar,
            LemmaId::CirclesSet,
            LemmaId::LoopParts,
            LemmaId::ArrowRel,
            LemmaId::Addition,
            LemmaId::SameSize,
            LemmaId::Multiplication,
            LemmaId::IoUnion,
            LemmaId::DistinctCircles,
            LemmaId::CountedAttach,
            LemmaId::CircleCount,
            LemmaId::GnPart,
            LemmaId::UnionWithCircles,
            LemmaId::MaleRel,
            LemmaId::AttachRel,
            LemmaId::SupportRel,
            LemmaId::Certificate,
            LemmaId::MainTheorem,
        ]
    }

    /// The documented default parameters of a targeted verification.
    pub fn default_params(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: &str| {
            map.insert(k.to_string(), v.to_string());
        };
        match self {
            LemmaId::ArrowRel => put("g", "L2"),
            LemmaId::Addition => {
                put("n", "2");
                put("m", "3");
            }
            LemmaId::Multiplication => {
                put("n", "2");
                put("m", "2");
            }
            LemmaId::IoUnion => {
                put("g1", "I2");
                put("g2", "O3");
            }
            LemmaId::CountedAttach | LemmaId::UnionWithCircles => {
                put("g", "L1+E1");
                put("sizes", "3,4");
            }
            LemmaId::GnPart => put("sizes", "5,6,7,8"),
            LemmaId::MaleRel => {
                put("i", "4");
                put("j", "5");
            }
            LemmaId::AttachRel => {
                put("g", "E2");
                put("sizes", "7,8");
            }
            LemmaId::SupportRel => put("g", "I2"),
            LemmaId::Certificate => {
                put("p", "1");
                put("q", "3");
            }
            LemmaId::MainTheorem => {
                put("g", "L1");
                put("samples", "200");
                put("seed", "7");
            }
            _ => {}
        }
        map
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = LemmaError;

    fn from_str(s: &str) -> Result<LemmaId, LemmaError> {
        LemmaId::all()
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| LemmaError::UnknownLemma(s.to_string()))
    }
}

/// Internal result of one verification body.
pub(crate) struct LemmaOutcome {
    pub pass: bool,
    pub counterexamples: Vec<Vec<CanonCode>>,
    pub notes: Vec<String>,
}

impl LemmaOutcome {
    fn from_counterexamples(counterexamples: Vec<Vec<CanonCode>>) -> LemmaOutcome {
        LemmaOutcome {
            pass: counterexamples.is_empty(),
            counterexamples,
            notes: Vec::new(),
        }
    }
}

/// Structured result of a lemma verification.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub mode: String,
    pub parameters: BTreeMap<String, String>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    pub counterexamples: Vec<Vec<String>>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    fn from_outcome(
        id: LemmaId,
        parameters: BTreeMap<String, String>,
        outcome: LemmaOutcome,
        started: Instant,
    ) -> LemmaReport {
        LemmaReport {
            id: id.to_string(),
            mode: match id.mode() {
                LemmaMode::Universe => "universe".into(),
                LemmaMode::Targeted => "targeted".into(),
            },
            parameters,
            status: if outcome.pass { "pass" } else { "fail" }.into(),
            skip_reason: None,
            counterexamples: outcome
                .counterexamples
                .iter()
                .map(|t| t.iter().map(|c| c.to_string()).collect())
                .collect(),
            elapsed_ms: started.elapsed().as_millis() as u64,
            notes: outcome.notes,
        }
    }

    fn skipped(
        id: LemmaId,
        parameters: BTreeMap<String, String>,
        reason: String,
        started: Instant,
    ) -> LemmaReport {
        LemmaReport {
            id: id.to_string(),
            mode: match id.mode() {
                LemmaMode::Universe => "universe".into(),
                LemmaMode::Targeted => "targeted".into(),
            },
            parameters,
            status: "skipped".into(),
            skip_reason: Some(reason),
            counterexamples: Vec::new(),
            elapsed_ms: started.elapsed().as_millis() as u64,
            notes: Vec::new(),
        }
    }
}

fn merged_params(
    id: LemmaId,
    overrides: &BTreeMap<String, String>,
) -> BTreeMap<String, String> {
    let mut params = id.default_params();
    for (k, v) in overrides {
        params.insert(k.clone(), v.clone());
    }
    params
}

fn param_usize(
    id: LemmaId,
    params: &BTreeMap<String, String>,
    key: &str,
) -> Result<usize, LemmaError> {
    let raw = params.get(key).ok_or_else(|| LemmaError::BadParams {
        id: id.to_string(),
        msg: format!("missing parameter `{key}`"),
    })?;
    raw.parse().map_err(|_| LemmaError::BadParams {
        id: id.to_string(),
        msg: format!("parameter `{key}` is not a number: `{raw}`"),
    })
}

fn param_sizes(
    id: LemmaId,
    params: &BTreeMap<String, String>,
    key: &str,
) -> Result<Vec<usize>, LemmaError> {
    let raw = params.get(key).ok_or_else(|| LemmaError::BadParams {
        id: id.to_string(),
        msg: format!("missing parameter `{key}`"),
    })?;
    raw.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| LemmaError::BadParams {
                id: id.to_string(),
                msg: format!("bad size list `{raw}`"),
            })
        })
        .collect()
}

/// Parse a digraph parameter: named constants joined by `+` denote a
/// disjoint union.
fn param_graph(
    id: LemmaId,
    params: &BTreeMap<String, String>,
    key: &str,
) -> Result<Digraph, LemmaError> {
    let raw = params.get(key).ok_or_else(|| LemmaError::BadParams {
        id: id.to_string(),
        msg: format!("missing parameter `{key}`"),
    })?;
    let mut out: Option<Digraph> = None;
    for part in raw.split('+') {
        let g = families::resolve_constant(part.trim()).map_err(|e| LemmaError::BadParams {
            id: id.to_string(),
            msg: e.to_string(),
        })?;
        out = Some(match out {
            None => g,
            Some(acc) => acc.disjoint_union(&g).map_err(|e| LemmaError::BadParams {
                id: id.to_string(),
                msg: e.to_string(),
            })?,
        });
    }
    out.ok_or_else(|| LemmaError::BadParams {
        id: id.to_string(),
        msg: format!("empty graph parameter `{key}`"),
    })
}

/// Run a universe-mode verification over the catalog truncation.
pub fn verify_lemma(
    id: LemmaId,
    catalog: &Catalog,
    universe_bound: usize,
    margin: Option<usize>,
    params: &BTreeMap<String, String>,
) -> Result<LemmaReport, LemmaError> {
    if id.mode() != LemmaMode::Universe {
        return Err(LemmaError::BadParams {
            id: id.to_string(),
            msg: "this lemma runs in targeted mode".into(),
        });
    }
    let started = Instant::now();
    let margin = margin.unwrap_or_else(|| id.default_margin());
    let mut parameters = merged_params(id, params);
    parameters.insert("universe-n".into(), universe_bound.to_string());
    parameters.insert("margin".into(), margin.to_string());

    if universe_bound > catalog.max_n() {
        return Err(LemmaError::Catalog(crate::error::CatalogError::TooLarge(
            universe_bound,
            catalog.max_n(),
        )));
    }
    if margin >= universe_bound {
        return Ok(LemmaReport::skipped(
            id,
            parameters,
            format!("margin {margin} leaves no element below bound {universe_bound}"),
            started,
        ));
    }
    let outcome = match id {
        LemmaId::IoDef => universe::io_def(catalog, universe_bound, margin),
        LemmaId::IoChar => universe::io_char(catalog, universe_bound, margin),
        LemmaId::CirclesSet => universe::circles_set(catalog, universe_bound, margin),
        LemmaId::LoopParts => universe::loop_parts(catalog, universe_bound, margin),
        LemmaId::SameSize => universe::same_size(catalog, universe_bound, margin),
        LemmaId::DistinctCircles => universe::distinct_circles(catalog, universe_bound, margin),
        LemmaId::Certificate => {
            let p = param_usize(id, &parameters, "p")?;
            let q = param_usize(id, &parameters, "q")?;
            if q == 0 {
                return Err(LemmaError::BadParams {
                    id: id.to_string(),
                    msg: "q must be at least 1".into(),
                });
            }
            universe::certificate(catalog, universe_bound, margin, p, q)
        }
        _ => unreachable!("universe dispatch"),
    };
    Ok(LemmaReport::from_outcome(id, parameters, outcome, started))
}

/// Run a targeted verification on constructed witnesses.
pub fn verify_targeted(
    id: LemmaId,
    catalog: &Catalog,
    params: &BTreeMap<String, String>,
) -> Result<LemmaReport, LemmaError> {
    if id.mode() != LemmaMode::Targeted {
        return Err(LemmaError::BadParams {
            id: id.to_string(),
            msg: "this lemma runs in universe mode".into(),
        });
    }
    let started = Instant::now();
    let parameters = merged_params(id, params);
    let bad = |msg: String| LemmaError::BadParams {
        id: id.to_string(),
        msg,
    };
    let outcome = match id {
        LemmaId::ArrowRel => {
            let g = param_graph(id, &parameters, "g")?;
            targeted::arrow_rel(&g).map_err(bad)?
        }
        LemmaId::Addition => {
            let n = param_usize(id, &parameters, "n")?;
            let m = param_usize(id, &parameters, "m")?;
            targeted::addition(n, m).map_err(bad)?
        }
        LemmaId::Multiplication => {
            let n = param_usize(id, &parameters, "n")?;
            let m = param_usize(id, &parameters, "m")?;
            targeted::multiplication(n, m).map_err(bad)?
        }
        LemmaId::IoUnion => {
            let g1 = param_graph(id, &parameters, "g1")?;
            let g2 = param_graph(id, &parameters, "g2")?;
            targeted::io_union(&g1, &g2).map_err(bad)?
        }
        LemmaId::CountedAttach => {
            let g = param_graph(id, &parameters, "g")?;
            let sizes = param_sizes(id, &parameters, "sizes")?;
            targeted::counted_attach(&g, &sizes).map_err(bad)?
        }
        LemmaId::CircleCount => targeted::circle_count().map_err(bad)?,
        LemmaId::GnPart => {
            let sizes = param_sizes(id, &parameters, "sizes")?;
            targeted::gn_part(catalog, &sizes).map_err(bad)?
        }
        LemmaId::UnionWithCircles => {
            let g = param_graph(id, &parameters, "g")?;
            let sizes = param_sizes(id, &parameters, "sizes")?;
            targeted::union_with_circles(catalog, &g, &sizes).map_err(bad)?
        }
        LemmaId::MaleRel => {
            let i = param_usize(id, &parameters, "i")?;
            let j = param_usize(id, &parameters, "j")?;
            targeted::male_rel(i, j).map_err(bad)?
        }
        LemmaId::AttachRel => {
            let g = param_graph(id, &parameters, "g")?;
            let sizes = param_sizes(id, &parameters, "sizes")?;
            targeted::attach_rel(&g, &sizes).map_err(bad)?
        }
        LemmaId::SupportRel => {
            let g = param_graph(id, &parameters, "g")?;
            targeted::support_rel(&g).map_err(bad)?
        }
        LemmaId::MainTheorem => {
            let g = param_graph(id, &parameters, "g")?;
            let samples = param_usize(id, &parameters, "samples")?;
            let seed = param_usize(id, &parameters, "seed")? as u64;
            let spec = SupportSpec::default_for(&g);
            decode::main_theorem_outcome(catalog, &g, &spec, samples, seed)?
        }
        _ => unreachable!("targeted dispatch"),
    };
    Ok(LemmaReport::from_outcome(id, parameters, outcome, started))
}

/// Soundness and completeness of the decode map for one source digraph,
/// as a structured report.
pub fn verify_main_theorem(
    catalog: &Catalog,
    g: &Digraph,
    spec: &SupportSpec,
    samples: usize,
    seed: u64,
) -> Result<LemmaReport, LemmaError> {
    let started = Instant::now();
    let mut parameters = BTreeMap::new();
    parameters.insert("g".to_string(), g.canonical_form().to_string());
    parameters.insert(
        "l-sizes".to_string(),
        spec.l_sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    parameters.insert(
        "d-sizes".to_string(),
        spec.d_sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    parameters.insert("samples".to_string(), samples.to_string());
    parameters.insert("seed".to_string(), seed.to_string());
    let outcome = decode::main_theorem_outcome(catalog, g, spec, samples, seed)?;
    Ok(LemmaReport::from_outcome(
        LemmaId::MainTheorem,
        parameters,
        outcome,
        started,
    ))
}

/// Unified entry point: dispatch on the registered mode.
pub fn verify(
    id: LemmaId,
    catalog: &Catalog,
    universe_bound: Option<usize>,
    margin: Option<usize>,
    params: &BTreeMap<String, String>,
) -> Result<LemmaReport, LemmaError> {
    match id.mode() {
        LemmaMode::Universe => {
            let bound = universe_bound.unwrap_or_else(|| catalog.max_n());
            verify_lemma(id, catalog, bound, margin, params)
        }
        LemmaMode::Targeted => verify_targeted(id, catalog, params),
    }
}
