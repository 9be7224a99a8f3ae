//! Property tests for the structural invariants: order laws, transform
//! compatibility, construction count formulas, and rule/graph coherence.

use std::collections::BTreeSet;

use proptest::prelude::*;

use dposet_core::catalog::{Catalog, OrderKind};
use dposet_core::digraph::{Digraph, UnaryKind};
use dposet_core::families::{self, AttachSpec, SupportSpec};
use dposet_core::{is_embeddable, is_substructure};

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut g = Digraph::empty(n).unwrap();
            for (c, &b) in bits.iter().enumerate() {
                if b {
                    g.add_edge(c / n, c % n);
                }
            }
            g
        })
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just(n).prop_perturb(move |n, mut rng| {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        perm
    })
}

proptest! {
    #[test]
    fn unary_transforms_are_involutions(g in arb_digraph(6)) {
        for kind in [UnaryKind::LoopExchange, UnaryKind::Reverse, UnaryKind::Complement] {
            prop_assert_eq!(g.unary_transform(kind).unary_transform(kind), g.clone());
        }
    }

    #[test]
    fn canonical_form_is_constant_on_orbits(g in arb_digraph(6)) {
        let canon = g.canonical_form();
        let runner = arb_perm(g.n());
        let mut test_rng = proptest::test_runner::TestRunner::deterministic();
        for _ in 0..4 {
            let perm = runner.new_tree(&mut test_rng).unwrap().current();
            prop_assert_eq!(g.relabel(&perm).canonical_form(), canon.clone());
        }
    }

    #[test]
    fn disjoint_union_commutes_up_to_isomorphism(
        a in arb_digraph(5),
        b in arb_digraph(5),
    ) {
        let ab = a.disjoint_union(&b).unwrap();
        let ba = b.disjoint_union(&a).unwrap();
        prop_assert!(ab.is_isomorphic(&ba));
        prop_assert_eq!(ab.edge_count(), a.edge_count() + b.edge_count());
    }

    #[test]
    fn substructure_implies_embeddable(a in arb_digraph(4), b in arb_digraph(5)) {
        if is_substructure(&a, &b) {
            prop_assert!(is_embeddable(&a, &b));
        }
    }

    #[test]
    fn dgf_round_trips(g in arb_digraph(8)) {
        prop_assert_eq!(Digraph::parse_dgf(&g.to_dgf()).unwrap(), g);
    }

    #[test]
    fn substructure_types_match_subset_enumeration(g in arb_digraph(5), k in 1usize..=5) {
        prop_assume!(k <= g.n());
        let types = g.substructure_types(k).unwrap();
        // subset-by-subset re-enumeration with a different mechanism
        let mut expect = BTreeSet::new();
        for mask in 1u64..(1 << g.n()) {
            if mask.count_ones() as usize == k {
                expect.insert(g.induced_mask(mask).unwrap().canonical_form());
            }
        }
        prop_assert_eq!(types, expect);
    }

    #[test]
    fn attach_count_formulas_hold(g in arb_digraph(4), extra in 0usize..3) {
        let n = g.n();
        let sizes: Vec<usize> = (0..n).map(|k| n + 1 + extra + k).collect();
        let spec = AttachSpec::identity(&g, &sizes).unwrap();
        let x = families::attach(&g, &spec).unwrap();
        let circ: usize = sizes.iter().sum();
        prop_assert_eq!(x.n(), n + circ + n);
        prop_assert_eq!(x.edge_count(), g.edge_count() + circ + 2 * n);
    }

    #[test]
    fn edge_support_count_formulas_hold(g in arb_digraph(3)) {
        let spec = SupportSpec::default_for(&g);
        let es = families::edge_support(&g, &spec).unwrap();
        let n = g.n();
        let r = g.edge_count();
        let circ: usize =
            spec.l_sizes.iter().sum::<usize>() + spec.d_sizes.iter().sum::<usize>();
        prop_assert_eq!(es.g_s.n(), n + r);
        prop_assert_eq!(es.g_s.edge_count(), 3 * r);
        prop_assert_eq!(es.total.n(), (n + r) + circ + (n + r));
        prop_assert_eq!(
            es.total.edge_count(),
            3 * r + circ + 2 * (n + r)
        );
    }

    #[test]
    fn rules_preserve_grading(g in arb_digraph(6)) {
        for (_, rule) in dposet_core::rules::all_generators() {
            prop_assert_eq!(rule.apply(&g).n(), g.n());
        }
    }
}

/// Partial order laws on the 4-vertex catalog, for both orders.
#[test]
fn order_laws_on_the_catalog() {
    let catalog = Catalog::build(3).unwrap();
    let rel = catalog.relations();
    let m = rel.ids_up_to(3).end;
    for order in [OrderKind::Sub, OrderKind::Emb] {
        for a in 0..m {
            assert!(rel.le(order, a, a), "reflexivity");
        }
        for a in 0..m {
            for b in 0..m {
                if a != b && rel.le(order, a, b) {
                    assert!(!rel.le(order, b, a), "antisymmetry on canonical codes");
                }
                for c in 0..m {
                    if rel.le(order, a, b) && rel.le(order, b, c) {
                        assert!(rel.le(order, a, c), "transitivity");
                    }
                }
            }
        }
    }
}

/// Substructure is preserved by all three unary transforms; embeddability
/// by edge reversal but not by complement.
#[test]
fn order_preservation_under_unary_transforms() {
    let catalog = Catalog::build(3).unwrap();
    let rel = catalog.relations();
    let graphs: Vec<Digraph> = rel.ids_up_to(3).map(|id| rel.graph(id).clone()).collect();
    let mut complement_breaks_emb = false;
    for a in &graphs {
        for b in &graphs {
            let sub = is_substructure(a, b);
            for kind in [UnaryKind::LoopExchange, UnaryKind::Reverse, UnaryKind::Complement] {
                assert_eq!(
                    sub,
                    is_substructure(&a.unary_transform(kind), &b.unary_transform(kind)),
                    "substructure under {kind:?}"
                );
            }
            let emb = is_embeddable(a, b);
            assert_eq!(
                emb,
                is_embeddable(&a.reverse(), &b.reverse()),
                "embeddability under reversal"
            );
            if emb && !is_embeddable(&a.complement(), &b.complement()) {
                complement_breaks_emb = true;
            }
        }
    }
    assert!(
        complement_breaks_emb,
        "complement should fail to preserve embeddability somewhere"
    );
}

/// Deletion-built covers equal covers from full pairwise comparison.
#[test]
fn sub_covers_agree_with_pairwise_comparison() {
    let catalog = Catalog::build(3).unwrap();
    let rel = catalog.relations();
    let m = rel.ids_up_to(3).end;
    let mut expected = BTreeSet::new();
    for a in 0..m {
        for b in 0..m {
            if rel.graph(b).n() == rel.graph(a).n() + 1 && rel.le(OrderKind::Sub, a, b) {
                expected.insert((rel.code(a).clone(), rel.code(b).clone()));
            }
        }
    }
    let got: BTreeSet<_> = catalog.sub_covers().iter().cloned().collect();
    assert_eq!(got, expected);
}

/// Every named family reproduces its own deletions: circles always delete
/// to the one-shorter line.
#[test]
fn circle_deletions_are_lines() {
    for n in 3..=8 {
        let dels = families::circle(n).unwrap().one_vertex_deletions().unwrap();
        let expect: BTreeSet<_> = [families::line(n - 1).unwrap().canonical_form()].into();
        assert_eq!(dels, expect, "circle size {n}");
    }
}

/// IO-graphs are closed under taking substructures, exhaustively for a
/// three-circle bundle.
#[test]
fn io_closure_under_substructures() {
    let g = families::circles(&[3, 4, 5]).unwrap();
    assert!(g.is_io());
    for mask in 1u64..(1 << g.n()) {
        let sub = g.induced_mask(mask).unwrap();
        assert!(sub.is_io(), "subset {mask:b}");
    }
}

/// Membership in the defined IO set is stable as the universe bound grows
/// past the element's size.
#[test]
fn io_formula_is_stable_under_relativization() {
    let catalog = Catalog::build(4).unwrap();
    let formula = dposet_core::lemmas::io_definition();
    let sets: Vec<BTreeSet<_>> = (3..=4)
        .map(|bound| {
            let u = dposet_core::fo::Universe::new(&catalog, bound, OrderKind::Sub);
            dposet_core::fo::defined_set(&formula, &u).unwrap()
        })
        .collect();
    let rel = catalog.relations();
    for id in rel.ids_up_to(4) {
        let g = rel.graph(id);
        let truth = g.is_io();
        for margin in 0..=2usize {
            let bound = g.n() + margin;
            if !(3..=4).contains(&bound) {
                continue;
            }
            assert_eq!(
                sets[bound - 3].contains(rel.code(id)),
                truth,
                "{} at bound {bound}",
                rel.code(id)
            );
        }
    }
}

/// The constant vocabulary and the raw-code spelling denote the same
/// elements.
#[test]
fn constant_resolution_is_consistent() {
    for name in ["E3", "F2", "I4", "O5", "L2", "Larrow", "male:4:0"] {
        let g = families::resolve_constant(name).unwrap();
        let raw = format!("#{}", g.canonical_form());
        let h = families::resolve_constant(&raw).unwrap();
        assert!(g.is_isomorphic(&h), "{name}");
    }
}

/// Rule/graph coherence: for every closure element and every stored
/// digraph, the 2-vertex substructure types of the image are the rule's
/// type-map image of the original types.
#[test]
fn rule_type_coherence_on_the_catalog() {
    let catalog = Catalog::build(4).unwrap();
    let rel = catalog.relations();
    let generators: Vec<dposet_core::rules::LocalRule> = dposet_core::rules::all_generators()
        .into_iter()
        .map(|(_, g)| g)
        .collect();
    let closure = dposet_core::rules::closure(&generators);

    // precompute each rule's action on the ten 2-vertex types
    let two_types: Vec<Digraph> = rel
        .ids_up_to(2)
        .map(|id| rel.graph(id).clone())
        .filter(|g| g.n() == 2)
        .collect();
    for rule in &closure {
        let type_map: std::collections::BTreeMap<_, _> = two_types
            .iter()
            .map(|t| (t.canonical_form(), rule.apply(t).canonical_form()))
            .collect();
        for id in rel.ids_up_to(4) {
            let g = rel.graph(id);
            if g.n() < 2 {
                continue;
            }
            let image_types = rule.apply(g).substructure_types(2).unwrap();
            let mapped: BTreeSet<_> = g
                .substructure_types(2)
                .unwrap()
                .iter()
                .map(|t| type_map[t].clone())
                .collect();
            assert_eq!(image_types, mapped, "rule table on {}", rel.code(id));
        }
    }
}

/// Catalog enumeration is identical regardless of the worker count.
#[test]
fn enumeration_is_deterministic_across_thread_counts() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| Catalog::build(3).unwrap());
    let parallel = Catalog::build(3).unwrap();
    assert_eq!(single, parallel);
}
