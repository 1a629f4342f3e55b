use growtree::exact::ratio;
use growtree::graph::{
    all_pairs_distances, line_graph, parse_edge_list, random_tree, validate_tree, Tree,
};
use growtree::growth::{apply, apply_pipeline, format_pipeline, parse_pipeline, Family, OpSpec};
use growtree::hitting::mean_hitting_time_tree;
use growtree::random_models::{generate, RandomKind, RandomModelSpec};
use growtree::recursive::{construct_model, model_mht, model_size, model_wiener, ModelParams};
use growtree::wiener::{
    check_bounds, degree_wiener_additive, degree_wiener_multiplicative, line_graph_wiener,
    mean_shortest_path, tree_wiener, wiener_full_form, wiener_index, wiener_one_step,
    wiener_polynomial,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn seed_tree(max_n: usize) -> impl Strategy<Value = (u64, Tree)> {
    (2..=max_n, any::<u64>()).prop_map(|(n, s)| (s, random_tree(n, s).unwrap()))
}

fn admissible(t: &Tree, f: Family, m: u32) -> bool {
    !f.saturating() || m as usize >= t.max_degree()
}

fn big(v: impl Into<BigInt>) -> BigInt {
    v.into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grown_trees_are_valid_and_obey_size_laws((_, t) in seed_tree(12), f in family(), m in 1u32..=4) {
        prop_assume!(admissible(&t, f, m));
        let g = apply(&t, OpSpec::new(f, m)).unwrap();
        prop_assert!(g.graph().check_invariants().is_ok());
        prop_assert!(validate_tree(g.graph()).is_ok());
        let (n2, e2) = OpSpec::new(f, m).size_after(&big(t.n()), &big(t.edge_count()));
        prop_assert_eq!(n2, big(g.n()));
        prop_assert_eq!(e2, big(g.edge_count()));
        // seed vertices keep their ids; former neighbours sit at a fixed distance
        let stretch = match f {
            Family::Subdivision => m + 1,
            Family::TFractal => 2,
            Family::VFractal => 3,
            _ => 1,
        };
        let d = all_pairs_distances(g.graph()).unwrap();
        for (u, v) in t.graph().edges() {
            prop_assert_eq!(d.get(u, v), stretch);
        }
    }

    #[test]
    fn one_step_formula_matches_bfs((_, t) in seed_tree(12), f in family(), m in 1u32..=4) {
        prop_assume!(admissible(&t, f, m));
        let g = apply(&t, OpSpec::new(f, m)).unwrap();
        let predicted = wiener_one_step(f, m, &big(tree_wiener(&t)), &big(t.n())).unwrap();
        prop_assert_eq!(predicted, big(wiener_index(g.graph()).unwrap()));
    }

    #[test]
    fn full_and_simplified_forms_agree(f in family(), m in 1u32..=8, n in 2u64..=200, w in 0u64..=10_000_000) {
        let (w, n) = (big(w), big(n));
        prop_assert_eq!(wiener_full_form(f, m, &w, &n), wiener_polynomial(f, m).eval(&w, &n));
    }

    #[test]
    fn tree_wiener_matches_bfs((_, t) in seed_tree(60)) {
        let w = tree_wiener(&t);
        prop_assert_eq!(w, wiener_index(t.graph()).unwrap());
        prop_assert_eq!(mean_hitting_time_tree(&t), ratio(2 * big(w), t.n()));
        prop_assert_eq!(mean_shortest_path(t.graph()).unwrap(), ratio(2 * big(w), t.n() * (t.n() - 1)));
        prop_assert!(check_bounds(&big(w), &big(t.n())).within);
    }

    #[test]
    fn degree_and_line_graph_identities((_, t) in seed_tree(12)) {
        prop_assert!(degree_wiener_multiplicative(&t).is_ok());
        prop_assert!(degree_wiener_additive(&t).is_ok());
        prop_assert!(line_graph_wiener(&t).is_ok());
        prop_assert_eq!(line_graph(&t).n(), t.edge_count());
    }

    #[test]
    fn edge_list_round_trip((_, t) in seed_tree(40)) {
        let back = parse_edge_list(&t.graph().to_edge_list()).unwrap();
        prop_assert_eq!(&back, t.graph());
    }

    #[test]
    fn pipeline_string_round_trip(ops in prop::collection::vec((family(), 1u32..=9), 0..5)) {
        let ops: Vec<OpSpec> = ops.into_iter().map(|(f, m)| OpSpec::new(f, m)).collect();
        prop_assert_eq!(parse_pipeline(&format_pipeline(&ops)).unwrap(), ops);
    }

    #[test]
    fn growth_is_deterministic((_, t) in seed_tree(10), f in family(), m in 1u32..=3) {
        prop_assume!(admissible(&t, f, m));
        let ops = [OpSpec::new(f, m)];
        prop_assert_eq!(apply_pipeline(&t, &ops).unwrap(), apply_pipeline(&t, &ops).unwrap());
    }

    #[test]
    fn generation_t_formulas_match_construction((_, t) in seed_tree(6), f in family(), m in 1u32..=3, gens in 0u32..=3) {
        let p = ModelParams::from_seed(&t, f, m, gens);
        prop_assume!(p.validate().is_ok());
        let built = construct_model(&t, f, m, gens).unwrap();
        let w = wiener_index(built.graph()).unwrap();
        prop_assert_eq!(model_size(&p).unwrap(), big(built.n()));
        prop_assert_eq!(model_wiener(&p).unwrap(), big(w));
        prop_assert_eq!(model_mht(&p).unwrap(), ratio(2 * big(w), built.n()));
    }

    #[test]
    fn grown_wiener_depends_only_on_n_and_w(f in family(), m in 1u32..=3, gens in 1u32..=2, s1 in any::<u64>()) {
        // a differently shaped seed with the same (n, W) grows to the same W
        let a = random_tree(7, s1).unwrap();
        let b = (1..500u64)
            .map(|k| random_tree(7, s1.wrapping_add(k)).unwrap())
            .find(|b| tree_wiener(b) == tree_wiener(&a) && b != &a);
        prop_assume!(b.is_some());
        let b = b.unwrap();
        let m = m.max(a.max_degree() as u32).max(b.max_degree() as u32);
        let p = ModelParams::from_seed(&a, f, m, gens);
        prop_assume!(p.validate().is_ok());
        let wa = tree_wiener(&construct_model(&a, f, m, gens).unwrap());
        let wb = tree_wiener(&construct_model(&b, f, m, gens).unwrap());
        prop_assert_eq!(wa, wb);
        prop_assert_eq!(model_wiener(&p).unwrap(), big(wa));
    }

    #[test]
    fn random_models_emit_valid_trees(ba in any::<bool>(), t in 0u32..=60, rng_seed in any::<u64>()) {
        let kind = if ba { RandomKind::Ba } else { RandomKind::Uniform };
        let tree = generate(&RandomModelSpec { kind, t, rng_seed });
        prop_assert_eq!(tree.n(), t as usize + 2);
        prop_assert_eq!(tree.edge_count(), t as usize + 1);
        prop_assert!(validate_tree(tree.graph()).is_ok());
        prop_assert_eq!(&tree, &generate(&RandomModelSpec { kind, t, rng_seed }));
    }
}
