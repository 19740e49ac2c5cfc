mod common;

use itertools::Itertools;
use proptest::prelude::*;
use rand::Rng;

use common::*;
use iss_core::field::Field;
use iss_core::graph::{chordality, clique_tree, degeneracy_ordering, make_nice};
use iss_core::instances::{
    gen_random, parse_instance, random_graph, random_matroid, serialize_instance, GraphModel, MatroidModel, RandomSpec,
};
use iss_core::kernels::{degree_kernel_bound, kernel_bounded_degree, kernel_degeneracy, degeneracy_kernel_bound};
use iss_core::matroid::{axiom_check, transversal_to_linear, AxiomMode, AxiomReport, Bipartite};
use iss_core::repsets::{binomial, representative_family};
use iss_core::solvers::{solve_branching, solve_brute, solve_chordal_dp, Answer, DpConfig, BRUTE_LIMIT};
use iss_core::{verify_solution, FieldMatrix, Framework, Graph, Instance, MatroidHandle, PrimeField};

const KINDS: [MatroidModel; 4] = [MatroidModel::Uniform, MatroidModel::Partition, MatroidModel::Linear, MatroidModel::Transversal];

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    for ((u, v), &b) in (0..n).tuple_combinations().zip(bits) {
        if b {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| graph_from_bits(n, &bits)))
}

fn arb_matrix(p: u64, rows: usize, cols: usize) -> impl Strategy<Value = iss_core::GfMatrix> {
    proptest::collection::vec(0..p, rows * cols)
        .prop_map(move |xs| FieldMatrix::from_rows(gf(p), xs.chunks(cols).map(|c| c.to_vec()).collect()).unwrap())
}

// field linear algebra

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_matches_minor_oracle(m in arb_matrix(5, 4, 4)) {
        prop_assert_eq!(m.rank(), minor_rank(&m));
        let (r, pivots) = m.rank_and_pivots();
        prop_assert_eq!(r, pivots.len());
        prop_assert!(columns_independent(&m, &pivots));
    }

    #[test]
    fn determinant_matches_leibniz(m in arb_matrix(7, 3, 3)) {
        prop_assert_eq!(m.determinant().unwrap(), leibniz_det(&m));
    }

    #[test]
    fn wedge_scales_and_alternates(m in arb_matrix(7, 4, 3), s in 1u64..7, c in 0usize..3) {
        let f = gf(7);
        let w = m.wedge_vector().unwrap();
        let mut scaled = m.clone();
        scaled.scale_column(c, &s);
        let expect: Vec<u64> = w.iter().map(|x| f.mul(x, &s)).collect();
        prop_assert_eq!(scaled.wedge_vector().unwrap(), expect);
        let mut swapped = m.clone();
        swapped.swap_columns(c, (c + 1) % 3);
        let neg: Vec<u64> = w.iter().map(|x| f.neg(x)).collect();
        prop_assert_eq!(swapped.wedge_vector().unwrap(), neg);
    }

    #[test]
    fn linear_independence_is_column_rank(m in arb_matrix(5, 4, 6)) {
        let handle = MatroidHandle::linear(m.clone());
        for set in (0..6).powerset() {
            prop_assert_eq!(handle.is_independent(&set).unwrap(), columns_independent(&m, &set));
        }
    }
}

#[test]
fn wedge_vanishes_exactly_on_dependent_columns_gf3() {
    let f = gf(3);
    for rows in 1..=4usize {
        for p in 1..=3usize.min(rows) {
            let cells = (rows * p) as u32;
            for code in 0..3u64.pow(cells) {
                let mut x = code;
                let mut m = FieldMatrix::zeros(f, rows, p);
                for i in 0..rows {
                    for j in 0..p {
                        m.set(i, j, x % 3);
                        x /= 3;
                    }
                }
                let zero = m.wedge_vector().unwrap().iter().all(|&w| w == 0);
                assert_eq!(zero, m.rank() < p, "{m:?}");
            }
        }
    }
}

// matroids

fn random_handle(seed: u64, n: usize, kind: MatroidModel) -> MatroidHandle {
    let mut r = rng(seed);
    let k = r.gen_range(1..=4);
    random_matroid(n, kind, k, &mut r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn every_kind_satisfies_the_axioms(seed in any::<u64>(), n in 0usize..=10, kind in 0usize..4) {
        let m = random_handle(seed, n, KINDS[kind]);
        prop_assert_eq!(axiom_check(&m, AxiomMode::Exhaustive).unwrap(), AxiomReport::Pass);
        let t = m.truncate(2);
        prop_assert_eq!(axiom_check(&t, AxiomMode::Exhaustive).unwrap(), AxiomReport::Pass);
    }

    #[test]
    fn rank_is_monotone_and_submodular(seed in any::<u64>(), kind in 0usize..4) {
        let n = 8;
        let m = random_handle(seed, n, KINDS[kind]);
        let mut r = rng(seed ^ 0x55);
        for _ in 0..30 {
            let x: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
            let y: Vec<usize> = (0..n).filter(|v| x.contains(v) || r.gen_bool(0.3)).collect();
            let z: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
            prop_assert!(m.rank_of(&x).unwrap() <= m.rank_of(&y).unwrap());
            let union: Vec<usize> = (0..n).filter(|v| x.contains(v) || z.contains(v)).collect();
            let inter: Vec<usize> = x.iter().copied().filter(|v| z.contains(v)).collect();
            prop_assert!(m.rank_of(&x).unwrap() + m.rank_of(&z).unwrap() >= m.rank_of(&union).unwrap() + m.rank_of(&inter).unwrap());
        }
    }

    #[test]
    fn greedy_size_ignores_candidate_order(seed in any::<u64>(), kind in 0usize..4) {
        use rand::seq::SliceRandom;
        let m = random_handle(seed, 9, KINDS[kind]);
        let mut order: Vec<usize> = (0..9).collect();
        let base = m.greedy_max_independent(&order).unwrap().len();
        prop_assert_eq!(base, m.rank());
        let mut r = rng(seed);
        for _ in 0..5 {
            order.shuffle(&mut r);
            prop_assert_eq!(m.greedy_max_independent(&order).unwrap().len(), base);
        }
    }

    #[test]
    fn materialized_contraction_agrees_with_view(m in arb_matrix(5, 3, 7), pick in proptest::collection::vec(0usize..7, 0..3)) {
        let handle = MatroidHandle::linear(m).truncate(3);
        let set: Vec<usize> = pick.into_iter().sorted().dedup().collect();
        prop_assume!(handle.is_independent(&set).unwrap());
        let view = handle.contract(&set).unwrap();
        let mat = handle.contract_materialized(&set).unwrap();
        let rest: Vec<usize> = (0..7).filter(|v| !set.contains(v)).collect();
        for y in rest.into_iter().powerset() {
            prop_assert_eq!(view.is_independent(&y).unwrap(), mat.is_independent(&y).unwrap(), "{:?}", y);
        }
    }

    #[test]
    fn transversal_matches_hall_and_representation(seed in any::<u64>(), n in 0usize..=6, w in 1usize..=4) {
        let mut r = rng(seed);
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..w).map(move |x| (u, x))).filter(|_| r.gen_bool(0.4)).collect();
        let h = Bipartite::new(n, w, &edges).unwrap();
        let a = transversal_to_linear(&h, PrimeField::default(), seed);
        let m = MatroidHandle::transversal(h.clone());
        for set in (0..n).powerset() {
            let hall = hall_matchable(&h, &set);
            prop_assert_eq!(m.is_independent(&set).unwrap(), hall);
            prop_assert_eq!(a.select_columns(&set).rank() == set.len(), hall);
        }
    }
}

// graphs

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn degeneracy_ordering_is_valid(g in arb_graph(12), drop in proptest::collection::vec(any::<bool>(), 12)) {
        let ord = degeneracy_ordering(&g);
        let pos = ord.positions(g.universe());
        let mut worst = 0;
        for &v in &ord.order {
            let later = g.neighbors(v).iter().filter(|&&u| pos[u] > pos[v]).count();
            prop_assert!(later <= ord.degeneracy);
            worst = worst.max(later);
        }
        prop_assert_eq!(worst, ord.degeneracy);
        let keep: Vec<usize> = g.vertices().filter(|&v| !drop[v]).collect();
        prop_assert!(degeneracy_ordering(&g.induced_subgraph(&keep)).degeneracy <= ord.degeneracy);
    }

    #[test]
    fn nice_decompositions_of_chordal_graphs(seed in any::<u64>(), n in 1usize..=14) {
        let g = random_graph(n, GraphModel::Interval, &mut rng(seed));
        prop_assert!(chordality(&g).is_some());
        let td = clique_tree(&g).unwrap();
        prop_assert!(td.is_valid_for(&g));
        prop_assert!(td.bags.iter().all(|b| g.is_clique(b)));
        let nice = make_nice(&td);
        prop_assert!(nice.is_valid_for(&g));
        if n >= 3 {
            prop_assert!(nice.len() <= n * n, "{} nodes for n = {}", nice.len(), n);
        }
        for bag in &nice.bags {
            prop_assert!(td.bags.iter().any(|b| bag.iter().all(|v| b.contains(v))));
        }
    }
}

#[test]
fn chordality_matches_induced_cycle_search() {
    let mut r = rng(7);
    for i in 0..10_000 {
        let n = r.gen_range(0..=8);
        let g = random_graph(n, GraphModel::Gnp(r.gen_range(0.2..0.8)), &mut r);
        let order = chordality(&g);
        assert_eq!(order.is_some(), chordal_by_cycles(&g), "graph {i}: {g:?}");
        if let Some(o) = order {
            // perfect elimination: later neighbours form a clique
            let pos = o.positions(g.universe());
            for &v in &o.order {
                let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
                assert!(g.is_clique(&later));
            }
        }
    }
}

// solvers and kernels

fn random_instance(seed: u64, max_n: usize, model: Option<GraphModel>) -> Instance {
    let mut r = rng(seed);
    let n = r.gen_range(0..=max_n);
    let graph = model.unwrap_or_else(|| match r.gen_range(0..3) {
        0 => GraphModel::Gnp(r.gen_range(0.05..0.6)),
        1 => GraphModel::Degenerate(r.gen_range(0..=3)),
        _ => GraphModel::Interval,
    });
    let spec = RandomSpec { n, graph, matroid: KINDS[r.gen_range(0..4)], k: r.gen_range(0..=4), seed: r.gen() };
    gen_random(spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solvers_agree_with_exhaustive_search(seed in any::<u64>()) {
        let inst = random_instance(seed, 12, None);
        let truth = exists_solution(&inst);
        let brute = solve_brute(&inst, BRUTE_LIMIT).unwrap();
        let branch = solve_branching(&inst);
        prop_assert_eq!(brute.answer.is_yes(), truth);
        prop_assert_eq!(branch.answer.is_yes(), truth);
        for r in [&brute, &branch] {
            if let Answer::Yes(c) = &r.answer {
                prop_assert!(verify_solution(&inst.framework, c, inst.k).unwrap());
            }
        }
        let d = degeneracy_ordering(inst.graph()).degeneracy as u64;
        let n = inst.graph().order().max(1) as u64;
        prop_assert!(branch.stats.queries <= 4 * (d + 1).pow(inst.k as u32) * n);
    }

    #[test]
    fn dp_has_no_false_positives(seed in any::<u64>()) {
        let mut inst = random_instance(seed, 12, Some(GraphModel::Interval));
        if matches!(inst.matroid().kind(), iss_core::matroid::MatroidKind::Uniform { .. } | iss_core::matroid::MatroidKind::Partition { .. }) {
            let m = random_matroid(inst.graph().universe(), MatroidModel::Linear, inst.k, &mut rng(seed));
            inst = Instance::new(Framework::new(inst.graph().clone(), m).unwrap(), inst.k);
        }
        let truth = exists_solution(&inst);
        let dp = solve_chordal_dp(&inst, DpConfig { seed, repeats: 1 }).unwrap();
        if let Answer::Yes(c) = &dp.answer {
            prop_assert!(truth);
            prop_assert!(verify_solution(&inst.framework, c, inst.k).unwrap());
        }
        prop_assert!(dp.stats.max_table <= binomial(inst.k, inst.k / 2).max(1));
    }

    #[test]
    fn kernels_preserve_answers_and_bounds(seed in any::<u64>()) {
        let inst = random_instance(seed, 14, None);
        let truth = exists_solution(&inst);
        let k = inst.k;

        let (kd, rep) = kernel_bounded_degree(&inst);
        prop_assert_eq!(exists_solution(&kd), truth);
        prop_assert!(kd.graph().order() <= degree_kernel_bound(k, inst.graph().max_degree()));
        prop_assert_eq!(rep.output_size, kd.graph().order());
        let (again, _) = kernel_bounded_degree(&kd);
        prop_assert!(again.graph().order() <= kd.graph().order());

        let d = degeneracy_ordering(inst.graph()).degeneracy;
        let (kg, rep) = kernel_degeneracy(&inst, None).unwrap();
        prop_assert_eq!(exists_solution(&kg), truth);
        prop_assert!(kg.graph().order() <= degeneracy_kernel_bound(k, d.max(1)).max(rep.bound_claimed));
        if let (Some(deg), Some(bound)) = (rep.degree_after_rules, rep.degree_bound) {
            prop_assert!(deg <= bound);
        }
        // outputs are induced subgraphs unless replaced by a trivial instance
        for out in [&kd, &kg] {
            if out.graph().universe() == inst.graph().universe() {
                for v in out.graph().vertices() {
                    prop_assert!(inst.graph().contains(v));
                    for &u in out.graph().neighbors(v) {
                        prop_assert!(inst.graph().has_edge(u, v));
                    }
                }
                let kept: Vec<usize> = out.graph().vertices().collect();
                let expect: Vec<usize> = inst.graph().vertices().filter(|v| kept.contains(v)).collect();
                for (u, v) in expect.iter().copied().tuple_combinations() {
                    prop_assert_eq!(inst.graph().has_edge(u, v), out.graph().has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let inst = random_instance(seed, 14, None);
        let text = serialize_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize_instance(&back).unwrap(), text);
        prop_assert_eq!(exists_solution(&back), exists_solution(&inst));
    }
}

// representative families

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn representative_families_are_small_subfamilies(seed in any::<u64>(), n in 1usize..=8, p in 0usize..=3, q in 0usize..=2) {
        prop_assume!(p + q >= 1 && p <= n);
        let mut r = rng(seed);
        let a = random_dependent_matrix(PrimeField::default(), 4, n, &mut r);
        let family: Vec<Vec<usize>> = (0..n).combinations(p).filter(|s| columns_independent(&a, s)).collect();
        let rep = representative_family(&a, &family, p, q, seed).unwrap();
        prop_assert!(rep.sets.iter().all(|s| family.contains(s)));
        prop_assert!(rep.len() <= binomial(p + q, p));
        prop_assert_eq!(&rep, &representative_family(&a, &family, p, q, seed).unwrap());
        prop_assert!(is_q_representative(&a, &family, &rep.sets, q));
        // a (q+1)-representative family is also q-representative
        let wider = representative_family(&a, &family, p, q + 1, seed ^ 1).unwrap();
        prop_assert!(is_q_representative(&a, &family, &wider.sets, q));
    }
}
