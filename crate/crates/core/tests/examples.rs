mod common;

use itertools::Itertools;
use rand::Rng;

use common::*;
use iss_core::graph::{chordality, degeneracy_ordering, families, Graph};
use iss_core::instances::{
    adaptive_adversary, compose_chordal, compose_degenerate, from_bms, from_rainbow, from_rainbow_matching, gen_gpq,
    gen_hpq, gen_random, random_graph, Construction, GraphModel, HiddenSetOracle, HpqVariant, MatroidModel,
    RainbowInstance, RandomSpec, Topology,
};
use iss_core::kernels::{f_value, kernel_bounded_degree, kernel_degeneracy, reduction_rule_1, rule_degree_bound};
use iss_core::matroid::{Bipartite, IndependenceOracle};
use iss_core::repsets::{representative_family, truncated_representation};
use iss_core::solvers::{solve_branching, solve_brute, Answer, BRUTE_LIMIT};
use iss_core::{verify_solution, FieldMatrix, Framework, Instance, MatroidHandle, PrimeField};

#[test]
fn full_rank_projection_keeps_the_matroid() {
    let mut r = rng(1);
    let a = random_dependent_matrix(PrimeField::default(), 3, 6, &mut r);
    let b = truncated_representation(&a, 3, 5);
    for s in (0..6).powerset() {
        assert_eq!(columns_independent(&a, &s), columns_independent(&b, &s));
    }
    let id = FieldMatrix::identity(PrimeField::default(), 4);
    let t = truncated_representation(&id, 2, 9);
    assert!((0..4).combinations(3).all(|s| t.select_columns(&s).rank() < 3));
}

#[test]
fn projection_represents_the_truncation() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let a = random_matrix(PrimeField::default(), 4, 8, &mut r);
        let full = a.rank();
        let b = truncated_representation(&a, 3, seed);
        for size in 0..=3 {
            for s in (0..8).combinations(size) {
                let expect = a.select_columns(&s).rank().min(full).min(3);
                assert_eq!(b.select_columns(&s).rank(), expect, "seed {seed}, {s:?}");
            }
        }
    }
}

#[test]
fn uniform_as_linear_singletons() {
    let mut r = rng(3);
    let a = random_matrix(PrimeField::default(), 2, 7, &mut r);
    let sets: Vec<Vec<usize>> = (0..7).map(|v| vec![v]).collect();
    let rep = representative_family(&a, &sets, 1, 1, 4).unwrap();
    assert!(rep.len() <= 2);
    let rep = representative_family(&a, &sets, 1, 0, 4).unwrap();
    assert_eq!(rep.len(), 1);
}

fn partition_instance(g: Graph, blocks: usize, k: usize, r: &mut rand_chacha::ChaCha8Rng) -> Instance {
    let n = g.universe();
    let mut bl = vec![Vec::new(); blocks];
    for v in 0..n {
        bl[r.gen_range(0..blocks)].push(v);
    }
    Instance::new(Framework::new(g, MatroidHandle::partition(n, bl).unwrap()).unwrap(), k)
}

fn max_degree_three(n: usize, r: &mut rand_chacha::ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for _ in 0..4 * n {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v && g.degree(u) < 3 && g.degree(v) < 3 {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

#[test]
fn degree_kernel_on_cubic_graphs() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let g = max_degree_three(50, &mut r);
        let inst = partition_instance(g, 6, 2, &mut r);
        let delta = inst.graph().max_degree();
        let (ker, rep) = kernel_bounded_degree(&inst);
        assert!(ker.graph().order() <= 4 * delta && ker.graph().order() <= 12);
        assert_eq!(rep.bound_claimed, 4 * delta);
        assert_eq!(exists_solution(&ker), solve_brute(&inst, 64).unwrap().answer.is_yes());
    }
}

#[test]
fn rule_on_paths_with_k_one() {
    let g = families::path(9);
    let inst = Instance::new(Framework::new(g, MatroidHandle::uniform(9, 1)).unwrap(), 1);
    let order = degeneracy_ordering(inst.graph());
    let (out, _) = reduction_rule_1(&inst, &order, 1, 1);
    assert_eq!(exists_solution(&out), exists_solution(&inst));
}

#[test]
fn rules_bound_the_first_f_value() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let d = r.gen_range(1..=2);
        let k = r.gen_range(2..=3);
        let n = 60;
        let inst = gen_random(RandomSpec { n, graph: GraphModel::Degenerate(d), matroid: MatroidModel::Partition, k, seed });
        let order = degeneracy_ordering(inst.graph());
        let mut cur = inst.clone();
        for h in (1..=order.degeneracy).rev() {
            cur = reduction_rule_1(&cur, &order, order.degeneracy, h).0;
        }
        let dd = order.degeneracy;
        let induced = order.induced(cur.graph());
        assert!(f_value(cur.graph(), &induced, 1) + dd <= rule_degree_bound(k, dd));
    }
}

#[test]
fn degeneracy_kernel_on_random_trees() {
    for seed in 0..30 {
        let mut r = rng(seed);
        let n = r.gen_range(2..=200);
        let g = random_graph(n, GraphModel::Degenerate(1), &mut r);
        let inst = partition_instance(g, r.gen_range(1..=n), 2, &mut r);
        let (ker, rep) = kernel_degeneracy(&inst, None).unwrap();
        assert!(ker.graph().order() <= 32, "{} > 32", ker.graph().order());
        if rep.trivial.is_none() {
            assert_eq!(rep.bound_claimed, 32);
        }
        if n <= 16 {
            assert_eq!(exists_solution(&ker), exists_solution(&inst));
        }
    }
}

#[test]
fn solver_examples() {
    let (f, k) = gen_gpq(2, 2, &[2, 1]);
    let inst = Instance::new(f, k);
    let w = HiddenSetOracle::fixed(Construction::Gpq, 2, 2, &[2, 1]).hidden_set(&[2, 1]);
    assert_eq!(solve_brute(&inst, BRUTE_LIMIT).unwrap().answer, Answer::Yes(w.clone()));
    assert_eq!(solve_branching(&inst).answer, Answer::Yes(w));

    let free = Instance::new(Framework::new(Graph::new(6), MatroidHandle::uniform(6, 6)).unwrap(), 6);
    assert_eq!(solve_branching(&free).answer, Answer::Yes((0..6).collect()));
    let dead = Instance::new(Framework::new(families::path(4), MatroidHandle::uniform(4, 0)).unwrap(), 2);
    let r = solve_branching(&dead);
    assert_eq!(r.answer, Answer::No);
    assert_eq!(r.stats.queries, 4);
}

#[test]
fn reductions_from_related_problems() {
    // P_3 with the ends in one class and the middle in the other
    let r = RainbowInstance::new(families::path(3), vec![vec![0, 2], vec![1]]).unwrap();
    let inst = from_rainbow(&r).unwrap();
    assert_eq!(inst.k, 2);
    assert_eq!(solve_brute(&inst, BRUTE_LIMIT).unwrap().answer.is_yes(), exists_solution(&inst));

    let tri = families::complete(3);
    let inst = from_rainbow_matching(&tri, &[0, 1, 2], 1).unwrap();
    assert_eq!(inst.graph().order(), 3);
    assert!(solve_brute(&inst, BRUTE_LIMIT).unwrap().answer.is_yes());
    assert!(from_rainbow_matching(&tri, &[0, 1], 1).is_err());

    let h = Bipartite::new(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
    let inst = from_bms(h.clone(), Topology::Path(3), 2).unwrap();
    let explicit = Instance::new(Framework::new(families::path(3), MatroidHandle::transversal(h.clone())).unwrap(), 2);
    assert_eq!(solve_brute(&inst, BRUTE_LIMIT).unwrap().answer, solve_brute(&explicit, BRUTE_LIMIT).unwrap().answer);
    let hall = (0..3).combinations(2).any(|s| families::path(3).is_stable(&s) && hall_matchable(&h, &s));
    assert_eq!(solve_brute(&inst, BRUTE_LIMIT).unwrap().answer.is_yes(), hall);
    assert!(from_bms(h, Topology::Grid(2, 2), 2).is_err());
}

#[test]
fn gpq_structure() {
    for (p, q) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2)] {
        let hidden: Vec<usize> = (0..p).map(|i| i % q + 1).collect();
        let (f, k) = gen_gpq(p, q, &hidden);
        let g = &f.graph;
        assert_eq!((g.order(), k), (2 * p * q, 2 * p));
        let o = HiddenSetOracle::fixed(Construction::Gpq, p, q, &hidden);
        // each block is K_{2q} minus the matching a_j b_j
        for i in 0..p {
            let block: Vec<usize> = (0..q).flat_map(|j| [o.a(i, j), o.b(i, j)]).collect();
            for (u, v) in block.iter().copied().tuple_combinations() {
                let matched = (0..q).any(|j| (u, v) == (o.a(i, j), o.b(i, j)));
                assert_eq!(g.has_edge(u, v), !matched);
            }
        }
        let w = o.hidden_set(&hidden);
        assert!(g.is_stable(&w) && f.matroid.is_independent(&w).unwrap());
        for s in g.vertices().combinations(k) {
            if g.is_stable(&s) && s != w {
                assert!(!f.matroid.is_independent(&s).unwrap(), "{s:?}");
            }
        }
    }
}

#[test]
fn hpq_structure() {
    let (f, k) = gen_hpq(1, 2, HpqVariant::Bipartite, &[1]);
    assert_eq!((f.graph.order(), k), (6, 3));
    for q in 1..=4 {
        let (f, _) = gen_hpq(2, q, HpqVariant::Chordal, &[1, q]);
        assert!(chordality(&f.graph).is_some());
        let (f, _) = gen_hpq(2, q, HpqVariant::Bipartite, &[1, q]);
        assert_eq!(chordality(&f.graph).is_some(), q <= 2);
    }
}

#[test]
fn adversary_examples() {
    for (p, q) in [(1, 2), (2, 3)] {
        let bound = (q as u64).pow(p as u32) - 1;
        let (inst, oracle) = adaptive_adversary(p, q);
        let r = solve_brute(&inst, BRUTE_LIMIT).unwrap();
        assert!(oracle.queries() >= bound);
        assert_eq!(oracle.live_candidates(), 1);
        assert_eq!(r.answer, Answer::Yes(oracle.hidden_set(&oracle.hidden())));

        // every answer so far is what the fixed oracle for the survivor says
        let fixed = HiddenSetOracle::fixed(Construction::Gpq, p, q, &oracle.hidden());
        for (set, answer) in oracle.transcript() {
            assert_eq!(fixed.is_independent(&set), answer, "{set:?}");
        }

        let (inst, oracle) = adaptive_adversary(p, q);
        let r = solve_branching(&inst);
        assert!(oracle.queries() >= bound);
        let fixed = HiddenSetOracle::fixed(Construction::Gpq, p, q, &oracle.hidden());
        assert!(oracle.transcript().iter().all(|(s, a)| fixed.is_independent(s) == *a));
        assert_eq!(r.answer, Answer::Yes(oracle.hidden_set(&oracle.hidden())));
    }
}

fn rainbow(g: Graph, classes: Vec<Vec<usize>>) -> RainbowInstance {
    RainbowInstance::new(g, classes).unwrap()
}

#[test]
fn composition_examples() {
    // P_3 with classes {0,1}, {2}: {0,2} is a rainbow stable set
    let yes = rainbow(families::path(3), vec![vec![0, 1], vec![2]]);
    assert!(exists_solution(&from_rainbow(&yes).unwrap()));
    let out = compose_chordal(std::slice::from_ref(&yes)).unwrap();
    assert!(exists_solution(&from_rainbow(&out).unwrap()));

    // K_3 with classes {0,1}, {2}: every choice is an edge
    let no = rainbow(families::complete(3), vec![vec![0, 1], vec![2]]);
    assert!(!exists_solution(&from_rainbow(&no).unwrap()));
    let out = compose_chordal(std::slice::from_ref(&no)).unwrap();
    assert!(!exists_solution(&from_rainbow(&out).unwrap()));
    for out in [compose_degenerate(&[no.clone(), no.clone()]).unwrap(), compose_chordal(&[no.clone(), no.clone()]).unwrap()] {
        assert!(!exists_solution(&from_rainbow(&out).unwrap()));
    }

    // four blocks, only the third is YES
    let mut g = Graph::new(3);
    g.add_edge(0, 1).unwrap();
    let third = rainbow(g, vec![vec![0], vec![1, 2]]);
    let parts = vec![no.clone(), no.clone(), third, no.clone()];
    let out = compose_degenerate(&parts).unwrap();
    assert_eq!(out.graph.order(), 16);
    let inst = from_rainbow(&out).unwrap();
    let Answer::Yes(cert) = solve_brute(&inst, BRUTE_LIMIT).unwrap().answer else { panic!("expected YES") };
    let block = 6..9;
    let selectors = 12..16;
    assert!(cert.iter().all(|v| block.contains(v) || selectors.contains(v)), "{cert:?}");

    assert!(compose_chordal(&[rainbow(families::cycle(4), vec![vec![0, 1], vec![2, 3]])]).is_err());
    assert!(compose_degenerate(&[no, rainbow(families::path(4), vec![vec![0, 1], vec![2, 3]])]).is_err());
}

#[test]
fn random_generation() {
    let spec = RandomSpec { n: 12, graph: GraphModel::Degenerate(1), matroid: MatroidModel::Linear, k: 3, seed: 9 };
    let a = gen_random(spec);
    let b = gen_random(spec);
    assert_eq!(a.graph(), b.graph());
    assert_eq!(
        iss_core::instances::serialize_instance(&a).unwrap(),
        iss_core::instances::serialize_instance(&b).unwrap()
    );
    for seed in 0..50 {
        let g = gen_random(RandomSpec { seed, ..spec });
        assert!(degeneracy_ordering(g.graph()).degeneracy <= 1);
        let g = gen_random(RandomSpec { seed, graph: GraphModel::Interval, ..spec });
        assert!(chordality(g.graph()).is_some());
    }
}

#[test]
fn every_yes_verifies() {
    for seed in 0..40 {
        let inst = gen_random(RandomSpec { n: 10, graph: GraphModel::Gnp(0.3), matroid: MatroidModel::Transversal, k: 3, seed });
        for ans in [solve_brute(&inst, BRUTE_LIMIT).unwrap().answer, solve_branching(&inst).answer] {
            if let Answer::Yes(c) = ans {
                assert!(verify_solution(&inst.framework, &c, 3).unwrap());
            }
        }
    }
}
