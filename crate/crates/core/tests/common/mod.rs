//! Reference oracles for the integration tests. None of them reuse the
//! library's elimination, matching or search code.
#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iss_core::field::Field;
use iss_core::matroid::Bipartite;
use iss_core::{FieldMatrix, GfMatrix, Graph, Instance, PrimeField};

/// Determinant by the Leibniz formula.
pub fn leibniz_det(m: &GfMatrix) -> u64 {
    let f = *m.field();
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut total = 0;
    for perm in (0..n).permutations(n) {
        let inversions = (0..n).tuple_combinations().filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = 1;
        for (r, &c) in perm.iter().enumerate() {
            term = f.mul(&term, m.get(r, c));
        }
        total = if inversions % 2 == 0 { f.add(&total, &term) } else { f.sub(&total, &term) };
    }
    total
}

/// Rank as the size of the largest nonvanishing minor.
pub fn minor_rank(m: &GfMatrix) -> usize {
    for r in (1..=m.rows().min(m.cols())).rev() {
        for rows in (0..m.rows()).combinations(r) {
            for cols in (0..m.cols()).combinations(r) {
                if leibniz_det(&m.select_rows(&rows).select_columns(&cols)) != 0 {
                    return r;
                }
            }
        }
    }
    0
}

/// Columns `set` independent, by minors.
pub fn columns_independent(m: &GfMatrix, set: &[usize]) -> bool {
    set.is_empty() || minor_rank(&m.select_columns(set)) == set.len()
}

/// Matchability by Hall's condition.
pub fn hall_matchable(h: &Bipartite, set: &[usize]) -> bool {
    (1..=set.len()).all(|r| {
        set.iter().combinations(r).all(|t| {
            let nbrs: std::collections::BTreeSet<usize> = t.iter().flat_map(|&&u| h.adj[u].iter().copied()).collect();
            nbrs.len() >= r
        })
    })
}

/// Whether some stable `k`-set is independent, by enumerating all `k`-sets.
pub fn exists_solution(inst: &Instance) -> bool {
    let verts: Vec<usize> = inst.graph().vertices().collect();
    verts
        .into_iter()
        .combinations(inst.k)
        .any(|s| inst.graph().is_stable(&s) && inst.matroid().is_independent(&s).unwrap())
}

/// Chordal iff no induced cycle of length at least four, by subset search.
pub fn chordal_by_cycles(g: &Graph) -> bool {
    let verts: Vec<usize> = g.vertices().collect();
    for size in 4..=verts.len() {
        for s in verts.iter().copied().combinations(size) {
            if is_induced_cycle(g, &s) {
                return false;
            }
        }
    }
    true
}

fn is_induced_cycle(g: &Graph, s: &[usize]) -> bool {
    if s.iter().any(|&v| s.iter().filter(|&&u| g.has_edge(u, v)).count() != 2) {
        return false;
    }
    // 2-regular; a cycle iff connected
    let mut seen = vec![s[0]];
    let mut frontier = vec![s[0]];
    while let Some(v) = frontier.pop() {
        for &u in s {
            if g.has_edge(u, v) && !seen.contains(&u) {
                seen.push(u);
                frontier.push(u);
            }
        }
    }
    seen.len() == s.len()
}

pub fn random_matrix(field: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> GfMatrix {
    let mut m = FieldMatrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_range(0..field.modulus()));
        }
    }
    m
}

/// Random low-rank-ish matrix: a few random columns plus scaled copies.
pub fn random_dependent_matrix(field: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> GfMatrix {
    let mut m = random_matrix(field, rows, cols, rng);
    for j in 1..cols {
        if rng.gen_bool(0.25) {
            let src = rng.gen_range(0..j);
            let s = rng.gen_range(1..field.modulus());
            for i in 0..rows {
                let x = field.mul(m.get(i, src), &s);
                m.set(i, j, x);
            }
        }
    }
    m
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Definitional check: for every `Y` with `|Y| <= q`, if some member of
/// `family` is disjoint from `Y` with an independent union, some member of
/// `rep` is too. Independence by minors.
pub fn is_q_representative(a: &GfMatrix, family: &[Vec<usize>], rep: &[Vec<usize>], q: usize) -> bool {
    let compatible = |s: &Vec<usize>, y: &Vec<usize>| {
        if s.iter().any(|v| y.contains(v)) {
            return false;
        }
        let u: Vec<usize> = s.iter().chain(y).copied().sorted().collect();
        columns_independent(a, &u)
    };
    (0..=q).all(|size| {
        (0..a.cols()).combinations(size).all(|y| !family.iter().any(|s| compatible(s, &y)) || rep.iter().any(|s| compatible(s, &y)))
    })
}
