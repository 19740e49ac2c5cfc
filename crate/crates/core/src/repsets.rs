//! Representative subfamilies for families of independent sets in linear
//! matroids.
//!
//! A family of `p`-sets is compressed by projecting the representation onto
//! `p + q` random dimensions (a representation of the `(p+q)`-truncation with
//! high probability), mapping each set to the wedge product of its columns,
//! and keeping the sets whose wedge vectors form a row basis. Two disjoint
//! sets `X`, `Y` with `|X| + |Y| = p + q` have an independent union exactly
//! when the wedge vectors pair to a nonzero value, so any basis of the span
//! preserves every possible extension.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{EchelonBasis, FieldMatrix};
use crate::GfMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("set {0:?} does not have the family size {1}")]
    WrongSize(Vec<usize>, usize),
    #[error("p + q = 0 leaves nothing to represent")]
    ZeroRank,
    #[error("column {0} out of range")]
    Column(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFamily {
    pub p: usize,
    /// Truncated rank `p + q` the wedge vectors live in.
    pub rank: usize,
    pub sets: Vec<Vec<usize>>,
    pub wedges: Vec<Vec<u64>>,
    /// Input sets whose wedge vanished after the random projection.
    pub dropped: usize,
}

impl RepFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// `R * A` for a uniformly random `rank x rows(A)` matrix `R`.
pub fn truncated_representation(a: &GfMatrix, rank: usize, seed: u64) -> GfMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    project(a, rank, &mut rng)
}

fn project(a: &GfMatrix, rank: usize, rng: &mut ChaCha8Rng) -> GfMatrix {
    let f = *a.field();
    let mut r = FieldMatrix::zeros(f, rank, a.rows());
    for i in 0..rank {
        for j in 0..a.rows() {
            r.set(i, j, rng.gen_range(0..f.modulus()));
        }
    }
    r.mul(a).expect("shapes agree")
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).unwrap_or(usize::MAX)
}

/// Computes a `q`-representative subfamily of `sets` (each of size `p`,
/// independent in the column matroid of `a`) with at most `C(p+q, p)` members.
///
/// Output order follows input order; the first set spanning a new wedge
/// direction is the one kept.
pub fn representative_family(
    a: &GfMatrix,
    sets: &[Vec<usize>],
    p: usize,
    q: usize,
    seed: u64,
) -> Result<RepFamily, RepError> {
    let rank = p + q;
    let mut unique: Vec<&Vec<usize>> = Vec::with_capacity(sets.len());
    let mut seen: HashSet<&Vec<usize>> = HashSet::new();
    for s in sets {
        if s.len() != p {
            return Err(RepError::WrongSize(s.clone(), p));
        }
        if let Some(&c) = s.iter().find(|&&c| c >= a.cols()) {
            return Err(RepError::Column(c));
        }
        if seen.insert(s) {
            unique.push(s);
        }
    }
    if unique.is_empty() {
        return Ok(RepFamily { p, rank, sets: vec![], wedges: vec![], dropped: 0 });
    }
    if rank == 0 {
        return Err(RepError::ZeroRank);
    }

    // only the columns that occur need projecting
    let cols: Vec<usize> = unique.iter().flat_map(|s| s.iter().copied()).sorted_unstable().dedup().collect();
    let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let projected = project(&a.select_columns(&cols), rank, &mut rng);

    let mut basis = EchelonBasis::new(*a.field());
    let mut out = RepFamily { p, rank, sets: vec![], wedges: vec![], dropped: 0 };
    let cap = binomial(rank, p);
    for s in unique {
        let idx: Vec<usize> = s.iter().map(|c| local[c]).collect();
        let wedge = projected.select_columns(&idx).wedge_vector().expect("p <= p + q");
        if wedge.iter().all(|&x| x == 0) {
            out.dropped += 1;
            continue;
        }
        if out.sets.len() < cap && basis.insert(wedge.clone()) {
            out.sets.push(s.clone());
            out.wedges.push(wedge);
        }
    }
    Ok(out)
}
