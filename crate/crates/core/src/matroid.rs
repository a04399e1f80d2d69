//! Linear matroids of integer weight systems: closure, flats, the lattice of
//! flats, the independence complex and the independence degree.
//!
//! Weight indices are 0-based internally and printed 1-based (`w1`, `{1,2}`).

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::complexes::{ComplexError, SimplicialComplex};
use crate::poset::{GradedPoset, PosetBuilder};
use crate::ratlinalg::{rank_of, IntVector, LinalgError, Subspace};
use crate::strategy::{FlatEnumerator, Named};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ambient rank must be at least 1")]
    ZeroAmbientRank,
    #[error("zero weight forbidden: w{}", .0 + 1)]
    ZeroWeight(usize),
    #[error("weight index {index} out of range for {len} weights")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite multiset of nonzero integer vectors in Z^k. Order is significant:
/// positions are the identities of the weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    ambient_rank: usize,
    weights: Vec<IntVector>,
}

impl WeightSystem {
    pub fn new(ambient_rank: usize, weights: Vec<IntVector>) -> Result<Self, MatroidError> {
        if ambient_rank == 0 {
            return Err(MatroidError::ZeroAmbientRank);
        }
        for (i, w) in weights.iter().enumerate() {
            if w.len() != ambient_rank {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient_rank,
                    found: w.len(),
                }
                .into());
            }
            if w.is_zero() {
                return Err(MatroidError::ZeroWeight(i));
            }
        }
        Ok(WeightSystem { ambient_rank, weights })
    }

    /// Convenience constructor from small integer rows.
    pub fn from_rows(ambient_rank: usize, rows: &[&[i64]]) -> Result<Self, MatroidError> {
        Self::new(ambient_rank, rows.iter().map(|r| IntVector::from(*r)).collect())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn weights(&self) -> &[IntVector] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Rank of the full span.
    pub fn rank(&self) -> usize {
        rank_of(&self.weights).expect("weights share the ambient rank")
    }

    fn select(&self, idx: &[usize]) -> Vec<IntVector> {
        idx.iter().map(|&i| self.weights[i].clone()).collect()
    }

    pub fn is_independent(&self, idx: &[usize]) -> bool {
        rank_of(&self.select(idx)).expect("weights share the ambient rank") == idx.len()
    }
}

/// A closed set of weight indices together with its rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    rank: usize,
    members: Vec<usize>,
}

impl Flat {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of weights in the flat, counted with repetition.
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &Flat) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    /// Poset id: `F` followed by the 1-based members joined by `_`.
    pub fn id(&self) -> String {
        let body: Vec<String> = self.members.iter().map(|i| (i + 1).to_string()).collect();
        format!("F{}", body.join("_"))
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.members.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

fn flat_of_span(ws: &WeightSystem, span: &Subspace) -> Flat {
    let members = (0..ws.len())
        .filter(|&i| span.contains(&ws.weights[i]).expect("weights share the ambient rank"))
        .collect();
    Flat {
        rank: span.dim(),
        members,
    }
}

/// Smallest flat containing the indices in `a`.
pub fn closure(ws: &WeightSystem, a: &[usize]) -> Result<Flat, MatroidError> {
    if let Some(&bad) = a.iter().find(|&&i| i >= ws.len()) {
        return Err(MatroidError::IndexOutOfRange {
            index: bad,
            len: ws.len(),
        });
    }
    let span = Subspace::span(ws.ambient_rank, &ws.select(a))?;
    Ok(flat_of_span(ws, &span))
}

/// Builds flats rank by rank: the flats covering `F` are the closures of
/// `F + i`, and they partition the complement of `F`.
#[derive(Debug, Default, Clone, Copy)]
pub struct ClosureBfs;

impl Named for ClosureBfs {
    fn name(&self) -> &'static str {
        "closure-bfs"
    }
}

impl FlatEnumerator for ClosureBfs {
    fn enumerate(&self, ws: &WeightSystem) -> Vec<Flat> {
        let bottom = closure(ws, &[]).expect("empty set is in range");
        let mut all = vec![bottom.clone()];
        let mut level = vec![bottom];
        while !level.is_empty() {
            let next: BTreeSet<Flat> = level
                .par_iter()
                .flat_map_iter(|f| covering_flats(ws, f))
                .collect::<Vec<_>>()
                .into_iter()
                .collect();
            level = next.into_iter().collect();
            all.extend(level.iter().cloned());
        }
        all.sort();
        all
    }
}

fn covering_flats(ws: &WeightSystem, f: &Flat) -> Vec<Flat> {
    let mut covered = vec![false; ws.len()];
    for &i in &f.members {
        covered[i] = true;
    }
    let mut out = Vec::new();
    for i in 0..ws.len() {
        if covered[i] {
            continue;
        }
        let mut gens = f.members.clone();
        gens.push(i);
        let g = closure(ws, &gens).expect("indices in range");
        for &j in &g.members {
            covered[j] = true;
        }
        out.push(g);
    }
    out
}

/// Closure of every subset, deduplicated. Exponential in the number of
/// weights; kept as an alternative route for small systems.
#[derive(Debug, Default, Clone, Copy)]
pub struct SubsetScan;

impl Named for SubsetScan {
    fn name(&self) -> &'static str {
        "subsets"
    }
}

impl FlatEnumerator for SubsetScan {
    fn enumerate(&self, ws: &WeightSystem) -> Vec<Flat> {
        let n = ws.len();
        assert!(n <= 24, "subset scan over {n} weights is too large");
        let flats: BTreeSet<Flat> = (0u32..1 << n)
            .into_par_iter()
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                closure(ws, &idx).expect("indices in range")
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        flats.into_iter().collect()
    }
}

/// Every distinct flat once, sorted by (rank, members).
pub fn all_flats(ws: &WeightSystem) -> Vec<Flat> {
    ClosureBfs.enumerate(ws)
}

/// Flats ordered by inclusion, with drk labels equal to multiplicities.
#[derive(Clone, Debug)]
pub struct FlatsLattice {
    flats: Vec<Flat>,
    poset: GradedPoset,
}

impl FlatsLattice {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn into_poset(self) -> GradedPoset {
        self.poset
    }

    pub fn index_of(&self, flat: &Flat) -> Option<usize> {
        self.flats.binary_search(flat).ok()
    }
}

pub fn flats_lattice(ws: &WeightSystem) -> FlatsLattice {
    flats_lattice_with(ws, &ClosureBfs)
}

pub fn flats_lattice_with(ws: &WeightSystem, enumerator: &dyn FlatEnumerator) -> FlatsLattice {
    let mut flats = enumerator.enumerate(ws);
    flats.sort();
    let mut b = PosetBuilder::new();
    for f in &flats {
        let i = b.add_labeled(f.id(), f.to_string()).expect("flats are distinct");
        b.set_drk(i, f.multiplicity() as u64);
    }
    for (i, f) in flats.iter().enumerate() {
        for (j, g) in flats.iter().enumerate() {
            if g.rank == f.rank + 1 && f.is_subset(g) {
                b.relate(i, j);
            }
        }
    }
    let poset = b.build().expect("inclusion of distinct flats is a partial order");
    FlatsLattice { flats, poset }
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), &mut visit);
}

/// Simplicial complex of linearly independent index sets; its facets are
/// the bases.
pub fn independence_complex(ws: &WeightSystem) -> SimplicialComplex {
    let r = ws.rank();
    let mut facets = Vec::new();
    combinations(ws.len(), r, |idx| {
        if ws.is_independent(idx) {
            facets.push(idx.to_vec());
        }
    });
    SimplicialComplex::from_faces(facets)
}

pub fn h_vector(c: &SimplicialComplex) -> Result<Vec<i64>, ComplexError> {
    c.h_vector()
}

/// Largest `j` such that every set of at most `j` weights is independent.
pub fn independence_degree(ws: &WeightSystem) -> usize {
    for j in 1..=ws.len() {
        let mut dependent = false;
        combinations(ws.len(), j, |idx| {
            if !dependent && !ws.is_independent(idx) {
                dependent = true;
            }
        });
        if dependent {
            return j - 1;
        }
    }
    ws.len()
}
