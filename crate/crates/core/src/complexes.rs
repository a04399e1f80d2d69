//! Simplicial complexes, order complexes of posets and reduced rational
//! homology, plus the wedge-of-spheres checks for matroids.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::matroid::{flats_lattice, independence_complex, WeightSystem};
use crate::poset::GradedPoset;
use crate::ratlinalg::{sparse_rank, SparseRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("empty complex")]
    Empty,
    #[error("complex is not pure: facets of sizes {0} and {1}")]
    NotPure(usize, usize),
    #[error("weight system of rank 0 has no wedge prediction")]
    Degenerate,
}

/// A simplicial complex given by its facets (vertex lists, sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Keeps only the maximal sets among `faces`.
    pub fn from_faces<I>(faces: I) -> Self
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut all: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for f in all {
            let inside = facets.iter().any(|g| is_subset(&f, g));
            if !inside {
                facets.push(f);
            }
        }
        facets.sort();
        SimplicialComplex { facets }
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.facets
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Dimension: largest facet size minus one (-1 for the complex {∅}).
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// All faces grouped by size: entry `s` lists the faces with `s` vertices.
    pub fn faces_by_size(&self) -> Vec<Vec<Vec<usize>>> {
        let top = self.facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut sets = vec![BTreeSet::new(); top + 1];
        for f in &self.facets {
            assert!(f.len() < 31, "facet too large to expand");
            for mask in 0u32..1 << f.len() {
                let face: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                sets[face.len()].insert(face);
            }
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// `(f_{-1}, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Vec<u64> {
        if self.is_empty() {
            return Vec::new();
        }
        self.faces_by_size().iter().map(|s| s.len() as u64).collect()
    }

    /// `h_j = sum_{i=0}^{j} (-1)^{j-i} C(d-i, j-i) f_{i-1}` for a pure complex
    /// whose facets have `d` vertices.
    pub fn h_vector(&self) -> Result<Vec<i64>, ComplexError> {
        if self.is_empty() {
            return Err(ComplexError::Empty);
        }
        if let Some(w) = self.facets.windows(2).find(|w| w[0].len() != w[1].len()) {
            return Err(ComplexError::NotPure(w[0].len(), w[1].len()));
        }
        let d = self.facets[0].len();
        let f: Vec<i64> = self.f_vector().into_iter().map(|x| x as i64).collect();
        Ok((0..=d)
            .map(|j| {
                (0..=j)
                    .map(|i| {
                        let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(d - i, j - i) * f[i]
                    })
                    .sum()
            })
            .collect())
    }

    /// Reduced Euler characteristic `sum_{i>=-1} (-1)^i f_i`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(s, &f)| if s % 2 == 0 { -(f as i64) } else { f as i64 })
            .sum()
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Reduced Betti numbers indexed from degree -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBetti {
    values: Vec<usize>,
}

impl ReducedBetti {
    /// The homology of the empty complex: a single class in degree -1.
    pub fn of_empty() -> Self {
        ReducedBetti { values: vec![1] }
    }

    pub fn get(&self, degree: isize) -> usize {
        usize::try_from(degree + 1)
            .ok()
            .and_then(|i| self.values.get(i).copied())
            .unwrap_or(0)
    }

    /// Values for degrees -1, 0, 1, ...
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }

    /// True when every degree other than `degree` vanishes and `degree`
    /// carries exactly `value`.
    pub fn is_concentrated(&self, degree: isize, value: usize) -> bool {
        self.get(degree) == value
            && self
                .values
                .iter()
                .enumerate()
                .all(|(i, &b)| i as isize - 1 == degree || b == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { -(b as i64) } else { b as i64 })
            .sum()
    }
}

impl fmt::Display for ReducedBetti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, b)| format!("{}:{}", i as isize - 1, b))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Reduced rational Betti numbers `b_i = f_i - rank d_i - rank d_{i+1}`,
/// with the augmentation as `d_0`.
pub fn reduced_betti(c: &SimplicialComplex) -> Result<ReducedBetti, ComplexError> {
    if c.is_empty() {
        return Err(ComplexError::Empty);
    }
    let faces = c.faces_by_size();
    let index: Vec<HashMap<&[usize], usize>> = faces
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect())
        .collect();
    // boundary_rank[s] = rank of the map from faces with s vertices to faces with s-1
    let boundary_rank: Vec<usize> = (0..faces.len())
        .into_par_iter()
        .map(|s| {
            if s == 0 {
                return 0;
            }
            let rows = faces[s].iter().map(|f| {
                let mut row: SparseRow = (0..f.len())
                    .map(|j| {
                        let mut facet = f.clone();
                        facet.remove(j);
                        let col = index[s - 1][facet.as_slice()];
                        (col, BigInt::from(if j % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            });
            sparse_rank(rows)
        })
        .collect();
    let values = (0..faces.len())
        .map(|s| {
            let next = boundary_rank.get(s + 1).copied().unwrap_or(0);
            faces[s].len() - boundary_rank[s] - next
        })
        .collect();
    Ok(ReducedBetti { values })
}

/// The complex of chains of a poset, stored by its maximal chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComplex {
    chains: Vec<Vec<usize>>,
}

impl OrderComplex {
    /// Maximal chains, each listed bottom to top.
    pub fn maximal_chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn to_simplicial(&self) -> SimplicialComplex {
        SimplicialComplex::from_faces(self.chains.iter().cloned())
    }
}

/// Maximal chains of `p` (walks along covers from minimal to maximal
/// elements), sorted lexicographically.
pub fn order_complex(p: &GradedPoset) -> OrderComplex {
    fn walk(p: &GradedPoset, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if p.upper_covers(last).is_empty() {
            out.push(cur.clone());
            return;
        }
        for &u in p.upper_covers(last) {
            cur.push(u);
            walk(p, cur, out);
            cur.pop();
        }
    }
    let mut chains = Vec::new();
    for m in p.minimal_elements() {
        walk(p, &mut vec![m], &mut chains);
    }
    chains.sort();
    OrderComplex { chains }
}

/// Reduced homology of the order complex of the elements of `p` selected by
/// `keep`; an empty selection gives the homology of the empty complex.
pub fn subposet_betti(p: &GradedPoset, keep: &[usize]) -> ReducedBetti {
    if keep.is_empty() {
        return ReducedBetti::of_empty();
    }
    let sub = p.induced(keep);
    reduced_betti(&order_complex(&sub).to_simplicial()).expect("nonempty poset has a nonempty order complex")
}

/// An element whose open upper link misses the predicted homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperLinkFailure {
    pub element: String,
    pub degree: isize,
    pub expected: usize,
    pub betti: ReducedBetti,
}

impl fmt::Display for UpperLinkFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "above `{}`: expected {} sphere(s) in degree {}, found {}",
            self.element, self.expected, self.degree, self.betti
        )
    }
}

/// For a poset of rank `k` with greatest element 1̂: for each `s != 1̂`, the
/// order complex of `p_{>s} \ {1̂}` must have reduced homology concentrated
/// in degree `k - rk s - 2` with value `|μ(s, 1̂)|`.
pub fn check_upper_links(p: &GradedPoset) -> Result<(), UpperLinkFailure> {
    let rank = p.ranks().expect("upper link check needs a graded poset");
    let top = p.top().expect("upper link check needs a greatest element");
    let k = rank[top] as isize;
    for s in p.canonical_order() {
        if s == top {
            continue;
        }
        let keep: Vec<usize> = p.up_set(s).ones().filter(|&t| t != s && t != top).collect();
        let betti = subposet_betti(p, &keep);
        let degree = k - rank[s] as isize - 2;
        let expected = p.mobius(s, top).expect("s <= top").unsigned_abs() as usize;
        if !betti.is_concentrated(degree, expected) {
            return Err(UpperLinkFailure {
                element: p.id(s).to_string(),
                degree,
                expected,
                betti,
            });
        }
    }
    Ok(())
}

/// Outcome of one homological claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Skipped(&'static str),
    Checked {
        degree: isize,
        expected: usize,
        betti: ReducedBetti,
        pass: bool,
    },
}

impl Claim {
    fn check(betti: ReducedBetti, degree: isize, expected: usize) -> Self {
        let pass = betti.is_concentrated(degree, expected);
        Claim::Checked {
            degree,
            expected,
            betti,
            pass,
        }
    }

    pub fn passed(&self) -> bool {
        match self {
            Claim::Skipped(_) => true,
            Claim::Checked { pass, .. } => *pass,
        }
    }
}

/// The two wedge-of-spheres predictions for a linear matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeReport {
    pub rank: usize,
    pub mobius: i64,
    pub h_vector: Vec<i64>,
    /// Proper part of the lattice of flats: degree rank-2, value |μ(0̂,1̂)|.
    pub flats: Claim,
    /// Independence complex: degree rank-1, value h_rank.
    pub independence: Claim,
}

impl WedgeReport {
    pub fn passed(&self) -> bool {
        self.flats.passed() && self.independence.passed()
    }
}

pub fn verify_wedge_prediction(ws: &WeightSystem) -> Result<WedgeReport, ComplexError> {
    let rank = ws.rank();
    if rank == 0 {
        return Err(ComplexError::Degenerate);
    }
    let lattice = flats_lattice(ws);
    let p = lattice.poset();
    let (bottom, top) = (p.bottom().unwrap(), p.top().unwrap());
    let mobius = p.mobius(bottom, top).expect("bottom <= top");
    let flats = if rank < 2 {
        Claim::Skipped("rank below 2 leaves no proper part")
    } else {
        let keep: Vec<usize> = (0..p.len()).filter(|&i| i != bottom && i != top).collect();
        Claim::check(
            subposet_betti(p, &keep),
            rank as isize - 2,
            mobius.unsigned_abs() as usize,
        )
    };
    let ic = independence_complex(ws);
    let h_vector = ic.h_vector()?;
    let h_top = h_vector[rank];
    let independence = Claim::check(reduced_betti(&ic)?, rank as isize - 1, h_top.max(0) as usize);
    Ok(WedgeReport {
        rank,
        mobius,
        h_vector,
        flats,
        independence,
    })
}
