//! Finite posets stored by their Hasse diagram, with the structural
//! predicates needed for locally geometric posets: grading, geometric
//! lattices, Möbius function and dimension coherence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("empty poset")]
    Empty,
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("drk must be given for every element or for none")]
    PartialDrk,
    #[error("poset is not graded: {0}")]
    NotGraded(GradingViolation),
    #[error("elements `{0}` and `{1}` are not comparable as s <= t")]
    Incomparable(String, String),
    #[error("poset is not locally geometric: {0}")]
    NotLocallyGeometric(LocalViolation),
    #[error("missing weight for atom `{0}`")]
    MissingAtomWeight(String),
    #[error("atom `{0}` has weight 0, weights must be positive")]
    NonPositiveAtomWeight(String),
    #[error("poset has no unique least element")]
    NoBottom,
    #[error("a geometric lattice is required: {0}")]
    NotGeometricLattice(LatticeViolation),
    #[error("rank 0 input cannot be projectivized")]
    RankZero,
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
}

/// Two lower covers of one element that would force different ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingViolation {
    pub element: String,
    pub lower: (String, usize),
    pub other_lower: (String, usize),
}

impl fmt::Display for GradingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{}` is reached at rank {} via `{}` and at rank {} via `{}`",
            self.element,
            self.lower.1 + 1,
            self.lower.0,
            self.other_lower.1 + 1,
            self.other_lower.0
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeViolation {
    NoBottom,
    NoTop,
    NoJoin(String, String),
    NoMeet(String, String),
    NotAtomistic(String),
    NotSemimodular(String, String),
}

impl fmt::Display for LatticeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeViolation::NoBottom => write!(f, "no least element"),
            LatticeViolation::NoTop => write!(f, "no greatest element"),
            LatticeViolation::NoJoin(a, b) => write!(f, "`{a}` and `{b}` have no join"),
            LatticeViolation::NoMeet(a, b) => write!(f, "`{a}` and `{b}` have no meet"),
            LatticeViolation::NotAtomistic(s) => write!(f, "`{s}` is not the join of the atoms below it"),
            LatticeViolation::NotSemimodular(a, b) => {
                write!(f, "rank(a v b) + rank(a ^ b) > rank(a) + rank(b) for `{a}`, `{b}`")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalViolation {
    NotGraded(GradingViolation),
    NoGreatestElement,
    UpperIdeal {
        element: String,
        violation: LatticeViolation,
    },
}

impl fmt::Display for LocalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalViolation::NotGraded(g) => write!(f, "not graded: {g}"),
            LocalViolation::NoGreatestElement => write!(f, "no greatest element"),
            LocalViolation::UpperIdeal { element, violation } => {
                write!(f, "upper ideal of `{element}` is not a geometric lattice: {violation}")
            }
        }
    }
}

/// An element whose atom sums depend on the chosen minimal element below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceViolation {
    pub element: String,
    pub first: (String, u64),
    pub second: (String, u64),
}

impl fmt::Display for CoherenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at `{}`: atom sum {} above `{}` but {} above `{}`",
            self.element, self.first.1, self.first.0, self.second.1, self.second.0
        )
    }
}

/// Incrementally collects elements and order relations; `build` derives the
/// full order, the Hasse diagram and the grading.
#[derive(Debug, Default, Clone)]
pub struct PosetBuilder {
    ids: Vec<String>,
    labels: Vec<Option<String>>,
    drk: Vec<Option<u64>>,
    relations: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl PosetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, id: impl Into<String>) -> Result<usize, PosetError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(PosetError::DuplicateId(id));
        }
        let i = self.ids.len();
        self.index.insert(id.clone(), i);
        self.ids.push(id);
        self.labels.push(None);
        self.drk.push(None);
        Ok(i)
    }

    pub fn add_labeled(&mut self, id: impl Into<String>, label: impl Into<String>) -> Result<usize, PosetError> {
        let i = self.add(id)?;
        self.labels[i] = Some(label.into());
        Ok(i)
    }

    pub fn set_label(&mut self, i: usize, label: impl Into<String>) {
        self.labels[i] = Some(label.into());
    }

    pub fn set_drk(&mut self, i: usize, drk: u64) {
        self.drk[i] = Some(drk);
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Declare `lo < hi` by index.
    pub fn relate(&mut self, lo: usize, hi: usize) {
        self.relations.push((lo, hi));
    }

    pub fn relate_ids(&mut self, lo: &str, hi: &str) -> Result<(), PosetError> {
        let a = self
            .index_of(lo)
            .ok_or_else(|| PosetError::UnknownElement(lo.to_string()))?;
        let b = self
            .index_of(hi)
            .ok_or_else(|| PosetError::UnknownElement(hi.to_string()))?;
        self.relate(a, b);
        Ok(())
    }

    pub fn build(self) -> Result<GradedPoset, PosetError> {
        let n = self.ids.len();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        let drk = if self.drk.iter().all(Option::is_some) {
            Some(self.drk.iter().map(|d| d.unwrap()).collect::<Vec<_>>())
        } else if self.drk.iter().all(Option::is_none) {
            None
        } else {
            return Err(PosetError::PartialDrk);
        };

        let mut succ = vec![BTreeSet::new(); n];
        let mut indeg = vec![0usize; n];
        for &(lo, hi) in &self.relations {
            if lo == hi {
                return Err(PosetError::Cycle(self.ids[lo].clone()));
            }
            if succ[lo].insert(hi) {
                indeg[hi] += 1;
            }
        }
        // Kahn's algorithm, smallest index first for a deterministic order.
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            topo.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(PosetError::Cycle(self.ids[stuck].clone()));
        }

        let mut pred = vec![Vec::new(); n];
        for (i, s) in succ.iter().enumerate() {
            for &j in s {
                pred[j].push(i);
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for &i in &topo {
            let mut d = FixedBitSet::with_capacity(n);
            d.insert(i);
            for &p in &pred[i] {
                d.union_with(&down[p]);
            }
            down[i] = d;
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (j, d) in down.iter().enumerate() {
            for i in d.ones() {
                up[i].insert(j);
            }
        }

        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for j in 0..n {
            for i in down[j].ones() {
                if i != j && up[i].intersection(&down[j]).count() == 2 {
                    lower[j].push(i);
                    upper[i].push(j);
                }
            }
        }
        for u in &mut upper {
            u.sort_unstable();
        }

        let mut position = vec![0; n];
        for (p, &i) in topo.iter().enumerate() {
            position[i] = p;
        }
        let grading = grade(&self.ids, &topo, &lower);

        Ok(GradedPoset {
            ids: self.ids,
            labels: self.labels,
            drk,
            lower,
            upper,
            up,
            down,
            topo,
            position,
            grading,
            index: self.index,
        })
    }
}

fn grade(ids: &[String], topo: &[usize], lower: &[Vec<usize>]) -> Result<Vec<usize>, GradingViolation> {
    let mut rank = vec![0usize; ids.len()];
    for &i in topo {
        let mut covers = lower[i].iter();
        let Some(&first) = covers.next() else {
            continue;
        };
        for &other in covers {
            if rank[other] != rank[first] {
                return Err(GradingViolation {
                    element: ids[i].clone(),
                    lower: (ids[first].clone(), rank[first]),
                    other_lower: (ids[other].clone(), rank[other]),
                });
            }
        }
        rank[i] = rank[first] + 1;
    }
    Ok(rank)
}

/// A finite poset. Immutable after construction; the reflexive-transitive
/// closure is precomputed as up/down bitsets.
#[derive(Debug, Clone)]
pub struct GradedPoset {
    ids: Vec<String>,
    labels: Vec<Option<String>>,
    drk: Option<Vec<u64>>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    topo: Vec<usize>,
    position: Vec<usize>,
    grading: Result<Vec<usize>, GradingViolation>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedPoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.labels == other.labels && self.drk == other.drk && self.lower == other.lower
    }
}

impl Eq for GradedPoset {}

impl GradedPoset {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    pub fn drk(&self) -> Option<&[u64]> {
        self.drk.as_deref()
    }

    /// Same poset with dimension-rank labels attached (or removed).
    pub fn with_drk(mut self, drk: Option<Vec<u64>>) -> Self {
        if let Some(d) = &drk {
            assert_eq!(d.len(), self.len(), "drk length must match the poset");
        }
        self.drk = drk;
        self
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    /// Hasse diagram as `(lower, upper)` index pairs, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.len())
            .flat_map(|j| self.lower[j].iter().map(move |&i| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn up_set(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    pub fn down_set(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// A linear extension of the order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lower[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.upper[i].is_empty()).collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    /// The rank function (minimal elements at 0, covers raise rank by one),
    /// or the first pair of covers that rules one out.
    pub fn is_graded(&self) -> Result<&[usize], GradingViolation> {
        self.grading.as_deref().map_err(Clone::clone)
    }

    pub fn ranks(&self) -> Option<&[usize]> {
        self.grading.as_deref().ok()
    }

    pub fn rank(&self, i: usize) -> Option<usize> {
        self.ranks().map(|r| r[i])
    }

    /// Elements sorted by (rank, index); the order used for reporting.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        match self.ranks() {
            Some(r) => order.sort_by_key(|&i| (r[i], i)),
            None => order.sort_by_key(|&i| (self.position[i], i)),
        }
        order
    }

    /// The subposet on `keep` (any order; duplicates ignored). Ids, labels
    /// and drk are inherited.
    pub fn induced(&self, keep: &[usize]) -> GradedPoset {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut b = PosetBuilder::new();
        for &i in &keep {
            let j = b.add(self.ids[i].clone()).expect("ids are unique");
            if let Some(l) = &self.labels[i] {
                b.set_label(j, l.clone());
            }
            if let Some(d) = &self.drk {
                b.set_drk(j, d[i]);
            }
        }
        for (a, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                if i != j && self.leq(i, j) {
                    b.relate(a, c);
                }
            }
        }
        b.build().expect("a nonempty subposet of a poset is a poset")
    }

    pub fn upper_ideal(&self, s: usize) -> GradedPoset {
        self.induced(&self.up[s].ones().collect::<Vec<_>>())
    }

    pub fn lower_ideal(&self, s: usize) -> GradedPoset {
        self.induced(&self.down[s].ones().collect::<Vec<_>>())
    }

    fn join_of_bounds(&self, bounds: &FixedBitSet) -> Option<usize> {
        let size = bounds.count_ones(..);
        bounds.ones().find(|&u| self.up[u].count_ones(..) == size)
    }

    fn meet_of_bounds(&self, bounds: &FixedBitSet) -> Option<usize> {
        let size = bounds.count_ones(..);
        bounds.ones().find(|&u| self.down[u].count_ones(..) == size)
    }

    /// Least upper bound of `a` and `b`, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.join_of_bounds(&self.up[a].intersection(&self.up[b]).collect())
    }

    /// Greatest lower bound of `a` and `b`, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet_of_bounds(&self.down[a].intersection(&self.down[b]).collect())
    }

    /// Join of an arbitrary set of elements; the empty join is the bottom.
    pub fn join_all(&self, elems: &[usize]) -> Option<usize> {
        let mut bounds = FixedBitSet::with_capacity(self.len());
        bounds.insert_range(..);
        for &e in elems {
            bounds.intersect_with(&self.up[e]);
        }
        self.join_of_bounds(&bounds)
    }

    pub fn is_lattice(&self) -> Result<(), LatticeViolation> {
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.join(a, b).is_none() {
                    return Err(LatticeViolation::NoJoin(self.ids[a].clone(), self.ids[b].clone()));
                }
                if self.meet(a, b).is_none() {
                    return Err(LatticeViolation::NoMeet(self.ids[a].clone(), self.ids[b].clone()));
                }
            }
        }
        Ok(())
    }

    /// Lattice + atomistic + semimodular. Errors only when the poset is not
    /// graded, since the axioms are stated in terms of rank.
    pub fn is_geometric_lattice(&self) -> Result<Result<(), LatticeViolation>, PosetError> {
        let rank = self.is_graded().map_err(PosetError::NotGraded)?;
        let Some(bottom) = self.bottom() else {
            return Ok(Err(LatticeViolation::NoBottom));
        };
        if self.top().is_none() {
            return Ok(Err(LatticeViolation::NoTop));
        }
        if let Err(v) = self.is_lattice() {
            return Ok(Err(v));
        }
        let atoms = self.upper_covers(bottom);
        for s in self.canonical_order() {
            let below: Vec<usize> = atoms.iter().copied().filter(|&a| self.leq(a, s)).collect();
            if self.join_all(&below) != Some(s) {
                return Ok(Err(LatticeViolation::NotAtomistic(self.ids[s].clone())));
            }
        }
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let j = self.join(a, b).unwrap();
                let m = self.meet(a, b).unwrap();
                if rank[j] + rank[m] > rank[a] + rank[b] {
                    return Ok(Err(LatticeViolation::NotSemimodular(
                        self.ids[a].clone(),
                        self.ids[b].clone(),
                    )));
                }
            }
        }
        Ok(Ok(()))
    }

    /// Graded with a greatest element of rank k and every upper ideal a
    /// geometric lattice; returns k.
    pub fn is_locally_geometric(&self) -> Result<usize, LocalViolation> {
        let rank = self.is_graded().map_err(LocalViolation::NotGraded)?;
        let top = self.top().ok_or(LocalViolation::NoGreatestElement)?;
        for s in self.canonical_order() {
            let verdict = self
                .upper_ideal(s)
                .is_geometric_lattice()
                .expect("upper ideals of a graded poset are graded");
            if let Err(violation) = verdict {
                return Err(LocalViolation::UpperIdeal {
                    element: self.ids[s].clone(),
                    violation,
                });
            }
        }
        Ok(rank[top])
    }

    /// Möbius function μ(s, t) by the defining recursion over [s, t].
    pub fn mobius(&self, s: usize, t: usize) -> Result<i64, PosetError> {
        if !self.leq(s, t) {
            return Err(PosetError::Incomparable(self.ids[s].clone(), self.ids[t].clone()));
        }
        let interval: FixedBitSet = self.up[s].intersection(&self.down[t]).collect();
        let mut members: Vec<usize> = interval.ones().collect();
        members.sort_by_key(|&i| self.position[i]);
        let mut mu: HashMap<usize, i64> = HashMap::with_capacity(members.len());
        for &u in &members {
            let value = if u == s {
                1
            } else {
                -self.down[u]
                    .intersection(&interval)
                    .filter(|&v| v != u)
                    .map(|v| mu[&v])
                    .sum::<i64>()
            };
            mu.insert(u, value);
        }
        Ok(mu[&t])
    }

    /// Dimension-rank from atom weights: for each element, the sum of `d`
    /// over atoms strictly above a minimal element and below it must not
    /// depend on that minimal element. Returns drk for every element, or the
    /// first element (in canonical order) where the sums disagree.
    pub fn check_coherent<F>(&self, d: F) -> Result<Result<Vec<u64>, CoherenceViolation>, PosetError>
    where
        F: Fn(usize) -> Option<u64>,
    {
        self.is_locally_geometric().map_err(PosetError::NotLocallyGeometric)?;
        let rank = self.ranks().expect("locally geometric posets are graded");
        let mut weight = vec![0u64; self.len()];
        for a in (0..self.len()).filter(|&a| rank[a] == 1) {
            let w = d(a).ok_or_else(|| PosetError::MissingAtomWeight(self.ids[a].clone()))?;
            if w == 0 {
                return Err(PosetError::NonPositiveAtomWeight(self.ids[a].clone()));
            }
            weight[a] = w;
        }
        let mut drk = vec![0u64; self.len()];
        for s in self.canonical_order() {
            let atoms: Vec<usize> = self.down[s].ones().filter(|&a| rank[a] == 1).collect();
            let mut seen: Option<(usize, u64)> = None;
            for x in self.down[s].ones().filter(|&x| rank[x] == 0) {
                let sum: u64 = atoms.iter().filter(|&&a| self.lt(x, a)).map(|&a| weight[a]).sum();
                match seen {
                    None => seen = Some((x, sum)),
                    Some((y, other)) if other != sum => {
                        return Ok(Err(CoherenceViolation {
                            element: self.ids[s].clone(),
                            first: (self.ids[y].clone(), other),
                            second: (self.ids[x].clone(), sum),
                        }));
                    }
                    Some(_) => {}
                }
            }
            drk[s] = seen.map(|(_, v)| v).unwrap_or(0);
        }
        Ok(Ok(drk))
    }

    /// Coherence with weight 1 on every atom.
    pub fn check_gkm_coherent(&self) -> Result<Result<Vec<u64>, CoherenceViolation>, PosetError> {
        self.check_coherent(|_| Some(1))
    }

    fn require_geometric(&self) -> Result<(), PosetError> {
        match self.is_geometric_lattice() {
            Ok(Ok(())) => Ok(()),
            Ok(Err(v)) => Err(PosetError::NotGeometricLattice(v)),
            Err(e) => Err(e),
        }
    }

    /// Double the bottom element: a new minimal element below everything
    /// except the old bottom, with which it is incomparable.
    pub fn compactify(&self) -> Result<GradedPoset, PosetError> {
        let bottom = self.bottom().ok_or(PosetError::NoBottom)?;
        let mut b = self.copy_into_builder("");
        let mut new_id = format!("{}'", self.ids[bottom]);
        while self.index.contains_key(&new_id) {
            new_id.push('\'');
        }
        let fresh = b.add(new_id)?;
        if let Some(drk) = &self.drk {
            b.set_drk(fresh, drk[bottom]);
        }
        for &a in self.upper_covers(bottom) {
            b.relate(fresh, a);
        }
        b.build()
    }

    /// Remove the bottom of a geometric lattice of rank at least one.
    pub fn projectivize(&self) -> Result<GradedPoset, PosetError> {
        self.require_geometric()?;
        if self.len() == 1 {
            return Err(PosetError::RankZero);
        }
        let bottom = self.bottom().expect("geometric lattices have a bottom");
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != bottom).collect();
        Ok(self.induced(&keep).with_drk(None))
    }

    /// Disjoint union of two geometric lattices of equal rank with their
    /// top elements identified. Ids become `L.<id>`, `R.<id>` and `top`.
    pub fn glue_top(&self, other: &GradedPoset) -> Result<GradedPoset, PosetError> {
        self.require_geometric()?;
        other.require_geometric()?;
        let (t1, t2) = (self.top().unwrap(), other.top().unwrap());
        let (r1, r2) = (self.rank(t1).unwrap(), other.rank(t2).unwrap());
        if r1 != r2 {
            return Err(PosetError::RankMismatch(r1, r2));
        }
        let mut b = PosetBuilder::new();
        let map = |p: &GradedPoset, top: usize, prefix: &str, b: &mut PosetBuilder| -> Vec<usize> {
            (0..p.len())
                .map(|i| {
                    if i == top {
                        usize::MAX
                    } else {
                        b.add(format!("{prefix}.{}", p.ids[i])).unwrap()
                    }
                })
                .collect()
        };
        let left = map(self, t1, "L", &mut b);
        let right = map(other, t2, "R", &mut b);
        let top = b.add("top")?;
        for (p, m) in [(self, &left), (other, &right)] {
            for (lo, hi) in p.covers() {
                let hi = if m[hi] == usize::MAX { top } else { m[hi] };
                b.relate(m[lo], hi);
            }
        }
        b.build()
    }

    fn copy_into_builder(&self, prefix: &str) -> PosetBuilder {
        let mut b = PosetBuilder::new();
        for i in 0..self.len() {
            let j = b.add(format!("{prefix}{}", self.ids[i])).unwrap();
            if let Some(l) = &self.labels[i] {
                b.set_label(j, l.clone());
            }
            if let Some(d) = &self.drk {
                b.set_drk(j, d[i]);
            }
        }
        for (lo, hi) in self.covers() {
            b.relate(lo, hi);
        }
        b
    }

    fn signature(&self, i: usize) -> (usize, usize, usize, usize) {
        (
            self.down[i].count_ones(..),
            self.up[i].count_ones(..),
            self.lower[i].len(),
            self.upper[i].len(),
        )
    }

    /// An order isomorphism `self -> other` as an index map, if one exists.
    /// Backtracking over elements in topological order, candidates pruned by
    /// up/down set sizes and cover degrees.
    pub fn isomorphism(&self, other: &GradedPoset) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let mut a: Vec<_> = (0..self.len()).map(|i| self.signature(i)).collect();
        let mut b: Vec<_> = (0..other.len()).map(|i| other.signature(i)).collect();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        if self.extend_iso(other, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    fn extend_iso(&self, other: &GradedPoset, step: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if step == self.len() {
            return true;
        }
        let i = self.topo[step];
        let sig = self.signature(i);
        for j in 0..other.len() {
            if used[j] || other.signature(j) != sig {
                continue;
            }
            let consistent = self.topo[..step].iter().all(|&p| {
                let q = map[p];
                self.leq(p, i) == other.leq(q, j) && self.leq(i, p) == other.leq(j, q)
            });
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if self.extend_iso(other, step + 1, map, used) {
                return true;
            }
            used[j] = false;
            map[i] = usize::MAX;
        }
        false
    }

    pub fn is_isomorphic(&self, other: &GradedPoset) -> bool {
        self.isomorphism(other).is_some()
    }
}

/// The Boolean lattice of subsets of an `n`-element set; ids are the
/// members written as digits joined by `_`, the empty set is `e`.
pub fn boolean_lattice(n: usize) -> GradedPoset {
    assert!(n < 20, "boolean lattice too large");
    let name = |mask: usize| -> String {
        if mask == 0 {
            "e".to_string()
        } else {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join("_")
        }
    };
    let mut masks: Vec<usize> = (0..1 << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let mut b = PosetBuilder::new();
    let mut index = vec![0; 1 << n];
    for &m in &masks {
        index[m] = b.add(name(m)).unwrap();
    }
    for &m in &masks {
        for i in 0..n {
            if m >> i & 1 == 0 {
                b.relate(index[m], index[m | 1 << i]);
            }
        }
    }
    b.build().unwrap()
}

/// A chain `c0 < c1 < ... < c{len-1}`.
pub fn chain(len: usize) -> GradedPoset {
    let mut b = PosetBuilder::new();
    for i in 0..len {
        b.add(format!("c{i}")).unwrap();
        if i > 0 {
            b.relate(i - 1, i);
        }
    }
    b.build().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(elems: &[&str], rels: &[(&str, &str)]) -> GradedPoset {
        let mut b = PosetBuilder::new();
        for e in elems {
            b.add(*e).unwrap();
        }
        for (lo, hi) in rels {
            b.relate_ids(lo, hi).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn empty_and_cyclic_inputs_are_rejected() {
        assert_eq!(PosetBuilder::new().build().unwrap_err(), PosetError::Empty);
        let mut b = PosetBuilder::new();
        b.add("a").unwrap();
        b.add("b").unwrap();
        b.relate_ids("a", "b").unwrap();
        b.relate_ids("b", "a").unwrap();
        assert!(matches!(b.build(), Err(PosetError::Cycle(_))));
        let mut b = PosetBuilder::new();
        b.add("a").unwrap();
        assert_eq!(b.add("a").unwrap_err(), PosetError::DuplicateId("a".into()));
    }

    #[test]
    fn transitive_relations_are_reduced_to_covers() {
        let p = poset(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert!(p.leq(0, 2));
    }

    #[test]
    fn grading_examples() {
        let c = poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(c.is_graded().unwrap(), &[0, 1, 2]);

        let p = poset(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("a", "d"), ("d", "c")]);
        let v = p.is_graded().unwrap_err();
        assert_eq!(v.element, "c");
        let reached: BTreeSet<usize> = [v.lower.1 + 1, v.other_lower.1 + 1].into();
        assert_eq!(reached, BTreeSet::from([1, 2]));
    }

    #[test]
    fn boolean_lattices_are_geometric() {
        for n in 0..=3 {
            assert_eq!(boolean_lattice(n).is_geometric_lattice(), Ok(Ok(())));
        }
    }

    #[test]
    fn pentagon_is_rejected() {
        // 0 < a < 1, 0 < b < c < 1
        let p = poset(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
        );
        assert!(p.is_graded().is_err());
        assert!(matches!(p.is_geometric_lattice(), Err(PosetError::NotGraded(_))));
        assert!(matches!(p.is_locally_geometric(), Err(LocalViolation::NotGraded(_))));
    }

    #[test]
    fn non_atomistic_chain_is_rejected() {
        assert_eq!(
            chain(3).is_geometric_lattice(),
            Ok(Err(LatticeViolation::NotAtomistic("c2".into())))
        );
    }

    #[test]
    fn non_semimodular_lattice_is_rejected() {
        // atomistic graded lattice of rank 3 where a and c only meet at the top
        let p = poset(
            &["0", "a", "b", "c", "ab", "bc", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "ab"),
                ("b", "ab"),
                ("b", "bc"),
                ("c", "bc"),
                ("ab", "1"),
                ("bc", "1"),
            ],
        );
        // a v c = 1 (rank 3), a ^ c = 0 : 3 + 0 > 1 + 1
        assert!(matches!(
            p.is_geometric_lattice(),
            Ok(Err(LatticeViolation::NotSemimodular(_, _)))
        ));
    }

    #[test]
    fn missing_join_is_reported() {
        // two atoms with two incomparable upper bounds
        let p = poset(
            &["0", "a", "b", "x", "y", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("a", "x"),
                ("b", "x"),
                ("a", "y"),
                ("b", "y"),
                ("x", "1"),
                ("y", "1"),
            ],
        );
        assert_eq!(p.is_lattice(), Err(LatticeViolation::NoJoin("a".into(), "b".into())));
    }

    #[test]
    fn mobius_examples() {
        let b2 = boolean_lattice(2);
        let (bot, top) = (b2.bottom().unwrap(), b2.top().unwrap());
        assert_eq!(b2.mobius(bot, bot).unwrap(), 1);
        assert_eq!(b2.mobius(bot, top).unwrap(), 1);
        let b3 = boolean_lattice(3);
        assert_eq!(b3.mobius(b3.bottom().unwrap(), b3.top().unwrap()).unwrap(), -1);
        let a = b2.index_of("1").unwrap();
        let b = b2.index_of("2").unwrap();
        assert!(matches!(b2.mobius(a, b), Err(PosetError::Incomparable(_, _))));
        assert!(matches!(b2.mobius(top, bot), Err(PosetError::Incomparable(_, _))));
    }

    #[test]
    fn constructions_on_small_lattices() {
        let b1 = boolean_lattice(1);
        let s2 = b1.compactify().unwrap();
        assert_eq!(s2.len(), 3);
        assert_eq!(s2.minimal_elements().len(), 2);
        assert_eq!(s2.is_locally_geometric(), Ok(1));

        let b2 = boolean_lattice(2);
        let s4 = b2.compactify().unwrap();
        assert_eq!(s4.len(), 5);
        assert_eq!(s4.minimal_elements().len(), 2);
        assert_eq!(s4.is_locally_geometric(), Ok(2));

        let cp1 = b2.projectivize().unwrap();
        assert_eq!(cp1.len(), 3);
        assert_eq!(cp1.is_locally_geometric(), Ok(1));

        let cp2 = boolean_lattice(3).projectivize().unwrap();
        let by_rank = |p: &GradedPoset, r: usize| p.ranks().unwrap().iter().filter(|&&x| x == r).count();
        assert_eq!((by_rank(&cp2, 0), by_rank(&cp2, 1), by_rank(&cp2, 2)), (3, 3, 1));

        assert_eq!(boolean_lattice(0).projectivize().unwrap_err(), PosetError::RankZero);
        assert_eq!(b2.glue_top(&b2).unwrap().len(), 7);
        assert_eq!(b1.glue_top(&b1).unwrap().len(), 3);
        assert_eq!(b1.glue_top(&b2).unwrap_err(), PosetError::RankMismatch(1, 2));
        let two_points = poset(&["a", "b"], &[]);
        assert_eq!(two_points.compactify().unwrap_err(), PosetError::NoBottom);
    }

    #[test]
    fn coherence_on_boolean_lattices_and_points() {
        for n in 1..=3 {
            let b = boolean_lattice(n);
            let drk = b.check_gkm_coherent().unwrap().unwrap();
            assert_eq!(drk[b.top().unwrap()], n as u64);
        }
        let point = chain(1);
        assert_eq!(point.check_coherent(|_| Some(7)).unwrap().unwrap(), vec![0]);
        let b2 = boolean_lattice(2);
        assert!(matches!(
            b2.check_coherent(|_| None),
            Err(PosetError::MissingAtomWeight(_))
        ));
        assert!(matches!(
            b2.check_coherent(|_| Some(0)),
            Err(PosetError::NonPositiveAtomWeight(_))
        ));
        assert!(matches!(
            chain(3).check_gkm_coherent(),
            Err(PosetError::NotLocallyGeometric(_))
        ));
    }

    #[test]
    fn isomorphism_ignores_ids() {
        let a = poset(&["x", "y", "z"], &[("x", "z"), ("y", "z")]);
        let b = boolean_lattice(1).compactify().unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&chain(3)));
        let b2 = boolean_lattice(2);
        let map = b2.isomorphism(&b2).unwrap();
        for (i, &j) in map.iter().enumerate() {
            assert_eq!(b2.rank(i), b2.rank(j));
        }
    }

    #[test]
    fn induced_subposet_keeps_order() {
        let b3 = boolean_lattice(3);
        let up = b3.upper_ideal(b3.index_of("1").unwrap());
        assert_eq!(up.len(), 4);
        assert!(up.is_isomorphic(&boolean_lattice(2)));
        assert_eq!(up.bottom().map(|i| up.id(i)), Some("1"));
        let down = b3.lower_ideal(b3.index_of("1_2").unwrap());
        assert!(down.is_isomorphic(&boolean_lattice(2)));
    }
}
