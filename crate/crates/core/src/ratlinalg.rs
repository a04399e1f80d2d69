//! Exact linear algebra over the rationals for integer input vectors.
//!
//! Every rank decision in the crate bottoms out here. Elimination is
//! fraction-free: a row is reduced against a pivot row by cross-multiplying
//! leading coefficients and then dividing out the content (gcd of the
//! entries), so intermediate values stay small and no rational numbers are
//! ever formed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

fn check_len(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

/// An integer vector of arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn zero(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn scaled(&self, factor: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * factor).collect())
    }

    /// True when the two vectors span a space of dimension at most one.
    /// The zero vector is collinear to everything.
    pub fn is_collinear(&self, other: &IntVector) -> Result<bool, LinalgError> {
        Ok(rank_of(&[self.clone(), other.clone()])? <= 1)
    }

    fn to_sparse(&self) -> SparseRow {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<&[i64]> for IntVector {
    fn from(v: &[i64]) -> Self {
        IntVector(v.iter().copied().map(BigInt::from).collect())
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(v: [i64; N]) -> Self {
        IntVector(v.into_iter().map(BigInt::from).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A rectangular integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<IntVector>,
    ncols: usize,
}

impl IntMatrix {
    pub fn new(ncols: usize, rows: Vec<IntVector>) -> Result<Self, LinalgError> {
        for r in &rows {
            check_len(ncols, r.len())?;
        }
        Ok(IntMatrix { rows, ncols })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::default();
        for r in &self.rows {
            ech.insert(r.to_sparse());
        }
        ech.rank()
    }
}

/// Sparse row: `(column, nonzero value)` pairs sorted by column.
pub type SparseRow = Vec<(usize, BigInt)>;

/// `p * a - q * b`, both operands sparse and sorted.
fn combine(p: &BigInt, a: &SparseRow, q: &BigInt, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                (*ca, p * va - q * vb)
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                i += 1;
                (*ca, p * va)
            }
            (Some((ca, va)), None) => {
                i += 1;
                (*ca, p * va)
            }
            (_, Some((cb, vb))) => {
                j += 1;
                (*cb, -(q * vb))
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

/// Divide out the content and make the leading entry positive.
fn normalize(row: &mut SparseRow) {
    let Some((_, lead)) = row.first() else {
        return;
    };
    let negative = lead.is_negative();
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if negative {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Incremental row-echelon form keyed by leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` until its leading column carries no pivot (or it vanishes).
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        normalize(&mut row);
        while let Some((lead_col, lead)) = row.first() {
            let Some(pivot) = self.pivots.get(lead_col) else {
                break;
            };
            let p = &pivot[0].1;
            let g = p.gcd(lead);
            let (p, q) = (p / &g, lead / &g);
            row = combine(&p, &row, &q, pivot);
            normalize(&mut row);
        }
        row
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            Some(&(col, _)) => {
                self.pivots.insert(col, row);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Reduced echelon basis: each pivot column is cleared in every other row,
    /// rows are primitive with positive leading entry. The result is a
    /// canonical representative of the row space.
    fn into_reduced(self) -> Vec<SparseRow> {
        let mut rows: Vec<SparseRow> = self.pivots.into_values().collect();
        for i in (0..rows.len()).rev() {
            let (col, p) = rows[i][0].clone();
            for j in 0..i {
                let Some(pos) = rows[j].iter().position(|(c, _)| *c == col) else {
                    continue;
                };
                let q = rows[j][pos].1.clone();
                let g = p.gcd(&q);
                let mut r = combine(&(&p / &g), &rows[j], &(&q / &g), &rows[i]);
                normalize(&mut r);
                rows[j] = r;
            }
        }
        rows
    }
}

fn echelon_of(expected: usize, vectors: &[IntVector]) -> Result<Echelon, LinalgError> {
    let mut ech = Echelon::default();
    for v in vectors {
        check_len(expected, v.len())?;
        ech.insert(v.to_sparse());
    }
    Ok(ech)
}

/// Rank of the rational span of `vectors`; 0 for an empty sequence.
pub fn rank_of(vectors: &[IntVector]) -> Result<usize, LinalgError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    Ok(echelon_of(first.len(), vectors)?.rank())
}

/// Whether `v` lies in the rational span of `vectors`.
pub fn in_span(v: &IntVector, vectors: &[IntVector]) -> Result<bool, LinalgError> {
    let ech = echelon_of(v.len(), vectors)?;
    Ok(ech.contains(v.to_sparse()))
}

/// Whether the two sequences have the same rational span.
pub fn span_equal(a: &[IntVector], b: &[IntVector]) -> Result<bool, LinalgError> {
    let dim = match (a.first(), b.first()) {
        (Some(x), _) => x.len(),
        (None, Some(y)) => y.len(),
        (None, None) => return Ok(true),
    };
    let ea = echelon_of(dim, a)?;
    let eb = echelon_of(dim, b)?;
    if ea.rank() != eb.rank() {
        return Ok(false);
    }
    Ok(b.iter().all(|v| ea.contains(v.to_sparse())) && a.iter().all(|v| eb.contains(v.to_sparse())))
}

/// Rank of a sparse integer matrix given by rows. Column indices beyond the
/// declared width are not checked; callers build rows from their own indexing.
pub fn sparse_rank<I>(rows: I) -> usize
where
    I: IntoIterator<Item = SparseRow>,
{
    let mut ech = Echelon::default();
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// A rational subspace of Q^k, stored by its canonical reduced basis so that
/// equality, ordering and hashing coincide with equality of spans.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<IntVector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn span(ambient: usize, vectors: &[IntVector]) -> Result<Self, LinalgError> {
        let ech = echelon_of(ambient, vectors)?;
        let basis = ech
            .into_reduced()
            .into_iter()
            .map(|row| {
                let mut v = vec![BigInt::zero(); ambient];
                for (c, x) in row {
                    v[c] = x;
                }
                IntVector(v)
            })
            .collect();
        Ok(Subspace { ambient, basis })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn contains(&self, v: &IntVector) -> Result<bool, LinalgError> {
        check_len(self.ambient, v.len())?;
        in_span(v, &self.basis)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        check_len(self.ambient, other.ambient)?;
        let ech = echelon_of(self.ambient, &self.basis)?;
        Ok(other.basis.iter().all(|v| ech.contains(v.to_sparse())))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from(x)
    }

    /// Textbook Gauss-Jordan over Q, kept independent of the fraction-free path.
    fn rational_rank(vectors: &[IntVector]) -> usize {
        let Some(first) = vectors.first() else {
            return 0;
        };
        let ncols = first.len();
        let mut m: Vec<Vec<BigRational>> = vectors
            .iter()
            .map(|r| {
                r.entries()
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && !m[i][c].is_zero() {
                    let f = &m[i][c] / &m[rank][c];
                    for j in 0..ncols {
                        let t = &f * &m[rank][j];
                        m[i][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&[]).unwrap(), 0);
        assert_eq!(rank_of(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap(), 2);
        let multiples = [v(&[2, 4]), v(&[1, 2]), v(&[3, 6])];
        assert_eq!(rational_rank(&multiples), 1);
        assert_eq!(rank_of(&multiples).unwrap(), 1);
    }

    #[test]
    fn rank_dimension_mismatch() {
        let err = rank_of(&[v(&[1, 0]), v(&[1, 0, 0])]).unwrap_err();
        assert_eq!(err, LinalgError::DimensionMismatch { expected: 2, found: 3 });
        assert!(in_span(&v(&[1]), &[v(&[1, 2])]).is_err());
        assert!(span_equal(&[v(&[1])], &[v(&[1, 2])]).is_err());
    }

    #[test]
    fn in_span_examples() {
        assert!(in_span(&v(&[0, 0]), &[]).unwrap());
        assert!(!in_span(&v(&[1, 1]), &[v(&[1, 0])]).unwrap());
        // (3,3) = 0*(1,0) + 3*(1,1)
        assert!(in_span(&v(&[3, 3]), &[v(&[1, 0]), v(&[1, 1])]).unwrap());
    }

    #[test]
    fn span_equal_examples() {
        assert!(span_equal(&[v(&[1, 0])], &[v(&[2, 0])]).unwrap());
        assert!(!span_equal(&[v(&[1, 0])], &[v(&[0, 1])]).unwrap());
        assert!(span_equal(&[v(&[1, 1]), v(&[1, -1])], &[v(&[1, 0]), v(&[0, 1])]).unwrap());
    }

    #[test]
    fn subspace_is_canonical() {
        let a = Subspace::span(3, &[v(&[2, 4, 6]), v(&[1, 0, 1])]).unwrap();
        let b = Subspace::span(3, &[v(&[3, 4, 7]), v(&[-1, -2, -3])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&v(&[0, 2, 2])).unwrap());
        assert!(!a.contains(&v(&[0, 0, 1])).unwrap());
        let line = Subspace::span(3, &[v(&[1, 2, 3])]).unwrap();
        assert!(a.contains_subspace(&line).unwrap());
        assert!(!line.contains_subspace(&a).unwrap());
        assert!(Subspace::zero(3).contains(&IntVector::zero(3)).unwrap());
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let big = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        let a = IntVector::new(vec![big.clone(), BigInt::one()]);
        let b = IntVector::new(vec![&big * 3, BigInt::from(3)]);
        assert_eq!(rank_of(&[a.clone(), b]).unwrap(), 1);
        let c = IntVector::new(vec![big + 1, BigInt::one()]);
        assert_eq!(rank_of(&[a, c]).unwrap(), 2);
    }

    #[test]
    fn matrix_rank() {
        let m = IntMatrix::new(3, vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(IntMatrix::new(2, vec![v(&[1, 2, 3])]).is_err());
    }

    fn vectors(k: usize, max: usize) -> impl Strategy<Value = Vec<IntVector>> {
        prop::collection::vec(prop::collection::vec(-4i64..=4, k), 0..max)
            .prop_map(|rows| rows.into_iter().map(IntVector::from).collect())
    }

    proptest! {
        #[test]
        fn rank_matches_rational_oracle(vs in vectors(4, 7)) {
            prop_assert_eq!(rank_of(&vs).unwrap(), rational_rank(&vs));
        }

        #[test]
        fn rank_invariant_under_permutation_duplication_scaling(
            vs in vectors(3, 6),
            scale in prop::sample::select(vec![-3i64, -1, 2, 5]),
        ) {
            let r = rank_of(&vs).unwrap();
            let mut rev = vs.clone();
            rev.reverse();
            prop_assert_eq!(rank_of(&rev).unwrap(), r);
            let mut dup = vs.clone();
            dup.extend(vs.iter().cloned());
            prop_assert_eq!(rank_of(&dup).unwrap(), r);
            let scaled: Vec<_> = vs.iter().map(|x| x.scaled(&BigInt::from(scale))).collect();
            prop_assert_eq!(rank_of(&scaled).unwrap(), r);
        }

        #[test]
        fn span_membership_closed_under_addition(
            vs in vectors(3, 4),
            a in prop::collection::vec(-3i64..=3, 4),
            b in prop::collection::vec(-3i64..=3, 4),
        ) {
            // build two members of the span as integer combinations
            let comb = |c: &[i64]| vs.iter().zip(c).fold(IntVector::zero(3), |acc, (x, &t)| &acc + &x.scaled(&BigInt::from(t)));
            let x = comb(&a);
            let y = comb(&b);
            prop_assert!(in_span(&x, &vs).unwrap());
            prop_assert!(in_span(&y, &vs).unwrap());
            prop_assert!(in_span(&(&x + &y), &vs).unwrap());
        }

        #[test]
        fn span_equal_is_an_equivalence(a in vectors(2, 3), b in vectors(2, 3), c in vectors(2, 3)) {
            prop_assert!(span_equal(&a, &a).unwrap());
            prop_assert_eq!(span_equal(&a, &b).unwrap(), span_equal(&b, &a).unwrap());
            if span_equal(&a, &b).unwrap() && span_equal(&b, &c).unwrap() {
                prop_assert!(span_equal(&a, &c).unwrap());
            }
            let sa = Subspace::span(2, &a).unwrap();
            let sb = Subspace::span(2, &b).unwrap();
            prop_assert_eq!(sa == sb, span_equal(&a, &b).unwrap());
        }
    }
}
