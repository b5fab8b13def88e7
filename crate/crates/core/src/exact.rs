//! Exact rational scalars and sparse linear algebra over the rationals.
//!
//! Kernels, ranks and span-membership certificates for the per-degree graded
//! blocks. Everything is exact: elimination runs on denominator-cleared
//! integer rows (fraction-free, content-stripped after every combination) and
//! results are normalized back to rationals only at extraction time, so no
//! intermediate denominator blowup occurs. Outputs are canonical: pivoting is
//! first-nonzero-column / smallest-row-index, and kernel bases are returned in
//! reduced column-echelon form with the identity block on the free columns.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational scalar. Always reduced, denominator positive.
pub type Rational = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Sparse vector over the rationals: ascending indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        SparseVec { dim, entries: vec![(index, Rational::one())] }
    }

    /// Builds from arbitrary (index, value) pairs: sorts, merges duplicates,
    /// drops zeros. Panics if an index is out of range.
    pub fn from_entries(dim: usize, mut raw: Vec<(usize, Rational)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Rational {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`, merged exactly.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i == j => {
                    let (i, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let v = va + vb * c;
                    if !v.is_zero() {
                        entries.push((*i, v));
                    }
                }
                (Some((i, _)), Some((j, _))) if i < j => {
                    let (i, va) = a.next().unwrap();
                    entries.push((*i, va.clone()));
                }
                (Some(_), Some(_)) | (None, Some(_)) => {
                    let (j, vb) = b.next().unwrap();
                    let v = vb * c;
                    if !v.is_zero() {
                        entries.push((*j, v));
                    }
                }
                (Some(_), None) => {
                    let (i, va) = a.next().unwrap();
                    entries.push((*i, va.clone()));
                }
                (None, None) => break,
            }
        }
        SparseVec { dim: self.dim, entries }
    }
}

/// Sparse matrix as a sequence of rows sharing one column dimension.
#[derive(Clone, Debug)]
pub struct SparseMat {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMat {
    pub fn new(ncols: usize, rows: Vec<SparseVec>) -> Self {
        assert!(rows.iter().all(|r| r.dim() == ncols), "row dimension mismatch");
        SparseMat { ncols, rows }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                SparseVec::from_entries(
                    ncols,
                    r.iter().enumerate().map(|(i, &v)| (i, rat(v))).collect(),
                )
            })
            .collect();
        SparseMat { ncols, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Matrix-vector product, used by tests to confirm kernel vectors exactly.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        assert_eq!(v.dim(), self.ncols);
        let entries = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| {
                let d = dot(row, v);
                if d.is_zero() {
                    None
                } else {
                    Some((i, d))
                }
            })
            .collect();
        SparseVec { dim: self.rows.len(), entries }
    }
}

fn dot(a: &SparseVec, b: &SparseVec) -> Rational {
    let (mut ia, mut ib) = (0, 0);
    let mut acc = Rational::zero();
    while ia < a.entries.len() && ib < b.entries.len() {
        let (ca, va) = &a.entries[ia];
        let (cb, vb) = &b.entries[ib];
        match ca.cmp(cb) {
            std::cmp::Ordering::Less => ia += 1,
            std::cmp::Ordering::Greater => ib += 1,
            std::cmp::Ordering::Equal => {
                acc += va * vb;
                ia += 1;
                ib += 1;
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Integer rows: the fraction-free working representation.
// ---------------------------------------------------------------------------

/// Integer scalar with a single-word fast path; falls back to arbitrary
/// precision only on overflow, which keeps elimination allocation-free in the
/// common case. Values in the `S` variant are canonical (every representable
/// i64 stays in `S`).
#[derive(Clone, Debug, PartialEq, Eq)]
enum Int {
    S(i64),
    B(BigInt),
}

impl Int {
    fn from_big(v: BigInt) -> Int {
        match i64::try_from(&v) {
            Ok(s) => Int::S(s),
            Err(_) => Int::B(v),
        }
    }

    fn from_i128(v: i128) -> Int {
        match i64::try_from(v) {
            Ok(s) => Int::S(s),
            Err(_) => Int::B(BigInt::from(v)),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Int::S(v) => BigInt::from(*v),
            Int::B(v) => v.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Int::S(0))
    }

    fn is_one_abs(&self) -> bool {
        matches!(self, Int::S(1) | Int::S(-1))
    }

    /// `a * b - c * d`, exact.
    fn cross(a: &Int, b: &Int, c: &Int, d: &Int) -> Int {
        if let (Int::S(a), Int::S(b), Int::S(c), Int::S(d)) = (a, b, c, d) {
            let v = (*a as i128) * (*b as i128) - (*c as i128) * (*d as i128);
            return Int::from_i128(v);
        }
        Int::from_big(a.to_big() * b.to_big() - c.to_big() * d.to_big())
    }

    fn mul(a: &Int, b: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (a, b) {
            return Int::from_i128((*a as i128) * (*b as i128));
        }
        Int::from_big(a.to_big() * b.to_big())
    }

    fn neg(&self) -> Int {
        match self {
            Int::S(v) => match v.checked_neg() {
                Some(n) => Int::S(n),
                None => Int::B(-BigInt::from(*v)),
            },
            Int::B(v) => Int::from_big(-v.clone()),
        }
    }

    fn gcd(a: &Int, b: &Int) -> Int {
        match (a, b) {
            (Int::S(x), Int::S(y)) => {
                let (mut x, mut y) = (x.unsigned_abs(), y.unsigned_abs());
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                Int::from_i128(x as i128)
            }
            _ => Int::from_big(a.to_big().gcd(&b.to_big())),
        }
    }

    /// Exact division (the divisor is known to divide).
    fn div_exact(&self, d: &Int) -> Int {
        match (self, d) {
            (Int::S(v), Int::S(d)) => Int::from_i128((*v as i128) / (*d as i128)),
            _ => Int::from_big(self.to_big() / d.to_big()),
        }
    }
}

/// Row with integer entries, ascending indices, content 1.
#[derive(Clone, Debug)]
struct IntRow {
    entries: Vec<(usize, Int)>,
}

impl IntRow {
    fn lead(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn strip_content(&mut self) {
        let mut g = Int::S(0);
        for (_, v) in &self.entries {
            g = Int::gcd(&g, v);
            if g.is_one_abs() {
                return;
            }
        }
        if g.is_zero() || g.is_one_abs() {
            return;
        }
        for (_, v) in &mut self.entries {
            *v = v.div_exact(&g);
        }
    }

    fn from_sparse(v: &SparseVec) -> Self {
        let mut lcm = BigInt::one();
        for (_, q) in v.entries() {
            lcm = lcm.lcm(q.denom());
        }
        let mut entries: Vec<(usize, Int)> = v
            .entries()
            .iter()
            .map(|(i, q)| (*i, Int::from_big(q.numer() * (&lcm / q.denom()))))
            .collect();
        entries.retain(|(_, v)| !v.is_zero());
        let mut row = IntRow { entries };
        row.strip_content();
        row
    }

    /// `pivot_coef * self - my_coef * pivot_row`, then content-stripped.
    fn eliminate(&self, my_coef: &Int, pivot_coef: &Int, pivot: &IntRow) -> IntRow {
        let mut out = IntRow { entries: Vec::new() };
        self.eliminate_into(my_coef, pivot_coef, pivot, &mut out);
        out
    }

    /// As `eliminate`, reusing the caller's buffer.
    fn eliminate_into(&self, my_coef: &Int, pivot_coef: &Int, pivot: &IntRow, out: &mut IntRow) {
        let entries = &mut out.entries;
        entries.clear();
        entries.reserve(self.entries.len() + pivot.entries.len());
        let (mut ia, mut ib) = (0, 0);
        while ia < self.entries.len() || ib < pivot.entries.len() {
            let next_a = self.entries.get(ia).map(|(i, _)| *i);
            let next_b = pivot.entries.get(ib).map(|(i, _)| *i);
            match (next_a, next_b) {
                (Some(i), Some(j)) if i == j => {
                    let v = Int::cross(pivot_coef, &self.entries[ia].1, my_coef, &pivot.entries[ib].1);
                    if !v.is_zero() {
                        entries.push((i, v));
                    }
                    ia += 1;
                    ib += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    entries.push((i, Int::mul(pivot_coef, &self.entries[ia].1)));
                    ia += 1;
                }
                (Some(_), Some(j)) => {
                    entries.push((j, Int::mul(my_coef, &pivot.entries[ib].1).neg()));
                    ib += 1;
                }
                (Some(i), None) => {
                    entries.push((i, Int::mul(pivot_coef, &self.entries[ia].1)));
                    ia += 1;
                }
                (None, Some(j)) => {
                    entries.push((j, Int::mul(my_coef, &pivot.entries[ib].1).neg()));
                    ib += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out.strip_content();
    }

    fn to_sparse_normalized(&self, dim: usize) -> SparseVec {
        // Normalize so the leading entry is 1.
        let lead = self
            .entries
            .first()
            .map(|(_, v)| v.to_big())
            .unwrap_or_else(BigInt::one);
        let entries = self
            .entries
            .iter()
            .map(|(i, v)| (*i, Rational::new(v.to_big(), lead.clone())))
            .collect();
        SparseVec { dim, entries }
    }
}

/// Forward elimination with the deterministic pivot rule: pivot column is the
/// first column holding a nonzero among remaining rows, pivot row the one of
/// smallest original index.
fn forward_eliminate(input: Vec<IntRow>) -> Vec<IntRow> {
    let mut rows: Vec<IntRow> = input.into_iter().filter(|r| !r.is_empty()).collect();
    let mut pivots: Vec<IntRow> = Vec::new();
    while !rows.is_empty() {
        let pcol = rows.iter().filter_map(IntRow::lead).min().unwrap();
        let pos = rows.iter().position(|r| r.lead() == Some(pcol)).unwrap();
        let pivot = rows.remove(pos);
        let pc = pivot.entries[0].1.clone();
        let mut next = Vec::with_capacity(rows.len());
        for r in rows {
            if r.lead() == Some(pcol) {
                let reduced = r.eliminate(&r.entries[0].1.clone(), &pc, &pivot);
                if !reduced.is_empty() {
                    next.push(reduced);
                }
            } else {
                next.push(r);
            }
        }
        rows = next;
        pivots.push(pivot);
    }
    pivots
}

fn matrix_forward(m: &SparseMat) -> Vec<IntRow> {
    forward_eliminate(m.rows.iter().map(IntRow::from_sparse).collect())
}

/// Exact rank over the rationals.
pub fn rank(m: &SparseMat) -> usize {
    matrix_forward(m).len()
}

/// Reduced row-echelon form, rows as rational vectors with pivot entries 1.
pub fn rref(m: &SparseMat) -> Vec<SparseVec> {
    let pivots = matrix_forward(m);
    let mut rows: Vec<SparseVec> = pivots
        .iter()
        .map(|r| r.to_sparse_normalized(m.ncols))
        .collect();
    // Back-substitution: clear pivot columns of later rows from earlier rows.
    for i in (0..rows.len()).rev() {
        for j in (i + 1)..rows.len() {
            let pc = rows[j].entries[0].0;
            let c = rows[i].get(pc);
            if !c.is_zero() {
                rows[i] = rows[i].add_scaled(&(-c), &rows[j].clone());
            }
        }
    }
    rows
}

/// Basis of the right kernel of `m`, in reduced column-echelon normal form:
/// one vector per free column, carrying 1 there, listed by ascending free
/// column. The empty matrix yields the full standard basis.
pub fn kernel_basis(m: &SparseMat) -> Vec<SparseVec> {
    let rows = rref(m);
    let pivot_cols: Vec<usize> = rows.iter().map(|r| r.entries[0].0).collect();
    let mut is_pivot = vec![false; m.ncols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(m.ncols - pivot_cols.len());
    for f in 0..m.ncols {
        if is_pivot[f] {
            continue;
        }
        let mut entries = vec![(f, Rational::one())];
        for (row, &p) in rows.iter().zip(&pivot_cols) {
            let a = row.get(f);
            if !a.is_zero() {
                entries.push((p, -a));
            }
        }
        basis.push(SparseVec::from_entries(m.ncols, entries));
    }
    basis
}

/// Span membership with certificate: `Some(coeffs)` iff `v = sum c_i b_i`.
pub fn in_span(v: &SparseVec, basis: &[SparseVec]) -> Result<Option<Vec<Rational>>, ExactError> {
    for b in basis {
        if b.dim() != v.dim() {
            return Err(ExactError::DimensionMismatch { expected: v.dim(), got: b.dim() });
        }
    }
    Ok(SpanSolver::new(v.dim(), basis).solve(v))
}

/// Precomputed solver for repeated membership tests against a fixed basis.
///
/// Rows are the basis vectors augmented with identity coordinates, forward
/// eliminated on the vector part; solving reduces the query and reads the
/// certificate off the augmented part.
pub struct SpanSolver {
    dim: usize,
    nbasis: usize,
    rows: Vec<IntRow>, // pivot (lead) strictly inside 0..dim
}

impl SpanSolver {
    pub fn new(dim: usize, basis: &[SparseVec]) -> Self {
        let mut raw = Vec::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            assert_eq!(b.dim(), dim, "basis vector dimension mismatch");
            // Augment before normalizing so scaling hits both parts uniformly.
            let mut entries: Vec<(usize, Rational)> = b.entries().to_vec();
            entries.push((dim + i, Rational::one()));
            let augmented = SparseVec::from_entries(dim + basis.len(), entries);
            raw.push(IntRow::from_sparse(&augmented));
        }
        // Forward elimination restricted to the vector part: a row whose
        // vector part empties out records a dependency and is dropped.
        let mut rows: Vec<IntRow> = Vec::new();
        'outer: for mut r in raw {
            loop {
                let Some(lead) = r.lead() else { continue 'outer };
                if lead >= dim {
                    continue 'outer;
                }
                match rows.iter().find(|p| p.lead() == Some(lead)) {
                    Some(p) => {
                        let pc = p.entries[0].1.clone();
                        let mc = r.entries[0].1.clone();
                        r = r.eliminate(&mc, &pc, p);
                    }
                    None => {
                        rows.push(r);
                        continue 'outer;
                    }
                }
            }
        }
        rows.sort_by_key(|r| r.lead());
        SpanSolver { dim, nbasis: basis.len(), rows }
    }

    pub fn solve(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        assert_eq!(v.dim(), self.dim);
        let mut work: SparseVec = v.clone();
        work.dim = self.dim + self.nbasis;
        for p in &self.rows {
            let lead = p.lead().unwrap();
            let c = work.get(lead);
            if c.is_zero() {
                continue;
            }
            let pc = Rational::from_integer(p.entries[0].1.to_big());
            let factor = -(c / pc);
            let prow = SparseVec {
                dim: self.dim + self.nbasis,
                entries: p
                    .entries
                    .iter()
                    .map(|(i, v)| (*i, Rational::from_integer(v.to_big())))
                    .collect(),
            };
            work = work.add_scaled(&factor, &prow);
        }
        if work.entries.iter().any(|(i, _)| *i < self.dim) {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); self.nbasis];
        for (i, c) in work.entries {
            coeffs[i - self.dim] = -c;
        }
        Some(coeffs)
    }
}

/// Incremental span of integer-normalized rows, for closure computations.
/// `insert` reduces the candidate against the current echelon and keeps it
/// only if independent; the stored rows stay forward-reduced.
pub struct EchelonSpan {
    ncols: usize,
    by_lead: BTreeMap<usize, usize>,
    rows: Vec<IntRow>,
}

impl EchelonSpan {
    pub fn new(ncols: usize) -> Self {
        EchelonSpan { ncols, by_lead: BTreeMap::new(), rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Returns true if the vector enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        assert_eq!(v.dim(), self.ncols);
        let reduced = self.reduce(IntRow::from_sparse(v));
        match reduced.lead() {
            None => false,
            Some(lead) => {
                self.by_lead.insert(lead, self.rows.len());
                self.rows.push(reduced);
                true
            }
        }
    }

    /// True iff `v` already lies in the span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(IntRow::from_sparse(v)).is_empty()
    }

    /// Forward reduction against the stored rows, ping-ponging between two
    /// buffers so no per-step allocation happens.
    fn reduce(&self, row: IntRow) -> IntRow {
        let mut cur = row;
        let mut scratch = IntRow { entries: Vec::new() };
        loop {
            let Some(lead) = cur.lead() else { return cur };
            match self.by_lead.get(&lead) {
                Some(&idx) => {
                    let p = &self.rows[idx];
                    let pc = p.entries[0].1.clone();
                    let mc = cur.entries[0].1.clone();
                    cur.eliminate_into(&mc, &pc, p, &mut scratch);
                    std::mem::swap(&mut cur, &mut scratch);
                }
                None => return cur,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_of_proportional_rows() {
        let m = SparseMat::from_dense(&[vec![1, 1], vec![2, 2]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 1);
        // Canonical form: 1 in the free column.
        assert_eq!(basis[0], SparseVec::from_entries(2, vec![(0, rat(-1)), (1, rat(1))]));
        assert!(m.mul_vec(&basis[0]).is_zero());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = SparseMat::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(kernel_basis(&m).is_empty());
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn kernel_of_single_row() {
        let m = SparseMat::from_dense(&[vec![1, 2, 3]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], SparseVec::from_entries(3, vec![(0, rat(-2)), (1, rat(1))]));
        assert_eq!(basis[1], SparseVec::from_entries(3, vec![(0, rat(-3)), (2, rat(1))]));
        for v in &basis {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn rank_examples() {
        let zero = SparseMat::new(4, vec![SparseVec::zero(4); 3]);
        assert_eq!(rank(&zero), 0);
        assert_eq!(kernel_basis(&zero).len(), 4);
        let m = SparseMat::from_dense(&[vec![1, 2], vec![2, 4], vec![1, 0]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn empty_matrix_gives_standard_basis() {
        let m = SparseMat::new(3, vec![]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            assert_eq!(*v, SparseVec::unit(3, i));
        }
    }

    #[test]
    fn span_membership_examples() {
        let e1 = SparseVec::unit(2, 0);
        let e2 = SparseVec::unit(2, 1);
        let z = SparseVec::zero(2);
        assert_eq!(in_span(&z, &[e1.clone(), e2.clone()]).unwrap(), Some(vec![rat(0), rat(0)]));
        let v = SparseVec::from_entries(2, vec![(0, rat(1)), (1, rat(1))]);
        assert_eq!(in_span(&v, &[e1, e2]).unwrap(), Some(vec![rat(1), rat(1)]));

        let v = SparseVec::unit(3, 0);
        let b1 = SparseVec::from_entries(3, vec![(0, rat(1)), (1, rat(1))]);
        let b2 = SparseVec::unit(3, 1);
        assert_eq!(in_span(&v, &[b1, b2]).unwrap(), Some(vec![rat(1), rat(-1)]));

        let bad = SparseVec::unit(2, 0);
        let b = SparseVec::unit(3, 0);
        assert!(in_span(&bad, &[b]).is_err());
    }

    #[test]
    fn span_solver_handles_dependent_basis() {
        let b1 = SparseVec::from_entries(2, vec![(0, rat(1)), (1, rat(1))]);
        let b2 = b1.scaled(&rat(2));
        let solver = SpanSolver::new(2, &[b1.clone(), b2]);
        let v = b1.scaled(&rat(3));
        let coeffs = solver.solve(&v).unwrap();
        assert_eq!(coeffs.len(), 2);
        // Certificate must reproduce v whichever representative was kept.
        let rebuilt = SparseVec::zero(2)
            .add_scaled(&coeffs[0], &b1)
            .add_scaled(&(coeffs[1].clone() * rat(2)), &b1);
        assert_eq!(rebuilt, v);
        let outside = SparseVec::unit(2, 0);
        assert!(solver.solve(&outside).is_none());
    }

    #[test]
    fn echelon_span_insert_and_contains() {
        let mut span = EchelonSpan::new(3);
        assert!(span.insert(&SparseVec::from_entries(3, vec![(0, rat(1)), (1, rat(2))])));
        assert!(span.insert(&SparseVec::from_entries(3, vec![(1, rat(1)), (2, rat(1))])));
        assert!(!span.insert(&SparseVec::from_entries(
            3,
            vec![(0, rat(2)), (1, rat(6)), (2, rat(2))],
        )));
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&SparseVec::from_entries(3, vec![(0, rat(1)), (1, rat(3)), (2, rat(1))])));
        assert!(!span.contains(&SparseVec::unit(3, 2)));
    }

    // -----------------------------------------------------------------
    // Oracle: naive Gaussian elimination over BigRational, written
    // independently of the fraction-free implementation.
    // -----------------------------------------------------------------

    fn naive_rref(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
        let mut m: Vec<Vec<Rational>> = rows.to_vec();
        let mut pivot_row = 0;
        for col in 0..ncols {
            let Some(r) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(pivot_row, r);
            let inv = m[pivot_row][col].clone();
            for v in &mut m[pivot_row] {
                *v = &*v / &inv;
            }
            for r in 0..m.len() {
                if r != pivot_row && !m[r][col].is_zero() {
                    let c = m[r][col].clone();
                    for j in 0..ncols {
                        let delta = &c * &m[pivot_row][j];
                        m[r][j] = &m[r][j] - delta;
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == m.len() {
                break;
            }
        }
        m.truncate(pivot_row);
        m
    }

    fn to_dense(v: &SparseVec) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.dim()];
        for (i, q) in v.entries() {
            out[*i] = q.clone();
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_naive_gaussian_elimination(raw in proptest::collection::vec(
            proptest::collection::vec(-9i64..=9, 6), 6)) {
            let m = SparseMat::from_dense(&raw);
            let dense: Vec<Vec<Rational>> =
                raw.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
            let oracle = naive_rref(&dense, 6);
            prop_assert_eq!(rank(&m), oracle.len());
            let ours = rref(&m);
            prop_assert_eq!(ours.len(), oracle.len());
            for (a, b) in ours.iter().zip(oracle.iter()) {
                prop_assert_eq!(&to_dense(a), b);
            }
        }

        #[test]
        fn rank_plus_nullity_and_exact_kernel(raw in proptest::collection::vec(
            proptest::collection::vec(-9i64..=9, 5), 4)) {
            let m = SparseMat::from_dense(&raw);
            let basis = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + basis.len(), m.ncols());
            for v in &basis {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            // Kernel vectors are independent: pairwise distinct free columns.
            let mut span = EchelonSpan::new(m.ncols());
            for v in &basis {
                prop_assert!(span.insert(v));
            }
        }
    }
}
