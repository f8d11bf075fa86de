//! Exact sparse linear algebra: integer Smith normal form and echelon
//! computations over Q and F_p.
//!
//! Everything here is deterministic.  Pivots are chosen by minimal absolute
//! value and then by coordinate order for the Smith form, and by smallest
//! column then smallest row for field echelon forms, so repeated runs produce
//! identical bases.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::error::{Error, Result};

/// Sparse matrix in coordinate form.  Zero entries are never stored and each
/// coordinate appears at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Clone + Zero> SparseMatrix<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Adds v to the entry at (r, c), dropping it if the sum is zero.
    pub fn add_to(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        let cur = self.entries.remove(&(r, c));
        let sum = match cur {
            Some(old) => old + v,
            None => v,
        };
        if !sum.is_zero() {
            self.entries.insert((r, c), sum);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(T::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = SparseMatrix::new(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn from_dense(data: &[Vec<T>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(rows, cols);
        for (r, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        m
    }

    /// Applies row and column permutations: entry (r, c) moves to
    /// (row_perm[r], col_perm[c]).  Used by invariance tests.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        let mut m = SparseMatrix::new(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m.entries.insert((row_perm[r], col_perm[c]), v.clone());
        }
        m
    }
}

impl SparseMatrix<BigInt> {
    pub fn from_i64(rows: usize, cols: usize, data: &[(usize, usize, i64)]) -> Self {
        let mut m = SparseMatrix::new(rows, cols);
        for &(r, c, v) in data {
            m.set(r, c, BigInt::from(v));
        }
        m
    }

    /// MatrixMarket-style coordinate dump, for eyeballing boundary matrices.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "%%MatrixMarket matrix coordinate integer general");
        let _ = writeln!(out, "{} {} {}", self.rows, self.cols, self.entries.len());
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{} {} {}", r + 1, c + 1, v);
        }
        out
    }
}

/// Result of a Smith normal form computation.  `invariant_factors` are the
/// positive diagonal entries d_1 | d_2 | ... | d_s; their count is the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Factors greater than one, i.e. the torsion part of the cokernel.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Quotient rounding to the nearest integer, so the remainder has absolute
/// value at most |d|/2.  Keeps Smith elimination pivots small.
fn rounded_div(x: &BigInt, d: &BigInt) -> BigInt {
    let (mut q, r) = x.div_rem(d);
    if r.abs() * 2u8 > d.abs() {
        if (&r * d).is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    q
}

/// Smith normal form over Z by elimination with exact big-integer arithmetic.
/// The pivot at each stage is a nonzero entry of minimal absolute value
/// (ties broken by coordinate order).
pub fn smith_normal_form(m: &SparseMatrix<BigInt>) -> SnfResult {
    let nr = m.rows();
    let nc = m.cols();
    let mut a = m.to_dense();
    let mut factors = Vec::new();

    let mut k = 0;
    while k < nr.min(nc) {
        // Minimal-|entry| pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if a[i][j].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if a[i][j].abs() < a[pi][pj].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }

        loop {
            let mut clean = true;
            for i in k + 1..nr {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[i][k], &a[k][k]);
                if !q.is_zero() {
                    for j in k..nc {
                        let t = &q * &a[k][j];
                        a[i][j] -= t;
                    }
                }
                if !a[i][k].is_zero() {
                    // Remainder is smaller than the pivot; promote it.
                    a.swap(i, k);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            for j in k + 1..nc {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[k][j], &a[k][k]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(k) {
                        let t = &q * &row[k];
                        row[j] -= t;
                    }
                }
                if !a[k][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(j, k);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row k and column k hold only the pivot now.  Enforce that the
            // pivot divides the rest of the submatrix.
            let mut divides = true;
            'scan: for i in k + 1..nr {
                for j in k + 1..nc {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        // Fold row i into row k; the next pass shrinks the pivot.
                        for jj in k..nc {
                            let t = a[i][jj].clone();
                            a[k][jj] += t;
                        }
                        divides = false;
                        break 'scan;
                    }
                }
            }
            if divides {
                break;
            }
        }

        if a[k][k].is_negative() {
            for j in k..nc {
                a[k][j] = -a[k][j].clone();
            }
        }
        factors.push(a[k][k].clone());
        k += 1;
    }

    debug_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    SnfResult {
        invariant_factors: factors,
    }
}

/// A field given as a context object; elements carry no backreference.
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug + std::fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; must not be called on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Human-readable name, used in reports.
    fn name(&self) -> String;
}

/// The rationals with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

/// The prime field F_p for a machine-word prime, elements stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if crate::is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::InvalidParameter(format!("{p} is not prime")))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        let digits = m.to_u64_digits().1;
        digits.first().copied().unwrap_or(0)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b % self.p) as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a % self.p != 0, "inverse of zero");
        // Extended Euclid over signed 128-bit words.
        let (mut r0, mut r1) = (self.p as i128, (*a % self.p) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.p == 0
    }
    fn name(&self) -> String {
        format!("F{}", self.p)
    }
}

/// Echelon data of a matrix viewed as a linear map from its column space.
#[derive(Debug, Clone)]
pub struct EchelonData<E> {
    pub rank: usize,
    /// Pivot columns of the reduced row echelon form, ascending.
    pub pivot_cols: Vec<usize>,
    /// Basis of the kernel, one vector (length = cols) per free column,
    /// ordered by free column index.
    pub kernel: Vec<Vec<E>>,
    /// Canonical basis of the column space: nonzero rows of the reduced
    /// row echelon form of the transpose (length = rows each).
    pub image: Vec<Vec<E>>,
}

/// In-place reduced row echelon form.  Pivots are found scanning columns
/// left to right and, within a column, rows top to bottom.  Returns the
/// pivot columns.
pub fn rref<F: Field>(f: &F, a: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !f.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = f.inv(&a[rank][col]);
        for j in col..cols {
            a[rank][j] = f.mul(&a[rank][j], &inv);
        }
        for r in 0..rows {
            if r != rank && !f.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for j in col..cols {
                    let t = f.mul(&factor, &a[rank][j]);
                    a[r][j] = f.sub(&a[r][j], &t);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

fn dense_in_field<F: Field>(f: &F, m: &SparseMatrix<BigInt>) -> Vec<Vec<F::Elem>> {
    let mut d = vec![vec![f.zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        d[r][c] = f.from_int(v);
    }
    d
}

/// Rank, kernel basis, image basis and pivot columns of an integer matrix
/// read over the given field.  RREF is unique, so results are canonical.
pub fn field_rank_kernel<F: Field>(f: &F, m: &SparseMatrix<BigInt>) -> EchelonData<F::Elem> {
    let cols = m.cols();
    let mut a = dense_in_field(f, m);
    let pivot_cols = rref(f, &mut a);
    let rank = pivot_cols.len();

    // Kernel: one vector per free column, built from the RREF rows.
    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(&a[r][free]);
        }
        kernel.push(v);
    }

    // Image: canonical column-space basis via RREF of the transpose.
    let mut at = {
        let t = m.transpose();
        dense_in_field(f, &t)
    };
    let tp = rref(f, &mut at);
    let image = at.into_iter().take(tp.len()).collect();

    EchelonData {
        rank,
        pivot_cols,
        kernel,
        image,
    }
}

/// Incremental echelon span over a field: insert vectors, reduce queries.
/// Rows are kept normalized with leading coefficient one.
pub struct SpanReducer<'a, F: Field> {
    field: &'a F,
    /// (pivot index, normalized row), sorted by pivot.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<'a, F: Field> SpanReducer<'a, F> {
    pub fn new(field: &'a F) -> Self {
        SpanReducer {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the current span, returning the residual.
    pub fn reduce(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = self.field;
        for (pivot, row) in &self.rows {
            if !f.is_zero(&v[*pivot]) {
                let factor = v[*pivot].clone();
                for (x, y) in v.iter_mut().zip(row.iter()) {
                    let t = f.mul(&factor, y);
                    *x = f.sub(x, &t);
                }
            }
        }
        v
    }

    /// Inserts v if independent of the span; returns true when rank grew.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        let f = self.field;
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[pivot]);
        let norm: Vec<_> = v.iter().map(|x| f.mul(x, &inv)).collect();
        let at = self
            .rows
            .binary_search_by_key(&pivot, |(p, _)| *p)
            .unwrap_err();
        self.rows.insert(at, (pivot, norm));
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.field;
        self.reduce(v.to_vec()).iter().all(|x| f.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Independent oracle: invariant factors from determinantal divisors.
    /// d_1 ... d_k equals the gcd of all k-by-k minors, so
    /// d_k = gcd_k / gcd_{k-1}.  Exponential, fine for tiny matrices.
    fn snf_by_minor_gcds(m: &SparseMatrix<BigInt>) -> Vec<BigInt> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(
                start: usize,
                n: usize,
                k: usize,
                cur: &mut Vec<usize>,
                out: &mut Vec<Vec<usize>>,
            ) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        fn det(a: &[Vec<BigInt>]) -> BigInt {
            let n = a.len();
            if n == 0 {
                return BigInt::from(1);
            }
            let mut total = BigInt::from(0);
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][j] * det(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }

        let dense = m.to_dense();
        let (nr, nc) = (m.rows(), m.cols());
        let mut factors = Vec::new();
        let mut prev = BigInt::from(1);
        for k in 1..=nr.min(nc) {
            let mut g = BigInt::from(0);
            for ri in subsets(nr, k) {
                for ci in subsets(nc, k) {
                    let sub: Vec<Vec<BigInt>> = ri
                        .iter()
                        .map(|&r| ci.iter().map(|&c| dense[r][c].clone()).collect())
                        .collect();
                    g = g.gcd(&det(&sub));
                }
            }
            if g.is_zero() {
                break;
            }
            factors.push(&g / &prev);
            prev = g;
        }
        factors
    }

    #[test]
    fn snf_two_by_two() {
        let m = SparseMatrix::from_i64(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors, vec![bi(2), bi(4)]);
        assert_eq!(snf_by_minor_gcds(&m), vec![bi(2), bi(4)]);
    }

    #[test]
    fn snf_unit_factor() {
        // Column matrix [1, -1]^T has a single unit factor: cokernel Z.
        let m = SparseMatrix::from_i64(2, 1, &[(0, 0, 1), (1, 0, -1)]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors, vec![bi(1)]);
        assert!(snf.torsion_factors().is_empty());
    }

    #[test]
    fn snf_zero_and_empty() {
        let z = SparseMatrix::<BigInt>::new(3, 2);
        assert_eq!(
            smith_normal_form(&z).invariant_factors,
            Vec::<BigInt>::new()
        );
        let e = SparseMatrix::<BigInt>::new(0, 5);
        assert_eq!(
            smith_normal_form(&e).invariant_factors,
            Vec::<BigInt>::new()
        );
    }

    #[test]
    fn snf_mixed_torsion() {
        // diag(2, 3) padded with a zero row: invariant factors 1, 6.
        let m = SparseMatrix::from_i64(3, 2, &[(0, 0, 2), (1, 1, 3)]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors, vec![bi(1), bi(6)]);
        assert_eq!(snf_by_minor_gcds(&m), vec![bi(1), bi(6)]);
    }

    #[test]
    fn snf_agrees_with_minor_gcd_oracle() {
        // Deterministic pseudo-random small matrices.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let nr = (next() % 4 + 1) as usize;
            let nc = (next() % 4 + 1) as usize;
            let mut m = SparseMatrix::new(nr, nc);
            for r in 0..nr {
                for c in 0..nc {
                    let v = (next() % 19) as i64 - 9;
                    m.set(r, c, bi(v));
                }
            }
            let got = smith_normal_form(&m).invariant_factors;
            let want = snf_by_minor_gcds(&m);
            assert_eq!(got, want, "matrix {:?}", m.to_dense());
        }
    }

    #[test]
    fn snf_invariant_under_permutation() {
        let m = SparseMatrix::from_i64(
            3,
            3,
            &[(0, 0, 2), (0, 2, 4), (1, 1, 6), (2, 0, 2), (2, 2, 10)],
        );
        let base = smith_normal_form(&m).invariant_factors;
        let p = m.permuted(&[2, 0, 1], &[1, 2, 0]);
        assert_eq!(smith_normal_form(&p).invariant_factors, base);
    }

    #[test]
    fn rational_rank_matches_snf_rank() {
        let m = SparseMatrix::from_i64(
            3,
            4,
            &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2), (2, 3, 5)],
        );
        let snf = smith_normal_form(&m);
        let ech = field_rank_kernel(&Rationals, &m);
        assert_eq!(ech.rank, snf.rank());
        assert_eq!(ech.kernel.len(), m.cols() - ech.rank);
        // Kernel vectors are honest kernel elements.
        let dense = m.to_dense();
        for v in &ech.kernel {
            for row in &dense {
                let mut s = BigRational::zero();
                for (c, x) in v.iter().enumerate() {
                    s += BigRational::from_integer(row[c].clone()) * x;
                }
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn prime_field_rank_counts_factors_coprime_to_p() {
        // diag(2, 3, 4): over F2 only the 3 survives; over F3 the 2 and 4.
        let m = SparseMatrix::from_i64(3, 3, &[(0, 0, 2), (1, 1, 3), (2, 2, 4)]);
        let f2 = PrimeField::new(2).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(field_rank_kernel(&f2, &m).rank, 1);
        assert_eq!(field_rank_kernel(&f3, &m).rank, 2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors, vec![bi(1), bi(2), bi(12)]);
    }

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(13).unwrap();
        for a in 1..13u64 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn echelon_pivots_deterministic() {
        let m = SparseMatrix::from_i64(2, 3, &[(0, 1, 3), (1, 1, 6), (1, 2, 2)]);
        let e = field_rank_kernel(&Rationals, &m);
        assert_eq!(e.pivot_cols, vec![1, 2]);
        assert_eq!(e.rank, 2);
        assert_eq!(e.image.len(), 2);
    }

    #[test]
    fn span_reducer_membership() {
        let f = Rationals;
        let mut s = SpanReducer::new(&f);
        let q = |v: i64| BigRational::from_integer(bi(v));
        assert!(s.insert(vec![q(1), q(2), q(0)]));
        assert!(s.insert(vec![q(0), q(1), q(1)]));
        assert!(!s.insert(vec![q(1), q(3), q(1)]));
        assert!(s.contains(&[q(2), q(5), q(1)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn matrix_market_dump() {
        let m = SparseMatrix::from_i64(2, 2, &[(0, 0, 2), (1, 1, -3)]);
        let dump = m.to_matrix_market();
        assert!(dump.contains("2 2 2"));
        assert!(dump.contains("1 1 2"));
        assert!(dump.contains("2 2 -3"));
    }
}
