//! Exact integer linear algebra: Hermite and Smith normal forms, sublattices
//! of `Z^n`, and finitely generated abelian groups given by presentations.
//!
//! Vectors are rows. The canonical Hermite form used throughout is
//! row-style and lower-staircase: the last nonzero entry of row `i` (its
//! pivot) sits in column `q_i` with `q_0 < q_1 < …`, pivots are positive, and
//! every entry of a later row in a pivot column lies in `[0, pivot)`. For a
//! full-rank square matrix this is a lower-triangular matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Converts a slice of machine integers.
pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts back to machine integers when every entry fits.
pub fn small_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| big_vec(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.data.iter().map(|r| small_vec(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    p.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        Ok(p)
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += x * &self.data[i][j];
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free elimination. Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.data.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.data.iter_mut() {
            r.swap(i, j);
        }
    }

    /// row_i ← row_i − q·row_j
    fn sub_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src = self.data[j].clone();
        for (x, s) in self.data[i].iter_mut().zip(src.iter()) {
            *x -= q * s;
        }
    }

    /// col_i ← col_i − q·col_j
    fn sub_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in self.data.iter_mut() {
            let s = r[j].clone();
            r[i] -= q * s;
        }
    }

    fn neg_row(&mut self, i: usize) {
        for x in self.data[i].iter_mut() {
            *x = -x.clone();
        }
    }

    /// Replaces rows (i, j) by (x·r_i + y·r_j, s·r_i + t·r_j).
    fn combine_rows(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, s: &BigInt, t: &BigInt) {
        let ri = self.data[i].clone();
        let rj = self.data[j].clone();
        for c in 0..self.cols {
            self.data[i][c] = x * &ri[c] + y * &rj[c];
            self.data[j][c] = s * &ri[c] + t * &rj[c];
        }
    }

    fn reverse_cols(&self) -> Self {
        let mut m = self.clone();
        for r in m.data.iter_mut() {
            r.reverse();
        }
        m
    }

    fn is_zero_row(&self, i: usize) -> bool {
        self.data[i].iter().all(Zero::is_zero)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| {
                let e: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", e.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Upper row-echelon Hermite form with transform: returns `(h, u)` with
/// `u · a = h`, `u` unimodular, pivots positive and the entries above each
/// pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_upper(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        for i in row + 1..r {
            if h.data[i][col].is_zero() {
                continue;
            }
            let p = h.data[row][col].clone();
            let b = h.data[i][col].clone();
            let eg = p.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let s = -(&b / &g);
            let t = &p / &g;
            h.combine_rows(row, i, &x, &y, &s, &t);
            u.combine_rows(row, i, &x, &y, &s, &t);
        }
        if h.data[row][col].is_zero() {
            continue;
        }
        if h.data[row][col].is_negative() {
            h.neg_row(row);
            u.neg_row(row);
        }
        let piv = h.data[row][col].clone();
        for i in 0..row {
            let q = h.data[i][col].div_floor(&piv);
            h.sub_row(i, row, &q);
            u.sub_row(i, row, &q);
        }
        row += 1;
    }
    (h, u)
}

/// Canonical lower-staircase Hermite form (see module docs), zero rows dropped.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_upper(&a.reverse_cols());
    let mut rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| !h.is_zero_row(i))
        .map(|i| {
            let mut r = h.data[i].clone();
            r.reverse();
            r
        })
        .collect();
    rows.reverse();
    IntMatrix {
        rows: rows.len(),
        cols: a.cols,
        data: rows,
    }
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    hnf(a).rows
}

/// Smith normal form `u · a · v = d` with `u`, `v` unimodular, `d` diagonal
/// with nonnegative entries `d_0 | d_1 | …`.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = min_entry(&d, t..r, t..c) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if d.data[i][t].is_zero() {
                    continue;
                }
                let q = &d.data[i][t] / &d.data[t][t];
                d.sub_row(i, t, &q);
                u.sub_row(i, t, &q);
                if !d.data[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if d.data[t][j].is_zero() {
                    continue;
                }
                let q = &d.data[t][j] / &d.data[t][t];
                d.sub_col(j, t, &q);
                v.sub_col(j, t, &q);
                if !d.data[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Move the smallest remainder in row/column t to the pivot.
                let mut best: Option<(usize, usize)> = None;
                let mut best_abs: Option<BigInt> = None;
                let mut consider = |i: usize, j: usize, x: &BigInt| {
                    if x.is_zero() {
                        return;
                    }
                    let ax = x.abs();
                    if best_abs.as_ref().is_none_or(|b| ax < *b) {
                        best_abs = Some(ax);
                        best = Some((i, j));
                    }
                };
                for i in t..r {
                    consider(i, t, &d.data[i][t]);
                }
                for j in t + 1..c {
                    consider(t, j, &d.data[t][j]);
                }
                let (bi, bj) = best.expect("pivot row or column is nonzero");
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let piv = d.data[t][t].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.data[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    // row_t ← row_t + row_i
                    let m1 = -BigInt::one();
                    d.sub_row(t, i, &m1);
                    u.sub_row(t, i, &m1);
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.neg_row(t);
            u.neg_row(t);
        }
    }
    (d, u, v)
}

fn min_entry(
    d: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<BigInt> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &d.data[i][j];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best_abs.as_ref().is_none_or(|b| ax < *b) {
                best_abs = Some(ax);
                best = Some((i, j));
            }
        }
    }
    best
}

/// Diagonal of a Smith form, including zeros up to `min(rows, cols)`.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = snf(a);
    (0..a.rows.min(a.cols))
        .map(|i| d.data[i][i].clone())
        .collect()
}

/// Both normal forms with the Smith transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfSnf {
    pub hnf: IntMatrix,
    pub snf: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn hnf_snf(m: &IntMatrix) -> HnfSnf {
    let (d, u, v) = snf(m);
    HnfSnf {
        hnf: hnf(m),
        snf: d,
        u,
        v,
    }
}

/// Left kernel `{y : y · a = 0}` as a sublattice of `Z^rows`.
pub fn left_kernel(a: &IntMatrix) -> Sublattice {
    let (h, u) = hermite_upper(a);
    let rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.data[i].clone())
        .collect();
    Sublattice::from_generators(a.rows, rows).expect("kernel rows have the right length")
}

/// Sublattice of `Z^n` stored by its canonical Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn zero(n: usize) -> Self {
        Sublattice {
            ambient: n,
            basis: IntMatrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Sublattice {
            ambient: n,
            basis: IntMatrix::identity(n),
        }
    }

    pub fn from_generators(n: usize, gens: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = IntMatrix::from_rows(n, gens)?;
        Ok(Sublattice {
            ambient: n,
            basis: hnf(&m),
        })
    }

    pub fn from_i64(n: usize, gens: &[Vec<i64>]) -> Result<Self> {
        Self::from_generators(n, gens.iter().map(|g| big_vec(g)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis.to_i64().expect("lattice entries fit in i64")
    }

    /// Coordinates of `v` in the Hermite basis, or `None` if `v` is not in
    /// the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        let mut w = v.to_vec();
        let r = self.basis.rows;
        let mut x = vec![BigInt::zero(); r];
        for i in (0..r).rev() {
            let row = &self.basis.data[i];
            let q = (0..self.ambient)
                .rev()
                .find(|&j| !row[j].is_zero())
                .expect("basis rows are nonzero");
            let (quo, rem) = w[q].div_rem(&row[q]);
            if !rem.is_zero() {
                return Ok(None);
            }
            for j in 0..self.ambient {
                w[j] -= &quo * &row[j];
            }
            x[i] = quo;
        }
        if w.iter().all(Zero::is_zero) {
            Ok(Some(x))
        } else {
            Ok(None)
        }
    }

    pub fn coordinates_i64(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        Ok(self
            .coordinates(&big_vec(v))?
            .map(|c| small_vec(&c).expect("coordinates fit in i64")))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        matches!(self.coordinates(v), Ok(Some(_)))
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(&big_vec(v))
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.data.iter().all(|r| self.contains(r))
    }

    /// Lattice sum `L + M`.
    pub fn sum(&self, other: &Sublattice) -> Result<Sublattice> {
        let mut gens = self.basis.data.clone();
        gens.extend(other.basis.data.iter().cloned());
        Sublattice::from_generators(self.ambient, gens)
    }

    /// Intersection `L ∩ M`.
    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let r1 = self.rank();
        let mut stacked = self.basis.data.clone();
        stacked.extend(
            other
                .basis
                .data
                .iter()
                .map(|r| r.iter().map(|x| -x).collect()),
        );
        let m = IntMatrix::from_rows(self.ambient, stacked)?;
        let k = left_kernel(&m);
        let gens = k
            .basis
            .data
            .iter()
            .map(|y| {
                let head = &y[..r1];
                self.basis.apply(head).expect("length r1")
            })
            .collect();
        Sublattice::from_generators(self.ambient, gens)
    }

    /// Preimage `{x ∈ Z^m : x · f ∈ L}` under the map given by the `m × n`
    /// matrix `f` (rows are images of unit vectors).
    pub fn preimage(&self, f: &IntMatrix) -> Result<Sublattice> {
        if f.cols != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: f.cols,
            });
        }
        let m = f.rows;
        let mut stacked = f.data.clone();
        stacked.extend(
            self.basis
                .data
                .iter()
                .map(|r| r.iter().map(|x| -x).collect()),
        );
        let mat = IntMatrix::from_rows(self.ambient, stacked)?;
        let k = left_kernel(&mat);
        let gens = k.basis.data.iter().map(|y| y[..m].to_vec()).collect();
        Sublattice::from_generators(m, gens)
    }

    /// Image `L · f` under an `n × p` matrix.
    pub fn image(&self, f: &IntMatrix) -> Result<Sublattice> {
        let p = self.basis.mul(f)?;
        Sublattice::from_generators(f.cols, p.data)
    }

    /// Saturation `(L ⊗ Q) ∩ Z^n`.
    pub fn saturation(&self) -> Result<Sublattice> {
        let k = left_kernel(&self.basis.transpose());
        // Vectors orthogonal to the orthogonal complement.
        let comp = IntMatrix::from_rows(self.ambient, k.basis.data.clone())?;
        Ok(left_kernel(&comp.transpose()))
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis)
    }
}

/// Membership test returning Hermite-basis coordinates.
pub fn solve_membership(l: &Sublattice, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    l.coordinates(v)
}

/// Finitely generated abelian group `Z^k / R` with a normal form for elements.
///
/// With `u · R · v = diag(d_i)`, an element `x` has new coordinates `x · v`;
/// coordinates with `d_i = 1` are dropped, those with `d_i > 1` are reduced
/// into `[0, d_i)`, and the remaining ones are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    generators: usize,
    relations: Sublattice,
    v: IntMatrix,
    diag: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(relations: Sublattice) -> Self {
        let k = relations.ambient;
        let (d, _, v) = snf(&relations.basis);
        let rk = relations.rank();
        let diag = (0..k)
            .map(|i| {
                if i < rk {
                    d.data[i][i].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        FgAbelianGroup {
            generators: k,
            relations,
            v,
            diag,
        }
    }

    /// `Z^k / ⟨relations⟩`.
    pub fn quotient_group(k: usize, relations: Vec<Vec<BigInt>>) -> Result<Self> {
        Ok(Self::new(Sublattice::from_generators(k, relations)?))
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Sublattice {
        &self.relations
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.diag.iter().filter(|d| d.is_zero()).count()
    }

    /// Normal form of the class of `x`.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let w = self.v.apply(x)?;
        let mut out = Vec::new();
        for (wi, di) in w.iter().zip(&self.diag) {
            if di.is_one() {
                continue;
            }
            if di.is_zero() {
                out.push(wi.clone());
            } else {
                out.push(wi.mod_floor(di));
            }
        }
        Ok(out)
    }

    pub fn reduce_i64(&self, x: &[i64]) -> Result<Vec<BigInt>> {
        self.reduce(&big_vec(x))
    }

    pub fn equal(&self, x: &[BigInt], y: &[BigInt]) -> Result<bool> {
        Ok(self.reduce(x)? == self.reduce(y)?)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(Zero::is_zero))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        for _ in 0..self.free_rank() {
            parts.push("Z".to_string());
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
