//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here is a pure function of immutable inputs. Empty matrices
//! (zero rows or zero columns) are accepted everywhere.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type IntVector = Vec<BigInt>;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds from small-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        Self::from_fn(r, c, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            BigInt::from(row[j])
        })
    }

    pub fn from_big_rows(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[IntVector]) -> Self {
        for c in columns {
            assert_eq!(c.len(), rows);
        }
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        *self.at(i, j) += v;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn row(&self, i: usize) -> IntVector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.at(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += self.get(i, j) * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let data = self.data.iter().map(|a| a * c).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: u32) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn rank(&self) -> usize {
        snf(self).rank()
    }

    /// Reduces every entry of row `i` modulo `moduli[i]` into `[0, m)`;
    /// rows with modulus zero are left alone.
    pub fn reduce_rows(&self, moduli: &[BigInt]) -> IntMatrix {
        assert_eq!(moduli.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| {
            let m = &moduli[i];
            if m.is_zero() {
                self.get(i, j).clone()
            } else {
                self.get(i, j).mod_floor(m)
            }
        })
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * c;
            if !v.is_zero() {
                *self.at(dst, j) += v;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * c;
            if !v.is_zero() {
                *self.at(i, dst) += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        MatrixRepr { rows: self.rows, cols: self.cols, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows || r.entries.iter().any(|row| row.len() != r.cols) {
            return Err(D::Error::custom("matrix entries do not match rows/cols"));
        }
        let mut data = Vec::with_capacity(r.rows * r.cols);
        for row in &r.entries {
            for e in row {
                data.push(e.parse::<BigInt>().map_err(|_| D::Error::custom(format!("bad integer `{e}`")))?);
            }
        }
        Ok(IntMatrix { rows: r.rows, cols: r.cols, data })
    }
}

/// Serde adapter writing integers as decimal strings.
pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad integer `{s}`")))
    }

    /// Same, for vectors.
    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
            let v: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            v.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad integer `{s}`")))).collect()
        }
    }

    /// Same, for optional values.
    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_str(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad integer `{s}`")))).transpose()
        }
    }
}

/// Smith normal form `U·A·V = D` together with the inverses of `U` and `V`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonnegative invariant factors d₁ | d₂ | … of length min(rows, cols); zeros trail.
    pub diagonal: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

struct SnfState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += c·row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.row_axpy(dst, src, c);
        self.u.row_axpy(dst, src, c);
        self.u_inv.col_axpy(src, dst, &-c);
    }

    /// col[dst] += c·col[src]
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.col_axpy(dst, src, c);
        self.v.col_axpy(dst, src, c);
        self.v_inv.row_axpy(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.d.rows {
            for j in t..self.d.cols {
                let a = self.d.get(i, j).abs();
                if a.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|b| a < b.2) {
                    let one = a.is_one();
                    best = Some((i, j, a));
                    if one {
                        let (i, j, _) = best.unwrap();
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Smith normal form with smallest-pivot strategy.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut s = SnfState {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let k = m.min(n);
    for t in 0..k {
        let Some((pi, pj)) = s.smallest_in(t) else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..m {
                if s.d.get(i, t).is_zero() {
                    continue;
                }
                let q = s.d.get(i, t).div_floor(s.d.get(t, t));
                s.row_op(i, t, &-q);
                if !s.d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s.d.get(t, j).is_zero() {
                    continue;
                }
                let q = s.d.get(t, j).div_floor(s.d.get(t, t));
                s.col_op(j, t, &-q);
                if !s.d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t to the pivot.
                let mut best = (t, t, s.d.get(t, t).abs());
                for i in t + 1..m {
                    let a = s.d.get(i, t).abs();
                    if !a.is_zero() && a < best.2 {
                        best = (i, t, a);
                    }
                }
                for j in t + 1..n {
                    let a = s.d.get(t, j).abs();
                    if !a.is_zero() && a < best.2 {
                        best = (t, j, a);
                    }
                }
                s.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                continue;
            }
            // Row and column clear; enforce divisibility of the remaining block.
            let p = s.d.get(t, t).clone();
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s.d.get(i, j).is_multiple_of(&p));
            match bad {
                Some((i, _)) => s.row_op(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.d.get(t, t).is_negative() {
            s.negate_row(t);
        }
    }
    let diagonal = (0..k).map(|i| s.d.get(i, i).clone()).collect();
    SnfResult { u: s.u, d: s.d, v: s.v, u_inv: s.u_inv, v_inv: s.v_inv, diagonal }
}

/// Saturated basis (as columns) of the integer kernel `{x : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let r = snf(a);
    let rank = r.rank();
    let cols: Vec<usize> = (rank..a.cols).collect();
    r.v.select_cols(&cols)
}

/// Some integer `x` with `A·x = b`, or `None` if `b` is outside the image lattice.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<IntVector> {
    assert_eq!(a.rows, b.len(), "solve: dimension mismatch");
    solve_with(&snf(a), a.cols, b)
}

/// [`solve`] reusing a precomputed factorization of `A`.
pub fn solve_with(f: &SnfResult, ncols: usize, b: &[BigInt]) -> Option<IntVector> {
    let c = f.u.mul_vec(b);
    let rank = f.rank();
    let mut y = vec![BigInt::zero(); ncols];
    for (i, ci) in c.iter().enumerate() {
        if i < rank {
            let (q, r) = ci.div_rem(&f.diagonal[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(f.v.mul_vec(&y))
}

/// Basis (as columns) of the lattice spanned by the columns of `A`.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let r = snf(a);
    let rank = r.rank();
    IntMatrix::from_fn(a.rows, rank, |i, j| r.u_inv.get(i, j) * &r.diagonal[j])
}

/// Basis of the saturation `(span_Q A) ∩ Zⁿ` of the column lattice of `A`.
pub fn saturation_basis(a: &IntMatrix) -> IntMatrix {
    let r = snf(a);
    let cols: Vec<usize> = (0..r.rank()).collect();
    r.u_inv.select_cols(&cols)
}

/// Column Hermite normal form: the unique echelon basis of the column lattice.
///
/// Pivot rows increase left to right, pivots are positive and entries to the
/// left of a pivot are reduced into `[0, pivot)`.
pub fn column_hnf(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let mut c = 0;
    for i in 0..h.rows {
        if c == h.cols {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for j in c..h.cols {
                let v = h.get(i, j).abs();
                if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.1) {
                    best = Some((j, v));
                }
            }
            let Some((j, _)) = best else { break };
            h.swap_cols(c, j);
            let mut done = true;
            for j in c + 1..h.cols {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div_floor(h.get(i, c));
                h.col_axpy(j, c, &-q);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if c < h.cols && !h.get(i, c).is_zero() {
            if h.get(i, c).is_negative() {
                h.negate_col(c);
            }
            let p = h.get(i, c).clone();
            for j in 0..c {
                let q = h.get(i, j).div_floor(&p);
                h.col_axpy(j, c, &-q);
            }
            c += 1;
        }
    }
    let keep: Vec<usize> = (0..c).collect();
    h.select_cols(&keep)
}

/// Whether the column lattices of `a` and `b` (same row count) coincide.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    column_hnf(a) == column_hnf(b)
}

/// Whether a square matrix is invertible over the integers.
pub fn is_unimodular(a: &IntMatrix) -> bool {
    a.is_square() && a.det().abs().is_one()
}

/// Characteristic polynomial det(xI − A), coefficients from constant term upward.
pub fn charpoly(a: &IntMatrix) -> Vec<BigInt> {
    // Faddeev–LeVerrier; every division below is exact.
    assert!(a.is_square());
    let n = a.rows;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next.add_to(i, i, &coeffs[n - k + 1]);
        }
        m = next;
        let tr = a.mul(&m).trace();
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    coeffs
}

/// Evaluates a polynomial (constant term first) at a square matrix.
pub fn poly_at_matrix(coeffs: &[BigInt], a: &IntMatrix) -> IntMatrix {
    let n = a.rows;
    let mut acc = IntMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(a);
        for i in 0..n {
            acc.add_to(i, i, c);
        }
    }
    acc
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn big_vec(xs: &[i64]) -> IntVector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
