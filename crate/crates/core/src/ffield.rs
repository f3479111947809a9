//! Exact arithmetic and linear algebra over prime fields `F_p`, `p` odd.
//!
//! Matrices are dense and row-major with entries stored as `u32` residues in
//! `[0, p)`. Every routine is exact: ranks, kernels and Jordan types are
//! computed by Gauss-Jordan elimination and never touch floating point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bicomb::Partition;
use crate::error::{Error, Result};

/// Largest modulus accepted; products of two residues then fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Validates that `p` is an odd prime no larger than [`MAX_MODULUS`].
pub fn check_modulus(p: u64) -> Result<u32> {
    if !(3..=MAX_MODULUS).contains(&p) || p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    Ok(p as u32)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Inverse by the extended Euclidean algorithm; `None` for zero.
pub(crate) fn inv_mod(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Some(t0.rem_euclid(p as i64) as u32)
}

/// Reduces a signed integer into `[0, p)`.
pub fn reduce_signed(a: i64, p: u32) -> u32 {
    a.rem_euclid(p as i64) as u32
}

/// An element of the prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u32,
    modulus: u32,
}

/// Field operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Inverse of the first operand; the second is ignored.
    Inv,
    Div,
}

impl FpElem {
    pub fn new(value: u64, p: u32) -> Self {
        FpElem {
            value: (value % p as u64) as u32,
            modulus: p,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn inv(self) -> Result<Self> {
        inv_mod(self.value, self.modulus)
            .map(|value| FpElem { value, ..self })
            .ok_or(Error::DivisionByZero(self.modulus))
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Applies `op` to `a` and `b`, which must share a modulus.
pub fn field_arith(a: FpElem, b: FpElem, op: ArithOp) -> Result<FpElem> {
    let p = a.modulus;
    if b.modulus != p {
        return Err(Error::ModulusMismatch(p, b.modulus));
    }
    let value = match op {
        ArithOp::Add => add_mod(a.value, b.value, p),
        ArithOp::Sub => sub_mod(a.value, b.value, p),
        ArithOp::Mul => mul_mod(a.value, b.value, p),
        ArithOp::Inv => return a.inv(),
        ArithOp::Div => mul_mod(a.value, b.inv()?.value, p),
    };
    Ok(FpElem { value, modulus: p })
}

/// Dense matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// Wire form `{"p": 3, "rows": 4, "cols": 4, "entries": [...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl TryFrom<MatrixRepr> for FpMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let p = check_modulus(r.p)?;
        if r.entries.iter().any(|&e| e >= p as u64) {
            return Err(Error::Parse(format!("matrix entry outside [0, {p})")));
        }
        FpMatrix::new(p, r.rows, r.cols, r.entries.iter().map(|&e| e as u32).collect())
    }
}

impl From<FpMatrix> for MatrixRepr {
    fn from(m: FpMatrix) -> Self {
        MatrixRepr {
            p: m.p as u64,
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|&e| e as u64).collect(),
        }
    }
}

impl FpMatrix {
    /// Builds a matrix from row-major residues; entries are reduced mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty {rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from signed integers, reducing each into `[0, p)`.
    pub fn from_signed(p: u32, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(p, rows, cols, entries.iter().map(|&e| reduce_signed(e, p)).collect())
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    pub fn scalar(p: u32, n: usize, a: u32) -> Self {
        Self::identity(p, n).scale(a)
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c) % p);
            }
        }
        FpMatrix {
            p,
            rows,
            cols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        Self::from_fn(p, rows, columns.len(), |r, c| columns[c][r])
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        Self::from_fn(p, rows.len(), cols, |r, c| rows[r][c])
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(a: &FpMatrix, b: &FpMatrix, c: &FpMatrix, d: &FpMatrix) -> Self {
        let n = a.rows;
        for blk in [a, b, c, d] {
            assert!(blk.rows == n && blk.cols == n, "blocks must be square of one size");
        }
        Self::from_fn(a.p, 2 * n, 2 * n, |r, col| {
            let blk = match (r < n, col < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk.get(r % n, col % n)
        })
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diag(p: u32, blocks: &[FpMatrix]) -> Self {
        let size: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(p, size, size);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, b.cols, "diagonal blocks must be square");
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(off + r, off + c, b.get(r, c));
                }
            }
            off += b.rows;
        }
        m
    }

    /// Extracts the `size x size` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(self.p, size, size, |r, c| self.get(row + r, col + c))
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.entries[r * self.cols + c] = value % self.p;
    }

    pub fn row(&self, r: usize) -> Vec<u32> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn add(&self, other: &FpMatrix) -> Self {
        self.zip(other, add_mod)
    }

    pub fn sub(&self, other: &FpMatrix) -> Self {
        self.zip(other, sub_mod)
    }

    fn zip(&self, other: &FpMatrix, f: impl Fn(u32, u32, u32) -> u32) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        assert_eq!(self.p, other.p, "modulus mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b, self.p))
            .collect();
        FpMatrix {
            entries,
            ..self.clone()
        }
    }

    pub fn scale(&self, a: u32) -> Self {
        let a = a % self.p;
        FpMatrix {
            entries: self.entries.iter().map(|&e| mul_mod(e, a, self.p)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        FpMatrix {
            entries: self.entries.iter().map(|&e| neg_mod(e, self.p)).collect(),
            ..self.clone()
        }
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, other: &FpMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.p, other.p, "modulus mismatch");
        let p = self.p as u64;
        let mut out = vec![0u32; self.rows * other.cols];
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out[r * other.cols + c] = v as u32;
            }
        }
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            entries: out,
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let row = &self.entries[r * self.cols..(r + 1) * self.cols];
                (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32
            })
            .collect()
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &FpMatrix) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::from_fn(self.p, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c)
            } else {
                u32::from(c - n == r)
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(self.p, n, n, |r, c| aug.get(r, n + c)))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Reduces to reduced row echelon form in place, pivots normalized to 1.
    /// Returns the pivot columns in increasing order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.entries.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = inv_mod(self.get(r, c), p).expect("nonzero pivot");
            for k in c..cols {
                let v = mul_mod(self.get(r, k), inv, p);
                self.entries[r * cols + k] = v;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for k in c..cols {
                    let v = sub_mod(self.get(i, k), mul_mod(f, self.get(r, k), p), p);
                    self.entries[i * cols + k] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Canonical basis of `{v : Mv = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut vectors = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = neg_mod(m.get(row, free), self.p);
            }
            vectors.push(v);
        }
        Subspace::span(self.p, self.cols, &vectors)
    }

    /// Interprets `self` as `N` and returns its Jordan type, a partition of
    /// the size. Fails if `N^m != 0`.
    pub fn nilpotent_jordan_type(&self) -> Result<Partition> {
        nilpotent_jordan_type(self)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Rank over `F_p`.
pub fn mat_rank(m: &FpMatrix) -> usize {
    m.rank()
}

/// Canonical basis of the null space of `m`.
pub fn kernel_basis(m: &FpMatrix) -> Subspace {
    m.kernel_basis()
}

/// Dimension of the solution space of the homogeneous system whose
/// coefficient columns are `columns` (one column per unknown).
pub fn solution_dim(p: u32, equations: usize, columns: &[Vec<u32>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    if equations == 0 {
        return columns.len();
    }
    columns.len() - FpMatrix::from_columns(p, equations, columns).rank()
}

/// A subspace of `F_p^d`, stored as the nonzero rows of its reduced row
/// echelon form. Two subspaces are equal iff their representations are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    ambient_dim: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            p,
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| u32::from(i == j)).collect())
            .collect();
        Subspace {
            p,
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(p: u32, ambient_dim: usize, vectors: &[Vec<u32>]) -> Self {
        if vectors.is_empty() || ambient_dim == 0 {
            return Self::zero(p, ambient_dim);
        }
        let mut m = FpMatrix::from_rows(p, ambient_dim, vectors);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|r| m.row(r)).collect();
        Subspace {
            p,
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the component along the echelon basis, leaving a vector
    /// that vanishes on every pivot coordinate.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut out = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = out[pc];
            if f == 0 {
                continue;
            }
            for (o, &bi) in out.iter_mut().zip(b) {
                *o = sub_mod(*o, mul_mod(f, bi, p), p);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&e| e == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Columns not carrying a pivot; the matching unit vectors span a
    /// complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// Basis of `{Z : ZY = YZ}`, obtained as the kernel of `Z -> ZY - YZ` on
/// the `m^2`-dimensional space of matrices.
pub fn commutant_basis(y: &FpMatrix) -> Result<Vec<FpMatrix>> {
    if !y.is_square() {
        return Err(Error::NonSquare {
            rows: y.rows(),
            cols: y.cols(),
        });
    }
    let m = y.rows();
    let p = y.modulus();
    // Row (r, c) of the system is entry (r, c) of ZY - YZ; column (a, b) is Z[a][b].
    let mut sys = FpMatrix::zeros(p, m * m, m * m);
    for r in 0..m {
        for c in 0..m {
            let row = r * m + c;
            for k in 0..m {
                let zy = y.get(k, c);
                if zy != 0 {
                    let col = r * m + k;
                    sys.set(row, col, add_mod(sys.get(row, col), zy, p));
                }
                let yz = y.get(r, k);
                if yz != 0 {
                    let col = k * m + c;
                    sys.set(row, col, sub_mod(sys.get(row, col), yz, p));
                }
            }
        }
    }
    Ok(sys
        .kernel_basis()
        .basis()
        .iter()
        .map(|v| FpMatrix::new(p, m, m, v.clone()).expect("m x m"))
        .collect())
}

/// Jordan type of a nilpotent matrix from its rank sequence: the number of
/// parts `>= j` is `rank(N^(j-1)) - rank(N^j)`.
pub fn nilpotent_jordan_type(n: &FpMatrix) -> Result<Partition> {
    if !n.is_square() {
        return Err(Error::NonSquare {
            rows: n.rows(),
            cols: n.cols(),
        });
    }
    let m = n.rows();
    let mut sq = n.clone();
    let mut exp = 1usize;
    while exp < m {
        sq = sq.mul(&sq);
        exp *= 2;
    }
    if !sq.is_zero() {
        return Err(Error::NotNilpotent);
    }
    let mut ranks = vec![m];
    let mut power = n.clone();
    while *ranks.last().unwrap() > 0 {
        ranks.push(power.rank());
        power = power.mul(n);
    }
    // at_least[j-1] = number of parts >= j
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for (j, &count) in at_least.iter().enumerate() {
        let next = at_least.get(j + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(j + 1, count - next));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition::new(parts))
}

/// Which induced operator [`induced_action`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InducedMode {
    Restrict,
    Quotient,
}

/// Matrix of `m` on the stable subspace `w` (in its echelon basis) or on the
/// quotient `F_p^d / w` (in the basis of cosets of the non-pivot unit
/// vectors). A zero-dimensional result is reported as `None`.
pub fn induced_action(m: &FpMatrix, w: &Subspace, mode: InducedMode) -> Result<Option<FpMatrix>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator of size {} on a subspace of F^{}",
            m.rows(),
            w.ambient_dim()
        )));
    }
    let p = m.modulus();
    let images: Vec<Vec<u32>> = w.basis().iter().map(|b| m.mul_vec(b)).collect();
    if images.iter().any(|im| !w.contains(im)) {
        return Err(Error::NotStable);
    }
    match mode {
        InducedMode::Restrict => {
            if w.dim() == 0 {
                return Ok(None);
            }
            let cols: Vec<Vec<u32>> = images
                .iter()
                .map(|im| w.coordinates(im).expect("stable"))
                .collect();
            Ok(Some(FpMatrix::from_columns(p, w.dim(), &cols)))
        }
        InducedMode::Quotient => {
            let comp = w.complement_indices();
            if comp.is_empty() {
                return Ok(None);
            }
            let cols: Vec<Vec<u32>> = comp
                .iter()
                .map(|&k| {
                    let image = m.column(k);
                    let rem = w.reduce(&image);
                    comp.iter().map(|&j| rem[j]).collect()
                })
                .collect();
            Ok(Some(FpMatrix::from_columns(p, comp.len(), &cols)))
        }
    }
}

/// Jordan type of the operator induced by a nilpotent `m` on `w` or on the
/// quotient; zero-dimensional spaces give the empty partition.
pub fn induced_jordan_type(m: &FpMatrix, w: &Subspace, mode: InducedMode) -> Result<Partition> {
    match induced_action(m, w, mode)? {
        Some(op) => op.nilpotent_jordan_type(),
        None => Ok(Partition::empty()),
    }
}

/// Nilpotent Jordan matrix with blocks of the given sizes; each block sends
/// its `j`-th basis vector to the `(j-1)`-th (ones on the superdiagonal).
pub fn jordan_nilpotent(p: u32, parts: &[usize]) -> FpMatrix {
    let size: usize = parts.iter().sum();
    let mut m = FpMatrix::zeros(p, size, size);
    let mut off = 0;
    for &len in parts {
        for j in 1..len {
            m.set(off + j - 1, off + j, 1);
        }
        off += len;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: u64, p: u32) -> FpElem {
        FpElem::new(v, p)
    }

    #[test]
    fn inverses() {
        assert_eq!(field_arith(el(2, 3), el(0, 3), ArithOp::Inv).unwrap().value(), 2);
        assert_eq!(field_arith(el(1, 101), el(0, 101), ArithOp::Inv).unwrap().value(), 1);
        // extended Euclid: 3 * 5 = 15 = 1 mod 7
        assert_eq!(field_arith(el(3, 7), el(0, 7), ArithOp::Inv).unwrap().value(), 5);
        assert_eq!(
            field_arith(el(0, 7), el(0, 7), ArithOp::Inv),
            Err(Error::DivisionByZero(7))
        );
        assert_eq!(
            field_arith(el(3, 7), el(0, 7), ArithOp::Div),
            Err(Error::DivisionByZero(7))
        );
        assert_eq!(field_arith(el(6, 7), el(3, 7), ArithOp::Div).unwrap().value(), 2);
        assert_eq!(field_arith(el(2, 5), el(4, 5), ArithOp::Sub).unwrap().value(), 3);
        assert!(field_arith(el(2, 5), el(2, 7), ArithOp::Add).is_err());
    }

    #[test]
    fn inverse_is_exact_for_every_residue() {
        for p in [3u32, 5, 7, 11, 13, 2147483647] {
            for a in (1..p.min(500)).chain([p - 1]) {
                let inv = inv_mod(a, p).unwrap();
                assert_eq!(mul_mod(a, inv, p), 1, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn modulus_gate() {
        assert!(check_modulus(3).is_ok());
        assert!(check_modulus(2).is_err());
        assert!(check_modulus(9).is_err());
        assert!(check_modulus(1).is_err());
        assert!(check_modulus(2147483647).is_ok());
        assert!(check_modulus((1 << 31) + 11).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(mat_rank(&FpMatrix::zeros(3, 4, 4)), 0);
        assert_eq!(mat_rank(&FpMatrix::identity(5, 6)), 6);
        assert_eq!(mat_rank(&jordan_nilpotent(3, &[3])), 2);
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&FpMatrix::identity(3, 3)).dim(), 0);
        assert_eq!(kernel_basis(&FpMatrix::zeros(3, 2, 2)), Subspace::full(3, 2));
        let k = kernel_basis(&jordan_nilpotent(3, &[2, 1]));
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&[1, 0, 0]) && k.contains(&[0, 0, 1]));
    }

    #[test]
    fn inverse_round_trip() {
        let m = FpMatrix::from_signed(7, 3, 3, &[1, 2, 3, 0, 1, 4, 5, 6, 0]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(7, 3));
        assert_eq!(FpMatrix::zeros(7, 2, 2).inverse(), Err(Error::Singular));
    }

    #[test]
    fn commutants() {
        assert_eq!(commutant_basis(&FpMatrix::zeros(3, 3, 3)).unwrap().len(), 9);
        assert_eq!(commutant_basis(&FpMatrix::zeros(5, 2, 2)).unwrap().len(), 4);
        let j = jordan_nilpotent(5, &[4]);
        let basis = commutant_basis(&j).unwrap();
        assert_eq!(basis.len(), 4);
        // every commuting matrix is a polynomial in J: the span of I, J, J^2, J^3
        let polys: Vec<Vec<u32>> = (0..4).map(|k| j.pow(k).entries().to_vec()).collect();
        let span = Subspace::span(5, 16, &polys);
        for z in &basis {
            assert!(span.contains(z.entries()));
        }
        assert!(matches!(
            commutant_basis(&FpMatrix::zeros(3, 2, 3)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn jordan_types() {
        assert_eq!(
            FpMatrix::zeros(3, 3, 3).nilpotent_jordan_type().unwrap(),
            Partition::new(vec![1, 1, 1])
        );
        assert_eq!(
            jordan_nilpotent(3, &[4]).nilpotent_jordan_type().unwrap(),
            Partition::new(vec![4])
        );
        // N^2 = 0 with rank 2 on F^4: rank sequence 4, 2, 0
        let n = FpMatrix::from_signed(3, 4, 4, &[0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0])
            .unwrap();
        assert_eq!(n.nilpotent_jordan_type().unwrap(), Partition::new(vec![2, 2]));
        assert_eq!(
            FpMatrix::identity(3, 2).nilpotent_jordan_type(),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn induced_on_jordan_block() {
        let m = jordan_nilpotent(3, &[2]);
        let w = Subspace::span(3, 2, &[vec![1, 0]]);
        let r = induced_action(&m, &w, InducedMode::Restrict).unwrap().unwrap();
        assert_eq!(r, FpMatrix::zeros(3, 1, 1));
        let q = induced_action(&m, &w, InducedMode::Quotient).unwrap().unwrap();
        assert_eq!(q, FpMatrix::zeros(3, 1, 1));
        assert_eq!(q.nilpotent_jordan_type().unwrap(), Partition::new(vec![1]));
        let full = Subspace::full(3, 2);
        let r = induced_action(&m, &full, InducedMode::Restrict).unwrap().unwrap();
        assert_eq!(r.nilpotent_jordan_type().unwrap(), Partition::new(vec![2]));
        assert_eq!(induced_action(&m, &full, InducedMode::Quotient).unwrap(), None);
        let unstable = Subspace::span(3, 2, &[vec![0, 1]]);
        assert_eq!(
            induced_action(&m, &unstable, InducedMode::Restrict),
            Err(Error::NotStable)
        );
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = FpMatrix::from_signed(5, 2, 3, &[1, -1, 2, 0, 4, 3]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"p":5,"rows":2,"cols":3,"entries":[1,4,2,0,4,3]}"#);
        assert_eq!(serde_json::from_str::<FpMatrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<FpMatrix>(r#"{"p":4,"rows":1,"cols":1,"entries":[1]}"#).is_err());
        assert!(serde_json::from_str::<FpMatrix>(r#"{"p":5,"rows":1,"cols":1,"entries":[5]}"#).is_err());
        assert!(serde_json::from_str::<FpMatrix>(r#"{"p":5,"rows":2,"cols":1,"entries":[1]}"#).is_err());
    }
}
