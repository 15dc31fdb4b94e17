//! Arithmetic over GF(p), polynomials, and dense linear algebra.
//!
//! Residues are `u32` values in `[0, p)` and products are formed in `u64`,
//! so any prime below 2^31 works without overflow.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical residue modulo the field prime.
#[derive(
    Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field GF(p).
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Gf {
    p: u32,
}

impl Gf {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Gf { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces any integer into the field.
    #[inline]
    pub fn elem(&self, x: i64) -> Fe {
        Fe(x.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 as u64 + b.0 as u64;
        Fe((s % self.p as u64) as u32)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 as u64 + self.p as u64 - b.0 as u64;
        Fe((s % self.p as u64) as u32)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            a
        } else {
            Fe(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe(1 % self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivByZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        let p = self.p as u64;
        let s = a
            .iter()
            .zip(b)
            .fold(0u64, |acc, (x, y)| (acc + x.0 as u64 * y.0 as u64) % p);
        Fe(s as u32)
    }

    /// All field elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.p).map(Fe)
    }
}

/// Field together with the number of evaluation points 1..n.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldParams {
    gf: Gf,
    n: usize,
}

impl FieldParams {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        let gf = Gf::new(p)?;
        if n == 0 || n as u64 >= p {
            return Err(Error::InvalidParams(alloc::format!(
                "need 1 <= n < p, got n={n}, p={p}"
            )));
        }
        Ok(FieldParams { gf, n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gf(&self) -> Gf {
        self.gf
    }

    /// Evaluation point of position `i` (0-based), i.e. the element i+1.
    #[inline]
    pub fn point(&self, i: usize) -> Fe {
        Fe(i as u32 + 1)
    }
}

impl Deref for FieldParams {
    type Target = Gf;
    fn deref(&self) -> &Gf {
        &self.gf
    }
}

/// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct FieldPoly {
    coeffs: Vec<Fe>,
}

impl FieldPoly {
    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn from_u32(gf: &Gf, coeffs: &[u32]) -> Self {
        Self::new(coeffs.iter().map(|&c| gf.elem(c as i64)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of x^j, zero past the degree.
    pub fn coeff(&self, j: usize) -> Fe {
        self.coeffs.get(j).copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, gf: &Gf, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| gf.add(gf.mul(acc, x), c))
    }

    /// Values at the evaluation points 1..n.
    pub fn eval_points(&self, params: &FieldParams) -> Vec<Fe> {
        (0..params.n())
            .map(|i| self.eval(params, params.point(i)))
            .collect()
    }

    pub fn add(&self, gf: &Gf, other: &FieldPoly) -> FieldPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|j| gf.add(self.coeff(j), other.coeff(j)))
                .collect(),
        )
    }

    pub fn scale(&self, gf: &Gf, c: Fe) -> FieldPoly {
        Self::new(self.coeffs.iter().map(|&a| gf.mul(a, c)).collect())
    }

    pub fn mul(&self, gf: &Gf, other: &FieldPoly) -> FieldPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = gf.add(out[i + j], gf.mul(a, b));
            }
        }
        Self::new(out)
    }
}

/// Lagrange interpolation through distinct abscissae.
pub fn interpolate(gf: &Gf, points: &[(Fe, Fe)]) -> Result<FieldPoly> {
    if points.is_empty() {
        return Err(Error::InvalidParams("interpolation needs a point".into()));
    }
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(Error::DuplicateAbscissa(a.0.value()));
        }
    }
    let mut acc = FieldPoly::zero();
    for (i, &(xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = FieldPoly::new(vec![Fe::ONE]);
        let mut denom = Fe::ONE;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = basis.mul(gf, &FieldPoly::new(vec![gf.neg(xj), Fe::ONE]));
                denom = gf.mul(denom, gf.sub(xi, xj));
            }
        }
        acc = acc.add(gf, &basis.scale(gf, gf.div(yi, denom)?));
    }
    Ok(acc)
}

/// Value at `x` of the interpolating polynomial, without building it.
pub fn interpolate_at(gf: &Gf, points: &[(Fe, Fe)], x: Fe) -> Result<Fe> {
    let mut acc = Fe::ZERO;
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut num = Fe::ONE;
        let mut den = Fe::ONE;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                if xi == xj {
                    return Err(Error::DuplicateAbscissa(xi.value()));
                }
                num = gf.mul(num, gf.sub(x, xj));
                den = gf.mul(den, gf.sub(xi, xj));
            }
        }
        acc = gf.add(acc, gf.mul(yi, gf.div(num, den)?));
    }
    Ok(acc)
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Fe>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            entries: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(FieldMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, gf: &Gf, v: &[Fe]) -> Vec<Fe> {
        (0..self.rows).map(|r| gf.dot(self.row(r), v)).collect()
    }

    pub fn mul(&self, gf: &Gf, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut s = Fe::ZERO;
                for k in 0..self.cols {
                    s = gf.add(s, gf.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, s);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, gf: &Gf) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for k in 0..self.cols {
                    self.entries.swap(pr * self.cols + k, r * self.cols + k);
                }
            }
            let inv = gf.inv(self.get(r, c)).expect("pivot is nonzero");
            for k in 0..self.cols {
                self.set(r, k, gf.mul(self.get(r, k), inv));
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && !f.is_zero() {
                    for k in 0..self.cols {
                        let v = gf.sub(self.get(i, k), gf.mul(f, self.get(r, k)));
                        self.set(i, k, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, gf: &Gf) -> usize {
        self.clone().rref(gf).len()
    }

    pub fn inverse(&self, gf: &Gf) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, Fe::ONE);
        }
        let pivots = aug.rref(gf);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    /// Basis of the right null space {x : Mx = 0}, in a fixed order.
    pub fn null_space(&self, gf: &Gf) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref(gf);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Fe::ZERO; self.cols];
                x[f] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = gf.neg(m.get(r, f));
                }
                x
            })
            .collect()
    }
}

/// Solves Mx = b for square invertible M.
pub fn solve_linear(gf: &Gf, m: &FieldMatrix, b: &[Fe]) -> Result<Vec<Fe>> {
    if m.rows() != m.cols() || b.len() != m.rows() {
        return Err(Error::DimensionMismatch("solve_linear".into()));
    }
    Ok(m.inverse(gf)?.mul_vec(gf, b))
}

/// Some solution of Mx = b for any shape of M, or `None` if inconsistent.
pub fn solve_any(gf: &Gf, m: &FieldMatrix, b: &[Fe]) -> Option<Vec<Fe>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug = FieldMatrix::zeros(rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, cols, b[r]);
    }
    let pivots = aug.rref(gf);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Fe::ZERO; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, cols);
    }
    Some(x)
}

/// n x `degree_bound` matrix with entry (i, j) = (i+1)^j.
pub fn vandermonde(params: &FieldParams, degree_bound: usize) -> Result<FieldMatrix> {
    if degree_bound > params.n() {
        return Err(Error::InvalidParams("degree bound exceeds n".into()));
    }
    let mut m = FieldMatrix::zeros(params.n(), degree_bound);
    for i in 0..params.n() {
        for j in 0..degree_bound {
            m.set(i, j, params.pow(params.point(i), j as u64));
        }
    }
    Ok(m)
}

/// Row-reduced basis of the span of `vectors` (zero rows dropped).
pub fn span_basis(gf: &Gf, vectors: &[Vec<Fe>], len: usize) -> Vec<Vec<Fe>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = FieldMatrix::from_rows(vectors).expect("equal lengths");
    debug_assert_eq!(m.cols(), len);
    let k = m.rref(gf).len();
    (0..k).map(|r| m.row(r).to_vec()).collect()
}

/// Orthogonal complement of the span of `vectors` inside GF(p)^len.
pub fn orthogonal_complement(gf: &Gf, vectors: &[Vec<Fe>], len: usize) -> Vec<Vec<Fe>> {
    if vectors.is_empty() {
        return (0..len)
            .map(|i| {
                let mut e = vec![Fe::ZERO; len];
                e[i] = Fe::ONE;
                e
            })
            .collect();
    }
    FieldMatrix::from_rows(vectors)
        .expect("equal lengths")
        .null_space(gf)
}
