//! Exact vectors, covectors, square matrices and polynomials over GF(q).
//!
//! Everything here is deterministic: echelon forms always pick the leftmost
//! pivot and scale it to 1, kernels list free columns in ascending order, and
//! projective representatives are enumerated in a fixed integer order with
//! the first nonzero coordinate normalized to 1.

#![allow(clippy::needless_range_loop)] // index-heavy matrix kernels

use crate::gf::{Fe, Field, FieldRc};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("operands have different sizes or fields")]
    SizeMismatch,
    #[error("minimal polynomial is not an irreducible quadratic")]
    NotQuadraticIrreducible,
    #[error("ambient dimension is odd")]
    OddDimension,
    #[error("block basis construction stalled; this should be impossible under the precondition")]
    BlockConstructionStalled,
}

/// Column vector, a member of V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    pub field: FieldRc,
    pub coords: Vec<Fe>,
}

/// Row vector, a member of the dual space V*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covector {
    pub field: FieldRc,
    pub coords: Vec<Fe>,
}

/// Square matrix over GF(q), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub n: usize,
    entries: Vec<Fe>,
}

impl Vector {
    pub fn new(field: FieldRc, coords: Vec<Fe>) -> Vector {
        debug_assert!(coords.iter().all(|&c| c < field.q()));
        Vector { field, coords }
    }

    pub fn unit(field: FieldRc, len: usize, i: usize) -> Vector {
        let mut coords = vec![0; len];
        coords[i] = 1;
        Vector { field, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Scale so the first nonzero coordinate is 1.
    pub fn canonicalize(&self) -> Vector {
        Vector {
            field: self.field.clone(),
            coords: canonicalize_slice(&self.field, &self.coords),
        }
    }
}

impl Covector {
    pub fn new(field: FieldRc, coords: Vec<Fe>) -> Covector {
        debug_assert!(coords.iter().all(|&c| c < field.q()));
        Covector { field, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn canonicalize(&self) -> Covector {
        Covector {
            field: self.field.clone(),
            coords: canonicalize_slice(&self.field, &self.coords),
        }
    }

    /// Apply to a vector: the pairing xi(x).
    pub fn apply(&self, x: &Vector) -> Fe {
        dot(&self.field, &self.coords, &x.coords)
    }
}

pub fn dot(field: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc = field.add(acc, field.mul(x, y));
    }
    acc
}

pub fn canonicalize_slice(field: &Field, v: &[Fe]) -> Vec<Fe> {
    match v.iter().find(|&&c| c != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = field.inv(lead).expect("nonzero");
            v.iter().map(|&c| field.mul(c, inv)).collect()
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join_coords(&self.coords))
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join_coords(&self.coords))
    }
}

fn join_coords(c: &[Fe]) -> String {
    c.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(":")
}

impl Mat {
    pub fn zeros(n: usize) -> Mat {
        Mat {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Mat, LinalgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::SizeMismatch);
        }
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                field.check(v).map_err(|_| LinalgError::SizeMismatch)?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Decode a matrix from an integer counter, entries row-major base q.
    /// Used by the exhaustive batteries to sweep all of M_n(GF(q)).
    pub fn from_counter(n: usize, q: u32, mut idx: u64) -> Mat {
        let mut m = Mat::zeros(n);
        for pos in 0..n * n {
            m.entries[pos] = (idx % q as u64) as Fe;
            idx /= q as u64;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Fe>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&c| c == 0)
    }

    /// True when the matrix is a scalar multiple of the identity (including O).
    pub fn is_scalar(&self) -> bool {
        let d = self.get(0, 0);
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { d } else { 0 };
                if self.get(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self, field: &Field) -> Fe {
        let mut t = 0;
        for i in 0..self.n {
            t = field.add(t, self.get(i, i));
        }
        t
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn add(&self, field: &Field, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        Mat {
            n: self.n,
            entries,
        }
    }

    pub fn sub(&self, field: &Field, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        Mat {
            n: self.n,
            entries,
        }
    }

    pub fn scale(&self, field: &Field, s: Fe) -> Mat {
        Mat {
            n: self.n,
            entries: self.entries.iter().map(|&a| field.mul(a, s)).collect(),
        }
    }

    pub fn mul(&self, field: &Field, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, field: &Field, x: &[Fe]) -> Vec<Fe> {
        debug_assert_eq!(self.n, x.len());
        (0..self.n).map(|i| dot(field, self.row(i), x)).collect()
    }

    pub fn vec_mat(&self, field: &Field, xi: &[Fe]) -> Vec<Fe> {
        debug_assert_eq!(self.n, xi.len());
        (0..self.n)
            .map(|j| {
                let mut acc = 0;
                for (i, &c) in xi.iter().enumerate() {
                    acc = field.add(acc, field.mul(c, self.get(i, j)));
                }
                acc
            })
            .collect()
    }

    /// xi * M * x, the bilinear evaluation used for hyperplane membership.
    pub fn sandwich(&self, field: &Field, xi: &[Fe], x: &[Fe]) -> Fe {
        let mut acc = 0;
        for (i, &xii) in xi.iter().enumerate() {
            if xii == 0 {
                continue;
            }
            acc = field.add(acc, field.mul(xii, dot(field, self.row(i), x)));
        }
        acc
    }

    /// Pure tensor x (x) xi: the rank-1 matrix with entries x_i * xi_j.
    pub fn outer(field: &Field, x: &[Fe], xi: &[Fe]) -> Mat {
        debug_assert_eq!(x.len(), xi.len());
        let n = x.len();
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, field.mul(x[i], xi[j]));
            }
        }
        m
    }

    /// Companion matrix of t^2 + a t + b.
    pub fn companion2(field: &Field, a: Fe, b: Fe) -> Mat {
        let mut m = Mat::zeros(2);
        m.set(0, 1, field.neg(b));
        m.set(1, 0, 1);
        m.set(1, 1, field.neg(a));
        m
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Mat::zeros(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        m
    }

    pub fn rank(&self, field: &Field) -> usize {
        rank_of_rows(field, &self.rows())
    }

    /// Right kernel: vectors x with Mx = 0.
    pub fn kernel(&self, field: &Field) -> Vec<Vec<Fe>> {
        kernel_of_rows(field, &self.rows(), self.n)
    }

    /// Left kernel: covectors xi with xi M = 0.
    pub fn left_kernel(&self, field: &Field) -> Vec<Vec<Fe>> {
        self.transpose().kernel(field)
    }

    pub fn inverse(&self, field: &Field) -> Option<Mat> {
        let n = self.n;
        let mut aug: Vec<Vec<Fe>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let ech = echelonize(field, &mut aug);
        if ech.rank < n {
            return None;
        }
        let mut inv = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug[i][n + j]);
            }
        }
        Some(inv)
    }

    pub fn pow(&self, field: &Field, e: u32) -> Mat {
        let mut acc = Mat::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(field, self);
        }
        acc
    }

    pub fn to_grid(&self) -> Vec<Vec<Fe>> {
        self.rows()
    }
}

/// Result of an in-place reduced row echelon pass.
pub struct Echelon {
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form, in place. Deterministic: scans columns left to
/// right, takes the first row with a nonzero entry, scales the pivot to 1 and
/// eliminates above and below. Zero rows sink to the bottom.
pub fn echelonize(field: &Field, rows: &mut [Vec<Fe>]) -> Echelon {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot nonzero");
        for v in rows[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..nrows {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let sub = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    Echelon { rank: r, pivots }
}

pub fn rank_of_rows(field: &Field, rows: &[Vec<Fe>]) -> usize {
    let mut work: Vec<Vec<Fe>> = rows.to_vec();
    echelonize(field, &mut work).rank
}

/// Rank and a kernel basis for the row system: all x with row . x = 0 for
/// every row. Kernel vectors are produced per free column, ascending.
pub fn rank_and_kernel(field: &Field, rows: &[Vec<Fe>], width: usize) -> (usize, Vec<Vec<Fe>>) {
    let mut work: Vec<Vec<Fe>> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    debug_assert!(work.iter().all(|r| r.len() == width));
    let ech = echelonize(field, &mut work);
    let mut kernel = Vec::new();
    for free in 0..width {
        if ech.pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0; width];
        v[free] = 1;
        for (row_i, &pc) in ech.pivots.iter().enumerate() {
            v[pc] = field.neg(work[row_i][free]);
        }
        kernel.push(v);
    }
    (ech.rank, kernel)
}

pub fn kernel_of_rows(field: &Field, rows: &[Vec<Fe>], width: usize) -> Vec<Vec<Fe>> {
    rank_and_kernel(field, rows, width).1
}

/// Solve `sum_j columns[j] * c_j = target`, if consistent.
pub fn solve_columns(field: &Field, columns: &[Vec<Fe>], target: &[Fe]) -> Option<Vec<Fe>> {
    let height = target.len();
    let width = columns.len();
    let mut rows: Vec<Vec<Fe>> = (0..height)
        .map(|i| {
            let mut row: Vec<Fe> = columns.iter().map(|c| c[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let ech = echelonize(field, &mut rows);
    if ech.pivots.contains(&width) {
        return None; // inconsistent
    }
    let mut sol = vec![0; width];
    for (row_i, &pc) in ech.pivots.iter().enumerate() {
        sol[pc] = rows[row_i][width];
    }
    Some(sol)
}

/// One representative per projective point of F^len: every nonzero tuple
/// whose first nonzero coordinate is 1, enumerated by ascending integer
/// value with coordinate 0 as the least significant base-q digit. Under this
/// order the unit vectors appear as e0, e1, ..., matching how matrices are
/// decoded from integer counters.
pub fn canonical_reps(q: u32, len: usize) -> Vec<Vec<Fe>> {
    let mut out = Vec::new();
    let mut digits = vec![0u32; len];
    'odometer: loop {
        let mut pos = 0;
        loop {
            if pos == len {
                break 'odometer;
            }
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if digits.iter().find(|&&d| d != 0) == Some(&1) {
            out.push(digits.clone());
        }
    }
    out
}

// ---- polynomials ----

/// Polynomial over GF(q), coefficients little-endian with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(coeffs: Vec<Fe>) -> Poly {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval(&self, field: &Field, x: Fe) -> Fe {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = field.add(field.mul(acc, x), c);
        }
        acc
    }

    /// Horner evaluation at a matrix argument.
    pub fn eval_mat(&self, field: &Field, m: &Mat) -> Mat {
        let mut acc = Mat::zeros(m.n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(field, m);
            for i in 0..m.n {
                acc.set(i, i, field.add(acc.get(i, i), c));
            }
        }
        acc
    }

    pub fn has_root(&self, field: &Field) -> bool {
        field.els().any(|x| self.eval(field, x) == 0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{}", c),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{}t", c),
                (i, 1) => format!("t^{}", i),
                (i, c) => format!("{}t^{}", c, i),
            };
            terms.push(t);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

// ---- spectra, minimal polynomials, the two-sided span condition ----

#[derive(Debug, Clone)]
pub struct EigenClass {
    pub lambda: Fe,
    /// Basis of ker(M - lambda I).
    pub right: Vec<Vec<Fe>>,
    /// Basis of the left kernel of (M - lambda I).
    pub left: Vec<Vec<Fe>>,
}

/// All eigenvalues in the ground field, found by q direct singularity tests,
/// with right and left eigenvector bases. Empty when M has no eigenvalue.
pub fn eigen_spectrum(field: &Field, m: &Mat) -> Vec<EigenClass> {
    let mut out = Vec::new();
    for lambda in field.els() {
        let mut shifted = m.clone();
        for i in 0..m.n {
            shifted.set(i, i, field.sub(shifted.get(i, i), lambda));
        }
        let right = shifted.kernel(field);
        if right.is_empty() {
            continue;
        }
        let left = shifted.left_kernel(field);
        debug_assert_eq!(left.len(), right.len());
        out.push(EigenClass {
            lambda,
            right,
            left,
        });
    }
    out
}

/// Monic minimal polynomial: the first power of M that depends linearly on
/// the lower powers determines it.
pub fn minimal_polynomial(field: &Field, m: &Mat) -> Poly {
    let nn = m.n * m.n;
    let mut powers: Vec<Vec<Fe>> = vec![Mat::identity(m.n).entries().to_vec()];
    let mut current = Mat::identity(m.n);
    loop {
        current = current.mul(field, m);
        let flat: Vec<Fe> = current.entries().to_vec();
        if let Some(coeffs) = solve_columns(field, &powers, &flat) {
            let mut poly = vec![0; powers.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                poly[j] = field.neg(c);
            }
            poly[powers.len()] = 1;
            return Poly::new(poly);
        }
        powers.push(flat);
        assert!(powers.len() <= nn + 1, "powers must become dependent");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// First projective representative violating the span condition, if any.
/// Right side: some x with rank [x; Mx; M^2 x] = 3. Left side: dual.
pub fn smat_violation(field: &Field, m: &Mat, side: Side) -> Option<Vec<Fe>> {
    let m2 = m.mul(field, m);
    for rep in canonical_reps(field.q(), m.n) {
        let (r1, r2) = match side {
            Side::Right => (m.mat_vec(field, &rep), m2.mat_vec(field, &rep)),
            Side::Left => (m.vec_mat(field, &rep), m2.vec_mat(field, &rep)),
        };
        let rows = vec![rep.clone(), r1, r2];
        if rank_of_rows(field, &rows) > 2 {
            return Some(rep);
        }
    }
    None
}

/// The span condition: M^2 x lies in <x, Mx> for every nonzero x (right), or
/// xi M^2 in <xi, xi M> for every nonzero xi (left). Exhaustive over one
/// representative per projective point.
pub fn check_smat(field: &Field, m: &Mat, side: Side) -> bool {
    smat_violation(field, m, side).is_none()
}

#[derive(Debug, Clone)]
pub struct RationalBlocks {
    /// Change of basis: transition^-1 * M * transition is block diagonal.
    pub transition: Mat,
    /// The repeated companion block.
    pub companion: Mat,
    /// The (irreducible quadratic) minimal polynomial.
    pub poly: Poly,
    /// Number of blocks.
    pub blocks: usize,
}

/// Block-diagonalize a matrix whose minimal polynomial is an irreducible
/// quadratic P: returns B with B^-1 M B = diag(C_P, ..., C_P). Built by
/// repeatedly taking the first representative outside the current invariant
/// span together with its image.
pub fn rational_block_basis(field: &Field, m: &Mat) -> Result<RationalBlocks, LinalgError> {
    let poly = minimal_polynomial(field, m);
    if poly.degree() != Some(2) || poly.has_root(field) {
        return Err(LinalgError::NotQuadraticIrreducible);
    }
    if !m.n.is_multiple_of(2) {
        return Err(LinalgError::OddDimension);
    }
    let b_coef = poly.coeffs[0];
    let a_coef = poly.coeffs[1];
    let mut span: Vec<Vec<Fe>> = Vec::new(); // reduced echelon rows of the running span
    let mut basis_cols: Vec<Vec<Fe>> = Vec::new();
    let reps = canonical_reps(field.q(), m.n);
    while basis_cols.len() < m.n {
        let v = reps
            .iter()
            .find(|v| !in_row_span(field, &span, v))
            .ok_or(LinalgError::BlockConstructionStalled)?
            .clone();
        let mv = m.mat_vec(field, &v);
        span.push(v.clone());
        span.push(mv.clone());
        let ech = echelonize(field, &mut span);
        if ech.rank != basis_cols.len() + 2 {
            return Err(LinalgError::BlockConstructionStalled);
        }
        span.truncate(ech.rank);
        basis_cols.push(v);
        basis_cols.push(mv);
    }
    let mut transition = Mat::zeros(m.n);
    for (j, col) in basis_cols.iter().enumerate() {
        for i in 0..m.n {
            transition.set(i, j, col[i]);
        }
    }
    let inv = transition
        .inverse(field)
        .ok_or(LinalgError::BlockConstructionStalled)?;
    let companion = Mat::companion2(field, a_coef, b_coef);
    let expected = Mat::block_diag(&vec![companion.clone(); m.n / 2]);
    let conj = inv.mul(field, m).mul(field, &transition);
    if conj != expected {
        return Err(LinalgError::BlockConstructionStalled);
    }
    Ok(RationalBlocks {
        transition,
        companion,
        poly,
        blocks: m.n / 2,
    })
}

fn in_row_span(field: &Field, echelon_rows: &[Vec<Fe>], v: &[Fe]) -> bool {
    let mut work = v.to_vec();
    for row in echelon_rows {
        let pivot = row.iter().position(|&c| c != 0);
        if let Some(p) = pivot {
            if work[p] != 0 {
                let factor = field.mul(work[p], field.inv(row[p]).expect("pivot"));
                for j in 0..work.len() {
                    work[j] = field.sub(work[j], field.mul(factor, row[j]));
                }
            }
        }
    }
    work.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use std::sync::Arc;

    fn gf(q: u32) -> FieldRc {
        Arc::new(Field::of_order(q).unwrap())
    }

    /// The companion of t^2 + t + 1 over GF(2), written B throughout.
    fn b2(field: &Field) -> Mat {
        Mat::companion2(field, 1, 1)
    }

    #[test]
    fn rank_kernel_examples() {
        let f = gf(2);
        let (rank, kernel) = rank_and_kernel(&f, &[vec![1, 1], vec![1, 1]], 2);
        assert_eq!(rank, 1);
        assert_eq!(kernel, vec![vec![1, 1]]);

        let f3 = gf(3);
        let id = Mat::identity(4);
        assert_eq!(id.rank(&f3), 4);
        assert!(id.kernel(&f3).is_empty());

        // outer product of x = e0 and xi = eta3 has rank 1
        let outer = Mat::outer(&f, &[1, 0, 0, 0], &[0, 0, 0, 1]);
        assert_eq!(outer.rank(&f), 1);
    }

    #[test]
    fn eigen_spectrum_examples() {
        let f = gf(2);
        let b = b2(&f);
        assert!(eigen_spectrum(&f, &b).is_empty());

        // E00 on two dimensions: eigenvalues 1 and 0
        let mut e00 = Mat::zeros(2);
        e00.set(0, 0, 1);
        let spec = eigen_spectrum(&f, &e00);
        assert_eq!(spec.len(), 2);
        assert_eq!(spec[0].lambda, 0);
        assert_eq!(spec[0].right, vec![vec![0, 1]]);
        assert_eq!(spec[1].lambda, 1);
        assert_eq!(spec[1].right, vec![vec![1, 0]]);

        let bb = Mat::block_diag(&[b.clone(), b]);
        assert!(eigen_spectrum(&f, &bb).is_empty());
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f = gf(2);
        let bb = Mat::block_diag(&[b2(&f), b2(&f)]);
        assert_eq!(minimal_polynomial(&f, &bb), Poly::new(vec![1, 1, 1]));

        let f3 = gf(3);
        assert_eq!(
            minimal_polynomial(&f3, &Mat::identity(3)),
            Poly::new(vec![2, 1]) // t - 1
        );

        let mut e01 = Mat::zeros(2);
        e01.set(0, 1, 1);
        assert_eq!(minimal_polynomial(&f, &e01), Poly::new(vec![0, 0, 1])); // t^2
    }

    #[test]
    fn minimal_polynomial_no_proper_divisor_annihilates() {
        // full enumeration of lower-degree monic candidates
        let cases: [(u32, Mat); 3] = {
            let f2 = gf(2);
            let f3 = gf(3);
            [
                (2, Mat::block_diag(&[b2(&f2), b2(&f2)])),
                (3, Mat::identity(3)),
                (3, Mat::companion2(&f3, 0, 1)),
            ]
        };
        for (q, m) in cases {
            let f = gf(q);
            let mp = minimal_polynomial(&f, &m);
            assert!(mp.is_monic());
            assert!(mp.eval_mat(&f, &m).is_zero());
            let d = mp.degree().unwrap();
            for deg in 1..d {
                for idx in 0..(q as u64).pow(deg as u32) {
                    let mut coeffs = Vec::with_capacity(deg + 1);
                    let mut t = idx;
                    for _ in 0..deg {
                        coeffs.push((t % q as u64) as Fe);
                        t /= q as u64;
                    }
                    coeffs.push(1);
                    let cand = Poly::new(coeffs);
                    assert!(
                        !cand.eval_mat(&f, &m).is_zero(),
                        "proper divisor {} annihilates",
                        cand
                    );
                }
            }
        }
    }

    #[test]
    fn smat_examples() {
        let f = gf(2);
        let bb = Mat::block_diag(&[b2(&f), b2(&f)]);
        assert!(check_smat(&f, &bb, Side::Right));
        assert!(check_smat(&f, &bb, Side::Left));

        let mut e01 = Mat::zeros(2);
        e01.set(0, 1, 1);
        assert!(check_smat(&f, &e01, Side::Right)); // M^2 = 0

        let f5 = gf(5);
        let diag = Mat::from_rows(&f5, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        assert!(!check_smat(&f5, &diag, Side::Right));
        // the witness is the all-ones direction: a Vandermonde stack on 1,2,3
        assert_eq!(smat_violation(&f5, &diag, Side::Right), Some(vec![1, 1, 1]));
    }

    #[test]
    fn smat_left_right_agree_on_all_of_m2_gf3() {
        let f = gf(3);
        for idx in 0..81 {
            let m = Mat::from_counter(2, 3, idx);
            assert_eq!(
                check_smat(&f, &m, Side::Right),
                check_smat(&f, &m, Side::Left),
                "disagreement at {:?}",
                m
            );
        }
    }

    #[test]
    fn spectrum_empty_iff_no_linear_factor_exhaustive() {
        for q in [2u32, 3] {
            let f = gf(q);
            for idx in 0..(q as u64).pow(4) {
                let m = Mat::from_counter(2, q, idx);
                let spec_empty = eigen_spectrum(&f, &m).is_empty();
                let mp = minimal_polynomial(&f, &m);
                assert_eq!(spec_empty, !mp.has_root(&f), "mismatch for {:?}", m);
            }
        }
    }

    #[test]
    fn block_basis_examples() {
        let f = gf(2);
        let bb = Mat::block_diag(&[b2(&f), b2(&f)]);
        let rb = rational_block_basis(&f, &bb).unwrap();
        assert_eq!(rb.poly, Poly::new(vec![1, 1, 1]));
        assert_eq!(rb.blocks, 2);
        // the construction picks e0, Be0 = e1, then e2, e3: identity transition
        assert_eq!(rb.transition, Mat::identity(4));

        let f3 = gf(3);
        let diag = Mat::from_rows(&f3, &[vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(
            rational_block_basis(&f3, &diag).unwrap_err(),
            LinalgError::NotQuadraticIrreducible
        );
    }

    #[test]
    fn block_basis_recovers_conjugated_form() {
        // a fixed GF(3) conjugate of diag(C, C), C the companion of t^2 + 1
        let f = gf(3);
        let c = Mat::companion2(&f, 0, 1);
        let cc = Mat::block_diag(&[c.clone(), c]);
        let g = Mat::from_rows(
            &f,
            &[
                vec![1, 2, 0, 1],
                vec![0, 1, 1, 0],
                vec![2, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        )
        .unwrap();
        let ginv = g.inverse(&f).expect("g invertible");
        let m = g.mul(&f, &cc).mul(&f, &ginv);
        let rb = rational_block_basis(&f, &m).unwrap();
        assert_eq!(rb.poly, Poly::new(vec![1, 0, 1]));
        // round trip: B * diag * B^-1 = M
        let binv = rb.transition.inverse(&f).unwrap();
        let diag = Mat::block_diag(&vec![rb.companion.clone(); rb.blocks]);
        assert_eq!(rb.transition.mul(&f, &diag).mul(&f, &binv), m);
    }

    #[test]
    fn canonical_reps_counts() {
        assert_eq!(canonical_reps(2, 4).len(), 15);
        assert_eq!(canonical_reps(3, 4).len(), 40);
        assert_eq!(canonical_reps(5, 6).len(), 3906);
        // first nonzero coordinate is 1 everywhere
        for rep in canonical_reps(3, 3) {
            assert_eq!(rep.iter().copied().find(|&d| d != 0), Some(1));
        }
    }

    #[test]
    fn solve_columns_roundtrip() {
        let f = gf(5);
        let cols = vec![vec![1, 2, 0], vec![0, 1, 4]];
        // target = 2*c0 + 3*c1
        let target = vec![2, 2, 2];
        let sol = solve_columns(&f, &cols, &target).unwrap();
        assert_eq!(sol, vec![2, 3]);
        assert_eq!(solve_columns(&f, &cols, &[1, 0, 0]), None);
    }
}
