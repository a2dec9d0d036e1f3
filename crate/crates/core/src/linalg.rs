//! Exact integer / rational matrices.
//!
//! Everything here is arbitrary precision; nothing is ever rounded.
//! Determinants and inverses go through fraction-free (Bareiss) elimination,
//! integer kernels through Hermite-style row reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LinalgError;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

/// Dense row-major rational matrix; entries are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

macro_rules! common_impl {
    ($t:ident, $e:ty) => {
        impl $t {
            pub fn zeros(rows: usize, cols: usize) -> Self {
                $t { rows, cols, data: vec![<$e>::zero(); rows * cols] }
            }

            pub fn identity(n: usize) -> Self {
                let mut m = Self::zeros(n, n);
                for i in 0..n {
                    m.data[i * n + i] = <$e>::one();
                }
                m
            }

            pub fn nrows(&self) -> usize {
                self.rows
            }

            pub fn ncols(&self) -> usize {
                self.cols
            }

            pub fn is_square(&self) -> bool {
                self.rows == self.cols
            }

            pub fn get(&self, i: usize, j: usize) -> &$e {
                &self.data[i * self.cols + j]
            }

            pub fn set(&mut self, i: usize, j: usize, v: $e) {
                self.data[i * self.cols + j] = v;
            }

            pub fn row(&self, i: usize) -> &[$e] {
                &self.data[i * self.cols..(i + 1) * self.cols]
            }

            pub fn col(&self, j: usize) -> Vec<$e> {
                (0..self.rows).map(|i| self.get(i, j).clone()).collect()
            }

            pub fn rows_vec(&self) -> Vec<Vec<$e>> {
                (0..self.rows).map(|i| self.row(i).to_vec()).collect()
            }

            pub fn transpose(&self) -> Self {
                let mut t = Self::zeros(self.cols, self.rows);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        t.set(j, i, self.get(i, j).clone());
                    }
                }
                t
            }

            pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
                if self.cols != other.rows {
                    return Err(LinalgError::Dimension(format!(
                        "cannot multiply {}x{} by {}x{}",
                        self.rows, self.cols, other.rows, other.cols
                    )));
                }
                let mut out = Self::zeros(self.rows, other.cols);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = self.get(i, k);
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let idx = i * other.cols + j;
                            out.data[idx] = &out.data[idx] + a * other.get(k, j);
                        }
                    }
                }
                Ok(out)
            }

            pub fn mul_vec(&self, v: &[$e]) -> Vec<$e> {
                assert_eq!(v.len(), self.cols, "vector length mismatch");
                (0..self.rows)
                    .map(|i| {
                        self.row(i).iter().zip(v).fold(<$e>::zero(), |acc, (a, b)| acc + a * b)
                    })
                    .collect()
            }

            /// Reorder columns: output column `j` is input column `perm[j]`.
            pub fn permute_cols(&self, perm: &[usize]) -> Self {
                assert_eq!(perm.len(), self.cols);
                let mut out = Self::zeros(self.rows, self.cols);
                for i in 0..self.rows {
                    for (j, &p) in perm.iter().enumerate() {
                        out.set(i, j, self.get(i, p).clone());
                    }
                }
                out
            }

            /// Reorder rows: output row `i` is input row `perm[i]`.
            pub fn permute_rows(&self, perm: &[usize]) -> Self {
                assert_eq!(perm.len(), self.rows);
                let mut out = Self::zeros(self.rows, self.cols);
                for (i, &p) in perm.iter().enumerate() {
                    for j in 0..self.cols {
                        out.set(i, j, self.get(p, j).clone());
                    }
                }
                out
            }
        }
    };
}

common_impl!(IntMatrix, Int);
common_impl!(RatMatrix, Rat);

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(rat_int).collect() }
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.rows_vec().into_iter().map(|r| r.iter().map(|v| v.to_i64()).collect()).collect()
    }
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `Some` when every entry is an integer.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().any(|v| !v.is_integer()) {
            return None;
        }
        Some(IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.to_integer()).collect() })
    }

    pub fn denominator_lcm(&self) -> Int {
        self.data.iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, &self.rows_vec())
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, &self.rows_vec())
    }
}

fn write_grid<T: fmt::Display>(f: &mut fmt::Formatter<'_>, rows: &[Vec<T>]) -> fmt::Result {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    for r in &cells {
        let line: Vec<String> = r.iter().map(|s| format!("{s:>width$}")).collect();
        writeln!(f, "[ {} ]", line.join("  "))?;
    }
    Ok(())
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<Int, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension(format!("det of non-square {}x{}", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Int::one());
    }
    let mut a = m.rows_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(Int::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Determinant of a rational matrix (clears denominators, then Bareiss).
pub fn det_rat(m: &RatMatrix) -> Result<Rat, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension(format!("det of non-square {}x{}", m.rows, m.cols)));
    }
    let mut scale = Rat::one();
    let mut rows = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let l = m.row(i).iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()));
        scale = scale * rat_int(&l);
        rows.push(m.row(i).iter().map(|v| (v * rat_int(&l)).to_integer()).collect());
    }
    let d = det(&IntMatrix::from_rows(rows)?)?;
    Ok(rat_int(&d) / scale)
}

/// Exact inverse via fraction-free Gauss–Jordan on `[m | I]`.
/// Returns `(det, adj)` with `m * adj = det * I`.
fn bareiss_adjugate(m: &IntMatrix) -> Result<(Int, IntMatrix), LinalgError> {
    let n = m.rows;
    let w = 2 * n;
    let mut a: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }));
            r
        })
        .collect();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Err(LinalgError::Singular),
            }
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..w {
                if j == k {
                    continue;
                }
                let v = (&a[k][k] * &a[i][j] - &f * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    // every pivot now equals `prev`; right block is prev * m^{-1}
    let d = prev;
    let adj_rows: Vec<Vec<Int>> = a.into_iter().map(|r| r[n..].to_vec()).collect();
    let adj = IntMatrix::from_rows(adj_rows)?;
    // det(m) = sign * d; keep m * adj = det * I by folding the sign in
    if sign.is_negative() {
        let neg = IntMatrix { rows: n, cols: n, data: adj.data.into_iter().map(|v| -v).collect() };
        Ok((-d, neg))
    } else {
        Ok((d, adj))
    }
}

pub fn inverse(m: &IntMatrix) -> Result<RatMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension(format!("inverse of non-square {}x{}", m.rows, m.cols)));
    }
    let (d, adj) = bareiss_adjugate(m)?;
    let dr = rat_int(&d);
    Ok(RatMatrix { rows: m.rows, cols: m.cols, data: adj.data.iter().map(|v| rat_int(v) / &dr).collect() })
}

/// `(delta, t)` with `t / delta = m^{-1}` and `delta` the least positive such integer.
pub fn scaled_inverse(m: &IntMatrix) -> Result<(Int, IntMatrix), LinalgError> {
    let inv = inverse(m)?;
    let delta = inv.denominator_lcm();
    let t = inv.scale(&rat_int(&delta)).to_int().expect("lcm clears denominators");
    Ok((delta, t))
}

pub fn inverse_rat(m: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension("inverse of non-square matrix".into()));
    }
    let n = m.rows;
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(LinalgError::Singular)?;
        a.swap(k, p);
        let piv = a[k][k].clone();
        for v in a[k].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let v = &a[i][j] - &f * &a[k][j];
                    a[i][j] = v;
                }
            }
        }
    }
    RatMatrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Reduced row echelon form; returns (rref, pivot columns).
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.rows_vec();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (RatMatrix { rows, cols, data: a.into_iter().flatten().collect() }, pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

pub fn rank_int(m: &IntMatrix) -> usize {
    rank(&m.to_rat())
}

/// Some solution of `m x = b`, or `None` if inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.rows);
    let mut aug = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut r = m.row(i).to_vec();
        r.push(b[i].clone());
        aug.push(r);
    }
    let aug = RatMatrix::from_rows(aug).ok()?;
    let (red, piv) = rref(&aug);
    if piv.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = red.get(r, m.cols).clone();
    }
    Some(x)
}

/// Rational basis of the right null space.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let (red, piv) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); m.cols];
            v[f] = Rat::one();
            for (r, &c) in piv.iter().enumerate() {
                v[c] = -red.get(r, f).clone();
            }
            v
        })
        .collect()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Output rows are in echelon form with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`; zero rows are dropped.
pub fn hnf_rows(rows: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let (h, _) = hnf_with_transform(rows);
    h.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect()
}

/// Row HNF together with the unimodular transform `u` (so `u * rows = h`).
fn hnf_with_transform(rows: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Int>> = rows.to_vec();
    let mut u: Vec<Vec<Int>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        // gcd-combine everything below into row r
        for i in r + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let eg = a[r][c].extended_gcd(&a[i][c]);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let p = &a[r][c] / &g;
            let q = &a[i][c] / &g;
            // [x y; -q p] has det x*p + y*q = 1
            let comb = |ra: &Vec<Int>, rb: &Vec<Int>| -> (Vec<Int>, Vec<Int>) {
                let top = ra.iter().zip(rb).map(|(s, t)| &x * s + &y * t).collect();
                let bot = ra.iter().zip(rb).map(|(s, t)| -&q * s + &p * t).collect();
                (top, bot)
            };
            let (t, b) = comb(&a[r], &a[i]);
            a[r] = t;
            a[i] = b;
            let (t, b) = comb(&u[r], &u[i]);
            u[r] = t;
            u[i] = b;
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            a[r] = a[r].iter().map(|v| -v).collect();
            u[r] = u[r].iter().map(|v| -v).collect();
        }
        for i in 0..r {
            let f = a[i][c].div_floor(&a[r][c]);
            if !f.is_zero() {
                a[i] = a[i].iter().zip(&a[r]).map(|(s, t)| s - &f * t).collect();
                u[i] = u[i].iter().zip(&u[r]).map(|(s, t)| s - &f * t).collect();
            }
        }
        r += 1;
    }
    (a, u)
}

/// Lattice basis of `{v in Z^n : m v = 0}`, HNF-reduced, first nonzero entry positive.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    // rows of the transform that kill m^T span the kernel lattice
    let mt = m.transpose().rows_vec();
    let (h, u) = hnf_with_transform(&mt);
    let raw: Vec<Vec<Int>> =
        h.iter().zip(&u).filter(|(hr, _)| hr.iter().all(|v| v.is_zero())).map(|(_, ur)| ur.clone()).collect();
    let mut basis = hnf_rows(&raw);
    for v in basis.iter_mut() {
        if let Some(f) = v.iter().find(|x| !x.is_zero()) {
            if f.is_negative() {
                *v = v.iter().map(|x| -x).collect();
            }
        }
    }
    basis
}

pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Divide by the gcd of the entries (zero vector unchanged).
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Common-denominator integer form of a rational vector: `(numerators, denominator)`.
pub fn clear_denominators(v: &[Rat]) -> (Vec<Int>, Int) {
    let l = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let lr = rat_int(&l);
    (v.iter().map(|x| (x * &lr).to_integer()).collect(), l)
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}
