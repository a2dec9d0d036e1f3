//! A-hypergeometric side: the block A-matrix, Euler and box operators, the
//! volume formula for the holonomic rank, the change of variables against
//! `L^{-1}`, and T-nonresonance between simplices.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cayley::{CayleyMatrix, LaurentSystem, VarLabel};
use crate::error::GkzError;
use crate::linalg::{self, int, Int, IntMatrix, Rat, RatMatrix};
use crate::polytope::{mixed_volume_sum, LatticePolytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMatrix {
    /// `(k+N) x L`: k indicator rows, then N exponent rows
    pub m: IntMatrix,
    pub col_labels: Vec<String>,
    /// column indices of each polynomial, constant column last
    pub blocks: Vec<Vec<usize>>,
    pub k: usize,
    pub n: usize,
}

fn render_monomial(names: &[String], e: &[i64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(v, _)| **v != 0)
        .map(|(v, n)| if *v == 1 { n.clone() } else { format!("{n}^{v}") })
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join("*") }
}

/// Columns `(e_l, α)` for every monomial of `f_l`, then `(e_l, 0)`.
pub fn a_matrix(sys: &LaurentSystem) -> Result<AMatrix, GkzError> {
    let k = sys.k();
    let n = sys.n_vars();
    let mut cols: Vec<Vec<i64>> = Vec::new();
    let mut labels = Vec::new();
    let mut blocks = Vec::new();
    for (l, p) in sys.polys.iter().enumerate() {
        let mut block = Vec::new();
        for e in p.monomials.iter().filter(|e| e.iter().any(|&v| v != 0)) {
            let mut c = vec![0; k];
            c[l] = 1;
            c.extend(e.iter().copied());
            block.push(cols.len());
            labels.push(format!("f{}:{}", l + 1, render_monomial(&sys.names, e)));
            cols.push(c);
        }
        let mut c = vec![0; k + n];
        c[l] = 1;
        block.push(cols.len());
        labels.push(format!("f{}:1", l + 1));
        cols.push(c);
        blocks.push(block);
    }
    let rows: Vec<Vec<i64>> = (0..k + n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let m = IntMatrix::from_i64(&rows)?;
    let rank = linalg::rank_int(&m);
    if rank != k + n {
        return Err(GkzError::Rank { rank, want: k + n });
    }
    Ok(AMatrix { m, col_labels: labels, blocks, k, n })
}

impl AMatrix {
    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.m.ncols())
            .map(|c| self.m.col(c).iter().map(|v| v.to_i64().expect("small")).collect())
            .collect()
    }

    /// `Λ = ker_Z M(A)`
    pub fn lattice(&self) -> Vec<Vec<Int>> {
        linalg::integer_kernel(&self.m)
    }
}

/// `Σ_j coeffs_j a_j ∂_j + constant`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerOperator {
    pub coeffs: Vec<Int>,
    pub constant: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxOperator {
    pub u: Vec<Int>,
    pub plus: Vec<Int>,
    pub minus: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkzSystem {
    pub euler: Vec<EulerOperator>,
    pub boxes: Vec<BoxOperator>,
}

impl GkzSystem {
    /// Every box vector annihilates `M(A)`.
    pub fn boxes_in_kernel(&self, am: &AMatrix) -> bool {
        self.boxes.iter().all(|b| am.m.mul_vec(&b.u).iter().all(|v| v.is_zero()))
    }
}

/// Euler rows `Σ a∂ + (ζ_q+1)`, `Σ α a∂ - (I_l+1)` and box operators from a lattice basis.
pub fn gkz_system(am: &AMatrix, j: &[Rat], zeta: &[Rat]) -> Result<GkzSystem, GkzError> {
    if j.len() != am.n || zeta.len() != am.k {
        return Err(GkzError::Shape(format!("expected {} J and {} zeta values", am.n, am.k)));
    }
    let one = Rat::from_integer(int(1));
    let mut euler = Vec::new();
    for r in 0..am.k + am.n {
        let constant = if r < am.k { &zeta[r] + &one } else { -(&j[r - am.k] + &one) };
        euler.push(EulerOperator { coeffs: am.m.row(r).to_vec(), constant });
    }
    let boxes = am
        .lattice()
        .into_iter()
        .map(|u| {
            let plus = u.iter().map(|v| if v.is_positive() { v.clone() } else { Int::zero() }).collect();
            let minus = u.iter().map(|v| if v.is_negative() { -v.clone() } else { Int::zero() }).collect();
            BoxOperator { u, plus, minus }
        })
        .collect();
    Ok(GkzSystem { euler, boxes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    /// `(N+k)! vol hull(0, columns)`
    pub with_origin: Int,
    /// lattice volume of the Cayley polytope in its hyperplane
    pub cayley: Int,
    /// `Σ_{|a| = N} MV(Δ(f_1+1)^{a_1}, ...)`; `None` when the Minkowski-sum budget is exceeded
    pub mixed: Option<Int>,
    pub agree: bool,
}

impl RankReport {
    pub fn value(&self) -> &Int {
        &self.with_origin
    }
}

/// Distinct Minkowski sums allowed for the direct mixed-volume route.
pub const MIXED_BUDGET: usize = 250;

pub fn gkz_rank(sys: &LaurentSystem) -> Result<RankReport, GkzError> {
    let am = a_matrix(sys)?;
    let cols = am.columns();
    let mut with0 = cols.clone();
    with0.push(vec![0; am.k + am.n]);
    let p0 = LatticePolytope::hull(&with0)?;
    if !p0.is_full_dimensional() {
        return Err(GkzError::Polytope(crate::error::PolytopeError::Degenerate { dim: p0.dim(), ambient: p0.ambient_dim() }));
    }
    let with_origin = p0.normalized_volume();
    let cay = LatticePolytope::hull(&cols)?;
    let cayley = cay.normalized_volume();
    let newton: Vec<LatticePolytope> = am
        .blocks
        .iter()
        .map(|b| LatticePolytope::hull(&b.iter().map(|&c| cols[c][am.k..].to_vec()).collect::<Vec<_>>()))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&LatticePolytope> = newton.iter().collect();
    let mixed = mixed_volume_sum(&refs, 0, MIXED_BUDGET)?;
    let agree = with_origin == cayley && mixed.as_ref().is_none_or(|m| *m == cayley);
    Ok(RankReport { with_origin, cayley, mixed, agree })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaChange {
    /// `[x-columns of L | I_L | y-columns of L]`
    pub la: IntMatrix,
    /// `L^{-1} L(A)`
    pub product: RatMatrix,
    pub bordered_ok: bool,
    /// `σ_{j,i} = (L^{-1})_{i,j}`
    pub sigma: RatMatrix,
    /// exponents of `s_l(a) = Π_j a_j^{σ_{j,s_l}}`
    pub s_exponents: Vec<Vec<Rat>>,
    /// exponents of `s'_ρ(a)`
    pub aux_exponents: Vec<Vec<Rat>>,
    /// exponents of the prefactor `B_J^ζ(a)`
    pub b_exponents: Vec<Rat>,
}

pub fn sigma_change(cm: &CayleyMatrix, am: &AMatrix, j: &[Int], zeta: &[Int]) -> Result<SigmaChange, GkzError> {
    let l = cm.size();
    if am.m.ncols() != l {
        return Err(GkzError::Shape(format!("A has {} columns, L has {} terms", am.m.ncols(), l)));
    }
    let ph = &cm.phase;
    if j.len() != ph.n() || zeta.len() != ph.k() {
        return Err(GkzError::Shape("parameter lengths".into()));
    }
    let xcols: Vec<usize> = (0..l).filter(|&c| matches!(cm.var_labels[c], VarLabel::X(_))).collect();
    let ycols: Vec<usize> = (0..l).filter(|&c| matches!(cm.var_labels[c], VarLabel::Y(_))).collect();
    let width = xcols.len() + l + ycols.len();
    let mut la = IntMatrix::zeros(l, width);
    for r in 0..l {
        for (i, &c) in xcols.iter().enumerate() {
            la.set(r, i, cm.l.get(r, c).clone());
        }
        la.set(r, xcols.len() + r, int(1));
        for (i, &c) in ycols.iter().enumerate() {
            la.set(r, xcols.len() + l + i, cm.l.get(r, c).clone());
        }
    }
    let product = cm.inv.mul(&la.to_rat())?;
    let unit = |col: usize, row: usize| (0..l).all(|r| *product.get(r, col) == Rat::from_integer(int(i64::from(r == row))));
    let mut bordered_ok = xcols.iter().enumerate().all(|(i, &c)| unit(i, c));
    bordered_ok &= ycols.iter().enumerate().all(|(i, &c)| unit(xcols.len() + l + i, c));
    bordered_ok &= (0..l).all(|r| (0..l).all(|c| product.get(r, xcols.len() + c) == cm.inv.get(r, c)));
    let sigma = cm.inv.transpose();
    let rows_of = |pred: &dyn Fn(&VarLabel) -> bool| -> Vec<Vec<Rat>> {
        (0..l).filter(|&r| pred(&cm.var_labels[r])).map(|r| cm.inv.row(r).to_vec()).collect()
    };
    let s_exponents = rows_of(&|v| matches!(v, VarLabel::S(_)));
    let aux_exponents = rows_of(&|v| matches!(v, VarLabel::Aux(_)));
    let mut b_exponents = vec![Rat::zero(); l];
    for (r, lab) in cm.var_labels.iter().enumerate() {
        let w: Int = match lab {
            VarLabel::X(i) => &j[*i] + 1,
            VarLabel::Y(q) => &zeta[*q] + 1,
            _ => continue,
        };
        for (c, b) in b_exponents.iter_mut().enumerate() {
            *b += cm.inv.get(r, c) * Rat::from_integer(w.clone());
        }
    }
    Ok(SigmaChange { la, product, bordered_ok, sigma, s_exponents, aux_exponents, b_exponents })
}

/// Branches of the index system for simplex `K`: vectors `v` with `M v = β`,
/// off-simplex coordinates integral, taken modulo `Z^K`.
pub fn simplex_branches(am: &AMatrix, k_cols: &[usize], beta: &[Rat]) -> Result<Vec<Vec<Rat>>, GkzError> {
    let d = am.k + am.n;
    if k_cols.len() != d {
        return Err(GkzError::Shape(format!("simplex needs {d} columns")));
    }
    let mk = IntMatrix::from_rows((0..d).map(|r| k_cols.iter().map(|&c| am.m.get(r, c).clone()).collect()).collect())?;
    let det = linalg::det(&mk)?;
    if det.is_zero() {
        return Err(GkzError::SingularSimplex(k_cols.iter().map(|c| c + 1).collect()));
    }
    let inv = linalg::inverse(&mk)?;
    let off: Vec<usize> = (0..am.m.ncols()).filter(|c| !k_cols.contains(c)).collect();
    let bound = det.abs().to_i64().unwrap_or(i64::MAX).min(12);
    let mut seen: Vec<Vec<Rat>> = Vec::new();
    let mut lam = vec![0i64; off.len()];
    loop {
        let mut rhs = beta.to_vec();
        for (i, &c) in off.iter().enumerate() {
            for (r, v) in rhs.iter_mut().enumerate() {
                *v -= Rat::from_integer(am.m.get(r, c) * int(lam[i]));
            }
        }
        let lk = inv.mul_vec(&rhs);
        let mut v = vec![Rat::zero(); am.m.ncols()];
        for (i, &c) in k_cols.iter().enumerate() {
            v[c] = lk[i].clone();
        }
        for (i, &c) in off.iter().enumerate() {
            v[c] = Rat::from_integer(int(lam[i]));
        }
        if !seen.iter().any(|w| congruent(w, &v)) {
            seen.push(v);
        }
        let mut i = 0;
        while i < lam.len() {
            if lam[i] + 1 < bound {
                lam[i] += 1;
                break;
            }
            lam[i] = 0;
            i += 1;
        }
        if i == lam.len() {
            break;
        }
    }
    Ok(seen)
}

fn congruent(a: &[Rat], b: &[Rat]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).is_integer())
}

/// `β' = (-(ζ+1), J+1)`. False iff a branch of `K1` and a (different) branch
/// of `K2` differ by a lattice vector.
pub fn t_nonresonance(am: &AMatrix, k1: &[usize], k2: &[usize], j: &[Rat], zeta: &[Rat]) -> Result<bool, GkzError> {
    let one = Rat::from_integer(int(1));
    let mut beta: Vec<Rat> = zeta.iter().map(|z| -(z + &one)).collect();
    beta.extend(j.iter().map(|v| v + &one));
    let b1 = simplex_branches(am, k1, &beta)?;
    let b2 = simplex_branches(am, k2, &beta)?;
    let same = BTreeSet::from_iter(k1.iter()) == BTreeSet::from_iter(k2.iter());
    for (i, v) in b1.iter().enumerate() {
        for (jdx, w) in b2.iter().enumerate() {
            if same && i == jdx {
                continue;
            }
            if congruent(v, w) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
