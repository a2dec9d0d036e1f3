//! Horn-type operators annihilating the fiber-integral Mellin data, their
//! degree identity against mixed volumes, Ore–Sato compatibility, resonance,
//! principal symbols and the growth condition.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::{CayleyMatrix, VarLabel};
use crate::error::HornError;
use crate::linalg::{int, Int, Rat};
use crate::mellin::{AffineZ, GammaProduct, IndexSets, LinearForm};
use crate::poly::MPoly;
use crate::polytope::{mixed_sum_positive, mixed_volume_mult, LatticePolytope};
use crate::util::compositions;

/// How the z-coefficients of a row are scaled before building operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BScaling {
    /// integer numerators over the common Δ
    #[default]
    Global,
    /// numerators divided by the row content; the z-step shrinks accordingly
    RowPrimitive,
}

/// `form + shift` for a term `term`; `form` already carries the shift and sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedForm {
    pub term: usize,
    pub shift: i64,
    pub form: AffineZ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornOperator {
    /// deformation index (0-based position among deformed polynomials)
    pub q: usize,
    pub p_factors: Vec<ShiftedForm>,
    pub q_factors: Vec<ShiftedForm>,
    /// z_q step of the shift `s_q^Δ`
    pub delta: Rat,
    /// integer B-row actually used
    pub b_row: Vec<Int>,
    pub scaling: BScaling,
}

impl HornOperator {
    pub fn p_degree(&self) -> usize {
        self.p_factors.len()
    }

    pub fn q_degree(&self) -> usize {
        self.q_factors.len()
    }

    pub fn degrees_equal(&self) -> bool {
        self.p_degree() == self.q_degree()
    }

    fn nz(&self) -> usize {
        self.p_factors.first().or(self.q_factors.first()).map_or(0, |f| f.form.nz())
    }
}

fn b_row(forms: &[LinearForm], q: usize, scaling: BScaling) -> (Vec<Int>, Rat) {
    let row: Vec<Int> = forms.iter().map(|f| f.b[q].clone()).collect();
    let delta = forms[0].delta.clone();
    match scaling {
        BScaling::Global => (row, Rat::from_integer(delta)),
        BScaling::RowPrimitive => {
            let c = crate::linalg::content(&row);
            if c.is_zero() {
                return (row, Rat::from_integer(delta));
            }
            (row.iter().map(|v| v / &c).collect(), Rat::new(delta, c))
        }
    }
}

fn small(v: &Int) -> i64 {
    v.to_i64().expect("exponent fits in i64")
}

/// One operator per deformation parameter.
pub fn horn_operators(
    forms: &[LinearForm],
    sets: &IndexSets,
    j: &[Int],
    jaux: &[Int],
    zeta: &[Int],
    scaling: BScaling,
) -> Result<Vec<HornOperator>, HornError> {
    let nz = forms.first().map_or(0, |f| f.b.len());
    let evals: Vec<AffineZ> = forms.iter().map(|f| f.eval(j, jaux, zeta)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(nz);
    for q in 0..nz {
        let (row, delta) = b_row(forms, q, scaling);
        let mut p_factors = Vec::new();
        for &a in &sets.i_plus[q] {
            for s in 0..small(&row[a]) {
                p_factors.push(ShiftedForm { term: a, shift: s, form: evals[a].shift(&Rat::from_integer(int(s))) });
            }
        }
        let mut q_factors = Vec::new();
        for &a in &sets.i_minus[q] {
            for s in 0..small(&-row[a].clone()) {
                q_factors.push(ShiftedForm {
                    term: a,
                    shift: s,
                    form: evals[a].neg().shift(&Rat::from_integer(int(-s))),
                });
            }
        }
        out.push(HornOperator { q, p_factors, q_factors, delta, b_row: row, scaling });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub q: usize,
    pub p_degree: usize,
    pub q_degree: usize,
    /// `|χ(X_q)|` by mixed volumes
    pub euler_characteristic: Int,
    pub pass: bool,
}

/// Newton polytopes `Δ(f_i + s_i)` (with `Δ(f_q + 1)` for the distinguished
/// block) in the coordinates `(x, x', s_l for l != q)`.
pub fn euler_polytopes(cm: &CayleyMatrix, q: usize) -> Result<Vec<LatticePolytope>, HornError> {
    let ph = &cm.phase;
    if q >= ph.ks() {
        return Err(HornError::BlockIndex(q));
    }
    let keep: Vec<usize> = ph
        .var_labels
        .iter()
        .enumerate()
        .filter(|(_, v)| match v {
            VarLabel::X(_) | VarLabel::Aux(_) => true,
            VarLabel::S(l) => *l != q,
            VarLabel::Y(_) => false,
        })
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    for b in 0..ph.k() {
        let pts: Vec<Vec<i64>> = ph.block(b).iter().map(|&t| keep.iter().map(|&c| ph.rows[t][c]).collect()).collect();
        out.push(LatticePolytope::hull(&pts)?);
    }
    Ok(out)
}

/// `|χ(X_q)| = sum over a_i >= 1, sum a_i = M+ks-1 of MV(P_1^{a_1}, ..., P_k^{a_k})` (normalized),
/// evaluated through Cayley volumes of subfamilies.
pub fn euler_characteristic(cm: &CayleyMatrix, q: usize) -> Result<Int, HornError> {
    let ps = euler_polytopes(cm, q)?;
    let refs: Vec<&LatticePolytope> = ps.iter().collect();
    Ok(mixed_sum_positive(&refs)?)
}

/// Same quantity summed composition by composition from Minkowski-sum mixed volumes;
/// only practical in low dimension.
pub fn euler_characteristic_direct(cm: &CayleyMatrix, q: usize) -> Result<Int, HornError> {
    let ps = euler_polytopes(cm, q)?;
    let dim = ps.first().map_or(0, |p| p.ambient_dim());
    let refs: Vec<&LatticePolytope> = ps.iter().collect();
    let mut total = Int::zero();
    for a in compositions(dim, ps.len(), 1) {
        total += mixed_volume_mult(&refs, &a)?;
    }
    Ok(total)
}

pub fn horn_degree_check(op: &HornOperator, cm: &CayleyMatrix) -> Result<DegreeReport, HornError> {
    let chi = euler_characteristic(cm, op.q)?;
    let p_degree = op.p_degree();
    Ok(DegreeReport {
        q: op.q,
        p_degree,
        q_degree: op.q_degree(),
        pass: op.degrees_equal() && chi == int(p_degree as i64),
        euler_characteristic: chi,
    })
}

/// `R_q(z) = P_q(z) / Q_q(z + Δ e_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreSatoRatio {
    pub q: usize,
    pub numerator: Vec<AffineZ>,
    pub denominator: Vec<AffineZ>,
    pub step: Rat,
}

impl OreSatoRatio {
    /// `None` where the denominator vanishes.
    pub fn eval(&self, z: &[Rat]) -> Option<Rat> {
        let mut den = Rat::one();
        for l in &self.denominator {
            den *= l.eval(z);
        }
        if den.is_zero() {
            return None;
        }
        let mut num = Rat::one();
        for l in &self.numerator {
            num *= l.eval(z);
        }
        Some(num / den)
    }
}

pub fn ore_sato(ops: &[HornOperator]) -> Vec<OreSatoRatio> {
    ops.iter()
        .map(|op| {
            // substitute z -> z + step e_q into each Q factor
            let denominator = op
                .q_factors
                .iter()
                .map(|f| {
                    let c = f.form.cz.get(op.q).cloned().unwrap_or_else(Rat::zero);
                    f.form.shift(&(c * &op.delta))
                })
                .collect();
            OreSatoRatio {
                q: op.q,
                numerator: op.p_factors.iter().map(|f| f.form.clone()).collect(),
                denominator,
                step: op.delta.clone(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub points: usize,
    pub failures: Vec<(usize, usize, Vec<Rat>)>,
    pub pass: bool,
}

/// Seeded rational point with denominators in `1..=97`.
pub fn sample_point(rng: &mut ChaCha8Rng, nz: usize) -> Vec<Rat> {
    (0..nz)
        .map(|_| {
            let d: i64 = rng.gen_range(1..=97);
            let n: i64 = rng.gen_range(-300..=300);
            Rat::new(int(n), int(d))
        })
        .collect()
}

fn shifted(z: &[Rat], i: usize, by: &Rat) -> Vec<Rat> {
    let mut w = z.to_vec();
    w[i] += by;
    w
}

/// `R_q(z + Δ e_r) R_r(z) = R_r(z + Δ e_q) R_q(z)` at `points` seeded points.
pub fn compatibility_check(ratios: &[OreSatoRatio], seed: u64, points: usize) -> Result<CompatibilityReport, HornError> {
    let nz = ratios.len();
    if nz < 2 {
        return Ok(CompatibilityReport { points: 0, failures: vec![], pass: true });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0;
    let mut failures = Vec::new();
    let mut attempts = 0;
    while used < points {
        attempts += 1;
        if attempts > 50 * points + 100 {
            return Err(HornError::Sampling);
        }
        let z = sample_point(&mut rng, nz);
        let mut vals = Vec::new();
        let mut ok = true;
        'outer: for q in 0..nz {
            for r in (q + 1)..nz {
                let rq = &ratios[q];
                let rr = &ratios[r];
                let parts = [
                    rq.eval(&shifted(&z, r, &rr.step)),
                    rr.eval(&z),
                    rr.eval(&shifted(&z, q, &rq.step)),
                    rq.eval(&z),
                ];
                if parts.iter().any(|p| p.is_none()) {
                    ok = false;
                    break 'outer;
                }
                let p: Vec<Rat> = parts.into_iter().map(|v| v.unwrap()).collect();
                vals.push((q, r, &p[0] * &p[1] == &p[2] * &p[3]));
            }
        }
        if !ok {
            continue;
        }
        used += 1;
        for (q, r, good) in vals {
            if !good {
                failures.push((q, r, z.clone()));
            }
        }
    }
    Ok(CompatibilityReport { points: used, pass: failures.is_empty(), failures })
}

/// P-side and Q-side shifted forms share no affine function.
pub fn non_resonance(op: &HornOperator) -> bool {
    let plus: Vec<&AffineZ> = op.p_factors.iter().map(|f| &f.form).collect();
    // Q factors are stored as -(L + j); undo the sign for comparison
    op.q_factors.iter().map(|f| f.form.neg()).all(|m| !plus.contains(&&m))
}

/// Principal symbol in variables `(s_1..s_ks, ξ_1..ξ_ks)`; `None` if the
/// shift step is not an integer.
pub fn char_symbol(op: &HornOperator) -> Option<MPoly> {
    let nz = op.nz();
    let nv = 2 * nz;
    if !op.delta.is_integer() {
        return None;
    }
    let step = op.delta.to_integer().to_u32()?;
    // Σ_i c_i s_i ξ_i
    let lin = |cz: &[Rat], sign: &Rat| {
        let mut p = MPoly::zero(nv);
        for (i, c) in cz.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = MPoly::var(nv, i).mul(&MPoly::var(nv, nz + i)).scale(&(c * sign));
            p = p.add(&t);
        }
        p
    };
    let minus = -Rat::one();
    let mut p = MPoly::one(nv);
    for f in &op.p_factors {
        // the operator substitutes z -> -ϑ
        p = p.mul(&lin(&f.form.cz, &minus));
    }
    let mut qpoly = MPoly::one(nv);
    for f in &op.q_factors {
        qpoly = qpoly.mul(&lin(&f.form.cz, &minus));
    }
    let sq = MPoly::monomial(nv, op.q, step, Rat::one());
    Some(p.sub(&sq.mul(&qpoly)))
}

pub fn char_symbols(ops: &[HornOperator]) -> Vec<Option<MPoly>> {
    ops.iter().map(char_symbol).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// column sums of z-coefficients agree between numerator and denominator
    pub balanced: bool,
    /// z-indices where they do not
    pub offending: Vec<usize>,
    /// minimum over the vertices ±e_i of the unit cross-polytope (exact)
    pub alpha_vertex_min: Rat,
    /// minimum over sampled unit-sphere directions (floating point)
    pub alpha_sample_min: f64,
    /// the α bound is advisory only
    pub heuristic: bool,
}

fn abs_lin(cz: &[Rat], z: &[Rat]) -> Rat {
    cz.iter().zip(z).map(|(c, v)| c * v).sum::<Rat>().abs()
}

/// Condition on the z-coefficient sums, and a lower estimate of
/// `α = min_{|z|=1} (Σ|L_j(z) - L_j(0)| - Σ|M_j(z) - M_j(0)|)`.
pub fn growth_check(g: &GammaProduct, seed: u64) -> GrowthReport {
    let nz = g.nz;
    let num = g.numerator();
    let den = g.denominator();
    let sum = |fs: &[(AffineZ, i64)], i: usize| -> Rat { fs.iter().map(|(l, m)| &l.cz[i] * Rat::from_integer(int(*m))).sum() };
    let offending: Vec<usize> = (0..nz).filter(|&i| sum(&num, i) != sum(&den, i)).collect();
    let alpha_at = |z: &[Rat]| -> Rat {
        let a: Rat = num.iter().map(|(l, m)| abs_lin(&l.cz, z) * Rat::from_integer(int(*m))).sum();
        let b: Rat = den.iter().map(|(l, m)| abs_lin(&l.cz, z) * Rat::from_integer(int(*m))).sum();
        a - b
    };
    let mut vmin: Option<Rat> = None;
    for i in 0..nz {
        for s in [1i64, -1] {
            let mut z = vec![Rat::zero(); nz];
            z[i] = Rat::from_integer(int(s));
            let v = alpha_at(&z);
            vmin = Some(vmin.map_or(v.clone(), |m: Rat| m.min(v)));
        }
    }
    let to_f = |r: &Rat| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut smin = f64::INFINITY;
    for _ in 0..if nz == 0 { 0 } else { 512 } {
        let dir: Vec<f64> = (0..nz).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        let val = |fs: &[(AffineZ, i64)]| -> f64 {
            fs.iter().map(|(l, m)| l.cz.iter().zip(&dir).map(|(c, d)| to_f(c) * d / norm).sum::<f64>().abs() * *m as f64).sum()
        };
        smin = smin.min(val(&num) - val(&den));
    }
    GrowthReport {
        balanced: offending.is_empty(),
        offending,
        alpha_vertex_min: vmin.unwrap_or_else(Rat::zero),
        alpha_sample_min: if smin.is_finite() { smin } else { 0.0 },
        heuristic: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_detects_duplicate() {
        let l = AffineZ::var(1, 0);
        let op = HornOperator {
            q: 0,
            p_factors: vec![ShiftedForm { term: 0, shift: 0, form: l.clone() }],
            q_factors: vec![ShiftedForm { term: 1, shift: 0, form: l.neg() }],
            delta: Rat::one(),
            b_row: vec![int(1), int(-1)],
            scaling: BScaling::Global,
        };
        assert!(!non_resonance(&op));
    }
}
