//! Quasihomogeneity weights read from the columns of `L^{-1}`, pole spectra,
//! placement transitions, Hodge/weight levels of monomials and a Jordan-size
//! search.


use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cayley::{CayleyMatrix, TermKind, VarLabel};
use crate::error::SpectraError;
use crate::linalg::{self, int, Int, IntMatrix, Rat, RatMatrix};
use crate::mellin::{AffineZ, IndexSets, LinearForm};
use crate::polytope::LatticePolytope;
use crate::util::combinations;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub column: usize,
    pub w: Vec<Rat>,
    pub w_aux: Vec<Rat>,
    pub p: Vec<Rat>,
    pub q: Vec<Rat>,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCount {
    pub trivial: usize,
    pub nontrivial: usize,
    pub expected_trivial: usize,
    pub expected_nontrivial: usize,
}

impl WeightCount {
    pub fn ok(&self) -> bool {
        self.trivial == self.expected_trivial && self.nontrivial == self.expected_nontrivial
    }
}

/// Columns of `L^{-1}` split by variable kind; trivial iff `p` has exactly one
/// nonzero entry and it is positive.
pub fn weight_vectors(cm: &CayleyMatrix) -> (Vec<WeightVector>, WeightCount) {
    let ph = &cm.phase;
    let mut out = Vec::new();
    for c in 0..cm.size() {
        let mut wv = WeightVector { column: c, w: vec![], w_aux: vec![], p: vec![], q: vec![], trivial: false };
        for (r, lab) in cm.var_labels.iter().enumerate() {
            let v = cm.inv.get(r, c).clone();
            match lab {
                VarLabel::X(_) => wv.w.push(v),
                VarLabel::Aux(_) => wv.w_aux.push(v),
                VarLabel::S(_) => wv.p.push(v),
                VarLabel::Y(_) => wv.q.push(v),
            }
        }
        let nz: Vec<&Rat> = wv.p.iter().filter(|v| !v.is_zero()).collect();
        wv.trivial = nz.len() == 1 && nz[0].is_positive();
        out.push(wv);
    }
    let trivial = out.iter().filter(|w| w.trivial).count();
    let count = WeightCount {
        trivial,
        nontrivial: out.len() - trivial,
        expected_trivial: ph.k(),
        expected_nontrivial: ph.big_m() + 1,
    };
    (out, count)
}

/// Strict check of the structural weight count.
pub fn check_weight_count(cm: &CayleyMatrix) -> Result<WeightCount, SpectraError> {
    let (_, c) = weight_vectors(cm);
    if !c.ok() {
        return Err(SpectraError::WeightCount(format!(
            "trivial {} (expected {}), nontrivial {} (expected {})",
            c.trivial, c.expected_trivial, c.nontrivial, c.expected_nontrivial
        )));
    }
    Ok(c)
}

/// `{L_a <= 0 : a in I+_q} ∪ {z_i >= 0 : i != q}` boundary description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectraSet {
    pub q: usize,
    pub boundary: Vec<(usize, AffineZ)>,
    pub nz: usize,
}

impl SpectraSet {
    /// `z` lies in the closed region `∪_a {L_a <= 0}` restricted to `z_i >= 0, i != q`.
    pub fn contains(&self, z: &[Rat]) -> bool {
        let positive = (0..self.nz).filter(|&i| i != self.q).all(|i| !z[i].is_negative());
        positive && self.boundary.iter().any(|(_, l)| !l.eval(z).is_positive())
    }

    /// `z` lies on some boundary hyperplane.
    pub fn on_boundary(&self, z: &[Rat]) -> bool {
        self.boundary.iter().any(|(_, l)| l.eval(z).is_zero())
    }
}

pub fn spectra(
    forms: &[LinearForm],
    sets: &IndexSets,
    j: &[Int],
    jaux: &[Int],
    zeta: &[Int],
    q: usize,
) -> Result<SpectraSet, SpectraError> {
    let plus = sets.i_plus.get(q).ok_or(crate::error::MellinError::BlockIndex(q))?;
    let mut boundary = Vec::new();
    for &a in plus {
        boundary.push((a, forms[a].eval(j, jaux, zeta)?));
    }
    Ok(SpectraSet { q, boundary, nz: forms.first().map_or(0, |f| f.b.len()) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    /// `L1^{-1} L2`
    pub c: RatMatrix,
    pub det_c: Rat,
    /// `L2 L1^{-1}`, acting on term space
    pub term_map: RatMatrix,
    /// forms of the second placement equal forms of the first pushed through the map
    pub forms_consistent: bool,
}

/// Transition between two placements of the same system.
pub fn spectra_transition(cm1: &CayleyMatrix, cm2: &CayleyMatrix) -> Result<Transition, SpectraError> {
    if cm1.phase.system != cm2.phase.system || cm1.size() != cm2.size() || cm1.phase.kinds != cm2.phase.kinds {
        return Err(SpectraError::Mismatch("different systems or term layouts".into()));
    }
    let l1 = cm1.l.to_rat();
    let l2 = cm2.l.to_rat();
    let c = cm1.inv.mul(&l2)?;
    let det_c = linalg::det_rat(&c)?;
    let term_map = l2.mul(&cm1.inv)?;
    // row vector u = (1,..,1 | z | 1..1) at J = J' = zeta = 0 gives forms u L^{-1};
    // so forms2 = forms1 · (L1 L2^{-1}).
    let f1 = crate::mellin::linear_forms(cm1);
    let f2 = crate::mellin::linear_forms(cm2);
    let a1: Vec<AffineZ> = f1.iter().map(|f| f.at_origin()).collect();
    let a2: Vec<AffineZ> = f2.iter().map(|f| f.at_origin()).collect();
    let back = l1.mul(&cm2.inv)?;
    let nz = a1.first().map_or(0, |a| a.nz());
    let mut ok = true;
    for b in 0..a2.len() {
        let mut acc = AffineZ::constant(nz, Rat::zero());
        for (a, form) in a1.iter().enumerate() {
            let coef = back.get(a, b);
            if !coef.is_zero() {
                acc = acc.add(&form.scale(coef));
            }
        }
        if acc != a2[b] {
            ok = false;
        }
    }
    Ok(Transition { c, det_c, term_map, forms_consistent: ok })
}

/// Π = hull of the non-deformation term rows (s-columns dropped) and the origin.
pub fn hodge_simplex(cm: &CayleyMatrix) -> Result<(LatticePolytope, Vec<usize>, Vec<usize>), SpectraError> {
    let ph = &cm.phase;
    let cols: Vec<usize> = (0..ph.var_count()).filter(|&c| !matches!(ph.var_labels[c], VarLabel::S(_))).collect();
    let terms: Vec<usize> = (0..ph.len()).filter(|&a| !matches!(ph.kinds[a], TermKind::Deform { .. })).collect();
    let mut pts: Vec<Vec<i64>> = terms.iter().map(|&a| cols.iter().map(|&c| ph.rows[a][c]).collect()).collect();
    pts.push(vec![0; cols.len()]);
    Ok((LatticePolytope::hull(&pts)?, cols, terms))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeLevel {
    pub r: i64,
    pub point_degree: u64,
    /// `Σ_ν L_ν(J,0,ζ)` over non-deformation terms
    pub form_sum: Rat,
    /// `M+k-r < Σ L_ν <= M+k-r+1`
    pub bracket_ok: bool,
}

/// Filtration level of the monomial `x^J` (twisted by ζ).
pub fn hodge_level(cm: &CayleyMatrix, j: &[Int], zeta: &[Int]) -> Result<HodgeLevel, SpectraError> {
    let ph = &cm.phase;
    let (pi, cols, terms) = hodge_simplex(cm)?;
    let mut e = Vec::with_capacity(cols.len());
    for &c in &cols {
        let v = match ph.var_labels[c] {
            VarLabel::X(i) => j.get(i).ok_or_else(|| SpectraError::Mismatch("J length".into()))? + 1,
            VarLabel::Aux(_) => int(1),
            VarLabel::Y(q) => zeta.get(q).ok_or_else(|| SpectraError::Mismatch("zeta length".into()))? + 1,
            VarLabel::S(_) => unreachable!(),
        };
        e.push(v.to_i64().ok_or(crate::error::PolytopeError::Overflow)?);
    }
    let deg = pi.point_degree(&e).map_err(|err| match err {
        crate::error::PolytopeError::OutsideCone => SpectraError::OutsideCone,
        other => other.into(),
    })?;
    let forms = crate::mellin::linear_forms(cm);
    let zero_aux = vec![Int::zero(); ph.m];
    let mut sum = Rat::zero();
    for &a in &terms {
        sum += forms[a].eval(j, &zero_aux, zeta)?.c0;
    }
    let mk = (ph.big_m() + ph.k()) as i64;
    let r = mk + 1 - deg as i64;
    let lo = Rat::from_integer(int(mk - r));
    let bracket_ok = lo < sum && sum <= &lo + Rat::one();
    Ok(HodgeLevel { r, point_degree: deg, form_sum: sum, bracket_ok })
}

/// Largest `q` such that some `q` forms of `I+_l` vanish simultaneously.
pub fn weight_level(
    forms: &[LinearForm],
    sets: &IndexSets,
    j: &[Int],
    jaux: &[Int],
    zeta: &[Int],
    l: usize,
) -> Result<usize, SpectraError> {
    let plus = sets.i_plus.get(l).ok_or(crate::error::MellinError::BlockIndex(l))?;
    let affs: Vec<AffineZ> = plus.iter().map(|&a| forms[a].eval(j, jaux, zeta)).collect::<Result<_, _>>()?;
    for size in (1..=affs.len()).rev() {
        if combinations(affs.len(), size).iter().any(|sub| consistent(&sub.iter().map(|&i| &affs[i]).collect::<Vec<_>>())) {
            return Ok(size);
        }
    }
    Ok(0)
}

fn consistent(affs: &[&AffineZ]) -> bool {
    let a = RatMatrix::from_rows(affs.iter().map(|l| l.cz.clone()).collect()).expect("rect");
    let rhs: Vec<Rat> = affs.iter().map(|l| -l.c0.clone()).collect();
    linalg::solve(&a, &rhs).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanReport {
    /// `p + 1`
    pub block_size: usize,
    /// the search box `[0, bound]` for each `n_a`
    pub bound: i64,
    pub witness: Option<Vec<Rat>>,
    /// lower bound is certified; the upper bound depends on the search box
    pub heuristic_upper: bool,
}

/// Largest set of forms taking values in `-[0, bound]∩Z` at a common point
/// `ż` having some coordinate in `Z_{<=0}`; the block size is `|set| - nz + 1`.
pub fn jordan_bound(forms: &[LinearForm], j: &[Int], jaux: &[Int], zeta: &[Int], cap: i64) -> Result<JordanReport, SpectraError> {
    let affs: Vec<AffineZ> = forms.iter().map(|f| f.eval(j, jaux, zeta)).collect::<Result<_, _>>()?;
    let nz = affs.first().map_or(0, |a| a.nz());
    let delta = forms.first().map_or_else(Int::one, |f| f.delta.clone());
    let bound = (delta * int(3)).to_i64().unwrap_or(i64::MAX).min(cap);
    let in_range = |v: &Rat| v.is_integer() && !v.is_positive() && v >= &Rat::from_integer(int(-bound));
    let mut best: Option<(usize, Vec<Rat>)> = None;
    let zs = (0..affs.len()).filter(|&a| !affs[a].is_constant()).collect::<Vec<_>>();
    for sub in combinations(zs.len(), nz) {
        let rows: Vec<Vec<Rat>> = sub.iter().map(|&i| affs[zs[i]].cz.clone()).collect();
        let m = RatMatrix::from_rows(rows).expect("rect");
        let Ok(inv) = linalg::inverse_rat(&m) else { continue };
        let mut n = vec![0i64; nz];
        loop {
            let rhs: Vec<Rat> = sub.iter().zip(&n).map(|(&i, &k)| -Rat::from_integer(int(k)) - &affs[zs[i]].c0).collect();
            let z = inv.mul_vec(&rhs);
            if z.iter().any(|v| v.is_integer() && !v.is_positive()) {
                let count = affs.iter().filter(|l| in_range(&l.eval(&z))).count();
                if best.as_ref().is_none_or(|(c, _)| count > *c) {
                    best = Some((count, z.clone()));
                }
            }
            let mut i = 0;
            loop {
                if i == nz {
                    break;
                }
                if n[i] < bound {
                    n[i] += 1;
                    break;
                }
                n[i] = 0;
                i += 1;
            }
            if i == nz {
                break;
            }
        }
    }
    let (block_size, witness) = match best {
        Some((c, z)) if c + 1 > nz => (c + 1 - nz, Some(z)),
        Some((_, z)) => (1, Some(z)),
        None => (1, None),
    };
    Ok(JordanReport { block_size, bound, witness, heuristic_upper: true })
}

/// Exponent matrix of the identity transition, for tests.
pub fn identity_transition(n: usize) -> RatMatrix {
    IntMatrix::identity(n).to_rat()
}
