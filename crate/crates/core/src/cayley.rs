//! Phase function of the Cayley trick and its square exponent matrix.
//!
//! Every polynomial `f_q` contributes the terms `y_q * x^alpha` (one per
//! monomial) and, when deformed, the extra term `y_q * s_q`.  Auxiliary
//! variables `x'_j` multiply chosen monomial terms until the number of
//! variables matches the number of terms.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::PhaseError;
use crate::linalg::{det, inverse, scaled_inverse, Int, IntMatrix, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polynomial {
    /// Exponent vectors; the zero vector is an explicit constant term.
    pub monomials: Vec<Vec<i64>>,
    /// Whether the polynomial carries a deformation parameter `s`.
    pub deformed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentSystem {
    pub names: Vec<String>,
    pub polys: Vec<Polynomial>,
}

impl LaurentSystem {
    pub fn new(names: Vec<String>, polys: Vec<Polynomial>) -> Result<Self, PhaseError> {
        let s = LaurentSystem { names, polys };
        s.validate()?;
        Ok(s)
    }

    /// All polynomials deformed, variables named `x1..xN`.
    pub fn from_exponents(polys: &[Vec<Vec<i64>>]) -> Result<Self, PhaseError> {
        let n = polys.first().and_then(|p| p.first()).map_or(0, |m| m.len());
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Self::new(
            names,
            polys.iter().map(|p| Polynomial { monomials: p.clone(), deformed: true }).collect(),
        )
    }

    /// Diagonal two-term system `f_q = x1^a_q1 + ... ` used throughout:
    /// `rows[q][i]` is the pure power of `x_i` in `f_q`.
    pub fn pure_powers(rows: &[Vec<i64>]) -> Result<Self, PhaseError> {
        let polys: Vec<Vec<Vec<i64>>> = rows
            .iter()
            .map(|r| {
                (0..r.len())
                    .map(|i| {
                        let mut e = vec![0; r.len()];
                        e[i] = r[i];
                        e
                    })
                    .collect()
            })
            .collect();
        Self::from_exponents(&polys)
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn validate(&self) -> Result<(), PhaseError> {
        if self.polys.is_empty() {
            return Err(PhaseError::InvalidSystem("need at least one polynomial".into()));
        }
        let n = self.n_vars();
        let names: BTreeSet<&String> = self.names.iter().collect();
        if names.len() != n {
            return Err(PhaseError::InvalidSystem("duplicate variable name".into()));
        }
        for (q, p) in self.polys.iter().enumerate() {
            if p.monomials.is_empty() {
                return Err(PhaseError::InvalidSystem(format!("polynomial {} is empty", q + 1)));
            }
            let mut seen = BTreeSet::new();
            for m in &p.monomials {
                if m.len() != n {
                    return Err(PhaseError::InvalidSystem(format!(
                        "polynomial {} has an exponent vector of length {} (expected {n})",
                        q + 1,
                        m.len()
                    )));
                }
                if !seen.insert(m.clone()) {
                    return Err(PhaseError::InvalidSystem(format!("polynomial {} repeats a monomial", q + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn term_count(&self) -> usize {
        self.polys.iter().map(|p| p.monomials.len() + usize::from(p.deformed)).sum()
    }

    pub fn deformed_count(&self) -> usize {
        self.polys.iter().filter(|p| p.deformed).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AuxPlacement {
    /// `assignments[j]` = 0-based index of the term multiplied by `x'_{j+1}`.
    pub assignments: Vec<usize>,
}

impl AuxPlacement {
    pub fn new(assignments: Vec<usize>) -> Self {
        AuxPlacement { assignments }
    }

    pub fn empty() -> Self {
        Self::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarLabel {
    X(usize),
    Aux(usize),
    /// deformation parameter, indexed by its position among deformed polynomials
    S(usize),
    Y(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Monomial { poly: usize, index: usize },
    Deform { poly: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Balance {
    Deficient,
    Square,
    Abundant,
}

impl fmt::Display for Balance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Balance::Deficient => "deficient",
            Balance::Square => "square",
            Balance::Abundant => "abundant",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseFunction {
    pub system: LaurentSystem,
    pub placement: AuxPlacement,
    pub kinds: Vec<TermKind>,
    /// Term exponent rows over `var_labels`.
    pub rows: Vec<Vec<i64>>,
    pub var_labels: Vec<VarLabel>,
    pub m: usize,
    pub balance: Balance,
    /// Polynomial index of each deformation parameter.
    pub deformed: Vec<usize>,
}

impl PhaseFunction {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n(&self) -> usize {
        self.system.n_vars()
    }

    pub fn k(&self) -> usize {
        self.system.k()
    }

    /// Number of deformation parameters (= dimension of z-space).
    pub fn ks(&self) -> usize {
        self.deformed.len()
    }

    /// `M = N + m`
    pub fn big_m(&self) -> usize {
        self.n() + self.m
    }

    pub fn var_count(&self) -> usize {
        self.var_labels.len()
    }

    pub fn var_name(&self, v: VarLabel) -> String {
        match v {
            VarLabel::X(i) => self.system.names[i].clone(),
            VarLabel::Aux(j) => format!("x'{}", j + 1),
            VarLabel::S(j) => format!("s{}", j + 1),
            VarLabel::Y(q) => format!("y{}", q + 1),
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        self.var_labels.iter().map(|&v| self.var_name(v)).collect()
    }

    pub fn col_of(&self, v: VarLabel) -> Option<usize> {
        self.var_labels.iter().position(|&w| w == v)
    }

    /// Term index of `y_q s_q` for deformation parameter `j`.
    pub fn s_term(&self, j: usize) -> usize {
        let q = self.deformed[j];
        self.kinds.iter().position(|k| *k == TermKind::Deform { poly: q }).expect("deform term present")
    }

    pub fn s_index_of_poly(&self, q: usize) -> Option<usize> {
        self.deformed.iter().position(|&p| p == q)
    }

    /// Term indices belonging to polynomial `q`, in order.
    pub fn block(&self, q: usize) -> Vec<usize> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| match k {
                TermKind::Monomial { poly, .. } | TermKind::Deform { poly } => *poly == q,
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn term_label(&self, a: usize) -> String {
        let names = self.var_names();
        let parts: Vec<String> = self.rows[a]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() { "1".into() } else { parts.join("*") }
    }
}

fn phase_layout(sys: &LaurentSystem, m: usize) -> (Vec<TermKind>, Vec<VarLabel>, Vec<usize>) {
    let mut kinds = Vec::new();
    let mut deformed = Vec::new();
    for (q, p) in sys.polys.iter().enumerate() {
        for i in 0..p.monomials.len() {
            kinds.push(TermKind::Monomial { poly: q, index: i });
        }
        if p.deformed {
            kinds.push(TermKind::Deform { poly: q });
            deformed.push(q);
        }
    }
    let mut labels: Vec<VarLabel> = (0..sys.n_vars()).map(VarLabel::X).collect();
    labels.extend((0..m).map(VarLabel::Aux));
    labels.extend((0..deformed.len()).map(VarLabel::S));
    labels.extend((0..sys.k()).map(VarLabel::Y));
    (kinds, labels, deformed)
}

fn check_rules(sys: &LaurentSystem, kinds: &[TermKind], placement: &AuxPlacement) -> Result<(), PhaseError> {
    let mut modified = BTreeSet::new();
    for &t in &placement.assignments {
        match kinds.get(t) {
            Some(TermKind::Monomial { .. }) => {}
            _ => return Err(PhaseError::PlacementRange { index: t }),
        }
        if !modified.insert(t) {
            return Err(PhaseError::PlacementDuplicate { index: t });
        }
    }
    // rule a: each variable keeps at least one unmodified monomial that involves it
    for i in 0..sys.n_vars() {
        let mut involved = kinds.iter().enumerate().filter_map(|(t, k)| match k {
            TermKind::Monomial { poly, index } if sys.polys[*poly].monomials[*index][i] != 0 => Some(t),
            _ => None,
        });
        let mut any = false;
        let mut free = false;
        for t in involved.by_ref() {
            any = true;
            if !modified.contains(&t) {
                free = true;
            }
        }
        if any && !free {
            return Err(PhaseError::RuleA { var: sys.names[i].clone() });
        }
    }
    // rule b: each polynomial keeps at least one unmodified monomial
    for q in 0..sys.k() {
        let free = kinds.iter().enumerate().any(|(t, k)| {
            matches!(k, TermKind::Monomial { poly, .. } if *poly == q) && !modified.contains(&t)
        });
        if !free {
            return Err(PhaseError::RuleB { poly: q + 1 });
        }
    }
    Ok(())
}

pub fn build_phase(sys: &LaurentSystem, placement: &AuxPlacement) -> Result<PhaseFunction, PhaseError> {
    sys.validate()?;
    let m = placement.assignments.len();
    let (kinds, var_labels, deformed) = phase_layout(sys, m);
    check_rules(sys, &kinds, placement)?;
    let n = sys.n_vars();
    let ks = deformed.len();
    let nv = var_labels.len();
    let mut rows = Vec::with_capacity(kinds.len());
    for (t, kind) in kinds.iter().enumerate() {
        let mut r = vec![0i64; nv];
        let q = match *kind {
            TermKind::Monomial { poly, index } => {
                r[..n].copy_from_slice(&sys.polys[poly].monomials[index]);
                poly
            }
            TermKind::Deform { poly } => {
                let j = deformed.iter().position(|&p| p == poly).unwrap();
                r[n + m + j] = 1;
                poly
            }
        };
        r[n + m + ks + q] = 1;
        if let Some(j) = placement.assignments.iter().position(|&a| a == t) {
            r[n + j] = 1;
        }
        rows.push(r);
    }
    let l = rows.len();
    let balance = match l.cmp(&nv) {
        std::cmp::Ordering::Less => Balance::Abundant,
        std::cmp::Ordering::Equal => Balance::Square,
        std::cmp::Ordering::Greater => Balance::Deficient,
    };
    Ok(PhaseFunction { system: sys.clone(), placement: placement.clone(), kinds, rows, var_labels, m, balance, deformed })
}

/// The square exponent matrix with its exact inverse data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyMatrix {
    pub l: IntMatrix,
    pub det: Int,
    pub delta: Int,
    /// `t / delta = l^{-1}`
    pub t: IntMatrix,
    pub inv: RatMatrix,
    pub var_labels: Vec<VarLabel>,
    pub phase: PhaseFunction,
}

impl CayleyMatrix {
    pub fn size(&self) -> usize {
        self.l.nrows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det.is_zero()
    }

    /// Row of `l^{-1}` belonging to variable `v`.
    pub fn inv_row(&self, v: VarLabel) -> Option<&[crate::linalg::Rat]> {
        self.phase.col_of(v).map(|i| self.inv.row(i))
    }
}

pub fn cayley_matrix(phase: &PhaseFunction) -> Result<CayleyMatrix, PhaseError> {
    if phase.balance != Balance::Square {
        return Err(PhaseError::NotSquare {
            balance: phase.balance.to_string(),
            terms: phase.len(),
            vars: phase.var_count(),
        });
    }
    let l = IntMatrix::from_i64(&phase.rows)?;
    let d = det(&l)?;
    if d.is_zero() {
        return Err(PhaseError::Degenerate);
    }
    let (delta, t) = scaled_inverse(&l)?;
    let inv = inverse(&l)?;
    Ok(CayleyMatrix { l, det: d, delta, t, inv, var_labels: phase.var_labels.clone(), phase: phase.clone() })
}

/// `det != 0` certificate for an arbitrary square exponent matrix.
pub fn check_nondegenerate(l: &IntMatrix) -> bool {
    l.is_square() && det(l).map(|d| !d.is_zero()).unwrap_or(false)
}

/// First admissible nondegenerate placement in lexicographic order of the
/// monomial terms (blocks in input order).
pub fn auto_placement(sys: &LaurentSystem) -> Result<AuxPlacement, PhaseError> {
    sys.validate()?;
    let terms = sys.term_count();
    let base = sys.n_vars() + sys.deformed_count() + sys.k();
    if terms < base {
        return Err(PhaseError::Abundant { terms, vars: base });
    }
    let m = terms - base;
    let (kinds, _, _) = phase_layout(sys, m);
    let eligible: Vec<usize> =
        kinds.iter().enumerate().filter(|(_, k)| matches!(k, TermKind::Monomial { .. })).map(|(i, _)| i).collect();
    for combo in crate::util::combinations(eligible.len(), m) {
        let placement = AuxPlacement::new(combo.iter().map(|&i| eligible[i]).collect());
        let Ok(phase) = build_phase(sys, &placement) else { continue };
        match cayley_matrix(&phase) {
            Ok(_) => return Ok(placement),
            Err(PhaseError::Degenerate) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(PhaseError::NotSimpliciable)
}

/// Convenience: explicit placement if given, otherwise the automatic one.
pub fn cayley_for(sys: &LaurentSystem, placement: Option<&AuxPlacement>) -> Result<CayleyMatrix, PhaseError> {
    let p = match placement {
        Some(p) => p.clone(),
        None => auto_placement(sys)?,
    };
    cayley_matrix(&build_phase(sys, &p)?)
}

/// Auxiliary-variable count `(N-1)(k-1)-1` for two-term-free pure-power systems.
pub fn acampo_aux_count(n: usize, k: usize) -> i64 {
    (n as i64 - 1) * (k as i64 - 1) - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn acampo_is_square() {
        let sys = LaurentSystem::pure_powers(&[vec![3, 2], vec![2, 3]]).unwrap();
        let ph = build_phase(&sys, &AuxPlacement::empty()).unwrap();
        assert_eq!(ph.balance, Balance::Square);
        let cm = cayley_matrix(&ph).unwrap();
        assert_eq!(cm.det, int(5));
        assert_eq!(cm.delta, int(5));
    }

    #[test]
    fn rule_b_violation() {
        let sys = LaurentSystem::from_exponents(&[vec![vec![1]]]).unwrap();
        let err = build_phase(&sys, &AuxPlacement::new(vec![0])).unwrap_err();
        assert!(matches!(err, PhaseError::RuleA { .. } | PhaseError::RuleB { .. }));
    }
}
