//! Linear forms attached to the columns of `L^{-1}` and the Γ-product they
//! assemble into, compared modulo Δ-periodic factors.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cayley::{CayleyMatrix, VarLabel};
use crate::error::MellinError;
use crate::linalg::{int, rat_int, solve, Int, Rat, RatMatrix};

/// `L_a = ( sum A_i (J_i+1) + sum C_j (J'_j+1) + sum B_q z_q + sum D_l (zeta_l+1) ) / delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub delta: Int,
    pub a: Vec<Int>,
    pub c: Vec<Int>,
    pub b: Vec<Int>,
    pub d: Vec<Int>,
}

impl LinearForm {
    fn q(&self, v: &Int) -> Rat {
        Rat::new(v.clone(), self.delta.clone())
    }

    pub fn coeff_j(&self) -> Vec<Rat> {
        self.a.iter().map(|v| self.q(v)).collect()
    }

    pub fn coeff_jaux(&self) -> Vec<Rat> {
        self.c.iter().map(|v| self.q(v)).collect()
    }

    pub fn coeff_z(&self) -> Vec<Rat> {
        self.b.iter().map(|v| self.q(v)).collect()
    }

    pub fn coeff_zeta(&self) -> Vec<Rat> {
        self.d.iter().map(|v| self.q(v)).collect()
    }

    /// gcd of all integer coefficients together with delta.
    pub fn content(&self) -> Int {
        self.a.iter().chain(&self.c).chain(&self.b).chain(&self.d).fold(self.delta.clone(), |g, v| g.gcd(v))
    }

    /// Substitute integral J, J', zeta; z stays symbolic.
    pub fn eval(&self, j: &[Int], jaux: &[Int], zeta: &[Int]) -> Result<AffineZ, MellinError> {
        check_len("J", j.len(), self.a.len())?;
        check_len("J'", jaux.len(), self.c.len())?;
        check_len("zeta", zeta.len(), self.d.len())?;
        let mut num = Int::zero();
        for (c, v) in self.a.iter().zip(j) {
            num += c * (v + 1);
        }
        for (c, v) in self.c.iter().zip(jaux) {
            num += c * (v + 1);
        }
        for (c, v) in self.d.iter().zip(zeta) {
            num += c * (v + 1);
        }
        Ok(AffineZ { c0: Rat::new(num, self.delta.clone()), cz: self.coeff_z() })
    }

    /// Value at J = J' = zeta = 0.
    pub fn at_origin(&self) -> AffineZ {
        let z = |n: usize| vec![Int::zero(); n];
        self.eval(&z(self.a.len()), &z(self.c.len()), &z(self.d.len())).expect("lengths match")
    }
}

fn check_len(name: &'static str, got: usize, want: usize) -> Result<(), MellinError> {
    if got != want {
        return Err(MellinError::ParamLength { name, got, want });
    }
    Ok(())
}

/// Affine function `c0 + sum cz_i z_i` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineZ {
    pub cz: Vec<Rat>,
    pub c0: Rat,
}

impl AffineZ {
    pub fn new(c0: Rat, cz: Vec<Rat>) -> Self {
        AffineZ { c0, cz }
    }

    pub fn constant(nz: usize, c: Rat) -> Self {
        AffineZ { c0: c, cz: vec![Rat::zero(); nz] }
    }

    /// `z_i`
    pub fn var(nz: usize, i: usize) -> Self {
        let mut cz = vec![Rat::zero(); nz];
        cz[i] = Rat::one();
        AffineZ { c0: Rat::zero(), cz }
    }

    pub fn nz(&self) -> usize {
        self.cz.len()
    }

    pub fn is_constant(&self) -> bool {
        self.cz.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        AffineZ { c0: &self.c0 + &o.c0, cz: self.cz.iter().zip(&o.cz).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        AffineZ { c0: &self.c0 * s, cz: self.cz.iter().map(|c| c * s).collect() }
    }

    pub fn shift(&self, s: &Rat) -> Self {
        AffineZ { c0: &self.c0 + s, cz: self.cz.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// `1 - self`
    pub fn reflect(&self) -> Self {
        self.neg().shift(&Rat::one())
    }

    pub fn eval(&self, z: &[Rat]) -> Rat {
        self.cz.iter().zip(z).fold(self.c0.clone(), |acc, (c, v)| acc + c * v)
    }

    /// Leading nonzero z-coefficient is positive.
    pub fn is_positive_oriented(&self) -> bool {
        self.cz.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (c, n) in self.cz.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let s = if c.is_one() {
                n.clone()
            } else if *c == -Rat::one() {
                format!("-{n}")
            } else {
                format!("{c}*{n}")
            };
            parts.push(s);
        }
        if !self.c0.is_zero() || parts.is_empty() {
            parts.push(self.c0.to_string());
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    fn default_names(&self) -> Vec<String> {
        (1..=self.cz.len()).map(|i| format!("z{i}")).collect()
    }
}

impl fmt::Display for AffineZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&self.default_names()))
    }
}

/// Formal `prod Γ(l)^{e_l}` modulo Δ-periodic factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaProduct {
    pub nz: usize,
    pub delta: Int,
    pub factors: BTreeMap<AffineZ, i64>,
}

impl GammaProduct {
    pub fn new(nz: usize, delta: Int) -> Self {
        GammaProduct { nz, delta, factors: BTreeMap::new() }
    }

    pub fn from_parts(nz: usize, delta: Int, num: &[AffineZ], den: &[AffineZ]) -> Self {
        let mut g = Self::new(nz, delta);
        for l in num {
            g.push(l.clone(), 1);
        }
        for l in den {
            g.push(l.clone(), -1);
        }
        g.canonical()
    }

    pub fn push(&mut self, l: AffineZ, mult: i64) {
        *self.factors.entry(l).or_insert(0) += mult;
    }

    /// Reflection-canonical representative: every Γ(l) with a leading negative
    /// z-coefficient becomes Γ(1-l)^{-1}; z-free factors are constants and dropped.
    pub fn canonical(&self) -> Self {
        let mut out = BTreeMap::new();
        for (l, &e) in &self.factors {
            if e == 0 || l.is_constant() {
                continue;
            }
            let (key, mult) = if l.is_positive_oriented() { (l.clone(), e) } else { (l.reflect(), -e) };
            *out.entry(key).or_insert(0) += mult;
        }
        out.retain(|_, e| *e != 0);
        GammaProduct { nz: self.nz, delta: self.delta.clone(), factors: out }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut g = self.clone();
        for (l, &e) in &o.factors {
            g.push(l.clone(), e);
        }
        g.canonical()
    }

    pub fn numerator(&self) -> Vec<(AffineZ, i64)> {
        self.factors.iter().filter(|(_, &e)| e > 0).map(|(l, &e)| (l.clone(), e)).collect()
    }

    pub fn denominator(&self) -> Vec<(AffineZ, i64)> {
        self.factors.iter().filter(|(_, &e)| e < 0).map(|(l, &e)| (l.clone(), -e)).collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        let side = |v: Vec<(AffineZ, i64)>| -> String {
            if v.is_empty() {
                return "1".into();
            }
            v.iter()
                .map(|(l, e)| {
                    let g = format!("Γ({})", l.render(names));
                    if *e == 1 { g } else { format!("{g}^{e}") }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let num = side(self.numerator());
        let den = self.denominator();
        if den.is_empty() { num } else { format!("{num} / ({})", side(den)) }
    }
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nz).map(|i| format!("z{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Equality modulo the reflection involution and Δ-periodic (constant) factors.
pub fn gamma_equivalent(g1: &GammaProduct, g2: &GammaProduct) -> bool {
    g1.nz == g2.nz && g1.canonical().factors == g2.canonical().factors
}

/// Form `a` reads column `a` of `L^{-1}`, split by variable kind.
pub fn linear_forms(cm: &CayleyMatrix) -> Vec<LinearForm> {
    let ph = &cm.phase;
    let pick = |label: fn(usize) -> VarLabel, count: usize, a: usize| -> Vec<Int> {
        (0..count).map(|i| cm.t.get(ph.col_of(label(i)).unwrap(), a).clone()).collect()
    };
    (0..cm.size())
        .map(|a| LinearForm {
            delta: cm.delta.clone(),
            a: pick(VarLabel::X, ph.n(), a),
            c: pick(VarLabel::Aux, ph.m, a),
            b: pick(VarLabel::S, ph.ks(), a),
            d: pick(VarLabel::Y, ph.k(), a),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRuleReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Column sums of A, B, C vanish and the D sums equal delta, i.e.
/// `sum_a L_a = zeta_1 + ... + zeta_k + k` identically.
pub fn verify_sum_rules(forms: &[LinearForm]) -> SumRuleReport {
    let mut failures = Vec::new();
    let Some(f0) = forms.first() else {
        return SumRuleReport { ok: true, failures };
    };
    let delta = f0.delta.clone();
    let mut check = |name: &str, get: &dyn Fn(&LinearForm) -> &Vec<Int>, want: &Int| {
        for i in 0..get(f0).len() {
            let s: Int = forms.iter().map(|f| get(f)[i].clone()).sum();
            if s != *want {
                failures.push(format!("sum of {name}_{} over terms is {s}/{delta}, expected {want}/{delta}", i + 1));
            }
        }
    };
    let zero = Int::zero();
    check("A", &|f| &f.a, &zero);
    check("C", &|f| &f.c, &zero);
    check("B", &|f| &f.b, &zero);
    check("D", &|f| &f.d, &delta);
    SumRuleReport { ok: failures.is_empty(), failures }
}

/// Sum of all forms as an affine function of z at given J, zeta; should be `sum zeta + k`.
pub fn form_sum(forms: &[LinearForm], j: &[Int], jaux: &[Int], zeta: &[Int]) -> Result<AffineZ, MellinError> {
    let nz = forms.first().map_or(0, |f| f.b.len());
    let mut acc = AffineZ::constant(nz, Rat::zero());
    for f in forms {
        acc = acc.add(&f.eval(j, jaux, zeta)?);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSets {
    pub i_plus: Vec<Vec<usize>>,
    pub i_minus: Vec<Vec<usize>>,
    pub i_zero: Vec<Vec<usize>>,
    pub j_plus: Vec<Vec<usize>>,
    pub j_minus: Vec<Vec<usize>>,
    pub j_zero: Vec<Vec<usize>>,
}

fn split_by_sign(forms: &[LinearForm], get: impl Fn(&LinearForm) -> &Int) -> [Vec<usize>; 3] {
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for (a, f) in forms.iter().enumerate() {
        let v = get(f);
        let slot = if v.is_positive() {
            0
        } else if v.is_negative() {
            1
        } else {
            2
        };
        out[slot].push(a);
    }
    out
}

/// Term indices (0-based) split by the sign of `B_q^a` (and `C_r^a`).
pub fn index_sets(forms: &[LinearForm]) -> IndexSets {
    let nz = forms.first().map_or(0, |f| f.b.len());
    let m = forms.first().map_or(0, |f| f.c.len());
    let mut s = IndexSets {
        i_plus: vec![],
        i_minus: vec![],
        i_zero: vec![],
        j_plus: vec![],
        j_minus: vec![],
        j_zero: vec![],
    };
    for q in 0..nz {
        let [p, n, z] = split_by_sign(forms, |f| &f.b[q]);
        s.i_plus.push(p);
        s.i_minus.push(n);
        s.i_zero.push(z);
    }
    for r in 0..m {
        let [p, n, z] = split_by_sign(forms, |f| &f.c[r]);
        s.j_plus.push(p);
        s.j_minus.push(n);
        s.j_zero.push(z);
    }
    s
}

/// Γ-product of all forms with J, J', zeta substituted.
pub fn gamma_product(forms: &[LinearForm], j: &[Int], jaux: &[Int], zeta: &[Int]) -> Result<GammaProduct, MellinError> {
    let nz = forms.first().map_or(0, |f| f.b.len());
    let delta = forms.first().map_or_else(Int::one, |f| f.delta.clone());
    let mut g = GammaProduct::new(nz, delta);
    for f in forms {
        g.push(f.eval(j, jaux, zeta)?, 1);
    }
    Ok(g.canonical())
}

/// Γ-product at J = J' = zeta = 0.
pub fn gamma_product_at_origin(forms: &[LinearForm]) -> GammaProduct {
    let f0 = &forms[0];
    let zeros = |n: usize| vec![Int::zero(); n];
    gamma_product(forms, &zeros(f0.a.len()), &zeros(f0.c.len()), &zeros(f0.d.len())).expect("lengths match")
}

/// One generating family of poles: `{ z : L_a(z) = -n_a, a in subset, n_a >= 0 }`
/// = `base + sum n_a * directions[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleFamily {
    pub subset: Vec<usize>,
    pub base: Vec<Rat>,
    pub directions: Vec<Vec<Rat>>,
}

impl PoleFamily {
    /// Point of the family with the given nonnegative shifts.
    pub fn point(&self, shifts: &[i64]) -> Vec<Rat> {
        let mut p = self.base.clone();
        for (d, &n) in self.directions.iter().zip(shifts) {
            for (pi, di) in p.iter_mut().zip(d) {
                *pi += di * Rat::from_integer(int(n));
            }
        }
        p
    }
}

/// Generating pole families for block `q`: every `nz`-subset of `I+_q` whose
/// z-parts are independent gives a lattice cone of common poles.
pub fn support_q(
    forms: &[LinearForm],
    sets: &IndexSets,
    j: &[Int],
    jaux: &[Int],
    zeta: &[Int],
    q: usize,
) -> Result<Vec<PoleFamily>, MellinError> {
    let plus = sets.i_plus.get(q).ok_or(MellinError::BlockIndex(q))?;
    let nz = forms.first().map_or(0, |f| f.b.len());
    let affs: Vec<AffineZ> = plus.iter().map(|&a| forms[a].eval(j, jaux, zeta)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for subset in crate::util::combinations(plus.len(), nz) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| affs[i].cz.clone()).collect();
        let mat = RatMatrix::from_rows(rows).expect("rectangular");
        let Ok(inv) = crate::linalg::inverse_rat(&mat) else { continue };
        let rhs: Vec<Rat> = subset.iter().map(|&i| -affs[i].c0.clone()).collect();
        let base = solve(&mat, &rhs).expect("invertible");
        // L(z) = -n  =>  z = base - inv * n
        let directions = (0..nz).map(|c| inv.col(c).iter().map(|v| -v.clone()).collect()).collect();
        out.push(PoleFamily { subset: subset.iter().map(|&i| plus[i]).collect(), base, directions });
    }
    Ok(out)
}

/// `z -> value of each form` helper used by several modules.
pub fn eval_all(affs: &[AffineZ], z: &[Rat]) -> Vec<Rat> {
    affs.iter().map(|l| l.eval(z)).collect()
}

/// Rational number helper for tests and reports.
pub fn ratio(n: i64, d: i64) -> Rat {
    rat_int(&int(n)) / rat_int(&int(d))
}
