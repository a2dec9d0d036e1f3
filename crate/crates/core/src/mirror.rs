//! Projective (Givental-type) systems and the transpose mirror construction:
//! weights, the pair `(X, ^T X)`, Γ-expressions in the block variables ξ,
//! Poincaré / monodromy / Euler series and the magic-square condition.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cayley::{build_phase, cayley_matrix, AuxPlacement, CayleyMatrix, LaurentSystem, Polynomial, TermKind, VarLabel};
use crate::error::MirrorError;
use crate::linalg::{self, int, Int, IntMatrix, Rat, RatMatrix};
use crate::mellin::{gamma_product_at_origin, linear_forms, AffineZ, GammaProduct};
use crate::poly::{cyclotomic_ratio, MPoly, RatFunc};
use crate::util::{combinations, permutations};

/// `f_0 = x_0 ... x_n + s`, `f_ν = Σ_{j in block ν} x_j + 1` with consecutive
/// blocks of sizes `ells`.
pub fn givental_system(n: usize, ells: &[usize]) -> Result<LaurentSystem, MirrorError> {
    if ells.is_empty() || ells.contains(&0) || ells.iter().sum::<usize>() != n + 1 {
        return Err(MirrorError::Input(format!("block sizes {ells:?} must be positive and sum to n+1 = {}", n + 1)));
    }
    let nv = n + 1;
    let names = (0..nv).map(|i| format!("x{i}")).collect();
    let mut polys = vec![Polynomial { monomials: vec![vec![1; nv]], deformed: true }];
    let mut start = 0;
    for &l in ells {
        let mut monomials: Vec<Vec<i64>> = (start..start + l)
            .map(|j| {
                let mut e = vec![0; nv];
                e[j] = 1;
                e
            })
            .collect();
        monomials.push(vec![0; nv]);
        polys.push(Polynomial { monomials, deformed: false });
        start += l;
    }
    Ok(LaurentSystem::new(names, polys)?)
}

pub fn build_projective(n: usize, ells: &[usize]) -> Result<CayleyMatrix, MirrorError> {
    let sys = givental_system(n, ells)?;
    Ok(cayley_matrix(&build_phase(&sys, &AuxPlacement::empty())?)?)
}

/// `Γ(z)^{n+1} / Π Γ(ℓ_ν z)`
pub fn givental_expected(n: usize, ells: &[usize]) -> GammaProduct {
    let z = AffineZ::var(1, 0);
    let mut g = GammaProduct::new(1, Int::one());
    g.push(z.clone(), n as i64 + 1);
    for &l in ells {
        g.push(z.scale(&Rat::from_integer(int(l as i64))), -1);
    }
    g.canonical()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MirrorInput {
    pub names: Vec<String>,
    /// `n x n`; row `r` is the exponent of the `r`-th monomial
    pub l_lambda: IntMatrix,
    /// `I^{(q)}`: variables of the product term of `f_{2q}`
    pub partition: Vec<Vec<usize>>,
    /// rows of `L_Λ` forming `f_{2ν-1}`
    pub row_blocks: Vec<Vec<usize>>,
}

fn check_cover(blocks: &[Vec<usize>], n: usize, what: &str) -> Result<(), MirrorError> {
    let mut seen = BTreeSet::new();
    for b in blocks {
        if b.is_empty() {
            return Err(MirrorError::Input(format!("empty {what} block")));
        }
        for &i in b {
            if i >= n || !seen.insert(i) {
                return Err(MirrorError::Input(format!("{what} blocks must partition 0..{n}")));
            }
        }
    }
    if seen.len() != n {
        return Err(MirrorError::Input(format!("{what} blocks must cover 0..{n}")));
    }
    Ok(())
}

impl MirrorInput {
    /// Consecutive row blocks of sizes `tau`.
    pub fn new(l_lambda: IntMatrix, partition: Vec<Vec<usize>>, tau: &[usize]) -> Result<Self, MirrorError> {
        let mut row_blocks = Vec::new();
        let mut start = 0;
        for &t in tau {
            row_blocks.push((start..start + t).collect());
            start += t;
        }
        let names = (1..=l_lambda.nrows()).map(|i| format!("x{i}")).collect();
        Self::with_blocks(names, l_lambda, partition, row_blocks)
    }

    pub fn with_blocks(
        names: Vec<String>,
        l_lambda: IntMatrix,
        partition: Vec<Vec<usize>>,
        row_blocks: Vec<Vec<usize>>,
    ) -> Result<Self, MirrorError> {
        let n = l_lambda.nrows();
        if !l_lambda.is_square() || names.len() != n {
            return Err(MirrorError::Input("L_Λ must be n x n with n names".into()));
        }
        if partition.len() != row_blocks.len() {
            return Err(MirrorError::Input("partition and row blocks differ in number".into()));
        }
        check_cover(&partition, n, "partition")?;
        check_cover(&row_blocks, n, "row")?;
        if linalg::det(&l_lambda)?.is_zero() {
            return Err(MirrorError::Input("L_Λ is singular".into()));
        }
        Ok(MirrorInput { names, l_lambda, partition, row_blocks })
    }

    /// Read the transpose-ready shape off a system: `f_{2q-1}` deformed, `f_{2q} = Π_{I^{(q)}} x + 1`.
    pub fn from_system(sys: &LaurentSystem, partition: &[Vec<usize>]) -> Result<Self, MirrorError> {
        let k = partition.len();
        let n = sys.n_vars();
        if sys.k() != 2 * k {
            return Err(MirrorError::Input(format!("expected {} polynomials for {k} blocks", 2 * k)));
        }
        let mut rows = Vec::new();
        let mut row_blocks = Vec::new();
        for q in 0..k {
            let odd = &sys.polys[2 * q];
            let even = &sys.polys[2 * q + 1];
            if !odd.deformed || even.deformed {
                return Err(MirrorError::Input(format!("block {}: odd polynomial deformed, even not", q + 1)));
            }
            row_blocks.push((rows.len()..rows.len() + odd.monomials.len()).collect());
            rows.extend(odd.monomials.iter().cloned());
            let mut prod = vec![0; n];
            for &i in &partition[q] {
                if i < n {
                    prod[i] = 1;
                }
            }
            let want: BTreeSet<Vec<i64>> = [prod, vec![0; n]].into_iter().collect();
            let got: BTreeSet<Vec<i64>> = even.monomials.iter().cloned().collect();
            if want != got {
                return Err(MirrorError::Input(format!("polynomial {} is not the product over I^({}) plus 1", 2 * q + 2, q + 1)));
            }
        }
        if rows.len() != n {
            return Err(MirrorError::Input(format!("{} monomials in odd polynomials, expected {n}", rows.len())));
        }
        Self::with_blocks(sys.names.clone(), IntMatrix::from_i64(&rows)?, partition.to_vec(), row_blocks)
    }

    pub fn n(&self) -> usize {
        self.l_lambda.nrows()
    }

    pub fn k(&self) -> usize {
        self.partition.len()
    }

    pub fn tau(&self) -> Vec<usize> {
        self.row_blocks.iter().map(Vec::len).collect()
    }

    pub fn tau_tilde(&self) -> Vec<usize> {
        self.partition.iter().map(Vec::len).collect()
    }

    /// `V^Λ`, `n x k` indicator columns of the partition.
    pub fn v_lambda(&self) -> IntMatrix {
        let mut v = IntMatrix::zeros(self.n(), self.k());
        for (q, b) in self.partition.iter().enumerate() {
            for &i in b {
                v.set(i, q, int(1));
            }
        }
        v
    }

    /// Block of `I^{(q)}` containing index `i` (rows are read as variable indices).
    pub fn partition_of(&self, i: usize) -> usize {
        self.partition.iter().position(|b| b.contains(&i)).expect("indices covered")
    }

    pub fn row_block_of(&self, r: usize) -> usize {
        self.row_blocks.iter().position(|b| b.contains(&r)).expect("rows covered")
    }

    pub fn system(&self) -> LaurentSystem {
        let n = self.n();
        let rows = self.l_lambda.to_i64_rows().expect("small exponents");
        let mut polys = Vec::new();
        for q in 0..self.k() {
            polys.push(Polynomial { monomials: self.row_blocks[q].iter().map(|&r| rows[r].clone()).collect(), deformed: true });
            let mut prod = vec![0; n];
            for &i in &self.partition[q] {
                prod[i] = 1;
            }
            polys.push(Polynomial { monomials: vec![prod, vec![0; n]], deformed: false });
        }
        LaurentSystem { names: self.names.clone(), polys }
    }

    pub fn cayley(&self) -> Result<CayleyMatrix, MirrorError> {
        Ok(cayley_matrix(&build_phase(&self.system(), &AuxPlacement::empty())?)?)
    }

    /// `^T L_Λ = ^t L_Λ`; the roles of partition and row blocks swap.
    pub fn transpose(&self) -> MirrorInput {
        MirrorInput {
            names: self.names.clone(),
            l_lambda: self.l_lambda.transpose(),
            partition: self.row_blocks.clone(),
            row_blocks: self.partition.clone(),
        }
    }

    /// Term index of the monomial for row `r`.
    fn term_of_row(&self, cm: &CayleyMatrix, r: usize) -> usize {
        let nu = self.row_block_of(r);
        let pos = self.row_blocks[nu].iter().position(|&x| x == r).unwrap();
        cm.phase.kinds.iter().position(|k| *k == TermKind::Monomial { poly: 2 * nu, index: pos }).expect("term present")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightData {
    /// `g^{(q)}`, one row per block
    pub g: Vec<Vec<i64>>,
    /// `Q̂[q][ν] = Q^{(q)}_ν`
    pub q_hat: Vec<Vec<i64>>,
    /// diagonal of `G`: weight of each variable
    pub g_diag: Vec<i64>,
    /// `g^{(q)}_{τ_q+1} = Q^{(q)}_q`
    pub extended: Vec<i64>,
    /// `Σ_ν Q^{(q)}_ν = Σ_i g^{(q)}_i`, reported only
    pub calabi_yau: Vec<bool>,
}

fn primitive_i64(v: &[Rat]) -> Option<Vec<i64>> {
    let (ints, _) = linalg::clear_denominators(v);
    let p = linalg::primitive(&ints);
    p.iter().map(|x| x.to_i64()).collect()
}

/// Weight vectors: `L_Λ g` constant on each row block, equal there to the
/// degree of the product term of that block; extreme rays of the positive cone.
pub fn weights(mi: &MirrorInput) -> Result<WeightData, MirrorError> {
    let n = mi.n();
    let k = mi.k();
    let linv = linalg::inverse(&mi.l_lambda)?;
    let mut b = RatMatrix::zeros(n, k);
    for (nu, blk) in mi.row_blocks.iter().enumerate() {
        for &r in blk {
            b.set(r, nu, Rat::one());
        }
    }
    // g = M c
    let m = linv.mul(&b)?;
    let vt = mi.v_lambda().transpose().to_rat();
    let mut cons = vt.mul(&m)?;
    for i in 0..k {
        let v = cons.get(i, i) - Rat::one();
        cons.set(i, i, v);
    }
    let basis = linalg::nullspace(&cons);
    let d = basis.len();
    if d == 0 {
        return Err(MirrorError::Weight(0));
    }
    let s = RatMatrix::from_rows((0..k).map(|i| basis.iter().map(|v| v[i].clone()).collect()).collect())?;
    let ms = m.mul(&s)?;
    let mut rays: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut consider = |mu: Vec<Rat>| {
        for sign in [1i64, -1] {
            let mu_s: Vec<Rat> = mu.iter().map(|x| x * Rat::from_integer(int(sign))).collect();
            let g = ms.mul_vec(&mu_s);
            if g.iter().all(|x| !x.is_negative()) && g.iter().any(|x| !x.is_zero()) {
                if let Some(p) = primitive_i64(&g) {
                    rays.insert(p);
                }
            }
        }
    };
    if d == 1 {
        consider(vec![Rat::one()]);
    } else {
        for tight in combinations(n, d - 1) {
            let sub = RatMatrix::from_rows(tight.iter().map(|&r| ms.row(r).to_vec()).collect())?;
            let ns = linalg::nullspace(&sub);
            if ns.len() == 1 {
                consider(ns[0].clone());
            }
        }
    }
    if rays.len() != k {
        return Err(MirrorError::Weight(rays.len().min(k.saturating_sub(1))));
    }
    let rays: Vec<Vec<i64>> = rays.into_iter().collect();
    let degree = |g: &[i64], blk: &[usize]| -> i64 { blk.iter().map(|&i| g[i]).sum() };
    for perm in permutations(k) {
        let g: Vec<Vec<i64>> = perm.iter().map(|&i| rays[i].clone()).collect();
        let q_hat: Vec<Vec<i64>> = g.iter().map(|gq| mi.partition.iter().map(|blk| degree(gq, blk)).collect()).collect();
        if (0..k).any(|q| q_hat[q][q] <= 0) {
            continue;
        }
        if linalg::rank_int(&IntMatrix::from_i64(&q_hat)?) < k {
            continue;
        }
        let mut g_diag = vec![0; n];
        for gq in &g {
            for (i, &w) in gq.iter().enumerate() {
                if w != 0 {
                    g_diag[i] = w;
                }
            }
        }
        let extended = (0..k).map(|q| q_hat[q][q]).collect();
        let calabi_yau = (0..k).map(|q| q_hat[q].iter().sum::<i64>() == g[q].iter().sum::<i64>()).collect();
        return Ok(WeightData { g, q_hat, g_diag, extended, calabi_yau });
    }
    Err(MirrorError::Condition { which: "rank", detail: "no block assignment gives rank(Q̂) = k".into() })
}

/// Affine ξ-forms `Ξ = ^t L^{-1} (1,…,1,z)` at `J = ζ = 0`.
pub fn xi_forms(cm: &CayleyMatrix) -> Vec<AffineZ> {
    linear_forms(cm).iter().map(|f| f.at_origin()).collect()
}

/// ξ at the `y s`-term and the product term is `z_ν`; at the constant term `1 - z_ν`.
pub fn check_distinguished_xi(cm: &CayleyMatrix) -> Result<(), MirrorError> {
    let xi = xi_forms(cm);
    let ph = &cm.phase;
    let nz = ph.ks();
    for (nu, &p) in ph.deformed.iter().enumerate() {
        let z = AffineZ::var(nz, nu);
        let one_minus = z.neg().shift(&Rat::one());
        let st = ph.s_term(nu);
        if xi[st] != z {
            return Err(MirrorError::Structure(format!("ξ at s-term of block {} is {}", nu + 1, xi[st])));
        }
        let next = p + 1;
        let poly = ph.system.polys.get(next).ok_or_else(|| MirrorError::Structure("missing companion polynomial".into()))?;
        for t in ph.block(next) {
            let TermKind::Monomial { index, .. } = ph.kinds[t] else { continue };
            let is_const = poly.monomials[index].iter().all(|&e| e == 0);
            let want = if is_const { &one_minus } else { &z };
            if xi[t] != *want {
                return Err(MirrorError::Structure(format!("ξ at term {} is {}, expected {}", t + 1, xi[t], want)));
            }
        }
    }
    Ok(())
}

/// Solve `ξ_{term(i)} = w_i ξ^{(block(i))}` for the block forms; `None` if inconsistent.
pub fn factor_xi(xi: &[AffineZ], terms: &[usize], w: &[i64], block: &[usize], k: usize) -> Option<Vec<AffineZ>> {
    let mut out: Vec<Option<AffineZ>> = vec![None; k];
    for i in 0..terms.len() {
        if w[i] == 0 {
            return None;
        }
        let cand = xi[terms[i]].scale(&(Rat::one() / Rat::from_integer(int(w[i]))));
        match &out[block[i]] {
            None => out[block[i]] = Some(cand),
            Some(c) if *c == cand => {}
            Some(_) => return None,
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorSide {
    pub input: MirrorInput,
    pub weights: WeightData,
    pub cm: CayleyMatrix,
    /// `ξ^{(q)}`, indexed by partition block
    pub xi_blocks: Option<Vec<AffineZ>>,
    pub distinguished_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditions {
    /// factorization of the `^T`-side ξ through `G V^Λ`
    pub factor_y: bool,
    /// factorization of the direct ξ through `^TG ^TV^Λ`
    pub factor_x: bool,
    /// `^TV^Λ = V^Λ` after permuting variables and blocks
    pub blocks_match: bool,
    /// `rank Q̂ = rank ^TQ̂ = k`
    pub rank_full: bool,
    pub tau_equal: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.factor_y && self.factor_x && self.blocks_match && self.rank_full
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        [(self.factor_y, "factor-y"), (self.factor_x, "factor-x"), (self.blocks_match, "block-match"), (self.rank_full, "rank")]
            .into_iter()
            .find(|(ok, _)| !ok)
            .map(|(_, w)| w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPair {
    pub x_side: MirrorSide,
    pub y_side: MirrorSide,
    pub conditions: Conditions,
    /// variable permutation mapping the transposed system onto the original, if any
    pub self_dual: Option<Vec<usize>>,
}

/// Side whose ξ factor through the weights of `other` (the opposite side).
fn side(mi: &MirrorInput, wd: WeightData, other: &WeightData) -> Result<MirrorSide, MirrorError> {
    let cm = mi.cayley()?;
    let xi = xi_forms(&cm);
    let n = mi.n();
    let terms: Vec<usize> = (0..n).map(|r| mi.term_of_row(&cm, r)).collect();
    let block: Vec<usize> = (0..n).map(|r| mi.partition_of(r)).collect();
    let xi_blocks = factor_xi(&xi, &terms, &other.g_diag, &block, mi.k());
    let distinguished_ok = check_distinguished_xi(&cm).is_ok();
    Ok(MirrorSide { input: mi.clone(), weights: wd, cm, xi_blocks, distinguished_ok })
}

fn poly_key(p: &Polynomial, perm: &[usize]) -> (bool, BTreeSet<Vec<i64>>) {
    let mons = p
        .monomials
        .iter()
        .map(|e| {
            let mut out = vec![0; e.len()];
            for (i, &v) in e.iter().enumerate() {
                out[perm[i]] = v;
            }
            out
        })
        .collect();
    (p.deformed, mons)
}

/// Variable permutation `π` (variable `i` of `a` becomes `π(i)` of `b`) making
/// the systems equal up to reordering blocks `(f_{2q-1}, f_{2q})`. Exhaustive for `n ≤ 8`.
pub fn system_isomorphism(a: &LaurentSystem, b: &LaurentSystem) -> Option<Vec<usize>> {
    let n = a.n_vars();
    if n != b.n_vars() || a.k() != b.k() || n > 8 {
        return None;
    }
    let pair_keys = |s: &LaurentSystem, perm: &[usize]| -> Vec<Vec<(bool, BTreeSet<Vec<i64>>)>> {
        let mut v: Vec<_> = s.polys.chunks(2).map(|c| c.iter().map(|p| poly_key(p, perm)).collect()).collect();
        v.sort();
        v
    };
    let id: Vec<usize> = (0..n).collect();
    let target = pair_keys(b, &id);
    permutations(n).into_iter().find(|perm| pair_keys(a, perm) == target)
}

fn blocks_match_up_to_permutation(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let mut sa: Vec<usize> = a.iter().map(Vec::len).collect();
    let mut sb: Vec<usize> = b.iter().map(Vec::len).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    sa == sb
}

pub fn evaluate_pair(mi: &MirrorInput) -> Result<MirrorPair, MirrorError> {
    let t = mi.transpose();
    let wx = weights(mi)?;
    let wy = weights(&t)?;
    let x_side = side(mi, wx.clone(), &wy)?;
    let y_side = side(&t, wy.clone(), &wx)?;
    let k = mi.k();
    let rank = |q: &[Vec<i64>]| IntMatrix::from_i64(q).map(|m| linalg::rank_int(&m)).unwrap_or(0);
    let conditions = Conditions {
        factor_y: y_side.xi_blocks.is_some(),
        factor_x: x_side.xi_blocks.is_some(),
        blocks_match: blocks_match_up_to_permutation(&t.partition, &mi.partition),
        rank_full: rank(&wx.q_hat) == k && rank(&wy.q_hat) == k,
        tau_equal: blocks_match_up_to_permutation(&mi.row_blocks, &mi.partition),
    };
    let self_dual = system_isomorphism(&t.system(), &mi.system());
    Ok(MirrorPair { x_side, y_side, conditions, self_dual })
}

/// Pair with all four conditions enforced.
pub fn transpose_pair(mi: &MirrorInput) -> Result<MirrorPair, MirrorError> {
    let p = evaluate_pair(mi)?;
    if let Some(which) = p.conditions.first_failure() {
        return Err(MirrorError::Condition { which, detail: "factorization or block data inconsistent".into() });
    }
    Ok(p)
}

impl MirrorPair {
    /// Swap sides; the y-side input transposes back to the x-side input.
    pub fn transposed(&self) -> MirrorPair {
        MirrorPair {
            x_side: self.y_side.clone(),
            y_side: self.x_side.clone(),
            conditions: Conditions {
                factor_y: self.conditions.factor_x,
                factor_x: self.conditions.factor_y,
                ..self.conditions.clone()
            },
            self_dual: self.self_dual.as_ref().map(|p| {
                let mut inv = vec![0; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    inv[j] = i;
                }
                inv
            }),
        }
    }
}

/// `Π_r Γ(w_r ξ^{(q(r))}) / Π_μ Γ(Σ_q c_{μ q} ξ^{(q)})` with `q(r)` the block of
/// `I` containing `r`; the denominator coefficients are the block degrees
/// `c_{μq} = Σ_{r in I^{(q)}} L_Λ[r][i] w_r` for `i` in `I^{(μ)}` (constant in `i`
/// by quasihomogeneity).
fn theorem_product(mi: &MirrorInput, w: &[i64], xi_blocks: &[AffineZ]) -> Result<GammaProduct, MirrorError> {
    let nz = xi_blocks.first().map_or(0, AffineZ::nz);
    let mut g = GammaProduct::new(nz, Int::one());
    for r in 0..mi.n() {
        g.push(xi_blocks[mi.partition_of(r)].scale(&Rat::from_integer(int(w[r]))), 1);
    }
    for (mu, blk) in mi.partition.iter().enumerate() {
        let coeffs = |i: usize| -> Vec<Int> {
            mi.partition
                .iter()
                .map(|pb| pb.iter().map(|&r| mi.l_lambda.get(r, i) * int(w[r])).sum())
                .collect()
        };
        let c = coeffs(blk[0]);
        if blk.iter().any(|&i| coeffs(i) != c) {
            return Err(MirrorError::Structure(format!("block degrees vary within I^({})", mu + 1)));
        }
        let mut form = AffineZ::constant(nz, Rat::zero());
        for (q, cq) in c.iter().enumerate() {
            form = form.add(&xi_blocks[q].scale(&Rat::from_integer(cq.clone())));
        }
        g.push(form, -1);
    }
    Ok(g.canonical())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorMellin {
    pub x_theorem: GammaProduct,
    pub x_direct: GammaProduct,
    pub y_theorem: GammaProduct,
    pub y_direct: GammaProduct,
}

impl MirrorMellin {
    pub fn x_ok(&self) -> bool {
        crate::mellin::gamma_equivalent(&self.x_theorem, &self.x_direct)
    }

    pub fn y_ok(&self) -> bool {
        crate::mellin::gamma_equivalent(&self.y_theorem, &self.y_direct)
    }
}

pub fn mellin_mirror(pair: &MirrorPair) -> Result<MirrorMellin, MirrorError> {
    if let Some(which) = pair.conditions.first_failure() {
        return Err(MirrorError::Condition { which, detail: "Γ-expression requires all four conditions".into() });
    }
    let one = |s: &MirrorSide, other: &MirrorSide| -> Result<(GammaProduct, GammaProduct), MirrorError> {
        let xb = s.xi_blocks.as_ref().expect("checked by conditions");
        let theorem = theorem_product(&s.input, &other.weights.g_diag, xb)?;
        let mut direct = gamma_product_at_origin(&linear_forms(&s.cm));
        direct.delta = Int::one();
        Ok((theorem, direct))
    };
    let (x_theorem, x_direct) = one(&pair.x_side, &pair.y_side)?;
    let (y_theorem, y_direct) = one(&pair.y_side, &pair.x_side)?;
    Ok(MirrorMellin { x_theorem, x_direct, y_theorem, y_direct })
}

fn exps(v: impl IntoIterator<Item = i64>) -> Vec<u32> {
    v.into_iter().filter(|&e| e > 0).map(|e| e as u32).collect()
}

/// `P_A(λ) = Π_{q,ν}(1-λ^{Q^{(ν)}_q}) / Π_{ν,j}(1-λ^{g^{(ν)}_j})`, zero exponents dropped.
pub fn poincare_poly(wd: &WeightData) -> RatFunc {
    let num = exps(wd.q_hat.iter().flatten().copied());
    let den = exps(wd.g.iter().flatten().copied());
    cyclotomic_ratio(&num, &den)
}

/// Rational function in `k` variables kept as numerator / denominator polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiRatFunc {
    pub k: usize,
    pub num: MPoly,
    pub den: MPoly,
}

impl MultiRatFunc {
    fn from_factors(k: usize, num: &[(usize, i64)], den: &[(usize, i64)]) -> Self {
        let build = |fs: &[(usize, i64)]| {
            fs.iter().filter(|(_, e)| *e > 0).fold(MPoly::one(k), |acc, &(v, e)| {
                acc.mul(&MPoly::one(k).sub(&MPoly::monomial(k, v, e as u32, Rat::one())))
            })
        };
        MultiRatFunc { k, num: build(num), den: build(den) }
    }

    pub fn diagonal(&self) -> RatFunc {
        RatFunc::new(self.num.diagonal(), self.den.diagonal())
    }

    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        (!d.is_zero()).then(|| self.num.eval(point) / d)
    }
}

/// `M(λ) = Π_q [Π_ν(1-λ_q^{Q^{(q)}_ν})] / [Π_j(1-λ_q^{g^{(q)}_j})]` from the
/// weights of the opposite side: the characteristic polynomials at ∞ and 0 of
/// the restricted operators of [`quantum_operators`].
pub fn monodromy_product(wd: &WeightData) -> MultiRatFunc {
    let k = wd.q_hat.len();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for q in 0..k {
        for nu in 0..k {
            num.push((q, wd.q_hat[q][nu]));
        }
        for &g in &wd.g[q] {
            den.push((q, g));
        }
    }
    MultiRatFunc::from_factors(k, &num, &den)
}

/// `PO(t) = Π_ν Π_q(1-t_ν^{Q^{(ν)}_q}) / Π_ν Π_j(1-t_ν^{g^{(ν)}_j})`
pub fn euler_series(wd: &WeightData) -> MultiRatFunc {
    let k = wd.q_hat.len();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for nu in 0..k {
        for q in 0..k {
            num.push((nu, wd.q_hat[nu][q]));
        }
        for &g in &wd.g[nu] {
            den.push((nu, g));
        }
    }
    MultiRatFunc::from_factors(k, &num, &den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BckReport {
    pub m_x: RatFunc,
    pub po_y: RatFunc,
    pub p_ay: RatFunc,
    pub chain_x: bool,
    pub m_y: RatFunc,
    pub po_x: RatFunc,
    pub p_ax: RatFunc,
    pub chain_y: bool,
}

impl BckReport {
    pub fn pass(&self) -> bool {
        self.chain_x && self.chain_y
    }
}

pub fn verify_bck(pair: &MirrorPair) -> BckReport {
    let wx = &pair.x_side.weights;
    let wy = &pair.y_side.weights;
    let m_x = monodromy_product(wy).diagonal();
    let po_y = euler_series(wy).diagonal();
    let p_ay = poincare_poly(wy);
    let m_y = monodromy_product(wx).diagonal();
    let po_x = euler_series(wx).diagonal();
    let p_ax = poincare_poly(wx);
    let chain_x = m_x.same(&po_y) && po_y.same(&p_ay);
    let chain_y = m_y.same(&po_x) && po_x.same(&p_ax);
    BckReport { m_x, po_y, p_ay, chain_x, m_y, po_x, p_ax, chain_y }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicSquare {
    /// `π`: block `q` of the `p`-side is compared with constant term `a^{π(q)}`
    pub block_perm: Vec<usize>,
    /// for each block `q`, an injection `b -> j` (positions in `I_Λ` order to variables)
    pub per_block: Vec<Option<Vec<usize>>>,
    /// one injection serving every block at once
    pub simultaneous: Option<Vec<usize>>,
}

impl MagicSquare {
    pub fn holds(&self) -> bool {
        !self.per_block.is_empty() && self.per_block.iter().all(Option::is_some)
    }
}

fn bipartite_match(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    if adj.len() > right {
        return None;
    }
    let mut owner = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; adj.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            out[*u] = v;
        }
    }
    Some(out)
}

/// `p_q^b = (L^{-1})[s_q][b]`, `w_j^{a} = (L^{-1})[x_j][a]`, `a^q` the constant
/// term of the companion polynomial of block `q`, `b` over the monomial terms
/// of the deformed polynomials. Blocks are paired by the first permutation
/// under which every block admits an injection.
pub fn magic_square(cm: &CayleyMatrix) -> MagicSquare {
    let ph = &cm.phase;
    let n = ph.n();
    let k = ph.ks();
    let i_lambda: Vec<usize> = ph
        .kinds
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t, TermKind::Monomial { poly, .. } if ph.system.polys[*poly].deformed))
        .map(|(t, _)| t)
        .collect();
    let consts: Vec<Option<usize>> = ph.deformed.iter().map(|&p| ph.polys_const_term(p + 1)).collect();
    let adjacency = |q: usize, a: Option<usize>| -> Vec<Vec<usize>> {
        let s_row = ph.col_of(VarLabel::S(q)).expect("s column");
        i_lambda
            .iter()
            .map(|&b| match a {
                None => Vec::new(),
                Some(a) => (0..n)
                    .filter(|&j| cm.inv.get(s_row, b) == cm.inv.get(ph.col_of(VarLabel::X(j)).unwrap(), a))
                    .collect(),
            })
            .collect()
    };
    let mut fallback = None;
    for perm in permutations(k) {
        let adjs: Vec<Vec<Vec<usize>>> = (0..k).map(|q| adjacency(q, consts[perm[q]])).collect();
        let per_block: Vec<Option<Vec<usize>>> = adjs.iter().map(|a| bipartite_match(a, n)).collect();
        let common: Vec<Vec<usize>> = (0..i_lambda.len())
            .map(|b| (0..n).filter(|j| adjs.iter().all(|a| a[b].contains(j))).collect())
            .collect();
        let simultaneous = bipartite_match(&common, n);
        let ms = MagicSquare { block_perm: perm, per_block, simultaneous };
        if ms.holds() {
            return ms;
        }
        fallback.get_or_insert(ms);
    }
    fallback.unwrap_or(MagicSquare { block_perm: Vec::new(), per_block: Vec::new(), simultaneous: None })
}

impl crate::cayley::PhaseFunction {
    /// Term index of the constant monomial of polynomial `p`, if present.
    pub fn polys_const_term(&self, p: usize) -> Option<usize> {
        let poly = self.system.polys.get(p)?;
        self.kinds.iter().position(|k| {
            matches!(k, TermKind::Monomial { poly: q, index } if *q == p && poly.monomials[*index].iter().all(|&e| e == 0))
        })
    }
}

/// `L_ν = Π_j Π_{r<g_j}(-g_j ϑ_ν + r) - t_ν Π_μ Π_{r<Q^{(ν)}_μ}(Σ_q Q^{(q)}_μ ϑ_q - r)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumOperator {
    pub nu: usize,
    /// factors `(-g ϑ_ν + r)` as `(g, r)`
    pub theta_part: Vec<(i64, i64)>,
    /// factors `(Σ_q c_q ϑ_q - r)` as `(c, r)`
    pub t_part: Vec<(Vec<i64>, i64)>,
    pub degree_theta: usize,
    pub degree_t: usize,
    /// `Σ_μ Q^{(ν)}_μ`
    pub chi: i64,
    /// `g_{τ_ν+1} = Q^{(ν)}_ν`
    pub extended: i64,
    pub degrees_equal: bool,
}

impl QuantumOperator {
    pub fn render(&self) -> String {
        let k = self.t_part.first().map_or(0, |(c, _)| c.len());
        let th = |i: usize| if k == 1 { "θ".to_string() } else { format!("θ{}", i + 1) };
        let lhs: Vec<String> = self
            .theta_part
            .iter()
            .map(|(g, r)| {
                let m = coef_var(-g, &th(self.nu));
                if *r == 0 { format!("({m})") } else { format!("({m}+{r})") }
            })
            .collect();
        let rhs: Vec<String> = self
            .t_part
            .iter()
            .map(|(c, r)| {
                let lin: Vec<String> =
                    c.iter().enumerate().filter(|(_, v)| **v != 0).map(|(q, v)| coef_var(*v, &th(q))).collect();
                if *r == 0 { format!("({})", lin.join("+")) } else { format!("({}-{r})", lin.join("+")) }
            })
            .collect();
        let t = if k == 1 { "t".to_string() } else { format!("t{}", self.nu + 1) };
        format!("{} - {t} {}", lhs.join(""), rhs.join(""))
    }
}

fn coef_var(c: i64, var: &str) -> String {
    match c {
        1 => var.to_string(),
        -1 => format!("-{var}"),
        c => format!("{c}{var}"),
    }
}

pub fn quantum_operators(wd: &WeightData) -> Vec<QuantumOperator> {
    let k = wd.q_hat.len();
    (0..k)
        .map(|nu| {
            let theta_part: Vec<(i64, i64)> =
                wd.g[nu].iter().filter(|&&g| g > 0).flat_map(|&g| (0..g).map(move |r| (g, r))).collect();
            // denominator μ carries `Σ_q Q^{(q)}_μ ξ^{(q)}` (the placement that reproduces
            // the printed Γ-expressions), so shifting ξ^{(ν)} costs `Q^{(ν)}_μ` factors
            let mut t_part = Vec::new();
            for mu in 0..k {
                let coeffs: Vec<i64> = (0..k).map(|q| wd.q_hat[q][mu]).collect();
                for r in 0..wd.q_hat[nu][mu].max(0) {
                    t_part.push((coeffs.clone(), r));
                }
            }
            let chi: i64 = wd.q_hat[nu].iter().sum();
            QuantumOperator {
                nu,
                degree_theta: theta_part.len(),
                degree_t: t_part.len(),
                degrees_equal: theta_part.len() == t_part.len(),
                theta_part,
                t_part,
                chi,
                extended: wd.q_hat[nu][nu],
            }
        })
        .collect()
}
