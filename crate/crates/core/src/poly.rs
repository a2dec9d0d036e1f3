//! Exact polynomials over Q: a sparse multivariate type and a dense univariate
//! type with gcd, plus reduced rational functions in one variable.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{rat, Rat};

/// Sparse multivariate polynomial; keys are exponent vectors of length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, i, 1, Rat::one())
    }

    /// `c * x_i^e`
    pub fn monomial(nvars: usize, i: usize, e: u32, c: Rat) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Linear form `c0 + sum c_i x_i`.
    pub fn linear(c0: &Rat, coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c0.clone());
        for (i, c) in coeffs.iter().enumerate() {
            p = p.add(&Self::monomial(n, i, 1, c.clone()));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn insert_add(&mut self, e: Vec<u32>, c: Rat) {
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(Rat::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc + t
        })
    }

    /// Substitute every variable by the same single variable: `x_i -> t`.
    pub fn diagonal(&self) -> UPoly {
        let mut coeffs: Vec<Rat> = Vec::new();
        for (e, c) in &self.terms {
            let d: u32 = e.iter().sum();
            let d = d as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rat::zero());
            }
            coeffs[d] += c;
        }
        UPoly::new(coeffs)
    }

    /// Render with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let body = mono.join("*");
            let s = if body.is_empty() {
                c.to_string()
            } else if c.is_one() {
                body
            } else if *c == -Rat::one() {
                format!("-{body}")
            } else {
                format!("{c}*{body}")
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `1 - t^e`
    pub fn one_minus_power(e: u32) -> Self {
        if e == 0 {
            return Self::zero();
        }
        let mut c = vec![Rat::zero(); e as usize + 1];
        c[0] = Rat::one();
        c[e as usize] = -Rat::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero) + o.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
            })
            .collect();
        Self::new(c)
    }

    pub fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] / &dl;
            if !f.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &f * c;
                }
            }
            q[i] = f;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rat::one() / l)),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// `t^n * p(1/t)` for `n >= deg p`.
    pub fn reciprocal(&self, n: usize) -> Self {
        let mut c = vec![Rat::zero(); n + 1];
        for (i, v) in self.coeffs.iter().enumerate() {
            assert!(i <= n, "reciprocal degree too small");
            c[n - i] = v.clone();
        }
        Self::new(c)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = vec!["t".to_string()];
        let mut m = MPoly::zero(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            m = m.add(&MPoly::monomial(1, 0, i as u32, c.clone()));
        }
        write!(f, "{}", m.render(&names))
    }
}

/// Reduced rational function `num/den` in one variable; `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: UPoly,
    pub den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let g = if g.is_zero() { UPoly::one() } else { g };
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.leading().cloned().unwrap_or_else(Rat::one);
        let inv = Rat::one() / l;
        RatFunc { num: n.scale(&inv), den: d.scale(&inv) }
    }

    /// Equality as rational functions via cross-multiplication.
    pub fn same(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// Polynomial if the denominator divides out.
    pub fn as_poly(&self) -> Option<UPoly> {
        if self.den.degree() == Some(0) {
            Some(self.num.scale(&(Rat::one() / self.den.leading().unwrap())))
        } else {
            None
        }
    }

    pub fn is_nonneg_poly(&self) -> bool {
        self.as_poly().is_some_and(|p| p.coeffs().iter().all(|c| !c.is_negative()))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

/// Product `prod (1 - t^{e})^{±1}` as a reduced rational function.
pub fn cyclotomic_ratio(num_exps: &[u32], den_exps: &[u32]) -> RatFunc {
    let num = num_exps.iter().fold(UPoly::one(), |acc, &e| acc.mul(&UPoly::one_minus_power(e)));
    let den = den_exps.iter().fold(UPoly::one(), |acc, &e| acc.mul(&UPoly::one_minus_power(e)));
    RatFunc::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_quotient() {
        let r = cyclotomic_ratio(&[3], &[1]);
        assert_eq!(r.as_poly().unwrap(), UPoly::from_i64(&[1, 1, 1]));
    }

    #[test]
    fn multivariate_diag() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.diagonal(), UPoly::from_i64(&[0, 0, 4]));
    }
}
