//! Exact lattice polytopes: convex hull (double description), normalized and
//! mixed volumes, Ehrhart numerators, point degrees and face strata.
//!
//! A polytope is stored in coordinates of the saturated lattice of its affine
//! span, so every volume reported is a lattice-normalized one (`d! vol`).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::PolytopeError;
use crate::linalg::{self, int, Int, IntMatrix, Rat};
use crate::util::factorial;

type V = Vec<i128>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    /// `normal . x <= offset`, in lattice coordinates of the span.
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    fn slack(&self, x: &[i64]) -> i128 {
        self.offset as i128 - dot64(&self.normal, x)
    }
}

fn dot64(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient: usize,
    dim: usize,
    origin: Vec<i64>,
    /// lattice basis of the span directions (ambient vectors), `dim` of them
    basis: Vec<Vec<i64>>,
    /// vertices in ambient coordinates, sorted
    vertices: Vec<Vec<i64>>,
    /// vertices in local coordinates, same order
    local: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    /// per facet, indices of vertices lying on it
    facet_vertices: Vec<Vec<usize>>,
}

fn to_i64(v: &Int) -> Result<i64, PolytopeError> {
    v.to_i64().ok_or(PolytopeError::Overflow)
}

fn gcd_vec(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, x| g.gcd(x))
}

fn primitive128(v: &mut [i128]) {
    let g = gcd_vec(v);
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn cdot(a: &[i128], b: &[i128]) -> Result<i128, PolytopeError> {
    let mut s: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        s = x.checked_mul(*y).and_then(|p| s.checked_add(p)).ok_or(PolytopeError::Overflow)?;
    }
    Ok(s)
}

#[derive(Clone)]
struct Ray {
    v: V,
    zero: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1u64 << (i % 64);
}

fn and_bits(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn subset_of(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Facets of the full-dimensional hull of `pts` in Z^d by the double
/// description method on the cone `{(a,b) : a.p <= b for all p}`.
fn dd_facets(pts: &[Vec<i64>], d: usize) -> Result<Vec<Facet>, PolytopeError> {
    let np = pts.len();
    let dd = d + 1;
    let h: Vec<V> = pts
        .iter()
        .map(|p| {
            let mut v: V = p.iter().map(|&x| x as i128).collect();
            v.push(-1);
            v
        })
        .collect();
    // greedy independent rows
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..np {
        let mut rows: Vec<Vec<Int>> =
            chosen.iter().map(|&j| h[j].iter().map(|&x| BigInt::from(x)).collect()).collect();
        rows.push(h[i].iter().map(|&x| BigInt::from(x)).collect());
        let m = IntMatrix::from_rows(rows).expect("rectangular");
        if linalg::rank_int(&m) == chosen.len() + 1 {
            chosen.push(i);
            if chosen.len() == dd {
                break;
            }
        }
    }
    if chosen.len() < dd {
        return Err(PolytopeError::Degenerate { dim: chosen.len().saturating_sub(1), ambient: d });
    }
    let h0 = IntMatrix::from_rows(chosen.iter().map(|&j| h[j].iter().map(|&x| BigInt::from(x)).collect()).collect())
        .expect("square");
    let inv = linalg::inverse(&h0).map_err(|_| PolytopeError::Degenerate { dim: 0, ambient: d })?;
    let words = np.div_ceil(64);
    let mut rays: Vec<Ray> = Vec::new();
    for c in 0..dd {
        let col: Vec<Rat> = inv.col(c).iter().map(|x| -x.clone()).collect();
        let (num, _) = linalg::clear_denominators(&col);
        let mut v: V = num.iter().map(|x| x.to_i128().ok_or(PolytopeError::Overflow)).collect::<Result<_, _>>()?;
        primitive128(&mut v);
        let mut zero = vec![0u64; words];
        for (r, &j) in chosen.iter().enumerate() {
            if r != c {
                bit_set(&mut zero, j);
            }
        }
        rays.push(Ray { v, zero });
    }
    let done: BTreeSet<usize> = chosen.iter().copied().collect();
    for i in 0..np {
        if done.contains(&i) {
            continue;
        }
        let hi = &h[i];
        let mut vals = Vec::with_capacity(rays.len());
        for r in &rays {
            vals.push(cdot(hi, &r.v)?);
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| vals[r] > 0).collect();
        if pos.is_empty() {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    bit_set(&mut r.zero, i);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| vals[r] < 0).collect();
        let mut new_rays: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = and_bits(&rays[p].zero, &rays[n].zero);
                if popcount(&common) + 2 < dd {
                    continue;
                }
                let adjacent =
                    (0..rays.len()).all(|r| r == p || r == n || !subset_of(&common, &rays[r].zero));
                if !adjacent {
                    continue;
                }
                let (sp, sn) = (vals[p], vals[n]);
                let mut v: V = Vec::with_capacity(dd);
                for (a, b) in rays[n].v.iter().zip(&rays[p].v) {
                    let t1 = sp.checked_mul(*a).ok_or(PolytopeError::Overflow)?;
                    let t2 = sn.checked_mul(*b).ok_or(PolytopeError::Overflow)?;
                    v.push(t1.checked_sub(t2).ok_or(PolytopeError::Overflow)?);
                }
                primitive128(&mut v);
                let mut zero = common;
                bit_set(&mut zero, i);
                new_rays.push(Ray { v, zero });
            }
        }
        let mut next: Vec<Ray> = Vec::new();
        for (r, ray) in rays.into_iter().enumerate() {
            if vals[r] < 0 {
                next.push(ray);
            } else if vals[r] == 0 {
                let mut ray = ray;
                bit_set(&mut ray.zero, i);
                next.push(ray);
            }
        }
        next.extend(new_rays);
        rays = next;
    }
    let mut facets = BTreeSet::new();
    for r in rays {
        let a = &r.v[..d];
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let normal: Vec<i64> = a.iter().map(|&x| i64::try_from(x).map_err(|_| PolytopeError::Overflow)).collect::<Result<_, _>>()?;
        let offset = i64::try_from(r.v[d]).map_err(|_| PolytopeError::Overflow)?;
        facets.insert((normal, offset));
    }
    Ok(facets.into_iter().map(|(normal, offset)| Facet { normal, offset }).collect())
}

/// Rank of the affine span of the given local points.
fn affine_rank(pts: &[&Vec<i64>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Int>> =
        pts[1..].iter().map(|p| p.iter().zip(pts[0]).map(|(a, b)| int(a - b)).collect()).collect();
    linalg::rank_int(&IntMatrix::from_rows(rows).expect("rectangular"))
}

impl LatticePolytope {
    /// Exact convex hull of a nonempty point set.
    pub fn hull(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or(PolytopeError::Empty)?;
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(PolytopeError::Dimension("points of different lengths".into()));
        }
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let p0 = pts[0].clone();
        let diffs: Vec<Vec<Int>> =
            pts.iter().map(|p| p.iter().zip(&p0).map(|(a, b)| int(a - b)).collect()).collect();
        let dim = linalg::rank_int(&IntMatrix::from_rows(diffs.clone()).expect("rect"));
        if dim == 0 {
            return Ok(LatticePolytope {
                ambient,
                dim,
                origin: p0.clone(),
                basis: vec![],
                vertices: vec![p0],
                local: vec![vec![]],
                facets: vec![],
                facet_vertices: vec![],
            });
        }
        let (origin, basis, local): (Vec<i64>, Vec<Vec<i64>>, Vec<Vec<i64>>) = if dim == ambient {
            let basis = (0..ambient).map(|i| (0..ambient).map(|j| i64::from(i == j)).collect()).collect();
            (vec![0; ambient], basis, pts.clone())
        } else {
            let orth = linalg::integer_kernel(&IntMatrix::from_rows(diffs.clone()).expect("rect"));
            let span: Vec<Vec<Int>> = if orth.is_empty() {
                (0..ambient).map(|i| (0..ambient).map(|j| int(i64::from(i == j))).collect()).collect()
            } else {
                linalg::integer_kernel(&IntMatrix::from_rows(orth).expect("rect"))
            };
            debug_assert_eq!(span.len(), dim);
            let bt = IntMatrix::from_rows(span.clone()).expect("rect").transpose().to_rat();
            let mut local = Vec::with_capacity(pts.len());
            for dv in &diffs {
                let rhs: Vec<Rat> = dv.iter().map(linalg::rat_int).collect();
                let c = linalg::solve(&bt, &rhs).ok_or_else(|| PolytopeError::Dimension("span solve".into()))?;
                let c: Vec<i64> = c
                    .iter()
                    .map(|x| {
                        if x.is_integer() { to_i64(&x.to_integer()) } else { Err(PolytopeError::Dimension("non-lattice coordinate".into())) }
                    })
                    .collect::<Result<_, _>>()?;
                local.push(c);
            }
            let basis = span.iter().map(|r| r.iter().map(to_i64).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?;
            (p0.clone(), basis, local)
        };
        let facets = dd_facets(&local, dim)?;
        // vertices: tight normals of full rank
        let mut keep = Vec::new();
        for (i, x) in local.iter().enumerate() {
            let tight: Vec<Vec<Int>> = facets
                .iter()
                .filter(|f| f.slack(x) == 0)
                .map(|f| f.normal.iter().map(|&v| int(v)).collect())
                .collect();
            if tight.len() >= dim && linalg::rank_int(&IntMatrix::from_rows(tight).expect("rect")) == dim {
                keep.push(i);
            }
        }
        let vertices: Vec<Vec<i64>> = keep.iter().map(|&i| pts[i].clone()).collect();
        let local: Vec<Vec<i64>> = keep.iter().map(|&i| local[i].clone()).collect();
        let facet_vertices = facets
            .iter()
            .map(|f| (0..local.len()).filter(|&i| f.slack(&local[i]) == 0).collect())
            .collect();
        Ok(LatticePolytope { ambient, dim, origin, basis, vertices, local, facets, facet_vertices })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn span_basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn span_origin(&self) -> &[i64] {
        &self.origin
    }

    /// Local lattice coordinates of an ambient point in the affine span (None if off-span or non-lattice).
    pub fn to_local(&self, p: &[i64]) -> Option<Vec<i64>> {
        if self.is_full_dimensional() {
            return Some(p.to_vec());
        }
        if self.dim == 0 {
            return (p == self.vertices[0].as_slice()).then(Vec::new);
        }
        let bt = IntMatrix::from_rows(self.basis.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .ok()?
            .transpose()
            .to_rat();
        let rhs: Vec<Rat> = p.iter().zip(&self.origin).map(|(a, b)| Rat::from_integer(int(a - b))).collect();
        let c = linalg::solve(&bt, &rhs)?;
        c.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        match self.to_local(p) {
            Some(x) => self.facets.iter().all(|f| f.slack(&x) >= 0),
            None => false,
        }
    }

    /// Triangulation by recursive pulling from the lowest vertex of each face.
    fn triangulate(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.local.len()).collect();
        let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
        self.tri_face(&all, self.dim, &mut memo)
    }

    fn tri_face(&self, face: &[usize], dim: usize, memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
        if let Some(t) = memo.get(face) {
            return t.clone();
        }
        let out = if dim == 0 {
            vec![vec![face[0]]]
        } else {
            let apex = face[0];
            let fset: BTreeSet<usize> = face.iter().copied().collect();
            let mut subs: BTreeSet<Vec<usize>> = BTreeSet::new();
            for fv in &self.facet_vertices {
                let inter: Vec<usize> = fv.iter().copied().filter(|i| fset.contains(i)).collect();
                if inter.len() < dim || inter.len() == face.len() {
                    continue;
                }
                let refs: Vec<&Vec<i64>> = inter.iter().map(|&i| &self.local[i]).collect();
                if affine_rank(&refs) == dim - 1 {
                    subs.insert(inter);
                }
            }
            let mut out = Vec::new();
            for s in subs {
                if s.contains(&apex) {
                    continue;
                }
                for mut simplex in self.tri_face(&s, dim - 1, memo) {
                    simplex.insert(0, apex);
                    out.push(simplex);
                }
            }
            out
        };
        memo.insert(face.to_vec(), out.clone());
        out
    }

    /// `d! vol` in the lattice of the affine span (0-dimensional: 1).
    pub fn normalized_volume(&self) -> Int {
        if self.dim == 0 {
            return int(1);
        }
        let mut total = Int::zero();
        for s in self.triangulate() {
            let v0 = &self.local[s[0]];
            let rows: Vec<Vec<Int>> =
                s[1..].iter().map(|&i| self.local[i].iter().zip(v0).map(|(a, b)| int(a - b)).collect()).collect();
            let d = linalg::det(&IntMatrix::from_rows(rows).expect("square")).expect("square");
            total += if d < Int::zero() { -d } else { d };
        }
        total
    }

    /// `n! vol_n` in the ambient space: zero unless full-dimensional.
    pub fn ambient_normalized_volume(&self) -> Int {
        if self.is_full_dimensional() { self.normalized_volume() } else { Int::zero() }
    }

    fn bbox(&self, k: i64) -> Vec<(i64, i64)> {
        (0..self.dim)
            .map(|c| {
                let lo = self.local.iter().map(|v| v[c]).min().unwrap();
                let hi = self.local.iter().map(|v| v[c]).max().unwrap();
                (lo * k, hi * k)
            })
            .collect()
    }

    /// Lattice points of `k P` in local coordinates, with their facet slacks checked by `keep`.
    /// Visits every lattice point of `kP` (local coordinates). The outer coordinates
    /// sweep the bounding box; the last one is solved from the facet inequalities.
    fn scan(&self, k: i64, mut visit: impl FnMut(&[i64])) {
        if self.dim == 0 {
            visit(&[]);
            return;
        }
        let bb = self.bbox(k);
        let last = self.dim - 1;
        let mut x: Vec<i64> = bb.iter().map(|b| b.0).collect();
        loop {
            let (mut lo, mut hi) = (bb[last].0 as i128, bb[last].1 as i128);
            for f in &self.facets {
                let rest = f.offset as i128 * k as i128 - dot64(&f.normal[..last], &x[..last]);
                let a = f.normal[last] as i128;
                if a > 0 {
                    hi = hi.min(rest.div_euclid(a));
                } else if a < 0 {
                    // a * t <= rest  <=>  t >= ceil(rest / a)
                    lo = lo.max(-(rest.div_euclid(-a)));
                } else if rest < 0 {
                    hi = lo - 1;
                    break;
                }
            }
            let mut t = lo;
            while t <= hi {
                x[last] = t as i64;
                visit(&x);
                t += 1;
            }
            let mut i = 0;
            loop {
                if i == last {
                    return;
                }
                if x[i] < bb[i].1 {
                    x[i] += 1;
                    break;
                }
                x[i] = bb[i].0;
                i += 1;
            }
        }
    }

    pub fn count_points(&self, k: i64) -> u64 {
        let mut c = 0;
        self.scan(k, |_| c += 1);
        c
    }

    /// `#(relint(kP) ∩ lattice)`
    pub fn count_interior(&self, k: i64) -> u64 {
        if k == 0 {
            return u64::from(self.dim == 0);
        }
        let mut c = 0;
        self.scan(k, |x| {
            if self.facets.iter().all(|f| (f.offset as i128) * k as i128 - dot64(&f.normal, x) > 0) {
                c += 1;
            }
        });
        c
    }

    /// Smallest `k >= 0` with `e in kP` (full-dimensional polytopes).
    pub fn point_degree(&self, e: &[i64]) -> Result<u64, PolytopeError> {
        if !self.is_full_dimensional() {
            return Err(PolytopeError::Degenerate { dim: self.dim, ambient: self.ambient });
        }
        if e.len() != self.ambient {
            return Err(PolytopeError::Dimension("point length".into()));
        }
        if e.iter().all(|&v| v == 0) {
            return Ok(0);
        }
        let mut lo: i128 = 1;
        let mut hi: Option<i128> = None;
        for f in &self.facets {
            let ae = dot64(&f.normal, e);
            let b = f.offset as i128;
            // need ae <= k b
            match b.cmp(&0) {
                std::cmp::Ordering::Greater => lo = lo.max(Integer::div_ceil(&ae, &b)),
                std::cmp::Ordering::Less => {
                    let ub = Integer::div_floor(&(-ae), &(-b));
                    hi = Some(hi.map_or(ub, |h: i128| h.min(ub)));
                }
                std::cmp::Ordering::Equal => {
                    if ae > 0 {
                        return Err(PolytopeError::OutsideCone);
                    }
                }
            }
        }
        if hi.is_some_and(|h| h < lo) {
            return Err(PolytopeError::OutsideCone);
        }
        Ok(lo as u64)
    }

    /// Dimension of the minimal face of `P` containing `x / k` (x in local coordinates of kP).
    pub fn face_dim_of(&self, x: &[i64], k: i64) -> usize {
        let tight: Vec<Vec<Int>> = self
            .facets
            .iter()
            .filter(|f| (f.offset as i128) * k as i128 == dot64(&f.normal, x))
            .map(|f| f.normal.iter().map(|&v| int(v)).collect())
            .collect();
        if tight.is_empty() {
            return self.dim;
        }
        self.dim - linalg::rank_int(&IntMatrix::from_rows(tight).expect("rect"))
    }

    /// Vertex sum of two polytopes in the same ambient space.
    pub fn minkowski_sum(&self, o: &Self) -> Result<Self, PolytopeError> {
        if self.ambient != o.ambient {
            return Err(PolytopeError::Dimension("Minkowski sum of different ambient dims".into()));
        }
        let mut pts = BTreeSet::new();
        for a in &self.vertices {
            for b in &o.vertices {
                pts.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>());
            }
        }
        Self::hull(&pts.into_iter().collect::<Vec<_>>())
    }

    pub fn dilate(&self, c: i64) -> Result<Self, PolytopeError> {
        if c == 0 {
            return Self::hull(&[vec![0; self.ambient]]);
        }
        Self::hull(&self.vertices.iter().map(|v| v.iter().map(|x| x * c).collect()).collect::<Vec<_>>())
    }
}

/// Ehrhart numerators of a lattice polytope of dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartData {
    pub dim: usize,
    pub psi: Vec<i64>,
    pub phi: Vec<i64>,
    pub counts: Vec<u64>,
    pub interior_counts: Vec<u64>,
    pub reciprocity: bool,
    pub psi_sum_is_volume: bool,
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

pub fn ehrhart(p: &LatticePolytope) -> EhrhartData {
    let n = p.dim();
    let counts: Vec<u64> = (0..=n + 1).map(|k| if k == 0 { 1 } else { p.count_points(k as i64) }).collect();
    let interior_counts: Vec<u64> = (0..=n + 1).map(|k| if k == 0 { 0 } else { p.count_interior(k as i64) }).collect();
    let conv = |c: &[u64], upto: usize| -> Vec<i64> {
        (0..=upto)
            .map(|j| (0..=j).map(|i| (if i % 2 == 0 { 1 } else { -1 }) * binom(n + 1, i) * c[j - i] as i64).sum())
            .collect()
    };
    let mut psi = conv(&counts, n + 1);
    let psi_top = psi.pop().unwrap_or(0);
    let phi = conv(&interior_counts, n + 1);
    let reciprocity = psi_top == 0 && (0..=n + 1).all(|j| phi[j] == if j == 0 { 0 } else { psi[n + 1 - j] });
    let vol = p.normalized_volume();
    let psi_sum_is_volume = int(psi.iter().sum::<i64>()) == vol;
    EhrhartData { dim: n, psi, phi, counts, interior_counts, reciprocity, psi_sum_is_volume }
}

/// Hodge numbers of the primitive middle cohomology of a nondegenerate
/// hypersurface with Newton polytope `hull(support)`, read off `psi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeReport {
    pub psi: Vec<i64>,
    pub normalized_volume: Int,
    pub sum_matches_volume: bool,
    /// Π-regularity is assumed, never checked.
    pub assumes_regularity: bool,
}

pub fn hodge_dims(support: &[Vec<i64>]) -> Result<HodgeReport, PolytopeError> {
    let p = LatticePolytope::hull(support)?;
    if !p.is_full_dimensional() {
        return Err(PolytopeError::Degenerate { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let e = ehrhart(&p);
    let vol = p.normalized_volume();
    Ok(HodgeReport { sum_matches_volume: int(e.psi.iter().sum::<i64>()) == vol, psi: e.psi, normalized_volume: vol, assumes_regularity: true })
}

/// Counts of lattice points of `kP` (1 <= k <= n) keyed by `(k, dim of minimal face of P containing x/k)`.
pub fn weight_strata(support: &[Vec<i64>]) -> Result<BTreeMap<(usize, usize), u64>, PolytopeError> {
    let p = LatticePolytope::hull(support)?;
    if !p.is_full_dimensional() {
        return Err(PolytopeError::Degenerate { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let mut out = BTreeMap::new();
    for k in 1..=p.dim() {
        p.scan(k as i64, |x| {
            *out.entry((k, p.face_dim_of(x, k as i64))).or_insert(0) += 1;
        });
    }
    Ok(out)
}

/// `n! V(P_1, ..., P_n)` for `n` polytopes in `R^n`.
pub fn mixed_volume(ps: &[LatticePolytope]) -> Result<Int, PolytopeError> {
    let refs: Vec<&LatticePolytope> = ps.iter().collect();
    mixed_volume_mult(&refs, &vec![1; ps.len()])
}

/// Mixed volume with repeated arguments: `P_i` taken `mult[i]` times.
///
/// Inclusion–exclusion over sub-multisets `c <= mult`:
/// `sum (-1)^{n-|c|} prod C(mult_i, c_i) nvol(sum c_i P_i)`, divided by `n!`.
pub fn mixed_volume_mult(ps: &[&LatticePolytope], mult: &[usize]) -> Result<Int, PolytopeError> {
    let n: usize = mult.iter().sum();
    if ps.len() != mult.len() {
        return Err(PolytopeError::Dimension("multiplicity vector length".into()));
    }
    if ps.iter().any(|p| p.ambient_dim() != n) {
        return Err(PolytopeError::Dimension(format!("mixed volume needs {n} arguments in R^{n}")));
    }
    let mut cache: HashMap<Vec<usize>, Int> = HashMap::new();
    let mut total = Int::zero();
    for c in sub_multisets(mult) {
        let size: usize = c.iter().sum();
        if size == 0 {
            continue;
        }
        let coef: i64 = c.iter().zip(mult).map(|(&ci, &mi)| binom(mi, ci)).product();
        let vol = minkowski_volume(ps, &c, &mut cache)?;
        let sign = if (n - size) % 2 == 0 { 1 } else { -1 };
        total += vol * int(sign * coef);
    }
    let f = Int::from(factorial(n));
    let (q, r) = total.div_rem(&f);
    if !r.is_zero() {
        return Err(PolytopeError::Normalization(format!("{total} not divisible by {n}!")));
    }
    Ok(q)
}

/// Cayley polytope `conv(P_i x {e_i})` in `R^{n + m - 1}` (the first block sits at height 0).
pub fn cayley_polytope(ps: &[&LatticePolytope]) -> Result<LatticePolytope, PolytopeError> {
    let m = ps.len();
    let mut pts = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        for v in p.vertices() {
            let mut w = v.clone();
            w.extend((1..m).map(|j| i64::from(i == j)));
            pts.push(w);
        }
    }
    LatticePolytope::hull(&pts)
}

/// `sum over |a| = n, a_i >= 1 of MV(P_1^{a_1}, ..., P_m^{a_m})`, by inclusion–exclusion over
/// subfamilies of Cayley volumes: `nvol(Cay(P_S)) = sum over a supported in S`.
pub fn mixed_sum_positive(ps: &[&LatticePolytope]) -> Result<Int, PolytopeError> {
    let m = ps.len();
    if m == 0 || m >= 63 {
        return Err(PolytopeError::Dimension("need 1..63 polytopes".into()));
    }
    let n = ps[0].ambient_dim();
    if ps.iter().any(|p| p.ambient_dim() != n) {
        return Err(PolytopeError::Dimension("polytopes in different ambient spaces".into()));
    }
    let mut total = Int::zero();
    for mask in 1u64..(1 << m) {
        let sub: Vec<&LatticePolytope> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| ps[i]).collect();
        let v = cayley_polytope(&sub)?.ambient_normalized_volume();
        if (m - sub.len()) % 2 == 0 { total += v } else { total -= v }
    }
    Ok(total)
}

/// `sum over compositions |a| = n (parts >= min_part) of MV(P^a)` computed directly by
/// Minkowski-sum inclusion–exclusion with a shared volume cache. Gives up (`None`) once
/// more than `budget` distinct Minkowski sums would be needed.
pub fn mixed_volume_sum(ps: &[&LatticePolytope], min_part: usize, budget: usize) -> Result<Option<Int>, PolytopeError> {
    let n = ps.first().map_or(0, |p| p.ambient_dim());
    let comps = crate::util::compositions(n, ps.len(), min_part);
    let mut needed = std::collections::BTreeSet::new();
    for a in &comps {
        for c in sub_multisets(a) {
            needed.insert(c);
            if needed.len() > budget {
                return Ok(None);
            }
        }
    }
    let mut cache = HashMap::new();
    let mut total = Int::zero();
    for a in &comps {
        if a.iter().all(|&k| k == 0) {
            continue;
        }
        let mut acc = Int::zero();
        for c in sub_multisets(a) {
            let size: usize = c.iter().sum();
            if size == 0 {
                continue;
            }
            let coef: i64 = c.iter().zip(a).map(|(&ci, &mi)| binom(mi, ci)).product();
            let vol = minkowski_volume(ps, &c, &mut cache)?;
            if (n - size) % 2 == 0 { acc += vol * int(coef) } else { acc -= vol * int(coef) }
        }
        let (q, r) = acc.div_rem(&Int::from(factorial(n)));
        if !r.is_zero() {
            return Err(PolytopeError::Normalization(format!("{acc} not divisible by {n}!")));
        }
        total += q;
    }
    Ok(Some(total))
}

fn sub_multisets(mult: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &m in mult {
        let mut next = Vec::new();
        for prefix in &out {
            for c in 0..=m {
                let mut p = prefix.clone();
                p.push(c);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn minkowski_volume(ps: &[&LatticePolytope], c: &[usize], cache: &mut HashMap<Vec<usize>, Int>) -> Result<Int, PolytopeError> {
    if let Some(v) = cache.get(c) {
        return Ok(v.clone());
    }
    let mut acc: Option<LatticePolytope> = None;
    for (p, &ci) in ps.iter().zip(c) {
        if ci == 0 {
            continue;
        }
        let scaled = p.dilate(ci as i64)?;
        acc = Some(match acc {
            None => scaled,
            Some(a) => a.minkowski_sum(&scaled)?,
        });
    }
    let v = acc.map_or_else(Int::zero, |p| p.ambient_normalized_volume());
    cache.insert(c.to_vec(), v.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_volume_and_facets() {
        let p = LatticePolytope::hull(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.normalized_volume(), int(2));
    }

    #[test]
    fn segment_in_plane() {
        let p = LatticePolytope::hull(&[vec![0, 0], vec![2, 2]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.normalized_volume(), int(2));
    }
}
