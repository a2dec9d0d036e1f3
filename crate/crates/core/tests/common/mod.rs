//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's own linear algebra or polytope code.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use cimellin::cayley::{auto_placement, build_phase, cayley_matrix, CayleyMatrix, LaurentSystem};
use cimellin::io::{parse_str, SystemSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn parse_q(s: &str) -> Q {
    match s.split_once('/') {
        Some((n, d)) => Q::new(n.trim().parse().unwrap(), d.trim().parse().unwrap()),
        None => Q::from_integer(s.trim().parse().unwrap()),
    }
}

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(root().join("fixtures").join(name)).unwrap()
}

pub fn fixture(name: &str) -> SystemSpec {
    parse_str(&fixture_text(name)).unwrap()
}

pub fn all_fixtures() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    v.sort();
    v
}

/// Cayley matrix with the file's placement if present, else the automatic one.
pub fn cayley_of(spec: &SystemSpec) -> CayleyMatrix {
    let sys = spec.to_system().unwrap();
    let pl = spec.placement().unwrap_or_else(|| auto_placement(&sys).unwrap());
    cayley_matrix(&build_phase(&sys, &pl).unwrap()).unwrap()
}

pub fn system_of(name: &str) -> LaurentSystem {
    fixture(name).to_system().unwrap()
}

// ---------- exact determinant / inverse by Laplace expansion ----------

/// Determinant by Laplace expansion along rows, memoized on the set of used columns.
pub fn det_laplace(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    assert!(n <= 20 && m.iter().all(|r| r.len() == n));
    fn rec(m: &[Vec<Q>], row: usize, used: u32, memo: &mut HashMap<u32, Q>) -> Q {
        if row == m.len() {
            return Q::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = Q::zero();
        let mut sign_pos = 0;
        for c in 0..m.len() {
            if used >> c & 1 == 1 {
                continue;
            }
            if !m[row][c].is_zero() {
                let sub = rec(m, row + 1, used | 1 << c, memo);
                let term = &m[row][c] * sub;
                if sign_pos % 2 == 0 { acc += term } else { acc -= term }
            }
            sign_pos += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }
    rec(m, 0, 0, &mut HashMap::new())
}

pub fn minor(m: &[Vec<Q>], skip_r: usize, skip_c: usize) -> Vec<Vec<Q>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_r)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_c).map(|(_, v)| v.clone()).collect())
        .collect()
}

/// Inverse by the adjugate formula.
pub fn inverse_adjugate(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let d = det_laplace(m);
    assert!(!d.is_zero(), "singular");
    let mut inv = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det_laplace(&minor(m, j, i));
            inv[i][j] = if (i + j) % 2 == 0 { c / &d } else { -c / &d };
        }
    }
    inv
}

pub fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

pub fn lib_rows_q(m: &cimellin::RatMatrix) -> Vec<Vec<Q>> {
    m.rows_vec().iter().map(|r| r.iter().map(|v| parse_q(&v.to_string())).collect()).collect()
}

pub fn lib_rows_i(m: &cimellin::IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().unwrap()
}

pub fn lcm_denominators(m: &[Vec<Q>]) -> BigInt {
    let mut l = BigInt::one();
    for r in m {
        for v in r {
            let d = v.denom().clone();
            let g = num_integer::Integer::gcd(&l, &d);
            l = &l / g * d;
        }
    }
    l
}

// ---------- polytope oracles ----------

fn cross2(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; returns hull vertices counter-clockwise.
pub fn hull2(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut p: Vec<Vec<i64>> = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], x) <= 0 {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], x) <= 0 {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// `2! area` by the shoelace formula.
pub fn nvol2(points: &[Vec<i64>]) -> i64 {
    let h = hull2(points);
    if h.len() < 3 {
        return 0;
    }
    let mut s = 0;
    for i in 0..h.len() {
        let a = &h[i];
        let b = &h[(i + 1) % h.len()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs()
}

pub fn minkowski(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(x.iter().zip(y).map(|(u, v)| u + v).collect());
        }
    }
    out.sort();
    out.dedup();
    out
}

fn sub3(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `3! vol` of the convex hull of a 3D point set, by brute-force facet search:
/// every supporting plane through three points is a facet; its points are
/// fan-triangulated in 2D and coned from the hull centroid.
pub fn nvol3(points: &[Vec<i64>]) -> Q {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    let n = p.len();
    let cen: Vec<Q> = (0..3).map(|c| Q::new(BigInt::from(p.iter().map(|x| x[c]).sum::<i64>()), BigInt::from(n as i64))).collect();
    let mut seen: Vec<([i64; 3], i64)> = Vec::new();
    let mut total = Q::zero();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross3(sub3(&p[j], &p[i]), sub3(&p[k], &p[i]));
                if nrm == [0, 0, 0] {
                    continue;
                }
                let off = dot3(nrm, [p[i][0], p[i][1], p[i][2]]);
                let sides: Vec<i64> = p.iter().map(|x| dot3(nrm, [x[0], x[1], x[2]]) - off).collect();
                let (pos, neg) = (sides.iter().any(|&s| s > 0), sides.iter().any(|&s| s < 0));
                if pos && neg {
                    continue;
                }
                let g = nrm.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
                let mut key = [nrm[0] / g, nrm[1] / g, nrm[2] / g];
                let mut koff = off / g;
                if neg {
                    key = [-key[0], -key[1], -key[2]];
                    koff = -koff;
                }
                if seen.contains(&(key, koff)) {
                    continue;
                }
                seen.push((key, koff));
                // facet points, projected to the two coordinates where the normal is not dominant
                let on: Vec<&Vec<i64>> = p.iter().zip(&sides).filter(|(_, &s)| s == 0).map(|(x, _)| x).collect();
                let drop = (0..3).max_by_key(|&c| key[c].abs()).unwrap();
                let keep: Vec<usize> = (0..3).filter(|&c| c != drop).collect();
                let proj: Vec<Vec<i64>> = on.iter().map(|x| vec![x[keep[0]], x[keep[1]]]).collect();
                let h = hull2(&proj);
                let lift = |v: &Vec<i64>| -> Vec<i64> { on.iter().find(|x| x[keep[0]] == v[0] && x[keep[1]] == v[1]).unwrap().to_vec() };
                let verts: Vec<Vec<i64>> = h.iter().map(lift).collect();
                for t in 1..verts.len().saturating_sub(1) {
                    let (a, b, c) = (&verts[0], &verts[t], &verts[t + 1]);
                    let rows: Vec<Vec<Q>> = [a, b, c].iter().map(|v| (0..3).map(|d| q(v[d]) - &cen[d]).collect()).collect();
                    total += det_laplace(&rows).abs();
                }
            }
        }
    }
    total
}

/// `n! vol` of the hull in dimension 2 or 3.
pub fn nvol(points: &[Vec<i64>]) -> Q {
    match points[0].len() {
        2 => q(nvol2(points)),
        3 => nvol3(points),
        d => panic!("oracle volume only in dims 2 and 3, got {d}"),
    }
}

/// Normalized mixed volume `n! V(P_1, ..., P_n)` by inclusion–exclusion over subsets,
/// with Minkowski sums formed from raw point sets.
pub fn mixed_volume_oracle(ps: &[Vec<Vec<i64>>]) -> Q {
    let n = ps.len();
    let mut total = Q::zero();
    for mask in 1u32..(1 << n) {
        let mut acc: Option<Vec<Vec<i64>>> = None;
        for (i, p) in ps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(a) => minkowski(&a, p),
                });
            }
        }
        let v = nvol(&acc.unwrap());
        if (n - mask.count_ones() as usize) % 2 == 0 { total += v } else { total -= v }
    }
    let fact: i64 = (1..=n as i64).product();
    total / q(fact)
}

/// Lattice points of `k · conv(0, v_1, ..., v_n)` for a full-dimensional simplex at the
/// origin, by barycentric coordinates on the bounding box.
pub fn simplex_points(verts: &[Vec<i64>], k: i64) -> (u64, u64) {
    let n = verts.len();
    let m: Vec<Vec<Q>> = (0..n).map(|r| (0..n).map(|c| q(verts[c][r])).collect()).collect();
    let inv = inverse_adjugate(&m);
    let lo: Vec<i64> = (0..n).map(|d| verts.iter().map(|v| v[d]).min().unwrap().min(0) * k).collect();
    let hi: Vec<i64> = (0..n).map(|d| verts.iter().map(|v| v[d]).max().unwrap().max(0) * k).collect();
    let mut x = lo.clone();
    let (mut all, mut interior) = (0, 0);
    loop {
        let lam: Vec<Q> = (0..n).map(|i| (0..n).map(|j| &inv[i][j] * q(x[j])).sum()).collect();
        let s: Q = lam.iter().cloned().sum();
        let kq = q(k);
        if lam.iter().all(|l| !l.is_negative()) && s <= kq {
            all += 1;
            if lam.iter().all(|l| l.is_positive()) && s < kq {
                interior += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return (all, interior);
            }
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

// ---------- printed matrices ----------

#[derive(serde::Deserialize)]
pub struct Golden {
    pub fixture: String,
    pub kind: String,
    pub row_permutation: Vec<usize>,
    pub col_permutation: Vec<usize>,
    pub scale: String,
    pub matrix: Vec<Vec<String>>,
}

pub fn golden(name: &str) -> Golden {
    let text = std::fs::read_to_string(root().join("fixtures/golden").join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn printed(g: &Golden) -> Vec<Vec<Q>> {
    let s = parse_q(&g.scale);
    g.matrix.iter().map(|r| r.iter().map(|v| parse_q(v) * &s).collect()).collect()
}

/// Entry-exact comparison of a printed matrix with the library's matrix for its
/// fixture: `printed[i][j] = ours[row_perm[i]-1][col_perm[j]-1]`.
pub fn golden_check(name: &str) -> Result<(), String> {
    let g = golden(name);
    let cm = cayley_of(&fixture(&g.fixture));
    let ours = match g.kind.as_str() {
        "matrix" => to_q(&lib_rows_i(&cm.l)),
        "inverse" => lib_rows_q(&cm.inv),
        k => return Err(format!("{name}: unknown kind {k}")),
    };
    let p = printed(&g);
    if p.len() != ours.len() {
        return Err(format!("{name}: size {} vs {}", p.len(), ours.len()));
    }
    for (i, row) in p.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let o = &ours[g.row_permutation[i] - 1][g.col_permutation[j] - 1];
            if v != o {
                return Err(format!("{name}: entry ({}, {}) printed {v}, computed {o}", i + 1, j + 1));
            }
        }
    }
    Ok(())
}
