//! Library results against independent oracles: brute-force hull volumes and
//! inclusion–exclusion mixed volumes, barycentric lattice-point counts, and
//! adjugate inverses.

mod common;

use common::*;
use num_traits::{Signed, Zero};

use cimellin::cayley::VarLabel;
use cimellin::gkz::{a_matrix, gkz_rank, gkz_system};
use cimellin::horn::{euler_characteristic, euler_characteristic_direct};
use cimellin::linalg::Rat;
use cimellin::polytope::{ehrhart, mixed_volume, LatticePolytope};
use cimellin::mirror::givental_system;

fn v(p: &[&[i64]]) -> Vec<Vec<i64>> {
    p.iter().map(|x| x.to_vec()).collect()
}

fn int_q(i: &cimellin::Int) -> Q {
    parse_q(&i.to_string())
}

/// `|χ|` for the two-curve example, fiber over the first deformation: coordinates
/// `(x1, x2, s2)`, polytopes `Δ(f1 + 1)` and `Δ(f2 + s2)`.
#[test]
fn acampo_euler_characteristic_by_hull_volumes() {
    let p1 = v(&[&[0, 0, 0], &[3, 0, 0], &[0, 2, 0]]);
    let p2 = v(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]]);
    let chi = mixed_volume_oracle(&[p1.clone(), p1.clone(), p2.clone()]) + mixed_volume_oracle(&[p1, p2.clone(), p2]);
    assert_eq!(chi, q(15));

    let cm = cayley_of(&fixture("acampo.json"));
    for qi in 0..2 {
        assert_eq!(int_q(&euler_characteristic(&cm, qi).unwrap()), q(15));
        assert_eq!(int_q(&euler_characteristic_direct(&cm, qi).unwrap()), q(15));
    }
}

/// `Σ_{a ∈ I+} B_q^a` with `B_q = Δ · (row of L^{-1} for s_q)`, from the adjugate.
#[test]
fn acampo_positive_b_sum_from_adjugate() {
    let cm = cayley_of(&fixture("acampo.json"));
    let inv = inverse_adjugate(&to_q(&lib_rows_i(&cm.l)));
    let delta = Q::from_integer(lcm_denominators(&inv));
    assert_eq!(delta, q(5));
    for qi in 0..2 {
        let r = cm.phase.col_of(VarLabel::S(qi)).unwrap();
        let b: Vec<Q> = inv[r].iter().map(|x| x * &delta).collect();
        assert!(b.iter().all(|x| x.is_integer()));
        let pos: Q = b.iter().filter(|x| x.is_positive()).cloned().sum();
        let neg: Q = b.iter().filter(|x| x.is_negative()).cloned().sum();
        assert_eq!(pos, q(15));
        assert_eq!(pos + neg, q(0), "row sums to zero");
    }
}

#[test]
fn euler_characteristic_routes_agree_on_small_fixtures() {
    for name in ["acampo.json", "ci_three.json", "ci_three_alt.json", "curve_hyper.json", "fermat_toy.json", "givental_2_3.json"] {
        let cm = cayley_of(&fixture(name));
        for qi in 0..cm.phase.ks() {
            let a = euler_characteristic(&cm, qi).unwrap();
            let b = euler_characteristic_direct(&cm, qi).unwrap();
            assert_eq!(a, b, "{name} q={qi}");
        }
    }
}

/// Three-dimensional polytopes: every χ polytope family of the three-curve
/// system lives in `(x1, x2, x', s_l, s_m)`, too big for the oracle, so compare
/// mixed volumes of the library against the oracle on explicit 3D families.
#[test]
fn mixed_volumes_3d_against_oracle() {
    let fams: Vec<Vec<Vec<Vec<i64>>>> = vec![
        vec![v(&[&[0, 0, 0], &[3, 0, 0], &[0, 2, 0]]), v(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]]), v(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]])],
        vec![v(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]); 3],
        vec![
            v(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0], &[1, 1, 2]]),
            v(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3], &[1, 1, 1]]),
            v(&[&[0, 0, 0], &[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
        ],
    ];
    for f in fams {
        let ps: Vec<LatticePolytope> = f.iter().map(|p| LatticePolytope::hull(p).unwrap()).collect();
        assert_eq!(int_q(&mixed_volume(&ps).unwrap()), mixed_volume_oracle(&f), "{f:?}");
    }
}

#[test]
fn normalized_volume_against_oracle() {
    let sets = vec![
        v(&[&[0, 0, 0], &[3, 0, 0], &[0, 2, 0], &[0, 0, 1]]),
        v(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]),
        v(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[2, 2, 0], &[0, 0, 2], &[2, 0, 2], &[0, 2, 2], &[2, 2, 2]]),
        v(&[&[0, 0], &[4, 1], &[1, 3], &[-2, 2]]),
    ];
    for s in sets {
        let p = LatticePolytope::hull(&s).unwrap();
        assert_eq!(int_q(&p.normalized_volume()), nvol(&s), "{s:?}");
    }
}

/// GKZ rank of the two-curve system via planar mixed volumes (shoelace):
/// `Σ_{|a| = 2} MV(Δ(f1+1)^{a1}, Δ(f2+1)^{a2})`.
#[test]
fn acampo_gkz_rank_by_shoelace() {
    let p1 = v(&[&[0, 0], &[3, 0], &[0, 2]]);
    let p2 = v(&[&[0, 0], &[2, 0], &[0, 3]]);
    let oracle = mixed_volume_oracle(&[p1.clone(), p1.clone()])
        + mixed_volume_oracle(&[p1.clone(), p2.clone()])
        + mixed_volume_oracle(&[p2.clone(), p2]);
    assert_eq!(oracle, q(21));
    let r = gkz_rank(&system_of("acampo.json")).unwrap();
    assert!(r.agree);
    assert_eq!(int_q(r.value()), oracle);
    assert_eq!(r.mixed.as_ref().map(int_q), Some(oracle));
}

#[test]
fn three_curve_gkz_rank_by_shoelace() {
    let tri = |a: i64, b: i64| v(&[&[0, 0], &[a, 0], &[0, b]]);
    let ps = [tri(3, 2), tri(2, 3), tri(5, 5)];
    let mut oracle = q(0);
    for i in 0..3 {
        for j in i..3 {
            oracle += mixed_volume_oracle(&[ps[i].clone(), ps[j].clone()]);
        }
    }
    let r = gkz_rank(&system_of("ci_three.json")).unwrap();
    assert!(r.agree);
    assert_eq!(int_q(r.value()), oracle);
}

/// Givental systems: the segment `Δ(x_0⋯x_n + 1)` contributes 1 when unused and
/// `ℓ_ν` when paired with a block simplex missing one direction, so the rank is
/// `1 + Σ ℓ_ν = n + 2`.
#[test]
fn givental_gkz_rank_is_n_plus_two() {
    for (n, ells) in [(2usize, vec![3usize]), (4, vec![2, 3]), (5, vec![2, 2, 2])] {
        let r = gkz_rank(&givental_system(n, &ells).unwrap()).unwrap();
        assert!(r.agree, "n={n}");
        assert_eq!(int_q(r.value()), q(n as i64 + 2), "n={n}");
    }
}

#[test]
fn box_vectors_annihilate_a_matrix() {
    for name in all_fixtures() {
        let sys = system_of(&name);
        let am = a_matrix(&sys).unwrap();
        let zero = |n: usize| vec![Rat::zero(); n];
        let g = gkz_system(&am, &zero(am.n), &zero(am.k)).unwrap();
        let cols = am.columns();
        assert_eq!(g.boxes.len(), cols.len() - am.k - am.n, "{name}: lattice rank");
        for b in &g.boxes {
            let u: Vec<i64> = b.u.iter().map(|x| x.to_string().parse().unwrap()).collect();
            for r in 0..am.k + am.n {
                let s: i64 = cols.iter().zip(&u).map(|(c, x)| c[r] * x).sum();
                assert_eq!(s, 0, "{name}");
            }
            assert!(b.plus.iter().chain(&b.minus).all(|x| !x.is_negative()));
        }
    }
}

#[test]
fn ehrhart_counts_against_barycentric_enumeration() {
    let simplices = vec![
        v(&[&[3, 0], &[0, 2]]),
        v(&[&[2, 1], &[-1, 3]]),
        v(&[&[3, 0, 0], &[0, 2, 0], &[0, 0, 1]]),
        v(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
        v(&[&[2, 0, 0], &[0, 3, 0], &[1, 1, 4]]),
    ];
    for s in simplices {
        let mut pts = s.clone();
        pts.push(vec![0; s.len()]);
        let p = LatticePolytope::hull(&pts).unwrap();
        let e = ehrhart(&p);
        for k in 1..=s.len() + 1 {
            let (all, interior) = simplex_points(&s, k as i64);
            assert_eq!(e.counts[k], all, "{s:?} k={k}");
            assert_eq!(e.interior_counts[k], interior, "{s:?} k={k}");
        }
        assert!(e.reciprocity);
        let vol = det_laplace(&to_q(&s)).abs();
        assert_eq!(q(e.psi.iter().sum()), vol);
    }
}
