//! Transpose mirror pairs: ξ forms, Γ-products on both sides, the
//! Poincaré/monodromy chain and the magic-square injections.

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cimellin::linalg::{inverse, rat, Rat};
use cimellin::mellin::{gamma_product_at_origin, linear_forms};
use cimellin::mirror::{
    build_projective, magic_square, mellin_mirror, transpose_pair, verify_bck, MirrorPair,
};
use cimellin::{AffineZ, GammaProduct, Int, IntMatrix};

fn pair_of(name: &str) -> MirrorPair {
    let mi = fixture(name).mirror_input().expect("fixture has a partition").unwrap();
    transpose_pair(&mi).unwrap()
}

/// `Σ c_i (z_i - 1)`
fn shifted(coeffs: &[Rat]) -> AffineZ {
    let c0: Rat = -coeffs.iter().cloned().sum::<Rat>();
    AffineZ::new(c0, coeffs.to_vec())
}

fn gamma(nz: usize, num: &[(AffineZ, i64)], den: &[(AffineZ, i64)]) -> GammaProduct {
    let mut g = GammaProduct::new(nz, Int::from(1));
    for (l, e) in num {
        g.push(l.clone(), *e);
    }
    for (l, e) in den {
        g.push(l.clone(), -e);
    }
    g.canonical()
}

#[test]
fn givental_mellin_transform() {
    for (n, ells) in [(2usize, vec![3usize]), (4, vec![2, 3]), (5, vec![2, 2, 2])] {
        let cm = build_projective(n, &ells).unwrap();
        let got = gamma_product_at_origin(&linear_forms(&cm));
        let z = AffineZ::var(1, 0);
        let den: Vec<(AffineZ, i64)> = ells.iter().map(|&l| (z.scale(&rat(l as i64, 1)), 1)).collect();
        let want = gamma(1, &[(z.clone(), n as i64 + 1)], &den);
        assert!(cimellin::gamma_equivalent(&got, &want), "n={n}: {got}");
    }
}

#[test]
fn schimmrigk_xi_and_mellin() {
    let pair = pair_of("schimmrigk.json");
    let xi1 = shifted(&[rat(-1, 3), rat(1, 9)]);
    let xi2 = shifted(&[rat(0, 1), rat(-1, 3)]);
    assert_eq!(pair.x_side.xi_blocks.as_deref(), Some(&[xi1.clone(), xi2.clone()][..]));
    // the transposed system lists the (f3, f4) pair first, so its deformation
    // parameters come out as (z2, z1)
    let sw = |a: &AffineZ| AffineZ::new(a.c0.clone(), a.cz.iter().rev().cloned().collect());
    assert_eq!(pair.y_side.xi_blocks.as_deref(), Some(&[sw(&xi2), sw(&xi1)][..]));
    assert!(pair.self_dual.is_some(), "transposed system equals the original");

    let z1 = AffineZ::var(2, 0);
    let z2 = AffineZ::var(2, 1);
    let first = gamma(2, &[(xi1.clone(), 3), (xi2.clone(), 4), (z1, 1), (z2, 1)], &[]);
    let r3 = rat(3, 1);
    let second = gamma(2, &[(xi1.clone(), 3), (xi2.clone(), 4)], &[(xi1.scale(&r3).add(&xi2), 1), (xi2.scale(&r3), 1)]);
    assert!(cimellin::gamma_equivalent(&first, &second));

    let mm = mellin_mirror(&pair).unwrap();
    assert!(mm.x_ok() && mm.y_ok());
    for g in [&mm.x_direct, &mm.x_theorem] {
        assert!(cimellin::gamma_equivalent(g, &second), "{g}");
    }
    let swapped = gamma(2, &[(sw(&xi1), 3), (sw(&xi2), 4)], &[(sw(&xi1).scale(&r3).add(&sw(&xi2)), 1), (sw(&xi2).scale(&r3), 1)]);
    for g in [&mm.y_direct, &mm.y_theorem] {
        assert!(cimellin::gamma_equivalent(g, &swapped), "{g}");
    }
}

#[test]
fn weighted_example_both_sides() {
    let pair = pair_of("ex_weighted.json");
    let xi = shifted(&[rat(-1, 7)]);
    assert_eq!(pair.x_side.xi_blocks.as_deref(), Some(&[xi.clone()][..]));
    let s = |c: i64, l: &AffineZ| l.scale(&rat(c, 1));
    let direct = gamma(1, &[(xi.clone(), 3), (s(2, &xi), 2)], &[(s(7, &xi), 1)]);
    let mm = mellin_mirror(&pair).unwrap();
    assert!(cimellin::gamma_equivalent(&mm.x_direct, &direct), "{}", mm.x_direct);
    assert!(mm.x_ok());

    // transposed side: x1^7 + x2^7 + x3^7 + x2 x4^3 + x3 x5^3
    let t = pair.y_side.input.system();
    let mut mons: Vec<Vec<i64>> = t.polys[0].monomials.clone();
    mons.sort();
    let mut want = vec![
        vec![7, 0, 0, 0, 0],
        vec![0, 7, 0, 0, 0],
        vec![0, 0, 7, 0, 0],
        vec![0, 1, 0, 3, 0],
        vec![0, 0, 1, 0, 3],
    ];
    want.sort();
    assert_eq!(mons, want);
    assert_eq!(t.polys[1].monomials[0], vec![1; 5]);

    let eta = shifted(&[rat(-1, 21)]);
    let tdirect = gamma(1, &[(s(3, &eta), 1), (s(2, &eta), 2), (s(7, &eta), 2)], &[(s(21, &eta), 1)]);
    assert!(cimellin::gamma_equivalent(&mm.y_direct, &tdirect), "{}", mm.y_direct);
    assert!(mm.y_ok());
}

#[test]
fn poincare_chain_on_mirror_fixtures() {
    for name in ["schimmrigk.json", "ex_weighted.json", "fermat_toy.json"] {
        let bck = verify_bck(&pair_of(name));
        assert!(bck.pass(), "{name}: {bck:?}");
    }
}

#[test]
fn schimmrigk_magic_square() {
    let pair = pair_of("schimmrigk.json");
    for cm in [&pair.x_side.cm, &pair.y_side.cm] {
        let ms = magic_square(cm);
        assert!(ms.holds());
        assert!(ms.simultaneous.is_some());
    }
}

#[test]
fn transpose_is_an_involution() {
    for name in ["schimmrigk.json", "ex_weighted.json", "fermat_toy.json"] {
        let mi = fixture(name).mirror_input().unwrap().unwrap();
        assert_eq!(mi.transpose().transpose(), mi, "{name}");
    }
}

/// Random ±1 changes at six entries of the full `L` destroy the square. Single
/// entry changes often do not: exponents of the transpose-ready shape keep it.
#[test]
fn perturbed_matrices_break_magic_square() {
    let cm = fixture("schimmrigk.json").mirror_input().unwrap().unwrap().cayley().unwrap();
    let rows = lib_rows_i(&cm.l);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tried = 0;
    while tried < 100 {
        let mut r = rows.clone();
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..13), rng.gen_range(0..13));
            r[i][j] += if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let l = IntMatrix::from_i64(&r).unwrap();
        let Ok(inv) = inverse(&l) else { continue };
        let mut p = cm.clone();
        p.l = l;
        p.inv = inv;
        tried += 1;
        assert!(!magic_square(&p).holds(), "{r:?}");
    }
}
