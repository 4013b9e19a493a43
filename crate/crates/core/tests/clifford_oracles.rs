mod common;

use common::{mat_c64, omega, C64};
use galmub_core::gl2::{random_with_det, GL2Mat};
use galmub_core::gunitary::{faithfulness_sign, make_gunitary};
use galmub_core::weyl_clifford::{symplectic_form, PhasePoint, PhaseSpace};
use galmub_core::{CycMatrix, CycNumber, Fe};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ps(p: u64, n: i64) -> PhaseSpace {
    PhaseSpace::new(p, n).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_point(s: &PhaseSpace, r: &mut ChaCha8Rng) -> PhasePoint {
    let f = s.field();
    PhasePoint::new(f.random(r), f.random(r))
}

#[test]
fn symplectic_form_examples() {
    let s = ps(3, 3);
    let f = s.field();
    let e1 = PhasePoint::new(Fe::ONE, Fe::ZERO);
    let e2 = PhasePoint::new(Fe::ZERO, Fe::ONE);
    assert_eq!(symplectic_form(f, e1, e2), f.from_int(-1));
    let mut r = rng(1);
    for _ in 0..100 {
        let (u, v) = (random_point(&s, &mut r), random_point(&s, &mut r));
        assert_eq!(symplectic_form(f, u, u), Fe::ZERO);
        let g = random_with_det(f, f.random_nonzero(&mut r), &mut r);
        // 2×2 determinant of [Gu | Gv] against det G · det [u | v]
        let (gu, gv) = (g.apply(f, u), g.apply(f, v));
        let lhs = f.sub(f.mul(gu.u2, gv.u1), f.mul(gu.u1, gv.u2));
        assert_eq!(lhs, f.mul(g.det(f), symplectic_form(f, u, v)));
    }
}

#[test]
fn displacement_matches_float_formula() {
    let s = ps(7, 1);
    let mut r = rng(2);
    for _ in 0..10 {
        let u = random_point(&s, &mut r);
        let m = mat_c64(&s.displacement(u));
        let (u1, u2) = (u.u1.index() as i64, u.u2.index() as i64);
        for x in 0..7i64 {
            // half = 4 mod 7
            let ph = omega(7, 4 * u1 * u2 + u2 * x);
            let row = ((x + u1) % 7) as usize;
            assert!(m[row][x as usize].close(ph, 1e-12));
            for (i, line) in m.iter().enumerate() {
                if i != row {
                    assert!(line[x as usize].close(C64::new(0.0, 0.0), 1e-12));
                }
            }
        }
    }
}

#[test]
fn displacements_have_order_d() {
    for p in [5u64, 7] {
        let s = ps(p, 1);
        let mut r = rng(3);
        for _ in 0..5 {
            let d = s.displacement(random_point(&s, &mut r));
            let mut acc = CycMatrix::identity(s.p(), s.d());
            for _ in 0..p {
                acc = acc.mul(&d);
            }
            assert!(acc.is_identity());
        }
    }
}

#[test]
fn group_law_with_half_form() {
    let s = ps(3, 2);
    let f = s.field();
    let mut r = rng(4);
    for _ in 0..20 {
        let (u, v) = (random_point(&s, &mut r), random_point(&s, &mut r));
        let phase = s.phase(f.mul(f.half(), symplectic_form(f, u, v)));
        let lhs = s.displacement(u).mul(&s.displacement(v));
        assert_eq!(lhs, s.displacement(u.add(f, v)).scale(phase));
    }
}

#[test]
fn covariance() {
    for (p, n) in [(5u64, 1i64), (7, 1), (3, 2)] {
        let s = ps(p, n);
        let f = s.field();
        let mut r = rng(5);
        for _ in 0..20 {
            let g = random_with_det(f, Fe::ONE, &mut r);
            let u = random_point(&s, &mut r);
            let ug = s.metaplectic(&g).unwrap();
            let ginv = s.metaplectic(&g.inv(f).unwrap()).unwrap();
            assert!(ug.mul(&ginv).is_identity());
            assert_eq!(ug.mul(&s.displacement(u)).mul(&ginv), s.displacement(g.apply(f, u)));
        }
    }
}

#[test]
fn faithfulness() {
    for (p, n) in [(5u64, 1i64), (7, 1), (3, 3)] {
        let s = ps(p, n);
        let f = s.field();
        let mut r = rng(6);
        for _ in 0..20 {
            let g1 = make_gunitary(&s, &random_with_det(f, Fe::ONE, &mut r)).unwrap();
            let g2 = make_gunitary(&s, &random_with_det(f, Fe::ONE, &mut r)).unwrap();
            assert_eq!(faithfulness_sign(&s, &g1, &g2).unwrap(), 1);
        }
    }
    assert!(ps(5, 1).metaplectic(&GL2Mat::identity()).unwrap().is_identity());
}

#[test]
fn near_faithful_at_d9_records_sign() {
    let s = ps(3, 2);
    let f = s.field();
    let mut r = rng(7);
    let mut seen = Vec::new();
    for _ in 0..20 {
        let g1 = make_gunitary(&s, &random_with_det(f, Fe::ONE, &mut r)).unwrap();
        let g2 = make_gunitary(&s, &random_with_det(f, Fe::ONE, &mut r)).unwrap();
        seen.push(faithfulness_sign(&s, &g1, &g2).unwrap());
    }
    assert!(seen.iter().all(|&x| x == 1 || x == -1));
}

#[test]
fn parity_relations() {
    for (p, n) in [(3u64, 1i64), (5, 1), (7, 1), (3, 2)] {
        let s = ps(p, n);
        let a = s.parity();
        assert!(a.mul(&a).is_identity());
        assert_eq!(s.parity_from_displacements(), a);
        let minus_i = s.metaplectic(&GL2Mat::scalar(s.field().from_int(-1))).unwrap();
        let sign = if n % 2 == 0 || (p - 1) % 4 == 0 { 1 } else { -1 };
        assert_eq!(a, minus_i.scale(&CycNumber::from_int(s.p(), sign)));
    }
}

#[test]
fn metaplectic_traces() {
    let s = ps(7, 1);
    let f = s.field();
    let sm = GL2Mat::from_ints(f, 0, -1, 1, 3);
    let direct = s.metaplectic(&sm).unwrap().trace();
    assert!(direct.is_one());
    assert_eq!(s.trace_of_metaplectic(&sm).unwrap(), direct);
    for alpha in 2..6 {
        let a = f.from_int(alpha);
        let diag = GL2Mat::new(a, Fe::ZERO, Fe::ZERO, f.inv(a).unwrap());
        let t = f.add(a, f.inv(a).unwrap());
        let expected = f.quadratic_character(f.sub(t, f.from_int(2)));
        let tr = s.metaplectic(&diag).unwrap().trace();
        assert_eq!(tr, CycNumber::from_int(7, expected as i64));
        assert_eq!(f.quadratic_character(a), expected);
    }
    assert_eq!(
        s.trace_of_metaplectic(&GL2Mat::identity()).unwrap(),
        CycNumber::from_int(7, 7)
    );
}
