mod common;

use common::zp;
use galmub_core::finite_field::{Fe, FiniteField, QuadraticExtension};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn field(p: u64, n: i64) -> FiniteField {
    FiniteField::new(p, n).unwrap()
}

/// Monic polynomials of degree n in lexicographic order of (c_{n-1}, …, c_0).
fn first_irreducible(p: u32, n: usize) -> Vec<u32> {
    let count = (p as usize).pow(n as u32);
    for idx in 0..count {
        // most significant digit is c_{n-1}
        let mut coeffs = vec![0u32; n];
        let mut rest = idx;
        for k in (0..n).rev() {
            coeffs[k] = (rest / (p as usize).pow(k as u32)) as u32 % p;
            rest %= (p as usize).pow(k as u32);
        }
        coeffs.push(1);
        if zp::is_irreducible_brute(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!()
}

#[test]
fn moduli() {
    assert_eq!(field(3, 2).modulus(), &[1, 0, 1]);
    assert_eq!(field(5, 1).modulus(), &[0, 1]);
    for (p, n) in [(3u32, 3usize), (3, 2), (5, 2), (7, 2), (3, 4)] {
        assert_eq!(field(p as u64, n as i64).modulus(), first_irreducible(p, n).as_slice());
    }
}

#[test]
fn multiplication_matches_polynomial_oracle() {
    for (p, n) in [(3u64, 2i64), (3, 3), (5, 2), (7, 3)] {
        let f = field(p, n);
        let m = f.modulus().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (a, b) = (f.random(&mut rng), f.random(&mut rng));
            let prod = zp::mulmod(&f.coeffs(a), &f.coeffs(b), &m, p as u32);
            let mut padded = prod.clone();
            padded.resize(n as usize, 0);
            assert_eq!(f.coeffs(f.mul(a, b)), padded);
        }
    }
}

#[test]
fn lambda_squared_in_gf9() {
    let f = field(3, 2);
    let lambda = f.from_coeffs(&[0, 1]);
    assert_eq!(f.mul(lambda, lambda), f.from_int(2));
    assert_eq!(f.trace(lambda), 0);
    // λ + λ³ by repeated multiplication
    let l3 = f.mul(lambda, f.mul(lambda, lambda));
    assert_eq!(f.add(lambda, l3), Fe::ZERO);
}

#[test]
fn frobenius_fixes_everything() {
    for (p, n) in [(3u64, 3i64), (5, 2), (7, 1)] {
        let f = field(p, n);
        let q = f.size();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            let mut acc = Fe::ONE;
            for _ in 0..q {
                acc = f.mul(acc, a);
            }
            assert_eq!(acc, a);
        }
    }
}

#[test]
fn trace_is_sum_of_conjugates() {
    for (p, n) in [(3u64, 3i64), (5, 2), (3, 2)] {
        let f = field(p, n);
        for a in f.elements() {
            let mut conj = a;
            let mut acc = Fe::ZERO;
            for _ in 0..n {
                acc = f.add(acc, conj);
                conj = f.pow(conj, p);
            }
            assert!(f.is_in_prime_field(acc));
            assert_eq!(acc.index() as u32, f.trace(a));
        }
    }
}

fn brute_order(f: &FiniteField, a: Fe) -> usize {
    let mut x = a;
    let mut k = 1;
    while x != Fe::ONE {
        x = f.mul(x, a);
        k += 1;
    }
    k
}

#[test]
fn primitive_elements() {
    assert_eq!(field(5, 1).primitive_element(), field(5, 1).from_int(2));
    assert_eq!(field(3, 1).primitive_element(), field(3, 1).from_int(2));
    for (p, n) in [(3u64, 2i64), (5, 2), (3, 3), (7, 1)] {
        let f = field(p, n);
        let first = f
            .nonzero_elements()
            .find(|&a| brute_order(&f, a) == f.size() - 1)
            .unwrap();
        assert_eq!(f.primitive_element(), first);
    }
}

#[test]
fn characters_and_roots() {
    let f5 = field(5, 1);
    let squares: Vec<usize> = f5
        .nonzero_elements()
        .filter(|&x| f5.quadratic_character(x) == 1)
        .map(|x| x.index())
        .collect();
    assert_eq!(squares, [1, 4]);
    assert_eq!(f5.quadratic_character(f5.from_int(2)), -1);
    assert_eq!(field(3, 1).quadratic_character(field(3, 1).from_int(2)), -1);
    assert_eq!(f5.sqrt(f5.from_int(4)), Some(f5.from_int(2)));
    assert_eq!(f5.sqrt(Fe::ZERO), Some(Fe::ZERO));
    let f7 = field(7, 1);
    assert_eq!(f7.sqrt(f7.from_int(3)), None);
    for (p, n) in [(3u64, 3i64), (5, 2), (11, 1)] {
        let f = field(p, n);
        for a in f.nonzero_elements() {
            let is_sq = f.elements().any(|x| f.mul(x, x) == a);
            assert_eq!(f.quadratic_character(a) == 1, is_sq);
        }
    }
}

#[test]
fn eta_orders() {
    for (p, n) in [(7u64, 1i64), (3, 3), (5, 1), (3, 1)] {
        let f = Arc::new(field(p, n));
        let ext = QuadraticExtension::new(f.clone()).unwrap();
        let big = ext.big();
        let d = f.size() as u64;
        let eta = ext.eta();
        let order = brute_order(big, eta) as u64;
        assert_eq!(order, (p - 1) * (d + 1));
        assert_eq!(ext.eta_order(), order);
        let nd = big.pow(eta, d + 1);
        assert_eq!(big.pow(nd, p), nd);
        assert!(ext.pullback(nd).is_some());
    }
    let f = Arc::new(field(7, 1));
    assert_eq!(QuadraticExtension::new(f).unwrap().eta_order(), 48);
}

#[test]
fn bad_parameters() {
    assert!(FiniteField::new(4, 1).is_err());
    assert!(FiniteField::new(2, 1).is_err());
    assert!(FiniteField::new(3, 0).is_err());
}

proptest! {
    #[test]
    fn field_axioms(a in 0usize..27, b in 0usize..27, c in 0usize..27) {
        let f = field(3, 3);
        let (a, b, c) = (f.element(a), f.element(b), f.element(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        prop_assert_eq!(f.mul(a, Fe::ONE), a);
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 3);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        }
    }
}
