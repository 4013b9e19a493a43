//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use galmub_core::{CycMatrix, CycNumber, CycVector};
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    pub fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    pub fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    pub fn conj(self) -> C64 {
        C64::new(self.re, -self.im)
    }
    pub fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    pub fn close(self, o: C64, tol: f64) -> bool {
        (self.re - o.re).abs() < tol && (self.im - o.im).abs() < tol
    }
}

pub fn omega(p: u32, k: i64) -> C64 {
    let t = 2.0 * std::f64::consts::PI * (k.rem_euclid(p as i64) as f64) / p as f64;
    C64::new(t.cos(), t.sin())
}

/// Σ c_k ω^k over the power-basis coefficients, in double precision.
pub fn to_c64(x: &CycNumber) -> C64 {
    let p = x.p();
    x.coeffs()
        .iter()
        .enumerate()
        .fold(C64::new(0.0, 0.0), |acc, (k, c)| {
            let c = c.to_f64().unwrap();
            let w = omega(p, k as i64);
            acc.add(C64::new(c * w.re, c * w.im))
        })
}

pub fn vec_c64(v: &CycVector) -> Vec<C64> {
    v.entries().iter().map(to_c64).collect()
}

pub fn mat_c64(m: &CycMatrix) -> Vec<Vec<C64>> {
    (0..m.dim()).map(|i| m.row(i).iter().map(to_c64).collect()).collect()
}

pub fn inner_c64(a: &[C64], b: &[C64]) -> C64 {
    a.iter()
        .zip(b)
        .fold(C64::new(0.0, 0.0), |acc, (x, y)| acc.add(x.conj().mul(*y)))
}

/// Dense polynomials over Z/p, constant term first.
pub mod zp {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let dm = m.len() - 1;
        while a.len() > dm {
            let lead = *a.last().unwrap() as u64;
            let shift = a.len() - 1 - dm;
            for (k, &c) in m.iter().enumerate() {
                let v = (a[shift + k] as u64 + (p as u64 - lead) * c as u64) % p as u64;
                a[shift + k] = v as u32;
            }
            a = trim(a);
        }
        a
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    /// Irreducible iff no monic factor of degree ≤ deg/2 divides it, by
    /// enumerating all such factors.
    pub fn is_irreducible_brute(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        for deg in 1..=n / 2 {
            let count = (p as usize).pow(deg as u32);
            for idx in 0..count {
                let mut g: Vec<u32> = (0..deg)
                    .map(|k| ((idx / (p as usize).pow(k as u32)) % p as usize) as u32)
                    .collect();
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}
