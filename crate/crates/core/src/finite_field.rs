//! Arithmetic in GF(p^n) for odd primes p.
//!
//! Elements are handles ([`Fe`]) into a [`FiniteField`]; the handle value is the
//! little-endian base-p encoding of the coefficient vector, so `Fe(0)` is zero,
//! `Fe(1)` is one and `Fe(k)` for `k < p` is the prime-field residue `k`.
//! Multiplication goes through discrete-log tables built from the
//! lexicographically smallest primitive element.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// Handle to an element of a particular [`FiniteField`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Position of the element in the canonical enumeration of the field.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field: characteristic, degree and the
/// monic modulus (constant term first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
}

#[derive(Debug)]
pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Fe,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= m {
        if m.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k * k <= m {
        if m.is_multiple_of(k) {
            out.push(k);
            while m.is_multiple_of(k) {
                m /= k;
            }
        }
        k += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Dense polynomial arithmetic over GF(p), little-endian, used while the
/// log tables do not exist yet.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, p as i64, a as i64);
        while new_r != 0 {
            let qt = r / new_r;
            (t, new_t) = (new_t, t - qt * new_t);
            (r, new_r) = (new_r, r - qt * new_r);
        }
        t.rem_euclid(p as i64) as u32
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|v| v as u32).collect())
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let v = (r[i + shift] as u64 + (p as u64 - c) * mi as u64) % p as u64;
                r[i + shift] = v as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(a, m, p);
        let mut acc = rem(&[1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Irreducibility of a monic polynomial of degree n: no factor shares a
    /// root with x^(p^k) - x for k < n.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 1..n {
            h = powmod(&h, p as u64, f, p);
            let g = gcd(&sub(&h, &x, p), f, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FiniteField {
    /// Builds GF(p^n) with the lexicographically smallest monic irreducible
    /// modulus and primitive element.
    pub fn new(p: u64, n: i64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if n < 1 {
            return Err(Error::BadExponent(n));
        }
        let n = n as u32;
        let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = smallest_irreducible(p, n);
        Ok(Self::with_modulus(p, n, q, modulus))
    }

    fn with_modulus(p: u32, n: u32, q: u32, modulus: Vec<u32>) -> Self {
        let group_order = (q - 1) as u64;
        let factors = prime_factors(group_order);
        let digits = |mut idx: u32| -> Vec<u32> {
            let mut out = Vec::with_capacity(n as usize);
            for _ in 0..n {
                out.push(idx % p);
                idx /= p;
            }
            poly::trim(out)
        };
        let primitive = (1..q)
            .find(|&cand| {
                let c = digits(cand);
                let full = poly::powmod(&c, group_order, &modulus, p);
                full == vec![1]
                    && factors
                        .iter()
                        .all(|&f| poly::powmod(&c, group_order / f, &modulus, p) != vec![1])
            })
            .expect("a finite field always has a primitive element");
        let encode = |c: &[u32]| -> u32 {
            c.iter().rev().fold(0u32, |acc, &x| acc * p + x)
        };
        let theta = digits(primitive);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for k in 0..(q - 1) {
            let idx = encode(&cur);
            exp.push(idx);
            log[idx as usize] = k;
            cur = poly::mulmod(&cur, &theta, &modulus, p);
        }
        let mut field = FiniteField {
            p,
            n,
            q,
            modulus,
            primitive: Fe(primitive),
            exp,
            log,
            trace: Vec::new(),
        };
        let trace = (0..q)
            .map(|idx| {
                let mut acc = Fe::ZERO;
                let mut cur = Fe(idx);
                for _ in 0..n {
                    acc = field.add(acc, cur);
                    cur = field.pow(cur, p as u64);
                }
                debug_assert!(acc.0 < p);
                acc.0
            })
            .collect();
        field.trace = trace;
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of elements, p^n.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> {
        (1..self.q).map(Fe)
    }

    pub fn element(&self, index: usize) -> Fe {
        assert!(index < self.size(), "element index out of range");
        Fe(index as u32)
    }

    /// Prime-field element congruent to `k`.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        assert!(coeffs.len() <= self.n as usize, "too many coefficients");
        Fe(coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p))
    }

    /// Coefficients of the element, constant term first, always length n.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut idx = a.0;
        (0..self.n)
            .map(|_| {
                let c = idx % self.p;
                idx /= self.p;
                c
            })
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.q))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.n == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.n {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.n == 1 {
            return Fe((self.p - a.0) % self.p);
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        for _ in 0..self.n {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Fe(self.exp[(s % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for a possibly negative exponent.
    pub fn pow_signed(&self, a: Fe, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn arith(&self, a: Fe, b: Fe, op: FieldOp) -> Result<Fe> {
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
            FieldOp::Pow(e) => self.pow(a, e),
        })
    }

    /// Absolute trace a + a^p + ... + a^(p^(n-1)) as a residue in 0..p.
    pub fn trace(&self, a: Fe) -> u32 {
        self.trace[a.0 as usize]
    }

    pub fn trace_elem(&self, a: Fe) -> Fe {
        Fe(self.trace(a))
    }

    pub fn primitive_element(&self) -> Fe {
        self.primitive
    }

    /// Discrete logarithm to the base of the primitive element.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Power of the primitive element.
    pub fn exp(&self, k: u64) -> Fe {
        Fe(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    pub fn multiplicative_order(&self, a: Fe) -> Option<u64> {
        let l = self.log(a)? as u64;
        let m = (self.q - 1) as u64;
        Some(m / num_integer::gcd(l, m))
    }

    pub fn is_in_prime_field(&self, a: Fe) -> bool {
        a.0 < self.p
    }

    /// Quadratic character via Euler's criterion: +1, -1, or 0 at zero.
    pub fn quadratic_character(&self, a: Fe) -> i8 {
        if a.0 == 0 {
            return 0;
        }
        let e = self.pow(a, (self.q as u64 - 1) / 2);
        if e == Fe::ONE {
            1
        } else {
            debug_assert_eq!(e, self.from_int(-1));
            -1
        }
    }

    /// Square root, choosing the smaller of the two roots in the enumeration.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(Fe::ZERO);
        }
        let l = self.log[a.0 as usize];
        if l % 2 == 1 {
            return None;
        }
        let r = Fe(self.exp[(l / 2) as usize]);
        Some(r.min(self.neg(r)))
    }

    /// The inverse of 2.
    pub fn half(&self) -> Fe {
        self.from_int((self.p as i64 + 1) / 2)
    }

    /// Evaluates a polynomial with prime-field coefficients at `x`.
    pub fn eval_poly(&self, coeffs: &[u32], x: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), Fe(c % self.p)))
    }
}

fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(n);
    (0..count)
        .map(|idx| {
            let mut c = Vec::with_capacity(n as usize + 1);
            let mut k = idx;
            for _ in 0..n {
                c.push((k % p as u64) as u32);
                k /= p as u64;
            }
            c.push(1);
            c
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// GF(d^2) built independently of GF(d), with the embedding obtained from the
/// smallest root of the GF(d) modulus.
#[derive(Debug)]
pub struct QuadraticExtension {
    small: Arc<FiniteField>,
    big: FiniteField,
    embedding: Vec<Fe>,
    pullback: HashMap<Fe, Fe>,
}

impl QuadraticExtension {
    pub fn new(small: Arc<FiniteField>) -> Result<Self> {
        let big = FiniteField::new(small.p as u64, 2 * small.n as i64)?;
        let root = big
            .elements()
            .find(|&x| big.eval_poly(small.modulus(), x).is_zero())
            .ok_or_else(|| Error::Consistency("modulus has no root in the extension".into()))?;
        let embedding: Vec<Fe> = small
            .elements()
            .map(|a| big.eval_poly(&small.coeffs(a), root))
            .collect();
        let pullback = embedding
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, Fe(i as u32)))
            .collect();
        Ok(Self {
            small,
            big,
            embedding,
            pullback,
        })
    }

    pub fn base(&self) -> &FiniteField {
        &self.small
    }

    pub fn big(&self) -> &FiniteField {
        &self.big
    }

    pub fn embed(&self, a: Fe) -> Fe {
        self.embedding[a.index()]
    }

    /// Inverse of the embedding on its image.
    pub fn pullback(&self, b: Fe) -> Option<Fe> {
        self.pullback.get(&b).copied()
    }

    /// η = θ̄^((d-1)/(p-1)) for the primitive element θ̄ of GF(d^2); its
    /// multiplicative order is (p-1)(d+1).
    pub fn eta(&self) -> Fe {
        let d = self.small.q as u64;
        let p = self.small.p as u64;
        self.big.pow(self.big.primitive, (d - 1) / (p - 1))
    }

    /// Order of η.
    pub fn eta_order(&self) -> u64 {
        let d = self.small.q as u64;
        (self.small.p as u64 - 1) * (d + 1)
    }
}
