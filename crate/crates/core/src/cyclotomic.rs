//! Exact arithmetic in the cyclotomic field Q(ω), ω = e^{2πi/p}, p an odd prime.
//!
//! Numbers are stored in the power basis {1, ω, …, ω^{p-2}} as an integer
//! numerator vector over one positive common denominator, always in lowest
//! terms. Small values live in machine integers; any overflow in the fast path
//! promotes the value to arbitrary precision, and results that fit again are
//! demoted, so the representation of a value is unique.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

/// Element of Q(ω_p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    p: u32,
    repr: Repr,
}

/// The automorphism g_k : ω ↦ ω^k of Q(ω_p).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisAuto {
    pub p: u32,
    pub k: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Div,
}

const SMALL_LIMIT: i128 = i64::MAX as i128;

impl CycNumber {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 3, "cyclotomic prime must be odd");
        CycNumber {
            p,
            repr: Repr::Small {
                num: vec![0; p as usize - 1],
                den: 1,
            },
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, k: i64) -> Self {
        let mut num = vec![0i128; p as usize - 1];
        num[0] = k as i128;
        Self::from_i128(p, num, 1)
    }

    pub fn from_ratio(p: u32, numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        let mut num = vec![0i128; p as usize - 1];
        num[0] = numer as i128;
        Self::from_i128(p, num, denom as i128)
    }

    pub fn from_rational(p: u32, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); p as usize - 1];
        num[0] = r.numer().clone();
        Self::from_big(p, num, r.denom().clone())
    }

    /// ω^k for any integer k.
    pub fn omega_pow(p: u32, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as usize;
        let m = p as usize - 1;
        let mut num = vec![0i128; m];
        if k == m {
            num.iter_mut().for_each(|c| *c = -1);
        } else {
            num[k] = 1;
        }
        Self::from_i128(p, num, 1)
    }

    /// Builds a number from rational power-basis coefficients.
    pub fn from_rationals(p: u32, coeffs: &[BigRational]) -> Self {
        assert_eq!(coeffs.len(), p as usize - 1, "wrong coefficient count");
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_big(p, num, den)
    }

    /// Builds a number from integer coefficients of 1, ω, …, ω^{p-1} (the
    /// full, redundant spanning set) over a common denominator.
    pub fn from_cyclic_ints(p: u32, cyclic: &[i64], den: i64) -> Self {
        assert_eq!(cyclic.len(), p as usize);
        let top = cyclic[p as usize - 1] as i128;
        let num = cyclic[..p as usize - 1]
            .iter()
            .map(|&c| c as i128 - top)
            .collect();
        Self::from_i128(p, num, den as i128)
    }

    fn from_i128(p: u32, mut num: Vec<i128>, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            if den == i128::MIN || num.contains(&i128::MIN) {
                return Self::from_big(
                    p,
                    num.into_iter().map(BigInt::from).collect(),
                    BigInt::from(den),
                );
            }
            den = -den;
            num.iter_mut().for_each(|c| *c = -*c);
        }
        if num.iter().all(|&c| c == 0) {
            return Self::zero(p);
        }
        let mut g = den as u128;
        for &c in &num {
            if g == 1 {
                break;
            }
            g = num_integer::gcd(g, c.unsigned_abs());
        }
        if g > 1 {
            let g = g as i128;
            num.iter_mut().for_each(|c| *c /= g);
            den /= g;
        }
        let fits = den <= SMALL_LIMIT && num.iter().all(|c| c.abs() <= SMALL_LIMIT);
        if fits {
            CycNumber {
                p,
                repr: Repr::Small {
                    num: num.into_iter().map(|c| c as i64).collect(),
                    den: den as i64,
                },
            }
        } else {
            CycNumber {
                p,
                repr: Repr::Big {
                    num: num.into_iter().map(BigInt::from).collect(),
                    den: BigInt::from(den),
                },
            }
        }
    }

    fn from_big(p: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        if num.iter().all(Zero::is_zero) {
            return Self::zero(p);
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        let small_den = den.to_i64().filter(|v| *v as i128 <= SMALL_LIMIT);
        let small_num: Option<Vec<i64>> = num
            .iter()
            .map(|c| c.to_i64().filter(|v| *v != i64::MIN))
            .collect();
        match (small_num, small_den) {
            (Some(num), Some(den)) => CycNumber {
                p,
                repr: Repr::Small { num, den },
            },
            _ => CycNumber {
                p,
                repr: Repr::Big { num, den },
            },
        }
    }

    fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.repr {
            Repr::Small { num, den } => (
                num.iter().map(|&c| BigInt::from(c)).collect(),
                BigInt::from(*den),
            ),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0),
            Repr::Big { .. } => false,
        }
    }

    /// Rational iff every non-constant coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num[1..].iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        }
    }

    /// Real iff fixed by complex conjugation g_{p-1}.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        let (num, den) = self.big_parts();
        Some(BigRational::new(num[0].clone(), den))
    }

    /// Power-basis coefficients in lowest terms.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let (num, den) = self.big_parts();
        num.into_iter()
            .map(|c| BigRational::new(c, den.clone()))
            .collect()
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing numbers from different cyclotomic fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) =
            (&self.repr, &other.repr)
        {
            if let Some(r) = small_add(self.p, a, *da, b, *db, 1) {
                return r;
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x * &db + y * &da)
            .collect();
        Self::from_big(self.p, num, da * db)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_field(other);
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) =
            (&self.repr, &other.repr)
        {
            if let Some(r) = small_add(self.p, a, *da, b, *db, -1) {
                return r;
            }
        }
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Small { num, den } => CycNumber {
                p: self.p,
                repr: Repr::Small {
                    num: num.iter().map(|c| -c).collect(),
                    den: *den,
                },
            },
            Repr::Big { num, den } => CycNumber {
                p: self.p,
                repr: Repr::Big {
                    num: num.iter().map(|c| -c).collect(),
                    den: den.clone(),
                },
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) =
            (&self.repr, &other.repr)
        {
            if let Some(r) = small_mul(self.p, a, *da, b, *db) {
                return r;
            }
        }
        let p = self.p as usize;
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let mut acc = vec![BigInt::zero(); p];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let k = if i + j >= p { i + j - p } else { i + j };
                acc[k] += x * y;
            }
        }
        let top = acc.pop().unwrap();
        let num = acc.into_iter().map(|c| c - &top).collect();
        Self::from_big(self.p, num, da * db)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(self.p, k))
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.mul(&Self::from_ratio(self.p, 1, k))
    }

    /// Multiplies by ω^k.
    pub fn mul_omega_pow(&self, k: i64) -> Self {
        let p = self.p as usize;
        let shift = k.rem_euclid(p as i64) as usize;
        if shift == 0 {
            return self.clone();
        }
        match &self.repr {
            Repr::Small { num, den } => {
                let mut cyc = vec![0i128; p];
                for (i, &c) in num.iter().enumerate() {
                    cyc[(i + shift) % p] = c as i128;
                }
                let top = cyc.pop().unwrap();
                let num = cyc.into_iter().map(|c| c - top).collect();
                Self::from_i128(self.p, num, *den as i128)
            }
            Repr::Big { num, den } => {
                let mut cyc = vec![BigInt::zero(); p];
                for (i, c) in num.iter().enumerate() {
                    cyc[(i + shift) % p] = c.clone();
                }
                let top = cyc.pop().unwrap();
                let num = cyc.into_iter().map(|c| c - &top).collect();
                Self::from_big(self.p, num, den.clone())
            }
        }
    }

    /// Applies g_k : ω ↦ ω^k (k taken mod p, must be nonzero).
    pub fn apply_auto(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = k as usize % p;
        assert!(k != 0, "g_0 is not an automorphism");
        if k == 1 {
            return self.clone();
        }
        match &self.repr {
            Repr::Small { num, den } => {
                let mut cyc = vec![0i128; p];
                for (i, &c) in num.iter().enumerate() {
                    cyc[(i * k) % p] = c as i128;
                }
                let top = cyc.pop().unwrap();
                let num = cyc.into_iter().map(|c| c - top).collect();
                Self::from_i128(self.p, num, *den as i128)
            }
            Repr::Big { num, den } => {
                let mut cyc = vec![BigInt::zero(); p];
                for (i, c) in num.iter().enumerate() {
                    cyc[(i * k) % p] = c.clone();
                }
                let top = cyc.pop().unwrap();
                let num = cyc.into_iter().map(|c| c - &top).collect();
                Self::from_big(self.p, num, den.clone())
            }
        }
    }

    /// Complex conjugate, g_{p-1}.
    pub fn conj(&self) -> Self {
        self.apply_auto(self.p - 1)
    }

    /// |x|^2 = x · conj(x).
    pub fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against
    /// 1 + x + … + x^{p-1}.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(self.p, &r.recip()));
        }
        let p = self.p as usize;
        let cyclotomic: Vec<BigRational> = vec![BigRational::one(); p];
        let a = qpoly::trim(self.coeffs());
        let (mut r0, mut r1) = (cyclotomic, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (quot, rem) = qpoly::divmod(&r0, &r1);
            let s2 = qpoly::sub(&s0, &qpoly::mul(&quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant because the modulus is irreducible
        if r0.len() != 1 {
            return Err(Error::Consistency("cyclotomic polynomial has a factor".into()));
        }
        let c = r0[0].clone();
        let s = qpoly::rem(&s0, &vec![BigRational::one(); p]);
        let mut coeffs: Vec<BigRational> = s.into_iter().map(|x| x / &c).collect();
        coeffs.resize(p - 1, BigRational::zero());
        Ok(Self::from_rationals(self.p, &coeffs))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn arith(&self, other: &Self, op: CycOp) -> Result<Self> {
        Ok(match op {
            CycOp::Add => self.add(other),
            CycOp::Sub => self.sub(other),
            CycOp::Mul => self.mul(other),
            CycOp::Div => self.div(other)?,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Norm down to Q: the product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let prod = (2..self.p).fold(self.clone(), |acc, k| acc.mul(&self.apply_auto(k)));
        prod.to_rational().expect("field norm is rational")
    }
}

fn small_add(p: u32, a: &[i64], da: i64, b: &[i64], db: i64, sign: i128) -> Option<CycNumber> {
    if da == db {
        let num = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| x as i128 + sign * y as i128)
            .collect();
        return Some(CycNumber::from_i128(p, num, da as i128));
    }
    let (da, db) = (da as i128, db as i128);
    let mut num = Vec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(b) {
        let l = (x as i128).checked_mul(db)?;
        let r = (y as i128).checked_mul(da)?.checked_mul(sign)?;
        num.push(l.checked_add(r)?);
    }
    Some(CycNumber::from_i128(p, num, da.checked_mul(db)?))
}

fn small_mul(p: u32, a: &[i64], da: i64, b: &[i64], db: i64) -> Option<CycNumber> {
    let p_us = p as usize;
    let mut acc = vec![0i128; p_us];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let k = if i + j >= p_us { i + j - p_us } else { i + j };
            acc[k] = acc[k].checked_add((x as i128).checked_mul(y as i128)?)?;
        }
    }
    let top = acc.pop().unwrap();
    let mut num = Vec::with_capacity(p_us - 1);
    for c in acc {
        num.push(c.checked_sub(top)?);
    }
    Some(CycNumber::from_i128(p, num, (da as i128).checked_mul(db as i128)?))
}

/// Polynomials over Q, little-endian, trimmed.
mod qpoly {
    use num_rational::BigRational;
    use num_traits::Zero;

    pub fn trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let len = a.len().max(b.len());
        let zero = BigRational::zero();
        trim(
            (0..len)
                .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead = &b[db];
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = r.last().unwrap() / lead;
            for (i, bi) in b.iter().enumerate() {
                r[i + shift] -= &c * bi;
            }
            q[shift] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        divmod(a, b).1
    }
}

impl PartialOrd for CycNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: by prime, then coefficient-wise as rationals. Only used for
/// canonical sorting; it has no arithmetic meaning.
impl Ord for CycNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p.cmp(&other.p).then_with(|| match (&self.repr, &other.repr) {
            (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| (x as i128 * *db as i128).cmp(&(y as i128 * *da as i128)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal),
            _ => {
                let (a, da) = self.big_parts();
                let (b, db) = other.big_parts();
                a.iter()
                    .zip(&b)
                    .map(|(x, y)| (x * &db).cmp(&(y * &da)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }
        })
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        let mut first = true;
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}w", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}w^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[p={}]({})", self.p, self)
    }
}

impl GaloisAuto {
    pub fn new(p: u32, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as u32;
        assert!(k != 0, "g_0 is not an automorphism");
        GaloisAuto { p, k }
    }

    pub fn identity(p: u32) -> Self {
        GaloisAuto { p, k: 1 }
    }

    pub fn conjugation(p: u32) -> Self {
        GaloisAuto { p, k: p - 1 }
    }

    pub fn is_identity(&self) -> bool {
        self.k == 1
    }

    pub fn apply(&self, x: &CycNumber) -> CycNumber {
        assert_eq!(self.p, x.p);
        x.apply_auto(self.k)
    }

    /// g_j ∘ g_k = g_{jk}.
    pub fn compose(&self, other: &GaloisAuto) -> GaloisAuto {
        assert_eq!(self.p, other.p);
        GaloisAuto::new(self.p, self.k as i64 * other.k as i64)
    }

    pub fn inverse(&self) -> GaloisAuto {
        let mut inv = 1u64;
        while (inv * self.k as u64) % self.p as u64 != 1 {
            inv += 1;
        }
        GaloisAuto::new(self.p, inv as i64)
    }

    pub fn pow(&self, e: u64) -> GaloisAuto {
        let mut acc = 1u64;
        for _ in 0..e % (self.p as u64 - 1) {
            acc = acc * self.k as u64 % self.p as u64;
        }
        GaloisAuto::new(self.p, acc as i64)
    }
}

/// Legendre symbol (k | p) for an odd prime p.
pub fn legendre(k: i64, p: u32) -> i8 {
    let k = k.rem_euclid(p as i64) as u64;
    if k == 0 {
        return 0;
    }
    let p = p as u64;
    let (mut base, mut e, mut acc) = (k, (p - 1) / 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Σ_{x ∈ residues} ω^x − Σ_{x ∈ non-residues} ω^x, equal to √p when
/// p ≡ 1 (mod 4) and i√p when p ≡ 3 (mod 4).
pub fn gauss_sum(p: u32) -> CycNumber {
    let cyclic: Vec<i64> = (0..p).map(|x| legendre(x as i64, p) as i64).collect();
    CycNumber::from_cyclic_ints(p, &cyclic, 1)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl JsonInt {
    fn to_big(&self) -> std::result::Result<BigInt, String> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumberJson {
    p: u32,
    num: Vec<JsonInt>,
    den: Vec<JsonInt>,
}

/// `{"p": p, "num": [...], "den": [...]}`, one reduced fraction per power-basis
/// coefficient; integers beyond 64 bits are written as decimal strings.
impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.coeffs();
        CycNumberJson {
            p: self.p,
            num: coeffs.iter().map(|c| JsonInt::from(c.numer())).collect(),
            den: coeffs.iter().map(|c| JsonInt::from(c.denom())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycNumberJson::deserialize(d)?;
        if raw.p < 3 || raw.num.len() != raw.p as usize - 1 || raw.den.len() != raw.num.len() {
            return Err(D::Error::custom("malformed cyclotomic number"));
        }
        let mut coeffs = Vec::with_capacity(raw.num.len());
        for (n, d) in raw.num.iter().zip(&raw.den) {
            let n = n.to_big().map_err(D::Error::custom)?;
            let d = d.to_big().map_err(D::Error::custom)?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, d));
        }
        Ok(CycNumber::from_rationals(raw.p, &coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cyc(p: u32) -> impl Strategy<Value = CycNumber> {
        (
            prop::collection::vec(-20i64..20, p as usize - 1),
            1i64..12,
        )
            .prop_map(move |(c, den)| {
                let mut cyc = c;
                cyc.push(0);
                CycNumber::from_cyclic_ints(p, &cyc, den)
            })
    }

    fn w(p: u32, k: i64) -> CycNumber {
        CycNumber::omega_pow(p, k)
    }

    #[test]
    fn basic_reduction() {
        let one_plus_w = CycNumber::one(5).add(&w(5, 1));
        assert_eq!(one_plus_w.mul(&CycNumber::one(5)), one_plus_w);
        let w2 = w(3, 1).mul(&w(3, 1));
        assert_eq!(w2, CycNumber::from_int(3, -1).sub(&w(3, 1)));
        assert_eq!(w(7, 7), CycNumber::one(7));
        assert!(!w(5, 1).is_rational());
        assert!(w(5, 1).add(&w(5, 4)).is_real());
    }

    #[test]
    fn gauss_sum_squares() {
        for p in [3u32, 5, 7, 11, 13, 17, 19] {
            let g = gauss_sum(p);
            let expected = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            assert_eq!(g.mul(&g), CycNumber::from_int(p, expected), "p = {p}");
            assert_eq!(g.is_real(), p % 4 == 1);
            for k in 1..p {
                let sign = legendre(k as i64, p) as i64;
                assert_eq!(g.apply_auto(k), g.mul_int(sign));
            }
        }
        assert_eq!(gauss_sum(3), w(3, 1).sub(&w(3, 2)));
        // the literal sum of ω^{x^2} agrees
        for p in [3u32, 5, 7, 11] {
            let direct = (0..p as i64).fold(CycNumber::zero(p), |acc, x| acc.add(&w(p, x * x)));
            assert_eq!(direct, gauss_sum(p));
        }
    }

    #[test]
    fn golden_ratio_vector_is_not_norm_preserved() {
        let p = 5;
        let a = w(p, 2).add(&w(p, 3));
        let b = w(p, 4).add(&w(p, 1));
        assert_eq!(a.apply_auto(2), b);
        let four = CycNumber::from_int(p, 4);
        assert_ne!(four.add(&a.mul(&a)), four.add(&b.mul(&b)));
    }

    #[test]
    fn big_path_promotes_and_demotes() {
        let huge = CycNumber::from_int(5, i64::MAX).add(&w(5, 2));
        let sq = huge.mul(&huge);
        assert!(matches!(sq.repr, Repr::Big { .. }));
        let back = sq.div(&huge).unwrap();
        assert_eq!(back, huge);
        let zero = sq.sub(&sq);
        assert!(zero.is_zero());
        assert!(matches!(zero.repr, Repr::Small { .. }));
    }

    #[test]
    fn inverse_via_norm_oracle() {
        // x^{-1} = (prod of other conjugates) / N(x)
        for p in [3u32, 5, 7, 11] {
            let x = CycNumber::from_cyclic_ints(
                p,
                &(0..p as i64).map(|i| (i * i + 3 * i + 1) % 7 - 3).collect::<Vec<_>>(),
                4,
            );
            let others = (2..p).fold(CycNumber::one(p), |acc, k| acc.mul(&x.apply_auto(k)));
            let n = x.norm();
            let oracle = others.mul(&CycNumber::from_rational(p, &n.recip()));
            assert_eq!(x.inv().unwrap(), oracle);
        }
        assert_eq!(CycNumber::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn json_roundtrip() {
        let x = CycNumber::from_ratio(5, 1, 3).add(&w(5, 2).mul_int(-2));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":5,"num":[1,0,-2,0],"den":[3,1,1,1]}"#);
        let back: CycNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_cyc(7), b in arb_cyc(7), c in arb_cyc(7)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn automorphisms_are_field_homomorphisms(a in arb_cyc(11), b in arb_cyc(11), k in 1u32..11, j in 1u32..11) {
            prop_assert_eq!(a.mul(&b).apply_auto(k), a.apply_auto(k).mul(&b.apply_auto(k)));
            prop_assert_eq!(a.add(&b).apply_auto(k), a.apply_auto(k).add(&b.apply_auto(k)));
            prop_assert_eq!(a.apply_auto(k).apply_auto(j), a.apply_auto((j * k) % 11));
            let g = GaloisAuto::new(11, k as i64);
            prop_assert_eq!(g.inverse().apply(&g.apply(&a)), a.clone());
            prop_assert_eq!(a.apply_auto(1), a.clone());
        }
    }
}
