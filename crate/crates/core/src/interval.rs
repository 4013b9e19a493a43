//! Rigorous numerical enclosures of cyclotomic numbers, used only for reports.
//!
//! Values are fixed-point balls `(mid ± rad) / 2^scale` over BigInt. The
//! exact core never depends on anything here.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::CycNumber;

/// Extra bits carried internally beyond the requested precision.
const GUARD_BITS: u32 = 96;
/// Bound on the accumulated error of each cos/sin table entry, in units of
/// the internal scale. Actual errors are a few hundred ulps at most.
const TRIG_ERROR_ULPS: u64 = 1 << 32;

/// The closed interval [(mid - rad) / 2^scale, (mid + rad) / 2^scale].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mid: BigInt,
    rad: BigInt,
    scale: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Real,
    pub im: Real,
}

fn atan_inv(k: u64, scale: u32) -> BigInt {
    let k2 = BigInt::from(k * k);
    let mut term = (BigInt::one() << scale) / k;
    let mut sum = BigInt::zero();
    let mut i = 0u64;
    while !term.is_zero() {
        let t = &term / (2 * i + 1);
        if i.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &k2;
        i += 1;
    }
    sum
}

fn pi_fixed(scale: u32) -> BigInt {
    atan_inv(5, scale) * 16 - atan_inv(239, scale) * 4
}

/// cos θ and sin θ for |θ| ≤ 4, θ given at `scale`.
fn cos_sin_fixed(theta: &BigInt, scale: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << scale;
    let theta2 = (theta * theta) >> scale;
    let mut cos = one.clone();
    let mut term = one;
    let mut i = 1u64;
    loop {
        term = -((&term * &theta2) >> scale) / ((2 * i - 1) * (2 * i));
        if term.is_zero() {
            break;
        }
        cos += &term;
        i += 1;
    }
    let mut sin = theta.clone();
    let mut term = theta.clone();
    let mut i = 1u64;
    loop {
        term = -((&term * &theta2) >> scale) / ((2 * i) * (2 * i + 1));
        if term.is_zero() {
            break;
        }
        sin += &term;
        i += 1;
    }
    (cos, sin)
}

/// Precomputed enclosures of ω^k = e^{2πik/p}, k = 0..p-1.
#[derive(Clone, Debug)]
pub struct Embedder {
    p: u32,
    scale: u32,
    cos: Vec<BigInt>,
    sin: Vec<BigInt>,
}

impl Embedder {
    pub fn new(p: u32, precision: u32) -> Self {
        assert!(precision >= 64, "precision must be at least 64 bits");
        let scale = precision + GUARD_BITS;
        let work = scale + 16;
        let pi = pi_fixed(work);
        let mut cos = Vec::with_capacity(p as usize);
        let mut sin = Vec::with_capacity(p as usize);
        for k in 0..p as i64 {
            // reduce the angle into [-π, π]
            let k = if 2 * k > p as i64 { k - p as i64 } else { k };
            let theta = (&pi * (2 * k)) / (p as i64);
            let (c, s) = cos_sin_fixed(&theta, work);
            cos.push(c >> 16);
            sin.push(s >> 16);
        }
        Embedder { p, scale, cos, sin }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn embed(&self, x: &CycNumber) -> ComplexInterval {
        assert_eq!(x.p(), self.p);
        if let Some(r) = x.to_rational() {
            return ComplexInterval {
                re: Real::exact_or_ulp(&r, self.scale),
                im: Real {
                    mid: BigInt::zero(),
                    rad: BigInt::zero(),
                    scale: self.scale,
                },
            };
        }
        let coeffs = x.coeffs();
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        let mut abs_sum = BigInt::zero();
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = c.numer() * (&den / c.denom());
            re += &n * &self.cos[j];
            im += &n * &self.sin[j];
            abs_sum += n.abs();
        }
        let rad = (abs_sum * TRIG_ERROR_ULPS + &den - 1u32) / &den + 1u32;
        ComplexInterval {
            re: Real {
                mid: re.div_floor(&den),
                rad: rad.clone(),
                scale: self.scale,
            },
            im: Real {
                mid: im.div_floor(&den),
                rad,
                scale: self.scale,
            },
        }
    }
}

/// Encloses x evaluated at ω = e^{2πi/p}.
pub fn embed(x: &CycNumber, precision: u32) -> ComplexInterval {
    Embedder::new(x.p(), precision).embed(x)
}

fn shift_floor(v: &BigInt, bits: i64) -> BigInt {
    if bits >= 0 {
        v >> bits as usize
    } else {
        v << (-bits) as usize
    }
}

fn shift_ceil(v: &BigInt, bits: i64) -> BigInt {
    -shift_floor(&-v, bits)
}

impl Real {
    pub fn from_rational(r: &BigRational, precision: u32) -> Self {
        Real::exact_or_ulp(r, precision + GUARD_BITS)
    }

    /// Zero radius when r is a dyadic fraction representable at this scale.
    fn exact_or_ulp(r: &BigRational, scale: u32) -> Self {
        let scaled = r.numer() << scale as usize;
        let (mid, rem) = scaled.div_mod_floor(r.denom());
        Real {
            mid,
            rad: if rem.is_zero() { BigInt::zero() } else { BigInt::one() },
            scale,
        }
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, BigInt::one() << self.scale as usize)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, BigInt::one() << self.scale as usize)
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lower() <= *r && *r <= self.upper()
    }

    pub fn overlaps(&self, other: &Real) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Width of the enclosure as a power of two exponent bound.
    pub fn radius_bits(&self) -> i64 {
        self.rad.bits() as i64 - self.scale as i64
    }

    /// Outward-rounded f64 bounds.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let shift = self.scale as i64 - 64;
        let lo = shift_floor(&(&self.mid - &self.rad), shift);
        let hi = shift_ceil(&(&self.mid + &self.rad), shift);
        let lo = lo.to_f64().unwrap_or(f64::NEG_INFINITY) * 2f64.powi(-64);
        let hi = hi.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-64);
        (lo.next_down(), hi.next_up())
    }

    pub fn midpoint_f64(&self) -> f64 {
        let shift = self.scale as i64 - 64;
        shift_floor(&self.mid, shift).to_f64().unwrap_or(f64::NAN) * 2f64.powi(-64)
    }

    pub fn add(&self, other: &Real) -> Real {
        assert_eq!(self.scale, other.scale);
        Real {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            scale: self.scale,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        assert_eq!(self.scale, other.scale);
        Real {
            mid: &self.mid - &other.mid,
            rad: &self.rad + &other.rad,
            scale: self.scale,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        assert_eq!(self.scale, other.scale);
        let s = self.scale as usize;
        let mid = (&self.mid * &other.mid) >> s;
        let err = self.mid.abs() * &other.rad + other.mid.abs() * &self.rad + &self.rad * &other.rad;
        let rad = (err >> s) + 2u32;
        Real {
            mid,
            rad,
            scale: self.scale,
        }
    }

    /// Decimal rendering of the midpoint with `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10u32).pow(digits as u32);
        let half = BigInt::one() << (self.scale as usize - 1);
        let q = (&self.mid * ten + half) >> self.scale as usize;
        let neg = q.sign() == Sign::Minus;
        let s = q.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Number of decimal digits the enclosure supports at its precision.
    pub fn natural_digits(&self) -> usize {
        let bits = (self.scale as i64 - self.rad.bits() as i64 - 1).max(0) as f64;
        (bits * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl ComplexInterval {
    pub fn mul(&self, other: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn overlaps(&self, other: &ComplexInterval) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        let im = self.im.to_decimal(digits);
        match im.strip_prefix('-') {
            Some(abs) => format!("{} - {abs}i", self.re.to_decimal(digits)),
            None => format!("{} + {im}i", self.re.to_decimal(digits)),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.natural_digits().min(40)))
    }
}

/// Outward-rounded enclosure of log2 over [lo, hi].
pub fn log2_bounds(lo: f64, hi: f64) -> (f64, f64) {
    let l = if lo <= 0.0 {
        f64::NEG_INFINITY
    } else {
        lo.log2().next_down().next_down()
    };
    (l, hi.log2().next_up().next_up())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::gauss_sum;

    fn w(p: u32, k: i64) -> CycNumber {
        CycNumber::omega_pow(p, k)
    }

    #[test]
    fn one_is_tight() {
        let e = embed(&CycNumber::one(7), 128);
        assert!(e.re.contains(&BigRational::one()));
        assert!(e.im.contains(&BigRational::zero()));
        assert!(e.re.radius_bits() < -100);
    }

    #[test]
    fn golden_ratio_values() {
        let a = embed(&w(5, 2).add(&w(5, 3)), 128);
        assert_eq!(&a.re.to_decimal(6), "-1.618034");
        assert!((a.re.midpoint_f64() + (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let b = embed(&w(5, 1).add(&w(5, 4)), 128);
        assert_eq!(&b.re.to_decimal(6), "0.618034");
        assert_eq!(&b.im.to_decimal(6), "0.000000");
    }

    #[test]
    fn sixty_digit_golden_ratio() {
        // (√5 - 1)/2 to 60 places
        let b = embed(&w(5, 1).add(&w(5, 4)), 256);
        assert_eq!(
            b.re.to_decimal(60),
            "0.618033988749894848204586834365638117720309179805762862135449"
        );
    }

    #[test]
    fn conjugation_and_gauss_sum() {
        for p in [3u32, 5, 7, 11, 13] {
            let g = embed(&gauss_sum(p), 128);
            let root = (p as f64).sqrt();
            if p % 4 == 1 {
                assert!((g.re.midpoint_f64() - root).abs() < 1e-12);
                assert!(g.im.midpoint_f64().abs() < 1e-12);
            } else {
                assert!((g.im.midpoint_f64() - root).abs() < 1e-12);
            }
            let x = w(p, 1).mul_int(3).add(&w(p, 2).div_int(7));
            let a = embed(&x, 128);
            let b = embed(&x.conj(), 128);
            assert!(a.re.overlaps(&b.re));
            let neg = Real {
                mid: -b.im.mid.clone(),
                rad: b.im.rad.clone(),
                scale: b.im.scale,
            };
            assert!(a.im.overlaps(&neg));
        }
    }

    #[test]
    fn embedding_respects_products() {
        let p = 7;
        let x = w(p, 1).add(&CycNumber::from_ratio(p, 2, 3));
        let y = w(p, 3).mul_int(-4).add(&w(p, 5));
        let emb = Embedder::new(p, 96);
        assert!(emb.embed(&x.mul(&y)).overlaps(&emb.embed(&x).mul(&emb.embed(&y))));
        let z = x.mul(&y).add(&CycNumber::from_ratio(p, 1, 1000));
        assert!(!emb.embed(&z).overlaps(&emb.embed(&x).mul(&emb.embed(&y))));
    }

    #[test]
    fn log2_bounds_bracket() {
        let (lo, hi) = log2_bounds(4.0, 4.0);
        assert!(lo < 2.0 && 2.0 < hi);
        let r = embed(&CycNumber::from_ratio(3, 1, 3), 64);
        let (lo, hi) = r.re.to_f64_bounds();
        assert!(lo < 1.0 / 3.0 && 1.0 / 3.0 < hi);
    }
}
