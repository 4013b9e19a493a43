//! Displacement operators, the metaplectic representation of SL(2, F_d) and
//! the parity operator, as exact matrices over Q(ω_p).
//!
//! Basis states |x⟩ are indexed by the field enumeration of x ∈ F_d.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclotomic::{gauss_sum, CycNumber};
use crate::error::{Error, Result};
use crate::finite_field::{Fe, FiniteField, QuadraticExtension};
use crate::gl2::GL2Mat;
use crate::linalg::CycMatrix;

/// A point u = (u1, u2) of the phase space F_d².
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PhasePoint {
    pub u1: Fe,
    pub u2: Fe,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint {
        u1: Fe::ZERO,
        u2: Fe::ZERO,
    };

    pub fn new(u1: Fe, u2: Fe) -> Self {
        PhasePoint { u1, u2 }
    }

    pub fn add(self, f: &FiniteField, other: PhasePoint) -> PhasePoint {
        PhasePoint::new(f.add(self.u1, other.u1), f.add(self.u2, other.u2))
    }

    pub fn sub(self, f: &FiniteField, other: PhasePoint) -> PhasePoint {
        PhasePoint::new(f.sub(self.u1, other.u1), f.sub(self.u2, other.u2))
    }

    pub fn neg(self, f: &FiniteField) -> PhasePoint {
        PhasePoint::new(f.neg(self.u1), f.neg(self.u2))
    }

    pub fn scale(self, f: &FiniteField, c: Fe) -> PhasePoint {
        PhasePoint::new(f.mul(c, self.u1), f.mul(c, self.u2))
    }
}

/// Ω(u, v) = u2·v1 − u1·v2.
pub fn symplectic_form(f: &FiniteField, u: PhasePoint, v: PhasePoint) -> Fe {
    f.sub(f.mul(u.u2, v.u1), f.mul(u.u1, v.u2))
}

/// The Hilbert space C^d with d = p^n together with the field data every
/// operator construction needs.
#[derive(Debug)]
pub struct PhaseSpace {
    field: Arc<FiniteField>,
    gauss: CycNumber,
    omega: Vec<CycNumber>,
    fourier_norm: CycNumber,
    ext: OnceLock<Arc<QuadraticExtension>>,
}

impl PhaseSpace {
    pub fn new(p: u64, n: i64) -> Result<Self> {
        Ok(Self::from_field(Arc::new(FiniteField::new(p, n)?)))
    }

    pub fn from_field(field: Arc<FiniteField>) -> Self {
        let p = field.p();
        let n = field.n();
        let gauss = gauss_sum(p);
        let omega = (0..p as i64).map(|k| CycNumber::omega_pow(p, k)).collect();
        // c with |c|² = 1/d; for n odd it is G / p^((n+1)/2), a unit multiple of 1/√d
        let fourier_norm = if n % 2 == 1 {
            gauss.mul(&rational_pow_inv(p, p, n.div_ceil(2)))
        } else {
            rational_pow_inv(p, p, n / 2)
        };
        PhaseSpace {
            field,
            gauss,
            omega,
            fourier_norm,
            ext: OnceLock::new(),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FiniteField> {
        self.field.clone()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn d(&self) -> usize {
        self.field.size()
    }

    pub fn gauss_sum(&self) -> &CycNumber {
        &self.gauss
    }

    /// Normalizing constant c, |c|² = 1/d, used for Fourier-type vectors.
    pub fn fourier_norm(&self) -> &CycNumber {
        &self.fourier_norm
    }

    pub fn extension(&self) -> Arc<QuadraticExtension> {
        self.ext
            .get_or_init(|| {
                Arc::new(QuadraticExtension::new(self.field.clone()).expect("GF(d^2) is constructible"))
            })
            .clone()
    }

    /// ω^k for a residue k.
    pub fn omega(&self, k: u32) -> &CycNumber {
        &self.omega[(k % self.p()) as usize]
    }

    /// ω^{tr(e)}.
    pub fn phase(&self, e: Fe) -> &CycNumber {
        &self.omega[self.field.trace(e) as usize]
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        self.field
            .elements()
            .flat_map(move |a| self.field.elements().map(move |b| PhasePoint::new(a, b)))
    }

    /// D_u |x⟩ = ω^{tr(u1 u2 / 2) + tr(u2 x)} |x + u1⟩.
    pub fn displacement(&self, u: PhasePoint) -> CycMatrix {
        let f = &*self.field;
        let d = self.d();
        let half = f.half();
        let base = f.mul(half, f.mul(u.u1, u.u2));
        let mut m = CycMatrix::zeros(self.p(), d);
        for x in f.elements() {
            let e = f.add(base, f.mul(u.u2, x));
            m.set(f.add(x, u.u1).index(), x.index(), self.phase(e).clone());
        }
        m
    }

    /// Metaplectic unitary U_G for det G = 1.
    pub fn metaplectic(&self, g: &GL2Mat) -> Result<CycMatrix> {
        let f = &*self.field;
        if g.det(f) != Fe::ONE {
            return Err(Error::NotSymplectic);
        }
        let d = self.d();
        let p = self.p();
        let (alpha, beta, gamma, delta) = (g.a, g.b, g.c, g.d);
        let mut m = CycMatrix::zeros(p, d);
        if beta.is_zero() {
            let l = CycNumber::from_int(p, f.quadratic_character(alpha) as i64);
            let coef = f.mul(f.half(), f.mul(alpha, gamma));
            for x in f.elements() {
                let e = f.mul(coef, f.mul(x, x));
                m.set(f.mul(alpha, x).index(), x.index(), self.phase(e).mul(&l));
            }
            return Ok(m);
        }
        let pref = self.metaplectic_prefactor(beta);
        let inv2b = f.inv(f.add(beta, beta))?;
        // entry (x, y) = pref · ω^{tr((α y² − 2 x y + δ x²) / 2β)}
        let two = f.from_int(2);
        let mut scaled: Vec<CycNumber> = Vec::with_capacity(p as usize);
        for k in 0..p {
            scaled.push(self.omega(k).mul(&pref));
        }
        for x in f.elements() {
            let dx2 = f.mul(delta, f.mul(x, x));
            for y in f.elements() {
                let num = f.add(f.sub(f.mul(alpha, f.mul(y, y)), f.mul(two, f.mul(x, y))), dx2);
                let e = f.mul(num, inv2b);
                m.set(x.index(), y.index(), scaled[f.trace(e) as usize].clone());
            }
        }
        Ok(m)
    }

    /// −i^{−n(p+3)/2} · l(−β) / √d written inside Q(ω_p).
    fn metaplectic_prefactor(&self, beta: Fe) -> CycNumber {
        let f = &*self.field;
        let p = self.p() as i64;
        let n = self.n() as i64;
        let l = f.quadratic_character(f.neg(beta)) as i64;
        let k = (-n * (p + 3) / 2).rem_euclid(4);
        if n % 2 == 1 {
            // k is even iff p ≡ 1 (mod 4); then c = ±1 and G = √p, otherwise
            // c = ±i and G = i√p, so c/√p = (c/i)·G/p in both cases.
            let s = if k % 2 == 0 {
                -(if k == 0 { 1 } else { -1 })
            } else {
                -(if k == 1 { 1 } else { -1 })
            };
            self.gauss
                .mul(&rational_pow_inv(self.p(), self.p(), self.n().div_ceil(2)))
                .mul_int(s * l)
        } else {
            debug_assert!(k % 2 == 0);
            let c = -(if k == 0 { 1 } else { -1 });
            rational_pow_inv(self.p(), self.p(), self.n() / 2).mul_int(c * l)
        }
    }

    /// The parity operator |x⟩ ↦ |−x⟩.
    pub fn parity(&self) -> CycMatrix {
        let f = &*self.field;
        let mut m = CycMatrix::zeros(self.p(), self.d());
        for x in f.elements() {
            m.set(f.neg(x).index(), x.index(), CycNumber::one(self.p()));
        }
        m
    }

    /// (1/d) Σ_u D_u, accumulated directly from the monomial structure.
    pub fn parity_from_displacements(&self) -> CycMatrix {
        let f = &*self.field;
        let d = self.d();
        let p = self.p();
        let half = f.half();
        let mut acc = CycMatrix::zeros(p, d);
        for u in self.points() {
            let base = f.mul(half, f.mul(u.u1, u.u2));
            for x in f.elements() {
                let e = f.add(base, f.mul(u.u2, x));
                let (r, c) = (f.add(x, u.u1).index(), x.index());
                let v = acc.get(r, c).add(self.phase(e));
                acc.set(r, c, v);
            }
        }
        acc.scale(&CycNumber::from_ratio(p, 1, d as i64))
    }

    /// Tr U_S; for Tr S ≠ 2 it is checked to equal l(Tr S − 2).
    pub fn trace_of_metaplectic(&self, s: &GL2Mat) -> Result<CycNumber> {
        let f = &*self.field;
        let tr = self.metaplectic(s)?.trace();
        let t = s.trace(f);
        if t != f.from_int(2) {
            let expected = f.quadratic_character(f.sub(t, f.from_int(2)));
            if tr != CycNumber::from_int(self.p(), expected as i64) {
                return Err(Error::Consistency(format!(
                    "Tr U_S = {tr} but l(t - 2) = {expected}"
                )));
            }
        }
        Ok(tr)
    }
}

/// 1 / base^e as a rational cyclotomic number.
fn rational_pow_inv(p: u32, base: u32, e: u32) -> CycNumber {
    let den = num_traits::pow(BigInt::from(base), e as usize);
    CycNumber::from_rational(p, &BigRational::new(BigInt::from(1), den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::{random_with_det, GL2Mat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ps(p: u64, n: i64) -> PhaseSpace {
        PhaseSpace::new(p, n).unwrap()
    }

    #[test]
    fn symplectic_form_basics() {
        let s = ps(5, 1);
        let f = s.field();
        let e1 = PhasePoint::new(Fe::ONE, Fe::ZERO);
        let e2 = PhasePoint::new(Fe::ZERO, Fe::ONE);
        assert_eq!(symplectic_form(f, e1, e2), f.from_int(-1));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u = PhasePoint::new(f.random(&mut rng), f.random(&mut rng));
            let v = PhasePoint::new(f.random(&mut rng), f.random(&mut rng));
            let g = random_with_det(f, f.random_nonzero(&mut rng), &mut rng);
            assert_eq!(symplectic_form(f, u, u), Fe::ZERO);
            assert_eq!(
                symplectic_form(f, g.apply(f, u), g.apply(f, v)),
                f.mul(g.det(f), symplectic_form(f, u, v))
            );
        }
    }

    #[test]
    fn displacement_group_law() {
        for (p, n) in [(3, 1), (5, 1), (3, 2)] {
            let s = ps(p, n);
            let f = s.field();
            assert!(s.displacement(PhasePoint::ORIGIN).is_identity());
            let mut rng = ChaCha8Rng::seed_from_u64(p * 10 + n as u64);
            for _ in 0..10 {
                let u = PhasePoint::new(f.random(&mut rng), f.random(&mut rng));
                let v = PhasePoint::new(f.random(&mut rng), f.random(&mut rng));
                let lhs = s.displacement(u).mul(&s.displacement(v));
                // the half follows from D_u = ω^{u1u2/2} X^{u1} Z^{u2}
                let rhs = s
                    .displacement(u.add(f, v))
                    .scale(s.phase(f.mul(f.half(), symplectic_form(f, u, v))));
                assert_eq!(lhs, rhs);
            }
            if n == 1 {
                let u = PhasePoint::new(f.from_int(1), f.from_int(2));
                assert!(s.displacement(u).pow(p).is_identity());
            }
        }
    }

    #[test]
    fn metaplectic_identity_and_rejection() {
        let s = ps(7, 1);
        let f = s.field();
        assert!(s.metaplectic(&GL2Mat::identity()).unwrap().is_identity());
        let k = GL2Mat::new(Fe::ONE, Fe::ZERO, Fe::ZERO, f.from_int(3));
        assert_eq!(s.metaplectic(&k), Err(Error::NotSymplectic));
    }

    #[test]
    fn metaplectic_is_unitary_and_covariant() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let s = ps(p, n);
            let f = s.field();
            let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
            for _ in 0..6 {
                let g = random_with_det(f, Fe::ONE, &mut rng);
                let u_g = s.metaplectic(&g).unwrap();
                let dag = u_g.conj_transpose();
                assert!(u_g.mul(&dag).is_identity());
                let u = PhasePoint::new(f.random(&mut rng), f.random(&mut rng));
                assert_eq!(u_g.mul(&s.displacement(u)).mul(&dag), s.displacement(g.apply(f, u)));
            }
        }
    }

    #[test]
    fn metaplectic_is_faithful() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let s = ps(p, n);
            let f = s.field();
            let mut rng = ChaCha8Rng::seed_from_u64(500 + p);
            for _ in 0..8 {
                let g1 = random_with_det(f, Fe::ONE, &mut rng);
                let g2 = random_with_det(f, Fe::ONE, &mut rng);
                let lhs = s.metaplectic(&g1).unwrap().mul(&s.metaplectic(&g2).unwrap());
                let rhs = s.metaplectic(&g1.mul(f, &g2)).unwrap();
                if n % 2 == 1 {
                    assert_eq!(lhs, rhs, "d = {}", s.d());
                } else {
                    assert!(lhs == rhs || lhs == rhs.neg(), "d = {}", s.d());
                }
            }
        }
    }

    #[test]
    fn parity_identities() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let s = ps(p, n);
            let f = s.field();
            let a = s.parity();
            assert!(a.mul(&a).is_identity());
            assert_eq!(s.parity_from_displacements(), a);
            let minus = GL2Mat::scalar(f.from_int(-1));
            let l = f.quadratic_character(f.from_int(-1)) as i64;
            let u = s.metaplectic(&minus).unwrap();
            assert_eq!(a, u.scale(&CycNumber::from_int(p as u32, l)));
            if n == 1 {
                let sign = if p % 4 == 1 { 1 } else { -1 };
                assert_eq!(a, u.scale(&CycNumber::from_int(p as u32, sign)));
            }
        }
    }

    #[test]
    fn improved_trace_formula() {
        let s = ps(7, 1);
        let f = s.field();
        // t = 3
        let g = GL2Mat::new(Fe::ZERO, f.from_int(-1), Fe::ONE, f.from_int(3));
        assert_eq!(s.trace_of_metaplectic(&g).unwrap(), CycNumber::one(7));
        for a in 2..7 {
            let alpha = f.from_int(a);
            let diag = GL2Mat::new(alpha, Fe::ZERO, Fe::ZERO, f.inv(alpha).unwrap());
            if diag.trace(f) == f.from_int(2) {
                continue;
            }
            s.trace_of_metaplectic(&diag).unwrap();
        }
        assert_eq!(
            s.trace_of_metaplectic(&GL2Mat::identity()).unwrap(),
            CycNumber::from_int(7, 7)
        );
    }
}
