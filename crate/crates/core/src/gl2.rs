//! 2×2 matrices over F_d: classification, suborders, MUB-cyclers, canonical
//! forms and the Möbius action on the projective line.

use std::fmt;

use num_integer::gcd;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{Fe, FiniteField, QuadraticExtension};
use crate::weyl_clifford::PhasePoint;

/// [[a, b], [c, d]] = [[α, β], [γ, δ]].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GL2Mat {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeTag {
    /// Distinct eigenvalues in F_d.
    Type1 { lambda_plus: Fe, lambda_minus: Fe },
    /// Conjugate eigenvalues in GF(d²) \ F_d, stored as GF(d²) handles;
    /// `r` is set when the determinant lies in F_p, with λ+ = η^r, λ− = η^{dr}.
    Type2 {
        lambda_plus: Fe,
        lambda_minus: Fe,
        r: Option<u64>,
    },
    /// A repeated eigenvalue.
    Type3 { lambda: Fe },
}

impl TypeTag {
    pub fn number(&self) -> u8 {
        match self {
            TypeTag::Type1 { .. } => 1,
            TypeTag::Type2 { .. } => 2,
            TypeTag::Type3 { .. } => 3,
        }
    }
}

/// A point of the projective line F_d ∪ {∞}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(Fe),
    Infinity,
}

impl ProjPoint {
    /// All d + 1 labels: field elements in enumeration order, then ∞.
    pub fn all(f: &FiniteField) -> Vec<ProjPoint> {
        f.elements()
            .map(ProjPoint::Finite)
            .chain(std::iter::once(ProjPoint::Infinity))
            .collect()
    }

    /// Position in [`ProjPoint::all`].
    pub fn index(self, f: &FiniteField) -> usize {
        match self {
            ProjPoint::Finite(z) => z.index(),
            ProjPoint::Infinity => f.size(),
        }
    }

    /// "inf" or the enumeration index of the field element.
    pub fn label(self) -> String {
        match self {
            ProjPoint::Finite(z) => z.index().to_string(),
            ProjPoint::Infinity => "inf".to_string(),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// JSON payload `{"a": [...], "b": [...], "c": [...], "d": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GL2Json {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub d: Vec<u32>,
}

impl GL2Mat {
    pub fn new(a: Fe, b: Fe, c: Fe, d: Fe) -> Self {
        GL2Mat { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::scalar(Fe::ONE)
    }

    pub fn scalar(x: Fe) -> Self {
        GL2Mat::new(x, Fe::ZERO, Fe::ZERO, x)
    }

    /// K_Δ = diag(1, Δ).
    pub fn k_delta(delta: Fe) -> Self {
        GL2Mat::new(Fe::ONE, Fe::ZERO, Fe::ZERO, delta)
    }

    /// Companion matrix [[0, −Δ], [1, t]].
    pub fn companion(f: &FiniteField, t: Fe, delta: Fe) -> Self {
        GL2Mat::new(Fe::ZERO, f.neg(delta), Fe::ONE, t)
    }

    pub fn from_ints(f: &FiniteField, a: i64, b: i64, c: i64, d: i64) -> Self {
        GL2Mat::new(f.from_int(a), f.from_int(b), f.from_int(c), f.from_int(d))
    }

    pub fn det(&self, f: &FiniteField) -> Fe {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn trace(&self, f: &FiniteField) -> Fe {
        f.add(self.a, self.d)
    }

    /// t² − 4Δ.
    pub fn discriminant(&self, f: &FiniteField) -> Fe {
        let t = self.trace(f);
        f.sub(f.mul(t, t), f.mul(f.from_int(4), self.det(f)))
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn mul(&self, f: &FiniteField, o: &GL2Mat) -> GL2Mat {
        GL2Mat::new(
            f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        )
    }

    pub fn scale(&self, f: &FiniteField, x: Fe) -> GL2Mat {
        GL2Mat::new(f.mul(x, self.a), f.mul(x, self.b), f.mul(x, self.c), f.mul(x, self.d))
    }

    pub fn inv(&self, f: &FiniteField) -> Result<GL2Mat> {
        let di = f.inv(self.det(f)).map_err(|_| Error::Singular)?;
        Ok(GL2Mat::new(self.d, f.neg(self.b), f.neg(self.c), self.a).scale(f, di))
    }

    pub fn pow(&self, f: &FiniteField, mut e: u64) -> GL2Mat {
        let mut base = *self;
        let mut acc = GL2Mat::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order (the matrix must be invertible).
    pub fn order(&self, f: &FiniteField) -> u64 {
        let mut m = *self;
        let mut k = 1;
        while m != GL2Mat::identity() {
            m = m.mul(f, self);
            k += 1;
        }
        k
    }

    pub fn apply(&self, f: &FiniteField, u: PhasePoint) -> PhasePoint {
        PhasePoint::new(
            f.add(f.mul(self.a, u.u1), f.mul(self.b, u.u2)),
            f.add(f.mul(self.c, u.u1), f.mul(self.d, u.u2)),
        )
    }

    /// Determinant nonzero and in the prime field.
    pub fn is_in_gl_p(&self, f: &FiniteField) -> bool {
        let det = self.det(f);
        !det.is_zero() && f.is_in_prime_field(det)
    }

    /// G = Ḡ·K_Δ with det Ḡ = 1; returns (Ḡ, Δ).
    pub fn split_symplectic(&self, f: &FiniteField) -> Result<(GL2Mat, Fe)> {
        let delta = self.det(f);
        if delta.is_zero() {
            return Err(Error::Singular);
        }
        let k_inv = GL2Mat::k_delta(f.inv(delta)?);
        Ok((self.mul(f, &k_inv), delta))
    }

    pub fn to_json(&self, f: &FiniteField) -> GL2Json {
        GL2Json {
            a: f.coeffs(self.a),
            b: f.coeffs(self.b),
            c: f.coeffs(self.c),
            d: f.coeffs(self.d),
        }
    }

    pub fn from_json(f: &FiniteField, j: &GL2Json) -> GL2Mat {
        GL2Mat::new(
            f.from_coeffs(&j.a),
            f.from_coeffs(&j.b),
            f.from_coeffs(&j.c),
            f.from_coeffs(&j.d),
        )
    }
}

/// A uniformly random matrix with the given nonzero determinant.
pub fn random_with_det<R: Rng + ?Sized>(f: &FiniteField, det: Fe, rng: &mut R) -> GL2Mat {
    loop {
        let m = GL2Mat::new(f.random(rng), f.random(rng), f.random(rng), f.random(rng));
        let dm = m.det(f);
        if dm.is_zero() {
            continue;
        }
        let s = f.div(det, dm).expect("nonzero");
        return GL2Mat::new(f.mul(s, m.a), f.mul(s, m.b), m.c, m.d);
    }
}

/// Every matrix whose determinant satisfies `keep`, in lexicographic order of
/// entry indices.
pub fn enumerate_matrices(f: &FiniteField, keep: impl Fn(Fe) -> bool) -> Vec<GL2Mat> {
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                for d in f.elements() {
                    let m = GL2Mat::new(a, b, c, d);
                    if keep(m.det(f)) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

pub fn count_sl2(f: &FiniteField) -> usize {
    enumerate_matrices(f, |x| x == Fe::ONE).len()
}

pub fn count_gl2(f: &FiniteField) -> usize {
    enumerate_matrices(f, |x| !x.is_zero()).len()
}

/// Roots of x² − t x + Δ inside GF(d²), smaller handle first.
fn ext_roots(ext: &QuadraticExtension, t: Fe, delta: Fe) -> (Fe, Fe) {
    let big = ext.big();
    let (tb, db) = (ext.embed(t), ext.embed(delta));
    let mut roots = big
        .elements()
        .filter(|&x| big.add(big.sub(big.mul(x, x), big.mul(tb, x)), db).is_zero());
    let r1 = roots.next().expect("quadratic splits in GF(d^2)");
    let r2 = big.sub(tb, r1);
    (r1.min(r2), r1.max(r2))
}

/// log_η of a GF(d²) element, if it lies in the group generated by η.
pub fn eta_log(ext: &QuadraticExtension, x: Fe) -> Option<u64> {
    let big = ext.big();
    let d = ext.base().size() as u64;
    let p = ext.base().p() as u64;
    let k = (d - 1) / (p - 1);
    let l = big.log(x)? as u64;
    l.is_multiple_of(k).then_some(l / k)
}

pub fn classify(f: &FiniteField, ext: &QuadraticExtension, g: &GL2Mat) -> Result<TypeTag> {
    let delta = g.det(f);
    if delta.is_zero() {
        return Err(Error::Singular);
    }
    let t = g.trace(f);
    let disc = g.discriminant(f);
    let half = f.half();
    Ok(match f.quadratic_character(disc) {
        0 => TypeTag::Type3 {
            lambda: f.mul(half, t),
        },
        1 => {
            let s = f.sqrt(disc).expect("square");
            TypeTag::Type1 {
                lambda_plus: f.mul(half, f.add(t, s)),
                lambda_minus: f.mul(half, f.sub(t, s)),
            }
        }
        _ => {
            let (x1, x2) = ext_roots(ext, t, delta);
            let order = ext.eta_order();
            let d = f.size() as u64;
            match (eta_log(ext, x1), eta_log(ext, x2)) {
                (Some(r1), Some(r2)) => {
                    let r = r1.min(r2);
                    let big = ext.big();
                    let eta = ext.eta();
                    debug_assert_eq!(big.pow(eta, d * r % order), if r == r1 { x2 } else { x1 });
                    TypeTag::Type2 {
                        lambda_plus: big.pow(eta, r),
                        lambda_minus: big.pow(eta, d * r % order),
                        r: Some(r),
                    }
                }
                _ => TypeTag::Type2 {
                    lambda_plus: x1,
                    lambda_minus: x2,
                    r: None,
                },
            }
        }
    })
}

/// Smallest m ≥ 1 with G^m proportional to the identity, from the recurrence
/// s_0 = 0, s_1 = 1, s_{m+1} = t s_m − Δ s_{m−1}.
pub fn suborder(f: &FiniteField, g: &GL2Mat) -> u64 {
    if g.is_scalar() {
        return 1;
    }
    let t = g.trace(f);
    let delta = g.det(f);
    let (mut prev, mut cur) = (Fe::ZERO, Fe::ONE);
    let mut m = 1;
    while !cur.is_zero() {
        let next = f.sub(f.mul(t, cur), f.mul(delta, prev));
        prev = cur;
        cur = next;
        m += 1;
    }
    m
}

/// The pair (s_m, s_{m−1}) of the suborder recurrence.
pub fn recurrence_terms(f: &FiniteField, g: &GL2Mat, m: u64) -> (Fe, Fe) {
    let t = g.trace(f);
    let delta = g.det(f);
    if m == 0 {
        // s_{-1} = -1/Δ keeps A^0 = s_0 A − s_{−1} Δ I = I
        return (Fe::ZERO, f.neg(f.inv(delta).expect("nonsingular")));
    }
    let (mut prev, mut cur) = (Fe::ZERO, Fe::ONE);
    for _ in 1..m {
        let next = f.sub(f.mul(t, cur), f.mul(delta, prev));
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// MUB-cycler test: n odd, Type2, gcd(r, d + 1) = 1, cross-checked against the
/// suborder.
pub fn is_mub_cycler(f: &FiniteField, ext: &QuadraticExtension, g: &GL2Mat) -> Result<bool> {
    if !g.is_in_gl_p(f) {
        return Err(Error::DeterminantNotInPrimeField);
    }
    let d = f.size() as u64;
    let by_type = match classify(f, ext, g)? {
        TypeTag::Type2 { r: Some(r), .. } => f.n() % 2 == 1 && gcd(r, d + 1) == 1,
        _ => false,
    };
    let by_suborder = suborder(f, g) == d + 1;
    if by_type != by_suborder {
        return Err(Error::Consistency(format!(
            "cycler test disagrees with suborder for {g:?}"
        )));
    }
    Ok(by_type)
}

/// S ∈ SL(2, F_d) and G_c = [[0, −Δ], [1, t]] with G = S G_c S⁻¹.
///
/// S is taken as [v | Gv]·(aI + b G_c) for the first v (the basis vector
/// (1, 0), then lexicographic) and first (a, b) making det S = 1.
pub fn canonical_form(f: &FiniteField, g: &GL2Mat) -> Result<(GL2Mat, GL2Mat)> {
    if g.det(f).is_zero() {
        return Err(Error::Singular);
    }
    if g.discriminant(f).is_zero() {
        return Err(Error::Unsupported(
            "canonical form needs t^2 - 4 det != 0".into(),
        ));
    }
    let t = g.trace(f);
    let delta = g.det(f);
    let gc = GL2Mat::companion(f, t, delta);
    let e1 = PhasePoint::new(Fe::ONE, Fe::ZERO);
    let candidates = std::iter::once(e1).chain(
        f.elements()
            .flat_map(|a| f.elements().map(move |b| PhasePoint::new(a, b)))
            .filter(|&v| v != e1),
    );
    for v in candidates {
        let w = g.apply(f, v);
        let s0 = GL2Mat::new(v.u1, w.u1, v.u2, w.u2);
        let det0 = s0.det(f);
        if det0.is_zero() {
            continue;
        }
        if det0 == Fe::ONE {
            return Ok((s0, gc));
        }
        let target = f.inv(det0)?;
        for a in f.elements() {
            for b in f.elements() {
                let c = GL2Mat::new(a, f.mul(b, gc.b), b, f.add(a, f.mul(b, t)));
                if c.det(f) == target {
                    return Ok((s0.mul(f, &c), gc));
                }
            }
        }
    }
    Err(Error::Consistency("no conjugating matrix found".into()))
}

/// G_0 = [[0, −η^{d+1}], [1, η + η^d]] pulled back to F_d (n odd only).
pub fn cycler_generator(f: &FiniteField, ext: &QuadraticExtension) -> Result<GL2Mat> {
    if f.n().is_multiple_of(2) {
        return Err(Error::Unsupported(
            "no MUB-cyclers exist when n is even".into(),
        ));
    }
    let big = ext.big();
    let d = f.size() as u64;
    let eta = ext.eta();
    let norm = big.pow(eta, d + 1);
    let tr = big.add(eta, big.pow(eta, d));
    let pull = |x: Fe| {
        ext.pullback(x)
            .ok_or_else(|| Error::Consistency("G_0 entry outside F_d".into()))
    };
    Ok(GL2Mat::new(Fe::ZERO, f.neg(pull(norm)?), Fe::ONE, pull(tr)?))
}

/// Whether some power G_0^r with gcd(r, d+1) = 1 has determinant −1, with the
/// smallest such r as witness.
pub fn antisymplectic_cycler(f: &FiniteField, ext: &QuadraticExtension) -> Result<Option<u64>> {
    if f.n().is_multiple_of(2) {
        return Err(Error::Unsupported(
            "no MUB-cyclers exist when n is even".into(),
        ));
    }
    let d = f.size() as u64;
    let g0 = cycler_generator(f, ext)?;
    let minus_one = f.from_int(-1);
    Ok((1..ext.eta_order())
        .filter(|&r| gcd(r, d + 1) == 1)
        .find(|&r| g0.pow(f, r).det(f) == minus_one))
}

pub fn is_antisymplectic_cycler_possible(f: &FiniteField, ext: &QuadraticExtension) -> Result<bool> {
    Ok(antisymplectic_cycler(f, ext)?.is_some())
}

/// z ↦ (αz + β)/(γz + δ) on F_d ∪ {∞}.
pub fn mobius(f: &FiniteField, g: &GL2Mat, z: ProjPoint) -> ProjPoint {
    let (num, den) = match z {
        ProjPoint::Finite(z) => (f.add(f.mul(g.a, z), g.b), f.add(f.mul(g.c, z), g.d)),
        ProjPoint::Infinity => (g.a, g.c),
    };
    if den.is_zero() {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(f.div(num, den).expect("nonzero"))
    }
}

/// Order of z ↦ mobius(G, z) as a permutation of the projective line.
pub fn mobius_order(f: &FiniteField, g: &GL2Mat) -> u64 {
    let all = ProjPoint::all(f);
    let mut cur = all.clone();
    let mut k = 0;
    loop {
        cur = cur.into_iter().map(|z| mobius(f, g, z)).collect();
        k += 1;
        if cur == all {
            return k;
        }
    }
}
