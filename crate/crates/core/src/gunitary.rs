//! Galois-unitaries U_G = U_Ḡ ∘ g_Δ for G ∈ GL(2, F_d) with det G = Δ ∈ F_p^*,
//! and the invariant-vector construction for MUB-cyclers.

use serde::Serialize;

use crate::cyclotomic::{CycNumber, GaloisAuto};
use crate::error::{Error, Result};
use crate::finite_field::{Fe, FiniteField};
use crate::gl2::{is_mub_cycler, GL2Mat};
use crate::linalg::{CycMatrix, CycVector};
use crate::weyl_clifford::PhaseSpace;

/// U_G acting as v ↦ U_Ḡ · g_Δ(v), with G = Ḡ K_Δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GUnitary {
    unitary: CycMatrix,
    delta: Fe,
    source: GL2Mat,
}

/// The output of [`invariant_vector`].
#[derive(Clone, Debug, Serialize)]
pub struct EigenResult {
    /// Fixed vector of U_G.
    pub psi: CycVector,
    /// Spanning vector of the eigenvalue-1 space of U_{G^{2m0}}, first nonzero entry 1.
    pub phi: CycVector,
    /// U_G φ = λ φ.
    pub lambda_trail: CycNumber,
    /// ψ = μ φ with λ = μ / g_Δ(μ).
    pub mu: CycNumber,
    /// The x = ω^k that made the resolvent nonzero.
    pub resolvent_power: u32,
    /// Multiplicative order of Δ.
    pub two_m0: u64,
}

fn prime_residue(f: &FiniteField, x: Fe) -> u32 {
    debug_assert!(f.is_in_prime_field(x));
    x.index() as u32
}

impl GUnitary {
    pub fn unitary_part(&self) -> &CycMatrix {
        &self.unitary
    }

    pub fn delta(&self) -> Fe {
        self.delta
    }

    pub fn source(&self) -> &GL2Mat {
        &self.source
    }

    pub fn auto(&self, space: &PhaseSpace) -> GaloisAuto {
        GaloisAuto::new(space.p(), prime_residue(space.field(), self.delta) as i64)
    }

    pub fn is_unitary(&self) -> bool {
        self.delta == Fe::ONE
    }

    pub fn is_identity(&self) -> bool {
        self.is_unitary() && self.unitary.is_identity()
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn apply(&self, space: &PhaseSpace, v: &CycVector) -> Result<CycVector> {
        let k = prime_residue(space.field(), self.delta);
        self.unitary.mul_vec(&v.apply_auto(k))
    }
}

/// Builds U_G for det G ∈ F_p^*.
pub fn make_gunitary(space: &PhaseSpace, g: &GL2Mat) -> Result<GUnitary> {
    let f = space.field();
    if g.det(f).is_zero() {
        return Err(Error::Singular);
    }
    if !g.is_in_gl_p(f) {
        return Err(Error::DeterminantNotInPrimeField);
    }
    let (bar, delta) = g.split_symplectic(f)?;
    Ok(GUnitary {
        unitary: space.metaplectic(&bar)?,
        delta,
        source: *g,
    })
}

/// U_{G1} U_{G2} = U_Ḡ1 g_Δ1(U_Ḡ2) ∘ g_{Δ1Δ2}, checking along the way that
/// g_Δ1(U_Ḡ2) = U_{K_Δ1 Ḡ2 K_Δ1⁻¹}.
pub fn compose(space: &PhaseSpace, g1: &GUnitary, g2: &GUnitary) -> Result<GUnitary> {
    let f = space.field();
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            found: g2.dim(),
        });
    }
    let k1 = prime_residue(f, g1.delta);
    let twisted = g2.unitary.apply_auto(k1);
    let (bar2, _) = g2.source.split_symplectic(f)?;
    let kd = GL2Mat::k_delta(g1.delta);
    let conj = kd.mul(f, &bar2).mul(f, &kd.inv(f)?);
    if twisted != space.metaplectic(&conj)? {
        return Err(Error::Consistency(
            "Galois action on U_G does not match conjugation by K_delta".into(),
        ));
    }
    Ok(GUnitary {
        unitary: g1.unitary.mul(&twisted),
        delta: f.mul(g1.delta, g2.delta),
        source: g1.source.mul(f, &g2.source),
    })
}

/// Compares U_{G1}U_{G2} with U_{G1G2}: +1 or −1, or an error if neither.
pub fn faithfulness_sign(space: &PhaseSpace, g1: &GUnitary, g2: &GUnitary) -> Result<i8> {
    let prod = compose(space, g1, g2)?;
    let direct = make_gunitary(space, &prod.source)?;
    if prod.delta != direct.delta {
        return Err(Error::Consistency("automorphisms differ".into()));
    }
    if prod.unitary == direct.unitary {
        Ok(1)
    } else if prod.unitary == direct.unitary.neg() {
        Ok(-1)
    } else {
        Err(Error::Consistency(
            "U_G1 U_G2 is not ±U_G1G2".into(),
        ))
    }
}

/// U_G† = g_Δ⁻¹(U_Ḡ†) ∘ g_Δ⁻¹.
pub fn adjoint(space: &PhaseSpace, gu: &GUnitary) -> Result<GUnitary> {
    let f = space.field();
    let dinv = f.inv(gu.delta)?;
    Ok(GUnitary {
        unitary: gu.unitary.conj_transpose().apply_auto(prime_residue(f, dinv)),
        delta: dinv,
        source: gu.source.inv(f)?,
    })
}

pub fn identity(space: &PhaseSpace) -> GUnitary {
    GUnitary {
        unitary: CycMatrix::identity(space.p(), space.d()),
        delta: Fe::ONE,
        source: GL2Mat::identity(),
    }
}

pub fn power(space: &PhaseSpace, gu: &GUnitary, e: u64) -> Result<GUnitary> {
    let mut acc = identity(space);
    for _ in 0..e {
        acc = compose(space, &acc, gu)?;
    }
    Ok(acc)
}

/// The multiplicative order 2m0 of Δ.
pub fn delta_order(space: &PhaseSpace, gu: &GUnitary) -> u64 {
    space
        .field()
        .multiplicative_order(gu.delta)
        .expect("determinant is nonzero")
}

fn require_cycler(space: &PhaseSpace, gu: &GUnitary) -> Result<u64> {
    let f = space.field();
    if f.n().is_multiple_of(2) {
        return Err(Error::Unsupported("no MUB-cyclers exist when n is even".into()));
    }
    if !is_mub_cycler(f, &space.extension(), &gu.source)? {
        return Err(Error::Unsupported("G is not a MUB-cycler".into()));
    }
    let two_m0 = delta_order(space, gu);
    if !two_m0.is_multiple_of(2) || f.pow(gu.delta, two_m0 / 2) != f.from_int(-1) {
        return Err(Error::Consistency("Δ^{m0} ≠ −1 for a cycler".into()));
    }
    Ok(two_m0)
}

/// Projector (1/(d+1)) Σ_{u=0}^{d} U_{H^u}, H = G^{2m0}, with the traces of
/// the individual terms.
pub fn invariant_projector(space: &PhaseSpace, gu: &GUnitary) -> Result<(CycMatrix, Vec<CycNumber>)> {
    let f = space.field();
    let two_m0 = require_cycler(space, gu)?;
    let h = gu.source.pow(f, two_m0);
    let d = space.d();
    let mut acc = CycMatrix::zeros(space.p(), d);
    let mut traces = Vec::with_capacity(d + 1);
    let mut hu = GL2Mat::identity();
    for _ in 0..=d {
        let u = space.metaplectic(&hu)?;
        traces.push(u.trace());
        acc = acc.add(&u);
        hu = hu.mul(f, &h);
    }
    if hu != GL2Mat::identity() {
        return Err(Error::Consistency("H^{d+1} ≠ I".into()));
    }
    Ok((acc.scale(&CycNumber::from_ratio(space.p(), 1, d as i64 + 1)), traces))
}

/// The fixed vector ψ of U_G for a MUB-cycler G.
pub fn invariant_vector(space: &PhaseSpace, gu: &GUnitary) -> Result<EigenResult> {
    let f = space.field();
    let p = space.p();
    let two_m0 = require_cycler(space, gu)?;
    let h = gu.source.pow(f, two_m0);
    let u_h = space.metaplectic(&h)?;
    let kernel = u_h.sub(&CycMatrix::identity(p, space.d())).nullspace();
    if kernel.len() != 1 {
        return Err(Error::Consistency(format!(
            "invariant space of U_(G^2m0) has dimension {}",
            kernel.len()
        )));
    }
    let raw = &kernel[0];
    let lead = raw.first_nonzero().ok_or(Error::ZeroVector)?;
    let phi = raw.scale(&raw.get(lead).inv()?);

    let image = gu.apply(space, &phi)?;
    let lambda = image.get(lead).clone();
    if image != phi.scale(&lambda) {
        return Err(Error::Consistency("φ is not an eigenvector of U_G".into()));
    }

    let k = prime_residue(f, gu.delta);
    let g = GaloisAuto::new(p, k as i64);
    // a_j = λ g(λ) ⋯ g^{j−1}(λ); the cocycle condition is a_{2m0} = 1
    let mut coeffs = Vec::with_capacity(two_m0 as usize);
    let mut a = CycNumber::one(p);
    let mut g_lambda = lambda.clone();
    for _ in 0..two_m0 {
        coeffs.push(a.clone());
        a = a.mul(&g_lambda);
        g_lambda = g.apply(&g_lambda);
    }
    if !a.is_one() {
        return Err(Error::Consistency("λ fails the cocycle condition".into()));
    }
    let resolvent = |x: &CycNumber| {
        let mut acc = CycNumber::zero(p);
        let mut gx = x.clone();
        for aj in &coeffs {
            acc = acc.add(&aj.mul(&gx));
            gx = g.apply(&gx);
        }
        acc
    };
    let (power, mu) = (0..p)
        .map(|j| (j, resolvent(&CycNumber::omega_pow(p, j as i64))))
        .find(|(_, t)| !t.is_zero())
        .ok_or_else(|| Error::Consistency("resolvent vanishes on all powers of ω".into()))?;

    let psi = phi.scale(&mu);
    if gu.apply(space, &psi)? != psi {
        return Err(Error::Consistency("U_G ψ ≠ ψ".into()));
    }
    Ok(EigenResult {
        psi,
        phi,
        lambda_trail: lambda,
        mu,
        resolvent_power: power,
        two_m0,
    })
}

/// Whether v is a Q(ω_p)-multiple of the canonical invariant vector.
pub fn eigenvector_uniqueness_check(space: &PhaseSpace, gu: &GUnitary, v: &CycVector) -> Result<bool> {
    let res = invariant_vector(space, gu)?;
    Ok(!v.is_zero() && v.proportional_to(&res.psi).is_some())
}
