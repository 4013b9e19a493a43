//! The complete set of d + 1 mutually unbiased bases and the balanced-state
//! analyses built on it.
//!
//! Basis z is the joint eigenbasis of the displacements D_{s(z,1)} (D_{s(1,0)}
//! for z = ∞), and |e_r^{(z)}⟩ has eigenvalue ω^{tr(rs)} under D_{s(z,1)}.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::gl2::{mobius, ProjPoint};
use crate::gunitary::GUnitary;
use crate::interval::{log2_bounds, Embedder};
use crate::linalg::CycVector;
use crate::weyl_clifford::PhaseSpace;

#[derive(Clone, Debug)]
pub struct MUBSet {
    labels: Vec<ProjPoint>,
    bases: Vec<Vec<CycVector>>,
}

impl MUBSet {
    pub fn labels(&self) -> &[ProjPoint] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len() - 1
    }

    fn slot(&self, z: ProjPoint) -> usize {
        self.labels.iter().position(|&l| l == z).expect("label in range")
    }

    pub fn basis(&self, z: ProjPoint) -> &[CycVector] {
        &self.bases[self.slot(z)]
    }

    pub fn vector(&self, z: ProjPoint, r: usize) -> &CycVector {
        &self.basis(z)[r]
    }

    pub fn to_json(&self) -> Value {
        let mut bases = Map::new();
        for (z, b) in self.labels.iter().zip(&self.bases) {
            bases.insert(z.label(), serde_json::to_value(b).expect("serializable"));
        }
        json!({"schema": 1, "d": self.dim(), "bases": bases})
    }
}

pub fn build_mub(space: &PhaseSpace) -> MUBSet {
    let f = space.field();
    let p = space.p();
    let d = space.d();
    let c = space.fourier_norm();
    let scaled: Vec<CycNumber> = (0..p).map(|k| space.omega(k).mul(c)).collect();
    let half = f.half();
    let labels = ProjPoint::all(f);
    let mut bases = Vec::with_capacity(d + 1);
    for &z in &labels {
        let basis = f
            .elements()
            .map(|r| match z {
                ProjPoint::Finite(z) if z.is_zero() => CycVector::basis(p, d, r.index()),
                ProjPoint::Finite(z) => {
                    let zi = f.inv(z).expect("nonzero");
                    let entries = f
                        .elements()
                        .map(|y| {
                            // y²/(2z) − r y / z
                            let e = f.mul(zi, f.sub(f.mul(half, f.mul(y, y)), f.mul(r, y)));
                            scaled[f.trace(e) as usize].clone()
                        })
                        .collect();
                    CycVector::from_vec(p, entries)
                }
                ProjPoint::Infinity => {
                    let entries = f
                        .elements()
                        .map(|y| scaled[f.trace(f.neg(f.mul(r, y))) as usize].clone())
                        .collect();
                    CycVector::from_vec(p, entries)
                }
            })
            .collect();
        bases.push(basis);
    }
    MUBSet { labels, bases }
}

/// Checks |⟨e_r^{(z)}|e_{r'}^{(z')}⟩|² = 1/d + δ_{zz'}(δ_{rr'} − 1/d) for every
/// pair; returns the number of overlaps checked.
pub fn check_unbiasedness(space: &PhaseSpace, mub: &MUBSet) -> Result<usize> {
    let p = space.p();
    let d = space.d();
    let one = CycNumber::one(p);
    let zero = CycNumber::zero(p);
    let inv_d = CycNumber::from_ratio(p, 1, d as i64);
    let conj: Vec<Vec<Vec<CycNumber>>> = mub
        .bases
        .iter()
        .map(|b| b.iter().map(|v| v.entries().iter().map(CycNumber::conj).collect()).collect())
        .collect();
    let mut count = 0;
    for (zi, bz) in mub.bases.iter().enumerate() {
        for (zj, bw) in mub.bases.iter().enumerate().skip(zi) {
            for (r, _) in bz.iter().enumerate() {
                for (s, w) in bw.iter().enumerate() {
                    if zi == zj && s < r {
                        continue;
                    }
                    let mut acc = CycNumber::zero(p);
                    for (a, b) in conj[zi][r].iter().zip(w.entries()) {
                        if !a.is_zero() && !b.is_zero() {
                            acc = acc.add(&a.mul(b));
                        }
                    }
                    let sq = acc.norm_sqr();
                    let expected = if zi != zj {
                        &inv_d
                    } else if r == s {
                        &one
                    } else {
                        &zero
                    };
                    if sq != *expected {
                        return Err(Error::Consistency(format!(
                            "overlap ({}, {r}) / ({}, {s}) is {sq}",
                            mub.labels[zi], mub.labels[zj]
                        )));
                    }
                    count += if zi == zj && r == s { 1 } else { 2 };
                }
            }
        }
    }
    Ok(count)
}

/// For each label z, the label z' that U_G maps basis z onto (up to phases
/// and reordering), verified against the Möbius formula.
pub fn mobius_action_check(
    space: &PhaseSpace,
    mub: &MUBSet,
    gu: &GUnitary,
) -> Result<Vec<(ProjPoint, ProjPoint)>> {
    let f = space.field();
    let g = gu.source();
    let mut out = Vec::with_capacity(mub.labels.len());
    for (zi, &z) in mub.labels.iter().enumerate() {
        let mut target: Option<usize> = None;
        for v in &mub.bases[zi] {
            let image = gu.apply(space, v)?;
            let hit = match target {
                Some(t) => mub.bases[t].iter().any(|w| image.proportional_to(w).is_some()).then_some(t),
                None => mub
                    .bases
                    .iter()
                    .position(|b| b.iter().any(|w| image.proportional_to(w).is_some())),
            };
            match hit {
                Some(t) => target = Some(t),
                None => {
                    return Err(Error::Consistency(format!(
                        "image of a basis-{z} vector lies in no basis"
                    )))
                }
            }
        }
        let zp = mub.labels[target.expect("nonempty basis")];
        let predicted = mobius(f, g, z);
        if zp != predicted {
            return Err(Error::Consistency(format!(
                "basis {z} maps to {zp}, Möbius formula predicts {predicted}"
            )));
        }
        out.push((z, zp));
    }
    Ok(out)
}

/// p_j^{(z)} = |⟨e_j^{(z)}|ψ⟩|² / ⟨ψ|ψ⟩.
pub fn probabilities(mub: &MUBSet, psi: &CycVector, z: ProjPoint) -> Result<Vec<CycNumber>> {
    if psi.is_zero() {
        return Err(Error::ZeroVector);
    }
    let inv_norm = psi.norm_sqr().inv()?;
    mub.basis(z)
        .iter()
        .map(|e| Ok(e.inner(psi)?.norm_sqr().mul(&inv_norm)))
        .collect()
}

pub fn all_probabilities(mub: &MUBSet, psi: &CycVector) -> Result<Vec<Vec<CycNumber>>> {
    mub.labels.iter().map(|&z| probabilities(mub, psi, z)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedReport {
    pub balanced: bool,
    /// f_z with p^{(z)}_{f_z(j)} = p^{(0)}_j, one per label, when balanced.
    pub permutations: Option<Vec<Vec<usize>>>,
}

pub fn is_mub_balanced(mub: &MUBSet, psi: &CycVector) -> Result<BalancedReport> {
    let probs = all_probabilities(mub, psi)?;
    Ok(balanced_from_probabilities(&probs))
}

pub fn balanced_from_probabilities(probs: &[Vec<CycNumber>]) -> BalancedReport {
    let reference = &probs[0];
    let mut sorted_ref = reference.clone();
    sorted_ref.sort();
    let mut perms = Vec::with_capacity(probs.len());
    for pz in probs {
        let mut sorted = pz.clone();
        sorted.sort();
        if sorted != sorted_ref {
            return BalancedReport {
                balanced: false,
                permutations: None,
            };
        }
        let mut used = vec![false; pz.len()];
        let perm = reference
            .iter()
            .map(|x| {
                let k = (0..pz.len())
                    .find(|&k| !used[k] && pz[k] == *x)
                    .expect("multisets agree");
                used[k] = true;
                k
            })
            .collect();
        perms.push(perm);
    }
    BalancedReport {
        balanced: true,
        permutations: Some(perms),
    }
}

/// Σ_j (p_j^{(z)})² per basis.
pub fn collision_sums(mub: &MUBSet, psi: &CycVector) -> Result<Vec<CycNumber>> {
    Ok(all_probabilities(mub, psi)?
        .iter()
        .map(|pz| {
            pz.iter()
                .fold(CycNumber::zero(psi.p()), |acc, x| acc.add(&x.mul(x)))
        })
        .collect())
}

/// Σ_j (p_j^{(z)})² = 2/(d+1) in every basis.
pub fn is_minimum_uncertainty(mub: &MUBSet, psi: &CycVector) -> Result<bool> {
    let target = CycNumber::from_ratio(psi.p(), 2, mub.dim() as i64 + 1);
    Ok(collision_sums(mub, psi)?.iter().all(|s| *s == target))
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisEntropy {
    pub z: String,
    pub collision: CycNumber,
    pub collision_decimal: String,
    pub entropy_lo: f64,
    pub entropy_hi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RenyiReport {
    pub bases: Vec<BasisEntropy>,
    pub total_lo: f64,
    pub total_hi: f64,
    pub bound_lo: f64,
    pub bound_hi: f64,
    /// T ≥ (d+1) log2((d+1)/2) is not contradicted by the enclosures.
    pub bound_holds: bool,
    /// Every collision sum equals 2/(d+1) exactly.
    pub saturated: bool,
}

/// Quadratic Rényi entropies H_z = −log2 Σ_j (p_j^{(z)})² and their total.
pub fn renyi_report(space: &PhaseSpace, mub: &MUBSet, psi: &CycVector, precision: u32) -> Result<RenyiReport> {
    let sums = collision_sums(mub, psi)?;
    let emb = Embedder::new(space.p(), precision);
    let d = mub.dim() as f64;
    let target = CycNumber::from_ratio(space.p(), 2, mub.dim() as i64 + 1);
    let mut bases = Vec::with_capacity(sums.len());
    let (mut total_lo, mut total_hi) = (0f64, 0f64);
    for (z, s) in mub.labels.iter().zip(&sums) {
        let enc = emb.embed(s);
        let (lo, hi) = enc.re.to_f64_bounds();
        let (l_lo, l_hi) = log2_bounds(lo, hi);
        let (h_lo, h_hi) = (-l_hi, -l_lo);
        total_lo = (total_lo + h_lo).next_down();
        total_hi = (total_hi + h_hi).next_up();
        bases.push(BasisEntropy {
            z: z.label(),
            collision: s.clone(),
            collision_decimal: enc.re.to_decimal(enc.re.natural_digits().min(30)),
            entropy_lo: h_lo,
            entropy_hi: h_hi,
        });
    }
    let (q_lo, q_hi) = log2_bounds(((d + 1.0) / 2.0).next_down(), ((d + 1.0) / 2.0).next_up());
    let bound_lo = ((d + 1.0) * q_lo).next_down();
    let bound_hi = ((d + 1.0) * q_hi).next_up();
    Ok(RenyiReport {
        bases,
        total_lo,
        total_hi,
        bound_lo,
        bound_hi,
        bound_holds: total_hi >= bound_lo,
        saturated: sums.iter().all(|s| *s == target),
    })
}
