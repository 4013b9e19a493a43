//! Phase-point operators, line operators and discrete Wigner functions on the
//! affine plane F_d × F_d.
//!
//! The line with label (z, r) is {p : Ω(v_z, p) = r} where v_z = (z, 1) and
//! v_∞ = (1, 0). Its projector is the one onto |e_r^{(z)}⟩.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::finite_field::{Fe, FiniteField};
use crate::gl2::{enumerate_matrices, GL2Mat, ProjPoint};
use crate::gunitary::{invariant_vector, make_gunitary};
use crate::linalg::{CycMatrix, CycVector};
use crate::mub::MUBSet;
use crate::weyl_clifford::{symplectic_form, PhasePoint, PhaseSpace};

/// Row-major index of a phase-space point.
pub fn point_index(f: &FiniteField, pt: PhasePoint) -> usize {
    pt.u1.index() * f.size() + pt.u2.index()
}

pub fn phase_point(space: &PhaseSpace, pt: PhasePoint) -> CycMatrix {
    let f = space.field();
    let dp = space.displacement(pt);
    let dm = space.displacement(pt.neg(f));
    dp.mul(&space.parity()).mul(&dm)
}

/// All A_p, indexed by [`point_index`].
pub fn phase_points(space: &PhaseSpace) -> Vec<CycMatrix> {
    space.points().map(|pt| phase_point(space, pt)).collect()
}

pub fn pencil_direction(z: ProjPoint) -> PhasePoint {
    match z {
        ProjPoint::Finite(z) => PhasePoint::new(z, Fe::ONE),
        ProjPoint::Infinity => PhasePoint::new(Fe::ONE, Fe::ZERO),
    }
}

pub fn line_points(f: &FiniteField, z: ProjPoint, r: Fe) -> Vec<PhasePoint> {
    let v = pencil_direction(z);
    f.elements()
        .flat_map(|a| f.elements().map(move |b| PhasePoint::new(a, b)))
        .filter(|&pt| symplectic_form(f, v, pt) == r)
        .collect()
}

#[derive(Clone, Debug)]
pub struct LineOperator {
    pub z: ProjPoint,
    pub r: Fe,
    pub matrix: CycMatrix,
}

/// The projector onto |e_r^{(z)}⟩, after checking it equals (1/d) Σ_{p∈l} A_p.
pub fn line_operator(
    space: &PhaseSpace,
    mub: &MUBSet,
    a: &[CycMatrix],
    z: ProjPoint,
    r: Fe,
) -> Result<LineOperator> {
    let f = space.field();
    let e = mub.vector(z, r.index());
    let projector = e.outer(e);
    let mut avg = CycMatrix::zeros(space.p(), space.d());
    for pt in line_points(f, z, r) {
        avg = avg.add(&a[point_index(f, pt)]);
    }
    let avg = avg.scale(&CycNumber::from_ratio(space.p(), 1, space.d() as i64));
    if avg != projector {
        return Err(Error::Consistency(format!(
            "line ({z}, {}) average of phase points differs from the basis projector",
            r.index()
        )));
    }
    Ok(LineOperator {
        z,
        r,
        matrix: projector,
    })
}

pub fn line_operators(space: &PhaseSpace, mub: &MUBSet, a: &[CycMatrix]) -> Result<Vec<LineOperator>> {
    let f = space.field();
    let mut out = Vec::with_capacity(space.d() * (space.d() + 1));
    for &z in mub.labels() {
        for r in f.elements() {
            out.push(line_operator(space, mub, a, z, r)?);
        }
    }
    Ok(out)
}

/// A_p = Σ_{l ∋ p} P_l − 1 at every point.
pub fn check_restsum(space: &PhaseSpace, lines: &[LineOperator], a: &[CycMatrix]) -> Result<()> {
    let f = space.field();
    let id = CycMatrix::identity(space.p(), space.d());
    for pt in space.points() {
        let mut acc = id.neg();
        let mut count = 0;
        for l in lines {
            if symplectic_form(f, pencil_direction(l.z), pt) == l.r {
                acc = acc.add(&l.matrix);
                count += 1;
            }
        }
        if count != space.d() + 1 || acc != a[point_index(f, pt)] {
            return Err(Error::Consistency(format!(
                "point ({}, {}) is not reconstructed from the {count} lines through it",
                pt.u1.index(),
                pt.u2.index()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceTable {
    pub ones: usize,
    pub zeros: usize,
    pub one_over_d: usize,
}

/// Tr(P P') over all ordered pairs of line operators, checked against
/// |l ∩ l'|/d; also checks the d+1 planes are totally orthogonal.
pub fn trace_table(space: &PhaseSpace, lines: &[LineOperator]) -> Result<TraceTable> {
    let f = space.field();
    let p = space.p();
    let d = space.d() as i64;
    let inv_d = CycNumber::from_ratio(p, 1, d);
    let centred: Vec<CycMatrix> = lines
        .iter()
        .map(|l| l.matrix.sub(&CycMatrix::scalar(p, space.d(), &inv_d)))
        .collect();
    let point_sets: Vec<Vec<PhasePoint>> = lines.iter().map(|l| line_points(f, l.z, l.r)).collect();
    let mut table = TraceTable::default();
    for (i, l) in lines.iter().enumerate() {
        for (j, m) in lines.iter().enumerate() {
            let tr = l.matrix.trace_product(&m.matrix);
            let common = point_sets[i].iter().filter(|q| point_sets[j].contains(q)).count();
            if tr != CycNumber::from_ratio(p, common as i64, d) {
                return Err(Error::Consistency(format!(
                    "Tr(P P') = {tr} for lines sharing {common} points"
                )));
            }
            if tr.is_one() {
                table.ones += 1;
            } else if tr.is_zero() {
                table.zeros += 1;
            } else if tr == inv_d {
                table.one_over_d += 1;
            } else {
                return Err(Error::Consistency(format!("Tr(P P') = {tr}")));
            }
            if l.z != m.z && !centred[i].trace_product(&centred[j]).is_zero() {
                return Err(Error::Consistency("basis planes are not orthogonal".into()));
            }
        }
    }
    Ok(table)
}

/// Σ_p A_p = d·1 and Tr(A_p A_q) = d δ_{pq}.
pub fn check_phase_point_identities(space: &PhaseSpace, a: &[CycMatrix]) -> Result<()> {
    let p = space.p();
    let d = space.d();
    let sum = a
        .iter()
        .fold(CycMatrix::zeros(p, d), |acc, m| acc.add(m));
    if sum != CycMatrix::scalar(p, d, &CycNumber::from_int(p, d as i64)) {
        return Err(Error::Consistency("Σ A_p ≠ d·1".into()));
    }
    for (i, x) in a.iter().enumerate() {
        if !x.trace().is_one() {
            return Err(Error::Consistency(format!("Tr A_{i} ≠ 1")));
        }
        for (j, y) in a.iter().enumerate() {
            let expected = if i == j { d as i64 } else { 0 };
            if x.trace_product(y) != CycNumber::from_int(p, expected) {
                return Err(Error::Consistency(format!("Tr(A_{i} A_{j}) ≠ {expected}")));
            }
        }
    }
    Ok(())
}

/// Σ_z P_{r(z)}^{(z)} − 1, with choices[k] the line picked in the pencil
/// `mub.labels()[k]`.
pub fn generalized_phase_point(space: &PhaseSpace, mub: &MUBSet, choices: &[Fe]) -> Result<CycMatrix> {
    if choices.len() != mub.labels().len() {
        return Err(Error::DimensionMismatch {
            expected: mub.labels().len(),
            found: choices.len(),
        });
    }
    let mut acc = CycMatrix::identity(space.p(), space.d()).neg();
    for (&z, r) in mub.labels().iter().zip(choices) {
        let e = mub.vector(z, r.index());
        acc = acc.add(&e.outer(e));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WignerTable {
    d: usize,
    values: Vec<CycNumber>,
}

impl WignerTable {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub fn get(&self, f: &FiniteField, pt: PhasePoint) -> &CycNumber {
        &self.values[point_index(f, pt)]
    }

    pub fn sum(&self) -> CycNumber {
        let p = self.values[0].p();
        self.values.iter().fold(CycNumber::zero(p), |a, x| a.add(x))
    }

    /// d Σ_p W_p², which is Tr ρ².
    pub fn purity(&self) -> CycNumber {
        let p = self.values[0].p();
        self.values
            .iter()
            .fold(CycNumber::zero(p), |a, x| a.add(&x.mul(x)))
            .mul_int(self.d as i64)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(CycNumber::is_real)
    }

    /// W'(p) = W(G⁻¹(p − u)).
    pub fn transform(&self, f: &FiniteField, map: &AffineMap) -> WignerTable {
        let mut values = self.values.clone();
        for q in points_of(f) {
            let img = map.apply(f, q);
            values[point_index(f, img)] = self.values[point_index(f, q)].clone();
        }
        WignerTable { d: self.d, values }
    }

    pub fn apply_auto(&self, k: u32) -> WignerTable {
        WignerTable {
            d: self.d,
            values: self.values.iter().map(|x| x.apply_auto(k)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<&CycNumber>> = self.values.chunks(self.d).map(|r| r.iter().collect()).collect();
        json!({"schema": 1, "d": self.d, "W": rows})
    }
}

fn points_of(f: &FiniteField) -> impl Iterator<Item = PhasePoint> + '_ {
    f.elements()
        .flat_map(move |a| f.elements().map(move |b| PhasePoint::new(a, b)))
}

/// W_p = Tr(ρ A_p)/d with ρ = |ψ⟩⟨ψ|/⟨ψ|ψ⟩.
pub fn wigner_of_state(space: &PhaseSpace, a: &[CycMatrix], psi: &CycVector) -> Result<WignerTable> {
    if psi.is_zero() {
        return Err(Error::ZeroVector);
    }
    let scale = psi
        .norm_sqr()
        .mul_int(space.d() as i64)
        .inv()?;
    let values = a
        .iter()
        .map(|ap| Ok(psi.inner(&ap.mul_vec(psi)?)?.mul(&scale)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WignerTable { d: space.d(), values })
}

fn require_three_mod_four(space: &PhaseSpace) -> Result<()> {
    if space.d() % 4 != 3 {
        return Err(Error::Unsupported(format!(
            "requires d ≡ 3 (mod 4), got d = {}",
            space.d()
        )));
    }
    Ok(())
}

/// The closed-form Wigner function of the Amburg et al. balanced state.
pub fn amburg_wigner(space: &PhaseSpace) -> Result<WignerTable> {
    require_three_mod_four(space)?;
    let f = space.field();
    let p = space.p();
    let d = space.d() as i64;
    let pref = CycNumber::from_ratio(p, 1, d * (d + 1));
    let weights: Vec<(Fe, i64)> = f
        .nonzero_elements()
        .map(|x| (x, f.quadratic_character(f.add(f.mul(x, x), Fe::ONE)) as i64))
        .collect();
    let values = points_of(f)
        .map(|pt| {
            let s = f.add(f.mul(pt.u1, pt.u1), f.mul(pt.u2, pt.u2));
            let mut acc = CycNumber::from_int(p, if pt == PhasePoint::ORIGIN { 1 - d } else { 1 });
            for &(x, l) in &weights {
                acc = acc.add(&space.phase(f.mul(x, s)).mul_int(l));
            }
            acc.mul(&pref)
        })
        .collect();
    Ok(WignerTable { d: d as usize, values })
}

/// F = [[α, β], [−β, α]] with α = (η + η^d)/2, β = i_M (η − η^d)/2.
pub fn amburg_cycler(space: &PhaseSpace) -> Result<GL2Mat> {
    require_three_mod_four(space)?;
    let f = space.field();
    let ext = space.extension();
    let big = ext.big();
    let d = space.d() as u64;
    let eta = ext.eta();
    let eta_d = big.pow(eta, d);
    let i_m = big.pow(eta, (space.p() as u64 - 1) * (d + 1) / 4);
    let half = big.half();
    let alpha = big.mul(half, big.add(eta, eta_d));
    let beta = big.mul(half, big.mul(i_m, big.sub(eta, eta_d)));
    let pull = |x: Fe| {
        ext.pullback(x)
            .ok_or_else(|| Error::Consistency("entry of F lies outside F_d".into()))
    };
    let (alpha, beta) = (pull(alpha)?, pull(beta)?);
    Ok(GL2Mat::new(alpha, beta, f.neg(beta), alpha))
}

/// p ↦ G p + u.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub g: GL2Mat,
    pub u: PhasePoint,
}

impl AffineMap {
    pub fn apply(&self, f: &FiniteField, p: PhasePoint) -> PhasePoint {
        self.g.apply(f, p).add(f, self.u)
    }

    pub fn describe(&self) -> String {
        format!(
            "G = [[{}, {}], [{}, {}]], u = ({}, {})",
            self.g.a.index(),
            self.g.b.index(),
            self.g.c.index(),
            self.g.d.index(),
            self.u.u1.index(),
            self.u.u2.index()
        )
    }
}

/// The extended Clifford group modulo phases, as affine maps with det G = ±1.
pub fn extended_clifford_maps(f: &FiniteField) -> Vec<AffineMap> {
    let minus_one = f.from_int(-1);
    let mats = enumerate_matrices(f, |det| det == Fe::ONE || det == minus_one);
    let pts: Vec<PhasePoint> = points_of(f).collect();
    mats.iter()
        .flat_map(|&g| pts.iter().map(move |&u| AffineMap { g, u }))
        .collect()
}

/// Class ids of the table entries, so equality tests become integer compares.
fn value_ids(table: &WignerTable) -> Vec<usize> {
    let mut distinct: Vec<&CycNumber> = Vec::new();
    table
        .values
        .iter()
        .map(|x| match distinct.iter().position(|y| *y == x) {
            Some(k) => k,
            None => {
                distinct.push(x);
                distinct.len() - 1
            }
        })
        .collect()
}

fn preserves(f: &FiniteField, ids: &[usize], map: &AffineMap) -> bool {
    points_of(f).all(|q| ids[point_index(f, map.apply(f, q))] == ids[point_index(f, q)])
}

/// First map (in enumeration order) carrying `from` onto `to`.
pub fn align(f: &FiniteField, from: &WignerTable, to: &WignerTable) -> Option<AffineMap> {
    extended_clifford_maps(f)
        .into_iter()
        .find(|m| from.transform(f, m) == *to)
}

#[derive(Clone, Debug, Serialize)]
pub struct AmburgReport {
    pub d: usize,
    /// The closed form equals the Wigner function of ψ_F as computed.
    pub direct_match: bool,
    /// Description of the extended Clifford map used when no direct match.
    pub alignment: Option<String>,
    pub matches: bool,
    /// W_{Fp} = g_Δ(W_p) for the closed form.
    pub covariant: bool,
    pub sum_is_one: bool,
}

pub fn amburg_check(space: &PhaseSpace, a: &[CycMatrix]) -> Result<AmburgReport> {
    let f = space.field();
    let closed = amburg_wigner(space)?;
    let fmat = amburg_cycler(space)?;
    let gu = make_gunitary(space, &fmat)?;
    let psi = invariant_vector(space, &gu)?.psi;
    let computed = wigner_of_state(space, a, &psi)?;
    let direct_match = computed == closed;
    let alignment = if direct_match {
        None
    } else {
        align(f, &computed, &closed).map(|m| m.describe())
    };
    let auto = gu.auto(space);
    // transform by F⁻¹ gives p ↦ W(F p).
    let moved = closed.transform(
        f,
        &AffineMap {
            g: fmat.inv(f)?,
            u: PhasePoint::ORIGIN,
        },
    );
    let covariant = moved == closed.apply_auto(auto.k);
    Ok(AmburgReport {
        d: space.d(),
        direct_match,
        matches: direct_match || alignment.is_some(),
        alignment,
        covariant,
        sum_is_one: closed.sum().is_one(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub d: usize,
    pub group_order: usize,
    pub stabilizer: usize,
    pub orbit: usize,
    pub expected_stabilizer: usize,
    pub expected_orbit: usize,
    pub matches_conjecture: bool,
}

impl CensusReport {
    pub fn to_json(&self) -> Value {
        json!({"schema": 1, "d": self.d, "stabilizer": self.stabilizer, "orbit": self.orbit})
    }
}

/// Counts extended Clifford elements (modulo phases) fixing the state with
/// Wigner function `table`.
pub fn stabilizer_census(space: &PhaseSpace, table: &WignerTable) -> CensusReport {
    let f = space.field();
    let ids = value_ids(table);
    let maps = extended_clifford_maps(f);
    let stabilizer = maps.iter().filter(|m| preserves(f, &ids, m)).count();
    let d = space.d();
    CensusReport {
        d,
        group_order: maps.len(),
        stabilizer,
        orbit: maps.len() / stabilizer,
        expected_stabilizer: 4 * (d + 1),
        expected_orbit: d * d * d * (d - 1) / 2,
        matches_conjecture: stabilizer == 4 * (d + 1),
    }
}

pub fn fixes_state(f: &FiniteField, table: &WignerTable, g: &GL2Mat) -> bool {
    preserves(
        f,
        &value_ids(table),
        &AffineMap {
            g: *g,
            u: PhasePoint::ORIGIN,
        },
    )
}
