//! The acceptance suite: fifteen exact checks over fixed dimension lists, and
//! the same checks restricted to a single dimension for `verify-all`.

use std::fmt;
use std::time::Instant;

use num_integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::{gauss_sum, CycNumber};
use crate::error::{Error, Result};
use crate::finite_field::Fe;
use crate::gl2::{
    antisymplectic_cycler, classify, count_gl2, count_sl2, cycler_generator, enumerate_matrices,
    mobius_order, random_with_det, recurrence_terms, suborder, GL2Mat, TypeTag,
};
use crate::gunitary::{faithfulness_sign, invariant_projector, invariant_vector, make_gunitary};
use crate::linalg::CycMatrix;
use crate::mub::{build_mub, check_unbiasedness, is_mub_balanced, is_minimum_uncertainty};
use crate::polytope::{
    amburg_check, check_phase_point_identities, check_restsum, line_operators, phase_points,
    stabilizer_census, trace_table, wigner_of_state,
};
use crate::weyl_clifford::{PhasePoint, PhaseSpace};

pub const DEFAULT_SEED: u64 = 0x5eed_2016;

/// Largest d for which the O(d^4)-and-worse polytope checks and the census run.
pub const HEAVY_LIMIT: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn line(&self) -> String {
        format!("[{}] {:02} {}: {}", self.status, self.id, self.title, self.notes.join("; "))
    }
}

pub const TITLES: [&str; 15] = [
    "Gauss sum",
    "Metaplectic faithfulness",
    "Weyl covariance",
    "MUB grid",
    "Recurrence for A^m",
    "Type 2 power",
    "Cycler suborders",
    "Anti-symplectic cyclers",
    "Projector identities",
    "Eigenvector",
    "MUB-balanced",
    "Amburg cross-check",
    "Polytope",
    "Single orbit",
    "Group orders",
];

fn space(d: (u64, i64)) -> Result<PhaseSpace> {
    PhaseSpace::new(d.0, d.1)
}

fn rng_for(seed: u64, id: u8, d: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((id as u64) << 32) ^ d as u64)
}

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Consistency(msg.into()))
}

fn minus_one_pow(e: u64) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

// ---- per-dimension checks; Ok(note) on success -------------------------------

pub fn check_gauss(p: u32) -> Result<String> {
    let g2 = gauss_sum(p).pow(2);
    let expected = minus_one_pow((p as u64 - 1) / 2) * p as i64;
    if g2 != CycNumber::from_int(p, expected) {
        return fail(format!("G^2 = {g2} at p = {p}"));
    }
    Ok(format!("p={p}: G^2={expected}"))
}

/// 50 random pairs from SL(2, F_d); with `gl` also 50 from GL_p.
pub fn check_faithfulness(s: &PhaseSpace, seed: u64, pairs: usize, gl: bool) -> Result<String> {
    let f = s.field();
    let mut rng = rng_for(seed, 2, s.d());
    let mut minus = 0;
    for _ in 0..pairs {
        let g1 = make_gunitary(s, &random_with_det(f, Fe::ONE, &mut rng))?;
        let g2 = make_gunitary(s, &random_with_det(f, Fe::ONE, &mut rng))?;
        if faithfulness_sign(s, &g1, &g2)? < 0 {
            minus += 1;
        }
    }
    if s.n() % 2 == 1 && minus > 0 {
        return fail(format!("d={}: {minus} SL pairs give −U_G1G2", s.d()));
    }
    let mut note = format!("d={}: SL {pairs} pairs", s.d());
    if s.n().is_multiple_of(2) {
        note.push_str(&format!(" (sign −1 in {minus})"));
    }
    if gl {
        for _ in 0..pairs {
            let mut det = || f.from_int(rng.gen_range(1..s.p() as i64));
            let (d1, d2) = (det(), det());
            let g1 = make_gunitary(s, &random_with_det(f, d1, &mut rng))?;
            let g2 = make_gunitary(s, &random_with_det(f, d2, &mut rng))?;
            if faithfulness_sign(s, &g1, &g2)? < 0 {
                return fail(format!("d={}: GL_p pair gives −U_G1G2", s.d()));
            }
        }
        note.push_str(&format!(", GL_p {pairs} pairs"));
    }
    Ok(note)
}

pub fn check_covariance(s: &PhaseSpace, seed: u64, count: usize) -> Result<String> {
    let f = s.field();
    let mut rng = rng_for(seed, 3, s.d());
    for _ in 0..count {
        let g = random_with_det(f, Fe::ONE, &mut rng);
        let u = PhasePoint::new(f.random(&mut rng), f.random(&mut rng));
        let ug = s.metaplectic(&g)?;
        let lhs = ug.mul(&s.displacement(u)).mul(&ug.conj_transpose());
        if lhs != s.displacement(g.apply(f, u)) {
            return fail(format!("d={}: U_G D_u U_G^-1 ≠ D_Gu", s.d()));
        }
    }
    Ok(format!("d={}: {count} pairs", s.d()))
}

pub fn check_mub_grid(s: &PhaseSpace) -> Result<String> {
    let n = check_unbiasedness(s, &build_mub(s))?;
    Ok(format!("d={}: {n} overlaps", s.d()))
}

pub fn check_lemma1(s: &PhaseSpace, seed: u64, count: usize) -> Result<String> {
    let f = s.field();
    let d = s.d() as u64;
    let mut rng = rng_for(seed, 5, s.d());
    for _ in 0..count {
        let a = random_with_det(f, f.random_nonzero(&mut rng), &mut rng);
        let m = rng.gen_range(1..=2 * (d + 1));
        let (sm, sm1) = recurrence_terms(f, &a, m);
        let delta = a.det(f);
        let rhs = a.scale(f, sm);
        let shift = f.mul(sm1, delta);
        let rhs = GL2Mat::new(f.sub(rhs.a, shift), rhs.b, rhs.c, f.sub(rhs.d, shift));
        if a.pow(f, m) != rhs {
            return fail(format!("d={}: A^{m} ≠ s_m A − s_(m−1) Δ I", s.d()));
        }
    }
    Ok(format!("d={}: {count} samples", s.d()))
}

pub fn check_type2_power(s: &PhaseSpace, seed: u64, count: usize) -> Result<String> {
    let f = s.field();
    let d = s.d() as u64;
    let mut rng = rng_for(seed, 6, s.d());
    let mut found = 0;
    while found < count {
        let g = random_with_det(f, f.random_nonzero(&mut rng), &mut rng);
        if f.quadratic_character(g.discriminant(f)) != -1 {
            continue;
        }
        found += 1;
        if g.pow(f, d + 1) != GL2Mat::scalar(g.det(f)) {
            return fail(format!("d={}: G^(d+1) ≠ ΔI", s.d()));
        }
    }
    Ok(format!("d={}: {count} Type 2 samples", s.d()))
}

/// Exhaustive over companion forms [[0, −Δ], [1, t]] with Δ ∈ F_p^*.
pub fn check_companion_suborders(s: &PhaseSpace) -> Result<String> {
    let f = s.field();
    let ext = s.extension();
    let d = s.d() as u64;
    let mut type2 = 0;
    let mut max_sub = 0;
    let mut cyclers = 0;
    for delta in (1..s.p() as i64).map(|k| f.from_int(k)) {
        for t in f.elements() {
            let g = GL2Mat::companion(f, t, delta);
            let TypeTag::Type2 { r, .. } = classify(f, &ext, &g)? else {
                continue;
            };
            type2 += 1;
            let sub = suborder(f, &g);
            if sub != mobius_order(f, &g) {
                return fail("suborder differs from the Möbius order");
            }
            max_sub = max_sub.max(sub);
            if s.n() % 2 == 1 {
                let r = r.ok_or_else(|| Error::Consistency("Type 2 without η-exponent".into()))?;
                if (sub == d + 1) != (gcd(r, d + 1) == 1) {
                    return fail(format!("d={d}: r={r} has suborder {sub}"));
                }
                if sub == d + 1 {
                    cyclers += 1;
                }
            }
        }
    }
    if s.n().is_multiple_of(2) {
        if max_sub > d.div_ceil(2) {
            return fail(format!("d={d}: suborder {max_sub} exceeds (d+1)/2"));
        }
        Ok(format!("d={d}: {type2} Type 2 forms, max suborder {max_sub}"))
    } else {
        Ok(format!("d={d}: {type2} Type 2 forms, {cyclers} cyclers"))
    }
}

pub fn check_antisymplectic(s: &PhaseSpace) -> Result<String> {
    let f = s.field();
    let d = s.d() as u64;
    let minus_one = f.from_int(-1);
    let expect = d % 4 == 3;
    match antisymplectic_cycler(f, &s.extension())? {
        Some(r) => {
            let g = cycler_generator(f, &s.extension())?.pow(f, r);
            if !expect || g.det(f) != minus_one || suborder(f, &g) != d + 1 {
                return fail(format!("d={d}: bad witness G_0^{r}"));
            }
            Ok(format!("d={d}: witness G_0^{r}"))
        }
        None => {
            if expect {
                return fail(format!("d={d}: no witness"));
            }
            let hits = enumerate_matrices(f, |x| x == minus_one)
                .iter()
                .filter(|g| suborder(f, g) == d + 1)
                .count();
            if hits > 0 {
                return fail(format!("d={d}: {hits} det −1 matrices of suborder d+1"));
            }
            Ok(format!("d={d}: none among all det −1 matrices"))
        }
    }
}

fn g0_unitary(s: &PhaseSpace) -> Result<crate::gunitary::GUnitary> {
    make_gunitary(s, &cycler_generator(s.field(), &s.extension())?)
}

pub fn check_projector(s: &PhaseSpace) -> Result<String> {
    let p = s.p();
    let d = s.d();
    let (proj, traces) = invariant_projector(s, &g0_unitary(s)?)?;
    if !proj.trace().is_one() || proj.mul(&proj) != proj {
        return fail(format!("d={d}: P_1 is not a rank-1 projector"));
    }
    if traces[0] != CycNumber::from_int(p, d as i64) {
        return fail(format!("d={d}: first term trace {}", traces[0]));
    }
    let first = &traces[1];
    if !(first.is_one() || *first == CycNumber::from_int(p, -1)) {
        return fail(format!("d={d}: term trace {first}"));
    }
    for w in traces[1..].windows(2) {
        if w[1] != w[0].neg() {
            return fail(format!("d={d}: traces do not alternate"));
        }
    }
    Ok(format!("d={d}: traces d, {first}, {}, …", first.neg()))
}

pub fn check_eigenvector(s: &PhaseSpace) -> Result<String> {
    let d = s.d();
    let gu = g0_unitary(s)?;
    // invariant_vector errors unless the eigenvalue-1 space is one-dimensional
    let res = invariant_vector(s, &gu)?;
    let psi = &res.psi;
    if gu.apply(s, psi)? != *psi {
        return fail(format!("d={d}: U ψ ≠ ψ"));
    }
    let eps = minus_one_pow((s.p() as u64 - 1) / 2);
    if s.parity().mul_vec(psi)? != psi.scale(&CycNumber::from_int(s.p(), eps)) {
        return fail(format!("d={d}: parity eigenvalue is not {eps}"));
    }
    let u = gu.unitary_part();
    if !u.mul(&u.conj_transpose()).is_identity() {
        return fail(format!("d={d}: U_Ḡ not unitary"));
    }
    Ok(format!("d={d}: fixed, unique, parity {eps}"))
}

/// (balanced, MUS) for the G_0 invariant vector.
pub fn balanced_verdict(s: &PhaseSpace) -> Result<(bool, bool)> {
    let psi = invariant_vector(s, &g0_unitary(s)?)?.psi;
    let mub = build_mub(s);
    Ok((is_mub_balanced(&mub, &psi)?.balanced, is_minimum_uncertainty(&mub, &psi)?))
}

pub fn check_balanced(s: &PhaseSpace) -> Result<String> {
    let d = s.d();
    let (bal, mus) = balanced_verdict(s)?;
    if d % 4 == 1 {
        return Ok(format!("d={d}: recorded balanced={bal}, MUS={mus}"));
    }
    if !bal || !mus {
        return fail(format!("d={d}: balanced={bal}, MUS={mus}"));
    }
    Ok(format!("d={d}: balanced, MUS"))
}

pub fn check_amburg(s: &PhaseSpace) -> Result<String> {
    let rep = amburg_check(s, &phase_points(s))?;
    if !(rep.matches && rep.covariant && rep.sum_is_one) {
        return fail(format!("d={}: {rep:?}", s.d()));
    }
    Ok(match rep.alignment {
        None => format!("d={}: equal without alignment", s.d()),
        Some(m) => format!("d={}: equal after aligning by {m}", s.d()),
    })
}

pub fn check_polytope(s: &PhaseSpace) -> Result<String> {
    let a = phase_points(s);
    check_phase_point_identities(s, &a)?;
    let lines = line_operators(s, &build_mub(s), &a)?;
    check_restsum(s, &lines, &a)?;
    let t = trace_table(s, &lines)?;
    Ok(format!(
        "d={}: trace table 1×{} 0×{} 1/d×{}",
        s.d(),
        t.ones,
        t.zeros,
        t.one_over_d
    ))
}

/// Common invariant line for the cyclers G_0^r, then the census.
pub fn check_single_orbit(s: &PhaseSpace) -> Result<String> {
    let f = s.field();
    let d = s.d() as u64;
    let g0 = cycler_generator(f, &s.extension())?;
    let base = invariant_vector(s, &make_gunitary(s, &g0)?)?.psi;
    let mut rs = Vec::new();
    for r in (1..d + 1).filter(|&r| gcd(r, d + 1) == 1) {
        let psi = invariant_vector(s, &make_gunitary(s, &g0.pow(f, r))?)?.psi;
        if psi.proportional_to(&base).is_none() {
            return fail(format!("d={d}: G_0^{r} has a different invariant line"));
        }
        rs.push(r.to_string());
    }
    let w = wigner_of_state(s, &phase_points(s), &base)?;
    let census = stabilizer_census(s, &w);
    let verdict = if census.matches_conjecture {
        "as conjectured"
    } else {
        "differs from conjecture"
    };
    Ok(format!(
        "d={d}: r∈{{{}}} share one line; stabilizer {} orbit {} ({verdict})",
        rs.join(","),
        census.stabilizer,
        census.orbit
    ))
}

pub fn check_group_orders(s: &PhaseSpace) -> Result<String> {
    let f = s.field();
    let d = s.d();
    let (sl, gl) = (count_sl2(f), count_gl2(f));
    if sl != d * (d * d - 1) || gl != (d - 1) * d * (d * d - 1) {
        return fail(format!("d={d}: |SL|={sl}, |GL|={gl}"));
    }
    Ok(format!("d={d}: |SL|={sl}, |GL|={gl}"))
}

// ---- criteria ------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED }
    }
}

fn run(id: u8, dims: &[(u64, i64)], mut check: impl FnMut(&PhaseSpace) -> Result<String>) -> CriterionResult {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut status = Status::Pass;
    for &dim in dims {
        match space(dim).and_then(|s| check(&s)) {
            Ok(n) => notes.push(n),
            Err(e) => {
                status = Status::Fail;
                notes.push(format!("FAILED {}^{}: {e}", dim.0, dim.1));
            }
        }
    }
    CriterionResult {
        id,
        title: TITLES[id as usize - 1],
        status,
        notes,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn criterion(id: u8, cfg: &SuiteConfig) -> CriterionResult {
    let seed = cfg.seed;
    match id {
        1 => run(1, &[(5, 1), (13, 1), (3, 1), (7, 1), (11, 1)], |s| check_gauss(s.p())),
        2 => run(2, &[(3, 1), (5, 1), (7, 1), (11, 1), (3, 3), (3, 2)], |s| {
            check_faithfulness(s, seed, 50, s.d() == 7 || s.d() == 27)
        }),
        3 => run(3, &[(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (3, 3)], |s| {
            check_covariance(s, seed, 50)
        }),
        4 => run(4, &[(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (3, 3)], check_mub_grid),
        5 => run(5, &[(5, 1), (7, 1), (3, 2)], |s| check_lemma1(s, seed, 100)),
        6 => run(6, &[(5, 1), (7, 1), (3, 2), (3, 3)], |s| check_type2_power(s, seed, 100)),
        7 => run(7, &[(3, 2), (7, 1), (3, 3)], check_companion_suborders),
        8 => run(8, &[(7, 1), (11, 1), (3, 3), (5, 1), (13, 1)], check_antisymplectic),
        9 => run(9, &[(3, 1), (5, 1), (7, 1), (11, 1), (3, 3)], check_projector),
        10 => run(10, &[(3, 1), (5, 1), (7, 1), (11, 1), (3, 3)], check_eigenvector),
        11 => run(11, &[(3, 1), (7, 1), (11, 1), (3, 3), (5, 1)], check_balanced),
        12 => run(12, &[(3, 1), (7, 1)], check_amburg),
        13 => run(13, &[(3, 1), (5, 1), (7, 1)], check_polytope),
        14 => run(14, &[(7, 1)], check_single_orbit),
        15 => run(15, &[(3, 1), (5, 1)], check_group_orders),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=15).map(|id| criterion(id, cfg)).collect()
}

/// Every check that applies at d = p^n. Criteria whose hypotheses exclude d,
/// or which are too costly above [`HEAVY_LIMIT`], are skipped with a reason.
pub fn verify_dimension(p: u64, n: i64, cfg: &SuiteConfig, heavy_limit: usize) -> Result<Vec<CriterionResult>> {
    let s = PhaseSpace::new(p, n)?;
    let d = s.d();
    let odd_n = s.n() % 2 == 1;
    let seed = cfg.seed;
    let heavy = d <= heavy_limit;
    let mut out = Vec::with_capacity(15);
    let mut push = |id: u8, skip: Option<&str>, check: &mut dyn FnMut() -> Result<String>| {
        let start = Instant::now();
        let (status, note) = match skip {
            Some(reason) => (Status::Skip, reason.to_string()),
            None => match check() {
                Ok(n) => (Status::Pass, n),
                Err(e) => (Status::Fail, format!("FAILED: {e}")),
            },
        };
        out.push(CriterionResult {
            id,
            title: TITLES[id as usize - 1],
            status,
            notes: vec![note],
            seconds: start.elapsed().as_secs_f64(),
        });
    };
    let needs_odd = (!odd_n).then_some("n even: no MUB-cyclers");
    let needs_3mod4 = (d % 4 != 3).then_some("needs d ≡ 3 (mod 4)");
    let too_big = (!heavy).then_some("d above the heavy-check limit");
    push(1, None, &mut || check_gauss(s.p()));
    push(2, None, &mut || check_faithfulness(&s, seed, 50, odd_n));
    push(3, None, &mut || check_covariance(&s, seed, 50));
    push(4, None, &mut || check_mub_grid(&s));
    push(5, None, &mut || check_lemma1(&s, seed, 100));
    push(6, None, &mut || check_type2_power(&s, seed, 100));
    push(7, None, &mut || check_companion_suborders(&s));
    push(8, needs_odd, &mut || check_antisymplectic(&s));
    push(9, needs_odd, &mut || check_projector(&s));
    push(10, needs_odd, &mut || check_eigenvector(&s));
    push(11, needs_odd, &mut || check_balanced(&s));
    push(12, needs_3mod4.or(too_big), &mut || check_amburg(&s));
    push(13, too_big, &mut || check_polytope(&s));
    push(14, needs_3mod4.or(too_big), &mut || check_single_orbit(&s));
    push(15, None, &mut || check_group_orders(&s));
    Ok(out)
}

/// The unitary part of U_{G0}, exposed for benchmarks.
pub fn g0_matrix(s: &PhaseSpace) -> Result<CycMatrix> {
    Ok(g0_unitary(s)?.unitary_part().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_signs() {
        for p in [3, 5, 7, 11, 13] {
            check_gauss(p).unwrap();
        }
    }

    #[test]
    fn small_dimension_verifies() {
        let res = verify_dimension(3, 1, &SuiteConfig::default(), HEAVY_LIMIT).unwrap();
        assert_eq!(res.len(), 15);
        assert!(res.iter().all(|r| r.status == Status::Pass), "{res:#?}");
    }

    #[test]
    fn even_n_skips_cycler_checks() {
        let res = verify_dimension(3, 2, &SuiteConfig::default(), HEAVY_LIMIT).unwrap();
        assert!(res.iter().all(CriterionResult::passed));
        assert_eq!(res[9].status, Status::Skip);
        assert_eq!(res[12].status, Status::Pass);
    }
}
