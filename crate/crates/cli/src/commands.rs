use std::fmt::{self, Write as _};

use num_integer::gcd;
use serde_json::{json, Map, Value};

use galmub_core::acceptance::{verify_dimension, Status, SuiteConfig};
use galmub_core::finite_field::is_prime;
use galmub_core::gl2::{cycler_generator, is_mub_cycler, mobius_order, suborder};
use galmub_core::gunitary::{invariant_vector, make_gunitary};
use galmub_core::mub::{
    all_probabilities, balanced_from_probabilities, build_mub, check_unbiasedness,
    is_minimum_uncertainty, renyi_report,
};
use galmub_core::polytope::{
    amburg_check, check_phase_point_identities, check_restsum, line_operators, phase_points,
    stabilizer_census, trace_table, wigner_of_state,
};
use galmub_core::{Error, FiniteField, MUBSet, PhasePoint, PhaseSpace, WignerTable};

use crate::render::{element, matrix, matrix_text, Renderer};

pub struct RunConfig {
    pub p: u64,
    pub n: i64,
    pub precision: u32,
    pub seed: u64,
    pub max_dim: u64,
    pub heavy_limit: usize,
}

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn validate(&self) -> Result<PhaseSpace> {
        if self.p == 2 || !is_prime(self.p) {
            return Err(CliError::Usage(format!("--p must be an odd prime, got {}", self.p)));
        }
        if self.n < 1 {
            return Err(CliError::Usage(format!("--n must be at least 1, got {}", self.n)));
        }
        u32::try_from(self.n)
            .ok()
            .and_then(|n| self.p.checked_pow(n))
            .filter(|&d| d <= self.max_dim)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "d = {}^{} exceeds --max-dim {}",
                    self.p, self.n, self.max_dim
                ))
            })?;
        Ok(PhaseSpace::new(self.p, self.n)?)
    }

    fn header(&self, command: &str, s: &PhaseSpace) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("command".into(), json!(command));
        m.insert("p".into(), json!(s.p()));
        m.insert("n".into(), json!(s.n()));
        m.insert("d".into(), json!(s.d()));
        m
    }
}

fn require_odd_n(s: &PhaseSpace) -> Result<()> {
    if s.n().is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "n must be odd: no MUB-cyclers exist for d = {}^{}",
            s.p(),
            s.n()
        )));
    }
    Ok(())
}

fn labels_json(f: &FiniteField, mub: &MUBSet) -> Value {
    let mut m = Map::new();
    for z in mub.labels() {
        let name = match z {
            galmub_core::ProjPoint::Finite(a) => element(f, *a),
            galmub_core::ProjPoint::Infinity => "∞".to_string(),
        };
        m.insert(z.label(), json!(name));
    }
    Value::Object(m)
}

pub fn field_info(cfg: &RunConfig, s: &PhaseSpace) -> Result<Outcome> {
    let f = s.field();
    let ext = s.extension();
    let modulus = crate::render::poly(f.modulus());
    let prim = element(f, f.primitive_element());
    let residues: Vec<String> = f
        .nonzero_elements()
        .filter(|&a| f.quadratic_character(a) == 1)
        .map(|a| element(f, a))
        .collect();
    let eta_order = ext.eta_order();
    let mut m = cfg.header("field-info", s);
    m.insert("modulus".into(), json!(modulus));
    m.insert("modulus_coeffs".into(), json!(f.modulus()));
    m.insert("primitive_element".into(), json!(prim));
    m.insert("quadratic_residues".into(), json!(residues));
    m.insert("eta_order".into(), json!(eta_order));

    let mut text = String::new();
    writeln!(text, "GF({}) = F_{}[x]/({modulus})", s.d(), s.p()).unwrap();
    writeln!(text, "primitive element: {prim}").unwrap();
    writeln!(text, "quadratic residues ({}): {}", residues.len(), residues.join(", ")).unwrap();
    writeln!(text, "order of η: {eta_order}").unwrap();
    Ok(Outcome {
        json: Value::Object(m),
        text,
        ok: true,
    })
}

pub fn mub(cfg: &RunConfig, s: &PhaseSpace) -> Result<Outcome> {
    let f = s.field();
    let r = Renderer::new(s.p(), cfg.precision);
    let mub = build_mub(s);
    let checked = check_unbiasedness(s, &mub)?;
    let mut bases = Map::new();
    let mut text = String::new();
    writeln!(text, "d = {}: {} bases, {checked} overlaps checked exactly", s.d(), s.d() + 1).unwrap();
    for &z in mub.labels() {
        let vectors: Vec<Value> = mub.basis(z).iter().map(|v| r.numbers(v.entries())).collect();
        bases.insert(z.label(), Value::Array(vectors));
        let e0: Vec<String> = mub.vector(z, 0).entries().iter().map(|x| r.short(x)).collect();
        writeln!(text, "basis {z}: e_0 = ({})", e0.join(", ")).unwrap();
    }
    let mut m = cfg.header("mub", s);
    m.insert("labels".into(), labels_json(f, &mub));
    m.insert("overlaps_checked".into(), json!(checked));
    m.insert("bases".into(), Value::Object(bases));
    Ok(Outcome {
        json: Value::Object(m),
        text,
        ok: true,
    })
}

pub fn cyclers(cfg: &RunConfig, s: &PhaseSpace) -> Result<Outcome> {
    require_odd_n(s)?;
    let f = s.field();
    let ext = s.extension();
    let d = s.d() as u64;
    let g0 = cycler_generator(f, &ext)?;
    let order = ext.eta_order();
    let minus_one = f.from_int(-1);
    let mut classes = Vec::new();
    let mut text = String::new();
    writeln!(text, "G_0 = {} (order {order})", matrix_text(f, &g0)).unwrap();
    let mut ok = true;
    for r in (1..=d).filter(|&r| gcd(r, d + 1) == 1) {
        let mut powers = Vec::new();
        writeln!(text, "class r = {r} (mod {}):", d + 1).unwrap();
        for e in (r..order).step_by(d as usize + 1) {
            let g = g0.pow(f, e);
            let det = g.det(f);
            let anti = det == minus_one;
            let cycler = is_mub_cycler(f, &ext, &g)?;
            let sub = suborder(f, &g);
            let mob = mobius_order(f, &g);
            ok &= cycler;
            powers.push(json!({
                "exponent": e,
                "matrix": matrix(f, &g),
                "det": element(f, det),
                "antisymplectic": anti,
                "suborder": sub,
                "mobius_order": mob,
                "is_cycler": cycler,
            }));
            writeln!(
                text,
                "  G_0^{e} = {} det {} suborder {sub}{}{}",
                matrix_text(f, &g),
                element(f, det),
                if anti { " anti-symplectic" } else { "" },
                if cycler { "" } else { " NOT A CYCLER" }
            )
            .unwrap();
        }
        classes.push(json!({"r": r, "powers": powers}));
    }
    let mut m = cfg.header("cyclers", s);
    m.insert("g0".into(), matrix(f, &g0));
    m.insert("g0_order".into(), json!(order));
    m.insert("classes".into(), Value::Array(classes));
    Ok(Outcome {
        json: Value::Object(m),
        text,
        ok,
    })
}

pub fn balanced(cfg: &RunConfig, s: &PhaseSpace) -> Result<Outcome> {
    require_odd_n(s)?;
    let f = s.field();
    let d = s.d();
    let r = Renderer::new(s.p(), cfg.precision);
    let g0 = cycler_generator(f, &s.extension())?;
    let eig = invariant_vector(s, &make_gunitary(s, &g0)?)?;
    let psi = &eig.psi;
    let mub = build_mub(s);
    let probs = all_probabilities(&mub, psi)?;
    let report = balanced_from_probabilities(&probs);
    let mus = is_minimum_uncertainty(&mub, psi)?;
    let renyi = renyi_report(s, &mub, psi, cfg.precision)?;
    let open = d % 4 == 1;
    let verdict = match (open, report.balanced && mus) {
        (true, _) => format!(
            "d ≡ 1 (mod 4) is an open case: computed balanced = {}, MUS = {mus}",
            report.balanced
        ),
        (false, true) => "MUB-balanced and minimum uncertainty".to_string(),
        (false, false) => format!("FAILED: balanced = {}, MUS = {mus}", report.balanced),
    };

    let mut prob_json = Map::new();
    let mut text = String::new();
    let psi_dec: Vec<String> = psi.entries().iter().map(|x| r.short(x)).collect();
    writeln!(text, "d = {d}: ψ (unnormalized) = ({})", psi_dec.join(", ")).unwrap();
    for (z, row) in mub.labels().iter().zip(&probs) {
        prob_json.insert(z.label(), r.numbers(row));
        let dec: Vec<String> = row.iter().map(|x| r.short(x)).collect();
        writeln!(text, "p^({z}) = ({})", dec.join(", ")).unwrap();
    }
    writeln!(
        text,
        "Rényi-2 total in [{:.6}, {:.6}], bound in [{:.6}, {:.6}]{}",
        renyi.total_lo,
        renyi.total_hi,
        renyi.bound_lo,
        renyi.bound_hi,
        if renyi.saturated { ", saturated" } else { "" }
    )
    .unwrap();
    writeln!(text, "verdict: {verdict}").unwrap();

    let mut m = cfg.header("balanced", s);
    m.insert("labels".into(), labels_json(f, &mub));
    m.insert("psi".into(), r.numbers(psi.entries()));
    m.insert("phi".into(), r.numbers(eig.phi.entries()));
    m.insert("lambda_trail".into(), r.number(&eig.lambda_trail));
    m.insert("mu".into(), r.number(&eig.mu));
    m.insert("resolvent_power".into(), json!(eig.resolvent_power));
    m.insert("probabilities".into(), Value::Object(prob_json));
    m.insert("balanced".into(), json!(report.balanced));
    m.insert("permutations".into(), json!(report.permutations));
    m.insert("minimum_uncertainty".into(), json!(mus));
    m.insert("renyi".into(), serde_json::to_value(&renyi).expect("serializable"));
    m.insert("open_case".into(), json!(open));
    m.insert("verdict".into(), json!(verdict));
    Ok(Outcome {
        json: Value::Object(m),
        text,
        ok: open || (report.balanced && mus),
    })
}

fn wigner_json(f: &FiniteField, r: &Renderer, w: &WignerTable) -> Value {
    let rows: Vec<Value> = f
        .elements()
        .map(|p1| {
            let row: Vec<_> = f.elements().map(|p2| w.get(f, PhasePoint::new(p1, p2)).clone()).collect();
            r.numbers(&row)
        })
        .collect();
    json!({"d": w.d(), "rows": rows})
}

pub fn polytope(cfg: &RunConfig, s: &PhaseSpace) -> Result<Outcome> {
    let d = s.d();
    if d > cfg.heavy_limit {
        return Err(CliError::Usage(format!(
            "polytope needs d ≤ --heavy-limit ({}), got d = {d}",
            cfg.heavy_limit
        )));
    }
    let f = s.field();
    let r = Renderer::new(s.p(), cfg.precision);
    let a = phase_points(s);
    check_phase_point_identities(s, &a)?;
    let mub = build_mub(s);
    let lines = line_operators(s, &mub, &a)?;
    check_restsum(s, &lines, &a)?;
    let table = trace_table(s, &lines)?;
    let mut m = cfg.header("polytope", s);
    let mut text = String::new();
    writeln!(text, "d = {d}: {} phase points, {} line operators", a.len(), lines.len()).unwrap();
    writeln!(text, "phase-point identities and line sums hold").unwrap();
    writeln!(
        text,
        "Tr P_l P_l': 1 × {}, 0 × {}, 1/d × {}",
        table.ones, table.zeros, table.one_over_d
    )
    .unwrap();
    m.insert("phase_point_identities".into(), json!(true));
    m.insert("line_sums".into(), json!(true));
    m.insert(
        "trace_table".into(),
        json!({"one": table.ones, "zero": table.zeros, "one_over_d": table.one_over_d}),
    );
    let mut ok = true;
    if s.n() % 2 == 1 {
        let g0 = cycler_generator(f, &s.extension())?;
        let psi = invariant_vector(s, &make_gunitary(s, &g0)?)?.psi;
        let w = wigner_of_state(s, &a, &psi)?;
        writeln!(text, "Wigner function of the G_0 invariant state (rows p1, columns p2):").unwrap();
        for p1 in f.elements() {
            let row: Vec<String> = f
                .elements()
                .map(|p2| r.short(w.get(f, PhasePoint::new(p1, p2))))
                .collect();
            writeln!(text, "  {}", row.join("  ")).unwrap();
        }
        m.insert("wigner".into(), wigner_json(f, &r, &w));
        m.insert("wigner_sum".into(), r.number(&w.sum()));
        m.insert("wigner_purity".into(), r.number(&w.purity()));
        if d % 4 == 3 {
            let amburg = amburg_check(s, &a)?;
            ok &= amburg.matches && amburg.covariant && amburg.sum_is_one;
            writeln!(
                text,
                "closed-form Wigner function: {}, covariant {}, sums to one {}",
                match (&amburg.direct_match, &amburg.alignment) {
                    (true, _) => "equal as computed".to_string(),
                    (false, Some(map)) => format!("equal after aligning by {map}"),
                    (false, None) => "MISMATCH".to_string(),
                },
                amburg.covariant,
                amburg.sum_is_one
            )
            .unwrap();
            let census = stabilizer_census(s, &w);
            writeln!(
                text,
                "census: stabilizer {} of {}, orbit {} (conjectured {} / {})",
                census.stabilizer,
                census.group_order,
                census.orbit,
                census.expected_stabilizer,
                census.expected_orbit
            )
            .unwrap();
            m.insert("amburg".into(), serde_json::to_value(&amburg).expect("serializable"));
            m.insert("census".into(), serde_json::to_value(&census).expect("serializable"));
        }
    }
    Ok(Outcome {
        json: Value::Object(m),
        text,
        ok,
    })
}

pub fn verify_all(cfg: &RunConfig, s: &PhaseSpace) -> Result<Outcome> {
    let suite = SuiteConfig { seed: cfg.seed };
    let results = verify_dimension(s.p() as u64, s.n() as i64, &suite, cfg.heavy_limit)?;
    let mut text = String::new();
    for res in &results {
        writeln!(text, "{}", res.line()).unwrap();
    }
    let failed = results.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = results.iter().filter(|r| r.status == Status::Skip).count();
    writeln!(
        text,
        "{} passed, {failed} failed, {skipped} skipped",
        results.len() - failed - skipped
    )
    .unwrap();
    let mut m = cfg.header("verify-all", s);
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("results".into(), serde_json::to_value(&results).expect("serializable"));
    m.insert("passed".into(), json!(failed == 0));
    Ok(Outcome {
        json: Value::Object(m),
        text,
        ok: failed == 0,
    })
}
