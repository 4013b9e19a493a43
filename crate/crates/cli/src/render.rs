//! Exact and decimal renderings side by side.

use galmub_core::interval::Embedder;
use galmub_core::{CycNumber, Fe, FiniteField, GL2Mat};
use serde_json::{json, Value};

pub struct Renderer {
    emb: Embedder,
    digits: usize,
}

impl Renderer {
    pub fn new(p: u32, precision: u32) -> Self {
        let precision = precision.max(64);
        Renderer {
            emb: Embedder::new(p, precision),
            digits: (precision as f64 * std::f64::consts::LOG10_2) as usize - 2,
        }
    }

    pub fn decimal(&self, x: &CycNumber) -> String {
        self.decimal_to(x, self.digits)
    }

    /// Twelve digits, for text summaries.
    pub fn short(&self, x: &CycNumber) -> String {
        self.decimal_to(x, self.digits.min(12))
    }

    fn decimal_to(&self, x: &CycNumber, digits: usize) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let e = self.emb.embed(x);
        let digits = digits.min(e.re.natural_digits());
        if x.is_real() {
            e.re.to_decimal(digits)
        } else {
            e.to_decimal(digits)
        }
    }

    pub fn number(&self, x: &CycNumber) -> Value {
        json!({"exact": x.to_string(), "decimal": self.decimal(x)})
    }

    pub fn numbers<'a>(&self, xs: impl IntoIterator<Item = &'a CycNumber>) -> Value {
        Value::Array(xs.into_iter().map(|x| self.number(x)).collect())
    }
}

/// Field element as a polynomial in x, e.g. "x^2 + 2".
pub fn element(f: &FiniteField, a: Fe) -> String {
    poly(&f.coeffs(a))
}

pub fn poly(coeffs: &[u32]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (k, 1) => format!("x^{k}"),
            (k, c) => format!("{c}x^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn matrix(f: &FiniteField, g: &GL2Mat) -> Value {
    json!([[element(f, g.a), element(f, g.b)], [element(f, g.c), element(f, g.d)]])
}

pub fn matrix_text(f: &FiniteField, g: &GL2Mat) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        element(f, g.a),
        element(f, g.b),
        element(f, g.c),
        element(f, g.d)
    )
}
