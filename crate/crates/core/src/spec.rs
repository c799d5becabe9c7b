//! Manifold spec files and built-in manifolds.
//!
//! A spec is JSON:
//!
//! ```json
//! {
//!   "A": "2*X1",
//!   "B": "2*X1 + X2 + X3",
//!   "constraints": ["2*X1 + X2 + X3", "-(X2 + X3)"],
//!   "sample_box": [[0.5, 2.0], [-1.0, -0.1], [-1.0, -0.1]]
//! }
//! ```
//!
//! Each constraint string `e` means `e > 0`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circulant::CirculantMetric;
use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::sampling::{Rng64, SampleBox};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(default)]
    pub constraints: Vec<String>,
    pub sample_box: SampleBox,
}

pub const BUILTIN_NAMES: [&str; 4] = ["paper-example", "flat", "parallel-example", "sum-v2"];

impl ManifoldSpec {
    pub fn new(a: &str, b: &str, constraints: &[&str], sample_box: SampleBox) -> Self {
        ManifoldSpec {
            a: a.to_string(),
            b: b.to_string(),
            constraints: constraints.iter().map(|c| c.to_string()).collect(),
            sample_box,
        }
    }

    /// `A = 2 X1`, `B = 2 X1 + X2 + X3` on `2X1 + X2 + X3 > 0`, `X2 + X3 < 0`.
    pub fn paper_example() -> Self {
        Self::new(
            "2*X1",
            "2*X1 + X2 + X3",
            &["2*X1 + X2 + X3", "-(X2 + X3)"],
            SampleBox([[0.5, 2.0], [-1.0, -0.1], [-1.0, -0.1]]),
        )
    }

    /// Constant coefficients (flat).
    pub fn flat() -> Self {
        Self::new("2", "1", &[], SampleBox::cube(-1.0, 1.0))
    }

    /// `grad A = grad B . S` holds everywhere.
    pub fn parallel_example() -> Self {
        Self::new(
            "X1 + X2 + X3 + 1",
            "X1 + X2 + X3",
            &["X1 + X2 + X3"],
            SampleBox::cube(0.1, 1.0),
        )
    }

    /// Fields depending on `X1 + X2 + X3` only; in `V2` but not `V1`.
    pub fn sum_v2() -> Self {
        Self::new(
            "3 + (X1 + X2 + X3)^2",
            "1 + 0.5*sin(X1 + X2 + X3)",
            &[],
            SampleBox::cube(-1.0, 1.0),
        )
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "paper-example" => Some(Self::paper_example()),
            "flat" => Some(Self::flat()),
            "parallel-example" => Some(Self::parallel_example()),
            "sum-v2" => Some(Self::sum_v2()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ManifoldSpec = serde_json::from_str(text).map_err(|e| GeomError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialises")
    }

    /// Expressions parse and the sample box is non-empty. Whether `A > B > 0`
    /// holds is only discovered when points are evaluated.
    pub fn validate(&self) -> Result<()> {
        self.metric().map(|_| ())?;
        self.sample_box.validate()
    }

    pub fn metric(&self) -> Result<CirculantMetric> {
        let field = |name: &str, text: &str| {
            Expr::parse(text).map_err(|e| GeomError::InvalidSpec(format!("field {name}: {e}")))
        };
        let a = field("A", &self.a)?;
        let b = field("B", &self.b)?;
        let constraints = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, c)| field(&format!("constraints[{i}]"), c))
            .collect::<Result<Vec<_>>>()?;
        Ok(CirculantMetric::new(a, b, constraints))
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// A random polynomial manifold of total degree at most 3 that satisfies
    /// `A - B >= 1` and `B >= 0.5` on the cube `[-1, 1]^3`.
    pub fn random_polynomial(seed: u64) -> Self {
        let mut rng = Rng64::new(seed);
        let mut poly = |base: f64| {
            // coefficients sum to at most 0.45 in absolute value, which bounds
            // the perturbation on the unit cube
            let monomials = monomials_up_to_3();
            let raw: Vec<f64> = monomials.iter().map(|_| rng.range(-1.0, 1.0)).collect();
            let total: f64 = raw.iter().map(|c| c.abs()).sum();
            let mut text = format!("{base}");
            for (c, mono) in raw.iter().zip(&monomials) {
                let c = 0.45 * c / total;
                let sign = if c < 0.0 { "-" } else { "+" };
                text.push_str(&format!(" {sign} {}*{mono}", c.abs()));
            }
            text
        };
        let a = poly(3.0);
        let b = poly(1.0);
        ManifoldSpec {
            a,
            b,
            constraints: Vec::new(),
            sample_box: SampleBox::cube(-1.0, 1.0),
        }
    }
}

fn monomials_up_to_3() -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=3 - i {
            for k in 0..=3 - i - j {
                if i + j + k == 0 {
                    continue;
                }
                let mut factors = Vec::new();
                for (var, pow) in [("X1", i), ("X2", j), ("X3", k)] {
                    match pow {
                        0 => {}
                        1 => factors.push(var.to_string()),
                        p => factors.push(format!("{var}^{p}")),
                    }
                }
                out.push(factors.join("*"));
            }
        }
    }
    out
}

/// Resolve a spec argument: an existing file path, else a built-in name.
pub fn load_spec(name_or_path: &str) -> Result<(String, ManifoldSpec)> {
    let path = Path::new(name_or_path);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return Ok((name_or_path.to_string(), ManifoldSpec::from_json(&text)?));
    }
    ManifoldSpec::builtin(name_or_path)
        .map(|s| (name_or_path.to_string(), s))
        .ok_or_else(|| GeomError::UnknownBuiltin(name_or_path.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Point;

    #[test]
    fn builtin_paper_example() {
        let (name, spec) = load_spec("paper-example").unwrap();
        assert_eq!(name, "paper-example");
        assert_eq!(spec.a, "2*X1");
        assert_eq!(spec.b, "2*X1 + X2 + X3");
        let m = spec.metric().unwrap();
        assert!(m.admits(&Point::new(1.0, -1.0, -0.5), 0.0));
        assert!(!m.admits(&Point::new(1.0, 1.0, 1.0), 0.0));
    }

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_NAMES {
            ManifoldSpec::builtin(name).unwrap().validate().unwrap();
        }
        assert!(matches!(load_spec("no-such-thing"), Err(GeomError::UnknownBuiltin(_))));
    }

    #[test]
    fn json_round_trip_and_hash() {
        let spec = ManifoldSpec::paper_example();
        let back = ManifoldSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
        assert_eq!(spec.hash(), back.hash());
        assert_eq!(spec.hash().len(), 64);
        assert_ne!(spec.hash(), ManifoldSpec::flat().hash());
    }

    #[test]
    fn file_spec_with_bad_constant_defers_to_evaluation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"A": "1", "B": "2", "sample_box": [[0,1],[0,1],[0,1]]}"#).unwrap();
        let (_, spec) = load_spec(path.to_str().unwrap()).unwrap();
        let m = spec.metric().unwrap();
        assert!(matches!(
            m.metric_at(&Point::new(0.5, 0.5, 0.5)),
            Err(GeomError::DomainViolation { .. })
        ));
    }

    #[test]
    fn malformed_expression_is_a_spec_error() {
        let text = r#"{"A": "2*X1 + (X2", "B": "1", "sample_box": [[0,1],[0,1],[0,1]]}"#;
        match ManifoldSpec::from_json(text) {
            Err(GeomError::InvalidSpec(msg)) => assert!(msg.contains("field A") && msg.contains("position 7"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ManifoldSpec::from_json("{not json"),
            Err(GeomError::InvalidSpec(_))
        ));
        let empty_box = r#"{"A": "2", "B": "1", "sample_box": [[1,0],[0,1],[0,1]]}"#;
        assert!(ManifoldSpec::from_json(empty_box).is_err());
    }

    #[test]
    fn random_polynomial_manifolds_are_valid_on_the_cube() {
        for seed in 0..20 {
            let spec = ManifoldSpec::random_polynomial(seed);
            let m = spec.metric().unwrap();
            let mut rng = Rng64::new(seed + 100);
            for _ in 0..50 {
                let p = rng.point_in(&spec.sample_box);
                let g = m.metric_at(&p).unwrap();
                assert!(g.a - g.b >= 1.0 && g.b >= 0.5);
            }
        }
    }
}
