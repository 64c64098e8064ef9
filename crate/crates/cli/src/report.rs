//! JSON documents written by the commands. Complex numbers are `[re, im]`
//! pairs; an infinite step bound is the string `"inf"`.

use std::io::Write;
use std::path::Path;

use lspline_core::{BandedQ, Complex64, FrequencyVector, KnotVector, NaturalLSpline, StepBound, TridiagonalR};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn pairs(v: &[Complex64]) -> Vec<Pair> {
    v.iter().copied().map(pair).collect()
}

pub fn unpairs(v: &[Pair]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

mod step_bound {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: serde::Serializer>(d: &StepBound, s: S) -> Result<S::Ok, S::Error> {
        match d {
            StepBound::Finite(v) => Repr::Number(*v),
            StepBound::Infinite => Repr::Text("inf".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<StepBound, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(StepBound::Finite(v)),
            Repr::Text(t) if t == "inf" => Ok(StepBound::Infinite),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad delta {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpDominance {
    pub row_ratios: Vec<f64>,
    pub max_row_ratio: f64,
    pub strictly_dominant: bool,
    pub solver: String,
}

/// Result of `interp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpDoc {
    pub lambda: Vec<Pair>,
    #[serde(with = "step_bound")]
    pub delta: StepBound,
    pub knots: Vec<f64>,
    pub g: Vec<Pair>,
    pub gamma: Vec<Pair>,
    pub dominance: InterpDominance,
    pub grid: Vec<f64>,
    pub values: Vec<Pair>,
}

impl InterpDoc {
    /// Rebuild the spline from the stored knots, data and `γ`.
    pub fn spline(&self) -> CliResult<NaturalLSpline> {
        let lam = FrequencyVector::new(unpairs(&self.lambda))?;
        let knots = KnotVector::new(self.knots.clone())?;
        Ok(NaturalLSpline::from_parts(&lam, &knots, unpairs(&self.g), unpairs(&self.gamma))?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RBands {
    pub sub: Vec<Pair>,
    pub diag: Vec<Pair>,
    pub sup: Vec<Pair>,
}

/// Result of `matrices`: `R` by bands, `Q` by columns (three entries each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatricesDoc {
    pub lambda: Vec<Pair>,
    #[serde(with = "step_bound")]
    pub delta: StepBound,
    pub knots: Vec<f64>,
    pub r: RBands,
    pub q: Vec<[Pair; 3]>,
    pub row_ratios: Vec<f64>,
}

impl MatricesDoc {
    pub fn new(lam: &FrequencyVector, delta: StepBound, knots: &KnotVector, r: &TridiagonalR, q: &BandedQ, ratios: Vec<f64>) -> Self {
        MatricesDoc {
            lambda: pairs(lam.as_slice()),
            delta,
            knots: knots.as_slice().to_vec(),
            r: RBands { sub: pairs(r.sub()), diag: pairs(r.diag()), sup: pairs(r.sup()) },
            q: q.columns().iter().map(|col| col.map(pair)).collect(),
            row_ratios: ratios,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub real: bool,
    pub conjugation_invariant: bool,
    pub symmetric: bool,
    pub balanced_pairs: bool,
}

/// `τ(x) = τ₀ + c₁x + c₂x² + O(x³)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauTaylor {
    pub tau0: Pair,
    pub c1: Pair,
    pub c2: Pair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagDominance {
    /// Half-width of the sampled window `[−delta, delta]`.
    pub delta: f64,
    pub samples: usize,
    pub m_delta: f64,
    pub hypothesis_checked: bool,
    pub guaranteed: bool,
    pub probe_max_row_ratio: Option<f64>,
}

/// Observed parity of the kernels and of `R`, next to the frequency-vector
/// conditions that predict them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryVerdicts {
    pub sigma_odd: bool,
    pub r_symmetric: bool,
    pub rho_odd: bool,
    pub consistent: bool,
}

/// Result of `diag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagDoc {
    pub lambda: Vec<Pair>,
    #[serde(with = "step_bound")]
    pub delta: StepBound,
    pub classification: Classification,
    pub tau_taylor: TauTaylor,
    pub local_max_at_zero: Option<bool>,
    pub dominance: DiagDominance,
    pub symmetry: SymmetryVerdicts,
}

/// Pretty JSON to `path`, or to stdout when `path` is `None`.
pub fn emit<T: Serialize>(doc: &T, path: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| CliError::Parse(e.to_string()))?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_encoding() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct W {
            #[serde(with = "step_bound")]
            d: StepBound,
        }
        for (d, text) in [(StepBound::Infinite, r#"{"d":"inf"}"#), (StepBound::Finite(3.5), r#"{"d":3.5}"#)] {
            assert_eq!(serde_json::to_string(&W { d }).unwrap(), text);
            assert_eq!(serde_json::from_str::<W>(text).unwrap(), W { d });
        }
        assert!(serde_json::from_str::<W>(r#"{"d":"big"}"#).is_err());
    }

    #[test]
    fn pairs_roundtrip() {
        let v = vec![Complex64::new(0.1, -2.0), Complex64::new(1e-300, 7.0)];
        assert_eq!(unpairs(&pairs(&v)), v);
    }
}
