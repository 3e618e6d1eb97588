//! Serializable report shapes. Field order is fixed by declaration, so equal
//! inputs serialize byte-identically.

use hardy_core::adjoint::{AdjointBackend, AdjointResult};
use hardy_core::boundedness::{
    ConditionRecord, NecessaryConditions, ObstructionWitness, QlpVerdict, SelfMapVerdict,
    SymbolClassification, WitnessKind,
};
use hardy_core::Complex64;
use serde::Serialize;

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
pub struct SelfMapJson {
    pub is_selfmap: bool,
    pub method: String,
    pub failures: Vec<String>,
}

impl From<&SelfMapVerdict> for SelfMapJson {
    fn from(v: &SelfMapVerdict) -> Self {
        SelfMapJson {
            is_selfmap: v.is_selfmap,
            method: v.method.to_string(),
            failures: v.failures.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct ConditionJson {
    pub name: String,
    /// `null` marks a condition that does not apply.
    pub passed: Option<bool>,
    pub detail: String,
}

impl From<&ConditionRecord> for ConditionJson {
    fn from(r: &ConditionRecord) -> Self {
        ConditionJson {
            name: r.name.to_string(),
            passed: r.passed,
            detail: r.detail.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub kind: String,
    pub bound_k: f64,
    pub tail_radius: f64,
    pub test_function: String,
}

impl From<&ObstructionWitness> for WitnessJson {
    fn from(w: &ObstructionWitness) -> Self {
        WitnessJson {
            kind: match w.kind {
                WitnessKind::FiniteLimitAtInfinity => "finite-limit-at-infinity".into(),
                WitnessKind::BoundedOnTail => "bounded-on-tail".into(),
            },
            bound_k: w.bound_k,
            tail_radius: w.tail_radius,
            test_function: w.test_function.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyJson {
    pub verdict: String,
    pub bounded: bool,
    pub selfmap: SelfMapJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leading_ratio: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_ratio: Option<[f64; 2]>,
    pub conditions: Vec<ConditionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qlp: Option<QlpJson>,
}

pub fn classification_json(
    c: &SymbolClassification,
    witness: Option<&ObstructionWitness>,
) -> ClassifyJson {
    ClassifyJson {
        verdict: if c.bounded { "bounded" } else { "unbounded" }.into(),
        bounded: c.bounded,
        selfmap: (&c.selfmap).into(),
        n: Some(c.n),
        m: Some(c.m),
        leading_ratio: Some(pair(c.leading_ratio)),
        constant_ratio: c.constant_ratio.map(pair),
        conditions: c.reasons.iter().map(ConditionJson::from).collect(),
        obstruction: witness.map(WitnessJson::from),
        qlp: None,
    }
}

pub fn not_selfmap_json(v: &SelfMapVerdict, nc: &NecessaryConditions) -> ClassifyJson {
    ClassifyJson {
        verdict: "not applicable: not a self-map".into(),
        bounded: false,
        selfmap: v.into(),
        n: None,
        m: None,
        leading_ratio: None,
        constant_ratio: None,
        conditions: vec![
            (&nc.degree_gap).into(),
            (&nc.leading_ratio).into(),
            (&nc.constant_ratio).into(),
        ],
        obstruction: None,
        qlp: None,
    }
}

#[derive(Serialize)]
pub struct QlpJson {
    pub bounded: bool,
    pub gap: f64,
    pub top_num_exponent: f64,
    pub top_den_exponent: f64,
    pub note: String,
}

impl From<&QlpVerdict> for QlpJson {
    fn from(v: &QlpVerdict) -> Self {
        QlpJson {
            bounded: v.bounded,
            gap: v.gap,
            top_num_exponent: v.top_num_exponent,
            top_den_exponent: v.top_den_exponent,
            note: v.note.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct AtomJson {
    pub location: f64,
    pub mass: f64,
}

#[derive(Serialize)]
pub struct MeasureJson {
    pub alpha: f64,
    pub atoms: Vec<AtomJson>,
    pub c: f64,
    pub fitted_c: f64,
    pub fit_residual: f64,
    pub total_mass: f64,
    pub density_identically_zero: bool,
    /// `[t, density(t)]` samples on a uniform grid.
    pub density_samples: Vec<[f64; 2]>,
}

#[derive(Serialize)]
pub struct AdjointJson {
    pub z: [f64; 2],
    pub value: [f64; 2],
    pub backend: String,
    pub preimages: Vec<PreimageJson>,
    pub weights: Vec<[f64; 2]>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureJson>,
}

#[derive(Serialize)]
pub struct PreimageJson {
    pub location: [f64; 2],
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct QuadratureJson {
    pub converged: bool,
    pub error_estimate: f64,
    pub refinement: Vec<(usize, [f64; 2])>,
}

pub fn backend_name(b: AdjointBackend) -> &'static str {
    match b {
        AdjointBackend::Residue => "residue",
        AdjointBackend::Integral => "integral",
        AdjointBackend::AcBoundary => "ac",
    }
}

pub fn adjoint_json(r: &AdjointResult, verbose: bool) -> AdjointJson {
    AdjointJson {
        z: pair(r.z),
        value: pair(r.value),
        backend: backend_name(r.backend).to_string(),
        preimages: r
            .preimages
            .as_ref()
            .map(|rs| {
                rs.roots
                    .iter()
                    .map(|&(t, m)| PreimageJson {
                        location: pair(t),
                        multiplicity: m,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        weights: r.weights.iter().map(|&w| pair(w)).collect(),
        warnings: r.warnings.clone(),
        quadrature: if verbose {
            r.quadrature.as_ref().map(|q| QuadratureJson {
                converged: q.converged,
                error_estimate: q.error_estimate,
                refinement: q.history.iter().map(|&(n, v)| (n, pair(v))).collect(),
            })
        } else {
            None
        },
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub measured: f64,
    /// `null` marks an informational record with no pass threshold.
    pub threshold: Option<f64>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub checks: Vec<CheckJson>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct TransferJson {
    pub unitarity_defects: Vec<f64>,
    pub two_path_gap: f64,
    pub weight_samples: Vec<WeightSampleJson>,
    pub weight_verdict: String,
    pub consistent_with_classifier: bool,
}

#[derive(Serialize)]
pub struct WeightSampleJson {
    pub delta: f64,
    pub weight_modulus: f64,
}
