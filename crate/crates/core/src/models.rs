//! Closed-form spectral predicates for canonical infinite-dimensional
//! operators — the unilateral and bilateral shifts, quasi-nilpotent
//! weighted shifts, and cyclic diagonal operators — together with finite
//! truncations and a truncation diagnostic that documents the spectral
//! pollution of sections.

use serde::Serialize;

use crate::error::Error;
use crate::linalg::QMatrix;
use crate::quat::{ONE, Quaternion};
use crate::spectrum::{self, SpectrumKind};

/// Tolerance for the exact set predicates (sphere equalities on |q|).
pub const MODEL_TOL: f64 = 1e-9;

/// Standing disclaimer attached to every truncation report.
pub const POLLUTION_DISCLAIMER: &str =
    "spectral pollution warning: finite sections do not approximate the model \
     spectra — the truncated unilateral shift is nilpotent with spectrum {0} \
     while the model spectrum is the full closed unit ball; section data is \
     reported for gauge sanity only";

/// Weight rule for a quasi-nilpotent weighted shift. Constructors accept
/// only rules with w_k → 0 and sup_k w_k < ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// w_k = 1/(k+1).
    Harmonic,
    /// w_k = ratio^{k+1} with 0 < ratio < 1.
    Geometric { ratio: f64 },
}

impl WeightRule {
    pub fn weight(&self, k: usize) -> f64 {
        match self {
            WeightRule::Harmonic => 1.0 / (k as f64 + 1.0),
            WeightRule::Geometric { ratio } => ratio.powi(k as i32 + 1),
        }
    }

    /// sup_k w_k, recorded in the model descriptor.
    pub fn sup(&self) -> f64 {
        self.weight(0)
    }
}

/// A canonical operator with closed-form spectral sets. The predicates
/// are encoded, never inferred from finite sections.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorModel {
    UnilateralShift,
    BilateralShift,
    WeightedShift(WeightRule),
    /// Entries repeat cyclically under truncation.
    Diagonal(Vec<Quaternion>),
}

impl OperatorModel {
    pub fn weighted_shift(rule: WeightRule) -> Result<Self, Error> {
        if let WeightRule::Geometric { ratio } = rule {
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Error::Model(format!(
                    "geometric weight ratio {ratio} is not in (0, 1); weights must \
                     decay to zero"
                )));
            }
        }
        Ok(OperatorModel::WeightedShift(rule))
    }

    pub fn diagonal(entries: Vec<Quaternion>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::Model("diagonal model needs at least one entry".into()));
        }
        Ok(OperatorModel::Diagonal(entries))
    }

    pub fn name(&self) -> String {
        match self {
            OperatorModel::UnilateralShift => "unilateral-shift".into(),
            OperatorModel::BilateralShift => "bilateral-shift".into(),
            OperatorModel::WeightedShift(WeightRule::Harmonic) => "weighted-shift:harmonic".into(),
            OperatorModel::WeightedShift(WeightRule::Geometric { ratio }) => {
                format!("weighted-shift:geometric({ratio})")
            }
            OperatorModel::Diagonal(_) => "diagonal".into(),
        }
    }

    /// S-spectral radius of the model operator.
    pub fn spectral_radius(&self) -> f64 {
        match self {
            OperatorModel::UnilateralShift | OperatorModel::BilateralShift => 1.0,
            OperatorModel::WeightedShift(_) => 0.0,
            OperatorModel::Diagonal(entries) => {
                entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Lower index i(A) of the model operator.
    pub fn lower_index(&self) -> f64 {
        match self {
            OperatorModel::UnilateralShift | OperatorModel::BilateralShift => 1.0,
            OperatorModel::WeightedShift(_) => 0.0,
            OperatorModel::Diagonal(entries) => {
                entries.iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn is_invertible(&self) -> bool {
        match self {
            OperatorModel::UnilateralShift | OperatorModel::WeightedShift(_) => false,
            OperatorModel::BilateralShift => true,
            OperatorModel::Diagonal(entries) => entries.iter().all(|e| !e.is_zero()),
        }
    }

    /// The N×N section in the canonical basis.
    pub fn truncate(&self, n: usize) -> QMatrix {
        assert!(n >= 1, "section size must be positive");
        let mut m = QMatrix::zeros(n);
        match self {
            OperatorModel::UnilateralShift => {
                for k in 0..n - 1 {
                    m[(k + 1, k)] = ONE;
                }
            }
            OperatorModel::BilateralShift => {
                for k in 0..n {
                    m[((k + 1) % n, k)] = ONE;
                }
            }
            OperatorModel::WeightedShift(rule) => {
                for k in 0..n - 1 {
                    m[(k + 1, k)] = Quaternion::real(rule.weight(k));
                }
            }
            OperatorModel::Diagonal(entries) => {
                for k in 0..n {
                    m[(k, k)] = entries[k % entries.len()];
                }
            }
        }
        m
    }
}

/// Evaluates the closed-form membership rule. `None` means the source
/// material pins down no answer for that variant and kind (the Kato
/// spectrum is only specified for the unilateral shift).
pub fn model_membership(m: &OperatorModel, q: &Quaternion, kind: SpectrumKind) -> Option<bool> {
    let r = q.norm();
    match m {
        OperatorModel::UnilateralShift => Some(match kind {
            SpectrumKind::SSpectrum | SpectrumKind::Surjectivity => r <= 1.0 + MODEL_TOL,
            SpectrumKind::ApproximatePoint => (r - 1.0).abs() <= MODEL_TOL,
            SpectrumKind::Compression => r <= 1.0 + MODEL_TOL,
        }),
        OperatorModel::BilateralShift => Some((r - 1.0).abs() <= MODEL_TOL),
        OperatorModel::WeightedShift(_) => Some(r <= MODEL_TOL),
        OperatorModel::Diagonal(entries) => {
            let s = q.sphere();
            Some(entries.iter().any(|e| e.sphere().distance(&s) <= MODEL_TOL))
        }
    }
}

/// Kato-spectrum membership where the model pins it down; `None` reports
/// "unspecified".
pub fn model_kato_membership(m: &OperatorModel, q: &Quaternion) -> Option<bool> {
    match m {
        OperatorModel::UnilateralShift => Some((q.norm() - 1.0).abs() <= MODEL_TOL),
        _ => None,
    }
}

/// Per-probe line of a truncation report.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub q: [f64; 4],
    /// κ(R_q(A_N)) for the N×N section.
    pub section_kappa: f64,
    /// Closed-form model membership in σ_S.
    pub model_on_spectrum: bool,
    /// Section-level on-spectrum verdict at the standard margin.
    pub section_on_spectrum: bool,
    pub agree: bool,
}

/// Diagnostics comparing a finite section against the closed-form model.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationReport {
    pub model: String,
    pub n: usize,
    pub section_norm: f64,
    pub section_kappa: f64,
    pub section_spectral_radius: f64,
    pub probes: Vec<ProbeReport>,
    pub disclaimer: &'static str,
}

pub fn truncation_report(
    m: &OperatorModel,
    n: usize,
    probes: &[Quaternion],
) -> Result<TruncationReport, Error> {
    let section = m.truncate(n);
    let (norm, kappa, _) = section.gauges();
    // Power-sequence estimate ‖A_N^N‖^{1/N}: exact for nilpotent sections
    // (where eigenvalue iterations suffer severe forward error) and for
    // the unitary and diagonal sections used here.
    let pn = section.pow(n as u32).op_norm();
    let r_s = if pn == 0.0 { 0.0 } else { pn.powf(1.0 / n as f64) };
    let probe_reports = probes
        .iter()
        .map(|q| {
            let r = spectrum::pseudo_resolvent(&section, q);
            let (_, rk, _) = r.gauges();
            let model_on = model_membership(m, q, SpectrumKind::SSpectrum).unwrap_or(false);
            let section_on =
                rk < spectrum::ON_MARGIN * r.op_norm().max(1.0);
            ProbeReport {
                q: [q.w, q.x, q.y, q.z],
                section_kappa: rk,
                model_on_spectrum: model_on,
                section_on_spectrum: section_on,
                agree: model_on == section_on,
            }
        })
        .collect();
    Ok(TruncationReport {
        model: m.name(),
        n,
        section_norm: norm,
        section_kappa: kappa,
        section_spectral_radius: r_s,
        probes: probe_reports,
        disclaimer: POLLUTION_DISCLAIMER,
    })
}
