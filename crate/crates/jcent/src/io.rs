//! JSON serialization. All wire formats are f64; the generic core stays
//! serde-free and conversion happens at this boundary.
//!
//! State schema: `{"N": int, "a": [..], "b": [..], "c": [{"re", "im"}..]}`
//! with `c[i]` holding the coherence c_{i+1}. Readers reject non-finite
//! entries and negative populations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::CriteriaReport;
use crate::dynamics::GenerationCertificate;
use crate::error::{Error, Result};
use crate::hull::HullDecomposition;
use crate::normal_form::NormalForm;
use crate::range::{Certificate, ProductVector, RangeVerdict};
use crate::sample::StudyReport;
use crate::state::{SymmetricState, ValidityReport, ViolationKind};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<ComplexJson>,
}

impl From<&SymmetricState<f64>> for StateJson {
    fn from(s: &SymmetricState<f64>) -> Self {
        Self {
            n: s.n,
            a: s.a.clone(),
            b: s.b.clone(),
            c: s.c.iter().map(|&z| z.into()).collect(),
        }
    }
}

impl TryFrom<StateJson> for SymmetricState<f64> {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        if j.a.len() != j.n || j.b.len() != j.n || j.c.len() + 1 != j.n.max(1) {
            return Err(Error::Structure(format!(
                "expected |a| = |b| = N = {} and |c| = N-1, got {}/{}/{}",
                j.n,
                j.a.len(),
                j.b.len(),
                j.c.len()
            )));
        }
        if j
            .a
            .iter()
            .chain(&j.b)
            .chain(j.c.iter().flat_map(|z| [&z.re, &z.im]))
            .any(|v| !v.is_finite())
        {
            return Err(Error::Structure("non-finite entry in state JSON".into()));
        }
        if j.a.iter().chain(&j.b).any(|&v| v < 0.0) {
            return Err(Error::Structure("negative population in state JSON".into()));
        }
        SymmetricState::new(j.a, j.b, j.c.into_iter().map(Into::into).collect())
    }
}

pub fn read_state(json: &str) -> Result<SymmetricState<f64>> {
    let parsed: StateJson = serde_json::from_str(json)?;
    parsed.try_into()
}

pub fn write_state(s: &SymmetricState<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateJson::from(s))?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidityJson {
    pub ok: bool,
    pub trace: f64,
    pub normalized: bool,
    pub margins: Vec<f64>,
    pub violations: Vec<ViolationJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationJson {
    pub kind: String,
    pub index: usize,
    pub margin: f64,
}

impl From<&ValidityReport<f64>> for ValidityJson {
    fn from(r: &ValidityReport<f64>) -> Self {
        Self {
            ok: r.ok,
            trace: r.trace,
            normalized: r.normalized,
            margins: r.margins.clone(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson {
                    kind: match v.kind {
                        ViolationKind::NegativePopulationA => "negative_population_a",
                        ViolationKind::NegativePopulationB => "negative_population_b",
                        ViolationKind::Coherence => "coherence_bound",
                        ViolationKind::NonFiniteEntry => "non_finite_entry",
                    }
                    .into(),
                    index: v.index,
                    margin: v.margin,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub negativity: f64,
    pub gerjuoy: f64,
    pub ccnr_norm: f64,
    pub ccnr_singular_values: [f64; 4],
    pub cm_lhs: f64,
    pub cm_rhs: f64,
    pub cm_violated: bool,
    pub verdict: crate::criteria::Verdict,
}

impl From<&CriteriaReport<f64>> for ReportJson {
    fn from(r: &CriteriaReport<f64>) -> Self {
        Self {
            negativity: r.negativity,
            gerjuoy: r.gerjuoy,
            ccnr_norm: r.ccnr_norm,
            ccnr_singular_values: r.ccnr_singular_values,
            cm_lhs: r.cm_lhs,
            cm_rhs: r.cm_rhs,
            cm_violated: r.cm_violated,
            verdict: r.verdict,
        }
    }
}

pub fn verdict_str(v: RangeVerdict) -> &'static str {
    match v {
        RangeVerdict::BoundEntangledEdge => "BOUND_ENTANGLED_EDGE",
        RangeVerdict::Npt => "NPT",
        RangeVerdict::SeparableConstructed => "SEPARABLE_CONSTRUCTED",
        RangeVerdict::Inconclusive => "INCONCLUSIVE",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductVectorJson {
    pub e: [ComplexJson; 2],
    pub f: Vec<ComplexJson>,
    pub theta: Option<f64>,
}

impl From<&ProductVector<f64>> for ProductVectorJson {
    fn from(p: &ProductVector<f64>) -> Self {
        Self {
            e: [p.e[0].into(), p.e[1].into()],
            f: p.f.iter().map(|&z| z.into()).collect(),
            theta: p.theta,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub verdict: String,
    pub ppt: bool,
    pub ranks: [usize; 2],
    pub obstruction: Option<f64>,
    pub witnesses: Vec<Vec<ComplexJson>>,
    pub found: Vec<ProductVectorJson>,
}

impl From<&Certificate<f64>> for CertificateJson {
    fn from(c: &Certificate<f64>) -> Self {
        Self {
            verdict: verdict_str(c.verdict).into(),
            ppt: c.ppt,
            ranks: [c.ranks.0, c.ranks.1],
            obstruction: c.obstruction,
            witnesses: c
                .witnesses
                .iter()
                .map(|w| w.iter().map(|&z| z.into()).collect())
                .collect(),
            found: c.found.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormJson {
    pub segments: Vec<SegmentJson>,
    pub leftovers: Vec<LeftoverJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentJson {
    pub start: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeftoverJson {
    pub index: usize,
    pub weight: f64,
}

impl From<&NormalForm<f64>> for NormalFormJson {
    fn from(nf: &NormalForm<f64>) -> Self {
        Self {
            segments: nf
                .segments
                .iter()
                .map(|s| SegmentJson {
                    start: s.start,
                    x: s.x.clone(),
                    y: s.y.clone(),
                })
                .collect(),
            leftovers: nf
                .leftovers
                .iter()
                .map(|l| LeftoverJson {
                    index: l.index,
                    weight: l.weight,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationJson {
    pub t_small: f64,
    pub lambda_prime: f64,
    pub tau1_verdict: String,
    pub tau_bound_entangled: bool,
    pub tau1_ranks: [usize; 2],
    pub kernel_angle: f64,
    pub kernel_angle_pt: f64,
    pub reconstruction_error: f64,
    pub min_zeta_overlap: f64,
    pub ef: ProductVectorJson,
    pub witnesses: Vec<Vec<ComplexJson>>,
}

impl From<&GenerationCertificate<f64>> for GenerationJson {
    fn from(c: &GenerationCertificate<f64>) -> Self {
        Self {
            t_small: c.t_small,
            lambda_prime: c.lambda_prime,
            tau1_verdict: verdict_str(c.tau1_verdict).into(),
            tau_bound_entangled: c.tau_bound_entangled,
            tau1_ranks: [c.tau1_ranks.0, c.tau1_ranks.1],
            kernel_angle: c.kernel_angle,
            kernel_angle_pt: c.kernel_angle_pt,
            reconstruction_error: c.reconstruction_error,
            min_zeta_overlap: c.min_zeta_overlap,
            ef: (&c.ef).into(),
            witnesses: c
                .witnesses
                .iter()
                .map(|w| w.iter().map(|&z| z.into()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyJson {
    pub seed: u64,
    pub total: usize,
    pub npt_count: usize,
    pub ppt_undetected_count: usize,
    pub separable_proven_count: usize,
    pub max_ccnr_ppt: f64,
    pub max_cm_margin: f64,
    pub counterexamples: Vec<CounterexampleJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleJson {
    pub index: usize,
    pub description: String,
    pub state: StateJson,
}

impl From<&StudyReport<f64>> for StudyJson {
    fn from(r: &StudyReport<f64>) -> Self {
        Self {
            seed: r.seed,
            total: r.total,
            npt_count: r.npt_count,
            ppt_undetected_count: r.ppt_undetected_count,
            separable_proven_count: r.separable_proven_count,
            max_ccnr_ppt: r.max_ccnr_ppt,
            max_cm_margin: r.max_cm_margin,
            counterexamples: r
                .counterexamples
                .iter()
                .map(|c| CounterexampleJson {
                    index: c.index,
                    description: c.description.clone(),
                    state: (&c.state).into(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HullJson {
    pub terms: Vec<HullTermJson>,
    pub residual_index: Option<(usize, usize)>,
    pub residual_weight: f64,
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HullTermJson {
    pub weight: f64,
    pub vector: ProductVectorJson,
}

impl From<&HullDecomposition<f64>> for HullJson {
    fn from(h: &HullDecomposition<f64>) -> Self {
        Self {
            terms: h
                .terms
                .iter()
                .map(|t| HullTermJson {
                    weight: t.weight,
                    vector: (&t.vector).into(),
                })
                .collect(),
            residual_index: h.residual_index,
            residual_weight: h.residual_weight,
            reconstruction_error: h.reconstruction_error,
        }
    }
}
