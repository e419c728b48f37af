//! Seeded random-state generation and the desk-scale statistical studies:
//! criteria cross-checks on random corpora and the (y2, y3) family grid
//! scan.
//!
//! Sampling measure (the studies are statements about this measure, which
//! is documented rather than canonical): populations are uniform on the
//! 2N-simplex via sorted-uniform spacings (scaled by a uniform trace in
//! (0, 2) when unnormalized), each coherence magnitude is conditionally
//! uniform in [0, sqrt(a_n b_{n-1})] with an independent uniform phase.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::{self, Verdict};
use crate::error::{Error, Result};
use crate::normal_form::{tau_n4, tau_state};
use crate::range::{certify_n4, RangeVerdict};
use crate::scalar::{cis, real, Scalar};
use crate::state::SymmetricState;

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub normalized: bool,
    pub ppt_only: bool,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParam("need N >= 2".into()));
        }
        if self.count == 0 {
            return Err(Error::InvalidParam("need count >= 1".into()));
        }
        Ok(())
    }
}

/// Deterministic stream of valid symmetric states under the documented
/// measure; `ppt_only` filters by the exact ladder PPT inequalities.
pub struct StateSampler<T: Scalar> {
    n: usize,
    normalized: bool,
    ppt_only: bool,
    rng: ChaCha8Rng,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> StateSampler<T> {
    pub fn new(cfg: &SampleConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            n: cfg.n,
            normalized: cfg.normalized,
            ppt_only: cfg.ppt_only,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            _marker: std::marker::PhantomData,
        })
    }

    fn draw(&mut self) -> SymmetricState<T> {
        let n = self.n;
        // sorted-uniform spacings give a uniform point on the 2N-simplex
        let mut cuts: Vec<f64> = (0..2 * n - 1).map(|_| self.rng.random::<f64>()).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut pops = Vec::with_capacity(2 * n);
        let mut prev = 0.0;
        for &c in &cuts {
            pops.push(c - prev);
            prev = c;
        }
        pops.push(1.0 - prev);
        let scale = if self.normalized {
            1.0
        } else {
            2.0 * self.rng.random::<f64>()
        };
        let a: Vec<T> = pops[..n].iter().map(|&p| real(p * scale)).collect();
        let b: Vec<T> = pops[n..].iter().map(|&p| real(p * scale)).collect();
        let c = (1..n)
            .map(|k| {
                let cap = (a[k] * b[k - 1]).sqrt();
                let mag = cap * real(self.rng.random::<f64>());
                let phase = real::<T>(self.rng.random::<f64>() * 2.0 * std::f64::consts::PI);
                cis(phase) * mag
            })
            .collect();
        SymmetricState { n, a, b, c }
    }

    fn is_ppt(s: &SymmetricState<T>) -> bool {
        (1..s.n).all(|k| s.coherence(k).norm_sqr() <= s.a[k - 1] * s.b[k])
    }
}

impl<T: Scalar> Iterator for StateSampler<T> {
    type Item = SymmetricState<T>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let s = self.draw();
            if !self.ppt_only || Self::is_ppt(&s) {
                return Some(s);
            }
        }
    }
}

pub fn sample_states<T: Scalar>(
    cfg: &SampleConfig,
) -> Result<impl Iterator<Item = SymmetricState<T>>> {
    let count = cfg.count;
    Ok(StateSampler::new(cfg)?.take(count))
}

/// A sample on which one of the studied inequalities failed; the theory
/// predicts this list stays empty.
#[derive(Debug, Clone)]
pub struct Counterexample<T: Scalar> {
    pub index: usize,
    pub state: SymmetricState<T>,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct StudyReport<T: Scalar> {
    pub seed: u64,
    pub total: usize,
    pub npt_count: usize,
    pub ppt_undetected_count: usize,
    pub separable_proven_count: usize,
    /// Largest CCNR norm seen among PPT samples (must stay <= 1).
    pub max_ccnr_ppt: T,
    /// Largest lhs^2 - rhs margin of the CM inequality (<= 0 when never
    /// violated).
    pub max_cm_margin: T,
    pub counterexamples: Vec<Counterexample<T>>,
}

/// Desk-scale reproduction of the random-state studies: on every sample,
/// negativity must dominate max(ccnr_norm - 1, 0), and no PPT sample may
/// violate CCNR or the CM inequality.
pub fn monte_carlo_study<T: Scalar>(cfg: &SampleConfig) -> Result<StudyReport<T>> {
    let mut report = StudyReport {
        seed: cfg.seed,
        total: 0,
        npt_count: 0,
        ppt_undetected_count: 0,
        separable_proven_count: 0,
        max_ccnr_ppt: T::zero(),
        max_cm_margin: T::neg_infinity(),
        counterexamples: Vec::new(),
    };
    let tol = real::<T>(1e-10);
    for (index, state) in sample_states::<T>(cfg)?.enumerate() {
        let r = criteria::report(&state)?;
        report.total += 1;
        match r.verdict {
            Verdict::NptEntangled => report.npt_count += 1,
            Verdict::PptUndetected => report.ppt_undetected_count += 1,
            Verdict::SeparableProven => report.separable_proven_count += 1,
        }
        let ppt = r.negativity <= tol;
        // cm_lhs is the squared realignment norm of the covariance term
        let margin = r.cm_lhs - r.cm_rhs;
        report.max_cm_margin = report.max_cm_margin.max(margin);
        if ppt {
            report.max_ccnr_ppt = report.max_ccnr_ppt.max(r.ccnr_norm);
            if r.ccnr_norm > T::one() + tol {
                report.counterexamples.push(Counterexample {
                    index,
                    state: state.clone(),
                    description: format!("PPT sample with CCNR norm {:?}", r.ccnr_norm),
                });
            }
            if r.cm_violated {
                report.counterexamples.push(Counterexample {
                    index,
                    state: state.clone(),
                    description: "PPT sample violating the CM inequality".into(),
                });
            }
        }
        if r.negativity + tol < (r.ccnr_norm - T::one()).max(T::zero()) {
            report.counterexamples.push(Counterexample {
                index,
                state,
                description: format!(
                    "negativity {:?} below CCNR excess {:?}",
                    r.negativity,
                    r.ccnr_norm - T::one()
                ),
            });
        }
    }
    Ok(report)
}

/// One row of the family grid scan, with the trace-normalized negativity.
#[derive(Debug, Clone)]
pub struct GridRow<T: Scalar> {
    pub y2: T,
    pub y3: T,
    pub negativity: T,
    pub ccnr_norm: T,
    /// rhs minus the (already squared) lhs of the CM inequality;
    /// negative means violated.
    pub cm_gap: T,
    pub verdict: RangeVerdict,
}

#[derive(Debug, Clone)]
pub struct GridScan<T: Scalar> {
    pub rows: Vec<GridRow<T>>,
    pub ppt_failures: usize,
    pub cm_violations: usize,
    /// Off-diagonal points not certified as edge states.
    pub uncertified: usize,
}

/// Scan the two-parameter family over [step, y2_max] x [step, y3_max] at
/// the given resolution, evaluating every criterion plus the analytic
/// certificate at each point.
pub fn grid_scan_family<T: Scalar>(
    y2_max: T,
    y3_max: T,
    step: T,
) -> Result<GridScan<T>> {
    if step <= T::zero() || y2_max < step || y3_max < step {
        return Err(Error::InvalidParam("need 0 < step <= y2_max, y3_max".into()));
    }
    let count = |max: T| (max / step).round().to_f64().unwrap_or(0.0) as usize;
    let mut scan = GridScan {
        rows: Vec::new(),
        ppt_failures: 0,
        cm_violations: 0,
        uncertified: 0,
    };
    for i in 1..=count(y2_max) {
        let y2 = step * real::<T>(i as f64);
        for j in 1..=count(y3_max) {
            let y3 = step * real::<T>(j as f64);
            // keep tau unnormalized: its saturated coherence bound holds
            // exactly, and trace division can flip it by an ulp; the
            // criteria normalize internally
            let state = tau_state(&tau_n4(y2, y2, y3));
            let r = criteria::report(&state)?;
            let cert = certify_n4(y2, y3)?;
            if r.negativity > real(1e-12) {
                scan.ppt_failures += 1;
            }
            if r.cm_violated {
                scan.cm_violations += 1;
            }
            if y2 < y3 && cert.verdict != RangeVerdict::BoundEntangledEdge {
                scan.uncertified += 1;
            }
            scan.rows.push(GridRow {
                y2,
                y3,
                negativity: r.negativity / state.trace(),
                ccnr_norm: r.ccnr_norm,
                cm_gap: r.cm_rhs - r.cm_lhs,
                verdict: cert.verdict,
            });
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::validate;

    fn cfg(n: usize, count: usize, seed: u64, ppt_only: bool) -> SampleConfig {
        SampleConfig {
            n,
            count,
            seed,
            normalized: true,
            ppt_only,
        }
    }

    #[test]
    fn samples_are_valid_and_deterministic() {
        let a: Vec<SymmetricState<f64>> =
            sample_states(&cfg(4, 50, 7, false)).unwrap().collect();
        let b: Vec<SymmetricState<f64>> =
            sample_states(&cfg(4, 50, 7, false)).unwrap().collect();
        assert_eq!(a, b);
        for s in &a {
            let report = validate(s).unwrap();
            assert!(report.ok);
            assert!(s.is_normalized(1e-12));
        }
        let c: Vec<SymmetricState<f64>> =
            sample_states(&cfg(4, 50, 8, false)).unwrap().collect();
        assert_ne!(a, c);
    }

    #[test]
    fn unnormalized_samples_vary_in_trace() {
        let cfg = SampleConfig {
            n: 3,
            count: 40,
            seed: 5,
            normalized: false,
            ppt_only: false,
        };
        let traces: Vec<f64> = sample_states::<f64>(&cfg)
            .unwrap()
            .map(|s| s.trace())
            .collect();
        assert!(traces.iter().any(|t| (t - 1.0).abs() > 0.1));
        assert!(traces.iter().all(|&t| t > 0.0 && t < 2.0));
    }

    #[test]
    fn ppt_filter_means_zero_negativity() {
        for s in sample_states::<f64>(&cfg(4, 200, 11, true)).unwrap() {
            assert_eq!(criteria::negativity(&s).unwrap(), 0.0);
        }
    }

    #[test]
    fn study_finds_no_counterexamples() {
        let report = monte_carlo_study::<f64>(&cfg(4, 2000, 13, false)).unwrap();
        assert_eq!(report.total, 2000);
        assert_eq!(
            report.npt_count + report.ppt_undetected_count + report.separable_proven_count,
            report.total
        );
        assert!(report.counterexamples.is_empty());
        assert!(report.max_ccnr_ppt <= 1.0 + 1e-10);
        // NPT samples may violate the CM inequality (it detects them);
        // only PPT violations are counterexamples, and there are none
        assert!(report.max_cm_margin.is_finite());
        // reproducible bit-exactly
        let again = monte_carlo_study::<f64>(&cfg(4, 2000, 13, false)).unwrap();
        assert_eq!(report.max_ccnr_ppt, again.max_ccnr_ppt);
        assert_eq!(report.max_cm_margin, again.max_cm_margin);
    }

    #[test]
    fn grid_scan_small() {
        let scan = grid_scan_family::<f64>(1.0, 1.0, 0.25).unwrap();
        assert_eq!(scan.rows.len(), 16);
        assert_eq!(scan.ppt_failures, 0);
        assert_eq!(scan.cm_violations, 0);
        assert_eq!(scan.uncertified, 0);
        let diag: Vec<_> = scan
            .rows
            .iter()
            .filter(|r| r.y2 == r.y3)
            .collect();
        assert!(diag
            .iter()
            .all(|r| r.verdict == RangeVerdict::Inconclusive));
    }
}
