//! Reduction pipeline: splitting at zero qudit populations, local
//! filtering to the (x, y) normal form, PPT conditions in that form, and
//! the split into a diagonal separable part plus the coherence carrier tau.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c_re, real, Scalar};
use crate::state::{validate, SymmetricState};

/// A contiguous sub-ladder with all b_n > 0, filtered to normal form:
/// `x[n]^2 = a_n / b_n`, `y[n-1] = c_n / sqrt(b_{n-1} b_n)`.
#[derive(Debug, Clone)]
pub struct Segment<T: Scalar> {
    /// Index in the original ladder where this segment starts.
    pub start: usize,
    pub x: Vec<T>,
    /// y_i for i = 1..width-1 (y[i-1] holds y_i).
    pub y: Vec<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn width(&self) -> usize {
        self.x.len()
    }

    /// Boundary convention y_0 = y_1, y_width = y_{width-1}: the diagonal
    /// pattern max(y_n, y_{n+1}) evaluated at ladder position n.
    pub fn y_max_at(&self, n: usize) -> T {
        if self.y.is_empty() {
            return T::zero();
        }
        let lo = if n == 0 { self.y[0] } else { self.y[n - 1] };
        let hi = if n == self.y.len() { self.y[n - 1] } else { self.y[n] };
        lo.max(hi)
    }
}

/// An isolated `a_m |0,m><0,m|` term left over by the splitting.
#[derive(Debug, Clone)]
pub struct Leftover<T: Scalar> {
    pub index: usize,
    pub weight: T,
}

#[derive(Debug, Clone)]
pub struct NormalForm<T: Scalar> {
    pub segments: Vec<Segment<T>>,
    pub leftovers: Vec<Leftover<T>>,
}

/// Split the ladder wherever b_m = 0 (positivity then forces c_m =
/// c_{m+1} = 0) into independent symmetric sub-states plus separable
/// `a_m |0,m>` leftovers. Entanglement of the whole is the union over the
/// parts.
pub fn split_zero_b<T: Scalar>(
    s: &SymmetricState<T>,
) -> Result<(Vec<(usize, SymmetricState<T>)>, Vec<Leftover<T>>)> {
    let report = validate(s)?;
    if !report.ok {
        return Err(Error::InvalidState("cannot split an invalid state".into()));
    }
    let mut segments = Vec::new();
    let mut leftovers = Vec::new();
    let mut start = 0;
    for m in 0..=s.n {
        let boundary = m == s.n || s.b[m] == T::zero();
        if !boundary {
            continue;
        }
        if m > start {
            let a = s.a[start..m].to_vec();
            let b = s.b[start..m].to_vec();
            let c = (start + 1..m).map(|k| s.coherence(k)).collect();
            segments.push((start, SymmetricState::new(a, b, c)?));
        }
        if m < s.n {
            if s.a[m] > T::zero() {
                leftovers.push(Leftover {
                    index: m,
                    weight: s.a[m],
                });
            }
            start = m + 1;
        }
    }
    Ok((segments, leftovers))
}

/// Local filter `F = I kron sum b_n^{-1/2} |n><n|` applied to one segment
/// with all b_n > 0; preserves the separable/entangled divide.
pub fn filter<T: Scalar>(start: usize, s: &SymmetricState<T>) -> Result<Segment<T>> {
    if s.b.iter().any(|&b| b <= T::zero()) {
        return Err(Error::InvalidParam(
            "filter requires all b_n > 0; split the state first".into(),
        ));
    }
    let x = s
        .a
        .iter()
        .zip(&s.b)
        .map(|(&a, &b)| (a / b).sqrt())
        .collect();
    let y = (1..s.n)
        .map(|n| s.coherence(n).norm() / (s.b[n - 1] * s.b[n]).sqrt())
        .collect();
    Ok(Segment { start, x, y })
}

/// Full pipeline: split at zero populations, then filter every segment.
pub fn normal_form<T: Scalar>(s: &SymmetricState<T>) -> Result<NormalForm<T>> {
    let (parts, leftovers) = split_zero_b(s)?;
    let segments = parts
        .into_iter()
        .map(|(start, seg)| filter(start, &seg))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalForm {
        segments,
        leftovers,
    })
}

#[derive(Debug, Clone)]
pub struct PptCheck<T: Scalar> {
    pub ppt: bool,
    /// min(x_i, x_{i-1}) - y_i per segment, per interior index.
    pub margins: Vec<Vec<T>>,
}

/// PPT in normal form: `y_i <= min(x_i, x_{i-1})` for every coherence.
pub fn ppt_conditions<T: Scalar>(nf: &NormalForm<T>) -> PptCheck<T> {
    let mut ppt = true;
    let mut margins = Vec::new();
    for seg in &nf.segments {
        let mut seg_margins = Vec::new();
        for i in 1..seg.width() {
            let m = seg.x[i].min(seg.x[i - 1]) - seg.y[i - 1];
            if m < T::zero() {
                ppt = false;
            }
            seg_margins.push(m);
        }
        margins.push(seg_margins);
    }
    PptCheck { ppt, margins }
}

/// The coherence carrier of a PPT segment: diagonal max(y_n^2, y_{n+1}^2)
/// on the |0> block, ones on the |1> block, coherences y_n.
#[derive(Debug, Clone)]
pub struct TauState<T: Scalar> {
    pub y: Vec<T>,
    /// True when y_1 <= y_2 <= ... (the branch the edge-state proof covers).
    pub monotone: bool,
}

impl<T: Scalar> TauState<T> {
    pub fn new(y: Vec<T>) -> Self {
        let monotone = y.windows(2).all(|w| w[0] <= w[1]);
        Self { y, monotone }
    }

    pub fn width(&self) -> usize {
        self.y.len() + 1
    }

    fn y_max_at(&self, n: usize) -> T {
        if self.y.is_empty() {
            return T::zero();
        }
        let lo = if n == 0 { self.y[0] } else { self.y[n - 1] };
        let hi = if n == self.y.len() { self.y[n - 1] } else { self.y[n] };
        lo.max(hi)
    }
}

/// Split a PPT normal-form segment as sigma = sigma_s + tau with sigma_s
/// diagonal nonnegative on the |0> block. Refuses non-PPT inputs.
pub fn decompose<T: Scalar>(seg: &Segment<T>) -> Result<(Vec<T>, TauState<T>)> {
    let w = seg.width();
    let mut sigma_s = Vec::with_capacity(w);
    for n in 0..w {
        let m = seg.y_max_at(n);
        let entry = seg.x[n] * seg.x[n] - m * m;
        if entry < -real::<T>(1e-12) {
            return Err(Error::NotPpt(format!(
                "sigma_s would be negative at n = {n}: {entry:?}"
            )));
        }
        sigma_s.push(entry.max(T::zero()));
    }
    Ok((sigma_s, TauState::new(seg.y.clone())))
}

/// Dense materialization of tau in the 2 x width space.
pub fn tau_dense<T: Scalar>(t: &TauState<T>) -> DenseMatrix<T> {
    let w = t.width();
    let mut d = DenseMatrix::zeros(2 * w, 2 * w);
    for n in 0..w {
        let m = t.y_max_at(n);
        d[(n, n)] = c_re(m * m);
        d[(w + n, w + n)] = c_re(T::one());
    }
    for n in 1..w {
        d[(n, w + n - 1)] = c_re(t.y[n - 1]);
        d[(w + n - 1, n)] = c_re(t.y[n - 1]);
    }
    d
}

/// The N = 4 family of Eq-pattern tau with y = (y1, y2, y3); with y1 = y2
/// this is the saturated bound-entangled family.
pub fn tau_n4<T: Scalar>(y1: T, y2: T, y3: T) -> TauState<T> {
    TauState::new(vec![y1, y2, y3])
}

/// tau as a symmetric state (for feeding criteria / sampling pipelines).
pub fn tau_state<T: Scalar>(t: &TauState<T>) -> SymmetricState<T> {
    let w = t.width();
    let a = (0..w)
        .map(|n| {
            let m = t.y_max_at(n);
            m * m
        })
        .collect();
    let b = vec![T::one(); w];
    let c = t.y.iter().map(|&y| c_re(y)).collect();
    SymmetricState { n: w, a, b, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::negativity;
    use crate::numerics;
    use crate::state::{to_dense, SymmetricState};
    use num_complex::Complex64;

    fn state(a: &[f64], b: &[f64], c: &[f64]) -> SymmetricState<f64> {
        SymmetricState::new(
            a.to_vec(),
            b.to_vec(),
            c.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn split_no_zeros_single_segment() {
        let s = state(&[0.2, 0.1], &[0.3, 0.4], &[0.1]);
        let (segs, leftovers) = split_zero_b(&s).unwrap();
        assert_eq!(segs.len(), 1);
        assert!(leftovers.is_empty());
        assert_eq!(segs[0].1, s);
    }

    #[test]
    fn split_at_interior_zero() {
        // N = 4, b_1 = 0 forces c_1 = c_2 = 0
        let s = state(
            &[0.1, 0.2, 0.1, 0.1],
            &[0.1, 0.0, 0.2, 0.2],
            &[0.0, 0.0, 0.1],
        );
        let (segs, leftovers) = split_zero_b(&s).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].0, 0);
        assert_eq!(segs[0].1.n, 1);
        assert_eq!(segs[1].0, 2);
        assert_eq!(segs[1].1.n, 2);
        assert_eq!(segs[1].1.coherence(1), Complex64::new(0.1, 0.0));
        assert_eq!(leftovers.len(), 1);
        assert_eq!(leftovers[0].index, 1);
        assert_eq!(leftovers[0].weight, 0.2);
    }

    #[test]
    fn split_rejects_invalid() {
        // b_1 = 0 but c_1 != 0 violates positivity upstream
        let s = state(&[0.2, 0.2], &[0.0, 0.3], &[0.1]);
        assert!(split_zero_b(&s).is_err());
    }

    #[test]
    fn filter_values() {
        let s = state(&[0.1, 0.2], &[0.4, 0.1], &[0.15]);
        let seg = filter(0, &s).unwrap();
        assert!((seg.x[0] - 0.5).abs() < 1e-15);
        assert!((seg.x[1] - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((seg.y[0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn filter_identity_when_b_is_one() {
        let s = state(&[0.04, 0.09], &[1.0, 1.0], &[0.05]);
        let seg = filter(0, &s).unwrap();
        assert!((seg.x[0] - 0.2).abs() < 1e-15);
        assert!((seg.x[1] - 0.3).abs() < 1e-15);
        assert!((seg.y[0] - 0.05).abs() < 1e-15);
    }

    #[test]
    fn ppt_conditions_examples() {
        let nf = NormalForm {
            segments: vec![Segment {
                start: 0,
                x: vec![1.0, 1.0, 1.0, 1.0],
                y: vec![0.5, 0.5, 0.5],
            }],
            leftovers: vec![],
        };
        assert!(ppt_conditions(&nf).ppt);

        let nf = NormalForm {
            segments: vec![Segment {
                start: 0,
                x: vec![0.4, 1.0, 1.0, 1.0],
                y: vec![0.5, 0.5, 0.5],
            }],
            leftovers: vec![],
        };
        let check = ppt_conditions(&nf);
        assert!(!check.ppt);
        assert!(check.margins[0][0] < 0.0);
    }

    #[test]
    fn decompose_example() {
        let seg = Segment::<f64> {
            start: 0,
            x: vec![1.0, 1.0, 1.0, 1.0],
            y: vec![0.5, 0.5, 0.9],
        };
        let (sigma_s, tau) = decompose(&seg).unwrap();
        let want = [0.75, 0.75, 0.19, 0.19];
        for (got, want) in sigma_s.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(tau.monotone);
        // sigma = sigma_s + tau exactly, in dense form
        let sigma = {
            let mut d = tau_dense(&tau);
            for n in 0..4 {
                d[(n, n)] += Complex64::new(sigma_s[n], 0.0);
            }
            d
        };
        for n in 0..4 {
            assert!((sigma[(n, n)].re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn decompose_rejects_non_ppt() {
        let seg = Segment::<f64> {
            start: 0,
            x: vec![0.4, 1.0, 1.0, 1.0],
            y: vec![0.5, 0.5, 0.5],
        };
        assert!(matches!(decompose(&seg), Err(Error::NotPpt(_))));
    }

    #[test]
    fn tau_is_ppt_saturated() {
        let tau = tau_n4(0.5, 0.5, 0.9);
        let s = tau_state(&tau);
        assert_eq!(negativity(&s).unwrap(), 0.0);
        // PT eigenvalues nonnegative, smallest exactly at the boundary
        let pt = crate::state::partial_transpose(&tau_dense(&tau)).unwrap();
        let spec = numerics::eig_hermitian(&pt).unwrap();
        assert!(spec.min() > -1e-12);
    }

    #[test]
    fn tau_ranks() {
        // distinct ascending: r(tau) = 7, r(tau^G) = 5
        let tau = tau_n4(0.3, 0.5, 0.9);
        let d = tau_dense(&tau);
        let pt = crate::state::partial_transpose(&d).unwrap();
        assert_eq!(numerics::rank(&d, 1e-9), 7);
        assert_eq!(numerics::rank(&pt, 1e-9), 5);
        // saturated: r(tau) = 6
        let tau = tau_n4(0.5, 0.5, 0.9);
        let d = tau_dense(&tau);
        assert_eq!(numerics::rank(&d, 1e-9), 6);
        assert_eq!(numerics::rank(&crate::state::partial_transpose(&d).unwrap(), 1e-9), 5);
        // all equal: PT kernel still dimension 3
        let tau = tau_n4(0.7, 0.7, 0.7);
        let pt = crate::state::partial_transpose(&tau_dense(&tau)).unwrap();
        assert_eq!(numerics::kernel_basis(&pt, 1e-9).dim(), 3);
    }

    #[test]
    fn filter_preserves_entanglement_sign() {
        // NPT state stays NPT after filtering
        let s = state(&[0.05, 0.45], &[0.45, 0.05], &[0.14]);
        assert!(negativity(&s).unwrap() > 0.0);
        let seg = filter(0, &s).unwrap();
        let nf = NormalForm {
            segments: vec![seg.clone()],
            leftovers: vec![],
        };
        assert!(!ppt_conditions(&nf).ppt);
        // and the filtered dense state is NPT too
        let sigma = SymmetricState {
            n: 2,
            a: seg.x.iter().map(|x| x * x).collect(),
            b: vec![1.0, 1.0],
            c: seg.y.iter().map(|&y| Complex64::new(y, 0.0)).collect(),
        };
        assert!(negativity(&sigma).unwrap() > 0.0);
    }

    #[test]
    fn filter_reversible() {
        let s = state(&[0.1, 0.2, 0.15], &[0.4, 0.1, 0.05], &[0.15, 0.05]);
        let seg = filter(0, &s).unwrap();
        // invert: a_n = x_n^2 b_n, c_n = y_n sqrt(b_{n-1} b_n)
        let a: Vec<f64> = seg.x.iter().zip(&s.b).map(|(x, b)| x * x * b).collect();
        let c: Vec<f64> = seg
            .y
            .iter()
            .enumerate()
            .map(|(i, y)| y * (s.b[i] * s.b[i + 1]).sqrt())
            .collect();
        for (got, want) in a.iter().zip(&s.a) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in c.iter().zip(&s.c) {
            assert!((got - want.re).abs() < 1e-12);
        }
        let d = to_dense(&s);
        assert!(d.hermiticity_defect() == 0.0);
    }
}
