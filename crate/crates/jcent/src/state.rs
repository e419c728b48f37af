//! Number-conserving qubit-qudit states: the (a_n, b_n, c_n) family, its
//! validity conditions, gauge fixing, dense materialization and the
//! excitation-number projector.
//!
//! Basis ordering is fixed globally as qubit-major:
//! |0,0> ... |0,N-1>, |1,0> ... |1,N-1>.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c_re, c_zero, cis, real, Scalar, C};

/// A 2 x N state with all weight on the excitation-number pattern:
/// `a[n] = <0n|rho|0n>`, `b[n] = <1n|rho|1n>`, `c[n-1] = <0n|rho|1,n-1>`.
///
/// States are stored unnormalized; `trace()` reports the actual trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState<T: Scalar> {
    pub n: usize,
    pub a: Vec<T>,
    pub b: Vec<T>,
    /// Coherences, index i holds c_{i+1}; length N-1.
    pub c: Vec<C<T>>,
}

/// Diagonal qudit phases undoing the gauge freedom of the coherences.
#[derive(Debug, Clone)]
pub struct GaugePhases<T: Scalar> {
    pub theta: Vec<T>,
}

/// Reduced states of both parties (all diagonal for this family).
#[derive(Debug, Clone)]
pub struct Marginals<T: Scalar> {
    pub alpha0: T,
    pub alpha1: T,
    pub beta: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    NegativePopulationA,
    NegativePopulationB,
    /// |c_n|^2 > a_n b_{n-1}
    Coherence,
    NonFiniteEntry,
}

#[derive(Debug, Clone)]
pub struct Violation<T: Scalar> {
    pub kind: ViolationKind,
    /// Ladder index n of the offending inequality.
    pub index: usize,
    /// a_n b_{n-1} - |c_n|^2 for coherence violations, the entry itself
    /// for negative populations.
    pub margin: T,
}

#[derive(Debug, Clone)]
pub struct ValidityReport<T: Scalar> {
    pub ok: bool,
    pub violations: Vec<Violation<T>>,
    /// Positivity margins a_n b_{n-1} - |c_n|^2, indexed n = 1..N-1.
    pub margins: Vec<T>,
    pub trace: T,
    pub normalized: bool,
}

impl<T: Scalar> SymmetricState<T> {
    pub fn new(a: Vec<T>, b: Vec<T>, c: Vec<C<T>>) -> Result<Self> {
        let n = a.len();
        if n < 1 {
            return Err(Error::Structure("empty ladder".into()));
        }
        if b.len() != n || c.len() + 1 != n {
            return Err(Error::Structure(format!(
                "length mismatch: a={}, b={}, c={} (want N, N, N-1)",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        Ok(Self { n, a, b, c })
    }

    /// Diagonal state, all coherences zero.
    pub fn diagonal(a: Vec<T>, b: Vec<T>) -> Result<Self> {
        let n = a.len();
        Self::new(a, b, vec![c_zero(); n.saturating_sub(1)])
    }

    /// The maximally entangled pattern (|0,n> + |1,n-1>)/sqrt(2) as a state.
    pub fn bell_pair(n_dim: usize, n: usize) -> Self {
        assert!(n >= 1 && n < n_dim);
        let half = real::<T>(0.5);
        let mut a = vec![T::zero(); n_dim];
        let mut b = vec![T::zero(); n_dim];
        let mut c = vec![c_zero(); n_dim - 1];
        a[n] = half;
        b[n - 1] = half;
        c[n - 1] = c_re(half);
        Self { n: n_dim, a, b, c }
    }

    pub fn trace(&self) -> T {
        self.a.iter().copied().sum::<T>() + self.b.iter().copied().sum::<T>()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.trace() - T::one()).abs() <= tol
    }

    /// Scale so the trace is one.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr <= T::zero() {
            return Err(Error::ZeroTrace);
        }
        let inv = T::one() / tr;
        let mut s = self.clone();
        for x in s.a.iter_mut() {
            *x = *x * inv;
        }
        for x in s.b.iter_mut() {
            *x = *x * inv;
        }
        for x in s.c.iter_mut() {
            *x = *x * c_re(inv);
        }
        Ok(s)
    }

    /// Coherence c_n for n in 1..N-1.
    #[inline]
    pub fn coherence(&self, n: usize) -> C<T> {
        self.c[n - 1]
    }
}

/// Check all positivity inequalities; `ok` iff the state is a valid
/// (unnormalized) density operator of the family.
pub fn validate<T: Scalar>(s: &SymmetricState<T>) -> Result<ValidityReport<T>> {
    if s.a.len() != s.n || s.b.len() != s.n || s.c.len() + 1 != s.n {
        return Err(Error::Structure("field lengths inconsistent with N".into()));
    }
    let mut violations = Vec::new();
    for (i, &x) in s.a.iter().enumerate() {
        if !x.is_finite() {
            violations.push(Violation {
                kind: ViolationKind::NonFiniteEntry,
                index: i,
                margin: x,
            });
        } else if x < T::zero() {
            violations.push(Violation {
                kind: ViolationKind::NegativePopulationA,
                index: i,
                margin: x,
            });
        }
    }
    for (i, &x) in s.b.iter().enumerate() {
        if !x.is_finite() {
            violations.push(Violation {
                kind: ViolationKind::NonFiniteEntry,
                index: i,
                margin: x,
            });
        } else if x < T::zero() {
            violations.push(Violation {
                kind: ViolationKind::NegativePopulationB,
                index: i,
                margin: x,
            });
        }
    }
    let mut margins = Vec::with_capacity(s.n - 1);
    for n in 1..s.n {
        let margin = s.a[n] * s.b[n - 1] - s.coherence(n).norm_sqr();
        margins.push(margin);
        if margin < T::zero() {
            violations.push(Violation {
                kind: ViolationKind::Coherence,
                index: n,
                margin,
            });
        }
    }
    let trace = s.trace();
    Ok(ValidityReport {
        ok: violations.is_empty() && trace > T::zero(),
        violations,
        margins,
        trace,
        normalized: (trace - T::one()).abs() <= real::<T>(1e-12),
    })
}

/// Strip coherence phases with a diagonal local unitary on the qudit.
///
/// Returns the state with `c_n = |c_n|` and the phases `theta_n` of the
/// unitary; `theta_0 = 0` and the increment is zero wherever `c_n = 0`.
pub fn gauge_fix<T: Scalar>(s: &SymmetricState<T>) -> (SymmetricState<T>, GaugePhases<T>) {
    let mut theta = vec![T::zero(); s.n];
    for n in 1..s.n {
        let cn = s.coherence(n);
        let inc = if cn.norm() == T::zero() {
            T::zero()
        } else {
            cn.arg()
        };
        theta[n] = theta[n - 1] + inc;
    }
    let mut out = s.clone();
    for n in 1..s.n {
        out.c[n - 1] = c_re(s.coherence(n).norm());
    }
    (out, GaugePhases { theta })
}

/// Apply the diagonal qudit unitary `exp(i theta_n)|n><n|` to a state,
/// restoring the phases removed by [`gauge_fix`].
pub fn apply_gauge<T: Scalar>(s: &SymmetricState<T>, phases: &GaugePhases<T>) -> SymmetricState<T> {
    let mut out = s.clone();
    for n in 1..s.n {
        // c_n = <0n|rho|1,n-1>: picks up e^{i(theta_n - theta_{n-1})}
        out.c[n - 1] = s.coherence(n) * cis(phases.theta[n] - phases.theta[n - 1]);
    }
    out
}

/// Materialize as a 2N x 2N Hermitian matrix in the global basis order.
pub fn to_dense<T: Scalar>(s: &SymmetricState<T>) -> DenseMatrix<T> {
    let n = s.n;
    let mut d = DenseMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        d[(i, i)] = c_re(s.a[i]);
        d[(n + i, n + i)] = c_re(s.b[i]);
    }
    for i in 1..n {
        let cn = s.coherence(i);
        d[(i, n + i - 1)] = cn;
        d[(n + i - 1, i)] = cn.conj();
    }
    d
}

/// Extract the (a, b, c) parameterization from a dense matrix, rejecting
/// any entry outside the excitation-number pattern larger than `tol`.
pub fn from_dense<T: Scalar>(d: &DenseMatrix<T>, tol: T) -> Result<SymmetricState<T>> {
    if !d.is_square() || d.dim() % 2 != 0 || d.dim() < 2 {
        return Err(Error::Dimension(format!(
            "expected even square dimension, got {}x{}",
            d.rows(),
            d.cols()
        )));
    }
    d.check_hermitian(tol.max(real::<T>(1e-12)))?;
    let n = d.dim() / 2;
    let mut worst = T::zero();
    let mut worst_ij = (0, 0);
    let allowed = |i: usize, j: usize| -> bool {
        if i == j {
            return true;
        }
        let (qi, ni) = (i / n, i % n);
        let (qj, nj) = (j / n, j % n);
        qi + ni == qj + nj
    };
    for i in 0..2 * n {
        for j in 0..2 * n {
            if !allowed(i, j) {
                let m = d[(i, j)].norm();
                if m > worst {
                    worst = m;
                    worst_ij = (i, j);
                }
            }
        }
    }
    if worst > tol {
        return Err(Error::Superselection {
            row: worst_ij.0,
            col: worst_ij.1,
            magnitude: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    let a = (0..n).map(|i| d[(i, i)].re).collect();
    let b = (0..n).map(|i| d[(n + i, n + i)].re).collect();
    let c = (1..n).map(|i| d[(i, n + i - 1)]).collect();
    SymmetricState::new(a, b, c)
}

/// Partial transpose on the qudit: blocks A, B unchanged, C -> C^T.
pub fn partial_transpose<T: Scalar>(d: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !d.is_square() || d.dim() % 2 != 0 {
        return Err(Error::Dimension("partial transpose needs even square dim".into()));
    }
    let n = d.dim() / 2;
    let mut out = d.clone();
    for i in 0..n {
        for j in 0..n {
            out[(i, n + j)] = d[(j, n + i)];
            out[(n + i, j)] = d[(n + j, i)];
        }
    }
    Ok(out)
}

/// Qubit and qudit reduced populations.
pub fn marginals<T: Scalar>(s: &SymmetricState<T>) -> Marginals<T> {
    Marginals {
        alpha0: s.a.iter().copied().sum(),
        alpha1: s.b.iter().copied().sum(),
        beta: s.a.iter().zip(&s.b).map(|(&x, &y)| x + y).collect(),
    }
}

/// Excitation number of basis index i in the 2N-dimensional space.
#[inline]
fn excitation(i: usize, n: usize) -> usize {
    i / n + i % n
}

/// Project onto the excitation-number pattern by masking every entry with
/// mismatched excitation number. Equal to the 2N-term phase average of the
/// CP projector map.
pub fn symmetry_project<T: Scalar>(d: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !d.is_square() || d.dim() % 2 != 0 {
        return Err(Error::Dimension("projector needs even square dim".into()));
    }
    let n = d.dim() / 2;
    let mut out = d.clone();
    for i in 0..2 * n {
        for j in 0..2 * n {
            if excitation(i, n) != excitation(j, n) {
                out[(i, j)] = c_zero();
            }
        }
    }
    Ok(out)
}

/// The same projector implemented as the explicit 2N-term average of
/// conjugations by exp(i pi k Pi / N). Kept as an independent cross-check
/// of [`symmetry_project`] and used to enumerate the product terms of the
/// convex-hull construction.
pub fn symmetry_project_phase_average<T: Scalar>(d: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !d.is_square() || d.dim() % 2 != 0 {
        return Err(Error::Dimension("projector needs even square dim".into()));
    }
    let n = d.dim() / 2;
    let dim = 2 * n;
    let mut out = DenseMatrix::zeros(dim, dim);
    let weight = T::one() / real::<T>(2.0 * n as f64);
    for k in 0..2 * n {
        let angle = T::PI() * real::<T>(k as f64) / real::<T>(n as f64);
        let mut term = DenseMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let phase = angle * real::<T>(excitation(i, n) as f64 - excitation(j, n) as f64);
                term[(i, j)] = d[(i, j)] * cis(phase);
            }
        }
        out = out.add(&term.scale_re(weight));
    }
    Ok(out)
}

/// The diagonal unitary exp(i pi k Pi / N) applied to a 2N vector; used to
/// enumerate the product terms of the projector average.
pub fn phase_rotate_vector<T: Scalar>(v: &[C<T>], k: usize) -> Vec<C<T>> {
    let n = v.len() / 2;
    let angle = T::PI() * real::<T>(k as f64) / real::<T>(n as f64);
    v.iter()
        .enumerate()
        .map(|(i, &z)| z * cis(angle * real::<T>(excitation(i, n) as f64)))
        .collect()
}

/// Max-norm of the commutator [d, Pi]; zero iff d fits the pattern.
pub fn number_commutator_norm<T: Scalar>(d: &DenseMatrix<T>) -> Result<T> {
    if !d.is_square() || d.dim() % 2 != 0 {
        return Err(Error::Dimension("commutator needs even square dim".into()));
    }
    let n = d.dim() / 2;
    let mut worst = T::zero();
    for i in 0..2 * n {
        for j in 0..2 * n {
            let gap = excitation(j, n) as f64 - excitation(i, n) as f64;
            let m = d[(i, j)].norm() * real::<T>(gap.abs());
            worst = worst.max(m);
        }
    }
    Ok(worst)
}

/// Concurrence of a pure 2 x N state vector (unit norm within 1e-12):
/// sqrt(2 (1 - tr mu^2)) with mu the qubit reduced state.
pub fn concurrence_pure<T: Scalar>(v: &[C<T>]) -> Result<T> {
    if v.len() % 2 != 0 {
        return Err(Error::Dimension("vector length must be 2N".into()));
    }
    let n = v.len() / 2;
    let norm = crate::numerics::vec_norm(v);
    if (norm - T::one()).abs() > real::<T>(1e-12) {
        return Err(Error::NotNormalized(
            (norm - T::one()).abs().to_f64().unwrap_or(f64::NAN),
        ));
    }
    let mut m00 = T::zero();
    let mut m11 = T::zero();
    let mut m01 = c_zero();
    for k in 0..n {
        m00 = m00 + v[k].norm_sqr();
        m11 = m11 + v[n + k].norm_sqr();
        m01 += v[k] * v[n + k].conj();
    }
    let purity = m00 * m00 + m11 * m11 + real::<T>(2.0) * m01.norm_sqr();
    let two = real::<T>(2.0);
    Ok((two * (T::one() - purity)).max(T::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

    fn state(a: &[f64], b: &[f64], c: &[Complex64]) -> SymmetricState<f64> {
        SymmetricState::new(a.to_vec(), b.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn validate_margins() {
        let s = state(&[0.2, 0.3], &[0.1, 0.4], &[Complex64::new(0.15, 0.0)]);
        let r = validate(&s).unwrap();
        assert!(r.ok);
        assert!((r.margins[0] - 0.0075).abs() < 1e-15);

        let bad = state(&[0.2, 0.3], &[0.1, 0.4], &[Complex64::new(0.2, 0.0)]);
        let r = validate(&bad).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].index, 1);
        assert_eq!(r.violations[0].kind, ViolationKind::Coherence);
    }

    #[test]
    fn validate_diagonal_always_ok() {
        let s = SymmetricState::diagonal(vec![0.1, 0.0, 0.3], vec![0.2, 0.0, 0.4]).unwrap();
        assert!(validate(&s).unwrap().ok);
    }

    #[test]
    fn validate_length_mismatch_is_structural() {
        let s = SymmetricState::<f64> {
            n: 3,
            a: vec![0.1, 0.2],
            b: vec![0.1, 0.2, 0.3],
            c: vec![Complex64::new(0.0, 0.0); 2],
        };
        assert!(matches!(validate(&s), Err(Error::Structure(_))));
    }

    #[test]
    fn gauge_fix_pure_imaginary() {
        let s = state(&[0.3, 0.2], &[0.3, 0.2], &[Complex64::new(0.0, 0.1)]);
        let (g, phases) = gauge_fix(&s);
        assert!((g.c[0].re - 0.1).abs() < 1e-15 && g.c[0].im == 0.0);
        assert!((phases.theta[1] - FRAC_PI_2).abs() < 1e-15);
        // round trip back to the input
        let back = apply_gauge(&g, &phases);
        assert!((back.c[0] - s.c[0]).norm() < 1e-15);
    }

    #[test]
    fn gauge_fix_real_is_identity() {
        let s = state(&[0.3, 0.2], &[0.3, 0.2], &[Complex64::new(0.1, 0.0)]);
        let (g, phases) = gauge_fix(&s);
        assert_eq!(g, s);
        assert!(phases.theta.iter().all(|&t| t == 0.0));
    }

    #[test]
    fn gauge_fix_cumulative_args() {
        let c = [
            Complex64::from_polar(0.1, FRAC_PI_3),
            Complex64::from_polar(0.2, FRAC_PI_6),
        ];
        let s = state(&[0.3, 0.3, 0.1], &[0.2, 0.3, 0.1], &c);
        let (_, phases) = gauge_fix(&s);
        assert!((phases.theta[0] - 0.0).abs() < 1e-15);
        assert!((phases.theta[1] - FRAC_PI_3).abs() < 1e-15);
        assert!((phases.theta[2] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn gauge_fix_preserves_spectrum() {
        let c = [
            Complex64::from_polar(0.08, 1.1),
            Complex64::from_polar(0.05, -2.3),
        ];
        let s = state(&[0.3, 0.2, 0.1], &[0.15, 0.15, 0.1], &c);
        let (g, _) = gauge_fix(&s);
        let e1 = numerics::eig_hermitian(&to_dense(&s)).unwrap().values;
        let e2 = numerics::eig_hermitian(&to_dense(&g)).unwrap().values;
        for (x, y) in e1.iter().zip(&e2) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_round_trip() {
        let s = state(&[0.2, 0.3], &[0.1, 0.4], &[Complex64::new(0.15, 0.02)]);
        let d = to_dense(&s);
        assert_eq!(d[(1, 2)], Complex64::new(0.15, 0.02));
        assert_eq!(d[(2, 1)], Complex64::new(0.15, -0.02));
        let back = from_dense(&d, 1e-12).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn from_dense_rejects_forbidden_entry() {
        let s = state(&[0.25, 0.25], &[0.25, 0.25], &[Complex64::new(0.0, 0.0)]);
        let mut d = to_dense(&s);
        // <0,0|rho|1,1> lives at (0, 3)
        d[(0, 3)] = Complex64::new(1e-3, 0.0);
        d[(3, 0)] = Complex64::new(1e-3, 0.0);
        match from_dense(&d, 1e-6) {
            Err(Error::Superselection { magnitude, .. }) => {
                assert!((magnitude - 1e-3).abs() < 1e-12)
            }
            other => panic!("expected superselection error, got {other:?}"),
        }
    }

    #[test]
    fn partial_transpose_involution_and_bell_eigenvalue() {
        let bell = SymmetricState::<f64>::bell_pair(2, 1);
        let d = to_dense(&bell);
        let pt = partial_transpose(&d).unwrap();
        assert_eq!(partial_transpose(&pt).unwrap(), d);
        let s = numerics::eig_hermitian(&pt).unwrap();
        assert!((s.min() - (-0.5)).abs() < 1e-12);
    }

    #[test]
    fn pt_party_independent_when_gauge_fixed() {
        let s = state(&[0.3, 0.2, 0.1], &[0.15, 0.15, 0.1], &[
            Complex64::new(0.08, 0.0),
            Complex64::new(0.05, 0.0),
        ]);
        let d = to_dense(&s);
        let pt_b = partial_transpose(&d).unwrap();
        // PT w.r.t. party A = full transpose of PT w.r.t. B
        let pt_a = pt_b.transpose();
        assert!(pt_a.sub(&pt_b).max_norm() <= 1e-14);
    }

    #[test]
    fn marginals_bell() {
        let bell = SymmetricState::<f64>::bell_pair(2, 1);
        let m = marginals(&bell);
        assert!((m.alpha0 - 0.5).abs() < 1e-15);
        assert!((m.alpha1 - 0.5).abs() < 1e-15);
        assert!((m.beta[0] - 0.5).abs() < 1e-15 && (m.beta[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projector_masking_matches_phase_average() {
        let n = 3;
        let mut d = DenseMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..2 * n {
            for j in 0..2 * n {
                d[(i, j)] = Complex64::new((i + 1) as f64 * 0.1, (j as f64 - i as f64) * 0.05);
            }
        }
        // Hermitize
        let d = d.add(&d.adjoint()).scale_re(0.5);
        let masked = symmetry_project(&d).unwrap();
        let averaged = symmetry_project_phase_average(&d).unwrap();
        assert!(masked.sub(&averaged).max_norm() <= 1e-14);
        // idempotent, trace preserving, pattern-commuting
        assert_eq!(symmetry_project(&masked).unwrap(), masked);
        assert!((masked.trace().re - d.trace().re).abs() < 1e-12);
        assert!(number_commutator_norm(&masked).unwrap() <= 1e-12);
    }

    #[test]
    fn commutator_norm_perturbation() {
        let s = state(&[0.25, 0.25], &[0.25, 0.25], &[Complex64::new(0.1, 0.0)]);
        let mut d = to_dense(&s);
        assert_eq!(number_commutator_norm(&d).unwrap(), 0.0);
        let eps = 1e-4;
        d[(0, 3)] = Complex64::new(eps, 0.0); // |0,0><1,1|: gap 2
        assert!((number_commutator_norm(&d).unwrap() - 2.0 * eps).abs() < 1e-18);
    }

    #[test]
    fn concurrence_pure_values() {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // product |0>|1> in 2x3
        let mut v = vec![zero; 6];
        v[1] = one;
        assert!(concurrence_pure(&v).unwrap().abs() < 1e-12);
        // Bell
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut v = vec![zero; 4];
        v[1] = r; // |0,1>
        v[2] = r; // |1,0>
        assert!((concurrence_pure(&v).unwrap() - 1.0).abs() < 1e-12);
        // cos phi |0,1> + sin phi |1,0> -> |sin 2 phi|
        for k in 0..8 {
            let phi = 0.1 + 0.4 * k as f64;
            let mut v = vec![zero; 4];
            v[1] = Complex64::new(phi.cos(), 0.0);
            v[2] = Complex64::new(phi.sin(), 0.0);
            assert!((concurrence_pure(&v).unwrap() - (2.0 * phi).sin().abs()).abs() < 1e-10);
        }
        let _ = PI;
    }
}
