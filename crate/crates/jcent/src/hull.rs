//! Explicit separable decompositions of the PPT coherence carrier tau for
//! widths 2 and 3, where PPT implies separability. The construction
//! averages a single product vector over the 2N local phase rotations
//! exp(i pi k Pi / N) and, for width 3, adds one diagonal product
//! leftover.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::normal_form::{tau_dense, TauState};
use crate::range::ProductVector;
use crate::scalar::{c_one, c_re, c_zero, cis, real, Scalar};
use crate::state::phase_rotate_vector;

/// One weighted product term of a separable mixture.
#[derive(Debug, Clone)]
pub struct HullTerm<T: Scalar> {
    pub weight: T,
    pub vector: ProductVector<T>,
}

#[derive(Debug, Clone)]
pub struct HullDecomposition<T: Scalar> {
    /// The 2N phase-rotated copies of the seed product vector, each with
    /// weight 1/(2N), plus the diagonal leftover when present.
    pub terms: Vec<HullTerm<T>>,
    /// (qubit index, Fock index) of the diagonal leftover, if any.
    pub residual_index: Option<(usize, usize)>,
    pub residual_weight: T,
    /// Max-norm distance between the reconstructed mixture and tau.
    pub reconstruction_error: T,
}

/// Separable decomposition of tau for width N in {2, 3}.
///
/// Width 2: the seed (|0> + y1^{-1}|1>) kron (y1, y1) reproduces tau
/// exactly under the phase average. Width 3 splits by branch: for
/// y1 >= y2 the seed is (|0> + y1^{-1}|1>) kron (y1, y1, y2) with
/// leftover (1 - y2^2/y1^2) |1,2><1,2|; for y2 > y1 it is
/// (|0> + y2^{-1}|1>) kron (y1, y2, y2) with leftover
/// (1 - y1^2/y2^2) |1,0><1,0|.
pub fn hull_construct<T: Scalar>(n: usize, y: &[T]) -> Result<HullDecomposition<T>> {
    if y.len() + 1 != n || y.iter().any(|&v| v <= T::zero()) {
        return Err(Error::InvalidParam(
            "need positive y_1..y_{N-1} for width N".into(),
        ));
    }
    let (seed, residual_index, residual_weight) = match n {
        2 => {
            let y1 = y[0];
            let e = [c_one(), c_re(T::one() / y1)];
            let f = vec![c_re(y1), c_re(y1)];
            (ProductVector::new(e, f, None)?, None, T::zero())
        }
        3 => {
            let (y1, y2) = (y[0], y[1]);
            if y1 >= y2 {
                let e = [c_one(), c_re(T::one() / y1)];
                let f = vec![c_re(y1), c_re(y1), c_re(y2)];
                let w = T::one() - (y2 / y1) * (y2 / y1);
                (ProductVector::new(e, f, None)?, Some((1, 2)), w)
            } else {
                let e = [c_one(), c_re(T::one() / y2)];
                let f = vec![c_re(y1), c_re(y2), c_re(y2)];
                let w = T::one() - (y1 / y2) * (y1 / y2);
                (ProductVector::new(e, f, None)?, Some((1, 0)), w)
            }
        }
        _ => {
            return Err(Error::InvalidParam(
                "explicit hulls are constructed for N = 2, 3 only".into(),
            ))
        }
    };

    let weight = T::one() / real::<T>(2.0 * n as f64);
    let mut terms = Vec::with_capacity(2 * n + 1);
    let mut reconstructed = DenseMatrix::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        let rotated = phase_rotate_vector(&seed.joint(), k);
        reconstructed = reconstructed.add(&DenseMatrix::outer(&rotated).scale_re(weight));
        // the rotation is local: a qubit phase times a Fock-diagonal phase
        let phase = T::PI() * real::<T>(k as f64) / real::<T>(n as f64);
        let e = [seed.e[0], seed.e[1] * cis(phase)];
        let f = seed
            .f
            .iter()
            .enumerate()
            .map(|(m, &z)| z * cis(phase * real::<T>(m as f64)))
            .collect();
        terms.push(HullTerm {
            weight,
            vector: ProductVector::new(e, f, None)?,
        });
    }
    if let Some((q, m)) = residual_index {
        let mut e = [c_zero(), c_zero()];
        e[q] = c_one();
        let mut f = vec![c_zero(); n];
        f[m] = c_one();
        let vector = ProductVector::new(e, f, None)?;
        reconstructed = reconstructed.add(&DenseMatrix::outer(&vector.joint()).scale_re(residual_weight));
        terms.push(HullTerm {
            weight: residual_weight,
            vector,
        });
    }
    let tau = tau_dense(&TauState::new(y.to_vec()));
    let reconstruction_error = reconstructed.sub(&tau).max_norm();
    Ok(HullDecomposition {
        terms,
        residual_index,
        residual_weight,
        reconstruction_error,
    })
}
