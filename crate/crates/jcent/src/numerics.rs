//! Small dense complex linear algebra: Hermitian eigenvalues, singular
//! values, null spaces and numerical rank.
//!
//! Everything is cyclic Jacobi (two-sided for Hermitian eigenproblems,
//! one-sided for the SVD). Matrices here are at most 2N x 2N with N <= 64,
//! so an O(dim^3) method with high relative accuracy beats anything fancier.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c_re, c_zero, real, Scalar, C};

/// Default relative threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Eigenvalues of a Hermitian matrix, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Scalar> {
    pub values: Vec<T>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }
    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }
}

/// Full Hermitian eigendecomposition; `vectors` columns are eigenvectors
/// in the same (ascending) order as `values`.
#[derive(Debug, Clone)]
pub struct EigDecomposition<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: DenseMatrix<T>,
}

/// Thin SVD `A = U diag(s) V^dagger`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub u: DenseMatrix<T>,
    pub s: Vec<T>,
    pub v: DenseMatrix<T>,
}

/// Orthonormal basis of the numerical null space at a relative threshold.
#[derive(Debug, Clone)]
pub struct KernelBasis<T: Scalar> {
    pub vectors: Vec<Vec<C<T>>>,
    pub tol: T,
}

impl<T: Scalar> KernelBasis<T> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Jacobi rotation parameters zeroing the off-diagonal of the Hermitian
/// 2x2 [[app, apq], [conj(apq), aqq]]. Returns the 2x2 unitary columns
/// (u00, u10, u01, u11); the transform is a column update by this unitary.
#[inline]
fn rotation<T: Scalar>(app: T, aqq: T, apq: C<T>) -> (C<T>, C<T>, C<T>, C<T>) {
    let r = apq.norm();
    let phase = apq / c_re(r); // e^{i phi}
    let theta = (aqq - app) / (real::<T>(2.0) * r);
    let t = if theta >= T::zero() {
        T::one() / (theta + (T::one() + theta * theta).sqrt())
    } else {
        -T::one() / (-theta + (T::one() + theta * theta).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
    (
        c_re(c),
        -phase.conj() * c_re(s),
        c_re(s),
        phase.conj() * c_re(c),
    )
}

fn offdiag_norm<T: Scalar>(a: &DenseMatrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Rotate eigen/singular vectors to a deterministic phase: the first
/// component whose modulus exceeds half the largest becomes real positive.
pub fn normalize_phase<T: Scalar>(v: &mut [C<T>]) {
    let maxmod = v.iter().map(|z| z.norm()).fold(T::zero(), |a, b| a.max(b));
    if maxmod == T::zero() {
        return;
    }
    let half = maxmod * real::<T>(0.5);
    if let Some(z) = v.iter().find(|z| z.norm() > half) {
        let phase = z.conj() / c_re(z.norm());
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi.
pub fn eigh<T: Scalar>(d: &DenseMatrix<T>) -> Result<EigDecomposition<T>> {
    let scale = d.max_norm();
    let herm_tol = real::<T>(1e-12) * scale.max(T::one());
    d.check_hermitian(herm_tol)?;
    let n = d.dim();
    let mut a = d.clone();
    // symmetrize so roundoff asymmetry cannot accumulate
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * c_re(real::<T>(0.5));
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(i, i)] = c_re(a[(i, i)].re);
    }
    let mut v = DenseMatrix::identity(n);
    let fro = a.frobenius_norm().max(T::epsilon());
    let stop = T::epsilon() * fro;
    for _sweep in 0..60 {
        if offdiag_norm(&a) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= T::epsilon() * fro * real::<T>(1e-2) {
                    continue;
                }
                let (u00, u10, u01, u11) = rotation(a[(p, p)].re, a[(q, q)].re, apq);
                // column update A <- A U on columns p, q
                for i in 0..n {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = x * u00 + y * u10;
                    a[(i, q)] = x * u01 + y * u11;
                }
                // row update A <- U^dagger A on rows p, q
                for j in 0..n {
                    let (x, y) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = u00.conj() * x + u10.conj() * y;
                    a[(q, j)] = u01.conj() * x + u11.conj() * y;
                }
                a[(p, q)] = c_zero();
                a[(q, p)] = c_zero();
                a[(p, p)] = c_re(a[(p, p)].re);
                a[(q, q)] = c_re(a[(q, q)].re);
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * u00 + y * u10;
                    v[(i, q)] = x * u01 + y * u11;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col: Vec<C<T>> = (0..n).map(|r| v[(r, i)]).collect();
        normalize_phase(&mut col);
        for r in 0..n {
            vectors[(r, k)] = col[r];
        }
    }
    Ok(EigDecomposition { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eig_hermitian<T: Scalar>(d: &DenseMatrix<T>) -> Result<Spectrum<T>> {
    Ok(Spectrum {
        values: eigh(d)?.values,
    })
}

/// One-sided (Hestenes) Jacobi SVD. Works on the matrix with at least as
/// many rows as columns; the other orientation is handled by transposing.
pub fn svd<T: Scalar>(d: &DenseMatrix<T>) -> Svd<T> {
    if d.rows() < d.cols() {
        let f = svd(&d.adjoint());
        return Svd {
            u: f.v,
            s: f.s,
            v: f.u,
        };
    }
    let (m, n) = (d.rows(), d.cols());
    let mut g = d.clone();
    let mut v = DenseMatrix::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut hpp = T::zero();
                let mut hqq = T::zero();
                let mut hpq = c_zero();
                for i in 0..m {
                    hpp = hpp + g[(i, p)].norm_sqr();
                    hqq = hqq + g[(i, q)].norm_sqr();
                    hpq += g[(i, p)].conj() * g[(i, q)];
                }
                if hpp == T::zero() || hqq == T::zero() {
                    continue;
                }
                if hpq.norm() <= eps * (hpp * hqq).sqrt() {
                    continue;
                }
                rotated = true;
                let (u00, u10, u01, u11) = rotation(hpp, hqq, hpq);
                for i in 0..m {
                    let (x, y) = (g[(i, p)], g[(i, q)]);
                    g[(i, p)] = x * u00 + y * u10;
                    g[(i, q)] = x * u01 + y * u11;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * u00 + y * u10;
                    v[(i, q)] = x * u01 + y * u11;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut norms: Vec<T> = (0..n)
        .map(|j| {
            (0..m)
                .map(|i| g[(i, j)].norm_sqr())
                .fold(T::zero(), |a, b| a + b)
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    norms = order.iter().map(|&j| {
        (0..m)
            .map(|i| g[(i, j)].norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }).collect();
    let mut u = DenseMatrix::zeros(m, n);
    let mut vv = DenseMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[k];
        let mut ucol: Vec<C<T>> = (0..m).map(|i| g[(i, j)]).collect();
        if s > T::zero() {
            for x in ucol.iter_mut() {
                *x = *x / c_re(s);
            }
        }
        let mut vcol: Vec<C<T>> = (0..n).map(|i| v[(i, j)]).collect();
        normalize_phase(&mut vcol);
        // keep U consistent with the phase applied to V
        if s > T::zero() {
            // phase applied to vcol equals conj(z)/|z| of its pivot; recompute
            // u from A v / s so that A = U S V^dagger holds with the fixed V
            ucol = d.matvec(&vcol);
            for x in ucol.iter_mut() {
                *x = *x / c_re(s);
            }
        }
        for i in 0..m {
            u[(i, k)] = ucol[i];
        }
        for i in 0..n {
            vv[(i, k)] = vcol[i];
        }
    }
    Svd {
        u,
        s: norms,
        v: vv,
    }
}

/// Singular values, descending. Count = min(rows, cols).
pub fn singular_values<T: Scalar>(d: &DenseMatrix<T>) -> Vec<T> {
    svd(d).s
}

/// Numerical rank at `tol` relative to the largest singular value.
pub fn rank<T: Scalar>(d: &DenseMatrix<T>, tol: T) -> usize {
    let s = singular_values(d);
    let cut = tol * s.first().copied().unwrap_or_else(T::zero);
    s.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal null-space basis of a square matrix: right singular vectors
/// with singular value at most `tol` times the largest.
pub fn kernel_basis<T: Scalar>(d: &DenseMatrix<T>, tol: T) -> KernelBasis<T> {
    let f = svd(d);
    let smax = f.s.first().copied().unwrap_or_else(T::zero);
    let cut = tol * smax;
    let n = d.cols();
    let mut vectors = Vec::new();
    for (k, &s) in f.s.iter().enumerate() {
        if s <= cut {
            vectors.push((0..n).map(|i| f.v[(i, k)]).collect());
        }
    }
    KernelBasis { vectors, tol }
}

/// Conjugate-linear in the first argument.
pub fn inner<T: Scalar>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter()
        .zip(v)
        .fold(c_zero(), |acc, (a, b)| acc + a.conj() * *b)
}

pub fn vec_norm<T: Scalar>(v: &[C<T>]) -> T {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// Gram-Schmidt orthonormalization; near-dependent vectors are dropped.
pub fn orthonormalize<T: Scalar>(vecs: &[Vec<C<T>>]) -> Vec<Vec<C<T>>> {
    let mut basis: Vec<Vec<C<T>>> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * *bi;
                }
            }
        }
        let n = vec_norm(&w);
        if n > real::<T>(1e-12) * vec_norm(v).max(T::one()) {
            for x in w.iter_mut() {
                *x = *x / c_re(n);
            }
            basis.push(w);
        }
    }
    basis
}

/// Principal angles (radians, ascending) between the spans of two sets of
/// vectors. Inputs need not be orthonormal.
pub fn principal_angles<T: Scalar>(a: &[Vec<C<T>>], b: &[Vec<C<T>>]) -> Result<Vec<T>> {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    if qa.len() != qb.len() {
        return Err(Error::Dimension(format!(
            "subspace dimensions differ: {} vs {}",
            qa.len(),
            qb.len()
        )));
    }
    if qa.is_empty() {
        return Ok(Vec::new());
    }
    let m = DenseMatrix::from_fn(qa.len(), qb.len(), |i, j| inner(&qa[i], &qb[j]));
    let mut angles: Vec<T> = singular_values(&m)
        .into_iter()
        .map(|s| s.min(T::one()).acos())
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(angles)
}
