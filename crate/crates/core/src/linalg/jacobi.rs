//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use std::cmp::Ordering;

use super::{EigenDecomposition, Matrix, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Maximum number of full sweeps over the upper triangle.
pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to `‖A‖_F`.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-12;

/// Components with magnitude below this are skipped when fixing eigenvector signs.
pub const SIGN_THRESHOLD: f64 = 1e-12;

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back in descending order. Exactly equal eigenvalues are
/// ordered by their sign-normalized eigenvectors, lexicographically largest
/// first, so the identity matrix keeps the standard basis in order. Each
/// eigenvector is normalized so its first component above
/// [`SIGN_THRESHOLD`] in magnitude is positive.
pub fn sym_eigendecomposition<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<EigenDecomposition<T>> {
    let d = a.dim();
    let mut w = a.as_slice().to_vec();
    let mut v = Matrix::identity(d);

    // f32 cannot reach 1e-12; fall back to a small multiple of its epsilon.
    let rel = T::lit(CONVERGENCE_TOLERANCE).max(T::epsilon() * T::lit(64.0));
    let threshold = rel * a.frobenius_norm();

    let mut sweeps = 0;
    while off_diagonal_norm(&w, d) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { sweeps });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut w, &mut v, d, p, q);
            }
        }
        sweeps += 1;
    }

    let mut pairs: Vec<(T, Vec<T>)> = (0..d)
        .map(|j| {
            let mut u = v.column(j).to_vec();
            normalize_sign(&mut u);
            (w[j * d + j], u)
        })
        .collect();
    pairs.sort_by(|(la, ua), (lb, ub)| match lb.partial_cmp(la) {
        Some(Ordering::Equal) | None => compare_lex(ub, ua),
        Some(ord) => ord,
    });

    let eigenvalues = pairs.iter().map(|(l, _)| *l).collect();
    let columns: Vec<Vec<T>> = pairs.into_iter().map(|(_, u)| u).collect();
    let eigenvectors = Matrix::from_columns(&columns)?;
    Ok(EigenDecomposition::from_parts(eigenvalues, eigenvectors))
}

fn off_diagonal_norm<T: Scalar>(w: &[T], d: usize) -> T {
    let mut sum = T::zero();
    for p in 0..d {
        for q in (p + 1)..d {
            let x = w[p * d + q];
            sum += x * x;
        }
    }
    (sum + sum).sqrt()
}

/// Annihilates `w[p][q]` with a plane rotation and accumulates it into `v`.
fn rotate<T: Scalar>(w: &mut [T], v: &mut Matrix<T>, d: usize, p: usize, q: usize) {
    let apq = w[p * d + q];
    if apq == T::zero() {
        return;
    }
    let app = w[p * d + p];
    let aqq = w[q * d + q];
    let theta = (aqq - app) / (apq + apq);
    let t = {
        let t = T::one() / (theta.abs() + theta.hypot(T::one()));
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / t.hypot(T::one());
    let s = t * c;

    w[p * d + p] = app - t * apq;
    w[q * d + q] = aqq + t * apq;
    w[p * d + q] = T::zero();
    w[q * d + p] = T::zero();
    for r in 0..d {
        if r == p || r == q {
            continue;
        }
        let arp = w[r * d + p];
        let arq = w[r * d + q];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        w[r * d + p] = new_rp;
        w[p * d + r] = new_rp;
        w[r * d + q] = new_rq;
        w[q * d + r] = new_rq;
    }
    for r in 0..d {
        let vrp = v.get(r, p);
        let vrq = v.get(r, q);
        v.set(r, p, c * vrp - s * vrq);
        v.set(r, q, s * vrp + c * vrq);
    }
}

/// Flips `u` so that its first component above [`SIGN_THRESHOLD`] is positive.
pub fn normalize_sign<T: Scalar>(u: &mut [T]) {
    let threshold = T::lit(SIGN_THRESHOLD);
    if let Some(&lead) = u.iter().find(|x| x.abs() > threshold) {
        if lead < T::zero() {
            u.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn compare_lex<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(ord) => return ord,
        }
    }
    Ordering::Equal
}
