//! Perron root of a nonnegative integer matrix.
//!
//! The spectral radius of a reducible matrix is the largest spectral radius
//! over its strongly connected components, so each component is handled on
//! its own. On an irreducible block `A`, iterating `A + I` from the all-ones
//! vector is aperiodic, and for every positive `x` the Collatz-Wielandt
//! quotients bracket the root: `min (Ax)_i / x_i <= rho(A) <= max (Ax)_i / x_i`.
//! Iteration stops once the bracket is narrower than the tolerance.

use super::matrix::TransferMatrix;
use crate::error::{Error, Result};

pub fn spectral_radius(t: &TransferMatrix, tolerance: f64, max_iterations: usize) -> Result<f64> {
    let mut rho: f64 = 0.0;
    for comp in t.strongly_connected_components() {
        let block = t.submatrix(&comp);
        rho = rho.max(irreducible_radius(&block, tolerance, max_iterations)?);
    }
    Ok(rho)
}

fn irreducible_radius(a: &TransferMatrix, tolerance: f64, max_iterations: usize) -> Result<f64> {
    let n = a.dim();
    if n == 1 {
        return Ok(a.get(0, 0) as f64);
    }
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let (mut previous, mut last) = (f64::NAN, f64::NAN);
    for _ in 0..max_iterations {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = a.row(i).iter().zip(&x).map(|(&c, &xj)| c as f64 * xj).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (&yi, &xi) in y.iter().zip(&x) {
            let q = yi / xi;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        previous = last;
        last = 0.5 * (lo + hi);
        if hi - lo <= tolerance {
            return Ok(last);
        }
        // shifted step x <- (A + I) x, scaled to max 1
        let mut scale = 0.0f64;
        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi += yi;
            scale = scale.max(*xi);
        }
        for xi in x.iter_mut() {
            *xi /= scale;
        }
    }
    Err(Error::NotConverged { iterations: max_iterations, previous, last })
}
