//! Discrete error norms and observed convergence orders.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    pub linf: f64,
    pub l1: f64,
    pub l2: f64,
}

/// L-infinity, dx-weighted L1 and L2 norms of `approx - exact`.
pub fn error_norms(approx: &[f64], exact: &[f64], dx: f64) -> Result<ErrorNorms> {
    if approx.len() != exact.len() {
        return Err(Error::LengthMismatch {
            left: approx.len(),
            right: exact.len(),
        });
    }
    let mut n = ErrorNorms::default();
    let mut sq = 0.0;
    for (a, e) in approx.iter().zip(exact) {
        let d = (a - e).abs();
        n.linf = n.linf.max(d);
        n.l1 += d;
        sq += d * d;
    }
    n.l1 *= dx;
    n.l2 = (dx * sq).sqrt();
    Ok(n)
}

/// Observed orders between consecutive `(n_cells, error)` entries.
///
/// Returns one value per refinement (`len - 1` values). An order that cannot be
/// formed because an error is zero or non-finite is reported as `NaN`.
pub fn observed_order(errors: &[(usize, f64)]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| {
            let (n0, e0) = w[0];
            let (n1, e1) = w[1];
            if e0 > 0.0 && e1 > 0.0 && e0.is_finite() && e1.is_finite() && n1 != n0 {
                (e0 / e1).ln() / (n1 as f64 / n0 as f64).ln()
            } else {
                f64::NAN
            }
        })
        .collect()
}
