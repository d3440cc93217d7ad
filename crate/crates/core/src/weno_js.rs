//! Classical fifth-order WENO reconstruction with polynomial substencils.

pub const EPS_JS: f64 = 1e-6;

/// `u^-` at `x_{j+1/2}` from cells `j-2..=j+2` (`w[0..5]`).
pub fn reconstruct_minus(w: &[f64], eps: f64) -> f64 {
    let (a, b, c, d, e) = (w[0], w[1], w[2], w[3], w[4]);
    let q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    let q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    let q2 = (2.0 * c + 5.0 * d - e) / 6.0;
    let sq = |x: f64| x * x;
    let b0 = 13.0 / 12.0 * sq(a - 2.0 * b + c) + 0.25 * sq(a - 4.0 * b + 3.0 * c);
    let b1 = 13.0 / 12.0 * sq(b - 2.0 * c + d) + 0.25 * sq(b - d);
    let b2 = 13.0 / 12.0 * sq(c - 2.0 * d + e) + 0.25 * sq(3.0 * c - 4.0 * d + e);
    let a0 = 0.1 / sq(eps + b0);
    let a1 = 0.6 / sq(eps + b1);
    let a2 = 0.3 / sq(eps + b2);
    (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)
}

/// `(u^-, u^+)` at `x_{j+1/2}` from the six cells `j-2..=j+3`.
pub fn reconstruct_pair(w: &[f64; 6], eps: f64) -> (f64, f64) {
    let r = [w[5], w[4], w[3], w[2], w[1]];
    (reconstruct_minus(&w[..5], eps), reconstruct_minus(&r, eps))
}
