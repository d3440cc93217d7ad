//! RBF-WENO interface reconstruction on three two-cell substencils.
//!
//! For the interface `x_{j+1/2}` the reconstruction reads the six cells
//! `j-2..=j+3`: the outer pair only feeds the derivative estimates of the global
//! shape, the inner four cells `j-1..=j+2` carry the substencils
//! `S_0 = {j-1, j}`, `S_1 = {j, j+1}`, `S_2 = {j+1, j+2}` and the big stencil.
//! `u^+` at the same interface is the `u^-` reconstruction of the reversed window.

use crate::error::{Error, Result};
use crate::rbf::{sign_of, DerivativeAccuracy, ShapeOptions, ShapeParams, StencilCoeffs};

/// Cap on `|gamma dx|` in the exponential differences; keeps `exp` finite on
/// data with near-zero reference values.
const GAMMA_LIMIT: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessSet {
    pub beta: [f64; 3],
    pub tau3: f64,
    pub gamma_dx: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoWeights {
    pub d: [f64; 3],
    pub alpha: [f64; 3],
    pub omega: [f64; 3],
}

/// Smoothness indicators with exponentially vanishing moments on
/// `f = (f_{i-1}, f_i, f_{i+1}, f_{i+2})`.
///
/// `beta_k` adds to the squared plain difference the squared difference
/// `e^{gamma dx} f_right - f_left`, which annihilates an exponential whose rate
/// `gamma` is estimated from the data relative to `f_i`.
pub fn smoothness_indicators(f: &[f64; 4], delta_mag: f64) -> SmoothnessSet {
    let fi = f[1];
    let den = fi + sign_of(fi) * delta_mag;
    let gamma_dx: [f64; 3] = std::array::from_fn(|nu| {
        let g = -(f[nu + 1] - f[nu]) / den;
        if g.is_finite() {
            g.clamp(-GAMMA_LIMIT, GAMMA_LIMIT)
        } else {
            0.0
        }
    });
    let pair = |nu: usize| {
        let plain = f[nu + 1] - f[nu];
        let expo = gamma_dx[nu].exp() * f[nu + 1] - f[nu];
        plain * plain + expo * expo
    };
    let b0 = pair(0);
    let b1 = pair(1);
    let b2 = 0.5 * (b1 + pair(2));
    SmoothnessSet {
        beta: [b0, b1, b2],
        tau3: (b2 - b0).abs(),
        gamma_dx,
    }
}

/// Linear weights matching the substencil combination to the big stencil in the
/// outermost cells: `d_0 = C_{-1}/c^0_0`, `d_2 = C_2/c^2_1`, `d_1 = 1 - d_0 - d_2`.
pub fn linear_weights(c: &StencilCoeffs) -> Result<[f64; 3]> {
    let a = c.c_sub[0][0];
    let b = c.c_sub[2][1];
    if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::DegenerateCoefficients(format!(
            "outer substencil coefficients c0_0 = {a}, c2_1 = {b}"
        )));
    }
    let d0 = c.c_big[0] / a;
    let d2 = c.c_big[3] / b;
    Ok([d0, 1.0 - d0 - d2, d2])
}

/// Maps linear to nonlinear weights:
/// `alpha_k = d_k (1 + tau3/(beta_k + eps) + (beta_k/(tau3 + eps))^2)`, `omega = alpha / sum(alpha)`.
pub fn nonlinear_weights(s: &SmoothnessSet, d: [f64; 3], eps: f64) -> WenoWeights {
    let alpha: [f64; 3] = std::array::from_fn(|k| {
        let b = s.beta[k];
        let r = b / (s.tau3 + eps);
        d[k] * (1.0 + s.tau3 / (b + eps) + r * r)
    });
    let sum: f64 = alpha.iter().sum();
    let omega = alpha.map(|a| a / sum);
    WenoWeights { d, alpha, omega }
}

/// What to do when a linear weight comes out negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NegativeWeightPolicy {
    /// Use the big-stencil value at that interface.
    BigStencil,
    /// Use the `s = 0` weights `(1/6, 2/3, 1/6)` for the nonlinear mapping.
    PolynomialWeights,
}

/// Parameters of the RBF-WENO reconstruction. `None` safeguards default to `dx^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoParams {
    pub shape: ShapeOptions,
    pub delta_mag: Option<f64>,
    pub eps_weights: Option<f64>,
    pub negative_weights: NegativeWeightPolicy,
}

impl Default for WenoParams {
    fn default() -> Self {
        Self {
            shape: ShapeOptions::default(),
            delta_mag: None,
            eps_weights: None,
            negative_weights: NegativeWeightPolicy::PolynomialWeights,
        }
    }
}

impl WenoParams {
    #[inline]
    pub fn delta(&self, dx: f64) -> f64 {
        self.delta_mag.unwrap_or(dx * dx)
    }

    #[inline]
    pub fn eps(&self, dx: f64) -> f64 {
        self.eps_weights.unwrap_or(dx * dx)
    }
}

pub const POLYNOMIAL_LINEAR_WEIGHTS: [f64; 3] = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];

/// Full record of one `u^-` reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceDetail {
    pub value: f64,
    pub shapes: ShapeParams,
    pub coeffs: StencilCoeffs,
    pub substencil_values: [f64; 3],
    pub big_value: f64,
    pub smoothness: SmoothnessSet,
    /// `None` when the big stencil replaced the WENO combination.
    pub weights: Option<WenoWeights>,
}

#[inline]
fn inner(w: &[f64; 6]) -> [f64; 4] {
    [w[1], w[2], w[3], w[4]]
}

#[inline]
fn reversed(w: &[f64; 6]) -> [f64; 6] {
    [w[5], w[4], w[3], w[2], w[1], w[0]]
}

/// `u^-` at `x_{j+1/2}` from cells `j-2..=j+3`, with every intermediate quantity.
pub fn reconstruct_minus_detailed(w: &[f64; 6], dx: f64, params: &WenoParams) -> Result<InterfaceDetail> {
    let shapes = ShapeParams::estimate(w, dx, params.delta(dx), &params.shape);
    detailed_with_coeffs(w, dx, params, shapes, StencilCoeffs::new(&shapes)?)
}

fn detailed_with_coeffs(
    w: &[f64; 6],
    dx: f64,
    params: &WenoParams,
    shapes: ShapeParams,
    coeffs: StencilCoeffs,
) -> Result<InterfaceDetail> {
    let delta = params.delta(dx);
    let cells = inner(w);
    let substencil_values: [f64; 3] = std::array::from_fn(|k| coeffs.substencil_value(k, &cells));
    let big_value = coeffs.big_value(&cells);
    let smoothness = smoothness_indicators(&cells, delta);
    let mut d = linear_weights(&coeffs)?;
    if d.iter().any(|&x| x < 0.0) {
        match params.negative_weights {
            NegativeWeightPolicy::BigStencil => {
                return Ok(InterfaceDetail {
                    value: big_value,
                    shapes,
                    coeffs,
                    substencil_values,
                    big_value,
                    smoothness,
                    weights: None,
                })
            }
            NegativeWeightPolicy::PolynomialWeights => d = POLYNOMIAL_LINEAR_WEIGHTS,
        }
    }
    let weights = nonlinear_weights(&smoothness, d, params.eps(dx));
    let value = weights
        .omega
        .iter()
        .zip(&substencil_values)
        .map(|(o, v)| o * v)
        .sum();
    Ok(InterfaceDetail {
        value,
        shapes,
        coeffs,
        substencil_values,
        big_value,
        smoothness,
        weights: Some(weights),
    })
}

#[inline]
pub fn reconstruct_minus(w: &[f64; 6], dx: f64, params: &WenoParams) -> Result<f64> {
    reconstruct_minus_detailed(w, dx, params).map(|d| d.value)
}

/// `(u^-, u^+)` at `x_{j+1/2}` from cells `j-2..=j+3`.
pub fn reconstruct_interface_pair(w: &[f64; 6], dx: f64, params: &WenoParams) -> Result<(f64, f64)> {
    let r = reversed(w);
    if !shapes_are_symmetric(params) {
        return Ok((reconstruct_minus(w, dx, params)?, reconstruct_minus(&r, dx, params)?));
    }
    let shapes = ShapeParams::estimate(w, dx, params.delta(dx), &params.shape);
    let coeffs = StencilCoeffs::new(&shapes)?;
    let minus = detailed_with_coeffs(w, dx, params, shapes, coeffs)?.value;
    let plus = detailed_with_coeffs(&r, dx, params, shapes, coeffs)?.value;
    Ok((minus, plus))
}

/// The second-order shape estimates read the window symmetrically, so both
/// sides of an interface share one set of shapes and coefficients.
#[inline]
fn shapes_are_symmetric(params: &WenoParams) -> bool {
    params.shape.accuracy == DerivativeAccuracy::Second
}

/// Big-stencil value at `x_{j+1/2}` with the global shape only (no indicators).
pub fn reconstruct_fixed_big_stencil(w: &[f64; 6], dx: f64, params: &WenoParams) -> Result<f64> {
    let g = crate::rbf::shape_global(w, dx, params.delta(dx), &params.shape);
    let c = crate::rbf::four_point_coeffs_complex(params.shape.effective(g.s, g.clamped))?;
    let cells = inner(w);
    Ok(c.iter().zip(&cells).map(|(c, u)| c * u).sum())
}

/// `(u^-, u^+)` of the fixed big stencil.
pub fn reconstruct_fixed_pair(w: &[f64; 6], dx: f64, params: &WenoParams) -> Result<(f64, f64)> {
    if shapes_are_symmetric(params) {
        // the big stencil is symmetric too, so both sides coincide
        let v = reconstruct_fixed_big_stencil(w, dx, params)?;
        return Ok((v, v));
    }
    Ok((
        reconstruct_fixed_big_stencil(w, dx, params)?,
        reconstruct_fixed_big_stencil(&reversed(w), dx, params)?,
    ))
}
