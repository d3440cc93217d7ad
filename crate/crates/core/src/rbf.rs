//! Gaussian-RBF interface reconstruction coefficients and optimal shape parameters.
//!
//! All reconstructions target the interface `x_{j+1/2}` from cell averages. The
//! Gaussian `phi(x) = exp(-lambda^2 x^2)` enters only through the dimensionless
//! shape `s = lambda^2 dx^2`; imaginary `lambda` is a negative `s`.
//!
//! Coefficients come from interpolating the primitive function
//! `U(x) = int u` at cell interfaces with Gaussians centred on those interfaces
//! and differentiating the interpolant at `x_{j+1/2}`. In terms of `q = exp(-s)`
//! every coefficient is `s` times a rational function of `q` whose poles at
//! `q = 1` appear only through factors `q^m - 1`; writing those as
//! `expm1(-m s)` gives evaluations without cancellation. Near `s = 0` a
//! degree-4 Taylor expansion is used instead, which also makes the polynomial
//! limits exact.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible `|s|`; also the upper bound for a configured clamp value.
pub const MAX_SHAPE: f64 = 1.0;

/// Below this `|s|` the Taylor expansions replace the closed forms.
pub const SERIES_THRESHOLD: f64 = 1e-3;

/// Clamps `s` to `[-s_max, s_max]` keeping its sign; non-finite input maps to 0.
pub fn clamp_shape(s: f64, s_max: f64) -> f64 {
    clamp_flagged(s, s_max).0
}

fn clamp_flagged(s: f64, s_max: f64) -> (f64, bool) {
    if !s.is_finite() {
        (0.0, true)
    } else if s.abs() > s_max {
        (s_max.copysign(s), true)
    } else {
        (s, false)
    }
}

fn clamp_complex(s: Complex64, s_max: f64) -> (Complex64, bool) {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return (Complex64::new(0.0, 0.0), true);
    }
    let m = s.norm_sqr().sqrt();
    if m > s_max {
        (s * (s_max / m), true)
    } else {
        (s, false)
    }
}

/// Sign used by the denominator shifts: `sign(0) = +1`.
#[inline]
pub(crate) fn sign_of(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Two-cell substencils around `x_{j+1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Substencil {
    /// cells `{j-1, j}`
    Left = 0,
    /// cells `{j, j+1}`
    Center = 1,
    /// cells `{j+1, j+2}`
    Right = 2,
}

impl Substencil {
    pub const ALL: [Substencil; 3] = [Substencil::Left, Substencil::Center, Substencil::Right];

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            0 => Ok(Substencil::Left),
            1 => Ok(Substencil::Center),
            2 => Ok(Substencil::Right),
            _ => Err(Error::InvalidConfig(format!("substencil index {k} not in 0..=2"))),
        }
    }
}

trait Scalar:
    Copy
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn expm1(self) -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn expm1(self) -> Self {
        f64::exp_m1(self)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn expm1(self) -> Self {
        // exp(x+iy) - 1 = (expm1(x) cos y - 2 sin^2(y/2)) + i exp(x) sin y
        let (x, y) = (self.re, self.im);
        let h = (0.5 * y).sin();
        Complex64::new(x.exp_m1() * y.cos() - 2.0 * h * h, x.exp() * y.sin())
    }
    fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

fn horner<T: Scalar>(coeffs: &[f64], s: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::from(0.0), |acc, &c| acc * s + T::from(c))
}

// Taylor coefficients in s (degree 4).
const CENTER_SERIES: [f64; 5] = [0.5, 0.5, -1.0 / 12.0, -0.25, 7.0 / 720.0];
const NEAR_SERIES: [f64; 5] = [1.5, -2.0, 2.0, -1.0, 13.0 / 60.0];
const FAR_SERIES: [f64; 5] = [-0.5, 0.0, 1.0 / 3.0, 0.0, -7.0 / 45.0];
const BIG_OUTER_SERIES: [f64; 5] = [-1.0 / 12.0, -1.0 / 3.0, -1.0 / 3.0, 4.0 / 9.0, 43.0 / 45.0];
const BIG_INNER_SERIES: [f64; 5] = [7.0 / 12.0, 1.0 / 3.0, -2.0 / 3.0, -1.0 / 9.0, 221.0 / 180.0];
const DIRECT_SERIES: [f64; 5] = [0.5, 1.0 / 6.0, -7.0 / 90.0, -8.0 / 945.0, 403.0 / 28350.0];

/// Powers of `q = e^{-s}` minus one, all derived from one `expm1` so that none
/// of them loses relative accuracy for small `s`.
struct ExpTerms<T> {
    q: T,
    /// `e^{-2s} - 1`
    m2: T,
    /// `e^{-4s} - 1`
    m4: T,
}

impl<T: Scalar> ExpTerms<T> {
    #[inline]
    fn new(s: T) -> Self {
        let m1 = (-s).expm1();
        let one = T::from(1.0);
        let two = T::from(2.0);
        let m2 = m1 * (m1 + two);
        Self {
            q: m1 + one,
            m2,
            m4: m2 * (m2 + two),
        }
    }

    /// `e^{-6s} - 1`
    #[inline]
    fn m6(&self) -> T {
        self.m2 * (self.m2 * self.m2 + self.m2 * 3.0 + T::from(3.0))
    }

    /// `e^{-8s} - 1`
    #[inline]
    fn m8(&self) -> T {
        self.m4 * (self.m4 + T::from(2.0))
    }
}

/// Centred two-point coefficient `2 s e^{3s} / (e^{4s} - 1)`.
fn center_coeff<T: Scalar>(s: T) -> T {
    if s.modulus() < SERIES_THRESHOLD {
        return horner(&CENTER_SERIES, s);
    }
    let e = ExpTerms::new(s);
    -(s * e.q * 2.0) / e.m4
}

/// One-sided two-point coefficients for cells `{j+1, j+2}`: (near cell, far cell).
/// The left substencil uses the mirror image.
fn one_sided_coeffs<T: Scalar>(s: T) -> (T, T) {
    if s.modulus() < SERIES_THRESHOLD {
        return (horner(&NEAR_SERIES, s), horner(&FAR_SERIES, s));
    }
    let e = ExpTerms::new(s);
    let q = e.q;
    let q2 = q * q;
    let near = -(s * q * 2.0) * (q2 * q2 + q2 * 2.0 - q + T::from(1.0)) / e.m4;
    let far = s * q2 * 2.0 / e.m4;
    (near, far)
}

/// Big-stencil coefficients (outer `C_{-1} = C_2`, inner `C_0 = C_1`).
fn big_coeffs<T: Scalar>(s: T) -> (T, T) {
    if s.modulus() < SERIES_THRESHOLD {
        return (horner(&BIG_OUTER_SERIES, s), horner(&BIG_INNER_SERIES, s));
    }
    let e = ExpTerms::new(s);
    let q = e.q;
    let m6 = e.m6();
    let outer = s * q * q * 2.0 * e.m2 / (e.m8() * m6);
    let inner = -(s * q * (q * q + T::from(1.0)) * 2.0) / m6 + outer;
    (outer, inner)
}

fn check_shape(s: f64) -> Result<()> {
    if s.is_finite() && s.abs() <= MAX_SHAPE {
        Ok(())
    } else {
        Err(Error::ShapeOutOfRange { s, limit: MAX_SHAPE })
    }
}

/// Coefficients `(c_0, c_1)` of the two-point reconstruction at `x_{j+1/2}`
/// on substencil `k`, applied to its two cells in left-to-right order.
pub fn two_point_coeffs(s: f64, k: Substencil) -> Result<[f64; 2]> {
    check_shape(s)?;
    Ok(two_point_unchecked(s, k))
}

#[inline]
fn two_point_unchecked(s: f64, k: Substencil) -> [f64; 2] {
    match k {
        Substencil::Center => {
            let c = center_coeff(s);
            [c, c]
        }
        Substencil::Right => {
            let (near, far) = one_sided_coeffs(s);
            [near, far]
        }
        Substencil::Left => {
            let (near, far) = one_sided_coeffs(s);
            [far, near]
        }
    }
}

/// Coefficients `(C_{-1}, C_0, C_1, C_2)` of the four-cell reconstruction at `x_{j+1/2}`.
pub fn four_point_coeffs(s: f64) -> Result<[f64; 4]> {
    check_shape(s)?;
    let (o, i) = big_coeffs(s);
    Ok([o, i, i, o])
}

/// Four-cell coefficients for a complex shape value.
///
/// For a conjugate pair of shapes the two reconstructions are conjugate, so the
/// real part of the coefficients is the average of both; it stays exact for real
/// data and keeps the cancellation of the leading error term.
pub fn four_point_coeffs_complex(s: Complex64) -> Result<[f64; 4]> {
    // clamping by rescaling can land a few ulps above the bound
    let m = s.norm_sqr().sqrt();
    if !m.is_finite() || m > MAX_SHAPE * (1.0 + 1e-12) {
        return Err(Error::ShapeOutOfRange {
            s: m,
            limit: MAX_SHAPE,
        });
    }
    if s.im == 0.0 {
        return four_point_coeffs(s.re);
    }
    let (o, i) = big_coeffs(s);
    Ok([o.re, i.re, i.re, o.re])
}

/// Coefficient multiplying `ubar_j + ubar_{j+1}` in the direct (cell-average
/// preserving) two-Gaussian reconstruction.
pub fn direct_coefficient(s: f64) -> Result<f64> {
    check_shape(s)?;
    if s.abs() < SERIES_THRESHOLD {
        return Ok(horner(&DIRECT_SERIES, s));
    }
    let c = if s > 0.0 {
        let a = s.sqrt();
        2.0 * a * (-0.25 * s).exp()
            / (PI.sqrt() * (libm::erf(0.5 * a) + libm::erf(1.5 * a)))
    } else {
        // lambda = i b: erf(i b x) = i erfi(b x)
        let b = (-s).sqrt();
        2.0 * b * (0.25 * b * b).exp() / (PI.sqrt() * (erfi(0.5 * b) + erfi(1.5 * b)))
    };
    Ok(c)
}

/// Interface value of the direct two-Gaussian reconstruction.
pub fn reconstruct_direct_two_point(u_j: f64, u_jp1: f64, s: f64) -> Result<f64> {
    Ok(direct_coefficient(s)? * (u_j + u_jp1))
}

/// Imaginary error function by its power series; adequate for `|x| <= 2`.
pub fn erfi(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^{2n+1} / n!
    let mut sum = x;
    for n in 1..60 {
        term *= x2 / n as f64;
        let t = term / (2 * n + 1) as f64;
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / PI.sqrt() * sum
}

/// Accuracy of the derivative estimates feeding the global shape parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeAccuracy {
    /// Cell-centred differences, O(dx) at the interface.
    First,
    /// Interface-centred differences, O(dx^2).
    Second,
}

impl DerivativeAccuracy {
    pub fn from_order(p: u8) -> Result<Self> {
        match p {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(Error::InvalidConfig(format!("p must be 1 or 2, got {p}"))),
        }
    }

    pub fn order(self) -> u8 {
        match self {
            Self::First => 1,
            Self::Second => 2,
        }
    }
}

/// Estimates of `u` and its derivatives at `x_{j+1/2}` from cell averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceDerivatives {
    pub u: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

/// Derivative estimates from the four cells `j-1..=j+2`.
///
/// `u` and `u'` are fourth-order, `u''` and `u'''` second-order accurate.
pub fn interface_derivatives4(w: &[f64; 4], dx: f64) -> InterfaceDerivatives {
    let h2 = dx * dx;
    InterfaceDerivatives {
        u: (-w[0] + 7.0 * w[1] + 7.0 * w[2] - w[3]) / 12.0,
        d1: (w[0] - 15.0 * w[1] + 15.0 * w[2] - w[3]) / (12.0 * dx),
        d2: (w[0] - w[1] - w[2] + w[3]) / (2.0 * h2),
        d3: (-w[0] + 3.0 * w[1] - 3.0 * w[2] + w[3]) / (h2 * dx),
        d4: 0.0,
    }
}

/// Derivative estimates from the six cells `j-2..=j+3`.
///
/// `u`, `u'` and `u''` always come from the inner four cells. The accuracy knob
/// only selects the fourth derivative: the symmetric six-cell difference
/// (second order at the interface) or the five-cell difference centred on cell
/// `j` (first order at the interface).
pub fn interface_derivatives6(w: &[f64; 6], dx: f64, p: DerivativeAccuracy) -> InterfaceDerivatives {
    let inner = [w[1], w[2], w[3], w[4]];
    let mut d = interface_derivatives4(&inner, dx);
    let h2 = dx * dx;
    match p {
        DerivativeAccuracy::Second => {
            d.d4 = (w[0] - 3.0 * w[1] + 2.0 * w[2] + 2.0 * w[3] - 3.0 * w[4] + w[5]) / (2.0 * h2 * h2);
        }
        DerivativeAccuracy::First => {
            d.d4 = (w[0] - 4.0 * w[1] + 6.0 * w[2] - 4.0 * w[3] + w[4]) / (h2 * h2);
        }
    }
    d
}

/// A real shape value after clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub s: f64,
    pub clamped: bool,
}

fn shifted(u: f64, delta_mag: f64) -> f64 {
    u + sign_of(u) * delta_mag
}

/// Local shape `s = -(u''/(6u)) dx^2` from the cells `j-1..=j+2`; makes every
/// two-point substencil reconstruction fourth-order.
pub fn shape_local(w: &[f64; 4], dx: f64, delta_mag: f64, s_max: f64) -> Shape {
    let d = interface_derivatives4(w, dx);
    let s = -d.d2 / (6.0 * shifted(d.u, delta_mag)) * dx * dx;
    let (s, clamped) = clamp_flagged(s, s_max);
    Shape { s, clamped }
}

/// Shape for the direct two-Gaussian reconstruction: `s = -(u''/(2u)) dx^2`.
pub fn shape_direct(w: &[f64; 4], dx: f64, delta_mag: f64, s_max: f64) -> Shape {
    let d = interface_derivatives4(w, dx);
    let s = -d.d2 / (2.0 * shifted(d.u, delta_mag)) * dx * dx;
    let (s, clamped) = clamp_flagged(s, s_max);
    Shape { s, clamped }
}

/// Shape lifting the three-point reconstruction to fourth order:
/// `s = -(u'''/(12u')) dx^2`.
pub fn shape_odd3(w: &[f64; 4], dx: f64, delta_mag: f64, s_max: f64) -> Shape {
    let d = interface_derivatives4(w, dx);
    let s = -d.d3 / (12.0 * shifted(d.d1, delta_mag)) * dx * dx;
    let (s, clamped) = clamp_flagged(s, s_max);
    Shape { s, clamped }
}

/// Branch of the quadratic for the global shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootChoice {
    /// `(-u''/3 - sqrt(disc)) / (2u)`
    Minus,
    /// `(-u''/3 + sqrt(disc)) / (2u)`
    Plus,
    /// The root of smaller magnitude; stays bounded as `u -> 0`.
    Smaller,
}

/// What to do when the quadratic for the global shape has no real root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscriminantPolicy {
    /// Use the complex-conjugate root pair and take the real part of the reconstruction.
    ComplexPair,
    /// Use the two-point optimum `-(u''/(6u)) dx^2`.
    LocalFormula,
}

/// How a reconstruction uses a shape that hit the clamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClampResponse {
    /// Keep `sign(s) s_max`.
    Saturate,
    /// Drop to the polynomial limit `s = 0`. A saturated shape means the data
    /// are not resolved, and the coefficients then stop reproducing constants.
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeOptions {
    pub s_max: f64,
    pub accuracy: DerivativeAccuracy,
    pub root: RootChoice,
    pub negative_discriminant: DiscriminantPolicy,
    pub on_clamp: ClampResponse,
}

impl Default for ShapeOptions {
    fn default() -> Self {
        Self {
            s_max: MAX_SHAPE,
            accuracy: DerivativeAccuracy::Second,
            root: RootChoice::Smaller,
            negative_discriminant: DiscriminantPolicy::ComplexPair,
            on_clamp: ClampResponse::Polynomial,
        }
    }
}

impl ShapeOptions {
    /// The shape a reconstruction should use for a clamped or unclamped value.
    #[inline]
    pub fn effective<T: Default>(&self, s: T, clamped: bool) -> T {
        if clamped && self.on_clamp == ClampResponse::Polynomial {
            T::default()
        } else {
            s
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalShape {
    pub s: Complex64,
    pub clamped: bool,
    pub discriminant: f64,
}

/// Global shape removing the `dx^4` error term of the four-cell reconstruction.
///
/// Solves `2u y^2 + (2/3) u'' y + u''''/30 = 0` for `y = lambda^2`, i.e.
/// `y = (-u''/3 +- sqrt(u''^2/9 - u u''''/15)) / (2u)`, with `u` shifted away
/// from zero by a sign-matched `delta_mag`.
pub fn shape_global(w: &[f64; 6], dx: f64, delta_mag: f64, opts: &ShapeOptions) -> GlobalShape {
    let d = interface_derivatives6(w, dx, opts.accuracy);
    let u = shifted(d.u, delta_mag);
    let b = d.d2 / 3.0;
    let disc = b * b - u * d.d4 / 15.0;
    let h2 = dx * dx;
    let y = if disc >= 0.0 {
        let root = disc.sqrt();
        // Stable pair: big = q / (2u), small = u'''' / (30 q).
        let q = -(b + sign_of(b) * root);
        let big = q / (2.0 * u);
        let small = if q != 0.0 { d.d4 / (30.0 * q) } else { 0.0 };
        let y = match (opts.root, b >= 0.0) {
            (RootChoice::Smaller, _) => small,
            (RootChoice::Minus, true) | (RootChoice::Plus, false) => big,
            (RootChoice::Minus, false) | (RootChoice::Plus, true) => small,
        };
        Complex64::new(y, 0.0)
    } else {
        match opts.negative_discriminant {
            DiscriminantPolicy::ComplexPair => Complex64::new(-b, (-disc).sqrt()) / (2.0 * u),
            DiscriminantPolicy::LocalFormula => Complex64::new(-d.d2 / (6.0 * u), 0.0),
        }
    };
    let (s, clamped) = clamp_complex(y * h2, opts.s_max);
    GlobalShape {
        s,
        clamped,
        discriminant: disc,
    }
}

/// Local and global shapes for one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub s_local: f64,
    pub s_global: Complex64,
    pub local_clamped: bool,
    pub global_clamped: bool,
    pub root_choice: RootChoice,
}

impl ShapeParams {
    /// Both shapes from the six cells `j-2..=j+3` around `x_{j+1/2}`.
    pub fn estimate(w: &[f64; 6], dx: f64, delta_mag: f64, opts: &ShapeOptions) -> Self {
        let local = shape_local(&[w[1], w[2], w[3], w[4]], dx, delta_mag, opts.s_max);
        let global = shape_global(w, dx, delta_mag, opts);
        Self {
            s_local: opts.effective(local.s, local.clamped),
            s_global: opts.effective(global.s, global.clamped),
            local_clamped: local.clamped,
            global_clamped: global.clamped,
            root_choice: opts.root,
        }
    }

    pub fn zero() -> Self {
        Self {
            s_local: 0.0,
            s_global: Complex64::new(0.0, 0.0),
            local_clamped: false,
            global_clamped: false,
            root_choice: RootChoice::Smaller,
        }
    }
}

/// Substencil and big-stencil coefficients for one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilCoeffs {
    /// `c_sub[k][l]` multiplies cell `j + k - 1 + l`.
    pub c_sub: [[f64; 2]; 3],
    /// Multiplies cells `j-1..=j+2`.
    pub c_big: [f64; 4],
}

impl StencilCoeffs {
    pub fn new(shapes: &ShapeParams) -> Result<Self> {
        check_shape(shapes.s_local)?;
        let c_big = four_point_coeffs_complex(shapes.s_global)?;
        let c = center_coeff(shapes.s_local);
        let (near, far) = one_sided_coeffs(shapes.s_local);
        Ok(Self {
            c_sub: [[far, near], [c, c], [near, far]],
            c_big,
        })
    }

    /// Substencil value `u^{(k)}` from the cells `j-1..=j+2`.
    #[inline]
    pub fn substencil_value(&self, k: usize, w: &[f64; 4]) -> f64 {
        self.c_sub[k][0] * w[k] + self.c_sub[k][1] * w[k + 1]
    }

    #[inline]
    pub fn big_value(&self, w: &[f64; 4]) -> f64 {
        self.c_big.iter().zip(w).map(|(c, u)| c * u).sum()
    }
}
