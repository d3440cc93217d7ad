//! Troubled-cell detection for the hybrid fixed-stencil / WENO scheme.

use crate::grid::{BoundaryKind, FieldSet, GHOST};

pub const THETA: f64 = 1.5;
pub const KAPPA: f64 = 5.0;
pub const EPS_HYBRID: f64 = 1e-10;
pub const BUFFER_CELLS: usize = 4;

/// Scaling of the difference operators in the relative smoothness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DifferenceScaling {
    /// Differences of the data, so first and second differences share units.
    Undivided,
    /// Derivative approximations (`/dx` and `/dx^2`).
    Divided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    pub theta: f64,
    pub kappa: f64,
    pub eps: f64,
    pub buffer: usize,
    pub scaling: DifferenceScaling,
}

impl Default for HybridParams {
    fn default() -> Self {
        Self {
            theta: THETA,
            kappa: KAPPA,
            eps: EPS_HYBRID,
            buffer: BUFFER_CELLS,
            scaling: DifferenceScaling::Undivided,
        }
    }
}

/// Per-cell dispatch: `mask[i] == true` selects WENO in cell `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HybridFlags {
    pub mask: Vec<bool>,
    /// Cells over the tolerance before the buffer was added.
    pub n_detected: usize,
    pub n_flagged: usize,
}

impl HybridFlags {
    pub fn none(n_cells: usize) -> Self {
        Self {
            mask: vec![false; n_cells],
            ..Self::default()
        }
    }

    pub fn all(n_cells: usize) -> Self {
        Self {
            mask: vec![true; n_cells],
            n_detected: n_cells,
            n_flagged: n_cells,
        }
    }

    pub fn fraction(&self) -> f64 {
        if self.mask.is_empty() {
            0.0
        } else {
            self.n_flagged as f64 / self.mask.len() as f64
        }
    }

    /// Cell-wise OR with another flag set of the same length.
    pub fn union(&mut self, other: &HybridFlags) {
        debug_assert_eq!(self.mask.len(), other.mask.len());
        for (a, b) in self.mask.iter_mut().zip(&other.mask) {
            *a |= *b;
        }
        self.n_detected = self.n_detected.max(other.n_detected);
        self.n_flagged = self.mask.iter().filter(|&&m| m).count();
    }
}

/// Relative smoothness of one ghost-padded row from second-order central and
/// one-sided differences. Needs `GHOST >= 3` filled ghost cells.
///
/// With divided differences the first and second derivative terms scale as
/// `1/dx` and `1/dx^2`, so on resolved smooth data the ratio drifts with the
/// grid (about `1/(1 + k^2 dx)` at inflection points of `sin(k x)`).
pub fn relative_smoothness(row: &[f64], dx: f64, scaling: DifferenceScaling, eps: f64) -> Vec<f64> {
    let n = row.len() - 2 * GHOST;
    let u = |i: isize| row[(i + GHOST as isize) as usize];
    let (h2, hh) = match scaling {
        DifferenceScaling::Undivided => (2.0, 1.0),
        DifferenceScaling::Divided => (2.0 * dx, dx * dx),
    };
    let d1 = |i: isize| (u(i + 1) - u(i - 1)) / h2;
    let d2 = |i: isize| (u(i + 1) - 2.0 * u(i) + u(i - 1)) / hh;
    let back = |i: isize| (3.0 * u(i) - 4.0 * u(i - 1) + u(i - 2)) / h2;
    let fwd = |i: isize| (-3.0 * u(i) + 4.0 * u(i + 1) - u(i + 2)) / h2;
    (0..n as isize)
        .map(|i| {
            let num = 2.0 * (d1(i).abs() + d2(i).abs());
            let mut den = back(i - 1).abs() + d2(i - 1).abs() + fwd(i + 1).abs() + d2(i + 1).abs();
            if den == 0.0 {
                den = eps;
            }
            num / den
        })
        .collect()
}

/// Thresholds `r` against `min(theta, kappa (r_min + eps)/(r_max + eps))` and
/// adds `buffer` cells on each side of every detected cell.
pub fn hybrid_flags(r: &[f64], params: &HybridParams, boundary: BoundaryKind) -> HybridFlags {
    let n = r.len();
    if n == 0 {
        return HybridFlags::default();
    }
    let (rmin, rmax) = r
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let tol = params
        .theta
        .min(params.kappa * (rmin + params.eps) / (rmax + params.eps));
    let detected: Vec<bool> = r.iter().map(|&x| x >= tol).collect();
    let mask = dilate(&detected, params.buffer, boundary);
    HybridFlags {
        n_detected: detected.iter().filter(|&&m| m).count(),
        n_flagged: mask.iter().filter(|&&m| m).count(),
        mask,
    }
}

/// Grows a mask by `radius` cells, wrapping on periodic grids and clipping otherwise.
pub fn dilate(mask: &[bool], radius: usize, boundary: BoundaryKind) -> Vec<bool> {
    let n = mask.len();
    let mut out = vec![false; n];
    for i in (0..n).filter(|&i| mask[i]) {
        let r = radius as isize;
        for o in -r..=r {
            let j = i as isize + o;
            match boundary {
                BoundaryKind::Periodic => out[j.rem_euclid(n as isize) as usize] = true,
                BoundaryKind::Outflow => {
                    if (0..n as isize).contains(&j) {
                        out[j as usize] = true;
                    }
                }
            }
        }
    }
    out
}

/// Flags for a whole field set; a cell flagged in any component is flagged.
pub fn field_flags(fields: &FieldSet, dx: f64, params: &HybridParams, boundary: BoundaryKind) -> HybridFlags {
    let mut flags = HybridFlags::none(fields.n_cells());
    for c in 0..fields.n_comp() {
        let r = relative_smoothness(fields.row(c), dx, params.scaling, params.eps);
        flags.union(&hybrid_flags(&r, params, boundary));
    }
    flags
}
