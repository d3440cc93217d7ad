//! Benchmark problems: initial data, boundary kinds, final times and exact solutions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{init_cell_averages, BoundaryKind, FieldSet, Grid, State};
use crate::physics::EulerState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Euler,
    Pressureless,
}

impl System {
    pub fn n_comp(self) -> usize {
        match self {
            System::Euler => 3,
            System::Pressureless => 2,
        }
    }

    pub fn component_names(self) -> &'static [&'static str] {
        match self {
            System::Euler => &["rho", "mom", "energy"],
            System::Pressureless => &["rho", "mom"],
        }
    }
}

/// Primitive Euler triple `(rho, u, p)`.
pub type Primitive = (f64, f64, f64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    SmoothAdvection,
    /// Euler Riemann data split at `x0` (left state for `x < x0`).
    Riemann { left: Primitive, right: Primitive, x0: f64 },
    /// Shock meeting the entropy wave `1 + eps sin(k x)`.
    ShuOsher { k: f64, eps: f64 },
    TitarevToro,
    PressurelessSmooth,
    BlastWave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub id: &'static str,
    pub system: System,
    pub kind: ProblemKind,
    pub x_lo: f64,
    pub x_hi: f64,
    pub boundary: BoundaryKind,
    pub t_final: f64,
    pub reference_cells: usize,
}

fn euler(p: Primitive) -> State {
    EulerState::from_primitive(p.0, p.1, p.2).conserved()
}

/// Ids accepted by [`problem_by_id`].
pub const PROBLEM_IDS: [&str; 7] = [
    "smooth_advection",
    "lax",
    "sod",
    "shu_osher",
    "titarev_toro",
    "pressureless_smooth",
    "blast_wave",
];

pub fn problem_by_id(id: &str) -> Result<ProblemSpec> {
    Ok(match id {
        "smooth_advection" => smooth_advection(),
        "lax" => lax_problem(),
        "sod" => sod_problem(),
        "shu_osher" => shu_osher(5.0, 0.2),
        "titarev_toro" => titarev_toro(),
        "pressureless_smooth" => pressureless_smooth(),
        "blast_wave" => blast_wave_pressureless(),
        _ => {
            return Err(Error::Unknown {
                kind: "problem",
                name: id.to_string(),
            })
        }
    })
}

pub fn smooth_advection() -> ProblemSpec {
    ProblemSpec {
        id: "smooth_advection",
        system: System::Euler,
        kind: ProblemKind::SmoothAdvection,
        x_lo: 0.0,
        x_hi: 1.0,
        boundary: BoundaryKind::Periodic,
        t_final: 1.0,
        reference_cells: 80,
    }
}

pub fn lax_problem() -> ProblemSpec {
    ProblemSpec {
        id: "lax",
        system: System::Euler,
        kind: ProblemKind::Riemann {
            left: (0.445, 0.698, 3.528),
            right: (0.5, 0.0, 0.571),
            x0: 0.0,
        },
        x_lo: -5.0,
        x_hi: 5.0,
        boundary: BoundaryKind::Outflow,
        t_final: 1.3,
        reference_cells: 200,
    }
}

pub fn sod_problem() -> ProblemSpec {
    ProblemSpec {
        id: "sod",
        system: System::Euler,
        kind: ProblemKind::Riemann {
            left: (1.0, 0.75, 1.0),
            right: (0.125, 0.0, 0.1),
            x0: 0.5,
        },
        x_lo: 0.0,
        x_hi: 1.0,
        boundary: BoundaryKind::Outflow,
        t_final: 0.2,
        reference_cells: 100,
    }
}

pub fn shu_osher(k: f64, eps: f64) -> ProblemSpec {
    ProblemSpec {
        id: "shu_osher",
        system: System::Euler,
        kind: ProblemKind::ShuOsher { k, eps },
        x_lo: -5.0,
        x_hi: 5.0,
        boundary: BoundaryKind::Outflow,
        t_final: 1.8,
        reference_cells: 300,
    }
}

pub fn titarev_toro() -> ProblemSpec {
    ProblemSpec {
        id: "titarev_toro",
        system: System::Euler,
        kind: ProblemKind::TitarevToro,
        x_lo: -5.0,
        x_hi: 5.0,
        boundary: BoundaryKind::Outflow,
        t_final: 5.0,
        reference_cells: 2000,
    }
}

pub fn pressureless_smooth() -> ProblemSpec {
    ProblemSpec {
        id: "pressureless_smooth",
        system: System::Pressureless,
        kind: ProblemKind::PressurelessSmooth,
        x_lo: 0.0,
        x_hi: 2.0 * PI,
        boundary: BoundaryKind::Periodic,
        t_final: 0.1,
        reference_cells: 80,
    }
}

pub fn blast_wave_pressureless() -> ProblemSpec {
    ProblemSpec {
        id: "blast_wave",
        system: System::Pressureless,
        kind: ProblemKind::BlastWave,
        x_lo: -0.5,
        x_hi: 1.0,
        boundary: BoundaryKind::Outflow,
        t_final: 0.3,
        reference_cells: 120,
    }
}

/// Foot point `x0` of the characteristic through `(x, t)` for the smooth
/// pressureless data: `x0 + t (sin x0 + 2) = x`. Newton steps are kept inside
/// a shrinking bracket and replaced by bisection when they leave it.
pub fn pressureless_foot(x: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(x);
    }
    let f = |y: f64| y + t * (y.sin() + 2.0) - x;
    let (mut lo, mut hi) = (x - 3.0 * t, x - t);
    let mut y = x - 2.0 * t;
    for _ in 0..100 {
        let fy = f(y);
        if fy.abs() <= 1e-15 * (1.0 + x.abs()) {
            return Ok(y);
        }
        if fy > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let d = 1.0 + t * y.cos();
        let mut next = y - fy / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 4.0 * f64::EPSILON * (1.0 + y.abs()) {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::NoConvergence { x, iterations: 100 })
}

impl ProblemSpec {
    pub fn initial(&self, x: f64) -> State {
        match self.kind {
            ProblemKind::SmoothAdvection => euler((1.0 + 0.5 * (4.0 * PI * x).sin(), 1.0, 1.0)),
            ProblemKind::Riemann { left, right, x0 } => euler(if x < x0 { left } else { right }),
            ProblemKind::ShuOsher { k, eps } => {
                if x < -4.0 {
                    euler((3.857143, 2.629369, 10.33333))
                } else {
                    euler((1.0 + eps * (k * x).sin(), 0.0, 1.0))
                }
            }
            ProblemKind::TitarevToro => {
                if x < -4.5 {
                    euler((1.515695, 0.523346, 1.80500))
                } else {
                    euler((1.0 + 0.1 * (20.0 * PI * x).sin(), 0.0, 1.0))
                }
            }
            ProblemKind::PressurelessSmooth => {
                let v = x.sin() + 2.0;
                [v, v * v, 0.0]
            }
            ProblemKind::BlastWave => {
                if x < 0.0 {
                    [1.0, 1.0, 0.0]
                } else {
                    [0.25, 0.0, 0.0]
                }
            }
        }
    }

    pub fn has_exact(&self) -> bool {
        matches!(self.kind, ProblemKind::SmoothAdvection | ProblemKind::PressurelessSmooth)
    }

    /// Pointwise exact solution for the smooth problems.
    pub fn exact(&self, x: f64, t: f64) -> Result<State> {
        match self.kind {
            ProblemKind::SmoothAdvection => Ok(euler((1.0 + 0.5 * (4.0 * PI * (x - t)).sin(), 1.0, 1.0))),
            ProblemKind::PressurelessSmooth => {
                let x0 = pressureless_foot(x, t)?;
                let u = x0.sin() + 2.0;
                let rho = u / (1.0 + t * x0.cos());
                Ok([rho, rho * u, 0.0])
            }
            _ => Err(Error::NoExactSolution(self.id.to_string())),
        }
    }

    pub fn grid(&self, n_cells: usize) -> Result<Grid> {
        Grid::new(self.x_lo, self.x_hi, n_cells, self.boundary)
    }

    pub fn initial_fields(&self, grid: &Grid, quad_order: usize) -> Result<FieldSet> {
        init_cell_averages(|x| self.initial(x), self.system.n_comp(), grid, quad_order)
    }

    /// Cell averages of the exact solution at time `t`.
    pub fn exact_fields(&self, grid: &Grid, t: f64, quad_order: usize) -> Result<FieldSet> {
        if !self.has_exact() {
            return Err(Error::NoExactSolution(self.id.to_string()));
        }
        // a failed root solve is reported instead of the NaN it leaves behind
        let failure = std::cell::RefCell::new(None);
        let f = init_cell_averages(
            |x| match self.exact(x, t) {
                Ok(s) => s,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    [f64::NAN; 3]
                }
            },
            self.system.n_comp(),
            grid,
            quad_order,
        );
        match failure.into_inner() {
            Some(e) => Err(e),
            None => f,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_covers_all_ids() {
        for id in PROBLEM_IDS {
            assert_eq!(problem_by_id(id).unwrap().id, id);
        }
        assert!(problem_by_id("woodward_colella").unwrap_err().is_usage());
    }

    #[test]
    fn exact_matches_initial_at_zero() {
        for p in [smooth_advection(), pressureless_smooth()] {
            for i in 0..50 {
                let x = p.x_lo + (p.x_hi - p.x_lo) * i as f64 / 50.0;
                let (a, b) = (p.initial(x), p.exact(x, 0.0).unwrap());
                for c in 0..p.system.n_comp() {
                    assert!((a[c] - b[c]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn advection_exact_is_periodic_in_time() {
        let p = smooth_advection();
        for x in [0.0, 0.13, 0.77] {
            let a = p.exact(x, 0.0).unwrap()[0];
            let b = p.exact(x, 1.0).unwrap()[0];
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn foot_point_residual_and_monotonicity() {
        let t = 0.1;
        let mut last = f64::NEG_INFINITY;
        for i in 0..=2000 {
            let x = 2.0 * PI * i as f64 / 2000.0;
            let y = pressureless_foot(x, t).unwrap();
            assert!((y + t * (y.sin() + 2.0) - x).abs() <= 1e-13);
            assert!(y > last);
            last = y;
        }
    }

    #[test]
    fn foot_point_near_breaking_time() {
        let y = pressureless_foot(1.0, 0.95).unwrap();
        assert!((y + 0.95 * (y.sin() + 2.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn riemann_states_as_printed() {
        let p = sod_problem();
        assert_eq!(p.initial(0.25), euler((1.0, 0.75, 1.0)));
        assert_eq!(p.initial(0.75), euler((0.125, 0.0, 0.1)));
        let s = shu_osher(5.0, 0.2);
        assert_eq!(s.initial(-4.5)[0], 3.857143);
        assert_eq!(s.initial(0.1)[0], 1.0 + 0.2 * 0.5f64.sin());
        let k = shu_osher(3.0, 0.5);
        assert_eq!(k.initial(1.0)[0], 1.0 + 0.5 * 3.0f64.sin());
        let b = blast_wave_pressureless();
        assert_eq!((b.initial(-0.1), b.initial(0.1)), ([1.0, 1.0, 0.0], [0.25, 0.0, 0.0]));
    }

    #[test]
    fn no_exact_for_shock_problems() {
        assert!(sod_problem().exact(0.1, 0.1).is_err());
        let g = sod_problem().grid(10).unwrap();
        assert!(sod_problem().exact_fields(&g, 0.1, 5).unwrap_err().is_usage());
    }
}
