//! Semi-discrete finite-volume operator and SSP-RK3 time stepping.

use crate::config::{FluxId, RunConfig, SchemeId};
use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, FieldSet, Grid, MAX_COMP};
use crate::hybrid::{field_flags, HybridFlags, HybridParams};
use crate::physics::{
    godunov_pressureless_flux, hllc_flux, lax_friedrichs_flux, max_wave_speed_euler,
    max_wave_speed_pressureless, CharBasis, EulerState, HllcWaveSpeeds, PressurelessState,
};
use crate::problems::{ProblemSpec, System};
use crate::weno::{self, WenoParams};
use crate::weno_js;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reconstruction {
    WenoJs5 { eps: f64 },
    Rbf(WenoParams),
}

/// Spatial discretization of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    pub system: System,
    pub recon: Reconstruction,
    pub flux: FluxId,
    pub hllc_speeds: HllcWaveSpeeds,
    /// `None` runs the nonlinear reconstruction in every cell.
    pub hybrid: Option<HybridParams>,
    /// Reconstruct Euler data in Roe-averaged characteristic variables at
    /// interfaces that use the nonlinear reconstruction.
    pub characteristic: bool,
    pub boundary: BoundaryKind,
    /// Bound-preserving edge limiter, pressureless system only.
    pub limiter: Option<VelocityBounds>,
    /// Replace inadmissible reconstructed Euler edge states by the cell average.
    pub admissibility_fallback: bool,
}

/// Relative widening of the velocity range. Runge-Kutta stage states are not
/// exact solutions and overshoot the exact range by `O(dt^2)`; clipping them
/// costs accuracy at velocity extrema, while the widened bound still stops
/// the `m / rho` runaway next to delta shocks.
pub const VELOCITY_SLACK: f64 = 0.1;

/// Velocity range of the initial data, widened by [`VELOCITY_SLACK`].
/// Pressureless velocities obey a maximum principle, so reconstructed edge
/// states are kept inside `{rho >= 0, v_min rho <= m <= v_max rho}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityBounds {
    pub v_min: f64,
    pub v_max: f64,
}

impl VelocityBounds {
    /// A uniform sample of the initial velocity is refined twice around its
    /// extreme points before widening.
    pub fn from_problem(problem: &ProblemSpec) -> Self {
        const SAMPLES: usize = 4096;
        let v = |x: f64| {
            let u = problem.initial(x);
            PressurelessState { rho: u[0], mom: u[1] }.velocity()
        };
        let extreme = |sign: f64| {
            let (mut lo, mut hi) = (problem.x_lo, problem.x_hi);
            let mut best = f64::NEG_INFINITY;
            for _ in 0..3 {
                let h = (hi - lo) / SAMPLES as f64;
                let mut arg = lo;
                for i in 0..=SAMPLES {
                    let x = lo + i as f64 * h;
                    let f = sign * v(x);
                    if f > best {
                        best = f;
                        arg = x;
                    }
                }
                lo = (arg - h).max(problem.x_lo);
                hi = (arg + h).min(problem.x_hi);
            }
            sign * best
        };
        let (lo, hi) = (extreme(-1.0), extreme(1.0));
        let slack = VELOCITY_SLACK * (hi - lo);
        Self {
            v_min: lo - slack,
            v_max: hi + slack,
        }
    }

    /// Scales both edge states of a cell toward its average just enough to
    /// make them admissible. An inadmissible average collapses the edges onto it.
    pub fn limit(&self, mean: [f64; 2], edges: &mut [[f64; 2]; 2]) {
        // the admissible set is {g(U) >= 0} for three linear g
        let constraints = [
            |u: [f64; 2], _: &Self| u[0],
            |u: [f64; 2], b: &Self| b.v_max * u[0] - u[1],
            |u: [f64; 2], b: &Self| u[1] - b.v_min * u[0],
        ];
        let mut theta: f64 = 1.0;
        for g in constraints {
            let gm = g(mean, self);
            for e in edges.iter() {
                let ge = g(*e, self);
                if ge < 0.0 {
                    theta = theta.min(if gm > 0.0 { gm / (gm - ge) } else { 0.0 });
                }
            }
        }
        if theta < 1.0 {
            for e in edges.iter_mut() {
                for c in 0..2 {
                    e[c] = mean[c] + theta * (e[c] - mean[c]);
                }
            }
        }
    }
}

impl Scheme {
    pub fn from_config(cfg: &RunConfig, problem: &ProblemSpec) -> Result<Self> {
        let flux = match (cfg.flux, problem.system) {
            (None, System::Euler) => FluxId::Hllc,
            (None, System::Pressureless) => FluxId::GodunovPressureless,
            (Some(f @ (FluxId::Hllc | FluxId::LaxFriedrichs)), System::Euler) => f,
            (Some(FluxId::GodunovPressureless), System::Pressureless) => FluxId::GodunovPressureless,
            (Some(f), s) => {
                return Err(Error::InvalidConfig(format!(
                    "flux `{f}` does not apply to the {s:?} system of `{}`",
                    problem.id
                )))
            }
        };
        let recon = match cfg.scheme {
            SchemeId::WenoJs5 => Reconstruction::WenoJs5 { eps: weno_js::EPS_JS },
            _ => Reconstruction::Rbf(cfg.weno_params()),
        };
        Ok(Self {
            system: problem.system,
            recon,
            flux,
            hllc_speeds: cfg.hllc_speeds,
            hybrid: cfg.hybrid_active().then_some(cfg.hybrid_params),
            characteristic: cfg.characteristic,
            boundary: problem.boundary,
            limiter: (cfg.bound_limiter && problem.system == System::Pressureless)
                .then(|| VelocityBounds::from_problem(problem)),
            admissibility_fallback: cfg.admissibility_fallback && problem.system == System::Euler,
        })
    }

    pub fn n_comp(&self) -> usize {
        self.system.n_comp()
    }
}

/// Largest characteristic speed over the interior cells.
pub fn max_speed(fields: &FieldSet, system: System) -> Result<f64> {
    match system {
        System::Euler => max_wave_speed_euler(fields),
        System::Pressureless => Ok(max_wave_speed_pressureless(fields)),
    }
}

fn scalar_pair(w: &[f64; 6], recon: &Reconstruction, use_weno: bool, dx: f64) -> Result<(f64, f64)> {
    match recon {
        Reconstruction::WenoJs5 { eps } => Ok(weno_js::reconstruct_pair(w, *eps)),
        Reconstruction::Rbf(p) if use_weno => weno::reconstruct_interface_pair(w, dx, p),
        Reconstruction::Rbf(p) => weno::reconstruct_fixed_pair(w, dx, p),
    }
}

type Pair = ([f64; MAX_COMP], [f64; MAX_COMP]);

/// `(u^-, u^+)` at interface `k` (left edge of cell `k`, `0 <= k <= n`).
pub fn reconstruct_interface(fields: &FieldSet, k: usize, scheme: &Scheme, use_weno: bool, dx: f64) -> Result<Pair> {
    let nc = scheme.n_comp();
    let base = k as isize - 3;
    let mut window = [[0.0; 6]; MAX_COMP];
    for (c, w) in window.iter_mut().enumerate().take(nc) {
        for (m, v) in w.iter_mut().enumerate() {
            *v = fields.get(c, base + m as isize);
        }
    }
    let mut minus = [0.0; MAX_COMP];
    let mut plus = [0.0; MAX_COMP];
    // the fixed stencil is linear once its shape is set and runs componentwise
    if scheme.system == System::Euler && scheme.characteristic && use_weno {
        let cell = |i: isize| {
            EulerState::from_slice(&[fields.get(0, i), fields.get(1, i), fields.get(2, i)])
        };
        let basis = CharBasis::roe(&cell(k as isize - 1), &cell(k as isize))?;
        let mut proj = [[0.0; 6]; 3];
        for m in 0..6 {
            let w = basis.project(&[window[0][m], window[1][m], window[2][m]]);
            for c in 0..3 {
                proj[c][m] = w[c];
            }
        }
        let mut wm = [0.0; 3];
        let mut wp = [0.0; 3];
        for c in 0..3 {
            (wm[c], wp[c]) = scalar_pair(&proj[c], &scheme.recon, use_weno, dx)?;
        }
        minus = basis.unproject(&wm);
        plus = basis.unproject(&wp);
    } else {
        for c in 0..nc {
            (minus[c], plus[c]) = scalar_pair(&window[c], &scheme.recon, use_weno, dx)?;
        }
    }
    Ok((minus, plus))
}

fn neighbor_flag(flags: &HybridFlags, i: isize, boundary: BoundaryKind) -> bool {
    let n = flags.mask.len() as isize;
    let j = match boundary {
        BoundaryKind::Periodic => i.rem_euclid(n),
        BoundaryKind::Outflow => i.clamp(0, n - 1),
    };
    flags.mask[j as usize]
}

/// Writes `-(F_{j+1/2} - F_{j-1/2})/dx` into the interior of `out` and returns
/// the hybrid flags used. Ghosts of `fields` must be filled.
pub fn rhs_into(fields: &FieldSet, grid: &Grid, scheme: &Scheme, out: &mut FieldSet) -> Result<HybridFlags> {
    let n = grid.n_cells;
    let dx = grid.dx;
    let nc = scheme.n_comp();
    let flags = match &scheme.hybrid {
        Some(h) => field_flags(fields, dx, h, scheme.boundary),
        None => HybridFlags::all(n),
    };
    let alpha = match scheme.flux {
        FluxId::LaxFriedrichs => max_wave_speed_euler(fields)?,
        _ => 0.0,
    };
    let mut edges = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let use_weno = scheme.hybrid.is_none()
            || neighbor_flag(&flags, k as isize - 1, scheme.boundary)
            || neighbor_flag(&flags, k as isize, scheme.boundary);
        edges.push(reconstruct_interface(fields, k, scheme, use_weno, dx).map_err(|e| e.at_interface(k))?);
    }
    if let Some(bounds) = &scheme.limiter {
        for j in 0..n {
            let mean = [fields.get(0, j as isize), fields.get(1, j as isize)];
            let mut cell = [[edges[j].1[0], edges[j].1[1]], [edges[j + 1].0[0], edges[j + 1].0[1]]];
            bounds.limit(mean, &mut cell);
            edges[j].1[..2].copy_from_slice(&cell[0]);
            edges[j + 1].0[..2].copy_from_slice(&cell[1]);
        }
    }
    if scheme.admissibility_fallback {
        // a cell with an inadmissible edge drops to first order on both edges
        let bad = |s: &[f64; MAX_COMP]| EulerState::from_slice(s).check().is_err();
        for j in 0..n {
            if bad(&edges[j].1) || bad(&edges[j + 1].0) {
                for c in 0..nc {
                    let mean = fields.get(c, j as isize);
                    edges[j].1[c] = mean;
                    edges[j + 1].0[c] = mean;
                }
            }
        }
    }
    let mut prev = [0.0; MAX_COMP];
    for (k, (m, p)) in edges.iter().enumerate() {
        let f = interface_flux(m, p, scheme, alpha).map_err(|e| e.at_interface(k))?;
        if k > 0 {
            for c in 0..nc {
                out.set(c, k - 1, -(f[c] - prev[c]) / dx);
            }
        }
        prev = f;
    }
    Ok(flags)
}

fn interface_flux(m: &[f64; MAX_COMP], p: &[f64; MAX_COMP], scheme: &Scheme, alpha: f64) -> Result<[f64; MAX_COMP]> {
    Ok(match scheme.flux {
        FluxId::Hllc => hllc_flux(&EulerState::from_slice(m), &EulerState::from_slice(p), scheme.hllc_speeds)?,
        FluxId::LaxFriedrichs => {
            let (l, r) = (EulerState::from_slice(m), EulerState::from_slice(p));
            l.check()?;
            r.check()?;
            lax_friedrichs_flux(&l, &r, alpha)
        }
        FluxId::GodunovPressureless => {
            let f = godunov_pressureless_flux(&PressurelessState::from_slice(m), &PressurelessState::from_slice(p));
            [f[0], f[1], 0.0]
        }
    })
}

pub fn rhs(fields: &FieldSet, grid: &Grid, scheme: &Scheme) -> Result<(FieldSet, HybridFlags)> {
    let mut out = FieldSet::zeros(fields.n_comp(), fields.n_cells());
    let flags = rhs_into(fields, grid, scheme, &mut out)?;
    Ok((out, flags))
}

/// `cfl dx / max_speed`, optionally capped by `cap dx^2`. Infinite when the
/// field is at rest and uncapped; callers clamp to the remaining time.
pub fn compute_dt(max_speed: f64, dx: f64, cfl: f64, cap: Option<f64>) -> f64 {
    let dt = if max_speed > 0.0 { cfl * dx / max_speed } else { f64::INFINITY };
    match cap {
        Some(c) => dt.min(c * dx * dx),
        None => dt,
    }
}

/// Coefficient `C` of the `dt <= C dx^2` cap that equals the CFL step on a grid
/// with spacing `dx_ref` and wave speed `max_speed`.
pub fn dt_cap_coefficient(cfl: f64, max_speed: f64, dx_ref: f64) -> f64 {
    cfl / (max_speed.max(f64::MIN_POSITIVE) * dx_ref)
}

/// One step of the three-stage Shu-Osher SSP-RK3 scheme. `op` evaluates the
/// spatial operator on a ghost-filled field set.
pub fn ssp_rk3_step<F>(u: &FieldSet, dt: f64, boundary: BoundaryKind, mut op: F) -> Result<FieldSet>
where
    F: FnMut(&FieldSet) -> Result<FieldSet>,
{
    let stage = |f: &mut FieldSet, s: usize| -> Result<()> {
        f.fill_ghosts(boundary);
        if f.all_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteStage { stage: s })
        }
    };
    let mut u1 = u.clone();
    u1.axpy(dt, &op(u)?);
    stage(&mut u1, 1)?;

    let l1 = op(&u1)?;
    u1.axpy(dt, &l1);
    let mut u2 = u.clone();
    u2.lincomb(0.75, 0.25, &u1);
    stage(&mut u2, 2)?;

    let l2 = op(&u2)?;
    u2.axpy(dt, &l2);
    let mut u3 = u.clone();
    u3.lincomb(1.0 / 3.0, 2.0 / 3.0, &u2);
    stage(&mut u3, 3)?;
    Ok(u3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub t: f64,
    pub dt: f64,
    pub max_speed: f64,
    /// Fraction of cells flagged for WENO in the first stage.
    pub weno_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub cfl: f64,
    pub t_final: f64,
    /// `C` in `dt <= C dx^2`.
    pub dt_cap: Option<f64>,
    pub max_steps: usize,
}

impl RunOptions {
    pub fn new(cfl: f64, t_final: f64) -> Self {
        Self {
            cfl,
            t_final,
            dt_cap: None,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub fields: FieldSet,
    pub t: f64,
    pub steps: Vec<StepReport>,
    /// `sum(u) dx` per component before and after the run.
    pub initial_totals: Vec<f64>,
    pub final_totals: Vec<f64>,
}

impl RunResult {
    /// Largest relative change of a component total over the run.
    pub fn conservation_error(&self) -> f64 {
        self.initial_totals
            .iter()
            .zip(&self.final_totals)
            .map(|(a, b)| (a - b).abs() / a.abs().max(1e-300))
            .fold(0.0, f64::max)
    }
}

/// Steps below this fraction of `t_final` mean the solution has blown up.
const MIN_STEP_FRACTION: f64 = 1e-12;

/// Advances `fields` to `opts.t_final`, calling `observer` after every step.
pub fn run<O>(fields: FieldSet, grid: &Grid, scheme: &Scheme, opts: &RunOptions, mut observer: O) -> Result<RunResult>
where
    O: FnMut(&StepReport),
{
    let totals = |f: &FieldSet| (0..f.n_comp()).map(|c| f.total(c, grid.dx)).collect::<Vec<_>>();
    let mut u = fields;
    u.fill_ghosts(grid.boundary);
    let initial_totals = totals(&u);
    let mut t = 0.0;
    let mut steps = Vec::new();
    while t < opts.t_final {
        if steps.len() >= opts.max_steps {
            return Err(Error::StepLimit { steps: opts.max_steps, t });
        }
        let a = max_speed(&u, scheme.system)?;
        let remaining = opts.t_final - t;
        let mut dt = compute_dt(a, grid.dx, opts.cfl, opts.dt_cap);
        if !(dt > MIN_STEP_FRACTION * opts.t_final) && dt < remaining {
            return Err(Error::TimeStepCollapse { t, dt });
        }
        // avoid a sliver of a final step
        if dt >= remaining || remaining - dt < 1e-12 * opts.t_final {
            dt = remaining;
        }
        let mut first_flags = None;
        u = ssp_rk3_step(&u, dt, grid.boundary, |f| {
            let (l, flags) = rhs(f, grid, scheme)?;
            first_flags.get_or_insert(flags);
            Ok(l)
        })?;
        t = if dt == remaining { opts.t_final } else { t + dt };
        let report = StepReport {
            t,
            dt,
            max_speed: a,
            weno_fraction: first_flags.map_or(0.0, |f| f.fraction()),
        };
        observer(&report);
        steps.push(report);
    }
    let final_totals = totals(&u);
    Ok(RunResult {
        fields: u,
        t,
        steps,
        initial_totals,
        final_totals,
    })
}
