//! Single runs, convergence studies and scheme comparisons, with CSV output.

use std::fmt::Write as _;
use std::time::Duration;

use crate::config::{RunConfig, SchemeId};
use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, FieldSet, Grid};
use crate::norms::{error_norms, observed_order};
use crate::physics::EulerState;
use crate::problems::{problem_by_id, ProblemSpec, System};
use crate::solver::{dt_cap_coefficient, max_speed, run, RunOptions, RunResult, Scheme};

/// Header metadata written as `# key: value` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub commit: String,
}

impl Default for Metadata {
    fn default() -> Self {
        Self { commit: "unknown".into() }
    }
}

/// A fully resolved case: problem, grid, discretization and time span.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub problem: ProblemSpec,
    pub grid: Grid,
    pub scheme: Scheme,
    pub options: RunOptions,
    pub config: RunConfig,
}

impl Case {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let problem = problem_by_id(&cfg.problem)?;
        let grid = problem.grid(cfg.n_cells.unwrap_or(problem.reference_cells))?;
        let scheme = Scheme::from_config(cfg, &problem)?;
        let mut options = RunOptions::new(cfg.cfl, cfg.t_final.unwrap_or(problem.t_final));
        if cfg.dt_cap {
            let ref_cells = cfg.dt_cap_cells.unwrap_or(grid.n_cells);
            let ref_grid = problem.grid(ref_cells)?;
            let a0 = max_speed(&problem.initial_fields(&ref_grid, cfg.quad_order)?, problem.system)?;
            options.dt_cap = Some(dt_cap_coefficient(cfg.cfl, a0, ref_grid.dx));
        }
        Ok(Self {
            problem,
            grid,
            scheme,
            options,
            config: cfg.clone(),
        })
    }

    pub fn initial_fields(&self) -> Result<FieldSet> {
        self.problem.initial_fields(&self.grid, self.config.quad_order)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutput {
    pub case: Case,
    pub result: RunResult,
    pub wall_time: Duration,
}

impl CaseOutput {
    /// Cell-center profile with one column per conserved component.
    pub fn profile_csv(&self, meta: &Metadata) -> String {
        let mut s = header(&self.case, meta);
        let names = self.case.problem.system.component_names();
        let _ = writeln!(s, "# steps: {}", self.result.steps.len());
        let _ = writeln!(s, "x,{}", names.join(","));
        let f = &self.result.fields;
        for (i, x) in self.case.grid.centers().iter().enumerate() {
            let _ = write!(s, "{x:.17e}");
            for c in 0..f.n_comp() {
                let _ = write!(s, ",{:.17e}", f.interior(c)[i]);
            }
            s.push('\n');
        }
        s
    }

    /// One line per time step.
    pub fn step_log_csv(&self) -> String {
        let mut s = String::from("step,t,dt,max_speed,weno_fraction\n");
        for (k, r) in self.result.steps.iter().enumerate() {
            let _ = writeln!(s, "{},{:.17e},{:.17e},{:.17e},{:.6}", k + 1, r.t, r.dt, r.max_speed, r.weno_fraction);
        }
        s
    }

    pub fn summary(&self) -> String {
        let r = &self.result;
        let mean_weno = if r.steps.is_empty() {
            0.0
        } else {
            r.steps.iter().map(|s| s.weno_fraction).sum::<f64>() / r.steps.len() as f64
        };
        // boundary fluxes change the totals of outflow problems
        let conservation = match self.case.grid.boundary {
            BoundaryKind::Periodic => format!(" conservation {:.3e}", r.conservation_error()),
            BoundaryKind::Outflow => String::new(),
        };
        format!(
            "problem {} scheme {} flux {} n {} t {:.6} steps {}{conservation} weno_fraction {:.3} wall {:.3}s",
            self.case.problem.id,
            self.case.config.scheme,
            self.case.scheme.flux,
            self.case.grid.n_cells,
            r.t,
            r.steps.len(),
            mean_weno,
            self.wall_time.as_secs_f64()
        )
    }
}

impl CaseOutput {
    pub fn min_density(&self) -> f64 {
        self.result.fields.interior(0).iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Smallest pressure over the grid; `None` for the pressureless system.
    pub fn min_pressure(&self) -> Option<f64> {
        if self.case.problem.system != System::Euler {
            return None;
        }
        let f = &self.result.fields;
        let p = (0..f.n_cells())
            .map(|i| EulerState::from_slice(&f.state(i)).pressure())
            .fold(f64::INFINITY, f64::min);
        Some(p)
    }

    /// Location of the steepest density jump, see [`steepest_gradient`].
    pub fn shock_position(&self) -> f64 {
        steepest_gradient(&self.case.grid, self.result.fields.interior(0))
    }
}

/// Interface position of the largest jump between neighbouring cell values.
pub fn steepest_gradient(grid: &Grid, values: &[f64]) -> f64 {
    let k = values
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .enumerate()
        .fold((0, -1.0), |best, (i, d)| if d > best.1 { (i, d) } else { best })
        .0;
    grid.interface(k + 1)
}

fn header(case: &Case, meta: &Metadata) -> String {
    let c = &case.config;
    let mut s = String::new();
    let _ = writeln!(s, "# problem: {}", case.problem.id);
    let _ = writeln!(s, "# scheme: {}", c.scheme);
    let _ = writeln!(s, "# flux: {}", case.scheme.flux);
    let _ = writeln!(s, "# p: {}", c.accuracy().order());
    let _ = writeln!(s, "# hybrid: {}", if case.scheme.hybrid.is_some() { "on" } else { "off" });
    let _ = writeln!(s, "# n_cells: {}", case.grid.n_cells);
    let _ = writeln!(s, "# dx: {:.17e}", case.grid.dx);
    let _ = writeln!(s, "# cfl: {}", c.cfl);
    let _ = writeln!(s, "# t_final: {}", case.options.t_final);
    let _ = writeln!(s, "# commit: {}", meta.commit);
    s
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = std::time::Instant::now();
    let v = f();
    (v, start.elapsed())
}

/// The browser target has no monotonic clock in `std`; wall times read zero.
#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    (f(), Duration::ZERO)
}

pub fn run_case(cfg: &RunConfig) -> Result<CaseOutput> {
    let case = Case::new(cfg)?;
    let (result, wall_time) = timed(|| run(case.initial_fields()?, &case.grid, &case.scheme, &case.options, |_| {}));
    Ok(CaseOutput {
        case,
        result: result?,
        wall_time,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub linf: f64,
    pub l1: f64,
    pub l2: f64,
    /// `NaN` on the first row.
    pub order_linf: f64,
    pub order_l1: f64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scheme: SchemeId,
    pub problem: String,
    pub rows: Vec<ConvergenceRow>,
}

/// Density errors against the cell-averaged exact solution on each resolution.
///
/// When `cfg.dt_cap` is set the `dt <= C dx^2` coefficient is fixed on the
/// coarsest grid, so the time step shrinks with `dx^2` across the study.
pub fn convergence_study(cfg: &RunConfig, resolutions: &[usize]) -> Result<ConvergenceReport> {
    let problem = problem_by_id(&cfg.problem)?;
    if !problem.has_exact() {
        return Err(Error::NoExactSolution(problem.id.to_string()));
    }
    let mut res = resolutions.to_vec();
    res.sort_unstable();
    res.dedup();
    if res.is_empty() {
        return Err(Error::InvalidConfig("no resolutions given".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in &res {
        let c = RunConfig {
            n_cells: Some(n),
            dt_cap_cells: cfg.dt_cap_cells.or(Some(res[0])),
            ..cfg.clone()
        };
        let out = run_case(&c)?;
        let exact = problem.exact_fields(&out.case.grid, out.result.t, c.quad_order)?;
        let e = error_norms(out.result.fields.interior(0), exact.interior(0), out.case.grid.dx)?;
        rows.push(ConvergenceRow {
            n_cells: n,
            linf: e.linf,
            l1: e.l1,
            l2: e.l2,
            order_linf: f64::NAN,
            order_l1: f64::NAN,
            wall_time: out.wall_time,
        });
    }
    let oinf = observed_order(&rows.iter().map(|r| (r.n_cells, r.linf)).collect::<Vec<_>>());
    let o1 = observed_order(&rows.iter().map(|r| (r.n_cells, r.l1)).collect::<Vec<_>>());
    for (k, r) in rows.iter_mut().enumerate().skip(1) {
        r.order_linf = oinf[k - 1];
        r.order_l1 = o1[k - 1];
    }
    Ok(ConvergenceReport {
        scheme: cfg.scheme,
        problem: problem.id.to_string(),
        rows,
    })
}

fn fmt_order(o: f64) -> String {
    if o.is_nan() {
        "---".into()
    } else {
        format!("{o:.2}")
    }
}

impl ConvergenceReport {
    pub fn to_csv(&self, cfg: &RunConfig, meta: &Metadata) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# problem: {}", self.problem);
        let _ = writeln!(s, "# scheme: {}", self.scheme);
        let _ = writeln!(
            s,
            "# flux: {}",
            cfg.flux.map_or("default".to_string(), |f| f.to_string())
        );
        let _ = writeln!(s, "# cfl: {}", cfg.cfl);
        let _ = writeln!(s, "# dt_cap: {}", if cfg.dt_cap { "on" } else { "off" });
        if let Some(t) = cfg.t_final {
            let _ = writeln!(s, "# t_final: {t}");
        } else if let Ok(p) = problem_by_id(&self.problem) {
            let _ = writeln!(s, "# t_final: {}", p.t_final);
        }
        let _ = writeln!(s, "# commit: {}", meta.commit);
        s.push_str("n_cells,dx,linf,l1,l2,order_linf,order_l1\n");
        let len = problem_by_id(&self.problem).map_or(1.0, |p| p.x_hi - p.x_lo);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:.17e},{:.6e},{:.6e},{:.6e},{},{}",
                r.n_cells,
                len / r.n_cells as f64,
                r.linf,
                r.l1,
                r.l2,
                if r.order_linf.is_nan() { String::new() } else { format!("{:.4}", r.order_linf) },
                if r.order_l1.is_nan() { String::new() } else { format!("{:.4}", r.order_l1) },
            );
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("{} on {}\n", self.scheme, self.problem);
        let _ = writeln!(
            s,
            "{:>6}  {:>10} {:>6}  {:>10} {:>6}  {:>10}  {:>8}",
            "N", "Linf", "order", "L1", "order", "L2", "wall[s]"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>6}  {:>10.3e} {:>6}  {:>10.3e} {:>6}  {:>10.3e}  {:>8.3}",
                r.n_cells,
                r.linf,
                fmt_order(r.order_linf),
                r.l1,
                fmt_order(r.order_l1),
                r.l2,
                r.wall_time.as_secs_f64()
            );
        }
        s
    }
}

/// Profiles of several schemes on the same grid and flux.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub outputs: Vec<CaseOutput>,
}

/// Runs `cfg` once per scheme. The classical WENO baseline is always included.
pub fn compare_schemes(cfg: &RunConfig, schemes: &[SchemeId]) -> Result<Comparison> {
    let mut list = vec![SchemeId::WenoJs5];
    for &s in schemes {
        if !list.contains(&s) {
            list.push(s);
        }
    }
    let outputs = list
        .into_iter()
        .map(|s| {
            run_case(&RunConfig {
                scheme: s,
                ..cfg.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison { outputs })
}

impl Comparison {
    /// Side-by-side CSV: `x` then `<scheme>_<component>` for every scheme.
    pub fn to_csv(&self, meta: &Metadata) -> String {
        let first = &self.outputs[0];
        let mut s = header(&first.case, meta);
        let names: Vec<&str> = self.outputs.iter().map(|o| o.case.config.scheme.name()).collect();
        let _ = writeln!(s, "# schemes: {}", names.join(" "));
        let comps = first.case.problem.system.component_names();
        s.push('x');
        for n in &names {
            for c in comps {
                let _ = write!(s, ",{n}_{c}");
            }
        }
        s.push('\n');
        for (i, x) in first.case.grid.centers().iter().enumerate() {
            let _ = write!(s, "{x:.17e}");
            for o in &self.outputs {
                for c in 0..comps.len() {
                    let _ = write!(s, ",{:.17e}", o.result.fields.interior(c)[i]);
                }
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_requires_exact_solution() {
        let cfg = RunConfig {
            problem: "sod".into(),
            ..RunConfig::default()
        };
        assert!(convergence_study(&cfg, &[20, 40]).unwrap_err().is_usage());
    }

    #[test]
    fn profile_has_metadata_and_rows() {
        let cfg = RunConfig {
            problem: "sod".into(),
            n_cells: Some(20),
            t_final: Some(0.01),
            ..RunConfig::default()
        };
        let out = run_case(&cfg).unwrap();
        let csv = out.profile_csv(&Metadata::default());
        for key in ["# scheme: rbf_weno_p2", "# flux: hllc", "# dx: ", "# t_final: 0.01", "# commit: unknown"] {
            assert!(csv.contains(key), "{key}");
        }
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 21);
    }

    #[test]
    fn comparison_always_has_baseline() {
        let cfg = RunConfig {
            problem: "blast_wave".into(),
            n_cells: Some(24),
            t_final: Some(0.02),
            ..RunConfig::default()
        };
        let c = compare_schemes(&cfg, &[SchemeId::RbfWenoP2]).unwrap();
        let csv = c.to_csv(&Metadata::default());
        let head = csv.lines().find(|l| l.starts_with('x')).unwrap();
        assert_eq!(head, "x,weno_js5_rho,weno_js5_mom,rbf_weno_p2_rho,rbf_weno_p2_mom");
    }
}
