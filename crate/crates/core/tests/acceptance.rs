//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use common::{four_point_oracle, loglog_slope, two_point_oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbf_weno::config::{FluxId, RunConfig, SchemeId};
use rbf_weno::harness::{convergence_study, run_case, CaseOutput, ConvergenceReport};
use rbf_weno::hybrid::{field_flags, HybridParams};
use rbf_weno::problems::problem_by_id;
use rbf_weno::rbf::{
    direct_coefficient, four_point_coeffs, two_point_coeffs, ShapeParams, StencilCoeffs, Substencil,
};
use rbf_weno::weno::{linear_weights, nonlinear_weights, reconstruct_minus_detailed, SmoothnessSet, WenoParams};

const RESOLUTIONS: [usize; 5] = [20, 40, 80, 160, 320];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn config(problem: &str, scheme: SchemeId) -> RunConfig {
    RunConfig {
        problem: problem.into(),
        scheme,
        ..RunConfig::default()
    }
}

fn study(problem: &str, scheme: SchemeId) -> ConvergenceReport {
    let cfg = RunConfig {
        dt_cap: true,
        ..config(problem, scheme)
    };
    convergence_study(&cfg, &RESOLUTIONS).expect("convergence study runs")
}

fn orders(r: &ConvergenceReport) -> Vec<f64> {
    r.rows.iter().skip(1).map(|row| row.order_linf).collect()
}

fn fmt_list(v: &[f64], prec: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.prec$}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_errors(r: &ConvergenceReport) -> String {
    let parts: Vec<String> = r.rows.iter().map(|row| format!("{:.3e}", row.linf)).collect();
    format!("[{}]", parts.join(", "))
}

fn within_factor(got: f64, want: f64, factor: f64) -> bool {
    got <= want * factor && got >= want / factor
}

fn smooth_advection_convergence() -> Outcome {
    let start = Instant::now();
    let (p2, p1) = thread::scope(|s| {
        let a = s.spawn(|| study("smooth_advection", SchemeId::RbfWenoP2));
        let b = s.spawn(|| study("smooth_advection", SchemeId::RbfWenoP1));
        (a.join().unwrap(), b.join().unwrap())
    });
    let o2 = orders(&p2);
    let o1 = orders(&p1);
    let e80 = p2.rows[2].linf;
    let orders_ok = o2[1..].iter().all(|&o| o >= 5.6);
    let error_ok = within_factor(e80, 8.71e-8, 3.0);
    let p1_ok = o1.iter().all(|&o| (4.9..=5.1).contains(&o));
    let wall = start.elapsed().as_secs_f64();
    let fast = wall < 60.0;
    Outcome::new(
        orders_ok && error_ok && p1_ok && fast,
        format!(
            "p2 orders {} (last three >= 5.6: {orders_ok}); p2 Linf(80) {e80:.3e} vs 8.71e-8 within 3x: {error_ok}; \
             p1 orders {} in [4.9, 5.1]: {p1_ok}; both studies {wall:.1}s (< 60 s: {fast})",
            fmt_list(&o2, 3),
            fmt_list(&o1, 3),
        ),
    )
}

fn pressureless_convergence() -> Outcome {
    const P2_ERR: [f64; 5] = [7.38e-4, 1.32e-5, 2.12e-7, 3.37e-9, 5.30e-11];
    const P2_ORD: [f64; 4] = [5.80, 5.96, 5.97, 5.99];
    const JS_ERR: [f64; 5] = [1.89e-3, 6.90e-5, 3.62e-6, 2.48e-7, 1.90e-8];
    const JS_ORD: [f64; 4] = [4.77, 4.25, 3.87, 3.71];
    let (p2, js) = thread::scope(|s| {
        let a = s.spawn(|| study("pressureless_smooth", SchemeId::RbfWenoP2));
        let b = s.spawn(|| study("pressureless_smooth", SchemeId::WenoJs5));
        (a.join().unwrap(), b.join().unwrap())
    });
    let o2 = orders(&p2);
    let oj = orders(&js);
    let p2_orders = o2[1..].iter().all(|&o| o >= 5.7);
    let js_final = oj[3] <= 4.2;
    let ord_tol = o2.iter().zip(&P2_ORD).chain(oj.iter().zip(&JS_ORD)).all(|(g, w)| (g - w).abs() <= 0.3);
    let err_tol = p2
        .rows
        .iter()
        .zip(&P2_ERR)
        .chain(js.rows.iter().zip(&JS_ERR))
        .all(|(r, &w)| within_factor(r.linf, w, 5.0));
    Outcome::new(
        p2_orders && js_final && ord_tol && err_tol,
        format!(
            "p2 orders {} (last three >= 5.7: {p2_orders}); JS5 orders {} (final <= 4.2: {js_final}); \
             orders within 0.3 of reference: {ord_tol}; errors p2 {} JS5 {} within 5x: {err_tol}",
            fmt_list(&o2, 2),
            fmt_list(&oj, 2),
            fmt_errors(&p2),
            fmt_errors(&js),
        ),
    )
}

fn coefficient_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let s: f64 = rng.gen_range(-1.0..=1.0);
        for (k, sub) in Substencil::ALL.iter().enumerate() {
            let got = two_point_coeffs(s, *sub).unwrap();
            let want = two_point_oracle(s, k);
            for i in 0..2 {
                worst = worst.max((got[i] - want[i]).abs());
            }
        }
        let got = four_point_coeffs(s).unwrap();
        let want = four_point_oracle(s);
        for i in 0..4 {
            worst = worst.max((got[i] - want[i]).abs());
        }
    }
    let center = two_point_coeffs(0.0, Substencil::Center).unwrap();
    let big = four_point_coeffs(0.0).unwrap();
    let d = linear_weights(&StencilCoeffs::new(&ShapeParams::zero()).unwrap()).unwrap();
    let dev = |got: &[f64], want: &[f64]| got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let zero_dev = dev(&center, &[0.5, 0.5])
        .max(dev(&big, &[-1.0 / 12.0, 7.0 / 12.0, 7.0 / 12.0, -1.0 / 12.0]))
        .max(dev(&d, &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]));
    Outcome::new(
        worst < 1e-10 && zero_dev < 1e-13,
        format!("max deviation from 512-bit oracle over 100 shapes {worst:.2e} (< 1e-10); s = 0 deviation {zero_dev:.2e} (< 1e-13)"),
    )
}

fn cubic_remainder(f: impl Fn(f64) -> f64, taylor: impl Fn(f64) -> f64) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4].iter().map(|&s| (s, f(s) - taylor(s))).collect();
    let scaled: Vec<f64> = pts.iter().map(|(s, r)| r / s.powi(3)).collect();
    // Richardson: the scaled remainder settles, so the next term is O(s^3)
    (loglog_slope(&pts), (scaled[1] - scaled[2]).abs() / scaled[2].abs())
}

fn taylor_expansions() -> Outcome {
    let (sp, dp) = cubic_remainder(
        |s| two_point_coeffs(s, Substencil::Center).unwrap()[0],
        |s| 0.5 + s / 2.0 - s * s / 12.0,
    );
    let (sd, dd) = cubic_remainder(|s| direct_coefficient(s).unwrap(), |s| 0.5 + s / 6.0 - 7.0 * s * s / 90.0);
    let ok = |slope: f64, drift: f64| (slope - 3.0).abs() < 0.05 && drift < 0.05;
    Outcome::new(
        ok(sp, dp) && ok(sd, dd),
        format!(
            "primitive path remainder slope {sp:.3} (drift {dp:.1e}); direct path remainder slope {sd:.3} (drift {dd:.1e}); expected slope 3"
        ),
    )
}

fn conservation() -> Outcome {
    let mut worst = 0.0_f64;
    let mut runs = 0;
    for problem in ["smooth_advection", "pressureless_smooth"] {
        for scheme in [SchemeId::WenoJs5, SchemeId::RbfWenoP1, SchemeId::RbfWenoP2, SchemeId::HybridRbfWeno] {
            for n in [40, 80] {
                let cfg = RunConfig {
                    n_cells: Some(n),
                    ..config(problem, scheme)
                };
                let out = run_case(&cfg).expect("periodic run completes");
                worst = worst.max(out.result.conservation_error());
                runs += 1;
            }
        }
    }
    Outcome::new(
        worst < 1e-11,
        format!("{runs} periodic runs to t_final, worst relative drift {worst:.2e} (< 1e-11)"),
    )
}

struct ShockCase {
    label: &'static str,
    problem: &'static str,
    flux: FluxId,
}

fn shock_check(base: &CaseOutput, reference: &CaseOutput, label: &str) -> (bool, String) {
    let finite = base.result.fields.all_finite();
    let rho = base.min_density();
    let p = base.min_pressure().unwrap_or(f64::NAN);
    let dx = base.case.grid.dx;
    let shift = (base.shock_position() - reference.shock_position()).abs() / dx;
    let ok = finite && rho > 0.0 && p > 0.0 && shift <= 3.0;
    (
        ok,
        format!("{label} min rho {rho:.3} min p {p:.3} shock {:.4} vs {:.4} ({shift:.2} dx)", base.shock_position(), reference.shock_position()),
    )
}

fn shock_robustness() -> Outcome {
    let cases = [
        ShockCase { label: "lax", problem: "lax", flux: FluxId::Hllc },
        ShockCase { label: "sod", problem: "sod", flux: FluxId::Hllc },
        ShockCase { label: "shu_osher/hllc", problem: "shu_osher", flux: FluxId::Hllc },
        ShockCase { label: "shu_osher/lf", problem: "shu_osher", flux: FluxId::LaxFriedrichs },
        ShockCase { label: "titarev_toro", problem: "titarev_toro", flux: FluxId::Hllc },
    ];
    let results: Vec<(bool, String)> = thread::scope(|s| {
        let handles: Vec<_> = cases
            .iter()
            .map(|c| {
                s.spawn(move || {
                    let cfg = RunConfig {
                        flux: Some(c.flux),
                        ..config(c.problem, SchemeId::RbfWenoP2)
                    };
                    let base = match run_case(&cfg) {
                        Ok(o) => o,
                        Err(e) => return (false, format!("{} failed: {e}", c.label)),
                    };
                    let reference = RunConfig {
                        n_cells: Some(4 * base.case.grid.n_cells),
                        ..cfg.clone()
                    };
                    match run_case(&reference) {
                        Ok(r) => shock_check(&base, &r, c.label),
                        Err(e) => (false, format!("{} reference failed: {e}", c.label)),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let pass = results.iter().all(|r| r.0);
    let detail: Vec<String> = results.into_iter().map(|r| r.1).collect();
    Outcome::new(pass, detail.join("; "))
}

fn delta_shock() -> Outcome {
    let (rbf, js) = thread::scope(|s| {
        let a = s.spawn(|| run_case(&config("blast_wave", SchemeId::RbfWenoP2)));
        let b = s.spawn(|| run_case(&config("blast_wave", SchemeId::WenoJs5)));
        (a.join().unwrap(), b.join().unwrap())
    });
    let (rbf, js) = match (rbf, js) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            return Outcome::new(
                false,
                format!("run failed: rbf {:?} js5 {:?}", a.err(), b.err()),
            )
        }
    };
    let peak = |o: &CaseOutput| {
        let rho = o.result.fields.interior(0);
        let (i, m) = rho
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        (o.case.grid.cell_center(i), m)
    };
    let (x, m) = peak(&rbf);
    let (xj, mj) = peak(&js);
    let dx = rbf.case.grid.dx;
    let located = (x - 0.2).abs() <= 2.0 * dx + 1e-12;
    let nonneg = rbf.min_density() >= 0.0;
    let taller = m > mj;
    Outcome::new(
        located && nonneg && taller,
        format!(
            "rbf peak {m:.3} at x = {x:.4} (0.2 +- {:.4}: {located}); min rho {:.3}; JS5 peak {mj:.3} at {xj:.4} (rbf taller: {taller})",
            2.0 * dx,
            rbf.min_density()
        ),
    )
}

fn weight_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e19);
    let mut equal_dev = 0.0_f64;
    for _ in 0..1000 {
        let b: f64 = rng.gen_range(0.0..10.0);
        let d0: f64 = rng.gen_range(0.01..0.5);
        let d2: f64 = rng.gen_range(0.01..0.49);
        let d = [d0, 1.0 - d0 - d2, d2];
        let w = nonlinear_weights(&SmoothnessSet { beta: [b; 3], tau3: 0.0, gamma_dx: [0.0; 3] }, d, rng.gen_range(1e-12..1e-2));
        for k in 0..3 {
            equal_dev = equal_dev.max((w.omega[k] - d[k]).abs());
        }
    }
    let params = WenoParams::default();
    let mut sum_dev = 0.0_f64;
    for _ in 0..1000 {
        let w: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let det = reconstruct_minus_detailed(&w, rng.gen_range(1e-3..0.2), &params).unwrap();
        if let Some(ws) = det.weights {
            sum_dev = sum_dev.max((ws.omega.iter().sum::<f64>() - 1.0).abs());
        }
    }
    // 5 jump positions x up/down x two base levels, on the Sod grid spacing
    let dx = 0.01;
    let mut worst_cross = 0.0_f64;
    let mut placements = 0;
    for pos in 1..6 {
        for (lo, hi) in [(0.0, 1.0), (1.0, 0.0), (1.0, 2.0), (2.0, 1.0)] {
            let w: [f64; 6] = std::array::from_fn(|i| if i < pos { lo } else { hi });
            let det = reconstruct_minus_detailed(&w, dx, &params).unwrap();
            let omega = det.weights.expect("linear weights are positive at s = 0").omega;
            // inner cells are w[1..5]; substencil k covers w[1 + k], w[2 + k]
            for (k, o) in omega.iter().enumerate() {
                if pos == 2 + k {
                    worst_cross = worst_cross.max(*o);
                }
            }
            placements += 1;
        }
    }
    Outcome::new(
        equal_dev < 1e-14 && sum_dev < 1e-14 && worst_cross < 0.05,
        format!(
            "equal indicators |omega - d| {equal_dev:.1e}; |sum omega - 1| {sum_dev:.1e}; \
             largest crossing weight over {placements} step placements {worst_cross:.2e} (< 0.05)"
        ),
    )
}

fn hybrid_sanity() -> Outcome {
    let mut smooth_flagged = 0usize;
    for n in [80, 160] {
        let cfg = RunConfig {
            n_cells: Some(n),
            ..config("smooth_advection", SchemeId::HybridRbfWeno)
        };
        let out = run_case(&cfg).expect("smooth run completes");
        smooth_flagged += out
            .result
            .steps
            .iter()
            .filter(|s| s.weno_fraction > 0.0)
            .count();
    }
    let p = problem_by_id("sod").unwrap();
    let grid = p.grid(p.reference_cells).unwrap();
    let fields = p.initial_fields(&grid, 5).unwrap();
    let flags = field_flags(&fields, grid.dx, &HybridParams::default(), grid.boundary);
    let flagged: Vec<usize> = (0..grid.n_cells).filter(|&i| flags.mask[i]).collect();
    // the jump at x = 0.5 sits between cells 49 and 50
    let needed = 45..=54;
    let covers = needed.clone().all(|i| flags.mask[i]);
    Outcome::new(
        smooth_flagged == 0 && covers,
        format!(
            "smooth advection n = 80, 160: {smooth_flagged} steps with flagged cells; \
             sod t = 0 flagged cells {:?}..={:?} ({} total, needs 45..=54: {covers})",
            flagged.first(),
            flagged.last(),
            flagged.len()
        ),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 9] = [
        ("smooth advection convergence", smooth_advection_convergence),
        ("pressureless smooth convergence", pressureless_convergence),
        ("coefficient oracle equivalence", coefficient_oracle),
        ("taylor expansions", taylor_expansions),
        ("conservation", conservation),
        ("shock-case robustness", shock_robustness),
        ("delta shock", delta_shock),
        ("weno weight properties", weight_properties),
        ("hybrid sanity", hybrid_sanity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("criterion {} {name}: {} | {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
