//! Independent oracles shared by the integration tests.
//!
//! The interface reconstruction is rebuilt from first principles: interpolate the
//! primitive function with Gaussians centred on interface nodes and differentiate at
//! the target interface. The linear solve runs in 512-bit arithmetic.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};

const PREC: usize = 512;
const RM: RoundingMode = RoundingMode::ToEven;

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().expect("decimal rendering parses as f64")
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<BigFloat>>, mut b: Vec<BigFloat>) -> Vec<BigFloat> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &k| a[i][col].abs_cmp(&a[k][col]).unwrap_or(0).cmp(&0))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col].div(&a[col][col], PREC, RM);
            for k in col..n {
                let t = f.mul(&a[col][k], PREC, RM);
                a[row][k] = a[row][k].sub(&t, PREC, RM);
            }
            let t = f.mul(&b[col], PREC, RM);
            b[row] = b[row].sub(&t, PREC, RM);
        }
    }
    let mut x = vec![big(0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc = acc.sub(&a[row][k].mul(&x[k], PREC, RM), PREC, RM);
        }
        x[row] = acc.div(&a[row][row], PREC, RM);
    }
    x
}

/// Primitive of unit cell data at interface node `node`, anchored at 0.
///
/// Cell `j + o` covers `[o - 1, o]` in units of `dx`, so the target interface
/// `x_{j+1/2}` sits at 0.
fn primitive_at(node: i32, cell: i32) -> f64 {
    if node > 0 && (1..=node).contains(&cell) {
        1.0
    } else if node < 0 && (node + 1..=0).contains(&cell) {
        -1.0
    } else {
        0.0
    }
}

/// Coefficients of the reconstruction at `x_{j+1/2}` for cells `j + o`, `o` in
/// `cells`, from Gaussian interpolation of the primitive on `nodes` with
/// `phi(x) = exp(-s x^2)`.
pub fn gaussian_primitive_coeffs(s: f64, nodes: &[i32], cells: &[i32]) -> Vec<f64> {
    let mut cc = Consts::new().expect("constants cache");
    let sb = big(s);
    let gauss = |d: i32, cc: &mut Consts| {
        let arg = sb.mul(&big(f64::from(d * d)), PREC, RM).neg();
        arg.exp(PREC, RM, cc)
    };
    let phi: Vec<Vec<BigFloat>> = nodes
        .iter()
        .map(|&a| nodes.iter().map(|&b| gauss(a - b, &mut cc)).collect())
        .collect();
    // d/dx exp(-s (x - x_m)^2) at x = 0 is 2 s x_m exp(-s x_m^2)
    let dphi: Vec<BigFloat> = nodes
        .iter()
        .map(|&m| {
            big(2.0 * f64::from(m))
                .mul(&sb, PREC, RM)
                .mul(&gauss(m, &mut cc), PREC, RM)
        })
        .collect();
    cells
        .iter()
        .map(|&c| {
            let rhs = nodes.iter().map(|&m| big(primitive_at(m, c))).collect();
            let alpha = solve(phi.clone(), rhs);
            let u = alpha
                .iter()
                .zip(&dphi)
                .fold(big(0.0), |acc, (a, d)| acc.add(&a.mul(d, PREC, RM), PREC, RM));
            to_f64(&u)
        })
        .collect()
}

/// Oracle for the two-cell substencil `k` (0 left, 1 centre, 2 right).
pub fn two_point_oracle(s: f64, k: usize) -> [f64; 2] {
    let (nodes, cells): (&[i32], &[i32]) = match k {
        0 => (&[-2, -1, 0], &[-1, 0]),
        1 => (&[-1, 0, 1], &[0, 1]),
        _ => (&[0, 1, 2], &[1, 2]),
    };
    let c = gaussian_primitive_coeffs(s, nodes, cells);
    [c[0], c[1]]
}

/// Oracle for the four-cell stencil `{j-1, .., j+2}`.
pub fn four_point_oracle(s: f64) -> [f64; 4] {
    let c = gaussian_primitive_coeffs(s, &[-2, -1, 0, 1, 2], &[-1, 0, 1, 2]);
    [c[0], c[1], c[2], c[3]]
}

/// Least-squares slope of `log|r|` against `log s`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}
