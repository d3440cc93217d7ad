//! Uniform 1D grids, cell-average storage and quadrature-based initialization.

use crate::error::{Error, Result};

/// Number of ghost cells kept on each side of the domain.
pub const GHOST: usize = 3;

/// Maximum number of conserved components handled by [`FieldSet`].
pub const MAX_COMP: usize = 3;

/// A pointwise state with up to [`MAX_COMP`] components; unused trailing entries are ignored.
pub type State = [f64; MAX_COMP];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Periodic,
    /// Zeroth-order extrapolation: ghosts copy the nearest interior cell.
    Outflow,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Outflow => "outflow",
        }
    }
}

/// Uniform partition of `[x_lo, x_hi]` into `n_cells` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub boundary: BoundaryKind,
}

impl Grid {
    pub fn new(x_lo: f64, x_hi: f64, n_cells: usize, boundary: BoundaryKind) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidGrid("n_cells must be positive".into()));
        }
        if !(x_lo.is_finite() && x_hi.is_finite()) || x_hi <= x_lo {
            return Err(Error::InvalidGrid(format!(
                "domain [{x_lo}, {x_hi}] is empty or not finite"
            )));
        }
        Ok(Self {
            x_lo,
            x_hi,
            n_cells,
            dx: (x_hi - x_lo) / n_cells as f64,
            boundary,
        })
    }

    /// Left interface of cell `i`, i.e. x_{i-1/2}. Valid for `i = 0..=n_cells`.
    #[inline]
    pub fn interface(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.dx
    }

    #[inline]
    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.cell_center(i)).collect()
    }

    pub fn length(&self) -> f64 {
        self.x_hi - self.x_lo
    }
}

/// Cell averages of an `n_comp`-component system with [`GHOST`] ghost cells per side.
///
/// Storage is component-major; each row holds `n_cells + 2 * GHOST` values and
/// interior cell `i` lives at row offset `i + GHOST`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSet {
    n_comp: usize,
    n_cells: usize,
    data: Vec<f64>,
}

impl FieldSet {
    pub fn zeros(n_comp: usize, n_cells: usize) -> Self {
        assert!((1..=MAX_COMP).contains(&n_comp), "n_comp must be 1..=3");
        Self {
            n_comp,
            n_cells,
            data: vec![0.0; n_comp * (n_cells + 2 * GHOST)],
        }
    }

    /// Builds a field from interior rows; ghosts are left at zero.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_cells = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || rows.len() > MAX_COMP {
            return Err(Error::InvalidConfig(format!(
                "expected 1..=3 components, got {}",
                rows.len()
            )));
        }
        let mut f = Self::zeros(rows.len(), n_cells);
        for (c, row) in rows.iter().enumerate() {
            if row.len() != n_cells {
                return Err(Error::LengthMismatch {
                    left: n_cells,
                    right: row.len(),
                });
            }
            f.interior_mut(c).copy_from_slice(row);
        }
        Ok(f)
    }

    #[inline]
    pub fn n_comp(&self) -> usize {
        self.n_comp
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    fn stride(&self) -> usize {
        self.n_cells + 2 * GHOST
    }

    /// Full row of component `c`, ghosts included.
    #[inline]
    pub fn row(&self, c: usize) -> &[f64] {
        let s = self.stride();
        &self.data[c * s..(c + 1) * s]
    }

    #[inline]
    pub fn row_mut(&mut self, c: usize) -> &mut [f64] {
        let s = self.stride();
        &mut self.data[c * s..(c + 1) * s]
    }

    pub fn interior(&self, c: usize) -> &[f64] {
        &self.row(c)[GHOST..GHOST + self.n_cells]
    }

    pub fn interior_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.n_cells;
        &mut self.row_mut(c)[GHOST..GHOST + n]
    }

    /// Value of component `c` in cell `i`, where `i` may reach into the ghosts
    /// (`-GHOST <= i < n_cells + GHOST`).
    #[inline]
    pub fn get(&self, c: usize, i: isize) -> f64 {
        self.row(c)[(i + GHOST as isize) as usize]
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: usize, v: f64) {
        self.row_mut(c)[i + GHOST] = v;
    }

    /// State vector of interior cell `i` (trailing entries zero).
    pub fn state(&self, i: usize) -> State {
        let mut s = [0.0; MAX_COMP];
        for (c, v) in s.iter_mut().enumerate().take(self.n_comp) {
            *v = self.row(c)[i + GHOST];
        }
        s
    }

    /// Ghost values as a pure function of the interior values.
    pub fn fill_ghosts(&mut self, boundary: BoundaryKind) {
        let n = self.n_cells;
        for c in 0..self.n_comp {
            let row = self.row_mut(c);
            for g in 0..GHOST {
                let (left, right) = match boundary {
                    BoundaryKind::Periodic => (
                        row[GHOST + (n - 1 - (g % n))],
                        row[GHOST + (g % n)],
                    ),
                    BoundaryKind::Outflow => (row[GHOST], row[GHOST + n - 1]),
                };
                row[GHOST - 1 - g] = left;
                row[GHOST + n + g] = right;
            }
        }
    }

    pub fn all_finite(&self) -> bool {
        (0..self.n_comp).all(|c| self.interior(c).iter().all(|v| v.is_finite()))
    }

    /// `self += a * other` over the full storage.
    pub fn axpy(&mut self, a: f64, other: &FieldSet) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    /// `self = a * self + b * other`.
    pub fn lincomb(&mut self, a: f64, b: f64, other: &FieldSet) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x = a * *x + b * y;
        }
    }

    /// `dx * sum(interior)` for component `c`.
    pub fn total(&self, c: usize, dx: f64) -> f64 {
        dx * self.interior(c).iter().sum::<f64>()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cell averages of a pointwise state by `quad_order`-point Gauss-Legendre quadrature.
/// Ghosts are filled according to the grid's boundary kind.
pub fn init_cell_averages<F>(u0: F, n_comp: usize, grid: &Grid, quad_order: usize) -> Result<FieldSet>
where
    F: Fn(f64) -> State,
{
    if quad_order < 5 {
        return Err(Error::InvalidConfig(format!(
            "quad_order must be >= 5, got {quad_order}"
        )));
    }
    let (nodes, weights) = gauss_legendre(quad_order);
    let mut out = FieldSet::zeros(n_comp, grid.n_cells);
    let half = 0.5 * grid.dx;
    for i in 0..grid.n_cells {
        let xc = grid.cell_center(i);
        let mut acc = [0.0; MAX_COMP];
        for (xi, wi) in nodes.iter().zip(&weights) {
            let x = xc + half * xi;
            let v = u0(x);
            for c in 0..n_comp {
                if !v[c].is_finite() {
                    return Err(Error::NonFiniteInitialState { cell: i, x });
                }
                acc[c] += wi * v[c];
            }
        }
        for (c, a) in acc.iter().enumerate().take(n_comp) {
            out.set(c, i, 0.5 * a);
        }
    }
    out.fill_ghosts(grid.boundary);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_coordinates_are_affine() {
        let g = Grid::new(-1.0, 1.0, 8, BoundaryKind::Outflow).unwrap();
        assert_eq!(g.dx, 0.25);
        assert_eq!(g.interface(0), -1.0);
        assert_eq!(g.interface(8), 1.0);
        assert_eq!(g.cell_center(3), -1.0 + 3.5 * 0.25);
        assert!(Grid::new(1.0, 1.0, 4, BoundaryKind::Periodic).is_err());
        assert!(Grid::new(0.0, 1.0, 0, BoundaryKind::Periodic).is_err());
    }

    #[test]
    fn gauss_rule_integrates_high_degree_polynomials() {
        let (x, w) = gauss_legendre(5);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
        // degree 9 monomial, exact integral over [-1,1] of x^8 = 2/9
        let i8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((i8 - 2.0 / 9.0).abs() < 1e-15);
        let i9: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(9)).sum();
        assert!(i9.abs() < 1e-15);
    }

    #[test]
    fn constant_initial_state_is_exact() {
        let g = Grid::new(0.0, 3.0, 7, BoundaryKind::Periodic).unwrap();
        let f = init_cell_averages(|_| [1.0, 0.0, 0.0], 1, &g, 5).unwrap();
        assert!(f.interior(0).iter().all(|&v| v == 1.0));
    }

    #[test]
    fn linear_initial_state_gives_cell_centers() {
        let g = Grid::new(0.0, 1.0, 10, BoundaryKind::Outflow).unwrap();
        let f = init_cell_averages(|x| [x, 0.0, 0.0], 1, &g, 5).unwrap();
        for i in 0..10 {
            assert!((f.get(0, i as isize) - g.cell_center(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn sine_averages_match_antiderivative() {
        use std::f64::consts::PI;
        let g = Grid::new(0.0, 1.0, 20, BoundaryKind::Periodic).unwrap();
        let f = init_cell_averages(|x| [1.0 + 0.5 * (4.0 * PI * x).sin(), 0.0, 0.0], 1, &g, 5).unwrap();
        let anti = |x: f64| x - 0.5 * (4.0 * PI * x).cos() / (4.0 * PI);
        for i in 0..20 {
            let exact = (anti(g.interface(i + 1)) - anti(g.interface(i))) / g.dx;
            assert!((f.get(0, i as isize) - exact).abs() <= 1e-12);
        }
    }

    #[test]
    fn non_finite_initial_state_reports_cell() {
        let g = Grid::new(0.0, 1.0, 4, BoundaryKind::Outflow).unwrap();
        let err = init_cell_averages(|x| [if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 0.0], 1, &g, 5)
            .unwrap_err();
        assert!(matches!(err, Error::NonFiniteInitialState { cell: 2, .. }));
    }

    #[test]
    fn periodic_ghost_fill_is_an_index_wrap_and_idempotent() {
        let mut f = FieldSet::from_rows(&[vec![1.0, 2.0, 3.0, 4.0, 5.0]]).unwrap();
        f.fill_ghosts(BoundaryKind::Periodic);
        let once = f.clone();
        f.fill_ghosts(BoundaryKind::Periodic);
        assert_eq!(f, once);
        assert_eq!(f.get(0, -1), 5.0);
        assert_eq!(f.get(0, -3), 3.0);
        assert_eq!(f.get(0, 5), 1.0);
        assert_eq!(f.get(0, 7), 3.0);
    }

    #[test]
    fn outflow_ghosts_copy_nearest_cell() {
        let mut f = FieldSet::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        f.fill_ghosts(BoundaryKind::Outflow);
        assert_eq!(&f.row(0)[..GHOST], &[1.0; GHOST]);
        assert_eq!(&f.row(0)[GHOST + 3..], &[3.0; GHOST]);
    }
}
