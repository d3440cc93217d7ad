//! Euler and pressureless Euler physics: states, numerical fluxes and the
//! characteristic basis used for reconstruction.

use crate::error::{Error, Result};
use crate::grid::FieldSet;

pub const GAMMA: f64 = 1.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState {
    pub rho: f64,
    pub mom: f64,
    pub energy: f64,
}

impl EulerState {
    pub fn from_primitive(rho: f64, u: f64, p: f64) -> Self {
        Self {
            rho,
            mom: rho * u,
            energy: p / (GAMMA - 1.0) + 0.5 * rho * u * u,
        }
    }

    #[inline]
    pub fn from_slice(u: &[f64]) -> Self {
        Self {
            rho: u[0],
            mom: u[1],
            energy: u[2],
        }
    }

    #[inline]
    pub fn conserved(&self) -> [f64; 3] {
        [self.rho, self.mom, self.energy]
    }

    #[inline]
    pub fn velocity(&self) -> f64 {
        self.mom / self.rho
    }

    #[inline]
    pub fn pressure(&self) -> f64 {
        (GAMMA - 1.0) * (self.energy - 0.5 * self.mom * self.mom / self.rho)
    }

    /// Fails unless `rho > 0` and `p > 0`.
    pub fn check(&self) -> Result<()> {
        let p = self.pressure();
        // written so that NaN fails too
        if !(self.rho > 0.0 && p > 0.0 && self.mom.is_finite() && self.energy.is_finite()) {
            return Err(Error::InadmissibleState { rho: self.rho, p });
        }
        Ok(())
    }

    pub fn sound_speed(&self) -> Result<f64> {
        self.check()?;
        Ok((GAMMA * self.pressure() / self.rho).sqrt())
    }

    #[inline]
    pub fn flux(&self) -> [f64; 3] {
        let u = self.velocity();
        let p = self.pressure();
        [self.mom, self.mom * u + p, u * (self.energy + p)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressurelessState {
    pub rho: f64,
    pub mom: f64,
}

impl PressurelessState {
    #[inline]
    pub fn from_slice(u: &[f64]) -> Self {
        Self { rho: u[0], mom: u[1] }
    }

    /// Zero in vacuum (`rho <= 0`).
    #[inline]
    pub fn velocity(&self) -> f64 {
        if self.rho > 0.0 {
            self.mom / self.rho
        } else {
            0.0
        }
    }

    #[inline]
    pub fn flux(&self) -> [f64; 2] {
        let u = self.velocity();
        let r = self.rho.max(0.0);
        [r * u, r * u * u]
    }
}

/// Wave speed estimate used for `s^+` in the HLLC flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HllcWaveSpeeds {
    /// `s^+ = max(u_r - c_r, u_r, u_r + c_r)`.
    Conventional,
    /// `s^+ = min(u_r - c_r, u_r, u_r + c_r)`.
    MinRight,
}

/// Which of the four HLLC branches produced a flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HllcCase {
    Left,
    StarLeft,
    StarRight,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HllcSpeeds {
    pub s_minus: f64,
    pub s_plus: f64,
    pub s_star: f64,
    pub p_lr: f64,
}

pub fn hllc_speeds(l: &EulerState, r: &EulerState, speeds: HllcWaveSpeeds) -> Result<HllcSpeeds> {
    let (cl, cr) = (l.sound_speed()?, r.sound_speed()?);
    let (ul, ur) = (l.velocity(), r.velocity());
    let (pl, pr) = (l.pressure(), r.pressure());
    let s_minus = ul - cl;
    let s_plus = match speeds {
        HllcWaveSpeeds::Conventional => ur + cr,
        HllcWaveSpeeds::MinRight => ur - cr,
    };
    let num = pr - pl + l.rho * ul * (s_minus - ul) - r.rho * ur * (s_plus - ur);
    let den = l.rho * (s_minus - ul) - r.rho * (s_plus - ur);
    let s_star = num / den;
    let p_lr = 0.5
        * (pr + pl + l.rho * (s_minus - ul) * (s_star - ul) + r.rho * (s_star - ur) * (s_plus - ur));
    Ok(HllcSpeeds {
        s_minus,
        s_plus,
        s_star,
        p_lr,
    })
}

fn star_flux(s_star: f64, s_k: f64, p_lr: f64, u: &EulerState) -> [f64; 3] {
    let f = u.flux();
    let q = u.conserved();
    let d = [0.0, 1.0, s_star];
    std::array::from_fn(|i| (s_star * (s_k * q[i] - f[i]) + s_k * p_lr * d[i]) / (s_k - s_star))
}

/// HLLC flux together with the branch that produced it.
pub fn hllc_flux_case(l: &EulerState, r: &EulerState, speeds: HllcWaveSpeeds) -> Result<([f64; 3], HllcCase)> {
    let s = hllc_speeds(l, r, speeds)?;
    Ok(if s.s_minus >= 0.0 {
        (l.flux(), HllcCase::Left)
    } else if s.s_star >= 0.0 {
        (star_flux(s.s_star, s.s_minus, s.p_lr, l), HllcCase::StarLeft)
    } else if s.s_plus >= 0.0 {
        (star_flux(s.s_star, s.s_plus, s.p_lr, r), HllcCase::StarRight)
    } else {
        (r.flux(), HllcCase::Right)
    })
}

pub fn hllc_flux(l: &EulerState, r: &EulerState, speeds: HllcWaveSpeeds) -> Result<[f64; 3]> {
    hllc_flux_case(l, r, speeds).map(|(f, _)| f)
}

/// Global Lax-Friedrichs flux with dissipation `alpha`.
pub fn lax_friedrichs_flux(l: &EulerState, r: &EulerState, alpha: f64) -> [f64; 3] {
    let (fl, fr) = (l.flux(), r.flux());
    let (ql, qr) = (l.conserved(), r.conserved());
    std::array::from_fn(|i| 0.5 * (fl[i] + fr[i]) - 0.5 * alpha * (qr[i] - ql[i]))
}

/// `max |u| + c` over the interior cells of an Euler field set.
pub fn max_wave_speed_euler(fields: &FieldSet) -> Result<f64> {
    let mut a: f64 = 0.0;
    for i in 0..fields.n_cells() {
        let s = EulerState::from_slice(&fields.state(i));
        let c = s.sound_speed().map_err(|e| e.at_interface(i))?;
        a = a.max(s.velocity().abs() + c);
    }
    Ok(a)
}

/// `max |u|` over the interior cells of a pressureless field set.
pub fn max_wave_speed_pressureless(fields: &FieldSet) -> f64 {
    (0..fields.n_cells())
        .map(|i| PressurelessState::from_slice(&fields.state(i)).velocity().abs())
        .fold(0.0, f64::max)
}

/// Godunov flux for pressureless gas dynamics.
pub fn godunov_pressureless_flux(l: &PressurelessState, r: &PressurelessState) -> [f64; 2] {
    let (ul, ur) = (l.velocity(), r.velocity());
    let (rl, rr) = (l.rho.max(0.0), r.rho.max(0.0));
    let left = [rl * ul, rl * ul * ul];
    let right = [rr * ur, rr * ur * ur];
    match (ul > 0.0, ur > 0.0) {
        (true, true) => left,
        (false, true) => [0.0, 0.0],
        (false, false) => right,
        (true, false) => {
            let (sl, sr) = (rl.sqrt(), rr.sqrt());
            let v = (sl * ul + sr * ur) / (sl + sr);
            if v > 0.0 {
                left
            } else if v < 0.0 {
                right
            } else {
                [0.5 * (left[0] + right[0]), left[1]]
            }
        }
    }
}

/// Eigenvectors of the Euler flux Jacobian at a linearization state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharBasis {
    /// Rows are left eigenvectors.
    pub left: [[f64; 3]; 3],
    /// Columns are right eigenvectors.
    pub right: [[f64; 3]; 3],
}

impl CharBasis {
    /// Basis at velocity `u`, enthalpy `h` and sound speed `c`.
    pub fn from_uhc(u: f64, h: f64, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 1e-12 * (1.0 + u.abs())) {
            return Err(Error::DegenerateEigensystem { c });
        }
        let b1 = (GAMMA - 1.0) / (c * c);
        let b2 = 0.5 * b1 * u * u;
        let left = [
            [0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1],
            [1.0 - b2, b1 * u, -b1],
            [0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1],
        ];
        let right = [
            [1.0, 1.0, 1.0],
            [u - c, u, u + c],
            [h - u * c, 0.5 * u * u, h + u * c],
        ];
        Ok(Self { left, right })
    }

    /// Roe-averaged basis of the pair `(l, r)`.
    pub fn roe(l: &EulerState, r: &EulerState) -> Result<Self> {
        l.check()?;
        r.check()?;
        let (sl, sr) = (l.rho.sqrt(), r.rho.sqrt());
        let hl = (l.energy + l.pressure()) / l.rho;
        let hr = (r.energy + r.pressure()) / r.rho;
        let u = (sl * l.velocity() + sr * r.velocity()) / (sl + sr);
        let h = (sl * hl + sr * hr) / (sl + sr);
        let c2 = (GAMMA - 1.0) * (h - 0.5 * u * u);
        if !(c2 > 0.0) {
            return Err(Error::DegenerateEigensystem { c: c2.max(0.0).sqrt() });
        }
        Self::from_uhc(u, h, c2.sqrt())
    }

    #[inline]
    pub fn project(&self, q: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|k| self.left[k].iter().zip(q).map(|(a, b)| a * b).sum())
    }

    #[inline]
    pub fn unproject(&self, w: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.right[i].iter().zip(w).map(|(a, b)| a * b).sum())
    }
}
