//! Run configuration and its flat `key = value` text format.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hybrid::{DifferenceScaling, HybridParams};
use crate::physics::HllcWaveSpeeds;
use crate::rbf::{ClampResponse, DerivativeAccuracy, DiscriminantPolicy, RootChoice, ShapeOptions};
use crate::weno::{NegativeWeightPolicy, WenoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    WenoJs5,
    RbfWenoP1,
    RbfWenoP2,
    /// Second-order shape estimates with the hybrid selector forced on.
    HybridRbfWeno,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::WenoJs5,
        SchemeId::RbfWenoP1,
        SchemeId::RbfWenoP2,
        SchemeId::HybridRbfWeno,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::WenoJs5 => "weno_js5",
            SchemeId::RbfWenoP1 => "rbf_weno_p1",
            SchemeId::RbfWenoP2 => "rbf_weno_p2",
            SchemeId::HybridRbfWeno => "hybrid_rbf_weno",
        }
    }

    pub fn is_rbf(self) -> bool {
        self != SchemeId::WenoJs5
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "scheme",
                name: s.to_string(),
            })
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxId {
    Hllc,
    LaxFriedrichs,
    GodunovPressureless,
}

impl FluxId {
    pub const ALL: [FluxId; 3] = [FluxId::Hllc, FluxId::LaxFriedrichs, FluxId::GodunovPressureless];

    pub fn name(self) -> &'static str {
        match self {
            FluxId::Hllc => "hllc",
            FluxId::LaxFriedrichs => "lax_friedrichs",
            FluxId::GodunovPressureless => "godunov_pressureless",
        }
    }
}

impl FromStr for FluxId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "flux",
                name: s.to_string(),
            })
    }
}

impl fmt::Display for FluxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to run one case. Unset optional values fall back to the
/// problem's defaults (`n_cells`, `t_final`, `flux`) or to `dx^2` (`delta_mag`,
/// `eps_weights`).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub scheme: SchemeId,
    pub flux: Option<FluxId>,
    pub cfl: f64,
    pub t_final: Option<f64>,
    pub n_cells: Option<usize>,
    pub quad_order: usize,
    pub out: Option<PathBuf>,
    /// Overrides the derivative accuracy implied by the scheme id.
    pub p: Option<u8>,
    pub hybrid: bool,
    pub hybrid_params: HybridParams,
    pub s_max: f64,
    pub delta_mag: Option<f64>,
    pub eps_weights: Option<f64>,
    pub hllc_speeds: HllcWaveSpeeds,
    pub negative_weights: NegativeWeightPolicy,
    pub discriminant: DiscriminantPolicy,
    pub root: RootChoice,
    pub on_clamp: ClampResponse,
    pub characteristic: bool,
    /// Bound-preserving edge limiter for the pressureless system.
    pub bound_limiter: bool,
    /// Fall back to the cell average where a reconstructed Euler state has
    /// nonpositive density or pressure.
    pub admissibility_fallback: bool,
    /// Caps `dt` at `C dx^2` so that time stepping error shrinks with the
    /// spatial one; `C` is fixed by `dt_cap_cells`.
    pub dt_cap: bool,
    /// Resolution at which the `dx^2` cap equals the CFL step.
    pub dt_cap_cells: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "smooth_advection".into(),
            scheme: SchemeId::RbfWenoP2,
            flux: None,
            cfl: 0.4,
            t_final: None,
            n_cells: None,
            quad_order: 5,
            out: None,
            p: None,
            hybrid: true,
            hybrid_params: HybridParams::default(),
            s_max: crate::rbf::MAX_SHAPE,
            delta_mag: None,
            eps_weights: None,
            hllc_speeds: HllcWaveSpeeds::Conventional,
            negative_weights: NegativeWeightPolicy::PolynomialWeights,
            discriminant: DiscriminantPolicy::ComplexPair,
            root: RootChoice::Smaller,
            on_clamp: ClampResponse::Polynomial,
            characteristic: true,
            bound_limiter: true,
            admissibility_fallback: true,
            dt_cap: false,
            dt_cap_cells: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value `{v}` for `{key}`")))
}

fn parse_switch(key: &str, v: &str) -> Result<bool> {
    match v {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::InvalidConfig(format!("`{key}` expects on/off, got `{v}`"))),
    }
}

fn parse_auto<T: FromStr>(key: &str, v: &str) -> Result<Option<T>> {
    if v == "auto" {
        Ok(None)
    } else {
        parse(key, v).map(Some)
    }
}

/// Splits `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Sets one key; `-` and `_` are interchangeable in key names.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "problem" => self.problem = v.to_string(),
            "scheme" => self.scheme = v.parse()?,
            "flux" => self.flux = Some(v.parse()?),
            "cfl" => self.cfl = parse(&key, v)?,
            "t_final" | "tfinal" => self.t_final = parse_auto(&key, v)?,
            "n" | "n_cells" => self.n_cells = parse_auto(&key, v)?,
            "quad_order" => self.quad_order = parse(&key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "p" => self.p = Some(parse(&key, v)?),
            "hybrid" => self.hybrid = parse_switch(&key, v)?,
            "theta" => self.hybrid_params.theta = parse(&key, v)?,
            "kappa" => self.hybrid_params.kappa = parse(&key, v)?,
            "eps_hyb" => self.hybrid_params.eps = parse(&key, v)?,
            "buffer" => self.hybrid_params.buffer = parse(&key, v)?,
            "hybrid_differences" => {
                self.hybrid_params.scaling = match v {
                    "undivided" => DifferenceScaling::Undivided,
                    "divided" => DifferenceScaling::Divided,
                    _ => return Err(Error::InvalidConfig(format!("bad hybrid_differences `{v}`"))),
                }
            }
            "s_max" => self.s_max = parse(&key, v)?,
            "on_clamp" => {
                self.on_clamp = match v {
                    "saturate" => ClampResponse::Saturate,
                    "polynomial" => ClampResponse::Polynomial,
                    _ => return Err(Error::InvalidConfig(format!("bad on_clamp `{v}`"))),
                }
            }
            "delta_mag" => self.delta_mag = parse_auto(&key, v)?,
            "eps_weights" => self.eps_weights = parse_auto(&key, v)?,
            "hllc_speeds" => {
                self.hllc_speeds = match v {
                    "conventional" => HllcWaveSpeeds::Conventional,
                    "min_right" => HllcWaveSpeeds::MinRight,
                    _ => return Err(Error::InvalidConfig(format!("bad hllc_speeds `{v}`"))),
                }
            }
            "negative_weights" => {
                self.negative_weights = match v {
                    "big_stencil" => NegativeWeightPolicy::BigStencil,
                    "polynomial" => NegativeWeightPolicy::PolynomialWeights,
                    _ => return Err(Error::InvalidConfig(format!("bad negative_weights `{v}`"))),
                }
            }
            "discriminant" => {
                self.discriminant = match v {
                    "complex" => DiscriminantPolicy::ComplexPair,
                    "local" => DiscriminantPolicy::LocalFormula,
                    _ => return Err(Error::InvalidConfig(format!("bad discriminant `{v}`"))),
                }
            }
            "root" => {
                self.root = match v {
                    "minus" => RootChoice::Minus,
                    "plus" => RootChoice::Plus,
                    "smaller" => RootChoice::Smaller,
                    _ => return Err(Error::InvalidConfig(format!("bad root `{v}`"))),
                }
            }
            "bound_limiter" => self.bound_limiter = parse_switch(&key, v)?,
            "admissibility_fallback" => self.admissibility_fallback = parse_switch(&key, v)?,
            "characteristic" => self.characteristic = parse_switch(&key, v)?,
            "dt_cap" => self.dt_cap = parse_switch(&key, v)?,
            "dt_cap_cells" => self.dt_cap_cells = parse_auto(&key, v)?,
            _ => {
                return Err(Error::Unknown {
                    kind: "config key",
                    name: key,
                })
            }
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (k, v) in parse_key_values(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidConfig(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if self.quad_order < 5 {
            return Err(Error::InvalidConfig(format!(
                "quad_order must be >= 5, got {}",
                self.quad_order
            )));
        }
        if let Some(p) = self.p {
            DerivativeAccuracy::from_order(p)?;
        }
        if let Some(t) = self.t_final {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig(format!("t_final must be >= 0, got {t}")));
            }
        }
        if self.n_cells == Some(0) {
            return Err(Error::InvalidConfig("n_cells must be positive".into()));
        }
        if !(self.s_max > 0.0 && self.s_max <= crate::rbf::MAX_SHAPE) {
            return Err(Error::InvalidConfig(format!(
                "s_max must lie in (0, {}], got {}",
                crate::rbf::MAX_SHAPE,
                self.s_max
            )));
        }
        Ok(())
    }

    pub fn accuracy(&self) -> DerivativeAccuracy {
        let p = self.p.unwrap_or(match self.scheme {
            SchemeId::RbfWenoP1 => 1,
            _ => 2,
        });
        DerivativeAccuracy::from_order(p).unwrap_or(DerivativeAccuracy::Second)
    }

    /// Whether the hybrid selector is active for this scheme.
    pub fn hybrid_active(&self) -> bool {
        match self.scheme {
            SchemeId::WenoJs5 => false,
            SchemeId::HybridRbfWeno => true,
            _ => self.hybrid,
        }
    }

    pub fn weno_params(&self) -> WenoParams {
        WenoParams {
            shape: ShapeOptions {
                s_max: self.s_max,
                accuracy: self.accuracy(),
                root: self.root,
                negative_discriminant: self.discriminant,
                on_clamp: self.on_clamp,
            },
            delta_mag: self.delta_mag,
            eps_weights: self.eps_weights,
            negative_weights: self.negative_weights,
        }
    }
}
