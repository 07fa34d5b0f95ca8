//! Experiment configuration: a JSON document with nested sections. Unknown
//! keys are rejected and every error carries the path of the offending field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr::parse_fn;
use super::Suite;
use crate::cocycles::{coboundary, cocycle_from_g, Semicocycle};
use crate::flows::{make_catalog_semiflow, semiflow_from_generator, OdeCfg, Semiflow};
use crate::holo::{Domain, HoloFn, QuadPolicy};
use crate::spaces::{SpaceKind, SpaceSpec, Weight};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightCfg {
    One,
    Standard { alpha: f64 },
    ExpAbs { rate: f64 },
    Expr { expr: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceCfg {
    Hardy { p: f64 },
    Bergman { alpha: f64, p: f64 },
    Dirichlet,
    /// `ℬ_α`; give either `alpha` or a general `weight`.
    Bloch {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight: Option<WeightCfg>,
    },
    Hv { weight: WeightCfg },
    Cv { weight: WeightCfg },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FlowCfg {
    Catalog {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Ode {
        generator: String,
        #[serde(default)]
        ode: OdeCfg,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroCfg {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CocycleCfg {
    One,
    Derivative,
    Integral { g: String },
    Multiplication { g: String },
    Coboundary {
        omega: String,
        #[serde(default)]
        zeros: Vec<ZeroCfg>,
    },
}

/// A corpus entry: an expression, optionally with its expected norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorpusItem {
    Expr(String),
    WithExpected {
        expr: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<f64>,
    },
}

impl CorpusItem {
    pub fn expr(&self) -> &str {
        match self {
            CorpusItem::Expr(e) | CorpusItem::WithExpected { expr: e, .. } => e,
        }
    }

    pub fn expected(&self) -> Option<f64> {
        match self {
            CorpusItem::Expr(_) => None,
            CorpusItem::WithExpected { expected, .. } => *expected,
        }
    }
}

/// Verdict tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Law residuals of closed-form constructions.
    pub law: f64,
    /// Law residuals involving quadrature-built cocycles or ODE flows.
    pub law_quadrature: f64,
    /// Relative error of a norm against its expected value.
    pub norm: f64,
    pub saks_gap: f64,
    pub bound_slack: f64,
    pub generator: f64,
    pub order_min: f64,
    pub conv: f64,
    pub norm_cap: f64,
    /// ODE flow against the reference flow.
    pub ode: f64,
    /// Generator recovered by finite differences.
    pub fd: f64,
    pub admissibility: f64,
    /// Coboundary value at a fixed point against `φ_t′(b)^{ord}`.
    pub coboundary: f64,
    /// Slack on `ω ≤ 0` and `M ≤ 1` for contractive cocycles.
    pub growth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            law: 1e-10,
            law_quadrature: 1e-7,
            norm: 1e-6,
            saks_gap: 1e-3,
            bound_slack: 1e-3,
            generator: 1e-4,
            order_min: 0.9,
            conv: 1e-3,
            norm_cap: 1e6,
            ode: 1e-6,
            fd: 1e-5,
            admissibility: 1e-8,
            coboundary: 1e-9,
            growth: 1e-6,
        }
    }
}

/// Pointwise sample grid: polar on the disc, uniform on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridCfg {
    pub radius: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub half_width: f64,
    pub n_line: usize,
}

impl Default for GridCfg {
    fn default() -> Self {
        GridCfg {
            radius: 0.95,
            n_r: 5,
            n_theta: 16,
            half_width: 10.0,
            n_line: 41,
        }
    }
}

impl GridCfg {
    pub fn points(&self, domain: Domain) -> Vec<Complex> {
        if domain.is_real() {
            crate::holo::real_grid(self.half_width, self.n_line)
        } else {
            crate::holo::polar_grid(self.radius, self.n_r, self.n_theta)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepCfg {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub radii: Vec<f64>,
    pub steps: Vec<f64>,
    pub grid: GridCfg,
    /// Sample radius for generator residuals.
    pub generator_radius: f64,
    /// Fixed points for admissibility; found from the generator when empty.
    pub fixed_points: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_gamma: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_norm: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_admissible: Option<bool>,
}

impl Default for SweepCfg {
    fn default() -> Self {
        SweepCfg {
            t: vec![0.0, 0.1, 0.5, 1.0],
            s: vec![0.0, 0.1, 0.5, 1.0],
            radii: vec![0.5, 0.9, 0.99, 0.999, 0.9999],
            steps: crate::flows::DEFAULT_FD_STEPS.to_vec(),
            grid: GridCfg::default(),
            generator_radius: 0.9,
            fixed_points: Vec::new(),
            expect_gamma: None,
            expect_norm: None,
            expect_admissible: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    pub space: SpaceCfg,
    #[serde(default = "default_flow")]
    pub flow: FlowCfg,
    #[serde(default = "default_cocycle")]
    pub cocycle: CocycleCfg,
    /// Catalog flow to compare an ODE flow against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<FlowCfg>,
    /// Test functions; suite-specific defaults when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<Vec<CorpusItem>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sweep: SweepCfg,
    #[serde(default)]
    pub policy: QuadPolicy,
}

fn default_flow() -> FlowCfg {
    FlowCfg::Catalog {
        name: "identity".into(),
        params: BTreeMap::new(),
    }
}

fn default_cocycle() -> CocycleCfg {
    CocycleCfg::One
}

fn cfg_err(path: &str, e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => Error::Config {
            path: path.to_string(),
            msg: other.to_string(),
        },
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
            path: e.path().to_string(),
            msg: e.inner().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks everything that can be checked without running a suite:
    /// parameter ranges, expressions and constructor names.
    pub fn validate(&self) -> Result<()> {
        self.policy.validate().map_err(|e| cfg_err("policy", e))?;
        let space = self.build_space()?;
        let phi = self.build_flow()?;
        if phi.domain().is_real() != space.domain().is_real() {
            return Err(Error::Config {
                path: "flow".into(),
                msg: format!("flow on {} does not act on {}", phi.domain(), space.label()),
            });
        }
        if let Some(r) = &self.reference {
            build_flow(r, space.domain(), "reference")?;
        }
        self.build_cocycle(&phi)?;
        self.build_corpus(space.domain())?;
        let sw = &self.sweep;
        let check = |ok: bool, path: &str, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Config {
                    path: path.into(),
                    msg: msg.into(),
                })
            }
        };
        check(sw.t.iter().all(|&t| t >= 0.0 && t.is_finite()), "sweep.t", "times must be finite and >= 0")?;
        check(sw.s.iter().all(|&t| t >= 0.0 && t.is_finite()), "sweep.s", "times must be finite and >= 0")?;
        check(sw.radii.iter().all(|r| (0.0..1.0).contains(r)), "sweep.radii", "radii must lie in [0,1)")?;
        check(
            sw.steps.len() >= 2 && sw.steps.iter().all(|&h| h > 0.0) && sw.steps.windows(2).all(|w| w[1] < w[0]),
            "sweep.steps",
            "need at least two positive decreasing steps",
        )?;
        check(
            sw.grid.radius > 0.0 && sw.grid.radius < 1.0 && sw.grid.n_r > 0 && sw.grid.n_theta > 0 && sw.grid.n_line >= 2,
            "sweep.grid",
            "grid radius must lie in (0,1) and counts must be positive",
        )?;
        check(
            sw.generator_radius > 0.0 && sw.generator_radius.is_finite(),
            "sweep.generator_radius",
            "must be positive",
        )?;
        Ok(())
    }

    pub fn build_space(&self) -> Result<SpaceSpec> {
        let weight = |w: &WeightCfg, domain: Domain, path: &str| -> Result<Weight> {
            Ok(match w {
                WeightCfg::One => Weight::One,
                WeightCfg::Standard { alpha } => Weight::Standard { alpha: *alpha },
                WeightCfg::ExpAbs { rate } => Weight::ExpAbs { rate: *rate },
                WeightCfg::Expr { expr } => {
                    Weight::Custom(parse_fn(expr, domain).map_err(|e| cfg_err(&format!("{path}.expr"), e))?)
                }
            })
        };
        let disc = Domain::UnitDisc;
        let kind = match &self.space {
            SpaceCfg::Hardy { p } => SpaceKind::Hardy { p: *p },
            SpaceCfg::Bergman { alpha, p } => SpaceKind::Bergman { alpha: *alpha, p: *p },
            SpaceCfg::Dirichlet => SpaceKind::Dirichlet,
            SpaceCfg::Bloch { alpha, weight: w } => {
                let w = match (alpha, w) {
                    (Some(a), None) if *a > 0.0 => Weight::Standard { alpha: *a },
                    (None, Some(w)) => weight(w, disc, "space.weight")?,
                    _ => {
                        return Err(Error::Config {
                            path: "space".into(),
                            msg: "bloch needs either alpha > 0 or weight".into(),
                        })
                    }
                };
                SpaceKind::BlochWeighted { weight: w }
            }
            SpaceCfg::Hv { weight: w } => SpaceKind::SupWeightedHolo {
                weight: weight(w, disc, "space.weight")?,
            },
            SpaceCfg::Cv { weight: w } => SpaceKind::SupWeightedCont {
                weight: weight(w, Domain::real_line(), "space.weight")?,
            },
        };
        SpaceSpec::new(kind, self.policy).map_err(|e| cfg_err("space", e))
    }

    pub fn build_flow(&self) -> Result<Semiflow> {
        let domain = match self.space {
            SpaceCfg::Cv { .. } => Domain::real_line(),
            _ => Domain::UnitDisc,
        };
        build_flow(&self.flow, domain, "flow")
    }

    pub fn build_reference(&self) -> Result<Option<Semiflow>> {
        let domain = self.build_space()?.domain();
        self.reference
            .as_ref()
            .map(|r| build_flow(r, domain, "reference"))
            .transpose()
    }

    pub fn build_cocycle(&self, phi: &Semiflow) -> Result<Semicocycle> {
        let domain = phi.domain();
        let f = |src: &str, path: &str| parse_fn(src, domain).map_err(|e| cfg_err(path, e));
        Ok(match &self.cocycle {
            CocycleCfg::One => Semicocycle::one(),
            CocycleCfg::Derivative => Semicocycle::derivative_of(phi, &self.policy),
            CocycleCfg::Integral { g } => cocycle_from_g(f(g, "cocycle.g")?, phi, &self.policy),
            CocycleCfg::Multiplication { g } => Semicocycle::multiplication(f(g, "cocycle.g")?),
            CocycleCfg::Coboundary { omega, zeros } => {
                let orders: Vec<(Complex, u32)> = zeros.iter().map(|z| (Complex::new(z.re, z.im), z.order)).collect();
                coboundary(f(omega, "cocycle.omega")?, phi, &orders, &self.policy).map_err(|e| cfg_err("cocycle", e))?
            }
        })
    }

    /// The configured corpus with expected values, or `None` for the suite
    /// default.
    pub fn build_corpus(&self, domain: Domain) -> Result<Option<Vec<(HoloFn, Option<f64>)>>> {
        let Some(items) = &self.corpus else {
            return Ok(None);
        };
        items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let f = parse_fn(item.expr(), domain).map_err(|e| cfg_err(&format!("corpus[{i}]"), e))?;
                Ok((f, item.expected()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn build_flow(cfg: &FlowCfg, domain: Domain, path: &str) -> Result<Semiflow> {
    match cfg {
        FlowCfg::Catalog { name, params } => make_catalog_semiflow(name, params).map_err(|e| cfg_err(path, e)),
        FlowCfg::Ode { generator, ode } => {
            let g = parse_fn(generator, domain).map_err(|e| cfg_err(&format!("{path}.generator"), e))?;
            semiflow_from_generator(g, *ode).map_err(|e| cfg_err(&format!("{path}.ode"), e))
        }
    }
}
