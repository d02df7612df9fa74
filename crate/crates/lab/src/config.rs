//! TOML run configuration: parsing, validation with line diagnostics, and
//! the canonical hash stamped on every output.

use std::fmt;
use std::path::PathBuf;

use mfbose_core::model::{MomentumLattice, Observable, ObservableSpec, Potential};
use mfbose_core::solver::SolverOptions;
use mfbose_core::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Spanned;

/// A rejected configuration, located as precisely as the parser allows.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// An explicit list or `{ start, stop, points }` with both ends included.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl Grid {
    fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { points: 0, .. } => Vec::new(),
            Grid::Range { start, points: 1, .. } => vec![*start],
            Grid::Range { start, stop, points } => (0..*points)
                .map(|i| start + (stop - start) * i as f64 / (*points - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeSection {
    dim: Spanned<usize>,
    cutoff: Spanned<i32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialSection {
    preset: Spanned<String>,
    values: Option<Spanned<Vec<f64>>>,
    scale: Option<Spanned<f64>>,
    coefficients: Option<Spanned<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableSection {
    preset: Spanned<String>,
    k: Option<Spanned<Vec<i32>>>,
    re: Option<Spanned<Vec<f64>>>,
    im: Option<Spanned<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    particles: Spanned<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridsSection {
    lambda: Option<Spanned<Grid>>,
    x: Option<Spanned<Grid>>,
    s: Option<Spanned<Grid>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExcitationsSection {
    cap: Option<Spanned<usize>>,
    n_max: Option<Spanned<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSection {
    tol: Option<Spanned<f64>>,
    expm_tol: Option<Spanned<f64>>,
    dense_limit: Option<Spanned<usize>>,
    basis_limit: Option<Spanned<usize>>,
    krylov_dim: Option<Spanned<usize>>,
    kpm_moments: Option<Spanned<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifySection {
    seed: Option<u64>,
    field_norm: Option<Spanned<f64>>,
    s: Option<Spanned<f64>>,
    particles: Option<Spanned<usize>>,
    lambdas: Option<Spanned<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lattice: LatticeSection,
    potential: PotentialSection,
    observable: ObservableSection,
    run: RunSection,
    #[serde(default)]
    grids: GridsSection,
    #[serde(default)]
    excitations: ExcitationsSection,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    verify: VerifySection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeConfig {
    pub dim: usize,
    pub cutoff: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialConfig {
    pub preset: String,
    /// One value per lattice mode, resolved from the preset.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum ObservableConfig {
    CosMode { k: [i32; 3] },
    SinMode { k: [i32; 3] },
    /// Row-major real and imaginary parts.
    Matrix { re: Vec<f64>, im: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub expm_tol: f64,
    pub dense_limit: usize,
    pub basis_limit: usize,
    pub krylov_dim: usize,
    pub kpm_moments: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub field_norm: f64,
    pub s: f64,
    pub particles: usize,
    pub lambdas: Vec<f64>,
}

/// A validated configuration. Everything except `output_dir` enters the
/// hash.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub lattice: LatticeConfig,
    pub potential: PotentialConfig,
    pub observable: ObservableConfig,
    pub particles: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub xs: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub cap: usize,
    pub n_max: usize,
    pub solver: SolverConfig,
    pub verify: VerifyConfig,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
}

/// Lattice, potential and observable built from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Model {
    pub lattice: MomentumLattice,
    pub potential: Potential,
    pub observable: Observable,
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn err<T>(&self, field: &str, span: Option<std::ops::Range<usize>>, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError {
            line: span.map(|s| line_of(self.src, s.start)),
            field: field.to_string(),
            message: message.into(),
        })
    }

    fn positive(&self, field: &str, v: &Option<Spanned<f64>>, default: f64) -> Result<f64, ConfigError> {
        match v {
            None => Ok(default),
            Some(s) if s.get_ref().is_finite() && *s.get_ref() > 0.0 => Ok(*s.get_ref()),
            Some(s) => self.err(field, Some(s.span()), "must be a positive number"),
        }
    }

    fn count(&self, field: &str, v: &Option<Spanned<usize>>, default: usize) -> Result<usize, ConfigError> {
        match v {
            None => Ok(default),
            Some(s) if *s.get_ref() > 0 => Ok(*s.get_ref()),
            Some(s) => self.err(field, Some(s.span()), "must be positive"),
        }
    }

    fn grid(&self, field: &str, g: &Option<Spanned<Grid>>, default: Grid) -> Result<(Vec<f64>, Option<std::ops::Range<usize>>), ConfigError> {
        let (values, span) = match g {
            Some(s) => (s.get_ref().values(), Some(s.span())),
            None => (default.values(), None),
        };
        if values.is_empty() {
            return self.err(field, span, "grid is empty");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return self.err(field, span, "grid values must be finite");
        }
        Ok((values, span))
    }
}

pub const DEFAULT_CAP: usize = 16;
pub const DEFAULT_N_MAX: usize = 8;

impl RunConfig {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of(src, s.start)),
            field: "config".into(),
            message: e.message().trim().to_string(),
        })?;
        let cx = Ctx { src };

        let lattice = LatticeConfig {
            dim: *raw.lattice.dim.get_ref(),
            cutoff: *raw.lattice.cutoff.get_ref(),
        };
        let l = match MomentumLattice::new(lattice.dim, lattice.cutoff) {
            Ok(l) => l,
            Err(e) => {
                let (field, span) = if matches!(e, mfbose_core::error::ModelError::BadDimension(_)) {
                    ("lattice.dim", raw.lattice.dim.span())
                } else {
                    ("lattice.cutoff", raw.lattice.cutoff.span())
                };
                return cx.err(field, Some(span), e.to_string());
            }
        };

        let potential = resolve_potential(&cx, &raw.potential, &l)?;
        let observable = resolve_observable(&cx, &raw.observable, &l)?;

        let particles = raw.run.particles.get_ref().clone();
        let pspan = Some(raw.run.particles.span());
        if particles.is_empty() {
            return cx.err("run.particles", pspan, "list is empty");
        }
        if let Some(n) = particles.iter().find(|&&n| n < 2) {
            return cx.err("run.particles", pspan, format!("N must be at least 2 (got {n})"));
        }
        if particles.windows(2).any(|w| w[1] <= w[0]) {
            return cx.err("run.particles", pspan, "list must be strictly ascending");
        }

        let (lambdas, lspan) = cx.grid("grids.lambda", &raw.grids.lambda, Grid::Range { start: 0.0, stop: 2.0, points: 41 })?;
        if lambdas.iter().any(|&l| l < 0.0) {
            return cx.err("grids.lambda", lspan, "λ must be non-negative");
        }
        let (xs, _) = cx.grid("grids.x", &raw.grids.x, Grid::Range { start: 0.0, stop: 0.4, points: 21 })?;
        let (s_grid, sspan) = cx.grid("grids.s", &raw.grids.s, Grid::List(vec![0.0, 0.25, 0.5, 0.75, 1.0]))?;
        if s_grid.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return cx.err("grids.s", sspan, "s must lie in [0, 1]");
        }

        let defaults = SolverOptions::default();
        let solver = SolverConfig {
            tol: cx.positive("solver.tol", &raw.solver.tol, defaults.tol)?,
            expm_tol: cx.positive("solver.expm_tol", &raw.solver.expm_tol, defaults.expm_tol)?,
            dense_limit: cx.count("solver.dense_limit", &raw.solver.dense_limit, defaults.dense_limit)?,
            basis_limit: cx.count("solver.basis_limit", &raw.solver.basis_limit, mfbose_core::fock::DEFAULT_BASIS_LIMIT)?,
            krylov_dim: cx.count("solver.krylov_dim", &raw.solver.krylov_dim, defaults.krylov_dim)?,
            kpm_moments: cx.count("solver.kpm_moments", &raw.solver.kpm_moments, defaults.kpm_moments)?,
        };

        let verify_n = match &raw.verify.particles {
            None => particles[0],
            Some(s) if *s.get_ref() >= 2 => *s.get_ref(),
            Some(s) => return cx.err("verify.particles", Some(s.span()), "N must be at least 2"),
        };
        let vs = match &raw.verify.s {
            None => 0.3,
            Some(s) if s.get_ref().is_finite() => *s.get_ref(),
            Some(s) => return cx.err("verify.s", Some(s.span()), "must be finite"),
        };
        let vl = match &raw.verify.lambdas {
            None => vec![0.0, 0.1, 0.5],
            Some(s) if !s.get_ref().is_empty() && s.get_ref().iter().all(|l| l.is_finite() && *l >= 0.0) => s.get_ref().clone(),
            Some(s) => return cx.err("verify.lambdas", Some(s.span()), "need a nonempty list of non-negative λ"),
        };
        let verify = VerifyConfig {
            seed: raw.verify.seed.unwrap_or(1),
            field_norm: cx.positive("verify.field_norm", &raw.verify.field_norm, 0.25)?,
            s: vs,
            particles: verify_n,
            lambdas: vl,
        };

        Ok(Self {
            lattice,
            potential,
            observable,
            particles,
            lambdas,
            xs,
            s_grid,
            cap: cx.count("excitations.cap", &raw.excitations.cap, DEFAULT_CAP)?,
            n_max: cx.count("excitations.n_max", &raw.excitations.n_max, DEFAULT_N_MAX)?,
            solver,
            verify,
            output_dir: raw.output.dir.map(PathBuf::from),
        })
    }

    pub fn model(&self) -> Model {
        // parse already built each piece once, so these cannot fail
        let lattice = MomentumLattice::new(self.lattice.dim, self.lattice.cutoff).expect("validated lattice");
        let potential = Potential::validate(self.potential.coefficients.clone(), &lattice).expect("validated potential");
        let observable = Observable::build(&self.observable.spec(), &lattice).expect("validated observable");
        Model {
            lattice,
            potential,
            observable,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.solver.tol,
            expm_tol: self.solver.expm_tol,
            dense_limit: self.solver.dense_limit,
            krylov_dim: self.solver.krylov_dim,
            kpm_moments: self.solver.kpm_moments,
            ..SolverOptions::default()
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl ObservableConfig {
    pub fn spec(&self) -> ObservableSpec {
        match self {
            ObservableConfig::CosMode { k } => ObservableSpec::CosMode(*k),
            ObservableConfig::SinMode { k } => ObservableSpec::SinMode(*k),
            ObservableConfig::Matrix { re, im } => {
                ObservableSpec::Matrix(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
            }
        }
    }
}

fn resolve_potential(cx: &Ctx, sec: &PotentialSection, l: &MomentumLattice) -> Result<PotentialConfig, ConfigError> {
    let preset = sec.preset.get_ref().as_str();
    let need = |v: &Option<Spanned<Vec<f64>>>, key: &str| -> Result<(Vec<f64>, std::ops::Range<usize>), ConfigError> {
        match v {
            Some(s) => Ok((s.get_ref().clone(), s.span())),
            None => cx.err(&format!("potential.{key}"), Some(sec.preset.span()), format!("preset \"{preset}\" needs `{key}`")),
        }
    };
    let (built, field, span) = match preset {
        "zero" => (Ok(Potential::zero(l)), "potential.preset", sec.preset.span()),
        "constant" => match &sec.scale {
            Some(s) => (Potential::constant(l, *s.get_ref()), "potential.scale", s.span()),
            None => return cx.err("potential.scale", Some(sec.preset.span()), "preset \"constant\" needs `scale`"),
        },
        "shells" => {
            let (v, span) = need(&sec.values, "values")?;
            (Potential::shells(l, &v), "potential.values", span)
        }
        "table" => {
            let (v, span) = need(&sec.coefficients, "coefficients")?;
            (Potential::validate(v, l), "potential.coefficients", span)
        }
        other => {
            return cx.err(
                "potential.preset",
                Some(sec.preset.span()),
                format!("unknown preset \"{other}\" (expected zero, constant, shells or table)"),
            )
        }
    };
    match built {
        Ok(p) => Ok(PotentialConfig {
            preset: preset.to_string(),
            coefficients: p.coeffs().to_vec(),
        }),
        Err(e) => cx.err(field, Some(span), e.to_string()),
    }
}

fn resolve_observable(cx: &Ctx, sec: &ObservableSection, l: &MomentumLattice) -> Result<ObservableConfig, ConfigError> {
    let preset = sec.preset.get_ref().as_str();
    let mode = || -> Result<[i32; 3], ConfigError> {
        let Some(k) = &sec.k else {
            return cx.err("observable.k", Some(sec.preset.span()), format!("preset \"{preset}\" needs `k`"));
        };
        let v = k.get_ref();
        if v.is_empty() || v.len() > 3 {
            return cx.err("observable.k", Some(k.span()), "k needs one to three integer components");
        }
        let mut out = [0; 3];
        out[..v.len()].copy_from_slice(v);
        Ok(out)
    };
    let (cfg, span) = match preset {
        "cos-mode" => (ObservableConfig::CosMode { k: mode()? }, sec.k.as_ref().map(|k| k.span())),
        "sin-mode" => (ObservableConfig::SinMode { k: mode()? }, sec.k.as_ref().map(|k| k.span())),
        "matrix" => {
            let Some(re) = &sec.re else {
                return cx.err("observable.re", Some(sec.preset.span()), "preset \"matrix\" needs `re`");
            };
            let im = match &sec.im {
                Some(im) => im.get_ref().clone(),
                None => vec![0.0; re.get_ref().len()],
            };
            if im.len() != re.get_ref().len() {
                return cx.err("observable.im", sec.im.as_ref().map(|s| s.span()), "`im` and `re` differ in length");
            }
            (
                ObservableConfig::Matrix {
                    re: re.get_ref().clone(),
                    im,
                },
                Some(re.span()),
            )
        }
        other => {
            return cx.err(
                "observable.preset",
                Some(sec.preset.span()),
                format!("unknown preset \"{other}\" (expected cos-mode, sin-mode or matrix)"),
            )
        }
    };
    match Observable::build(&cfg.spec(), l) {
        Ok(_) => Ok(cfg),
        Err(e) => cx.err(&format!("observable.{}", if preset == "matrix" { "re" } else { "k" }), span, e.to_string()),
    }
}
