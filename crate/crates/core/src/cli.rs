//! Command line front end: a serializable [`RunConfig`], [`run`] to execute
//! it and write the reports, and [`replay`] to re-run a manifest.
//!
//! Every run writes `manifest.json` next to its reports. The manifest holds
//! the full configuration, so replaying it reproduces the reports byte for
//! byte; Monte Carlo verbs draw from the recorded seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogSystem};
use crate::complexity::{self, admissible_interval};
use crate::error::{invalid, Error, Result};
use crate::liftability::{self, FiniteShift, GammaMode, GateInput, SymbolSet};
use crate::measure::lift_measure;
use crate::potential::normalize;
use crate::pressure::{self, Truncation};
use crate::scheme::BlockId;
use crate::stats;

/// `a:b:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        complexity::grid(self.start, self.end, self.step)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not of the form a:b:step"));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{x}` is not a number"))
        };
        let g = GridSpec {
            start: num(a)?,
            end: num(b)?,
            step: num(c)?,
        };
        if !(g.step > 0.0) || g.end < g.start {
            return Err(format!("grid `{s}` needs start <= end and step > 0"));
        }
        Ok(g)
    }
}

fn parse_usize_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{x}` is not a non-negative integer"))
        })
        .collect()
}

/// Observables on tower points for the Monte Carlo verbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    /// `1[height = 0]`.
    Height0,
    /// `1[tau(a) = 1]`.
    Symbol1,
    /// `2^-height`.
    HalfPower,
}

impl Observable {
    pub fn eval(self, a: BlockId, k: u32) -> f64 {
        match self {
            Observable::Height0 => f64::from(u8::from(k == 0)),
            Observable::Symbol1 => f64::from(u8::from(a.tau() == 1)),
            Observable::HalfPower => 0.5f64.powi(k as i32),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// Alphabet cut of transfer matrices.
    pub cut: usize,
    /// Highest level written to tables.
    pub levels: u32,
    /// Blocks per level written to tables.
    pub per_level: usize,
    pub audit_depth: usize,
    pub tol: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            cut: 64,
            levels: 20,
            per_level: 8,
            audit_depth: pressure::AUDIT_DEPTH,
            tol: pressure::SOLVE_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
pub enum Analysis {
    Complexity {
        t_grid: Option<GridSpec>,
        t: f64,
        n_min: u32,
        n_max: u32,
    },
    Interval {
        t0_lower: f64,
        t0_upper: f64,
        t_grid: GridSpec,
    },
    PressureSolve,
    Curve {
        t0_lower: f64,
        t0_upper: f64,
        t_grid: GridSpec,
    },
    Gibbs,
    Equilibrium {
        t: f64,
        t0_lower: f64,
        t0_upper: f64,
        t_grid: GridSpec,
    },
    LiftabilityGate,
    LiftabilityGamma {
        n: u32,
        big_n: u32,
        delta: f64,
        exact: bool,
    },
    SetPressure {
        phi_values: Vec<f64>,
        cylinders: Vec<Vec<usize>>,
        alpha: (f64, f64),
        schedule: Vec<usize>,
        cap: usize,
    },
    StatsDecay {
        t: f64,
        length: usize,
        lag_max: usize,
        observable: Observable,
    },
    StatsClt {
        t: f64,
        length: usize,
        blocks: usize,
        observable: Observable,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `builtin:name?k=v` or a JSON descriptor path.
    pub scheme: Option<String>,
    pub phi: String,
    pub psi: Option<String>,
    pub analysis: Analysis,
    pub budgets: Budgets,
    pub seed: Option<u64>,
    pub output: PathBuf,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let b = &self.budgets;
        if b.cut == 0 || b.levels == 0 || b.per_level == 0 || b.audit_depth == 0 || !(b.tol > 0.0) {
            return invalid("every budget must be positive");
        }
        let needs_scheme = !matches!(
            self.analysis,
            Analysis::LiftabilityGamma { .. } | Analysis::SetPressure { .. }
        );
        if needs_scheme && self.scheme.is_none() {
            return invalid("this verb needs a scheme reference");
        }
        let needs_psi = matches!(
            self.analysis,
            Analysis::Interval { .. } | Analysis::Curve { .. } | Analysis::Equilibrium { .. }
        );
        if needs_psi && self.psi.is_none() {
            return invalid("this verb needs --psi");
        }
        match &self.analysis {
            Analysis::Complexity { n_min, n_max, .. } if *n_min == 0 || n_max < n_min => {
                invalid("need 1 <= n-min <= n-max")
            }
            Analysis::StatsDecay {
                length, lag_max, ..
            } if *length == 0 || *lag_max == 0 => invalid("length and lag-max must be positive"),
            Analysis::StatsClt { length, blocks, .. } if *length == 0 || *blocks == 0 => {
                invalid("length and blocks must be positive")
            }
            Analysis::StatsDecay { .. } | Analysis::StatsClt { .. } if self.seed.is_none() => {
                invalid("Monte Carlo verbs need a seed")
            }
            _ => Ok(()),
        }
    }

    fn trunc(&self) -> Truncation {
        Truncation {
            cut: self.budgets.cut,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub pressure: f64,
    pub interval: f64,
    pub normalization: f64,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

struct Writer {
    dir: PathBuf,
    files: Vec<String>,
}

impl Writer {
    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        fs::write(self.dir.join(name), text + "\n")?;
        self.files.push(name.to_owned());
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_path(self.dir.join(name)).map_err(csv_error)?;
        w.write_record(header).map_err(csv_error)?;
        for r in rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.flush()?;
        self.files.push(name.to_owned());
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn headers(h: &[&str]) -> Vec<String> {
    h.iter().map(|s| s.to_string()).collect()
}

/// Execute the configured analysis and write its reports plus the manifest
/// into `config.output`.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    fs::create_dir_all(&config.output)?;
    let mut w = Writer {
        dir: config.output.clone(),
        files: Vec::new(),
    };
    let sys = config.scheme.as_deref().map(catalog::resolve).transpose()?;
    execute(config, sys.as_ref(), &mut w)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        seed: config.seed,
        tolerances: Tolerances {
            pressure: config.budgets.tol,
            interval: complexity::INTERVAL_TOL,
            normalization: 1e-9,
        },
        files: w.files.clone(),
    };
    let path = config.output.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(RunOutcome {
        files: w.files.iter().map(|f| config.output.join(f)).collect(),
        manifest: path,
    })
}

/// Re-run a manifest, writing into `output` (or the recorded directory).
pub fn replay(manifest: &Path, output: Option<PathBuf>) -> Result<RunOutcome> {
    let m: Manifest = serde_json::from_str(&fs::read_to_string(manifest)?)?;
    let mut config = m.config;
    if let Some(o) = output {
        config.output = o;
    }
    run(&config)
}

fn execute(config: &RunConfig, sys: Option<&CatalogSystem>, w: &mut Writer) -> Result<()> {
    let trunc = config.trunc();
    let b = config.budgets;
    let pots = || -> Result<_> {
        let sys = sys.ok_or_else(|| Error::InvalidArgument("missing scheme".into()))?;
        let phi = sys.potential(&config.phi)?;
        let psi = config
            .psi
            .as_deref()
            .map(|p| sys.potential(p))
            .transpose()?;
        Ok((sys, phi, psi))
    };
    match &config.analysis {
        Analysis::Complexity {
            t_grid,
            t,
            n_min,
            n_max,
        } => {
            let (sys, phi, psi) = pots()?;
            let ts = match t_grid {
                Some(g) => g.points()?,
                None => vec![*t],
            };
            let psi = psi.unwrap_or_default();
            let mut reports = Vec::new();
            let mut rows = Vec::new();
            for &t in &ts {
                let r = complexity::complexity_report(
                    &sys.scheme,
                    &phi.add_scaled(&psi, t),
                    (*n_min, *n_max),
                )?;
                let mut row = vec![num(t)];
                row.extend(
                    r.values
                        .iter()
                        .map(|(_, v)| v.finite().map_or_else(|| format!("{v:?}"), num)),
                );
                row.push(num(r.kappa.value));
                row.push(
                    serde_json::to_value(r.kappa.status)?
                        .as_str()
                        .unwrap_or_default()
                        .to_owned(),
                );
                rows.push(row);
                reports.push((t, r));
            }
            let mut header = vec!["t".to_string()];
            header.extend((*n_min..=*n_max).map(|n| format!("u_{n}")));
            header.extend(headers(&["kappa", "status"]));
            w.csv("complexity.csv", &header, &rows)?;
            w.json("complexity.json", &reports)?;
        }
        Analysis::Interval {
            t0_lower,
            t0_upper,
            t_grid,
        } => {
            let (sys, phi, psi) = pots()?;
            let psi = psi.unwrap_or_default();
            let iv = admissible_interval(
                &sys.scheme,
                &phi,
                &psi,
                *t0_lower,
                *t0_upper,
                &t_grid.points()?,
                &trunc,
            )?;
            let rows: Vec<Vec<String>> = iv
                .kappa1_values
                .iter()
                .map(|(t, k1)| vec![num(*t), num(k1 + iv.q_t(*t)), num(*k1), num(iv.q_t(*t))])
                .collect();
            w.csv(
                "interval.csv",
                &headers(&["t", "kappa", "kappa1", "q_t"]),
                &rows,
            )?;
            w.json("interval.json", &iv)?;
        }
        Analysis::PressureSolve => {
            let (sys, phi, _) = pots()?;
            let s = pressure::solve_pl(&phi, &sys.scheme, &trunc, b.tol)?;
            let wide =
                pressure::solve_pl(&phi, &sys.scheme, &Truncation { cut: b.cut * 2 }, b.tol)?;
            w.json(
                "pressure.json",
                &serde_json::json!({
                    "q_star": s.q_star,
                    "bracket": s.bracket,
                    "evaluations": s.evaluations,
                    "residual": s.residual,
                    "cut": b.cut,
                    "q_star_double_cut": wide.q_star,
                }),
            )?;
        }
        Analysis::Curve {
            t0_lower,
            t0_upper,
            t_grid,
        } => {
            let (sys, phi, psi) = pots()?;
            let psi = psi.unwrap_or_default();
            let grid = t_grid.points()?;
            let iv =
                admissible_interval(&sys.scheme, &phi, &psi, *t0_lower, *t0_upper, &grid, &trunc)?;
            let curve =
                pressure::pressure_curve(&phi, &psi, &sys.scheme, &iv, &grid, &trunc, b.tol)?;
            let rows: Vec<Vec<String>> = curve
                .points
                .iter()
                .map(|c| {
                    vec![
                        num(c.t),
                        c.p_t.map_or_else(String::new, num),
                        num(c.q_t),
                        c.p_t.map_or_else(String::new, |p| num(p - c.q_t)),
                        c.inside_interval.to_string(),
                        (!c.chain_failed).to_string(),
                        c.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            w.csv(
                "curve.csv",
                &headers(&["t", "p_t", "q_t", "gap", "inside", "chain_ok", "error"]),
                &rows,
            )?;
            w.json(
                "curve.json",
                &serde_json::json!({ "interval": iv, "curve": curve }),
            )?;
        }
        Analysis::Gibbs => {
            let (sys, phi, _) = pots()?;
            let s = pressure::solve_pl(&phi, &sys.scheme, &trunc, b.tol)?;
            let g = pressure::gibbs(
                &normalize(&phi, s.q_star),
                &sys.scheme,
                &trunc,
                b.audit_depth,
            )?;
            w.json("gibbs.json", &g.summary(b.levels, b.per_level)?)?;
        }
        Analysis::Equilibrium {
            t,
            t0_lower,
            t0_upper,
            t_grid,
        } => {
            let (sys, phi, psi) = pots()?;
            let psi = psi.unwrap_or_default();
            let iv = admissible_interval(
                &sys.scheme,
                &phi,
                &psi,
                *t0_lower,
                *t0_upper,
                &t_grid.points()?,
                &trunc,
            )?;
            let mu = pressure::equilibrium_measure(&phi, &psi, *t, &sys.scheme, &iv, &trunc)?;
            let mut rows = Vec::new();
            for a in sys.scheme.enumerate(b.levels, b.per_level)? {
                for k in 0..a.tau() {
                    rows.push(vec![
                        a.level.to_string(),
                        a.index.to_string(),
                        k.to_string(),
                        num(mu.slab(a, k)?),
                    ]);
                }
            }
            w.csv(
                "equilibrium.csv",
                &headers(&["level", "index", "height", "mass"]),
                &rows,
            )?;
            let levels: Vec<(u32, f64)> = (0..b.levels)
                .map(|k| Ok((k, mu.level_mass(k)?)))
                .collect::<Result<_>>()?;
            w.json(
                "equilibrium.json",
                &serde_json::json!({
                    "t": t,
                    "kac": mu.kac,
                    "total_mass": mu.total_mass(b.levels)?,
                    "level_mass": levels,
                }),
            )?;
        }
        Analysis::LiftabilityGate => {
            let (sys, phi, _) = pots()?;
            let (s, g) = pressure::liftable_pressure(&phi, &sys.scheme, &trunc)?;
            let p_mu = liftability::measure_pressure(&g.measure, &phi)?;
            let k_phi = complexity::kappa_of(
                &sys.scheme,
                &phi,
                (1, sys.scheme.max_enumeration_level().max(2)),
            )?
            .value;
            let mass_on_w = lift_measure(&g.measure)?.level_mass(0)?;
            let input = GateInput { p_mu, mass_on_w };
            let verdict = liftability::lifting_gate(input, k_phi);
            w.json(
                "gate.json",
                &serde_json::json!({
                    "p_mu": p_mu, "q_star": s.q_star, "k_phi": k_phi, "mass_on_w": mass_on_w, "verdict": verdict,
                }),
            )?;
        }
        Analysis::LiftabilityGamma {
            n,
            big_n,
            delta,
            exact,
        } => {
            let bound = liftability::gamma_count(*n, *big_n, *delta, GammaMode::Bound)?;
            let exact = exact
                .then(|| liftability::gamma_count(*n, *big_n, *delta, GammaMode::Exact))
                .transpose()?;
            w.json(
                "gamma.json",
                &serde_json::json!({ "n": n, "N": big_n, "delta": delta, "exact": exact, "bound": bound }),
            )?;
        }
        Analysis::SetPressure {
            phi_values,
            cylinders,
            alpha,
            schedule,
            cap,
        } => {
            let shift = FiniteShift::new(phi_values.clone())?;
            let z = if cylinders.is_empty() {
                SymbolSet::everything()
            } else {
                SymbolSet::Cylinders(cylinders.clone())
            };
            let sp = liftability::set_pressure(&shift, &z, *alpha, schedule, 1e-6, *cap)?;
            w.json("set_pressure.json", &sp)?;
        }
        Analysis::StatsDecay {
            t,
            length,
            lag_max,
            observable,
        } => {
            let sample = sample_for(config, *t, *length, &trunc)?;
            let h = |a: BlockId, k: u32| observable.eval(a, k);
            let r = stats::correlation_decay(&sample, &h, &h, *lag_max)?;
            let rows: Vec<Vec<String>> = r
                .lags
                .iter()
                .zip(&r.correlations)
                .map(|(l, c)| vec![l.to_string(), num(*c)])
                .collect();
            w.csv("decay.csv", &headers(&["lag", "corr"]), &rows)?;
            w.json("decay.json", &r)?;
        }
        Analysis::StatsClt {
            t,
            length,
            blocks,
            observable,
        } => {
            let sample = sample_for(config, *t, *length, &trunc)?;
            let h = |a: BlockId, k: u32| observable.eval(a, k);
            let r = stats::clt_check(&sample, &h, *blocks)?;
            let rows: Vec<Vec<String>> = r
                .normalized_sums
                .iter()
                .enumerate()
                .map(|(i, s)| vec![i.to_string(), num(*s)])
                .collect();
            w.csv("clt.csv", &headers(&["block", "normalized_sum"]), &rows)?;
            w.json(
                "clt.json",
                &serde_json::json!({
                    "blocks": r.blocks, "block_length": r.block_length, "sigma2": r.sigma2, "ks": r.ks, "passed": r.passed,
                }),
            )?;
        }
    }
    Ok(())
}

/// Orbit of the Gibbs measure of `phi + t psi`.
fn sample_for(
    config: &RunConfig,
    t: f64,
    length: usize,
    trunc: &Truncation,
) -> Result<stats::OrbitSample> {
    let sys = catalog::resolve(config.scheme.as_deref().unwrap_or_default())?;
    let mut pot = sys.potential(&config.phi)?;
    if let Some(p) = &config.psi {
        pot = pot.add_scaled(&sys.potential(p)?, t);
    }
    let (_, g) = pressure::liftable_pressure(&pot, &sys.scheme, trunc)?;
    stats::sample_orbit(&g.measure, length, config.seed.unwrap_or_default())
}

#[derive(Debug, Parser)]
#[command(
    name = "inducing",
    version,
    about = "Thermodynamic formalism workbench for inducing schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// `builtin:name?k=v&...` or a JSON descriptor path.
    pub scheme: String,
    #[arg(long, default_value = "phi")]
    pub phi: String,
    #[arg(long)]
    pub psi: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub cut: usize,
    #[arg(long, default_value_t = 20)]
    pub levels: u32,
    #[arg(long, default_value_t = 8)]
    pub per_level: usize,
    #[arg(long, default_value_t = pressure::SOLVE_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct IntervalArgs {
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub t0_lower: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t0_upper: f64,
    #[arg(long, default_value = "-0.5:0.5:0.05", allow_hyphen_values = true)]
    pub t_grid: GridSpec,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level sums u_n(t) and kappa(t).
    Complexity {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_grid: Option<GridSpec>,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// The admissible interval (t_lower, t_upper).
    Interval {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        interval: IntervalArgs,
    },
    /// Liftable pressure.
    Pressure {
        #[command(subcommand)]
        action: PressureCommand,
    },
    /// Pressure curve p_t against the tangent line q_t.
    Curve {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        interval: IntervalArgs,
    },
    /// Gibbs measure of the normalized potential.
    Gibbs {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = pressure::AUDIT_DEPTH)]
        audit_depth: usize,
    },
    /// Equilibrium measure mu_t on the tower.
    Equilibrium {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        interval: IntervalArgs,
    },
    /// Liftability checks.
    Liftability {
        #[command(subcommand)]
        action: LiftabilityCommand,
    },
    /// Monte Carlo statistics.
    Stats {
        #[command(subcommand)]
        action: StatsCommand,
    },
    /// Re-run a manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PressureCommand {
    /// Solve for P_L(phi).
    Solve {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Same as the top-level `curve`.
    Curve {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        interval: IntervalArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum LiftabilityCommand {
    /// Check mu(W) > 0 and K(phi) < P_mu < inf for the Gibbs lift.
    Gate {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Count or bound the admissible compositions.
    Gamma {
        #[arg(long)]
        n: u32,
        #[arg(long = "big-n")]
        big_n: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Set pressure of a cylinder union in a finite full shift.
    SetPressure {
        /// Potential value of each symbol, comma separated.
        #[arg(
            long,
            default_value = "0,0",
            value_delimiter = ',',
            allow_hyphen_values = true
        )]
        phi_values: Vec<f64>,
        /// A cylinder word such as `0,1`; repeat for a union. Omit for the
        /// whole space.
        #[arg(long = "cylinder", value_parser = parse_usize_list)]
        cylinders: Vec<Vec<usize>>,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        alpha_lo: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        alpha_hi: f64,
        #[arg(long, default_value = "8,16,32,64", value_delimiter = ',')]
        schedule: Vec<usize>,
        #[arg(long, default_value_t = liftability::DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub length: usize,
    #[arg(long, value_enum, default_value_t = Observable::Height0)]
    pub observable: Observable,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Correlation decay of an observable.
    Decay {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = 20)]
        lag_max: usize,
    },
    /// CLT check over disjoint blocks.
    Clt {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = 1000)]
        blocks: usize,
    },
}

fn budgets(c: &CommonArgs, audit_depth: usize) -> Budgets {
    Budgets {
        cut: c.cut,
        levels: c.levels,
        per_level: c.per_level,
        audit_depth,
        tol: c.tol,
    }
}

fn with_scheme(
    s: SchemeArgs,
    analysis: Analysis,
    audit_depth: usize,
    seed: Option<u64>,
) -> RunConfig {
    RunConfig {
        scheme: Some(s.scheme),
        phi: s.phi,
        psi: s.psi,
        analysis,
        budgets: budgets(&s.common, audit_depth),
        seed,
        output: s.common.out,
    }
}

fn without_scheme(c: CommonArgs, analysis: Analysis) -> RunConfig {
    RunConfig {
        scheme: None,
        phi: "phi".into(),
        psi: None,
        analysis,
        budgets: budgets(&c, pressure::AUDIT_DEPTH),
        seed: None,
        output: c.out,
    }
}

/// What the parsed command line asks for.
#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Run(RunConfig),
    Replay {
        manifest: PathBuf,
        out: Option<PathBuf>,
    },
}

impl Command {
    pub fn into_invocation(self) -> Invocation {
        let ad = pressure::AUDIT_DEPTH;
        let curve = |s, i: IntervalArgs| {
            with_scheme(
                s,
                Analysis::Curve {
                    t0_lower: i.t0_lower,
                    t0_upper: i.t0_upper,
                    t_grid: i.t_grid,
                },
                ad,
                None,
            )
        };
        Invocation::Run(match self {
            Command::Complexity {
                scheme,
                t,
                t_grid,
                n_min,
                n_max,
            } => with_scheme(
                scheme,
                Analysis::Complexity {
                    t_grid,
                    t,
                    n_min,
                    n_max,
                },
                ad,
                None,
            ),
            Command::Interval {
                scheme,
                interval: i,
            } => with_scheme(
                scheme,
                Analysis::Interval {
                    t0_lower: i.t0_lower,
                    t0_upper: i.t0_upper,
                    t_grid: i.t_grid,
                },
                ad,
                None,
            ),
            Command::Pressure {
                action: PressureCommand::Solve { scheme },
            } => with_scheme(scheme, Analysis::PressureSolve, ad, None),
            Command::Pressure {
                action: PressureCommand::Curve { scheme, interval },
            } => curve(scheme, interval),
            Command::Curve { scheme, interval } => curve(scheme, interval),
            Command::Gibbs {
                scheme,
                audit_depth,
            } => with_scheme(scheme, Analysis::Gibbs, audit_depth, None),
            Command::Equilibrium {
                scheme,
                t,
                interval: i,
            } => with_scheme(
                scheme,
                Analysis::Equilibrium {
                    t,
                    t0_lower: i.t0_lower,
                    t0_upper: i.t0_upper,
                    t_grid: i.t_grid,
                },
                ad,
                None,
            ),
            Command::Liftability { action } => match action {
                LiftabilityCommand::Gate { scheme } => {
                    with_scheme(scheme, Analysis::LiftabilityGate, ad, None)
                }
                LiftabilityCommand::Gamma {
                    n,
                    big_n,
                    delta,
                    exact,
                    common,
                } => without_scheme(
                    common,
                    Analysis::LiftabilityGamma {
                        n,
                        big_n,
                        delta,
                        exact,
                    },
                ),
                LiftabilityCommand::SetPressure {
                    phi_values,
                    cylinders,
                    alpha_lo,
                    alpha_hi,
                    schedule,
                    cap,
                    common,
                } => without_scheme(
                    common,
                    Analysis::SetPressure {
                        phi_values,
                        cylinders,
                        alpha: (alpha_lo, alpha_hi),
                        schedule,
                        cap,
                    },
                ),
            },
            Command::Stats { action } => match action {
                StatsCommand::Decay {
                    scheme,
                    mc,
                    lag_max,
                } => with_scheme(
                    scheme,
                    Analysis::StatsDecay {
                        t: mc.t,
                        length: mc.length,
                        lag_max,
                        observable: mc.observable,
                    },
                    ad,
                    Some(mc.seed),
                ),
                StatsCommand::Clt { scheme, mc, blocks } => with_scheme(
                    scheme,
                    Analysis::StatsClt {
                        t: mc.t,
                        length: mc.length,
                        blocks,
                        observable: mc.observable,
                    },
                    ad,
                    Some(mc.seed),
                ),
            },
            Command::Replay { manifest, out } => return Invocation::Replay { manifest, out },
        })
    }
}

/// Parse arguments, run, and return the process exit code: 0 on success,
/// 1 on analysis or configuration errors, 2 on usage errors.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command.into_invocation() {
        Invocation::Run(config) => run(&config),
        Invocation::Replay { manifest, out } => replay(&manifest, out),
    };
    match outcome {
        Ok(o) => {
            for f in &o.files {
                println!("{}", f.display());
            }
            println!("{}", o.manifest.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Invocation {
        Cli::try_parse_from(args).unwrap().command.into_invocation()
    }

    #[test]
    fn grid_spec_parses_negative_start() {
        let g: GridSpec = "-0.5:0.5:0.05".parse().unwrap();
        assert_eq!(g.points().unwrap().len(), 21);
        assert!("1:0:0.1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn curve_command_line() {
        let Invocation::Run(c) = parse(&[
            "inducing",
            "curve",
            "builtin:renewal?beta=0.3",
            "--psi",
            "indicator1",
            "--t-grid",
            "-0.5:0.5:0.05",
        ]) else {
            panic!()
        };
        assert_eq!(c.psi.as_deref(), Some("indicator1"));
        assert!(matches!(c.analysis, Analysis::Curve { .. }));
    }

    #[test]
    fn unknown_verb_is_a_usage_error() {
        assert_eq!(main_from(["inducing", "frobnicate"]), 2);
    }

    #[test]
    fn gamma_needs_no_scheme() {
        let Invocation::Run(c) = parse(&[
            "inducing",
            "liftability",
            "gamma",
            "--n",
            "10",
            "--big-n",
            "2",
            "--delta",
            "0.1",
            "--exact",
        ]) else {
            panic!()
        };
        c.validate().unwrap();
    }

    #[test]
    fn budgets_must_be_positive() {
        let Invocation::Run(mut c) = parse(&["inducing", "gibbs", "builtin:renewal"]) else {
            panic!()
        };
        c.budgets.cut = 0;
        assert!(c.validate().is_err());
    }
}
