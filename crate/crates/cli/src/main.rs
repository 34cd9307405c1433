mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catdyn::cover::translation_number;
use catdyn::fit::{geometric_schedule, linear_schedule};
use catdyn::growth::{generator_seed, mass_growth, pol_mass_growth, shifting_numbers, ShiftingNumbers};
use catdyn::lattice::spectral_data;
use catdyn::metric::stable_translation_length;
use catdyn::scenarios::{self, Genus, ScenarioConfig, ScenarioReport};
use catdyn::{Error, GrowthReport, IntMatrix, SpectralOptions, TripleSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use output::{num, to_json, Csv};

/// Growth invariants of compatible triples, from JSON problem files.
#[derive(Parser, Debug)]
#[command(name = "catdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Largest iterate; defaults to 4096 (64 for `translation`).
    #[arg(long, global = true)]
    n_max: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = ScheduleKind::Linear)]
    schedule: ScheduleKind,
    /// Comma-separated t values.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    t_grid: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Fan independent samples out over threads; output is unchanged.
    #[arg(long, global = true)]
    parallel: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ScheduleKind {
    #[value(alias = "geometric")]
    Geom,
    Linear,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic and minimal polynomial, eigenvalues, rho and s of an integer matrix.
    Spectral { input: PathBuf },
    /// Verify a triple file; exit 4 if it is not compatible.
    CheckTriple { input: PathBuf },
    /// Mass growth at each t of the grid.
    Growth { input: PathBuf },
    /// Displacement on the quotient by C and the stable translation length.
    Translation { input: PathBuf },
    /// Run a worked example.
    Scenario {
        #[command(subcommand)]
        which: ScenarioCmd,
    },
}

#[derive(Subcommand, Debug, Clone)]
enum ScenarioCmd {
    Curve {
        #[arg(long, value_enum, default_value_t = GenusArg::Zero)]
        genus: GenusArg,
        #[arg(long, alias = "degL", default_value_t = 3, allow_hyphen_values = true)]
        deg_l: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i64,
    },
    Coh1 {
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
    },
    Weak {
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, alias = "intersection-number", default_value_t = 1.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
    },
    Ginzburg {
        #[arg(long, default_value_t = 0.3)]
        p1: f64,
        #[arg(long, default_value_t = 0.6)]
        p2: f64,
        #[arg(long, default_value_t = 3)]
        d: i64,
    },
    PseudoAnosov {
        /// Row-major 2x2 integer matrix.
        #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [2, 1, 1, 1], allow_hyphen_values = true)]
        matrix: Vec<i64>,
    },
    /// Every scenario with default parameters.
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum GenusArg {
    Zero,
    Positive,
}

enum Failure {
    Input(String),
    Numerical(String),
    NotCompatible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::NotCompatible(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) | Failure::NotCompatible(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnverifiedTriple => Failure::NotCompatible(msg),
            Error::InvalidData(_)
            | Error::DimensionMismatch { .. }
            | Error::PreconditionViolated(_)
            | Error::InvalidLift { .. }
            | Error::NonPositiveDeterminant(_)
            | Error::NotOddCY
            | Error::NonIntegralAction(_) => Failure::Input(msg),
            Error::RootFindingDiverged { .. }
            | Error::DegenerateSpectrum { .. }
            | Error::JordanMismatch { .. }
            | Error::SingularMatrix(_)
            | Error::NonSpanningSet
            | Error::SingularPairing
            | Error::EmptyTable
            | Error::LatticeOverflow => Failure::Numerical(msg),
        }
    }
}

/// Output body, plus a verdict to report through the exit code once the body is written.
struct Done {
    body: String,
    verdict: Option<Failure>,
}

impl From<String> for Done {
    fn from(body: String) -> Self {
        Done { body, verdict: None }
    }
}

type Outcome = Result<Done, Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    to_json(v).map_err(|e| Failure::Numerical(e.to_string()))
}

impl RunConfig {
    fn validate(&self) -> Result<(), Failure> {
        if !(self.tol > 0.0) {
            return Err(Failure::Input(format!("--tol must be positive, got {}", self.tol)));
        }
        if let Some(n) = self.n_max {
            if n < 16 {
                return Err(Failure::Input(format!("--n-max must be at least 16, got {n}")));
            }
        }
        Ok(())
    }

    fn n_max_or(&self, default: u64) -> u64 {
        self.n_max.unwrap_or(default)
    }

    fn schedule(&self, n_max: u64) -> Vec<u64> {
        match self.schedule {
            ScheduleKind::Geom => geometric_schedule(n_max, 16),
            ScheduleKind::Linear => linear_schedule(n_max, n_max.min(4096)),
        }
    }

    fn t_grid(&self) -> Vec<f64> {
        self.t_grid.clone().unwrap_or_else(|| catdyn::growth::DEFAULT_T_GRID.to_vec())
    }
}

fn cmd_spectral(input: &Path, cfg: &RunConfig) -> Outcome {
    let a: IntMatrix = read_json(input)?;
    let opts = SpectralOptions { root_tol: cfg.tol, ..SpectralOptions::default() };
    let data = spectral_data(&a, &opts)?;
    let body = match cfg.format {
        Format::Json => json(&data)?,
        Format::Text => {
            let mut s = format!("dim {}\nrho {}\n", data.dim, num(data.rho));
            s.push_str(&match data.s {
                Some(k) => format!("s {k}\n"),
                None => "s undefined (nilpotent)\n".into(),
            });
            for e in &data.eigenvalues {
                s.push_str(&format!(
                    "eigenvalue {} {}{}i  modulus {}  blocks {:?}\n",
                    num(e.value.re),
                    if e.value.im < 0.0 { "-" } else { "+" },
                    num(e.value.im.abs()),
                    num(e.modulus),
                    e.jordan_blocks
                ));
            }
            s
        }
        Format::Csv => {
            let mut c = Csv::new(&["re", "im", "modulus", "multiplicity", "largest_block"]);
            for e in &data.eigenvalues {
                c.row(&[
                    num(e.value.re),
                    num(e.value.im),
                    num(e.modulus),
                    e.multiplicity.to_string(),
                    e.jordan_blocks.first().copied().unwrap_or(0).to_string(),
                ]);
            }
            c.finish()
        }
    };
    Ok(body.into())
}

fn cmd_check_triple(input: &Path, cfg: &RunConfig) -> Outcome {
    let spec: TripleSpec = read_json(input)?;
    let triple = spec.verify(cfg.tol)?;
    let report = triple.report();
    let body = match cfg.format {
        Format::Json => json(&serde_json::json!({"verified": triple.verified(), "spanning": triple.spanning(), "report": report}))?,
        Format::Text => {
            let mut s = format!("verified {}\nspanning {}\n", triple.verified(), triple.spanning());
            s.push_str(&format!("intertwine residual {}\n", num(report.intertwine.residual)));
            for f in &report.failures {
                s.push_str(&format!("failed: {}\n", f.describe()));
            }
            s
        }
        Format::Csv => {
            let mut c = Csv::new(&["check", "pass"]);
            c.row(&["charge_intertwine".into(), report.intertwine.pass.to_string()]);
            c.row(&["heart_window".into(), report.heart_window.pass.to_string()]);
            c.row(&["phase_transport".into(), report.transport.pass.to_string()]);
            c.finish()
        }
    };
    let verdict = (!triple.verified()).then(|| {
        Failure::NotCompatible(format!(
            "not compatible: {}",
            report.first_failure.map(|f| f.describe()).unwrap_or_default()
        ))
    });
    Ok(Done { body, verdict })
}

#[derive(Serialize)]
struct GrowthBundle {
    n_max: u64,
    exponential: Vec<GrowthReport>,
    polynomial: Vec<GrowthReport>,
    shifting: ShiftingNumbers,
}

fn cmd_growth(input: &Path, cfg: &RunConfig) -> Outcome {
    let spec: TripleSpec = read_json(input)?;
    let triple = spec.verify(cfg.tol)?;
    triple.require_verified()?;
    let seed = generator_seed(triple.sigma())?;
    let n_max = cfg.n_max_or(4096);
    let schedule = cfg.schedule(n_max);
    let grid = cfg.t_grid();
    let one = |t: &f64| -> catdyn::Result<(GrowthReport, GrowthReport)> {
        Ok((mass_growth(&triple, &seed, *t, &schedule)?, pol_mass_growth(&triple, &seed, *t, &schedule)?))
    };
    let pairs: Vec<(GrowthReport, GrowthReport)> = if cfg.parallel {
        grid.par_iter().map(one).collect::<catdyn::Result<_>>()?
    } else {
        grid.iter().map(one).collect::<catdyn::Result<_>>()?
    };
    let (exponential, polynomial): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let bundle = GrowthBundle { n_max, exponential, polynomial, shifting: shifting_numbers(&triple, &seed, n_max)? };
    let body = match cfg.format {
        Format::Json => json(&bundle)?,
        Format::Text => {
            let mut s = format!(
                "shifting numbers: upper {} lower {}\n",
                num(bundle.shifting.upper),
                num(bundle.shifting.lower)
            );
            for (e, p) in bundle.exponential.iter().zip(&bundle.polynomial) {
                s.push_str(&format!(
                    "t {}: exp_rate {} poly_rate {}\n",
                    num(e.t.unwrap_or(0.0)),
                    num(e.exp_rate),
                    num(p.poly_rate)
                ));
            }
            s
        }
        Format::Csv => {
            let mut c = Csv::new(&["t", "n", "log_mass"]);
            for e in &bundle.exponential {
                for (n, v) in &e.samples {
                    c.row(&[num(e.t.unwrap_or(0.0)), n.to_string(), num(*v)]);
                }
            }
            c.finish()
        }
    };
    Ok(body.into())
}

fn cmd_translation(input: &Path, cfg: &RunConfig) -> Outcome {
    let spec: TripleSpec = read_json(input)?;
    let triple = spec.verify(cfg.tol)?;
    let tl = stable_translation_length(&triple, cfg.n_max_or(64))?;
    let body = match cfg.format {
        Format::Json => {
            let rot = translation_number(triple.g(), cfg.n_max_or(64).max(16))?;
            json(&serde_json::json!({"translation_length": tl, "translation_number": rot}))?
        }
        Format::Text => format!(
            "stable translation length {}\nclosed form {}\nfekete minimum {}\ndisplacement {}\n",
            num(tl.estimate),
            num(tl.closed_form),
            num(tl.fekete_min),
            num(tl.displacement)
        ),
        Format::Csv => {
            let mut c = Csv::new(&["n", "distance", "a_value", "b_value", "alpha_re", "alpha_im"]);
            for s in &tl.samples {
                c.row(&[
                    s.n.to_string(),
                    num(s.distance),
                    num(s.a_value),
                    num(s.b_value),
                    num(s.alpha_opt.re),
                    num(s.alpha_opt.im),
                ]);
            }
            c.finish()
        }
    };
    Ok(body.into())
}

fn run_scenario(which: &ScenarioCmd, cfg: &ScenarioConfig) -> catdyn::Result<ScenarioReport> {
    match which {
        ScenarioCmd::Curve { genus, deg_l, m } => {
            let g = match genus {
                GenusArg::Zero => Genus::Zero,
                GenusArg::Positive => Genus::Positive,
            };
            scenarios::curve_scenario(g, *deg_l, *m, cfg)
        }
        ScenarioCmd::Coh1 { lambda, m } => scenarios::coh1_scenario(*lambda, *m, cfg),
        ScenarioCmd::Weak { d, x, m } => scenarios::weak_stability_scenario(*d, *x, *m, cfg),
        ScenarioCmd::Ginzburg { p1, p2, d } => scenarios::ginzburg_scenario(*p1, *p2, *d, cfg),
        ScenarioCmd::PseudoAnosov { matrix } => {
            scenarios::pseudo_anosov_scenario([[matrix[0], matrix[1]], [matrix[2], matrix[3]]], cfg)
        }
        ScenarioCmd::All => unreachable!("expanded by the caller"),
    }
}

fn default_scenarios() -> Vec<ScenarioCmd> {
    vec![
        ScenarioCmd::Curve { genus: GenusArg::Zero, deg_l: 3, m: 1 },
        ScenarioCmd::Coh1 { lambda: 2.0, m: 0 },
        ScenarioCmd::Weak { d: 2, x: 1.0, m: 0 },
        ScenarioCmd::Ginzburg { p1: 0.3, p2: 0.6, d: 3 },
        ScenarioCmd::PseudoAnosov { matrix: vec![2, 1, 1, 1] },
    ]
}

fn cmd_scenario(which: &ScenarioCmd, cfg: &RunConfig) -> Outcome {
    let mut sc = ScenarioConfig { tol: cfg.tol, ..ScenarioConfig::default() };
    if let Some(n) = cfg.n_max {
        sc.n_max = n;
        sc.poly_n_max = sc.poly_n_max.max(n);
    }
    if let Some(grid) = &cfg.t_grid {
        sc.t_grid = grid.clone();
    }
    let list = match which {
        ScenarioCmd::All => default_scenarios(),
        other => vec![other.clone()],
    };
    let reports: Vec<ScenarioReport> = if cfg.parallel {
        list.par_iter().map(|w| run_scenario(w, &sc)).collect::<catdyn::Result<_>>()?
    } else {
        list.iter().map(|w| run_scenario(w, &sc)).collect::<catdyn::Result<_>>()?
    };
    let body = match cfg.format {
        Format::Json if reports.len() == 1 => json(&reports[0])?,
        Format::Json => json(&reports)?,
        Format::Text => reports.iter().map(|r| r.to_text()).collect(),
        Format::Csv => {
            let mut c = Csv::new(&["scenario", "claim", "expected", "observed", "tol", "pass"]);
            for r in &reports {
                for cl in &r.claims {
                    c.row(&[
                        r.name.clone(),
                        format!("\"{}\"", cl.claim.replace('"', "'")),
                        num(cl.expected),
                        num(cl.observed),
                        num(cl.tol),
                        cl.pass.to_string(),
                    ]);
                }
            }
            c.finish()
        }
    };
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let verdict =
        (!failed.is_empty()).then(|| Failure::Numerical(format!("claims not reproduced in: {}", failed.join(", "))));
    Ok(Done { body, verdict })
}

fn run(cli: &Cli) -> Outcome {
    let cfg = &cli.run;
    cfg.validate()?;
    match &cli.command {
        Command::Spectral { input } => cmd_spectral(input, cfg),
        Command::CheckTriple { input } => cmd_check_triple(input, cfg),
        Command::Growth { input } => cmd_growth(input, cfg),
        Command::Translation { input } => cmd_translation(input, cfg),
        Command::Scenario { which } => cmd_scenario(which, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let done = match run(&cli) {
        Ok(d) => d,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    if let Some(path) = &cli.run.out {
        if let Err(e) = fs::write(path, &done.body) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{}", done.body);
    }
    match done.verdict {
        Some(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
        None => ExitCode::SUCCESS,
    }
}
