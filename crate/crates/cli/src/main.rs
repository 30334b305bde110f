use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use ldpf_core::estimate::{channel_information, monte_carlo, theoretical_std, MleConfig};
use ldpf_core::fisher::{fisher_channel, optimal_c};
use ldpf_core::mechanism::PrivateDataset;
use ldpf_core::quadrature::QuadratureSpec;
use ldpf_core::scenario::{build_channel, MechanismKind, ModelSpec, NuSpec, Scenario};
use ldpf_core::verify::{self, VerifyOptions};
use ldpf_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Degenerate(_) | CoreError::NotNormalized { .. } | CoreError::Quadrature { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

/// Local-differential-privacy channels: privatize data, tabulate Fisher information,
/// run Monte Carlo sweeps, tune c and verify invariants.
#[derive(Parser, Debug)]
#[command(name = "ldpf", version)]
struct Cli {
    /// Worker threads for Monte Carlo (default: available parallelism).
    #[arg(long, global = true, env = "LDPF_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Privatize newline-delimited reals, one public value per input value.
    Privatize {
        /// Input file ("-" for stdin).
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Fisher information and its decomposition for every (alpha, c) grid point.
    Fisher {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Monte Carlo MLE sweep: bias and standard deviation per grid point.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Find the c maximizing Fisher information at each alpha.
    Tune {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Width at which the golden-section search over c stops.
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Run the invariant suite at fixed seeds.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, hide = true)]
        perturb_normalizer: Option<f64>,
    },
}

/// Every value can also come from `--config` as `key = value`; flags win.
#[derive(Args, Debug, Default)]
struct ScenarioArgs {
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// gaussian | cauchy
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    theta0: Option<String>,
    /// Base measure: gaussian | cauchy | folded-normal
    #[arg(long)]
    nu: Option<String>,
    /// Split point of the half-line pair and of the two-point channel.
    #[arg(long)]
    split: Option<String>,
    /// asymmetric-staircase | binomial-approx | two-point-sign | identity
    #[arg(long)]
    mechanism: Option<String>,
    /// Comma-separated privacy budgets.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Comma-separated interval masses.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// MLE search interval as lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    bracket: Option<String>,
    /// MLE tolerance.
    #[arg(long)]
    tol: Option<String>,
}

struct Settings {
    values: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "output", "model", "theta0", "nu", "split", "mechanism", "alpha", "c", "n", "trials", "seed", "bracket", "tol",
    "threads",
];

impl Settings {
    fn resolve(args: &ScenarioArgs) -> Result<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    CliError::Config(format!("{}:{}: expected key = value", path.display(), i + 1))
                })?;
                let k = k.trim().replace('_', "-");
                if !KEYS.contains(&k.as_str()) {
                    return Err(CliError::Config(format!("{}:{}: unknown key `{k}`", path.display(), i + 1)));
                }
                values.insert(k, v.trim().to_string());
            }
        }
        let flags = [
            ("output", args.output.as_ref().map(|p| p.display().to_string())),
            ("model", args.model.clone()),
            ("theta0", args.theta0.clone()),
            ("nu", args.nu.clone()),
            ("split", args.split.clone()),
            ("mechanism", args.mechanism.clone()),
            ("alpha", args.alpha.clone()),
            ("c", args.c.clone()),
            ("n", args.n.clone()),
            ("trials", args.trials.clone()),
            ("seed", args.seed.clone()),
            ("bracket", args.bracket.clone()),
            ("tol", args.tol.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                values.insert(k.to_string(), v);
            }
        }
        Ok(Settings { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Config(format!("--{key} `{v}`: {e}"))))
            .transpose()
    }

    fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.values.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse::<f64>()
                        .map_err(|e| CliError::Config(format!("--{key} entry `{s}`: {e}")))
                })
                .collect(),
        }
    }

    fn output(&self) -> Option<PathBuf> {
        self.values.get("output").map(PathBuf::from)
    }

    fn scenario(&self, threads: Option<usize>) -> Result<Scenario> {
        let theta0 = self.get_or("theta0", 0.0)?;
        let model = ModelSpec::from_name(&self.get_or("model", "gaussian".to_string())?, theta0)?;
        let mechanism: MechanismKind = self.get_or("mechanism", "asymmetric-staircase".to_string())?.parse()?;
        let default_nu = if mechanism == MechanismKind::BinomialApprox { "folded-normal" } else { "gaussian" };
        let nu = NuSpec::from_name(&self.get_or("nu", default_nu.to_string())?, self.get_or("split", 0.0)?)?;
        let default_c: &[f64] = if mechanism == MechanismKind::BinomialApprox { &[0.999] } else { &[0.5] };
        let bracket = self.list("bracket", &[-10.0, 10.0])?;
        if bracket.len() != 2 {
            return Err(CliError::Config("--bracket takes two values lo,hi".into()));
        }
        let threads = match threads {
            Some(t) => Some(t),
            None => self.get("threads")?,
        };
        if threads == Some(0) {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        Ok(Scenario {
            model,
            nu,
            mechanism,
            alphas: self.list("alpha", &[0.5])?,
            cs: self.list("c", default_c)?,
            n: self.get_or("n", 1000)?,
            trials: self.get_or("trials", 2000)?,
            seed: self.get_or("seed", 0)?,
            mle: MleConfig {
                bracket: (bracket[0], bracket[1]),
                tol: self.get_or("tol", 1e-6)?,
                ..MleConfig::default()
            },
            threads,
        })
    }
}

/// 17 significant digits: enough for every f64 to parse back to itself.
fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn emit(output: Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(&path, text).map_err(|e| io_err(&path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("stdout: {e}"))),
    }
}

fn parse_reals(text: &str, source: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::Config(format!("{source}:{}: `{line}` is not a decimal real", i + 1)))?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("{source}:{}: value must be finite", i + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

fn cmd_privatize(input: &Path, args: &ScenarioArgs) -> Result<()> {
    let settings = Settings::resolve(args)?;
    let sc = settings.scenario(None)?;
    if sc.alphas.len() != 1 || (sc.mechanism.uses_c() && sc.cs.len() != 1) {
        return Err(CliError::Config("privatize takes a single alpha and c".into()));
    }
    let ch = build_channel(sc.mechanism, sc.nu, sc.alphas[0], sc.cs.first().copied().unwrap_or(f64::NAN))?;
    let text = if input == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Config(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(input).map_err(|e| io_err(input, e))?
    };
    let data = PrivateDataset::new(parse_reals(&text, &input.display().to_string())?)?;
    let public = ch.privatize_seeded(&data, sc.seed);
    let mut out = String::with_capacity(public.values.len() * 24);
    for v in public.values {
        out.push_str(&real(v));
        out.push('\n');
    }
    emit(settings.output(), &out)
}

fn cmd_fisher(args: &ScenarioArgs) -> Result<()> {
    let settings = Settings::resolve(args)?;
    let sc = settings.scenario(None)?;
    let model = sc.model.build()?;
    let spec = QuadratureSpec::default();
    let mut out = String::from("alpha,c,fisher,theo_std,sym_term,mass_term,asym_term,status\n");
    let mut flagged = 0;
    for (alpha, c) in sc.grid() {
        let ch = build_channel(sc.mechanism, sc.nu, alpha, c)?;
        let row = if sc.mechanism == MechanismKind::Identity {
            let i = model.full_information();
            Ok([i, theoretical_std(sc.n, i)?, f64::NAN, f64::NAN, f64::NAN])
        } else {
            fisher_channel(model.as_ref(), sc.model.theta0(), &ch, &spec).and_then(|r| {
                Ok([r.total, r.theoretical_std(sc.n)?, r.sym_term, r.mass_term, r.asym_term])
            })
        };
        let (vals, status) = match row {
            Ok(v) => (v, "ok".to_string()),
            Err(e) => {
                flagged += 1;
                ([f64::NAN; 5], format!("\"{}\"", e.to_string().replace('"', "'")))
            }
        };
        let cells: Vec<String> = [alpha, c].iter().chain(&vals).map(|&x| real(x)).collect();
        let _ = writeln!(out, "{},{status}", cells.join(","));
    }
    emit(settings.output(), &out)?;
    if flagged > 0 {
        return Err(CliError::Numerical(format!("{flagged} grid point(s) failed; see the status column")));
    }
    Ok(())
}

fn cmd_simulate(args: &ScenarioArgs, threads: Option<usize>) -> Result<()> {
    let settings = Settings::resolve(args)?;
    let sc = settings.scenario(threads)?;
    let rows = monte_carlo(&sc)?;
    let mut out = String::from("alpha,c,bias,std,theo_std,trials,n,failures,boundary_hits\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            real(r.alpha),
            real(r.c),
            real(r.bias),
            real(r.std),
            real(r.theo_std),
            r.trials,
            r.n,
            r.failures,
            r.boundary_hits
        );
    }
    emit(settings.output(), &out)
}

fn cmd_tune(args: &ScenarioArgs, resolution: Option<f64>) -> Result<()> {
    let settings = Settings::resolve(args)?;
    let sc = settings.scenario(None)?;
    if !sc.mechanism.uses_c() {
        return Err(CliError::Config(format!("{} has no c to tune", sc.mechanism)));
    }
    let model = sc.model.build()?;
    let spec = QuadratureSpec::default();
    let range = match sc.mechanism {
        MechanismKind::AsymmetricStaircase => (1e-3, 0.5),
        _ => (1e-3, 1.0 - 1e-6),
    };
    let tol = resolution.unwrap_or(1e-4);
    let mut out = String::from("alpha,c,fisher,theo_std\n");
    for &alpha in &sc.alphas {
        let build = |c: f64| build_channel(sc.mechanism, sc.nu, alpha, c);
        let best = optimal_c(model.as_ref(), sc.model.theta0(), build, range, tol, &spec)?;
        let info = channel_information(model.as_ref(), sc.model.theta0(), &build(best.c)?, &spec)?;
        let _ = writeln!(
            out,
            "{},{},{},{}",
            real(alpha),
            real(best.c),
            real(info),
            real(theoretical_std(sc.n, info)?)
        );
    }
    emit(settings.output(), &out)
}

fn cmd_verify(seed: Option<u64>, perturb: Option<f64>) -> Result<()> {
    let mut opts = VerifyOptions::default();
    if let Some(s) = seed {
        opts.seed = s;
    }
    if let Some(p) = perturb {
        opts.normalizer_perturbation = p;
    }
    let report = verify::run(&opts)?;
    for c in &report.checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for line in &report.info {
        println!("[INFO] {line}");
    }
    if report.passed() {
        Ok(())
    } else {
        let n = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Numerical(format!("{n} invariant check(s) failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Privatize { input, scenario } => cmd_privatize(input, scenario),
        Command::Fisher { scenario } => cmd_fisher(scenario),
        Command::Simulate { scenario } => cmd_simulate(scenario, cli.threads),
        Command::Tune { scenario, resolution } => cmd_tune(scenario, *resolution),
        Command::Verify { seed, perturb_normalizer } => cmd_verify(*seed, *perturb_normalizer),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ldpf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
