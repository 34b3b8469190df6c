//! `stdg`: convergence studies, quadrature tables, energy audits and
//! solution dumps for the benchmark problems.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use stdg::evolution::Variant;
use stdg::problems::ExampleId;
use stdg::study::{run_energy_audit, run_study, solve_level, NormKind, QSetting, StudyConfig};
use stdg::{build_weighted_radau, Error, RuleCache};

#[derive(Parser)]
#[command(name = "stdg", version, about = "Space-time dG solver for linear evolutionary systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence study over refinement levels; writes a CSV table.
    Study(StudyArgs),
    /// Nodes and weights of the weighted right Radau rule on [0, 1].
    Quadrature(QuadratureArgs),
    /// Discrete energy balance at every mesh point.
    Energy(StudyArgs),
    /// Solves the first level and writes the nodal values as a checkpoint.
    DumpSolution(StudyArgs),
}

/// Study settings. Flags override values from `--config`.
#[derive(Args, Default)]
struct StudyArgs {
    /// TOML file with study settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    example: Option<ExampleId>,
    /// weighted | transformed
    #[arg(long)]
    variant: Option<Variant>,
    /// Comma separated, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    #[arg(long)]
    k: Option<usize>,
    /// Integer, `k-1` or `k-2`.
    #[arg(long)]
    q: Option<QSetting>,
    /// Comma separated levels N (= number of time slabs).
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long)]
    postprocess: bool,
    /// Comma separated subset of l2, linf, q, jump.
    #[arg(long, value_delimiter = ',')]
    norms: Option<Vec<NormKind>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Interior sample points per slab for sup norms.
    #[arg(long)]
    time_samples: Option<usize>,
    /// Gauss points per slab for L² norms.
    #[arg(long)]
    time_points: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    max_unknowns: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl StudyArgs {
    fn resolve(&self) -> Result<StudyConfig, Error> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
            }
            None => StudyConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$field = v.clone();
                }
            )*};
        }
        set!(example, variant, rho, k, levels, norms, time_samples, t_end, seed);
        if let Some(q) = self.q {
            c.q = Some(q);
        }
        if self.postprocess {
            c.postprocess = true;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if self.time_points.is_some() {
            c.time_points = self.time_points;
        }
        if self.max_unknowns.is_some() {
            c.max_unknowns = self.max_unknowns;
        }
        Ok(c)
    }
}

#[derive(Args)]
struct QuadratureArgs {
    #[arg(long)]
    q: usize,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Serialize)]
struct RuleOut<'a> {
    q: usize,
    sigma: f64,
    nodes: &'a [f64],
    weights: &'a [f64],
}

fn quadrature(args: &QuadratureArgs) -> Result<String, Error> {
    let rule = build_weighted_radau(args.q, args.sigma)?;
    let out = RuleOut { q: args.q, sigma: args.sigma, nodes: rule.nodes(), weights: rule.weights() };
    if args.json {
        return serde_json::to_string_pretty(&out).map(|s| s + "\n").map_err(|e| Error::Parse(e.to_string()));
    }
    let mut s = String::new();
    if args.csv {
        s.push_str(&format!("# q = {}, sigma = {:?}\ni,node,weight\n", args.q, args.sigma));
        for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
            s.push_str(&format!("{i},{x:.17e},{w:.17e}\n"));
        }
    } else {
        s.push_str(&format!("weighted right Radau rule, q = {}, sigma = {}\n", args.q, args.sigma));
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            s.push_str(&format!("  {x:>24.17}  {w:>24.17}\n"));
        }
    }
    Ok(s)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    if out.is_none() {
        std::io::stdout().write_all(text.as_bytes())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Quadrature(args) => {
            std::io::stdout().write_all(quadrature(&args)?.as_bytes())?;
        }
        Command::Study(args) => {
            let config = args.resolve()?;
            let result = run_study(&config)?;
            emit(&result.to_csv(), &config.out)?;
            for ((n, note), secs) in result.report.levels.iter().zip(&result.report.notes).zip(&result.seconds) {
                match note {
                    Some(reason) => eprintln!("N={n}: failed ({reason})"),
                    None => eprintln!("N={n}: done in {secs:.1} s"),
                }
            }
        }
        Command::Energy(args) => {
            let config = args.resolve()?;
            let result = run_energy_audit(&config)?;
            emit(&result.to_csv(), &config.out)?;
            eprintln!("max relative gap {:.3e}", result.max_relative_gap());
        }
        Command::DumpSolution(args) => {
            let config = args.resolve()?;
            config.validate()?;
            let (_, sol) = solve_level(&config, config.levels[0], &RuleCache::new())?;
            match &config.out {
                Some(path) => sol.write_checkpoint(std::io::BufWriter::new(std::fs::File::create(path)?))?,
                None => sol.write_checkpoint(std::io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Config(_) | Error::Parse(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
