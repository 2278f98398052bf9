use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use amm_cli::scenario::run_text;
use amm_cli::{table, to_rounded_json, CliError};
use amm_core::{compare_families, sample_curve, Branch, CurveSpec, VictimOrder};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "amm", version, about = "Cost-function automated market makers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, printing one JSON object per action.
    Run { scenario: PathBuf },
    /// Print the price comparison table for the four reference markets.
    Table1 {
        #[arg(long)]
        json: bool,
    },
    /// Sample a two-token constant-cost locus to CSV.
    Sample(SampleArgs),
    /// Run the same sandwich attack against several families.
    FrontrunCompare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Lmsr,
    LsLmsr,
    Product,
    Mean,
    Sum,
    Ellipse,
    Circle,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// LMSR liquidity parameter b.
    #[arg(long, default_value_t = 1.0)]
    liquidity: f64,
    /// LS-LMSR liquidity sensitivity.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Constant-mean weights, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    weights: Vec<f64>,
    /// Ellipse or circle centre a.
    #[arg(long, default_value_t = 0.0)]
    center: f64,
    /// Ellipse cross-term coefficient.
    #[arg(long, default_value_t = 0.0)]
    cross: f64,
    /// Use the concave upper arc of an ellipse instead of the convex lower one.
    #[arg(long)]
    concave: bool,
}

impl CurveArgs {
    fn spec(&self) -> CurveSpec {
        let branch = if self.concave {
            Branch::ConcaveUpper
        } else {
            Branch::ConvexLower
        };
        match self.family {
            Family::Lmsr => CurveSpec::lmsr(self.liquidity),
            Family::LsLmsr => CurveSpec::ls_lmsr(self.alpha),
            Family::Product => CurveSpec::constant_product(),
            Family::Mean => CurveSpec::constant_mean(self.weights.clone()),
            Family::Sum => CurveSpec::constant_sum(),
            Family::Ellipse => CurveSpec::ellipse(self.center, self.cross, branch),
            Family::Circle => CurveSpec::ellipse(self.center, 0.0, branch),
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Cost level of the locus.
    #[arg(long, conflicts_with = "through", required_unless_present = "through")]
    cost: Option<f64>,
    /// A point "x,y" the locus passes through.
    #[arg(long, value_delimiter = ',')]
    through: Option<Vec<f64>>,
    #[arg(long)]
    xmin: f64,
    #[arg(long)]
    xmax: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Output CSV file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Curve as JSON, e.g. '{"family":"constant_product"}'. Repeatable; the
    /// four reference families are used when omitted.
    #[arg(long = "curve")]
    curves: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1000,1000")]
    deposits: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    victim_token: usize,
    #[arg(long, default_value_t = 50.0)]
    victim_coins: f64,
    #[arg(long, default_value_t = 200.0)]
    budget: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario } => return run(&scenario),
        Command::Table1 { json } => table1(json),
        Command::Sample(args) => sample(&args),
        Command::FrontrunCompare(args) => frontrun_compare(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            println!("{}", e.to_json(None));
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(path: &PathBuf) -> ExitCode {
    let output = match fs::read_to_string(path) {
        Ok(text) => run_text(&text),
        Err(e) => {
            let e = CliError::Parse(format!("{}: {e}", path.display()));
            println!("{}", e.to_json(None));
            return ExitCode::from(e.exit_code());
        }
    };
    print!("{}", output.render());
    if let Some((_, e)) = &output.failure {
        eprintln!("{e}");
    }
    ExitCode::from(output.exit_code())
}

fn table1(as_json: bool) -> Result<(), CliError> {
    let rows = table::rows()?;
    if as_json {
        print!("{}", table::render_json(&rows));
    } else {
        print!("{}", table::render_text(&rows));
    }
    Ok(())
}

fn sample(args: &SampleArgs) -> Result<(), CliError> {
    let spec = args.curve.spec();
    spec.validate()?;
    let cost = match (&args.cost, &args.through) {
        (Some(k), _) => *k,
        (None, Some(p)) if p.len() == 2 => spec.cost(p)?,
        (None, Some(p)) => return Err(CliError::Parse(format!("--through needs x,y, got {} values", p.len()))),
        (None, None) => unreachable!("clap requires one of --cost, --through"),
    };
    let curve = sample_curve(&spec, cost, args.xmin, args.xmax, args.points)?;
    let io_err = |e: io::Error| CliError::Parse(e.to_string());
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(io_err)?;
            let mut w = io::BufWriter::new(file);
            curve.write_csv(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => curve.write_csv(io::stdout().lock()).map_err(io_err),
    }
}

fn frontrun_compare(args: &CompareArgs) -> Result<(), CliError> {
    let specs = if args.curves.is_empty() {
        vec![
            CurveSpec::ls_lmsr(1.0),
            CurveSpec::constant_product(),
            CurveSpec::constant_sum(),
            CurveSpec::circle(6000.0),
        ]
    } else {
        args.curves
            .iter()
            .map(|s| serde_json::from_str(s).map_err(|e| CliError::Parse(format!("{s}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    let victim = VictimOrder {
        token_in: args.victim_token,
        coins_in: args.victim_coins,
    };
    for outcome in compare_families(&specs, &args.deposits, &victim, args.budget) {
        let line = match outcome.result {
            Ok(report) => json!({ "curve": outcome.spec, "report": to_rounded_json(&report) }),
            Err(e) => {
                let e = CliError::Amm(e);
                json!({ "curve": outcome.spec, "error": e.to_json(None)["error"] })
            }
        };
        println!("{line}");
    }
    Ok(())
}
