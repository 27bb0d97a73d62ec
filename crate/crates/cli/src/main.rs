use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crosspoly::search::SearchConfig;
use crosspoly::verify::{self, Level, Plan};
use crosspoly_cli::compute::{self, ComputeKind, Geometry};
use crosspoly_cli::sweep::{self, Format, Quantity, SweepFile, SweepSpec};
use crosspoly_cli::{env_seed, parse_coords, parse_dims, CliError, Result, DEFAULT_SEED, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

/// Exact sections of the cross-polytope by lines, hyperplanes and slabs.
#[derive(Debug, Parser)]
#[command(name = "crosspoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one section exactly.
    Compute(ComputeArgs),
    /// Tabulate an extremal closed form over (n, t), optionally certified by search.
    Sweep(SweepArgs),
    /// Run the certification suite and report one line per criterion.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ComputeArgs {
    kind: ComputeKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    p1: Option<Coords>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    p2: Option<Coords>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    base: Option<Coords>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    dir: Option<Coords>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    normal: Option<Coords>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    v: Option<Coords>,
    #[arg(long, value_parser = coords, allow_hyphen_values = true)]
    x: Option<Coords>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    quantity: Option<Quantity>,
    /// Dimensions: `3`, `3,4,6` or `3:6`.
    #[arg(long, value_parser = dims)]
    n: Option<Dims>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_stop: Option<f64>,
    #[arg(long)]
    t_step: Option<f64>,
    /// Run the search oracle on each row and compare.
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Where to write the run manifest for CSV output.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    level: Level,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Perturb one closed form to check that the suite notices.
    #[arg(long, hide = true)]
    tamper: bool,
}

/// A comma-separated list kept as one clap value.
#[derive(Debug, Clone)]
struct Coords(Vec<f64>);

#[derive(Debug, Clone)]
struct Dims(Vec<usize>);

fn coords(s: &str) -> std::result::Result<Coords, String> {
    parse_coords(s).map(Coords).map_err(|e| e.to_string())
}

fn dims(s: &str) -> std::result::Result<Dims, String> {
    parse_dims(s).map(Dims).map_err(|e| e.to_string())
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(io_err(path))
}

fn run_compute(args: ComputeArgs) -> Result<u8> {
    let g = Geometry {
        n: args.n,
        p1: args.p1.map(|c| c.0),
        p2: args.p2.map(|c| c.0),
        base: args.base.map(|c| c.0),
        dir: args.dir.map(|c| c.0),
        normal: args.normal.map(|c| c.0),
        t: args.t,
        v: args.v.map(|c| c.0),
        x: args.x.map(|c| c.0),
    };
    let out = compute::compute(args.kind, &g)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
    } else {
        print!("{}", compute::render_text(&out));
    }
    Ok(EXIT_OK)
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    let file = match &args.config {
        Some(path) => SweepFile::load(path)?,
        None => SweepFile::default(),
    };
    let seed = match args.seed.or(file.seed) {
        Some(s) => s,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let quantity = args
        .quantity
        .or(file.quantity)
        .ok_or_else(|| CliError::Usage("sweep needs --quantity (or `quantity` in the config)".into()))?;
    let dims = args
        .n
        .clone()
        .map(|d| d.0)
        .or_else(|| file.n.clone().map(|d| d.into_vec()))
        .ok_or_else(|| CliError::Usage("sweep needs --n (or `n` in the config)".into()))?;
    let defaults = SearchConfig::default();
    Ok(SweepSpec {
        quantity,
        dims,
        t_start: args.t_start.or(file.t_start).unwrap_or(0.0),
        t_stop: args.t_stop.or(file.t_stop).unwrap_or(1.0),
        t_step: args.t_step.or(file.t_step).unwrap_or(0.05),
        certify: args.certify || file.certify.unwrap_or(false),
        format: args.format.or(file.format).unwrap_or(Format::Csv),
        seed,
        starts: args.starts.or(file.starts).unwrap_or(defaults.starts),
        max_iters: args.max_iters.or(file.max_iters).unwrap_or(defaults.max_iters),
    })
}

fn run_sweep(args: SweepArgs) -> Result<u8> {
    let spec = sweep_spec(&args)?;
    let rows = sweep::run_sweep(&spec)?;
    let manifest = sweep::manifest(&spec, &rows);
    match spec.format {
        Format::Json => {
            let text = sweep::to_json(manifest, rows) + "\n";
            match &args.output {
                Some(path) => write_file(path, &text)?,
                None => print!("{text}"),
            }
        }
        Format::Csv => {
            let manifest_json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            match &args.output {
                Some(path) => {
                    let file = File::create(path).map_err(io_err(path))?;
                    sweep::write_csv(&rows, BufWriter::new(file))?;
                    let sidecar = args.manifest.clone().unwrap_or_else(|| {
                        let mut p = path.clone().into_os_string();
                        p.push(".manifest.json");
                        PathBuf::from(p)
                    });
                    write_file(&sidecar, &manifest_json)?;
                }
                None => {
                    sweep::write_csv(&rows, io::stdout().lock())?;
                    match &args.manifest {
                        Some(path) => write_file(path, &manifest_json)?,
                        None => eprint!("{manifest_json}"),
                    }
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let seed = match args.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let mut plan = Plan::for_level(args.level, seed);
    if args.tamper {
        plan = plan.tampered();
    }
    let report = verify::run(&plan);
    let json = report.to_json() + "\n";
    if let Some(path) = &args.json {
        write_file(path, &json)?;
    }
    let text = match args.format {
        ReportFormat::Text => report.render_text(),
        ReportFormat::Json => json,
    };
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
