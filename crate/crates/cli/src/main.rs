use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use idempo::io::{execute, read_density_csv, render_pgm, write_density_csv, write_trace, RunConfig, RunOutcome};
use idempo::{dtheta_distance, eval_measure, AffineFunctional, Error, Metric};

#[derive(Parser)]
#[command(name = "idempo", version, about = "Invariant idempotent measures of max-plus IFSs and GIFSs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write its PGM, CSV and trace outputs.
    Render {
        #[command(flatten)]
        run: RunArgs,
        /// Directory for relative output paths (default: the config's directory).
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Run a config and print μ(φ) for the affine φ(x) = c·x + b.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// Coefficients then offset: c1,...,cd,b.
        #[arg(long, required = true, allow_hyphen_values = true, value_delimiter = ',')]
        phi: Vec<f64>,
    },
    /// Print d_θ between two density CSV files.
    Dist { a: PathBuf, b: PathBuf },
    /// Validate a config, run it and report α_S, N, ε and the residual.
    Check {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Write a JSON-lines iteration log (to [output] trace, else stderr).
    #[arg(long)]
    trace: bool,
    /// Seed point, overriding [run] seed.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_name = "X,Y")]
    seed: Option<Vec<f64>>,
    /// Override [run] iterations.
    #[arg(long, value_name = "N")]
    iterations: Option<usize>,
    #[arg(long)]
    allow_noncontractive: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn load(args: &RunArgs) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::parse_unchecked(&text)?;
    if let Some(seed) = &args.seed {
        cfg.run.seed = Some(seed.clone());
    }
    if let Some(n) = args.iterations {
        cfg.run.iterations = Some(n);
    }
    if args.allow_noncontractive {
        cfg.run.allow_noncontractive = Some(true);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn config_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn report_clamped(out: &RunOutcome) {
    let n = out.trace.total_clamped();
    if n > 0 {
        eprintln!("warning: {n} map images fell outside the box and were clamped");
    }
}

fn emit_trace(cfg: &RunConfig, args: &RunArgs, out: &RunOutcome, base: &Path) -> CmdResult {
    if !args.trace {
        return Ok(());
    }
    match cfg.output_path(base, "trace") {
        Some(path) => write_trace(&out.trace, std::io::BufWriter::new(fs::File::create(path)?))?,
        None => write_trace(&out.trace, std::io::stderr().lock())?,
    }
    Ok(())
}

fn render(args: &RunArgs, out_dir: Option<&Path>) -> CmdResult {
    let cfg = load(args)?;
    let out = execute(&cfg, false)?;
    report_clamped(&out);
    let base = out_dir.map(Path::to_path_buf).unwrap_or_else(|| config_dir(&args.config));
    let density = &out.trace.final_density;
    let pgm = cfg.output_path(&base, "pgm");
    let csv = cfg.output_path(&base, "csv");
    if pgm.is_none() && csv.is_none() {
        return Err(Failure::Usage("config has no [output] pgm or csv path".into()));
    }
    if let Some(path) = pgm {
        fs::write(&path, render_pgm(density, &cfg.render_spec()?)?)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = csv {
        let mut w = std::io::BufWriter::new(fs::File::create(&path)?);
        write_density_csv(density, &mut w)?;
        w.flush()?;
        println!("wrote {}", path.display());
    }
    emit_trace(&cfg, args, &out, &base)?;
    println!("support {} after {} iterations", density.len(), out.iterations);
    Ok(())
}

fn eval(args: &RunArgs, phi: &[f64]) -> CmdResult {
    let cfg = load(args)?;
    if phi.len() != cfg.space.dim + 1 {
        return Err(Failure::Usage(format!(
            "--phi needs {} coefficients and an offset",
            cfg.space.dim
        )));
    }
    let functional = AffineFunctional::new(phi[..phi.len() - 1].to_vec(), phi[phi.len() - 1])?;
    let out = execute(&cfg, false)?;
    report_clamped(&out);
    emit_trace(&cfg, args, &out, &config_dir(&args.config))?;
    println!("{:.6}", eval_measure(&out.trace.final_density, &functional)?);
    Ok(())
}

fn dist(a: &Path, b: &Path) -> CmdResult {
    let read = |p: &Path| -> Result<_, Failure> {
        let f = fs::File::open(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
        Ok(read_density_csv(std::io::BufReader::new(f))?)
    };
    let d = dtheta_distance(&read(a)?, &read(b)?, Metric::Euclidean)?;
    println!("{d:.9}");
    Ok(())
}

fn check(args: &RunArgs) -> CmdResult {
    let cfg = load(args)?;
    let sys = cfg.system()?;
    println!("alpha_S = {:.6}", sys.alpha());
    if cfg.arity() > 1 {
        println!("note: GIFS contraction factor is declared, bound is heuristic");
    }
    match (cfg.run.delta, cfg.run.iterations) {
        (Some(_), _) if sys.is_contractive() => {
            let plan = cfg.plan()?;
            println!("planned N = {} (delta = {})", plan.iterations, plan.delta);
            println!("bound = {:.9}", plan.error_bound());
        }
        _ => println!("planned N = none (explicit iterations)"),
    }
    let out = execute(&cfg, true)?;
    report_clamped(&out);
    emit_trace(&cfg, args, &out, &config_dir(&args.config))?;
    println!("iterations = {}", out.iterations);
    println!("epsilon = {:.9}", out.epsilon());
    println!("support = {}", out.trace.final_density.len());
    match out.residual {
        Some(Ok(r)) => println!("residual = {r:.9}"),
        Some(Err(e)) if e.is_resource() => println!("residual = skipped ({e})"),
        Some(Err(e)) => return Err(e.into()),
        None => {}
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Render { run, out_dir } => render(run, out_dir.as_deref()),
        Command::Eval { run, phi } => eval(run, phi),
        Command::Dist { a, b } => dist(a, b),
        Command::Check { run } => check(run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 2 } else { 1 })
        }
    }
}
