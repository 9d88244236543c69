use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use kazlab::{load, read_spec, run, CliError, Command, LoadOptions};
use kazlab_core::chain::DEFAULT_BALL_RADIUS;
use kazlab_core::coset::DEFAULT_MAX_COSETS;

#[derive(Parser, Debug)]
#[command(name = "kazlab", version, about = "Higher Kazhdan projections over finite-quotient chains")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment spec (JSON).
    spec: PathBuf,
    /// Zero-cluster tolerance, overriding the spec.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    /// Word-ball radius for the residual separation check.
    #[arg(long, default_value_t = DEFAULT_BALL_RADIUS)]
    ball_radius: usize,
    /// Worker threads for per-quotient work (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value = "kazlab-out")]
    out_dir: PathBuf,
}

fn execute(args: &Args) -> Result<(), CliError> {
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let spec = read_spec(&args.spec)?;
    let options = LoadOptions { zero_tolerance: args.tol, max_cosets: args.max_cosets, ball_radius: args.ball_radius };
    let loaded = load(spec, &options)?;
    let report = run(args.command, &loaded)?;
    report.write(&args.out_dir)?;
    let meta = serde_json::json!({
        "command": args.command.name(),
        "spec": args.spec.display().to_string(),
        "version": env!("CARGO_PKG_VERSION"),
        "tol": args.tol,
        "max_cosets": args.max_cosets,
        "ball_radius": args.ball_radius,
        "threads": rayon::current_num_threads(),
        "elapsed_ms": start.elapsed().as_millis() as u64,
    });
    std::fs::write(
        args.out_dir.join(format!("{}.meta.json", args.command.name())),
        serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n",
    )?;
    print!("{}", report.summary);
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let json = e.to_json();
            eprintln!("{}", serde_json::to_string(&json).expect("error serializes"));
            if std::fs::create_dir_all(&args.out_dir).is_ok() {
                let _ = std::fs::write(
                    args.out_dir.join(format!("{}.error.json", args.command.name())),
                    serde_json::to_string_pretty(&json).expect("error serializes") + "\n",
                );
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
