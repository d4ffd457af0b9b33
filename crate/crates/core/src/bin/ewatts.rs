use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ewatts::cli::{parse_jobs, run_job, JobSpec, Options};

#[derive(Parser)]
#[command(name = "ewatts", version, about = "Eilenberg-Watts sheaves and transformations on the projective line")]
struct Args {
    /// Print one flat JSON object per job instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    /// Degree window `lo:hi` for probe-right-exact and the gamma kernel table.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<RangeInclusive<i64>>,
    /// Seed for `random` and `scramble(..)` sheaf literals.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every job in a file.
    Run { file: std::path::PathBuf },
    /// Run jobs given inline.
    Eval { job: String },
}

fn parse_window(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok(lo..=hi)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.cmd {
        Cmd::Eval { job } => job.clone(),
        Cmd::Run { file } => match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", file.display());
                return ExitCode::from(2);
            }
        },
    };
    let jobs = match parse_jobs(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let opts = Options { window: args.window.clone(), seed: args.seed };
    let mut failed = false;
    for (k, job) in jobs.iter().enumerate() {
        failed |= !emit(job, &opts, args.json, k, jobs.len());
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn emit(job: &JobSpec, opts: &Options, json: bool, k: usize, total: usize) -> bool {
    let result = run_job(job, opts);
    if json {
        let obj = match &result {
            Ok(r) => r.to_json(job),
            Err(e) => serde_json::json!({
                "field": job.field.to_string(),
                "command": job.command.name(),
                "error": e.to_string(),
            }),
        };
        println!("{obj}");
    } else {
        if total > 1 {
            if k > 0 {
                println!();
            }
            println!("# {}", job.render());
        }
        match &result {
            Ok(r) => print!("{}", r.render()),
            Err(e) => println!("error: {e}"),
        }
    }
    result.is_ok()
}
