mod args;
mod commands;
mod error;
mod report;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Common, Top};
use error::CliError;
use report::{Invocation, Metadata, Report, SCHEMA_VERSION, TOOL_VERSION};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = match real_main(argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qsep: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn real_main(argv: Vec<String>) -> Result<i32, CliError> {
    let argv = merge_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return Ok(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 64,
            });
        }
    };
    match cli.top {
        Top::Run(run) => run_command(run.command, &run.common),
        Top::Report(r) => report_command(&r),
        Top::Replay(r) => replay_command(&r),
    }
}

/// Value of `--config` in `argv`, either as `--config p` or `--config=p`.
fn config_path(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Appends `--key value` for every config entry whose flag is absent from
/// the command line. `true`/`false` values toggle switches.
fn merge_config(mut argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let given: HashSet<String> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config {}:{}: expected key=value", path.display(), lineno + 1)));
        };
        let (key, value) = (key.trim().trim_start_matches("--"), value.trim());
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if given.contains(key) {
            continue;
        }
        match value {
            "true" => argv.push(format!("--{key}")),
            "false" => {}
            _ => argv.push(format!("--{key}={value}")),
        }
    }
    Ok(argv)
}

fn init_threads(threads: Option<usize>) -> Result<usize, CliError> {
    if let Some(k) = threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(rayon::current_num_threads())
}

fn execute(inv: &Invocation) -> Result<(Report, Option<String>), CliError> {
    let ctx = commands::Ctx { seed: inv.seed, tol: inv.tol };
    let out = commands::run(&inv.command, &ctx)?;
    let exit_code = out.status.exit_code(inv.require_certified);
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.into(),
        invocation: inv.clone(),
        status: out.status,
        exit_code,
        checks: out.checks,
        result: out.result,
    };
    Ok((report, out.table))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::CantCreate(format!("{}: {e}", path.display())))
}

fn run_command(command: Command, common: &Common) -> Result<i32, CliError> {
    let threads = init_threads(common.threads)?;
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir).map_err(|e| CliError::CantCreate(format!("{}: {e}", dir.display())))?;
    }
    let inv = Invocation { command, seed: common.seed, tol: common.tol, require_certified: common.require_certified };
    let name = inv.command.name();
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let (report, table) = execute(&inv)?;
    let json = report.to_json()?;
    match &common.out {
        Some(dir) => {
            if common.format.json() {
                write_file(&dir.join(format!("{name}.json")), &json)?;
            }
            if common.format.csv() {
                match &table {
                    Some(t) => write_file(&dir.join(format!("{name}.csv")), t)?,
                    None => eprintln!("qsep: {name} has no table; no CSV written"),
                }
            }
            let meta = Metadata {
                schema_version: SCHEMA_VERSION,
                tool_version: TOOL_VERSION.into(),
                command: name.into(),
                started_at: started.to_rfc3339(),
                finished_at: chrono::Utc::now().to_rfc3339(),
                elapsed_seconds: clock.elapsed().as_secs_f64(),
                threads,
            };
            write_file(&dir.join(format!("{name}.meta.json")), &serde_json::to_string_pretty(&meta)?)?;
        }
        None => {
            if common.format.json() {
                print!("{json}");
            }
            if common.format.csv() {
                if let Some(t) = &table {
                    print!("{t}");
                }
            }
        }
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("qsep: check {} failed: {}", c.name, c.detail);
    }
    eprintln!("qsep: {name}: {}", report.status.label());
    Ok(report.exit_code)
}

fn report_command(r: &args::ReportArgs) -> Result<i32, CliError> {
    let files = report::collect(&r.paths)?;
    let summary = report::summarize(&files)?;
    print!("{}", report::render(&summary));
    if let Some(dir) = &r.out {
        fs::create_dir_all(dir).map_err(|e| CliError::CantCreate(format!("{}: {e}", dir.display())))?;
        if r.format.json() {
            write_file(&dir.join("summary.json"), &(serde_json::to_string_pretty(&summary)? + "\n"))?;
        }
        if r.format.csv() {
            write_file(&dir.join("summary.csv"), &report::summary_csv(&summary)?)?;
        }
    }
    Ok(summary.exit_code)
}

fn replay_command(r: &args::ReplayArgs) -> Result<i32, CliError> {
    init_threads(r.threads)?;
    let old = fs::read_to_string(&r.report).map_err(|e| CliError::Missing(format!("{}: {e}", r.report.display())))?;
    let recorded = report::read_report(&r.report)?;
    if recorded.tool_version != TOOL_VERSION {
        eprintln!("qsep: report was written by version {}, replaying with {TOOL_VERSION}", recorded.tool_version);
    }
    let (fresh, _) = execute(&recorded.invocation)?;
    let new = fresh.to_json()?;
    if new == old {
        eprintln!("qsep: replay identical");
        return Ok(0);
    }
    let line = old.lines().zip(new.lines()).position(|(a, b)| a != b).unwrap_or(old.lines().count().min(new.lines().count()));
    eprintln!("qsep: replay differs from line {}", line + 1);
    Ok(1)
}
