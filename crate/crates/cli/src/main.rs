use std::process::ExitCode;

use clap::Parser;
use lojex_cli::{expand_job_args, run, Cli, EXIT_INPUT, EXIT_INTERNAL};

fn main() -> ExitCode {
    let args = match expand_job_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let out = run(&cli.command);
    if out.code == 0 || out.code == 2 {
        print!("{}", out.text);
    } else {
        eprintln!("{}", out.text.trim_end());
    }
    if let Some(path) = &cli.command.common().json {
        let body = serde_json::to_string_pretty(&out.json).expect("json values always serialize") + "\n";
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INTERNAL as u8);
        }
    }
    ExitCode::from(out.code as u8)
}
