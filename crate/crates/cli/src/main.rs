use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

mod args;
mod commands;
mod report;

use args::Cli;
use report::Verdict;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match commands::run(&cli) {
        Ok(mut doc) => {
            if cli.timing {
                doc.runtime_ms = Some(started.elapsed().as_millis() as u64);
            }
            let text = if cli.json { doc.to_json() + "\n" } else { doc.to_text() };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            match doc.verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Fail => ExitCode::from(1),
            }
        }
        Err(f) => {
            eprintln!("{}", f.render(cli.json));
            ExitCode::from(f.exit as u8)
        }
    }
}
