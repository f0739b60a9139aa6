//! Writes the synthetic national fixture to a directory.
//!
//! cargo run --example gen_fixtures -- /tmp/national

use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let Some(dir) = std::env::args_os().nth(1).map(PathBuf::from) else {
        eprintln!("usage: gen_fixtures <output-dir>");
        return ExitCode::from(2);
    };
    match refaudit::synth::national().write(&dir) {
        Ok(paths) => {
            eprintln!(
                "wrote fixture to {}",
                paths.taxonomy.parent().unwrap_or(&dir).display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            ExitCode::from(3)
        }
    }
}
