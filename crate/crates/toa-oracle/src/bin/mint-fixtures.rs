//! Regenerate the oracle fixture file. Usage:
//!   mint-fixtures [--force] [PATH]
//! Default path: fixtures/oracle_fixtures.json relative to the working
//! directory. Refuses to overwrite drifted values without --force.

use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut force = false;
    let mut path = PathBuf::from("fixtures/oracle_fixtures.json");
    for arg in std::env::args().skip(1) {
        match arg.as_str() {
            "--force" => force = true,
            other => path = PathBuf::from(other),
        }
    }
    let fresh = toa_oracle::fixtures::generate();
    match toa_oracle::fixtures::write(&path, &fresh, force) {
        Ok(()) => {
            eprintln!("wrote {} fixtures to {}", fresh.fixtures.len(), path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(4)
        }
    }
}
