use std::io::Write;
use std::process::ExitCode;

use wall_relators::cli::{init_threads, run_from};

fn main() -> ExitCode {
    init_threads();
    let (outcome, format, out) = run_from(std::env::args_os());
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    let rendered = outcome.render(format);
    if outcome.code == 2 {
        eprintln!("{rendered}");
    } else {
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout(), "{rendered}");
    }
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&outcome.json).expect("serializable");
        if let Err(e) = std::fs::write(&path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.code as u8)
}
