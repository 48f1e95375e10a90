use std::fs;
use std::process::ExitCode;

use ifem_cli::{emit_table, Args, CliError};
use ifem_core::study::run_study_with;

fn run(args: &Args) -> Result<(), CliError> {
    let config = args.study_config()?;
    let records = run_study_with(&config, |level| {
        if args.quiet {
            return;
        }
        if let Some(r) = level.first() {
            eprintln!(
                "n_c = {:>4}  dofs = {:>8}  cg iterations = {:>5}",
                r.n_cells_per_axis, r.n_dofs, r.cg_iterations
            );
        }
    })?;
    let text = emit_table(&records, args.format)?;
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::load(std::env::args_os()) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
