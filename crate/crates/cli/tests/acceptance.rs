//! Runs every experiment with its default configuration and prints one verdict per
//! acceptance criterion. Set `OSEEN_ACCEPTANCE_OUT` to keep the run directories.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use oseen_cli::{run, Check, Experiment, ExperimentConfig};

const CRITERIA: [(u8, &str); 10] = [
    (1, "vortex identities"),
    (2, "frozen eigenstructure of the discrete operators"),
    (3, "symmetry and skew-symmetry in the Gaussian-weighted space"),
    (4, "alpha = 0 harmonic-oscillator spectrum"),
    (5, "eigenvalue bounds on the constrained subspaces"),
    (6, "nonlinear and second-order convergence rates"),
    (7, "entropy suite on positive data"),
    (8, "conservation, first-moment decay and positivity"),
    (9, "linear semigroup decay"),
    (10, "scaled and unscaled integrators agree"),
];

fn main() -> ExitCode {
    faer::set_global_parallelism(faer::Par::Seq);
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let keep = std::env::var_os("OSEEN_ACCEPTANCE_OUT").map(PathBuf::from);
    let tmp = tempfile::tempdir().expect("temporary directory");
    let root = keep.unwrap_or_else(|| tmp.path().to_path_buf());

    let mut by_criterion: BTreeMap<u8, Vec<Check>> = BTreeMap::new();
    let mut errors = Vec::new();
    for experiment in Experiment::ALL {
        let mut cfg = ExperimentConfig::defaults(experiment);
        cfg.out = root.join(experiment.name());
        cfg.workers = workers;
        let start = Instant::now();
        match run(&cfg) {
            Ok(summary) => {
                eprintln!("{} finished in {:.1} s", experiment.name(), start.elapsed().as_secs_f64());
                if let Some(e) = summary.error {
                    errors.push(format!("{}: {e}", experiment.name()));
                }
                for c in summary.checks {
                    by_criterion.entry(c.criterion).or_default().push(c);
                }
            }
            Err(e) => errors.push(format!("{}: {e}", experiment.name())),
        }
    }

    let mut all = true;
    for (id, title) in CRITERIA {
        let checks = by_criterion.remove(&id).unwrap_or_default();
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
        all &= passed;
        let worst = checks.iter().find(|c| !c.passed).or(checks.first());
        let note = match worst {
            Some(c) => c.line(),
            None => "no checks were produced".to_string(),
        };
        println!("criterion {id:>2} {}: {title} ({} checks; {note})", if passed { "PASS" } else { "FAIL" }, checks.len());
        if !passed {
            for c in &checks {
                eprintln!("    {}", c.line());
            }
        }
    }
    for e in &errors {
        eprintln!("error: {e}");
    }
    if all && errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
