use std::path::Path;
use std::sync::Arc;

use log::info;
use oseen_core::evolution::fmt_float;
use oseen_core::spectrum::{generic_profile, semigroup_decay, ModeForms, OperatorMatrix, RadialGrid, Subspace};

use super::write_table;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::summary::{Check, Summary};

pub(crate) const RATE_SLACK: f64 = 1e-3;
pub(crate) const TARGETS: [(f64, Subspace); 2] = [(0.5, Subspace::ZeroMean), (1.0, Subspace::MomentFree)];

struct Row {
    alpha: f64,
    n: i32,
    target: f64,
    subspace: Subspace,
    rate: f64,
    r_squared: f64,
}

pub fn run(cfg: &ExperimentConfig, out: &Path, summary: &mut Summary) -> CliResult<()> {
    let grid = Arc::new(RadialGrid::for_basis(cfg.resolution)?);
    let forms: Vec<Arc<ModeForms>> = cfg
        .modes
        .iter()
        .map(|&n| ModeForms::new(n, cfg.resolution, grid.clone()).map(Arc::new))
        .collect::<Result<_, _>>()?;
    let per_alpha = |alpha: f64| -> CliResult<Vec<Row>> {
        info!("linear decay at alpha = {alpha}");
        let mut rows = Vec::new();
        for f in &forms {
            let op = OperatorMatrix::from_forms(f.clone(), alpha)?;
            for (target, sub) in TARGETS {
                let r0 = generic_profile(f, sub, cfg.seed)?;
                let d = semigroup_decay(&op, &r0, sub, target, cfg.decay_end_tau, RATE_SLACK)?;
                rows.push(Row { alpha, n: f.n(), target, subspace: sub, rate: d.rate, r_squared: d.r_squared });
            }
        }
        Ok(rows)
    };
    let workers = cfg.workers.clamp(1, cfg.alphas.len().max(1));
    let mut slots: Vec<Option<CliResult<Vec<Row>>>> = (0..cfg.alphas.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let per_alpha = &per_alpha;
                scope.spawn(move || {
                    cfg.alphas
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| i % workers == w)
                        .map(|(i, &a)| (i, per_alpha(a)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("decay worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    let mut rows = Vec::new();
    for slot in slots {
        rows.extend(slot.ok_or_else(|| CliError::Rejected("alpha left unassigned".into()))??);
    }

    for &alpha in &cfg.alphas {
        for (target, sub) in TARGETS {
            let slowest = rows
                .iter()
                .filter(|r| r.alpha == alpha && r.subspace == sub)
                .min_by(|a, b| a.rate.total_cmp(&b.rate));
            let (rate, detail) = match slowest {
                Some(r) => (r.rate, format!("slowest mode n = {}", r.n)),
                None => (f64::NAN, "no modes".into()),
            };
            summary.checks.push(
                Check::at_least(format!("decay_rate_{}_alpha{alpha}", sub.name()), 9, rate, target - RATE_SLACK)
                    .detail(detail),
            );
        }
    }
    let table = rows.iter().map(|r| {
        vec![
            format!("{:?}", r.alpha),
            r.n.to_string(),
            r.subspace.name().to_string(),
            fmt_float(r.target),
            fmt_float(r.rate),
            fmt_float(r.r_squared),
        ]
    });
    write_table(&out.join("decay.csv"), &["alpha", "n", "subspace", "target", "rate", "r_squared"], table)?;
    Ok(())
}
