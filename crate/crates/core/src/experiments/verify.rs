use rayon::prelude::*;
use serde_json::{Map, Value};

use super::config::{CheckKind, TrialConfig};
use super::trial::{check_margins, EIG_STREAM};
use crate::error::{Error, Result};
use crate::graph_model::{AdjacencyOptions, SsbmInstance, SsbmParams};
use crate::linalg::EigOptions;
use crate::rng::derive_seed;

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

type TrialMargins = Vec<(CheckKind, Vec<(String, f64)>)>;

/// Runs `checks` on `trials` instances of `cell` (instance `t` seeded with
/// `derive_seed(seed, t)`) and returns a flat JSON object: the minimum of
/// every named margin across trials, `<check>_pass_rate` per check and an
/// overall `passed`. Non-finite margins are written as `null`.
pub fn verify(
    checks: &[CheckKind],
    cell: &SsbmParams,
    trials: usize,
    seed: u64,
    config: &TrialConfig,
) -> Result<Map<String, Value>> {
    cell.validate()?;
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    let mut checks = checks.to_vec();
    checks.sort();
    checks.dedup();
    let per_trial: Vec<TrialMargins> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let params = cell.with_seed(derive_seed(seed, t as u64));
            let inst = SsbmInstance::sample(
                &params,
                AdjacencyOptions {
                    zero_diagonal: config.zero_diagonal,
                },
            )?;
            let eig = EigOptions {
                seed: derive_seed(params.seed, EIG_STREAM),
                ..config.eig
            };
            checks
                .iter()
                .map(|&c| check_margins(c, &inst, &eig, config, None).map(|m| (c, m)))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut out = Map::new();
    out.insert("checks".into(), Value::from(checks.iter().map(|c| c.name()).collect::<Vec<_>>()));
    out.insert("n".into(), Value::from(cell.n));
    out.insert("k".into(), Value::from(cell.k));
    out.insert("p".into(), number(cell.p));
    out.insert("q".into(), number(cell.q));
    out.insert("trials".into(), Value::from(trials));
    out.insert("seed".into(), Value::from(seed));
    let mut all_pass = true;
    for (ci, &check) in checks.iter().enumerate() {
        let mut mins: Vec<(String, f64)> = Vec::new();
        let mut passes = 0usize;
        for trial in &per_trial {
            let margins = &trial[ci].1;
            if margins.iter().all(|(_, m)| *m >= 0.0) {
                passes += 1;
            }
            for (name, m) in margins {
                match mins.iter_mut().find(|(n, _)| n == name) {
                    Some(slot) => slot.1 = slot.1.min(*m),
                    None => mins.push((name.clone(), *m)),
                }
            }
        }
        for (name, m) in mins {
            out.insert(name, number(m));
        }
        let rate = passes as f64 / trials as f64;
        all_pass &= passes == trials;
        out.insert(format!("{}_pass_rate", check.name()), number(rate));
    }
    out.insert("passed".into(), Value::Bool(all_pass));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_report_for_all_checks() {
        let cell = SsbmParams::new(60, 2, 0.7, 0.1, 0).unwrap();
        let report = verify(&CheckKind::ALL, &cell, 2, 4, &TrialConfig::default()).unwrap();
        for c in CheckKind::ALL {
            assert!(report.contains_key(&format!("{}_pass_rate", c.name())), "{c:?}");
        }
        for key in ["delta_min", "triangle", "weyl", "f_inter", "noise_norm", "projconc_q99"] {
            assert!(report.contains_key(key), "{key}");
        }
        assert!(report.values().all(|v| !v.is_object()));
        let again = verify(&CheckKind::ALL, &cell, 2, 4, &TrialConfig::default()).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn rejects_zero_trials() {
        let cell = SsbmParams::new(10, 2, 0.7, 0.1, 0).unwrap();
        assert!(verify(&[CheckKind::Eig], &cell, 0, 0, &TrialConfig::default()).is_err());
    }
}
