use std::io::{Read, Write};

use rayon::prelude::*;

use super::config::SweepConfig;
use super::trial::{cell_seed, run_trial, TrialResult};
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 12] = [
    "n",
    "k",
    "p",
    "q",
    "trial",
    "seed",
    "exact",
    "agreement",
    "k_hat",
    "separation_ratio",
    "eps_max",
    "runtime_ms",
];

/// One CSV line. Trial rows carry 0/1 in `exact` and `k_hat = −1` on
/// failure; summary rows have `trial = −1`, the recovery rate in `exact`
/// and means over successful trials elsewhere (`eps_max` is the maximum,
/// `runtime_ms` the total).
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub trial: i64,
    pub seed: u64,
    pub exact: f64,
    pub agreement: f64,
    pub k_hat: f64,
    pub separation_ratio: f64,
    pub eps_max: f64,
    pub runtime_ms: f64,
}

impl ResultRow {
    pub fn is_summary(&self) -> bool {
        self.trial < 0
    }

    /// Value of a named column.
    pub fn column(&self, name: &str) -> Option<f64> {
        Some(match name {
            "n" => self.n as f64,
            "k" => self.k as f64,
            "p" => self.p,
            "q" => self.q,
            "trial" => self.trial as f64,
            "seed" => self.seed as f64,
            "exact" | "recovery_rate" => self.exact,
            "agreement" | "mean_agreement" => self.agreement,
            "k_hat" => self.k_hat,
            "separation_ratio" => self.separation_ratio,
            "eps_max" => self.eps_max,
            "runtime_ms" => self.runtime_ms,
            _ => return None,
        })
    }

    fn from_trial(t: &TrialResult) -> Self {
        Self {
            n: t.n,
            k: t.k,
            p: t.p,
            q: t.q,
            trial: t.trial as i64,
            seed: t.seed,
            exact: if t.exact { 1.0 } else { 0.0 },
            agreement: t.agreement,
            k_hat: t.k_hat.map_or(-1.0, |k| k as f64),
            separation_ratio: t.separation_ratio,
            eps_max: t.eps_max,
            runtime_ms: t.runtime_ms as f64,
        }
    }

    fn record(&self) -> [String; 12] {
        [
            self.n.to_string(),
            self.k.to_string(),
            self.p.to_string(),
            self.q.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.exact.to_string(),
            self.agreement.to_string(),
            self.k_hat.to_string(),
            self.separation_ratio.to_string(),
            self.eps_max.to_string(),
            self.runtime_ms.to_string(),
        ]
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (s, c) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if c == 0 {
        f64::NAN
    } else {
        s / c as f64
    }
}

/// The summary row of one cell's trials, given in trial order.
pub fn summarize(trials: &[TrialResult], seed: u64) -> Result<ResultRow> {
    let first = trials
        .first()
        .ok_or_else(|| Error::InvalidParameters("cannot summarize zero trials".into()))?;
    let ok: Vec<&TrialResult> = trials.iter().filter(|t| t.k_hat.is_some()).collect();
    let exact = trials.iter().filter(|t| t.exact).count() as f64 / trials.len() as f64;
    Ok(ResultRow {
        n: first.n,
        k: first.k,
        p: first.p,
        q: first.q,
        trial: -1,
        seed,
        exact,
        agreement: mean(ok.iter().map(|t| t.agreement)),
        k_hat: mean(ok.iter().map(|t| t.k_hat.unwrap_or(0) as f64)),
        separation_ratio: mean(ok.iter().map(|t| t.separation_ratio)),
        eps_max: ok.iter().map(|t| t.eps_max).fold(f64::NAN, f64::max),
        runtime_ms: trials.iter().map(|t| t.runtime_ms as f64).sum(),
    })
}

/// Per-trial results and CSV rows of a sweep.
#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub trials: Vec<TrialResult>,
    /// Cells in grid order; each cell's trial rows then its summary row.
    pub rows: Vec<ResultRow>,
}

/// Runs every (cell, trial) pair in parallel. Output order and content do
/// not depend on the thread count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let cells = config.cells();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.trials).map(move |t| (c, t)))
        .collect();
    let trials: Vec<TrialResult> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let seed = crate::rng::derive_seed(cell_seed(config.base_seed, &cells[c]), t as u64);
            run_trial(&cells[c].with_seed(seed), t, &config.trial)
        })
        .collect();
    let mut rows = Vec::with_capacity(trials.len() + cells.len());
    for (c, chunk) in trials.chunks(config.trials).enumerate() {
        rows.extend(chunk.iter().map(ResultRow::from_trial));
        rows.push(summarize(chunk, cell_seed(config.base_seed, &cells[c]))?);
    }
    Ok(SweepOutput { trials, rows })
}

pub fn write_csv<W: Write>(w: W, rows: &[ResultRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

/// The complete CSV text of a sweep.
pub fn sweep_csv(config: &SweepConfig) -> Result<String> {
    let out = run_sweep(config)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &out.rows)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

fn parse<T: std::str::FromStr>(field: &str, column: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {field:?} in column {column}")))
}

/// Reads CSV written by [`write_csv`]; the header must match exactly.
pub fn read_rows<R: Read>(r: R) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_COLUMNS {
        return Err(Error::Parse(format!(
            "unexpected CSV header {header:?}, expected {CSV_COLUMNS:?}"
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| &rec[i];
        rows.push(ResultRow {
            n: parse(f(0), "n")?,
            k: parse(f(1), "k")?,
            p: parse(f(2), "p")?,
            q: parse(f(3), "q")?,
            trial: parse(f(4), "trial")?,
            seed: parse(f(5), "seed")?,
            exact: parse(f(6), "exact")?,
            agreement: parse(f(7), "agreement")?,
            k_hat: parse(f(8), "k_hat")?,
            separation_ratio: parse(f(9), "separation_ratio")?,
            eps_max: parse(f(10), "eps_max")?,
            runtime_ms: parse(f(11), "runtime_ms")?,
        });
    }
    Ok(rows)
}
