use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scoring rule for the eigengap between consecutive eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRule {
    /// `λ_i / λ_{i+1}`; scale free, so a dominant `λ_1` does not mask the
    /// gap after `λ_k`.
    #[default]
    Ratio,
    /// `λ_i − λ_{i+1}`.
    Absolute,
}

fn score(rule: GapRule, hi: f64, lo: f64) -> f64 {
    match rule {
        GapRule::Absolute => hi - lo,
        GapRule::Ratio if hi <= 0.0 => f64::NEG_INFINITY,
        GapRule::Ratio if lo <= 0.0 => f64::INFINITY,
        GapRule::Ratio => hi / lo,
    }
}

/// [`estimate_k_with`] under the default rule.
pub fn estimate_k(spectrum: &[f64], k_max: usize) -> Result<usize> {
    estimate_k_with(spectrum, k_max, GapRule::default())
}

/// The `i ∈ [1, k_max]` maximising the gap score between `λ_i` and
/// `λ_{i+1}` of a descending spectrum. The first maximiser wins ties.
pub fn estimate_k_with(spectrum: &[f64], k_max: usize, rule: GapRule) -> Result<usize> {
    if k_max == 0 || spectrum.len() < k_max + 1 {
        return Err(Error::InvalidParameters(format!(
            "need k_max >= 1 and at least k_max + 1 eigenvalues, got k_max = {k_max}, {} values",
            spectrum.len()
        )));
    }
    if spectrum.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameters("spectrum contains non-finite values".into()));
    }
    let mut best = 1;
    let mut best_score = score(rule, spectrum[0], spectrum[1]);
    for i in 2..=k_max {
        let s = score(rule, spectrum[i - 1], spectrum[i]);
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    Ok(best)
}
