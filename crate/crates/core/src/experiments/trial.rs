use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::config::{CheckKind, KModeConfig, TrialConfig, VariantConfig};
use crate::analysis::{
    decomposition_report, decomposition_report_with_basis, eig_structure_report, f_entry_check,
    mean_eigenvalues, noise_norm_check, projection_concentration_check, psi_coefficients,
    sandwich_check, spectral_claim_check, weyl_check, Check, DecompositionReport, SpectrumMode,
    F_ENTRY_MAX_N,
};
use crate::clustering::{cluster_detailed, compare_partitions, ClusterOptions, KMode, Variant};
use crate::error::Result;
use crate::graph_model::{AdjacencyOptions, SsbmInstance, SsbmParams};
use crate::linalg::{top_k_eigs, EigOptions, PolyCoeffs};
use crate::rng::{derive_seed, derive_seed_all};

/// Substream of the trial seed used to start the eigensolvers.
pub const EIG_STREAM: u64 = 2;
const CHECK_STREAM: u64 = 3;
/// Dense spectra are used for checks up to this size.
const FULL_SPECTRUM_MAX_N: usize = 2048;
const SANDWICH_VECTORS: usize = 100;
const PROJECTION_COLUMNS: usize = 200;

/// Seed of a grid cell, mixing the base seed with the cell coordinates.
pub fn cell_seed(base_seed: u64, cell: &SsbmParams) -> u64 {
    derive_seed_all(
        base_seed,
        &[cell.n as u64, cell.k as u64, cell.p.to_bits(), cell.q.to_bits()],
    )
}

pub fn trial_seed(base_seed: u64, cell: &SsbmParams, trial: usize) -> u64 {
    derive_seed(cell_seed(base_seed, cell), trial as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub trial: usize,
    pub seed: u64,
    pub exact: bool,
    /// NaN when the trial failed.
    pub agreement: f64,
    /// `None` when the trial failed.
    pub k_hat: Option<usize>,
    pub separation_ratio: f64,
    pub eps_max: f64,
    pub runtime_ms: u64,
    pub margins: BTreeMap<String, f64>,
    pub error: Option<String>,
}

struct Outcome {
    exact: bool,
    agreement: f64,
    k_hat: usize,
    separation_ratio: f64,
    eps_max: f64,
    margins: BTreeMap<String, f64>,
    check_errors: Vec<String>,
}

/// One sampled instance pushed through clustering and the requested
/// checks. `params.seed` is the trial seed. Failures are recorded in the
/// result instead of aborting.
pub fn run_trial(params: &SsbmParams, trial: usize, config: &TrialConfig) -> TrialResult {
    let start = Instant::now();
    let outcome = execute(params, config);
    let runtime_ms = if config.record_runtime {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let mut result = TrialResult {
        n: params.n,
        k: params.k,
        p: params.p,
        q: params.q,
        trial,
        seed: params.seed,
        exact: false,
        agreement: f64::NAN,
        k_hat: None,
        separation_ratio: f64::NAN,
        eps_max: f64::NAN,
        runtime_ms,
        margins: BTreeMap::new(),
        error: None,
    };
    match outcome {
        Ok(o) => {
            result.exact = o.exact;
            result.agreement = o.agreement;
            result.k_hat = Some(o.k_hat);
            result.separation_ratio = o.separation_ratio;
            result.eps_max = o.eps_max;
            result.margins = o.margins;
            if !o.check_errors.is_empty() {
                result.error = Some(o.check_errors.join("; "));
            }
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    result
}

fn execute(params: &SsbmParams, config: &TrialConfig) -> Result<Outcome> {
    let inst = SsbmInstance::sample(
        params,
        AdjacencyOptions {
            zero_diagonal: config.zero_diagonal,
        },
    )?;
    let eig = EigOptions {
        seed: derive_seed(params.seed, EIG_STREAM),
        ..config.eig
    };
    let k_mode = match config.k_mode {
        KModeConfig::Known => KMode::Known(params.k),
        KModeConfig::Auto { k_max } => KMode::Auto { k_max },
    };
    let variant = match config.variant {
        VariantConfig::Mst => Variant::Mst,
        VariantConfig::Threshold => Variant::Threshold {
            delta: params.delta(),
        },
    };
    let run = cluster_detailed(&inst.adjacency, &ClusterOptions::new(k_mode, variant).with_eig(eig))?;
    let recovery = compare_partitions(&inst.partition, &run.partition)?;

    let basis = match (&run.embedding.basis, run.k == params.k) {
        (Some(b), true) => b.clone(),
        _ => top_k_eigs(&inst.adjacency, params.k, &eig)?,
    };
    let decomp = decomposition_report_with_basis(
        &inst.adjacency,
        &inst.mean,
        &inst.partition,
        params.p,
        params.q,
        &basis,
        config.tolerances.triangle_abs,
    )?;

    let mut margins = BTreeMap::new();
    let mut check_errors = Vec::new();
    let mut checks = config.checks.clone();
    checks.sort();
    checks.dedup();
    for check in checks {
        let res = check_margins(check, &inst, &eig, config, Some(&decomp));
        match res {
            Ok(m) => margins.extend(m),
            Err(e) => check_errors.push(format!("{check:?}: {e}")),
        }
    }
    Ok(Outcome {
        exact: recovery.exact,
        agreement: recovery.agreement,
        k_hat: run.k,
        separation_ratio: decomp.separation_ratio,
        eps_max: decomp.eps_max,
        margins,
        check_errors,
    })
}

fn coefficients(inst: &SsbmInstance) -> Result<PolyCoeffs> {
    let lambda1 = mean_eigenvalues(&inst.partition, inst.params.p, inst.params.q)[0];
    psi_coefficients(lambda1, inst.params.mu(), inst.params.n)
}

pub(crate) fn spectrum_mode(n: usize) -> SpectrumMode {
    if n <= FULL_SPECTRUM_MAX_N {
        SpectrumMode::Full
    } else {
        SpectrumMode::Iterative
    }
}

/// Margins of one analysis check on a sampled instance. `decomp` is reused
/// for [`CheckKind::Decomp`] when given.
pub fn check_margins(
    check: CheckKind,
    inst: &SsbmInstance,
    eig: &EigOptions,
    config: &TrialConfig,
    decomp: Option<&DecompositionReport>,
) -> Result<Vec<(String, f64)>> {
    let params = &inst.params;
    let tol = &config.tolerances;
    let check_seed = derive_seed(params.seed, CHECK_STREAM);
    Ok(match check {
        CheckKind::Eig => {
            eig_structure_report(&inst.mean, &inst.partition, params.p, params.q, tol)?.margins()
        }
        CheckKind::Poly => spectral_claim_check(
            &inst.mean,
            &inst.adjacency,
            &coefficients(inst)?,
            params.k,
            spectrum_mode(params.n),
            eig,
        )?
        .margins(),
        CheckKind::Sandwich => sandwich_check(
            &inst.adjacency,
            &inst.mean,
            &coefficients(inst)?,
            params.k,
            SANDWICH_VECTORS,
            check_seed,
            eig,
        )?
        .margins(),
        CheckKind::Decomp => match decomp {
            Some(d) => d.margins(),
            None => decomposition_report(
                &inst.adjacency,
                &inst.mean,
                &inst.partition,
                params.p,
                params.q,
                eig,
                tol.triangle_abs,
            )?
            .margins(),
        },
        CheckKind::Fentry if params.n <= F_ENTRY_MAX_N => {
            f_entry_check(&inst.mean, &inst.partition, &coefficients(inst)?, tol.f_entry_abs)?
                .margins()
        }
        CheckKind::Fentry => Vec::new(),
        CheckKind::Norm => {
            let ratio = noise_norm_check(&inst.noise(), params.sigma(), check_seed)?;
            vec![("noise_norm".into(), tol.c0_hat - ratio)]
        }
        CheckKind::Weyl => weyl_check(
            &inst.mean,
            &inst.adjacency,
            &inst.noise(),
            (2 * params.k).min(params.n),
            spectrum_mode(params.n),
            eig,
            tol.weyl_abs,
        )?
        .margins(),
        CheckKind::Projconc => projection_concentration_check(
            &inst.mean,
            &inst.partition,
            params.p,
            params.q,
            PROJECTION_COLUMNS,
            check_seed,
            &[1.0, 2.0, 3.0],
            tol.c1_hat,
            eig,
        )?
        .margins(),
    })
}
