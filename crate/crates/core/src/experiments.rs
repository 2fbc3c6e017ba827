//! Two-stage 2^k factorial study of the red agent's levers.
//!
//! Stage 1 freezes every trust factor at 1 and contrasts the two noise
//! levels per scenario. Stage 2 enables trust dynamics and contrasts the
//! leader trust, red trust, and noise factors over all eight level
//! combinations. Replicates are paired: every run of a (scenario,
//! replicate) cell shares one derived seed, so level contrasts compare
//! identically initialized populations.

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{self, EngineError, ScenarioKind, SimConfig};
use crate::stats::{self, StatsError, SummaryStats};

/// The two levels of each factor. The "+" level of the red trust is the
/// stronger distrust, -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorLevels {
    pub eta_low: f64,
    pub eta_high: f64,
    pub tau_b_low: f64,
    pub tau_b_high: f64,
    pub tau_r_low: f64,
    pub tau_r_high: f64,
}

impl Default for FactorLevels {
    fn default() -> Self {
        FactorLevels {
            eta_low: 0.1,
            eta_high: 0.9,
            tau_b_low: 0.2,
            tau_b_high: 1.0,
            tau_r_low: -0.2,
            tau_r_high: -1.0,
        }
    }
}

/// Which factor a main effect contrasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    TauBlueLeader,
    TauRed,
    Eta,
}

/// Level choice for one stage-2 run: `true` picks the "+" level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Combination {
    pub tau_b_high: bool,
    pub tau_r_high: bool,
    pub eta_high: bool,
}

impl Combination {
    pub fn all() -> [Combination; 8] {
        let mut out = [Combination {
            tau_b_high: false,
            tau_r_high: false,
            eta_high: false,
        }; 8];
        for (idx, combo) in out.iter_mut().enumerate() {
            combo.tau_b_high = idx & 0b100 != 0;
            combo.tau_r_high = idx & 0b010 != 0;
            combo.eta_high = idx & 0b001 != 0;
        }
        out
    }

    fn is_high(self, factor: Factor) -> bool {
        match factor {
            Factor::TauBlueLeader => self.tau_b_high,
            Factor::TauRed => self.tau_r_high,
            Factor::Eta => self.eta_high,
        }
    }
}

/// One table row: a named quantity across all replicates of one scenario,
/// with its summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectRow {
    pub scenario: ScenarioKind,
    pub effect_name: String,
    pub per_replicate: Vec<f64>,
    pub stats: SummaryStats,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("at least 2 replicates required, got {0}")]
    TooFewReplicates(usize),
    #[error("combination {0:?} missing from the factorial table")]
    MissingCombination(Combination),
    #[error("combination {0:?} appears more than once")]
    DuplicateCombination(Combination),
    #[error("run failed for scenario {scenario}, replicate {replicate}, level {level}: {source}")]
    RunFailed {
        scenario: &'static str,
        replicate: usize,
        level: String,
        source: EngineError,
    },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Noise effect for one paired replicate: the same initialization run at
/// both noise levels.
pub fn stage1_effect(d_low: f64, d_high: f64) -> f64 {
    d_high - d_low
}

/// Main effect of `factor`: mean response over the four "+"-level
/// combinations minus the mean over the four "-"-level ones.
pub fn main_effect(
    d_by_combination: &[(Combination, f64)],
    factor: Factor,
) -> Result<f64, ExperimentError> {
    for combo in Combination::all() {
        match d_by_combination.iter().filter(|(c, _)| *c == combo).count() {
            0 => return Err(ExperimentError::MissingCombination(combo)),
            1 => {}
            _ => return Err(ExperimentError::DuplicateCombination(combo)),
        }
    }
    let mut high = 0.0;
    let mut low = 0.0;
    for &(combo, d) in d_by_combination {
        if combo.is_high(factor) {
            high += d;
        } else {
            low += d;
        }
    }
    Ok((high - low) / 4.0)
}

/// Seed for one (scenario, replicate) cell, derived from the master seed
/// by a splitmix-style mix so any subset of cells can be reproduced alone.
pub fn derive_seed(master_seed: u64, scenario: ScenarioKind, replicate: usize) -> u64 {
    let scenario_idx = ScenarioKind::ALL
        .iter()
        .position(|s| *s == scenario)
        .unwrap() as u64;
    let mut z = master_seed
        .wrapping_add(scenario_idx.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add((replicate as u64 + 1).wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn run_cell(
    config: &SimConfig,
    scenario: ScenarioKind,
    replicate: usize,
    seed: u64,
    level: String,
) -> Result<f64, ExperimentError> {
    engine::run_simulation(config, seed, false)
        .map(|r| r.d_bar)
        .map_err(|source| ExperimentError::RunFailed {
            scenario: scenario.label(),
            replicate,
            level,
            source,
        })
}

/// Stage 1: per scenario, paired runs at the two noise levels with all
/// trusts frozen at 1. Emits the low and high distance rows and the noise
/// effect row.
pub fn run_stage1(
    config_base: &SimConfig,
    replicates: usize,
    master_seed: u64,
) -> Result<Vec<EffectRow>, ExperimentError> {
    run_stage1_with_levels(config_base, replicates, master_seed, &FactorLevels::default())
}

pub fn run_stage1_with_levels(
    config_base: &SimConfig,
    replicates: usize,
    master_seed: u64,
    levels: &FactorLevels,
) -> Result<Vec<EffectRow>, ExperimentError> {
    if replicates < 2 {
        return Err(ExperimentError::TooFewReplicates(replicates));
    }
    let mut rows = Vec::new();
    for scenario in ScenarioKind::ALL {
        let pairs: Vec<(f64, f64)> = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(master_seed, scenario, r);
                let mut config = SimConfig {
                    scenario,
                    trust_dynamics_enabled: false,
                    tau_blue_leader: 1.0,
                    tau_red: 1.0,
                    eta: levels.eta_low,
                    ..config_base.clone()
                };
                let d_low = run_cell(&config, scenario, r, seed, format!("eta={}", config.eta))?;
                config.eta = levels.eta_high;
                let d_high = run_cell(&config, scenario, r, seed, format!("eta={}", config.eta))?;
                Ok((d_low, d_high))
            })
            .collect::<Result<_, ExperimentError>>()?;

        let low: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let high: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let effect: Vec<f64> = pairs.iter().map(|p| stage1_effect(p.0, p.1)).collect();
        for (name, values) in [
            ("d_eta_low", low),
            ("d_eta_high", high),
            ("e_eta", effect),
        ] {
            rows.push(EffectRow {
                scenario,
                effect_name: name.to_string(),
                stats: stats::summary_stats(&values)?,
                per_replicate: values,
            });
        }
    }
    Ok(rows)
}

/// Stage 2: per scenario and replicate, all eight factor combinations
/// with trust dynamics enabled, reduced to the three main effects.
pub fn run_stage2(
    config_base: &SimConfig,
    replicates: usize,
    master_seed: u64,
) -> Result<Vec<EffectRow>, ExperimentError> {
    run_stage2_with_levels(config_base, replicates, master_seed, &FactorLevels::default())
}

pub fn run_stage2_with_levels(
    config_base: &SimConfig,
    replicates: usize,
    master_seed: u64,
    levels: &FactorLevels,
) -> Result<Vec<EffectRow>, ExperimentError> {
    if replicates < 2 {
        return Err(ExperimentError::TooFewReplicates(replicates));
    }
    let mut rows = Vec::new();
    for scenario in ScenarioKind::ALL {
        let effects: Vec<(f64, f64, f64)> = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(master_seed, scenario, r);
                let mut table = Vec::with_capacity(8);
                for combo in Combination::all() {
                    let config = SimConfig {
                        scenario,
                        trust_dynamics_enabled: true,
                        tau_blue_leader: if combo.tau_b_high {
                            levels.tau_b_high
                        } else {
                            levels.tau_b_low
                        },
                        tau_red: if combo.tau_r_high {
                            levels.tau_r_high
                        } else {
                            levels.tau_r_low
                        },
                        eta: if combo.eta_high {
                            levels.eta_high
                        } else {
                            levels.eta_low
                        },
                        ..config_base.clone()
                    };
                    let d = run_cell(
                        &config,
                        scenario,
                        r,
                        seed,
                        format!("{combo:?}"),
                    )?;
                    table.push((combo, d));
                }
                Ok((
                    main_effect(&table, Factor::TauBlueLeader)?,
                    main_effect(&table, Factor::TauRed)?,
                    main_effect(&table, Factor::Eta)?,
                ))
            })
            .collect::<Result<_, ExperimentError>>()?;

        let e_tau_b: Vec<f64> = effects.iter().map(|e| e.0).collect();
        let e_tau_r: Vec<f64> = effects.iter().map(|e| e.1).collect();
        let e_n: Vec<f64> = effects.iter().map(|e| e.2).collect();
        for (name, values) in [
            ("e_tauB", e_tau_b),
            ("e_tauR", e_tau_r),
            ("e_N", e_n),
        ] {
            rows.push(EffectRow {
                scenario,
                effect_name: name.to_string(),
                stats: stats::summary_stats(&values)?,
                per_replicate: values,
            });
        }
    }
    Ok(rows)
}
