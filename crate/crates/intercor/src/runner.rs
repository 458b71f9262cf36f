//! Parallel chunk runner. Chunks run on the rayon pool and are merged in
//! chunk order, so results are bit-identical to the serial engine.

use intercor_core::analytics::coverage_probability;
use intercor_core::simulator::{chunk_plan, Accumulator, ExperimentResult, ScenarioConfig};
use rayon::prelude::*;

pub fn run_parallel(cfg: &ScenarioConfig) -> intercor_core::Result<ExperimentResult> {
    let prepared = cfg.prepare()?;
    let chunks: Vec<Accumulator> = chunk_plan(cfg.trials)
        .into_par_iter()
        .map(|(index, len)| prepared.run_chunk(cfg.seed, index, len))
        .collect();
    let mut acc = Accumulator::default();
    for c in &chunks {
        acc.merge(c);
    }
    let analytic = prepared
        .coverage_query()
        .map(coverage_probability)
        .transpose()?;
    let distance = cfg
        .layout
        .user
        .as_ref()
        .map_or(f64::NAN, |u| u.normalized_distance);
    Ok(ExperimentResult::from_accumulator(
        &acc, distance, cfg.seed, analytic,
    ))
}
