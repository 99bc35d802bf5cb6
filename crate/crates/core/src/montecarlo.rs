//! Seeded, reproducible Monte Carlo estimation of win probabilities.
//!
//! Each trial runs on its own ChaCha8 stream derived from `(seed, trial
//! index)`, so results are bit-identical no matter how trials are
//! scheduled; aggregation is integer win counting. Estimates are floats
//! by design; exactness is the exact engine's job.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::format::Format;
use crate::rational::to_f64;
use crate::values::PlayerValues;
use crate::{Error, Result};

/// Identifier recorded in every report: ChaCha8 keyed by the seed with
/// the 64-bit stream counter set to the trial index.
pub const RNG_ALGORITHM: &str = "chacha8(seed_from_u64(seed), stream=trial)";

/// The deterministic substream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One simulated tournament: the winner plus the per-round match log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationOutcome {
    pub winner: usize,
    /// `(winner, loser)` pairs per round, in pairing order; the losers
    /// are exactly the players eliminated in that round.
    pub matches_by_round: Vec<Vec<(usize, usize)>>,
}

impl SimulationOutcome {
    pub fn eliminated_in(&self, round: usize) -> Vec<usize> {
        self.matches_by_round[round].iter().map(|&(_, l)| l).collect()
    }
}

/// Play one tournament: per round, draw the participants uniformly,
/// shuffle and pair adjacently (a uniform perfect matching), then resolve
/// each match with an independent Bernoulli draw.
pub fn simulate_once(
    values: &PlayerValues,
    format: &Format,
    rng: &mut impl Rng,
) -> SimulationOutcome {
    let win_prob = win_prob_matrix(values);
    simulate_with_matrix(&win_prob, format, rng)
}

fn win_prob_matrix(values: &PlayerValues) -> Vec<Vec<f64>> {
    let n = values.n();
    let mut p = vec![vec![0.0; n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = to_f64(&(values.value(i) / (values.value(i) + values.value(j))));
            }
        }
    }
    p
}

fn simulate_with_matrix(
    win_prob: &[Vec<f64>],
    format: &Format,
    rng: &mut impl Rng,
) -> SimulationOutcome {
    let n = format.n();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut matches_by_round = Vec::with_capacity(format.num_rounds());
    for &m in format.rounds() {
        let picks = rand::seq::index::sample(rng, alive.len(), 2 * m);
        let mut participants: Vec<usize> = picks.iter().map(|k| alive[k]).collect();
        participants.shuffle(rng);
        let mut matches = Vec::with_capacity(m);
        for pair in participants.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if rng.random_bool(win_prob[a][b]) {
                matches.push((a, b));
            } else {
                matches.push((b, a));
            }
        }
        alive.retain(|p| !matches.iter().any(|&(_, loser)| loser == *p));
        matches_by_round.push(matches);
    }
    debug_assert_eq!(alive.len(), 1);
    SimulationOutcome {
        winner: alive[0],
        matches_by_round,
    }
}

/// Monte Carlo estimates with standard errors, canonical player order.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub trials: u64,
    pub seed: u64,
    pub rng_algorithm: &'static str,
    pub win_counts: Vec<u64>,
    /// `win_counts[i] / trials`.
    pub point_estimates: Vec<f64>,
    /// `sqrt(p̂(1−p̂)/trials)`.
    pub standard_errors: Vec<f64>,
}

/// Run `trials` independent tournaments. Trials execute in parallel on
/// their own substreams; the report depends only on `(values, format,
/// trials, seed)`.
pub fn estimate(
    values: &PlayerValues,
    format: &Format,
    trials: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if values.n() != format.n() {
        return Err(Error::Domain(format!(
            "format is for {} players but the instance has {}",
            format.n(),
            values.n()
        )));
    }
    if trials == 0 {
        return Err(Error::Domain("trial count must be at least 1".into()));
    }
    let n = values.n();
    let win_prob = win_prob_matrix(values);
    let win_counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, trial| {
                let mut rng = trial_rng(seed, trial);
                let outcome = simulate_with_matrix(&win_prob, format, &mut rng);
                acc[outcome.winner] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let t = trials as f64;
    let point_estimates: Vec<f64> = win_counts.iter().map(|&w| w as f64 / t).collect();
    let standard_errors: Vec<f64> = point_estimates
        .iter()
        .map(|&p| (p * (1.0 - p) / t).sqrt())
        .collect();
    Ok(EstimateReport {
        trials,
        seed,
        rng_algorithm: RNG_ALGORITHM,
        win_counts,
        point_estimates,
        standard_errors,
    })
}
