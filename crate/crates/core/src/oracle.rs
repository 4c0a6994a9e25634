//! Reference evaluators used to cross-check the closed forms and the
//! inclusion-exclusion engine.
//!
//! * [`enum_prob`] sums the probability of every state of the basic events
//!   in which the top event holds. Exact up to rounding, exponential cost.
//! * [`mc_prob`] estimates the same quantity by sampling.
//!
//! # Sampling generator
//!
//! Each Bernoulli draw is keyed by `(seed, sample_index, event_index)`, so
//! results do not depend on how samples are split across threads. With
//! `mix` the SplitMix64 output function
//!
//! ```text
//! mix(z) = z += 0x9E3779B97F4A7C15
//!          z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!          z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!          z ^ (z >> 31)
//! ```
//!
//! the uniform variate is
//!
//! ```text
//! h = mix(seed ^ mix(sample_index))
//! h = mix(h ^ mix(event_index ^ 0xD1B54A32D192ED03))
//! u = (h >> 11) * 2^-53            in [0, 1)
//! ```
//!
//! and the event is failed when `u < p`. This definition is part of the
//! output contract: changing it changes every Monte Carlo result.

use crate::error::{Error, Result};
use crate::gates::ProbAssignment;
use crate::model::FaultTree;
use crate::sum::CompensatedSum;

/// Largest number of basic events the enumeration oracle accepts.
pub const MAX_ENUM_EVENTS: usize = 24;

/// States per enumeration chunk; chunks are summed independently and
/// merged in order, so the result does not depend on the thread count.
const ENUM_CHUNK_BITS: u32 = 12;

/// Exact top-event probability by enumerating all `2^n` event states.
/// Rounding can push the sum a few ulps past 1; the result is clamped.
pub fn enum_prob(tree: &FaultTree, assignment: &ProbAssignment) -> Result<f64> {
    let probs = assignment.for_tree(tree)?;
    check_enum_size(probs.len())?;
    let sum = enumerate_states(&probs, || {
        let mut ev = tree.evaluator();
        move |state: &[bool]| ev.eval(state)
    })?;
    Ok(sum.clamp(0.0, 1.0))
}

fn check_enum_size(n: usize) -> Result<()> {
    if n > MAX_ENUM_EVENTS {
        Err(Error::EnumTooLarge {
            count: n,
            limit: MAX_ENUM_EVENTS,
        })
    } else {
        Ok(())
    }
}

/// Sums `∏_e (p_e if s_e else 1 - p_e)` over all states `s` accepted by
/// the predicate. `make_predicate` is called once per worker thread.
///
/// With a predicate that accepts everything the result is the total mass
/// of the distribution, which must be 1.
pub fn enumerate_states<F, P>(probs: &[f64], make_predicate: F) -> Result<f64>
where
    F: Fn() -> P + Sync,
    P: FnMut(&[bool]) -> bool,
{
    let n = probs.len();
    check_enum_size(n)?;
    for &p in probs {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
    }

    // weight(s) = low[s & low_mask] * high[s >> low_bits]
    let low_bits = n / 2;
    let low = weight_table(&probs[..low_bits]);
    let high = weight_table(&probs[low_bits..]);
    let low_mask = (1u64 << low_bits) - 1;

    let states = 1u64 << n;
    let chunk = 1u64 << ENUM_CHUNK_BITS.min(n as u32);
    let chunks = states / chunk;

    let sum_chunk = |c: u64, pred: &mut P, buf: &mut Vec<bool>| {
        let mut sum = CompensatedSum::new();
        for s in c * chunk..(c + 1) * chunk {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = s >> i & 1 == 1;
            }
            if pred(buf) {
                sum.add(low[(s & low_mask) as usize] * high[(s >> low_bits) as usize]);
            }
        }
        sum
    };

    let workers = std::thread::available_parallelism()
        .map(|w| w.get() as u64)
        .unwrap_or(1)
        .min(chunks);
    let partials: Vec<CompensatedSum> = if workers <= 1 {
        let mut pred = make_predicate();
        let mut buf = vec![false; n];
        (0..chunks)
            .map(|c| sum_chunk(c, &mut pred, &mut buf))
            .collect()
    } else {
        let mut partials = vec![CompensatedSum::new(); chunks as usize];
        let per_worker = chunks.div_ceil(workers) as usize;
        std::thread::scope(|scope| {
            for (w, slots) in partials.chunks_mut(per_worker).enumerate() {
                let make = &make_predicate;
                let sum_chunk = &sum_chunk;
                scope.spawn(move || {
                    let mut pred = make();
                    let mut buf = vec![false; n];
                    for (k, slot) in slots.iter_mut().enumerate() {
                        *slot = sum_chunk((w * per_worker + k) as u64, &mut pred, &mut buf);
                    }
                });
            }
        });
        partials
    };

    let mut total = CompensatedSum::new();
    partials.into_iter().for_each(|p| total.merge(p));
    Ok(total.value())
}

/// Probability of each joint state of `probs`, indexed by the state bits.
fn weight_table(probs: &[f64]) -> Vec<f64> {
    (0..1u64 << probs.len())
        .map(|s| {
            probs
                .iter()
                .enumerate()
                .map(|(i, &p)| if s >> i & 1 == 1 { p } else { 1.0 - p })
                .product()
        })
        .collect()
}

/// Monte Carlo estimate of the top-event probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// `sqrt(estimate * (1 - estimate) / samples)`
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub hits: u64,
}

impl McEstimate {
    fn from_hits(hits: u64, samples: u64, seed: u64) -> Self {
        let estimate = hits as f64 / samples as f64;
        Self {
            estimate,
            std_error: standard_error(estimate, samples),
            samples,
            seed,
            hits,
        }
    }
}

pub fn standard_error(estimate: f64, samples: u64) -> f64 {
    (estimate * (1.0 - estimate) / samples as f64).sqrt()
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform variate in `[0, 1)` for one (sample, event) pair.
pub fn uniform(seed: u64, sample_index: u64, event_index: u64) -> f64 {
    let h = mix(seed ^ mix(sample_index));
    let h = mix(h ^ mix(event_index ^ 0xD1B5_4A32_D192_ED03));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Monte Carlo estimate using all available cores.
pub fn mc_prob(
    tree: &FaultTree,
    assignment: &ProbAssignment,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get());
    mc_prob_with_workers(tree, assignment, samples, seed, workers)
}

/// Monte Carlo estimate with an explicit thread count. The result is the
/// same for every `workers` value.
pub fn mc_prob_with_workers(
    tree: &FaultTree,
    assignment: &ProbAssignment,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let probs = assignment.for_tree(tree)?;
    let count = |range: std::ops::Range<u64>| -> u64 {
        let mut ev = tree.evaluator();
        let mut state = vec![false; probs.len()];
        let mut hits = 0;
        for sample in range {
            for (i, (s, &p)) in state.iter_mut().zip(&probs).enumerate() {
                *s = uniform(seed, sample, i as u64) < p;
            }
            hits += u64::from(ev.eval(&state));
        }
        hits
    };

    let workers = (workers.max(1) as u64).min(samples);
    let hits = if workers == 1 {
        count(0..samples)
    } else {
        let chunk = samples.div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = (lo + chunk).min(samples);
                    let count = &count;
                    scope.spawn(move || count(lo..hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling worker panicked"))
                .sum()
        })
    };
    Ok(McEstimate::from_hits(hits, samples, seed))
}
