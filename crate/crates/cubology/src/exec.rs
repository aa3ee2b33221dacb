//! Deterministic trial execution for the verification suites and the Monte
//! Carlo estimators.
//!
//! With the default `parallel` feature the drivers fan out over rayon;
//! without it they run sequentially. Results are identical either way
//! because every trial owns an RNG stream derived from (seed, trial index)
//! and outputs are collected in trial order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG stream of one trial: the master seed keys the cipher and the
/// trial index picks the stream, so trials never share state.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn map_trials_sequential<T, F>(trials: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Sync,
    T: Send,
{
    (0..trials).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_trials_parallel<T, F>(trials: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Send + Sync,
    T: Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

/// Run `f` once per trial index and collect the results in trial order.
pub fn map_trials<T, F>(trials: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Send + Sync,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        map_trials_parallel(trials, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_trials_sequential(trials, f)
    }
}

/// Partition `total` into fixed-size batches (the last may be short) so the
/// batching, and therefore every RNG stream, is independent of thread count.
pub fn batch_sizes(total: u64, batch: u64) -> Vec<(u64, u64)> {
    assert!(batch > 0);
    (0..total.div_ceil(batch))
        .map(|i| (i, batch.min(total - i * batch)))
        .collect()
}

pub fn count_hits_sequential<F>(total: u64, batch: u64, per_batch: F) -> u64
where
    F: Fn(u64, u64) -> u64 + Sync,
{
    batch_sizes(total, batch)
        .into_iter()
        .map(|(i, len)| per_batch(i, len))
        .sum()
}

#[cfg(feature = "parallel")]
pub fn count_hits_parallel<F>(total: u64, batch: u64, per_batch: F) -> u64
where
    F: Fn(u64, u64) -> u64 + Send + Sync,
{
    batch_sizes(total, batch)
        .into_par_iter()
        .map(|(i, len)| per_batch(i, len))
        .sum()
}

/// Sum `per_batch(batch_index, batch_len)` over a fixed batching of `total`.
pub fn count_hits<F>(total: u64, batch: u64, per_batch: F) -> u64
where
    F: Fn(u64, u64) -> u64 + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        count_hits_parallel(total, batch, per_batch)
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_hits_sequential(total, batch, per_batch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trial_streams_are_stable_and_distinct() {
        let a: u64 = trial_rng(9, 0).gen();
        let b: u64 = trial_rng(9, 0).gen();
        let c: u64 = trial_rng(9, 1).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn drivers_agree() {
        let f = |i: u64| trial_rng(3, i).gen_range(0..1000u64);
        let seq = map_trials_sequential(257, f);
        assert_eq!(map_trials(257, f), seq);
        #[cfg(feature = "parallel")]
        assert_eq!(map_trials_parallel(257, f), seq);

        let per_batch = |i: u64, len: u64| {
            let mut rng = trial_rng(4, i);
            (0..len).filter(|_| rng.gen_bool(0.25)).count() as u64
        };
        let seq = count_hits_sequential(10_000, 512, per_batch);
        assert_eq!(count_hits(10_000, 512, per_batch), seq);
        #[cfg(feature = "parallel")]
        assert_eq!(count_hits_parallel(10_000, 512, per_batch), seq);
    }

    #[test]
    fn batching_covers_the_total() {
        let batches = batch_sizes(1001, 100);
        assert_eq!(batches.len(), 11);
        assert_eq!(batches.iter().map(|&(_, l)| l).sum::<u64>(), 1001);
        assert_eq!(batches.last().unwrap().1, 1);
    }
}
