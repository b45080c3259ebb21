use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lrpc_core::bounds::{clamp_probability, BoundInputs};
use lrpc_core::decoder::decode_and_check;
use lrpc_core::{Bounds, ChainRing, Conditions, ErasureMethod, FailureReason, LrpcCode, Submodule};

use crate::config::SimConfig;
use crate::stats::{wilson_half_width, Z95};

/// Trials evaluated per parallel batch. Results are consumed in index
/// order, so the stop point does not depend on the schedule.
pub const BATCH: u64 = 2048;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Core(#[from] lrpc_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub success: bool,
    pub cond: Conditions,
    pub reason: Option<FailureReason>,
}

/// Independent stream for trial `index` of cell `t`.
pub fn trial_rng(seed: u64, t: usize, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(t as u64).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// One planted-error trial: a uniform free support of dimension `t`, an error
/// with exactly that support, added to the zero codeword (or to a random one).
pub fn run_trial<R: Rng + ?Sized>(
    code: &LrpcCode,
    t: usize,
    random_codeword: bool,
    rng: &mut R,
) -> lrpc_core::Result<TrialOutcome> {
    let ring = code.ring();
    let support = Submodule::random_free(ring, t, rng)?;
    let error = support.random_vector_with_support(ring, code.n(), rng)?;
    let codeword = if random_codeword {
        let message: Vec<_> = (0..code.k()).map(|_| ring.random(rng)).collect();
        code.encode(&message)?
    } else {
        vec![ring.zero(); code.n()]
    };
    let received: Vec<_> = codeword.iter().zip(&error).map(|(c, e)| ring.add(c, e)).collect();
    let (outcome, cond) = decode_and_check(code, &received, t, &support, ErasureMethod::ProductBasis)?;
    Ok(TrialOutcome {
        success: outcome.codeword() == Some(codeword.as_slice()),
        cond,
        reason: outcome.reason(),
    })
}

/// Raw tallies for one value of `t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CellCounts {
    pub trials: u64,
    pub failures: u64,
    pub product_violations: u64,
    pub syndrome_violations: u64,
    /// Intersection failures among trials where the syndrome condition holds.
    pub intersection_violations: u64,
    /// Trials where all three conditions hold but decoding did not return the codeword.
    pub counterexamples: u64,
    pub by_reason: [u64; 4],
}

pub fn reason_index(reason: FailureReason) -> usize {
    match reason {
        FailureReason::SyndromeDim => 0,
        FailureReason::SupportDim => 1,
        FailureReason::ProductDim => 2,
        FailureReason::ErasureInconsistent => 3,
    }
}

impl CellCounts {
    pub fn record(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        self.product_violations += !o.cond.product as u64;
        self.syndrome_violations += !o.cond.syndrome as u64;
        self.intersection_violations += (o.cond.syndrome && !o.cond.intersection) as u64;
        if !o.success {
            self.failures += 1;
            if o.cond.all() {
                self.counterexamples += 1;
            }
        }
        if let Some(reason) = o.reason {
            self.by_reason[reason_index(reason)] += 1;
        }
    }
}

/// Analytic bounds for one `t`, clamped. A theorem needing `lambda t < m`
/// contributes 1 outside that range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowBounds {
    pub overall: f64,
    pub product: f64,
    pub syndrome: f64,
    pub intersection: f64,
}

pub fn bounds_for(config: &SimConfig, t: usize) -> RowBounds {
    let inputs = BoundInputs {
        p: config.p,
        r: config.r,
        m: config.m as u32,
        lambda: config.lambda as u32,
        n: config.n as u32,
        k: config.k as u32,
        t: t as u32,
    };
    match Bounds::evaluate(&inputs) {
        Ok(set) => {
            let set = set.clamped();
            RowBounds { overall: set.overall, product: set.product, syndrome: set.syndrome, intersection: set.intersection }
        }
        Err(_) => RowBounds {
            overall: 1.0,
            product: 1.0,
            syndrome: clamp_probability(lrpc_core::bounds::syndrome_failure::<f64>(&inputs)),
            intersection: 1.0,
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimRow {
    pub t: usize,
    /// `None` when only the bounds were evaluated.
    pub counts: Option<CellCounts>,
    pub bounds: RowBounds,
}

/// An empirical rate with its Wilson 95% half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rate {
    pub value: f64,
    pub half_width: f64,
}

impl Rate {
    fn of(events: u64, trials: u64) -> Self {
        Self { value: events as f64 / trials as f64, half_width: wilson_half_width(events, trials, Z95) }
    }
}

impl SimRow {
    pub fn fer(&self) -> Option<Rate> {
        self.counts.map(|c| Rate::of(c.failures, c.trials))
    }

    pub fn fer_product(&self) -> Option<Rate> {
        self.counts.map(|c| Rate::of(c.product_violations, c.trials))
    }

    pub fn fer_syndrome(&self) -> Option<Rate> {
        self.counts.map(|c| Rate::of(c.syndrome_violations, c.trials))
    }

    pub fn fer_intersection(&self) -> Option<Rate> {
        self.counts.map(|c| Rate::of(c.intersection_violations, c.trials))
    }
}

/// Runs trials for one `t` until `target_failures` decoding failures or
/// `max_trials` trials, whichever comes first.
pub fn run_cell(
    code: &LrpcCode,
    t: usize,
    seed: u64,
    target_failures: u64,
    max_trials: u64,
    random_codeword: bool,
) -> Result<CellCounts, SimError> {
    let mut counts = CellCounts::default();
    let mut next = 0u64;
    while counts.failures < target_failures && counts.trials < max_trials {
        let end = (next + BATCH).min(max_trials);
        let batch: Vec<lrpc_core::Result<TrialOutcome>> = (next..end)
            .into_par_iter()
            .map(|index| run_trial(code, t, random_codeword, &mut trial_rng(seed, t, index)))
            .collect();
        for outcome in batch {
            counts.record(&outcome?);
            if counts.failures >= target_failures {
                break;
            }
        }
        next = end;
    }
    Ok(counts)
}

/// One code per sweep, then one cell per `t`. `progress` sees each row as it completes.
pub fn run_sweep_with(config: &SimConfig, mut progress: impl FnMut(&SimRow)) -> Result<Vec<SimRow>, SimError> {
    config.validate()?;
    let code = LrpcCode::generate(&config.code_params())?;
    run_sweep_on(&code, config, &mut progress)
}

pub fn run_sweep(config: &SimConfig) -> Result<Vec<SimRow>, SimError> {
    run_sweep_with(config, |_| {})
}

pub fn run_sweep_on(
    code: &LrpcCode,
    config: &SimConfig,
    mut progress: impl FnMut(&SimRow),
) -> Result<Vec<SimRow>, SimError> {
    let mut rows = Vec::new();
    for t in config.t_range.clone() {
        let counts = run_cell(code, t, config.seed, config.target_failures, config.max_trials, config.random_codeword)?;
        let row = SimRow { t, counts: Some(counts), bounds: bounds_for(config, t) };
        progress(&row);
        rows.push(row);
    }
    Ok(rows)
}

pub fn bounds_only(config: &SimConfig) -> Result<Vec<SimRow>, SimError> {
    config.validate()?;
    Ok(config.t_range.clone().map(|t| SimRow { t, counts: None, bounds: bounds_for(config, t) }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrpc_core::CodeParams;

    fn small_code() -> LrpcCode {
        LrpcCode::generate(&CodeParams { p: 2, r: 2, m: 20, lambda: 2, n: 20, k: 8, modulus: None, seed: 3 }).unwrap()
    }

    #[test]
    fn zero_support_always_decodes() {
        let code = small_code();
        for i in 0..10 {
            let o = run_trial(&code, 0, false, &mut trial_rng(1, 0, i)).unwrap();
            assert!(o.success && o.cond.all());
        }
    }

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let code = small_code();
        let a = run_trial(&code, 3, true, &mut trial_rng(5, 3, 17)).unwrap();
        let b = run_trial(&code, 3, true, &mut trial_rng(5, 3, 17)).unwrap();
        assert_eq!(a, b);
        let x: u64 = trial_rng(5, 3, 17).gen();
        let y: u64 = trial_rng(5, 3, 18).gen();
        let z: u64 = trial_rng(5, 4, 17).gen();
        assert!(x != y && x != z);
    }

    #[test]
    fn cell_stops_on_either_rule() {
        let code = small_code();
        let capped = run_cell(&code, 2, 9, 1000, 300, false).unwrap();
        assert_eq!(capped.trials, 300);
        let targeted = run_cell(&code, 7, 9, 5, 100_000, false).unwrap();
        assert_eq!(targeted.failures, 5);
        assert_eq!(targeted.counterexamples, 0);
    }

    #[test]
    fn bounds_outside_theorem_range_saturate() {
        let config = SimConfig { m: 14, t_range: 1..=7, ..SimConfig::reference() };
        assert_eq!(bounds_for(&config, 7).overall, 1.0);
        assert!(bounds_for(&config, 1).overall < 1.0);
    }
}
