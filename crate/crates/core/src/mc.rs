//! Seeded Monte-Carlo harnesses. Each trial draws from its own ChaCha8
//! substream, so estimates are bit-identical for any thread count.

use crate::ea::{equivalent_with_group, nontrivial_with_group, AglGroup};
use crate::error::{Error, Result};
use crate::exec;
use crate::field::Field;
use crate::func::FuncTable;
use crate::linalg::agl_order;
use crate::rng::stream_rng;
use crate::Settings;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use statrs::distribution::{Beta, ContinuousCDF};

/// Per-sample group work is refused above this order.
pub const SAMPLE_GROUP_BUDGET: u64 = 1_000_000;

/// A seeded binomial estimate with its exact fraction and 95% interval.
#[derive(Clone, Debug)]
pub struct McEstimate {
    pub trials: u64,
    pub successes: u64,
    pub estimate: BigRational,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl McEstimate {
    fn new(trials: u64, successes: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(successes, trials, 0.05);
        McEstimate {
            trials,
            successes,
            estimate: BigRational::new(BigInt::from(successes), BigInt::from(trials)),
            ci_low,
            ci_high,
            seed,
        }
    }
}

/// Exact (Clopper-Pearson) binomial confidence interval.
pub fn clopper_pearson(successes: u64, trials: u64, alpha: f64) -> (f64, f64) {
    assert!(trials > 0);
    let k = successes as f64;
    let n = trials as f64;
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).expect("valid shape").inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).expect("valid shape").inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

fn check_sample_group(n: usize, q: u64) -> Result<()> {
    let order = agl_order(n, q)?;
    if order.to_u64().is_none_or(|o| o > SAMPLE_GROUP_BUDGET) {
        return Err(Error::BudgetExceeded {
            what: format!("per-sample stabilizer search over AGL({n},{q})"),
            required: order.to_string(),
            budget: SAMPLE_GROUP_BUDGET,
        });
    }
    Ok(())
}

/// Fraction of uniformly sampled functions with a nontrivial stabilizer.
/// Trial `i` draws from substream `i` of `seed`.
pub fn mc_trivial_stab(
    field: &'static Field,
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
    settings: &Settings,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    check_sample_group(n, field.q() as u64)?;
    let group = AglGroup::enumerate(field, n, SAMPLE_GROUP_BUDGET)?;
    let flags: Vec<Result<bool>> = exec::map_range(settings.exec, 0..trials, |i| {
        let mut rng = stream_rng(seed, i);
        let t = FuncTable::random_from(field, n, m, &mut rng);
        nontrivial_with_group(&t, &group, settings.fit_budget)
    });
    let mut successes = 0u64;
    for flag in flags {
        if flag? {
            successes += 1;
        }
    }
    Ok(McEstimate::new(trials, successes, seed))
}

/// Fraction of independently sampled pairs that are equivalent. Trial `i`
/// draws the pair from substreams `2i` and `2i + 1` of `seed`.
pub fn mc_collision(
    field: &'static Field,
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
    settings: &Settings,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    check_sample_group(n, field.q() as u64)?;
    let group = AglGroup::enumerate(field, n, SAMPLE_GROUP_BUDGET)?;
    let flags: Vec<Result<bool>> = exec::map_range(settings.exec, 0..trials, |i| {
        let f = FuncTable::random_from(field, n, m, &mut stream_rng(seed, 2 * i));
        let g = FuncTable::random_from(field, n, m, &mut stream_rng(seed, 2 * i + 1));
        equivalent_with_group(&f, &g, &group, settings.fit_budget)
    });
    let mut successes = 0u64;
    for flag in flags {
        if flag? {
            successes += 1;
        }
    }
    Ok(McEstimate::new(trials, successes, seed))
}
