//! Orbit partition of a full function space, exact collision probabilities,
//! and the closed-form probability bounds.
//!
//! The census is a breadth-first closure under a small generator set of the
//! acting group, run in level-synchronous rounds so the output is
//! byte-identical for any thread count. Bounds that exceed 1 at small sizes
//! are reported verbatim with a vacuous flag, never clamped.

use crate::ea::{apply_perms, gamma_generators, nontrivial_with_group, AglGroup};
use crate::error::{Error, Result};
use crate::exec;
use crate::fixcount::BoundCase;
use crate::field::Field;
use crate::func::{function_space_size, FuncTable};
use crate::linalg::agl_order;
use crate::logq::{log2_biguint, LogQValue};
use crate::Settings;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// One equivalence class in a census.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub representative: FuncTable,
    pub size: BigUint,
    pub stabilizer_size: BigUint,
}

/// Full partition of the function space into group orbits.
#[derive(Clone, Debug)]
pub struct OrbitCensus {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub gamma_order: BigUint,
    pub total_functions: BigUint,
    pub orbits: Vec<OrbitRecord>,
    /// Orbit id of every packed function code.
    assignment: Vec<u32>,
}

impl OrbitCensus {
    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_id(&self, f: &FuncTable) -> u32 {
        self.assignment[f.pack() as usize]
    }

    /// `sum size^2` over all orbits.
    pub fn sum_of_squared_sizes(&self) -> BigUint {
        self.orbits.iter().map(|o| &o.size * &o.size).sum()
    }

    /// Fraction of functions lying in orbits with a nontrivial stabilizer.
    pub fn nontrivial_stabilizer_fraction(&self) -> BigRational {
        let nontrivial: BigUint = self
            .orbits
            .iter()
            .filter(|o| !o.stabilizer_size.is_one())
            .map(|o| o.size.clone())
            .sum();
        BigRational::new(BigInt::from(nontrivial), BigInt::from(self.total_functions.clone()))
    }
}

/// Partition of the whole function space by breadth-first closure under the
/// generator set, visiting start codes in increasing order.
pub fn orbit_partition(
    field: &'static Field,
    n: usize,
    m: usize,
    settings: &Settings,
) -> Result<OrbitCensus> {
    let q = field.q() as u64;
    let (space_big, _) = function_space_size(q, n, m)?;
    let Some(space) = space_big.to_u64().filter(|&s| s <= settings.oracle_budget) else {
        return Err(Error::BudgetExceeded {
            what: format!("orbit partition of the function space at (q,n,m)=({q},{n},{m})"),
            required: space_big.to_string(),
            budget: settings.oracle_budget,
        });
    };
    let gamma = agl_order(n, q)? * agl_order(m, q)?;
    let gens: Vec<(Vec<u32>, Vec<u32>)> = gamma_generators(field, n, m)
        .iter()
        .map(|g| (g.input().permutation_table(), g.output().permutation_table()))
        .collect();
    let mut assignment = vec![u32::MAX; space as usize];
    let mut orbits = Vec::new();
    for start in 0..space {
        if assignment[start as usize] != u32::MAX {
            continue;
        }
        let orbit_id = orbits.len() as u32;
        let representative = FuncTable::unpack(field, n, m, start);
        assignment[start as usize] = orbit_id;
        let mut size = 1u64;
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            // One synchronous round: expand in deterministic frontier order,
            // then mark sequentially.
            let expanded: Vec<Vec<u64>> = exec::map_slice(settings.exec, &frontier, |&code| {
                let t = FuncTable::unpack(field, n, m, code);
                gens.iter().map(|(ip, op)| apply_perms(&t, ip, op).pack()).collect()
            });
            let mut next = Vec::new();
            for child in expanded.into_iter().flatten() {
                if assignment[child as usize] == u32::MAX {
                    assignment[child as usize] = orbit_id;
                    size += 1;
                    next.push(child);
                }
            }
            frontier = next;
        }
        let size = BigUint::from(size);
        let (quot, rem) = {
            let d = &gamma / &size;
            let r = &gamma % &size;
            (d, r)
        };
        if !rem.is_zero() {
            return Err(Error::IntegralityViolation(format!(
                "orbit size {size} does not divide the group order {gamma}"
            )));
        }
        orbits.push(OrbitRecord { representative, size, stabilizer_size: quot });
    }
    Ok(OrbitCensus {
        q,
        n,
        m,
        gamma_order: gamma,
        total_functions: space_big,
        orbits,
        assignment,
    })
}

/// `sum_i (|O_i| / |space|)^2`: the probability that two independent uniform
/// functions land in the same orbit.
pub fn collision_prob_exact(census: &OrbitCensus) -> BigRational {
    let total = BigInt::from(census.total_functions.clone());
    let mut acc = BigRational::zero();
    for o in &census.orbits {
        let p = BigRational::new(BigInt::from(o.size.clone()), total.clone());
        acc += &p * &p;
    }
    acc
}

/// A probability upper bound reported exactly and in the log_q domain.
#[derive(Clone, Debug)]
pub struct CollisionBound {
    /// Exact value when the function space is small enough to materialize.
    pub ratio: Option<BigRational>,
    pub logq: LogQValue,
    pub vacuous: bool,
}

const MATERIALIZE_EXPONENT_LIMIT: u64 = 1_000_000;

/// `m * q^n`, the base-q log of the function-space size, as an exact integer.
fn space_exponent(q: u64, n: usize, m: usize) -> Result<BigUint> {
    let n = u32::try_from(n)
        .map_err(|_| Error::InvalidArgument(format!("dimension {n} out of range")))?;
    Ok(BigUint::from(q).pow(n) * m)
}

fn bound_from_orders(q: u64, group_order: BigUint, space_exponent: BigUint) -> CollisionBound {
    let logq = {
        let space = space_exponent.to_f64().unwrap_or(f64::INFINITY);
        let exponent = log2_biguint(&group_order) / (q as f64).log2() - space;
        LogQValue { q, exponent, exact: None }
    };
    let ratio = space_exponent
        .to_u64()
        .filter(|&e| e <= MATERIALIZE_EXPONENT_LIMIT)
        .map(|e| {
            BigRational::new(
                BigInt::from(group_order),
                BigInt::from(BigUint::from(q).pow(e as u32)),
            )
        });
    let vacuous = match &ratio {
        Some(r) => r > &BigRational::one(),
        None => logq.exponent > 0.0,
    };
    CollisionBound { ratio, logq, vacuous }
}

/// `|group| / |space|` for the product group acting on input and output.
pub fn collision_upper_ea(q: u64, n: usize, m: usize) -> Result<CollisionBound> {
    let group = agl_order(n, q)? * agl_order(m, q)?;
    Ok(bound_from_orders(q, group, space_exponent(q, n, m)?))
}

/// `|AGL(n+m, q)| / |space|`, the graph-equivalence analogue.
pub fn collision_upper_ccz(q: u64, n: usize, m: usize) -> Result<CollisionBound> {
    let group = agl_order(n + m, q)?;
    Ok(bound_from_orders(q, group, space_exponent(q, n, m)?))
}

/// Union-bound estimate of the nontrivial-stabilizer probability, as a
/// log_q exponent: `log_q |group| - slack`, where the slack is the smaller of
/// the two per-case exponent gaps.
#[derive(Clone, Debug)]
pub struct StabBoundReport {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub gamma_log_q: f64,
    /// `((q-1)/2q) m q^n`, the gap when the input permutation is nontrivial.
    pub case1_slack: BigRational,
    /// `q^n`, the gap when only the output map is nontrivial.
    pub case2_slack: BigUint,
    /// Case whose smaller slack limits the bound.
    pub binding: BoundCase,
    pub case1_exponent: f64,
    pub case2_exponent: f64,
    /// The bound itself: `log_q |group| - min(slack)`.
    pub exponent: f64,
    pub vacuous: bool,
}

pub fn nontrivial_stab_bound(q: u64, n: usize, m: usize) -> Result<StabBoundReport> {
    let n32 = u32::try_from(n)
        .map_err(|_| Error::InvalidArgument(format!("dimension {n} out of range")))?;
    let gamma = agl_order(n, q)? * agl_order(m, q)?;
    let gamma_log_q = log2_biguint(&gamma) / (q as f64).log2();
    let qn = BigInt::from(q).pow(n32);
    let case1_slack = BigRational::new(
        BigInt::from(q - 1) * BigInt::from(m) * &qn,
        BigInt::from(2 * q),
    );
    let case2_slack = BigUint::from(q).pow(n32);
    let case1_f = case1_slack.to_f64().expect("small rational");
    let case2_f = case2_slack.to_f64().expect("small integer");
    let case1_exponent = gamma_log_q - case1_f;
    let case2_exponent = gamma_log_q - case2_f;
    let case2_rational = BigRational::from(BigInt::from(case2_slack.clone()));
    let binding = if case1_slack <= case2_rational {
        BoundCase::InputSide
    } else {
        BoundCase::OutputSide
    };
    let exponent = case1_exponent.max(case2_exponent);
    Ok(StabBoundReport {
        q,
        n,
        m,
        gamma_log_q,
        case1_slack,
        case2_slack,
        binding,
        case1_exponent,
        case2_exponent,
        exponent,
        vacuous: exponent > 0.0,
    })
}

/// Exact share of functions with a nontrivial stabilizer, by running the
/// stabilizer search over every function in the space.
#[derive(Clone, Debug)]
pub struct StabCensusReport {
    pub nontrivial: BigUint,
    pub total: BigUint,
    pub fraction: BigRational,
}

pub fn nontrivial_stab_census(
    field: &'static Field,
    n: usize,
    m: usize,
    settings: &Settings,
) -> Result<StabCensusReport> {
    let q = field.q() as u64;
    let (space_big, _) = function_space_size(q, n, m)?;
    let Some(space) = space_big.to_u64().filter(|&s| s <= settings.oracle_budget) else {
        return Err(Error::BudgetExceeded {
            what: format!("stabilizer census at (q,n,m)=({q},{n},{m})"),
            required: space_big.to_string(),
            budget: settings.oracle_budget,
        });
    };
    let group = AglGroup::enumerate(field, n, settings.enumeration_budget)?;
    let flags: Vec<Result<bool>> = exec::map_range(settings.exec, 0..space, |packed| {
        let t = FuncTable::unpack(field, n, m, packed);
        nontrivial_with_group(&t, &group, settings.fit_budget)
    });
    let mut nontrivial = 0u64;
    for flag in flags {
        if flag? {
            nontrivial += 1;
        }
    }
    let nontrivial = BigUint::from(nontrivial);
    let fraction = BigRational::new(
        BigInt::from(nontrivial.clone()),
        BigInt::from(space_big.clone()),
    );
    Ok(StabCensusReport { nontrivial, total: space_big, fraction })
}
