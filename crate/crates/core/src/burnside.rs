//! Exact class counting: the average number of fixed functions over the
//! group, computed either by sweeping every element or by reducing to
//! conjugacy classes (classes of a direct product are pairs of classes of
//! the factors, and the fixed count is a class function).
//!
//! All sums are exact big integers; the final division must be exact and is
//! checked, since a remainder would indicate a bug rather than bad input.

use crate::ea::{agl_generators, AffineMap, AglGroup};
use crate::error::{Error, Result};
use crate::exec;
use crate::fixcount::{fix_exponent, OutputConstraintTable};
use crate::field::Field;
use crate::func::function_space_size;
use crate::linalg::agl_order;
use crate::Settings;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Exhaustive,
    Conjugacy,
}

impl std::fmt::Display for CountMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountMethod::Exhaustive => write!(f, "exhaustive"),
            CountMethod::Conjugacy => write!(f, "conjugacy"),
        }
    }
}

/// Exact class count with the naive estimate and their exact ratio.
#[derive(Clone, Debug)]
pub struct ClassCountReport {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub method: CountMethod,
    pub gamma_order: BigUint,
    pub class_count: BigUint,
    /// `|function space| / |group|` as an exact rational.
    pub naive_estimate: BigRational,
    /// `class_count / naive_estimate`, exact.
    pub ratio: BigRational,
}

impl ClassCountReport {
    fn assemble(
        q: u64,
        n: usize,
        m: usize,
        method: CountMethod,
        gamma_order: BigUint,
        fix_sum: BigUint,
    ) -> Result<Self> {
        let (rem, quot) = {
            let g = &fix_sum % &gamma_order;
            let d = &fix_sum / &gamma_order;
            (g, d)
        };
        if !rem.is_zero() {
            return Err(Error::IntegralityViolation(format!(
                "fixed-count sum {fix_sum} is not divisible by the group order {gamma_order}"
            )));
        }
        let (space, _) = function_space_size(q, n, m)?;
        let naive_estimate = BigRational::new(
            BigInt::from(space.clone()),
            BigInt::from(gamma_order.clone()),
        );
        let ratio = BigRational::new(
            BigInt::from(quot.clone()) * BigInt::from(gamma_order.clone()),
            BigInt::from(space),
        );
        Ok(ClassCountReport {
            q,
            n,
            m,
            method,
            gamma_order,
            class_count: quot,
            naive_estimate,
            ratio,
        })
    }

    /// `|ratio - 1|`, the exact relative deviation from the naive estimate.
    pub fn abs_error(&self) -> BigRational {
        let one = BigRational::one();
        if self.ratio >= one {
            self.ratio.clone() - one
        } else {
            one - self.ratio.clone()
        }
    }
}

/// Exponent histogram of the fixed-count sweep: how many group elements fix
/// exactly `q^k` functions, plus how many fix none.
fn sweep_histogram(
    field: &'static Field,
    n: usize,
    m: usize,
    settings: &Settings,
) -> Result<(BTreeMap<u64, u64>, u64, BigUint)> {
    let q = field.q() as u64;
    let order_u = agl_order(n, q)?;
    let order_w = agl_order(m, q)?;
    let gamma = &order_u * &order_w;
    if gamma.to_u64().is_none_or(|g| g > settings.enumeration_budget) {
        return Err(Error::BudgetExceeded {
            what: format!("exhaustive sweep of the group at (q,n,m)=({q},{n},{m})"),
            required: gamma.to_string(),
            budget: settings.enumeration_budget,
        });
    }
    let group_u = AglGroup::enumerate(field, n, settings.enumeration_budget)?;
    let group_w = AglGroup::enumerate(field, m, settings.enumeration_budget)?;
    let max_len = q.pow(n as u32);
    // Constraint tables depend only on the output map; build them once.
    let tables: Vec<OutputConstraintTable> = exec::map_slice(settings.exec, group_w.elements(), |w| {
        OutputConstraintTable::new(w, max_len)
    });
    let partials: Vec<(BTreeMap<u64, u64>, u64)> =
        exec::map_slice(settings.exec, group_u.elements(), |u| {
            let lengths = u.orbits().length_multiset();
            let mut hist = BTreeMap::new();
            let mut zeros = 0u64;
            for table in &tables {
                match fix_exponent(&lengths, table) {
                    Some(k) => *hist.entry(k).or_insert(0) += 1,
                    None => zeros += 1,
                }
            }
            (hist, zeros)
        });
    let mut hist = BTreeMap::new();
    let mut zeros = 0u64;
    for (h, z) in partials {
        for (k, c) in h {
            *hist.entry(k).or_insert(0) += c;
        }
        zeros += z;
    }
    Ok((hist, zeros, gamma))
}

fn histogram_sum(q: u64, hist: &BTreeMap<u64, u64>) -> BigUint {
    let mut sum = BigUint::ZERO;
    for (&k, &count) in hist {
        sum += BigUint::from(q).pow(k as u32) * count;
    }
    sum
}

/// Class count by averaging the exact fixed counts over every group element.
pub fn count_classes_exhaustive(
    field: &'static Field,
    n: usize,
    m: usize,
    settings: &Settings,
) -> Result<ClassCountReport> {
    let q = field.q() as u64;
    let (hist, _, gamma) = sweep_histogram(field, n, m, settings)?;
    let sum = histogram_sum(q, &hist);
    ClassCountReport::assemble(q, n, m, CountMethod::Exhaustive, gamma, sum)
}

/// Conjugacy classes of AGL(n, q) with exact sizes.
#[derive(Clone, Debug)]
pub struct ConjugacyClassTable {
    pub n: usize,
    pub q: u64,
    /// (representative, class size), representatives in first-seen order.
    pub classes: Vec<(AffineMap, BigUint)>,
}

impl ConjugacyClassTable {
    pub fn total(&self) -> BigUint {
        self.classes.iter().map(|(_, s)| s).sum()
    }
}

/// Partition of AGL(n, q) into conjugacy classes by closure under
/// conjugation with the generator set.
pub fn conjugacy_classes_agl(
    field: &'static Field,
    n: usize,
    settings: &Settings,
) -> Result<ConjugacyClassTable> {
    let q = field.q() as u64;
    let order = agl_order(n, q)?;
    if order.to_u64().is_none_or(|o| o > settings.conjugacy_budget) {
        return Err(Error::BudgetExceeded {
            what: format!("conjugacy partition of AGL({n},{q})"),
            required: order.to_string(),
            budget: settings.conjugacy_budget,
        });
    }
    let group = AglGroup::enumerate(field, n, settings.conjugacy_budget)?;
    let gens: Vec<(AffineMap, AffineMap)> = agl_generators(field, n)
        .into_iter()
        .map(|g| {
            let inv = g.inverse();
            (g, inv)
        })
        .collect();
    let mut assigned = vec![false; group.len()];
    let mut classes = Vec::new();
    for start in 0..group.len() {
        if assigned[start] {
            continue;
        }
        let mut size = 0u64;
        let mut stack = vec![start];
        assigned[start] = true;
        while let Some(i) = stack.pop() {
            size += 1;
            let x = group.get(i);
            for (g, g_inv) in &gens {
                let y = g.compose(x).compose(g_inv);
                let j = group.index_of(&y);
                if !assigned[j] {
                    assigned[j] = true;
                    stack.push(j);
                }
            }
        }
        classes.push((group.get(start).clone(), BigUint::from(size)));
    }
    Ok(ConjugacyClassTable { n, q, classes })
}

/// Class count via the conjugacy reduction: one fixed count per pair of
/// classes, weighted by the product of class sizes.
pub fn count_classes_conjugacy(
    field: &'static Field,
    n: usize,
    m: usize,
    settings: &Settings,
) -> Result<ClassCountReport> {
    let q = field.q() as u64;
    let classes_u = conjugacy_classes_agl(field, n, settings)?;
    let classes_w = conjugacy_classes_agl(field, m, settings)?;
    let gamma = classes_u.total() * classes_w.total();
    let max_len = q.pow(n as u32);
    let length_sets: Vec<(Vec<(u64, u64)>, &BigUint)> = classes_u
        .classes
        .iter()
        .map(|(rep, size)| (rep.orbits().length_multiset(), size))
        .collect();
    let contributions: Vec<BigUint> =
        exec::map_slice(settings.exec, &classes_w.classes, |(rep_w, size_w)| {
            let table = OutputConstraintTable::new(rep_w, max_len);
            let mut acc = BigUint::ZERO;
            for (lengths, size_u) in &length_sets {
                if let Some(k) = fix_exponent(lengths, &table) {
                    acc += BigUint::from(q).pow(k as u32) * *size_u * size_w;
                }
            }
            acc
        });
    let sum: BigUint = contributions.into_iter().sum();
    ClassCountReport::assemble(q, n, m, CountMethod::Conjugacy, gamma, sum)
}

pub fn count_classes(
    field: &'static Field,
    n: usize,
    m: usize,
    method: CountMethod,
    settings: &Settings,
) -> Result<ClassCountReport> {
    match method {
        CountMethod::Exhaustive => count_classes_exhaustive(field, n, m, settings),
        CountMethod::Conjugacy => count_classes_conjugacy(field, n, m, settings),
    }
}

/// The exact ratio to the naive estimate together with `|ratio - 1|`.
#[derive(Clone, Debug)]
pub struct RelativeErrorReport {
    pub report: ClassCountReport,
    pub abs_error: BigRational,
}

pub fn relative_error(
    field: &'static Field,
    n: usize,
    m: usize,
    method: CountMethod,
    settings: &Settings,
) -> Result<RelativeErrorReport> {
    let report = count_classes(field, n, m, method, settings)?;
    let abs_error = report.abs_error();
    Ok(RelativeErrorReport { report, abs_error })
}
