//! Exact size of `{F : g.F = F}` for a group element g.
//!
//! Write the input permutation's cycle decomposition of the domain. On a
//! cycle of length L with base point x, iterating `Q F(Px + a) + b = F(x)`
//! around the cycle forces `(I - Q^L) F(x) = (Q^{L-1} + ... + Q + I) b`, and
//! once F(x) is chosen the rest of the cycle is determined. The number of
//! fixed functions is therefore the product over cycles of the solution
//! counts of these small linear systems: a power of q per cycle, or zero.
//! This is exact; the closed-form upper bound is kept as a separate
//! evaluator so it stays independently testable, and a brute-force sweep of
//! the whole function space serves as the oracle.

use crate::ea::{apply_perms, AffineMap, EAElement};
use crate::error::{Error, Result};
use crate::exec;
use crate::func::{function_space_size, FuncTable};
use crate::linalg::FqMatrix;
use crate::Settings;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Per-cycle solution counts and their exact product.
#[derive(Clone, Debug)]
pub struct FixCountDetail {
    /// (cycle length, solution count) per input cycle, base points ascending.
    pub per_orbit: Vec<(u64, BigUint)>,
    pub total: BigUint,
    /// `k` with `total = q^k`; `None` exactly when the total is zero.
    pub log_q_total: Option<u64>,
}

/// Solution counts of the cycle constraint for one output map, indexed by
/// cycle length. `table[L]` is `Some(k)` when the constraint for length L is
/// consistent with `q^k` solutions, `None` when inconsistent.
pub struct OutputConstraintTable {
    dims: Vec<Option<u32>>,
}

impl OutputConstraintTable {
    pub fn new(out_map: &AffineMap, max_len: u64) -> Self {
        let field = out_map.field();
        let m = out_map.dim();
        let id = FqMatrix::identity(field, m);
        let mut dims = vec![None; max_len as usize + 1];
        let mut power = id.clone();
        let mut partial = crate::linalg::FqVector::zero(field, m);
        for len in 1..=max_len {
            power = power.mul(out_map.matrix());
            partial = out_map.matrix().mat_vec(&partial).add(out_map.shift());
            let system = id.sub(&power);
            let sol = crate::linalg::solve_linear(&system, &partial).expect("square system");
            dims[len as usize] = (!sol.is_empty()).then(|| sol.dim() as u32);
        }
        OutputConstraintTable { dims }
    }

    #[inline]
    pub fn kernel_dim(&self, len: u64) -> Option<u32> {
        self.dims[len as usize]
    }
}

/// `log_q |Fix(g)|` from a cycle-length multiset; `None` when the count is 0.
pub fn fix_exponent(lengths: &[(u64, u64)], constraints: &OutputConstraintTable) -> Option<u64> {
    let mut exponent = 0u64;
    for &(len, mult) in lengths {
        exponent += mult * constraints.kernel_dim(len)? as u64;
    }
    Some(exponent)
}

/// Exact `|{F : g.F = F}|` with per-cycle detail.
pub fn fix_count_exact(g: &EAElement) -> FixCountDetail {
    let q = BigUint::from(g.input().field().q());
    let decomposition = g.input().orbits();
    let max_len = decomposition.orbits().iter().map(|o| o.len).max().unwrap_or(1);
    let constraints = OutputConstraintTable::new(g.output(), max_len);
    let mut per_orbit = Vec::with_capacity(decomposition.num_orbits());
    let mut total = BigUint::one();
    let mut exponent = Some(0u64);
    for orbit in decomposition.orbits() {
        let count = match constraints.kernel_dim(orbit.len) {
            Some(k) => {
                exponent = exponent.map(|e| e + k as u64);
                q.pow(k)
            }
            None => {
                exponent = None;
                BigUint::ZERO
            }
        };
        total *= &count;
        per_orbit.push((orbit.len, count));
    }
    FixCountDetail { per_orbit, total, log_q_total: exponent }
}

/// Oracle: count fixed tables by enumerating the whole function space.
pub fn fix_count_bruteforce(g: &EAElement, settings: &Settings) -> Result<BigUint> {
    let field = g.input().field();
    let (n, m) = (g.input().dim(), g.output().dim());
    let (space, _) = function_space_size(field.q() as u64, n, m)?;
    let Some(space) = space.to_u64().filter(|&s| s <= settings.oracle_budget) else {
        return Err(Error::BudgetExceeded {
            what: format!("brute-force fix count at (q,n,m)=({},{n},{m})", field.q()),
            required: space.to_string(),
            budget: settings.oracle_budget,
        });
    };
    let in_perm = g.input().permutation_table();
    let out_perm = g.output().permutation_table();
    let count = exec::count_range(settings.exec, 0..space, |packed| {
        let t = FuncTable::unpack(field, n, m, packed);
        apply_perms(&t, &in_perm, &out_perm) == t
    });
    Ok(BigUint::from(count))
}

/// Which case of the closed-form bound applies to a nontrivial element.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BoundCase {
    /// Input permutation nontrivial: exponent `((q+1)/2q) m q^n`.
    InputSide,
    /// Input trivial, output nontrivial: exponent `(m-1) q^n`.
    OutputSide,
}

/// The closed-form bound `|Fix(g)| <= q^exponent` for nontrivial g.
#[derive(Clone, Debug)]
pub struct FixUpperBound {
    pub case: BoundCase,
    /// Exact base-q exponent of the applicable case.
    pub exponent: BigRational,
    /// `max{(q+1)/(2q), 1 - 1/m}`, the case-independent constant.
    pub combined_constant: BigRational,
}

impl FixUpperBound {
    pub fn exponent_f64(&self) -> f64 {
        self.exponent.to_f64().expect("small rational")
    }

    /// Exact check of `count <= q^exponent` via integer powers.
    pub fn admits(&self, q: u64, count: &BigUint) -> bool {
        if count.is_zero() {
            return true;
        }
        let num = self.exponent.numer().to_biguint().expect("nonnegative exponent");
        let den = self.exponent.denom().to_u32().expect("small denominator");
        let num = num.to_u32().expect("small numerator");
        // count^den <= q^num
        count.pow(den) <= BigUint::from(q).pow(num)
    }
}

pub fn fix_count_upper(g: &EAElement) -> Result<FixUpperBound> {
    if g.is_identity() {
        return Err(Error::InvalidArgument(
            "the fixed-count bound applies to nontrivial elements only".into(),
        ));
    }
    let q = g.input().field().q() as i64;
    let n = g.input().dim() as u32;
    let m = g.output().dim() as i64;
    let qn = BigInt::from(q).pow(n);
    let case1 = BigRational::new(BigInt::from(q + 1), BigInt::from(2 * q));
    let case2 = BigRational::new(BigInt::from(m - 1), BigInt::from(m));
    let combined_constant = case1.clone().max(case2.clone());
    let m_qn = BigRational::from(BigInt::from(m) * &qn);
    let (case, fraction) = if g.input().is_identity() {
        (BoundCase::OutputSide, case2)
    } else {
        (BoundCase::InputSide, case1)
    };
    Ok(FixUpperBound { case, exponent: fraction * m_qn, combined_constant })
}
