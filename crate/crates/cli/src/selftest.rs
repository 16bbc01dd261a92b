//! Built-in oracle-equivalence suites: every fast path is replayed against
//! its brute-force or cross-method oracle at exhaustively checkable sizes.

use eaclass_core::burnside::{count_classes_conjugacy, count_classes_exhaustive};
use eaclass_core::collision::{collision_prob_exact, collision_upper_ea, nontrivial_stab_census, orbit_partition};
use eaclass_core::ea::{AglGroup, EAElement};
use eaclass_core::fixcount::{fix_count_bruteforce, fix_count_exact, fix_count_upper};
use eaclass_core::linalg::agl_order;
use eaclass_core::{Field, Settings};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub const SIZES: [(u64, usize, usize); 5] = [(2, 1, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2), (3, 1, 1)];

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &'static str, body: impl FnOnce() -> Result<String, String>) -> SuiteResult {
    match body() {
        Ok(detail) => SuiteResult { name, passed: true, detail },
        Err(detail) => SuiteResult { name, passed: false, detail },
    }
}

pub fn run_all(settings: &Settings) -> Vec<SuiteResult> {
    vec![
        suite("fix-count-oracle", || fix_count_oracle(settings)),
        suite("class-count-triple", || class_count_triple(settings)),
        suite("affine-lemmas", || affine_lemmas(settings)),
        suite("fix-bound", || fix_bound(settings)),
        suite("collision-sandwich", || collision_sandwich(settings)),
    ]
}

/// Exact fixed counts equal the brute-force sweep for every group element.
fn fix_count_oracle(settings: &Settings) -> Result<String, String> {
    let mut checked = 0u64;
    for &(q, n, m) in &SIZES {
        let field = Field::get(q).map_err(|e| e.to_string())?;
        let gu = AglGroup::enumerate(field, n, settings.enumeration_budget)
            .map_err(|e| e.to_string())?;
        let gw = AglGroup::enumerate(field, m, settings.enumeration_budget)
            .map_err(|e| e.to_string())?;
        for a_in in gu.elements() {
            for a_out in gw.elements() {
                let g = EAElement::new(a_in.clone(), a_out.clone());
                let exact = fix_count_exact(&g).total;
                let oracle = fix_count_bruteforce(&g, settings).map_err(|e| e.to_string())?;
                if exact != oracle {
                    return Err(format!(
                        "mismatch at (q,n,m)=({q},{n},{m}): exact {exact} vs oracle {oracle}"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} group elements checked across {} sizes", SIZES.len()))
}

/// Group-average counts agree across both methods and with the partition.
fn class_count_triple(settings: &Settings) -> Result<String, String> {
    for &(q, n, m) in &SIZES {
        let field = Field::get(q).map_err(|e| e.to_string())?;
        let a = count_classes_exhaustive(field, n, m, settings).map_err(|e| e.to_string())?;
        let b = count_classes_conjugacy(field, n, m, settings).map_err(|e| e.to_string())?;
        let census = orbit_partition(field, n, m, settings).map_err(|e| e.to_string())?;
        let c = BigUint::from(census.num_orbits());
        if a.class_count != b.class_count || a.class_count != c {
            return Err(format!(
                "triple disagreement at ({q},{n},{m}): exhaustive {}, conjugacy {}, partition {c}",
                a.class_count, b.class_count
            ));
        }
    }
    Ok(format!("three methods agree at all {} sizes", SIZES.len()))
}

/// Fixed-point and cycle-count limits for nontrivial affine permutations.
fn affine_lemmas(settings: &Settings) -> Result<String, String> {
    let groups = [(1usize, 2u64), (2, 2), (3, 2), (1, 3), (2, 3)];
    let mut checked = 0u64;
    for &(n, q) in &groups {
        let field = Field::get(q).map_err(|e| e.to_string())?;
        let group = AglGroup::enumerate(field, n, settings.enumeration_budget)
            .map_err(|e| e.to_string())?;
        let points = q.pow(n as u32);
        for map in group.elements() {
            if map.is_identity() {
                continue;
            }
            let fixed = map.fixed_points().size().to_u64().unwrap();
            if fixed > points / q {
                return Err(format!(
                    "AGL({n},{q}): {fixed} fixed points exceeds q^(n-1) = {}",
                    points / q
                ));
            }
            let cycles = map.orbits().num_orbits() as u64;
            if 2 * cycles > points + fixed {
                return Err(format!("AGL({n},{q}): {cycles} cycles exceeds (q^n + f)/2"));
            }
            if 2 * q * cycles > (q + 1) * points {
                return Err(format!("AGL({n},{q}): {cycles} cycles exceeds ((q+1)/2q) q^n"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} nontrivial affine permutations checked"))
}

/// The closed-form exponent dominates every exact nontrivial count.
fn fix_bound(settings: &Settings) -> Result<String, String> {
    let mut checked = 0u64;
    for &(q, n, m) in &SIZES {
        let field = Field::get(q).map_err(|e| e.to_string())?;
        let gu = AglGroup::enumerate(field, n, settings.enumeration_budget)
            .map_err(|e| e.to_string())?;
        let gw = AglGroup::enumerate(field, m, settings.enumeration_budget)
            .map_err(|e| e.to_string())?;
        for a_in in gu.elements() {
            for a_out in gw.elements() {
                let g = EAElement::new(a_in.clone(), a_out.clone());
                if g.is_identity() {
                    continue;
                }
                let exact = fix_count_exact(&g).total;
                let bound = fix_count_upper(&g).map_err(|e| e.to_string())?;
                if !bound.admits(q, &exact) {
                    return Err(format!(
                        "bound violated at ({q},{n},{m}): count {exact}, exponent {}",
                        bound.exponent
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} nontrivial elements within the bound"))
}

/// Exact collision probability sits inside the stabilizer sandwich.
fn collision_sandwich(settings: &Settings) -> Result<String, String> {
    let field = Field::get(2).map_err(|e| e.to_string())?;
    let census = orbit_partition(field, 2, 2, settings).map_err(|e| e.to_string())?;
    let prob = collision_prob_exact(&census);
    let upper = collision_upper_ea(2, 2, 2)
        .map_err(|e| e.to_string())?
        .ratio
        .expect("small size");
    let eps = nontrivial_stab_census(field, 2, 2, settings)
        .map_err(|e| e.to_string())?
        .fraction;
    let lower = (BigRational::one() - eps) * &upper;
    if !(lower <= prob && prob <= upper) {
        return Err(format!("sandwich violated: {lower} <= {prob} <= {upper}"));
    }
    let direct = BigRational::from(num_bigint::BigInt::from(census.sum_of_squared_sizes()));
    let total = BigRational::from(num_bigint::BigInt::from(census.total_functions.clone()));
    let via_prob = &prob * &total * &total;
    if direct != via_prob {
        return Err("sum of squared orbit sizes disagrees between routes".into());
    }
    // the smallest size pins the exact numbers
    let small = orbit_partition(field, 1, 1, settings).map_err(|e| e.to_string())?;
    if small.num_orbits() != 2
        || collision_prob_exact(&small)
            != BigRational::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(2))
    {
        return Err("smallest-size reference values changed".into());
    }
    let gamma = agl_order(2, 2).map_err(|e| e.to_string())?.pow(2);
    if census.gamma_order != gamma {
        return Err("group order mismatch".into());
    }
    Ok(format!("sandwich and cross-checks hold; collision = {prob}"))
}
