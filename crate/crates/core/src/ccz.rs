//! Graph equivalence: two functions are equivalent when some invertible
//! affine map of the combined space carries the point set of one graph onto
//! the other. The search is a budgeted brute-force sweep of the candidate
//! maps with early rejection on the first point that leaves the target set.

use crate::ea::AffineMap;
use crate::error::{Error, Result};
use crate::exec;
use crate::func::{graph_of, FuncTable};
use crate::linalg::{agl_order, enumerate_gl, FqMatrix, FqVector};
use crate::Settings;
use num_traits::ToPrimitive;

/// The full affine group on the combined space is swept; refuse above this.
pub const CCZ_GROUP_BUDGET: u64 = 1_000_000;

/// Searches for an affine permutation of F_q^{n+m} mapping the graph of `f`
/// onto the graph of `target`. The witness is the first hit in the
/// deterministic (matrix, translation) enumeration order.
pub fn ccz_equivalent(
    f: &FuncTable,
    target: &FuncTable,
    settings: &Settings,
) -> Result<Option<AffineMap>> {
    if !f.same_shape(target) {
        return Err(Error::DimensionMismatch("both functions must share (q, n, m)".into()));
    }
    let field = f.field();
    let q = f.q();
    let d = f.n() + f.m();
    let order = agl_order(d, q)?;
    if order.to_u64().is_none_or(|o| o > CCZ_GROUP_BUDGET) {
        return Err(Error::BudgetExceeded {
            what: format!("graph-equivalence sweep over AGL({d},{q})"),
            required: order.to_string(),
            budget: CCZ_GROUP_BUDGET,
        });
    }
    let space = q.pow(d as u32);
    let source: Vec<u64> = graph_of(f).points().to_vec();
    let target_points = graph_of(target);
    if source == target_points.points() {
        return Ok(Some(AffineMap::identity(field, d)));
    }
    let target_set = {
        let mut set = vec![false; space as usize];
        for &p in target_points.points() {
            set[p as usize] = true;
        }
        set
    };
    // translation-by-t permutation of point codes, for every t
    let add_tab: Vec<Vec<u32>> = (0..space)
        .map(|t| {
            let tv = FqVector::from_code(field, d, t).expect("in range");
            (0..space)
                .map(|p| {
                    let pv = FqVector::from_code(field, d, p).expect("in range");
                    pv.add(&tv).code() as u32
                })
                .collect()
        })
        .collect();
    let matrices: Vec<FqMatrix> = enumerate_gl(field, d, CCZ_GROUP_BUDGET)?.collect();
    let witness = exec::find_first_map(settings.exec, &matrices, |mat| {
        let lin: Vec<u32> = (0..space)
            .map(|p| {
                let pv = FqVector::from_code(field, d, p).expect("in range");
                mat.mat_vec(&pv).code() as u32
            })
            .collect();
        for t in 0..space {
            let shift = &add_tab[t as usize];
            if source.iter().all(|&p| target_set[shift[lin[p as usize] as usize] as usize]) {
                let tv = FqVector::from_code(field, d, t).expect("in range");
                return Some(AffineMap::new(mat.clone(), tv).expect("invertible by construction"));
            }
        }
        None
    });
    if let Some(ref w) = witness {
        // an injective map landing inside an equal-size set is onto it
        let image: std::collections::BTreeSet<u64> =
            source.iter().map(|&p| {
                let pv = FqVector::from_code(field, d, p).expect("in range");
                w.apply(&pv).code()
            }).collect();
        let expect: std::collections::BTreeSet<u64> =
            graph_of(target).points().iter().copied().collect();
        if image != expect {
            return Err(Error::IntegralityViolation("graph witness failed verification".into()));
        }
    }
    Ok(witness)
}
