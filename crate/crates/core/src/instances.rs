//! Ready-made small instances: the standard preorders over finite quantales
//! and generalised metric spaces that the audits and examples revolve
//! around.

use std::sync::Arc;

use crate::quantale::{Quantale, Value};
use crate::tcategory::TCategory;
use crate::theory::Theory;
use crate::vmatrix::{FinSet, VMatrix};

pub fn bool2_id() -> Arc<Theory> {
    Theory::identity(Quantale::bool2())
}

pub fn chain3_id() -> Arc<Theory> {
    Theory::identity(Quantale::chain(3).unwrap())
}

pub fn lawvere_id() -> Arc<Theory> {
    Theory::identity(Quantale::lawvere())
}

/// Preorder as a T-category over a finite frame-like quantale: structure
/// `a(x,y) = ⊤` iff `rel(x,y)`, else `⊥`.
pub fn preorder_cat(th: &Arc<Theory>, n: usize, rel: impl Fn(usize, usize) -> bool) -> Arc<TCategory> {
    let q = th.quantale();
    let carrier = FinSet::canonical(n);
    let entries: Vec<Value> = (0..n)
        .flat_map(|i| {
            (0..n).map({
                let rel = &rel;
                let q = q.clone();
                move |j| if rel(i, j) { q.top() } else { q.bottom() }
            })
        })
        .collect();
    let m = VMatrix::new(carrier.clone(), carrier.clone(), q.clone(), entries).unwrap();
    TCategory::check(th.clone(), carrier, m).unwrap()
}

/// The n-chain `x0 ≤ x1 ≤ …`.
pub fn chain_cat(th: &Arc<Theory>, n: usize) -> Arc<TCategory> {
    preorder_cat(th, n, |i, j| i <= j)
}

/// The n-element antichain (discrete preorder).
pub fn antichain_cat(th: &Arc<Theory>, n: usize) -> Arc<TCategory> {
    preorder_cat(th, n, |i, j| i == j)
}

/// The 2×2 diamond lattice `⊥ ≤ l, r ≤ ⊤` on indices 0,1,2,3.
pub fn diamond_cat(th: &Arc<Theory>) -> Arc<TCategory> {
    preorder_cat(th, 4, |i, j| i == j || i == 0 || j == 3)
}

/// A generalised metric space over the Lawvere quantale from a distance
/// table in the literal syntax of the workspace format.
pub fn metric_cat(distances: &[&[&str]]) -> Arc<TCategory> {
    let th = lawvere_id();
    let q = th.quantale();
    let n = distances.len();
    let carrier = FinSet::canonical(n);
    let entries: Vec<Value> = distances
        .iter()
        .flat_map(|row| row.iter().map(|s| q.parse_value(s).unwrap()))
        .collect();
    let m = VMatrix::new(carrier.clone(), carrier.clone(), q.clone(), entries).unwrap();
    TCategory::check(th, carrier, m).unwrap()
}
