//! Exhaustive enumeration helpers for the small-model audits: all structures,
//! functors, and distributors between capped carriers, in a deterministic
//! canonical order.

use std::sync::Arc;

use crate::distributor::Distributor;
use crate::quantale::Value;
use crate::tcategory::{TCategory, TFunctor};
use crate::theory::{all_tables, Theory};
use crate::vmatrix::{FinSet, VMatrix};
use crate::Error;

/// All index tables from an `n`-element to an `m`-element set, lexicographic.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    all_tables(n, m)
}

/// All length-`len` tables of values of a finite quantale, lexicographic in
/// carrier indices.
pub fn all_value_tables(q: &Arc<crate::quantale::Quantale>, len: usize) -> Vec<Vec<Value>> {
    let elems = q.elements();
    all_tables(len, elems.len())
        .into_iter()
        .map(|t| t.into_iter().map(|i| elems[i]).collect())
        .collect()
}

/// All T-categories on the canonical carrier of the given size.
pub fn all_categories_of_size(theory: &Arc<Theory>, size: usize) -> Result<Vec<Arc<TCategory>>, Error> {
    let q = theory.quantale();
    if !q.is_finite() {
        return Err(Error::InfiniteQuantale(q.name().to_string()));
    }
    let carrier = FinSet::canonical(size);
    let t_size = theory.monad().t_size(size);
    let mut out = Vec::new();
    for entries in all_value_tables(q, t_size * size) {
        let t_carrier = theory.monad().apply_obj(&carrier);
        let m = VMatrix::new(t_carrier, carrier.clone(), q.clone(), entries)?;
        if let Ok(cat) = TCategory::check(theory.clone(), carrier.clone(), m) {
            out.push(cat);
        }
    }
    Ok(out)
}

/// All T-categories with carriers of size `0..=cap`.
pub fn all_categories(theory: &Arc<Theory>, cap: usize) -> Result<Vec<Arc<TCategory>>, Error> {
    let mut out = Vec::new();
    for size in 0..=cap {
        out.extend(all_categories_of_size(theory, size)?);
    }
    Ok(out)
}

/// All T-functors between two categories.
pub fn all_functors(x: &Arc<TCategory>, y: &Arc<TCategory>) -> Vec<TFunctor> {
    all_tables(x.size(), y.size())
        .into_iter()
        .filter(|t| TFunctor::is_functor_table(x, y, t))
        .map(|t| TFunctor::check(x.clone(), y.clone(), t).expect("table pre-filtered"))
        .collect()
}

/// All validated distributors `X ⇸∘ Y`.
pub fn all_distributors(x: &Arc<TCategory>, y: &Arc<TCategory>) -> Vec<Distributor> {
    let q = x.quantale();
    let mut out = Vec::new();
    for entries in all_value_tables(q, x.t_carrier().size() * y.size()) {
        let m = VMatrix::new(
            x.t_carrier().clone(),
            y.carrier().clone(),
            q.clone(),
            entries,
        )
        .expect("shape is exact");
        if let Ok(d) = Distributor::check(x.clone(), y.clone(), m) {
            out.push(d);
        }
    }
    out
}

/// All subsets of `{0..n}` as index lists, by increasing bitmask.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}
