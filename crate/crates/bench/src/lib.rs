//! Shared fixtures for the benchmark harness.

use std::sync::Arc;

use tvcat_core::instances::{bool2_id, diamond_cat};
use tvcat_core::{Caps, Distributor, Quantale, TCategory, Theory, VMatrix, Value};

pub fn diamond() -> Arc<TCategory> {
    diamond_cat(&bool2_id())
}

pub fn theory() -> Arc<Theory> {
    bool2_id()
}

pub fn caps() -> Caps {
    Caps::default()
}

/// The unit distributor of the diamond, the main composition workload.
pub fn diamond_unit() -> Distributor {
    Distributor::unit(&diamond())
}

/// A dense 6-node Lawvere weight matrix with a few missing edges.
pub fn lawvere_weights() -> VMatrix {
    let q = Quantale::lawvere();
    let n = 6;
    let carrier = tvcat_core::FinSet::canonical(n);
    let entries: Vec<Value> = (0..n * n)
        .map(|k| {
            if k % 7 == 3 {
                Value::Inf
            } else {
                Value::rat((k % 11) as i64, 1 + (k % 3) as i64)
            }
        })
        .collect();
    VMatrix::new(carrier.clone(), carrier, q, entries).unwrap()
}
