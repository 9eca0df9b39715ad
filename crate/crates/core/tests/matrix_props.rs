//! Property-based checks of the matrix kernel on randomly drawn instances.

use std::sync::Arc;

use proptest::prelude::*;
use tvcat_core::{compose, right_extension, right_lifting, FinSet, Quantale, VMatrix, Value};

fn bool2_matrix(rows: usize, cols: usize) -> impl Strategy<Value = VMatrix> {
    proptest::collection::vec(0usize..2, rows * cols).prop_map(move |bits| {
        let q = Quantale::bool2();
        let entries = bits.into_iter().map(Value::Idx).collect();
        VMatrix::new(FinSet::canonical(rows), FinSet::canonical(cols), q, entries).unwrap()
    })
}

fn chain3_matrix(rows: usize, cols: usize) -> impl Strategy<Value = VMatrix> {
    proptest::collection::vec(0usize..3, rows * cols).prop_map(move |vals| {
        let q = Quantale::chain(3).unwrap();
        let entries = vals.into_iter().map(Value::Idx).collect();
        VMatrix::new(FinSet::canonical(rows), FinSet::canonical(cols), q, entries).unwrap()
    })
}

fn lawvere_value() -> impl Strategy<Value = Value> {
    prop_oneof![
        3 => (0i64..12, 1i64..4).prop_map(|(n, d)| Value::rat(n, d)),
        1 => Just(Value::Inf),
    ]
}

fn lawvere_matrix(rows: usize, cols: usize) -> impl Strategy<Value = VMatrix> {
    proptest::collection::vec(lawvere_value(), rows * cols).prop_map(move |entries| {
        VMatrix::new(
            FinSet::canonical(rows),
            FinSet::canonical(cols),
            Quantale::lawvere(),
            entries,
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn involution_is_an_antihomomorphism(
        r in bool2_matrix(3, 3),
        s in bool2_matrix(3, 3),
    ) {
        prop_assert_eq!(compose(&s, &r).transpose(), compose(&r.transpose(), &s.transpose()));
    }

    #[test]
    fn composition_associates_over_chain3(
        r in chain3_matrix(2, 3),
        s in chain3_matrix(3, 2),
        t in chain3_matrix(2, 2),
    ) {
        prop_assert_eq!(
            compose(&t, &compose(&s, &r)),
            compose(&compose(&t, &s), &r)
        );
    }

    #[test]
    fn composition_preserves_joins_in_each_argument(
        r1 in chain3_matrix(2, 2),
        r2 in chain3_matrix(2, 2),
        s in chain3_matrix(2, 2),
    ) {
        prop_assert_eq!(
            compose(&s, &r1.join(&r2)),
            compose(&s, &r1).join(&compose(&s, &r2))
        );
        prop_assert_eq!(
            compose(&r1.join(&r2), &s),
            compose(&r1, &s).join(&compose(&r2, &s))
        );
    }

    #[test]
    fn galois_laws_on_random_lawvere_matrices(
        r in lawvere_matrix(2, 2),
        s in lawvere_matrix(2, 2),
        t in lawvere_matrix(2, 2),
    ) {
        let ext = right_extension(&t, &r);
        prop_assert_eq!(compose(&s, &r).leq(&t), s.leq(&ext));
        let lift = right_lifting(&r, &t);
        prop_assert_eq!(compose(&r, &s).leq(&t), s.leq(&lift));
    }

    #[test]
    fn lawvere_hom_matches_adjunction_oracle(
        u in lawvere_value(),
        v in lawvere_value(),
        w in lawvere_value(),
    ) {
        let q: Arc<Quantale> = Quantale::lawvere();
        let h = q.hom(u, v);
        // Unit of the adjunction plus the universal property on the sample.
        prop_assert!(q.leq(q.tensor(u, h), v));
        prop_assert_eq!(q.leq(q.tensor(u, w), v), q.leq(w, h));
    }
}
