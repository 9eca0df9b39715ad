//! Commutative quantales: complete lattices with a join-preserving tensor.
//!
//! Two families are supported exactly: finite table-driven quantales
//! (`bool2`, `chain(n)`, or user-supplied tables) and the Lawvere quantale
//! `[0,∞]` with reversed numeric order, truncated addition, and unit `0`.
//! All arithmetic is exact: finite carriers are index tables, Lawvere values
//! are rationals in lowest terms plus a single infinity token.

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::report::{AuditEntry, AuditReport};
use crate::Error;

/// An element of some quantale: a carrier index for table-driven quantales,
/// or an extended nonnegative rational for the Lawvere quantale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    /// Index into a finite carrier.
    Idx(usize),
    /// Finite Lawvere value, nonnegative and in lowest terms.
    Rat(Rational64),
    /// The Lawvere infinity token (the bottom of the reversed order).
    Inf,
}

impl Value {
    pub fn rat(num: i64, den: i64) -> Value {
        Value::Rat(Rational64::new(num, den))
    }

    pub fn int(n: i64) -> Value {
        Value::Rat(Rational64::from_integer(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    FiniteTable,
    Lawvere,
}

/// A commutative quantale `(V, ⊗, k)` with computable joins, meets, and
/// internal hom.
#[derive(Debug, PartialEq, Eq)]
pub struct Quantale {
    name: String,
    kind: Kind,
    // Finite-table data; empty for lawvere.
    labels: Vec<String>,
    leq_table: Vec<bool>,    // n×n, row-major: leq_table[u*n+v] = (u ≤ v)
    tensor_table: Vec<usize>,
    join_table: Vec<usize>,
    meet_table: Vec<usize>,
    hom_table: Vec<usize>,
    unit: usize,
    bottom: usize,
    top: usize,
}

impl Quantale {
    /// The two-element frame `{⊥,⊤}` with `⊗ = ∧` and `k = ⊤`.
    pub fn bool2() -> Arc<Quantale> {
        Quantale::from_tables(
            "bool2",
            vec!["⊥".into(), "⊤".into()],
            &[vec![true, true], vec![false, true]],
            &[vec![0, 0], vec![0, 1]],
            1,
        )
        .expect("bool2 tables are a quantale")
    }

    /// The `n`-element chain `0 < 1 < … < n-1` with `⊗ = min` and `k` the top.
    pub fn chain(n: usize) -> Result<Arc<Quantale>, Error> {
        if n < 2 {
            return Err(Error::ChainTooSmall(n));
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let leq: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u <= v).collect()).collect();
        let tensor: Vec<Vec<usize>> = (0..n).map(|u| (0..n).map(|v| u.min(v)).collect()).collect();
        Quantale::from_tables(&format!("chain({n})"), labels, &leq, &tensor, n - 1)
    }

    /// The Lawvere quantale `([0,∞]^op, +, 0)`: order is reversed numeric,
    /// joins are numeric minima, `⊥ = ∞`, `⊤ = 0`.
    pub fn lawvere() -> Arc<Quantale> {
        Arc::new(Quantale {
            name: "lawvere".into(),
            kind: Kind::Lawvere,
            labels: Vec::new(),
            leq_table: Vec::new(),
            tensor_table: Vec::new(),
            join_table: Vec::new(),
            meet_table: Vec::new(),
            hom_table: Vec::new(),
            unit: 0,
            bottom: 0,
            top: 0,
        })
    }

    /// Looks up a built-in quantale by name: `bool2`, `chain(n)`, `lawvere`.
    pub fn builtin(name: &str) -> Result<Arc<Quantale>, Error> {
        match name {
            "bool2" => Ok(Quantale::bool2()),
            "lawvere" => Ok(Quantale::lawvere()),
            _ => {
                if let Some(inner) = name.strip_prefix("chain(").and_then(|s| s.strip_suffix(')')) {
                    let n: usize = inner
                        .parse()
                        .map_err(|_| Error::UnknownQuantale(name.to_string()))?;
                    Quantale::chain(n)
                } else {
                    Err(Error::UnknownQuantale(name.to_string()))
                }
            }
        }
    }

    /// Builds a finite quantale from explicit order and tensor tables.
    ///
    /// Rejects non-lattices outright: every pair must have a least upper and
    /// greatest lower bound, so that all lattice operations are O(1) table
    /// lookups afterwards. Deeper laws (associativity, distributivity, the
    /// hom adjunction) are the business of [`Quantale::audit`].
    pub fn from_tables(
        name: &str,
        labels: Vec<String>,
        leq: &[Vec<bool>],
        tensor: &[Vec<usize>],
        unit: usize,
    ) -> Result<Arc<Quantale>, Error> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Invalid("quantale carrier must be nonempty".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::Invalid(format!("duplicate quantale label `{a}`")));
                }
            }
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("leq table shape mismatch".into()));
        }
        if tensor.len() != n || tensor.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("tensor table shape mismatch".into()));
        }
        if unit >= n {
            return Err(Error::Invalid("unit index out of range".into()));
        }
        if tensor.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Invalid("tensor table entry out of range".into()));
        }
        let le = |u: usize, v: usize| leq[u][v];
        // Partial order.
        for u in 0..n {
            if !le(u, u) {
                return Err(Error::Invalid(format!("order not reflexive at `{}`", labels[u])));
            }
            for v in 0..n {
                if u != v && le(u, v) && le(v, u) {
                    return Err(Error::Invalid(format!(
                        "order not antisymmetric at `{}`,`{}`",
                        labels[u], labels[v]
                    )));
                }
                for w in 0..n {
                    if le(u, v) && le(v, w) && !le(u, w) {
                        return Err(Error::Invalid(format!(
                            "order not transitive at `{}`,`{}`,`{}`",
                            labels[u], labels[v], labels[w]
                        )));
                    }
                }
            }
        }
        // Pairwise joins/meets must exist (finite complete lattice).
        let mut join_table = vec![0usize; n * n];
        let mut meet_table = vec![0usize; n * n];
        for u in 0..n {
            for v in 0..n {
                let ubs: Vec<usize> = (0..n).filter(|&w| le(u, w) && le(v, w)).collect();
                let lub = ubs.iter().copied().find(|&w| ubs.iter().all(|&z| le(w, z)));
                let lbs: Vec<usize> = (0..n).filter(|&w| le(w, u) && le(w, v)).collect();
                let glb = lbs.iter().copied().find(|&w| lbs.iter().all(|&z| le(z, w)));
                match (lub, glb) {
                    (Some(j), Some(m)) => {
                        join_table[u * n + v] = j;
                        meet_table[u * n + v] = m;
                    }
                    (None, _) => {
                        return Err(Error::NotLattice(labels[u].clone(), labels[v].clone(), "join"))
                    }
                    (_, None) => {
                        return Err(Error::NotLattice(labels[u].clone(), labels[v].clone(), "meet"))
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|v| le(b, v)))
            .ok_or_else(|| Error::Invalid("no bottom element".into()))?;
        let top = (0..n)
            .find(|&t| (0..n).all(|v| le(v, t)))
            .ok_or_else(|| Error::Invalid("no top element".into()))?;
        // hom(u,v) = ⋁{w | u⊗w ≤ v}; the audit confirms this is a genuine
        // right adjoint (it is whenever ⊗ preserves joins).
        let mut hom_table = vec![0usize; n * n];
        for u in 0..n {
            for v in 0..n {
                let mut acc = bottom;
                for w in 0..n {
                    if le(tensor[u][w], v) {
                        acc = join_table[acc * n + w];
                    }
                }
                hom_table[u * n + v] = acc;
            }
        }
        Ok(Arc::new(Quantale {
            name: name.to_string(),
            kind: Kind::FiniteTable,
            labels,
            leq_table: leq.iter().flatten().copied().collect(),
            tensor_table: tensor.iter().flatten().copied().collect(),
            join_table,
            meet_table,
            hom_table,
            unit,
            bottom,
            top,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_finite(&self) -> bool {
        self.kind == Kind::FiniteTable
    }

    /// Carrier size for finite quantales.
    pub fn size(&self) -> Option<usize> {
        match self.kind {
            Kind::FiniteTable => Some(self.labels.len()),
            Kind::Lawvere => None,
        }
    }

    /// All elements of a finite carrier in canonical order.
    pub fn elements(&self) -> Vec<Value> {
        match self.kind {
            Kind::FiniteTable => (0..self.labels.len()).map(Value::Idx).collect(),
            Kind::Lawvere => Vec::new(),
        }
    }

    pub fn unit(&self) -> Value {
        match self.kind {
            Kind::FiniteTable => Value::Idx(self.unit),
            Kind::Lawvere => Value::Rat(Rational64::zero()),
        }
    }

    pub fn bottom(&self) -> Value {
        match self.kind {
            Kind::FiniteTable => Value::Idx(self.bottom),
            Kind::Lawvere => Value::Inf,
        }
    }

    pub fn top(&self) -> Value {
        match self.kind {
            Kind::FiniteTable => Value::Idx(self.top),
            Kind::Lawvere => Value::Rat(Rational64::zero()),
        }
    }

    fn idx(&self, v: Value) -> usize {
        match v {
            Value::Idx(i) if i < self.labels.len() => i,
            _ => panic!(
                "value {v:?} does not belong to quantale `{}` (mismatched element)",
                self.name
            ),
        }
    }

    fn check_lawvere(&self, v: Value) -> Value {
        match v {
            Value::Rat(r) if !r.is_negative() => v,
            Value::Inf => v,
            _ => panic!(
                "value {v:?} does not belong to quantale `{}` (mismatched element)",
                self.name
            ),
        }
    }

    /// Membership test used by validators; the arithmetic operations panic on
    /// foreign elements instead (mixing quantales is a programming error).
    pub fn contains(&self, v: Value) -> bool {
        match (self.kind, v) {
            (Kind::FiniteTable, Value::Idx(i)) => i < self.labels.len(),
            (Kind::Lawvere, Value::Rat(r)) => !r.is_negative(),
            (Kind::Lawvere, Value::Inf) => true,
            _ => false,
        }
    }

    /// `u ≤_V v`. For lawvere this is the reversed numeric order.
    pub fn leq(&self, u: Value, v: Value) -> bool {
        match self.kind {
            Kind::FiniteTable => {
                let n = self.labels.len();
                self.leq_table[self.idx(u) * n + self.idx(v)]
            }
            Kind::Lawvere => match (self.check_lawvere(u), self.check_lawvere(v)) {
                (Value::Inf, _) => true,
                (_, Value::Inf) => false,
                (Value::Rat(a), Value::Rat(b)) => a >= b,
                _ => unreachable!(),
            },
        }
    }

    pub fn join2(&self, u: Value, v: Value) -> Value {
        match self.kind {
            Kind::FiniteTable => {
                let n = self.labels.len();
                Value::Idx(self.join_table[self.idx(u) * n + self.idx(v)])
            }
            Kind::Lawvere => match (self.check_lawvere(u), self.check_lawvere(v)) {
                (Value::Inf, b) => b,
                (a, Value::Inf) => a,
                (Value::Rat(a), Value::Rat(b)) => Value::Rat(a.min(b)),
                _ => unreachable!(),
            },
        }
    }

    pub fn meet2(&self, u: Value, v: Value) -> Value {
        match self.kind {
            Kind::FiniteTable => {
                let n = self.labels.len();
                Value::Idx(self.meet_table[self.idx(u) * n + self.idx(v)])
            }
            Kind::Lawvere => match (self.check_lawvere(u), self.check_lawvere(v)) {
                (Value::Inf, _) | (_, Value::Inf) => Value::Inf,
                (Value::Rat(a), Value::Rat(b)) => Value::Rat(a.max(b)),
                _ => unreachable!(),
            },
        }
    }

    /// Least upper bound of a finite collection; the empty join is `⊥`.
    pub fn join(&self, elems: impl IntoIterator<Item = Value>) -> Value {
        elems.into_iter().fold(self.bottom(), |acc, v| self.join2(acc, v))
    }

    /// Greatest lower bound of a finite collection; the empty meet is `⊤`.
    pub fn meet(&self, elems: impl IntoIterator<Item = Value>) -> Value {
        elems.into_iter().fold(self.top(), |acc, v| self.meet2(acc, v))
    }

    /// `u ⊗ v`: table lookup, or truncated addition on `[0,∞]`.
    pub fn tensor(&self, u: Value, v: Value) -> Value {
        match self.kind {
            Kind::FiniteTable => {
                let n = self.labels.len();
                Value::Idx(self.tensor_table[self.idx(u) * n + self.idx(v)])
            }
            Kind::Lawvere => match (self.check_lawvere(u), self.check_lawvere(v)) {
                (Value::Inf, _) | (_, Value::Inf) => Value::Inf,
                (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
                _ => unreachable!(),
            },
        }
    }

    /// Internal hom: the largest `w` with `u ⊗ w ≤ v`. For lawvere this is
    /// truncated subtraction `v ∸ u` (with `hom(∞,v) = 0`, `hom(u,∞) = ∞`).
    pub fn hom(&self, u: Value, v: Value) -> Value {
        match self.kind {
            Kind::FiniteTable => {
                let n = self.labels.len();
                Value::Idx(self.hom_table[self.idx(u) * n + self.idx(v)])
            }
            Kind::Lawvere => match (self.check_lawvere(u), self.check_lawvere(v)) {
                (Value::Inf, _) => Value::Rat(Rational64::zero()),
                (Value::Rat(_), Value::Inf) => Value::Inf,
                (Value::Rat(a), Value::Rat(b)) => {
                    if b > a {
                        Value::Rat(b - a)
                    } else {
                        Value::Rat(Rational64::zero())
                    }
                }
                _ => unreachable!(),
            },
        }
    }

    /// Printable form of an element of this quantale.
    pub fn label(&self, v: Value) -> String {
        match (self.kind, v) {
            (Kind::FiniteTable, Value::Idx(i)) if i < self.labels.len() => self.labels[i].clone(),
            (Kind::Lawvere, Value::Rat(r)) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (Kind::Lawvere, Value::Inf) => "inf".into(),
            _ => format!("<foreign {v:?}>"),
        }
    }

    /// Parses an element literal: a carrier label for finite quantales; for
    /// lawvere `inf`, an integer, a fraction `p/q`, or a decimal.
    pub fn parse_value(&self, s: &str) -> Result<Value, Error> {
        match self.kind {
            Kind::FiniteTable => self
                .labels
                .iter()
                .position(|l| l == s)
                .map(Value::Idx)
                .ok_or_else(|| Error::Invalid(format!("`{s}` is not a label of quantale `{}`", self.name))),
            Kind::Lawvere => parse_extended_rational(s),
        }
    }

    /// The default sample of Lawvere values used by sampled audits: a small
    /// rational grid plus the two lattice bounds.
    pub fn lawvere_sample() -> Vec<Value> {
        let mut out = vec![Value::Inf];
        for (n, d) in [(0, 1), (1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (7, 2), (5, 1), (8, 1)] {
            out.push(Value::rat(n, d));
        }
        out
    }

    /// Law checklist: partial order and lattice completeness, `⊗` laws, join
    /// distributivity, and the hom adjunction. Finite carriers are checked
    /// exhaustively; lawvere is checked on [`Quantale::lawvere_sample`] and
    /// the report is marked sampled.
    pub fn audit(&self) -> AuditReport {
        let elems: Vec<Value> = match self.kind {
            Kind::FiniteTable => self.elements(),
            Kind::Lawvere => Quantale::lawvere_sample(),
        };
        let sampled = self.kind == Kind::Lawvere;
        let mut report = AuditReport::new(format!("quantale `{}`", self.name), sampled);
        let pretty = |v: Value| self.label(v);

        let mut order_ok = true;
        let mut order_witness = None;
        for &u in &elems {
            if !self.leq(u, u) {
                order_ok = false;
                order_witness = Some(format!("{} ≰ {}", pretty(u), pretty(u)));
                break;
            }
            for &v in &elems {
                if u != v && self.leq(u, v) && self.leq(v, u) {
                    order_ok = false;
                    order_witness = Some(format!("{} ≶ {}", pretty(u), pretty(v)));
                }
                for &w in &elems {
                    if self.leq(u, v) && self.leq(v, w) && !self.leq(u, w) {
                        order_ok = false;
                        order_witness =
                            Some(format!("{} ≤ {} ≤ {} but not ≤", pretty(u), pretty(v), pretty(w)));
                    }
                }
            }
        }
        report.push(AuditEntry::new("order is a partial order", order_ok, order_witness));

        let mut lattice_ok = true;
        let mut lattice_witness = None;
        for &u in &elems {
            for &v in &elems {
                let j = self.join2(u, v);
                let m = self.meet2(u, v);
                if !(self.leq(u, j) && self.leq(v, j) && self.leq(m, u) && self.leq(m, v)) {
                    lattice_ok = false;
                    lattice_witness = Some(format!("bounds of {},{}", pretty(u), pretty(v)));
                }
                for &w in &elems {
                    if self.leq(u, w) && self.leq(v, w) && !self.leq(j, w) {
                        lattice_ok = false;
                        lattice_witness =
                            Some(format!("join({},{}) not least", pretty(u), pretty(v)));
                    }
                    if self.leq(w, u) && self.leq(w, v) && !self.leq(w, m) {
                        lattice_ok = false;
                        lattice_witness =
                            Some(format!("meet({},{}) not greatest", pretty(u), pretty(v)));
                    }
                }
            }
        }
        report.push(AuditEntry::new("pairwise joins and meets are bounds", lattice_ok, lattice_witness));

        let mut assoc_ok = true;
        let mut assoc_witness = None;
        let mut comm_ok = true;
        let mut comm_witness = None;
        for &u in &elems {
            for &v in &elems {
                if self.tensor(u, v) != self.tensor(v, u) {
                    comm_ok = false;
                    comm_witness = Some(format!("{} ⊗ {}", pretty(u), pretty(v)));
                }
                for &w in &elems {
                    if self.tensor(self.tensor(u, v), w) != self.tensor(u, self.tensor(v, w)) {
                        assoc_ok = false;
                        assoc_witness =
                            Some(format!("({} ⊗ {}) ⊗ {}", pretty(u), pretty(v), pretty(w)));
                    }
                }
            }
        }
        report.push(AuditEntry::new("tensor associative", assoc_ok, assoc_witness));
        report.push(AuditEntry::new("tensor commutative", comm_ok, comm_witness));

        let mut unit_ok = true;
        let mut unit_witness = None;
        for &u in &elems {
            if self.tensor(self.unit(), u) != u {
                unit_ok = false;
                unit_witness = Some(format!("k ⊗ {} ≠ {}", pretty(u), pretty(u)));
            }
        }
        report.push(AuditEntry::new("unit law k ⊗ u = u", unit_ok, unit_witness));

        // u ⊗ (v ∨ w) = (u⊗v) ∨ (u⊗w), plus the empty join u ⊗ ⊥ = ⊥.
        let mut dist_ok = true;
        let mut dist_witness = None;
        for &u in &elems {
            if self.tensor(u, self.bottom()) != self.bottom() {
                dist_ok = false;
                dist_witness = Some(format!("{} ⊗ ⊥ ≠ ⊥", pretty(u)));
            }
            for &v in &elems {
                for &w in &elems {
                    let lhs = self.tensor(u, self.join2(v, w));
                    let rhs = self.join2(self.tensor(u, v), self.tensor(u, w));
                    if lhs != rhs {
                        dist_ok = false;
                        dist_witness =
                            Some(format!("{} ⊗ ({} ∨ {})", pretty(u), pretty(v), pretty(w)));
                    }
                }
            }
        }
        // Full subset distributivity on small finite carriers.
        if self.kind == Kind::FiniteTable && elems.len() <= 6 {
            for &u in &elems {
                for mask in 0u32..1 << elems.len() {
                    let subset: Vec<Value> = (0..elems.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| elems[i])
                        .collect();
                    let lhs = self.tensor(u, self.join(subset.iter().copied()));
                    let rhs = self.join(subset.iter().map(|&s| self.tensor(u, s)));
                    if lhs != rhs {
                        dist_ok = false;
                        dist_witness =
                            Some(format!("{} ⊗ ⋁S for a {}-element S", pretty(u), subset.len()));
                    }
                }
            }
        }
        report.push(AuditEntry::new("tensor preserves joins", dist_ok, dist_witness));

        let mut adj_ok = true;
        let mut adj_witness = None;
        for &u in &elems {
            for &v in &elems {
                for &w in &elems {
                    let lhs = self.leq(self.tensor(u, w), v);
                    let rhs = self.leq(w, self.hom(u, v));
                    if lhs != rhs {
                        adj_ok = false;
                        adj_witness = Some(format!(
                            "u={}, v={}, w={}: {} vs {}",
                            pretty(u),
                            pretty(v),
                            pretty(w),
                            lhs,
                            rhs
                        ));
                    }
                }
            }
        }
        report.push(AuditEntry::new("hom adjunction u⊗w ≤ v ⟺ w ≤ hom(u,v)", adj_ok, adj_witness));

        report
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Parses `inf`, `p/q`, an integer, or a finite decimal into an exact
/// extended nonnegative rational.
pub fn parse_extended_rational(s: &str) -> Result<Value, Error> {
    let s = s.trim();
    if s == "inf" || s == "∞" {
        return Ok(Value::Inf);
    }
    let bad = || Error::Invalid(format!("`{s}` is not an extended nonnegative rational"));
    let parsed = if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Rational64::new(n, d)
    } else if let Some((int, frac)) = s.split_once('.') {
        let int_part: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: i64 = frac.parse().map_err(|_| bad())?;
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        Rational64::from_integer(int_part) + Rational64::new(digits, scale)
    } else {
        Rational64::from_integer(s.parse().map_err(|_| bad())?)
    };
    if parsed.is_negative() {
        return Err(bad());
    }
    Ok(Value::Rat(parsed))
}
