//! The quantaloid of V-matrices: V-valued relations between finite sets,
//! with composition, involution, pointwise order, and both residuations.

use std::fmt;
use std::sync::Arc;

use crate::quantale::{Quantale, Value};
use crate::Error;

/// A finite set with a fixed canonical ordering of its labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    name: String,
    labels: Vec<String>,
}

impl FinSet {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Result<Arc<FinSet>, Error> {
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::Invalid(format!("duplicate label `{a}` in finite set")));
                }
            }
        }
        Ok(Arc::new(FinSet { name: name.into(), labels }))
    }

    /// Canonical carrier `{x0, …, x(n-1)}` used by enumerations.
    pub fn canonical(n: usize) -> Arc<FinSet> {
        FinSet::new(format!("X{n}"), (0..n).map(|i| format!("x{i}")).collect())
            .expect("canonical labels are distinct")
    }

    pub fn singleton() -> Arc<FinSet> {
        FinSet::new("1", vec!["*".into()]).expect("singleton")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Cartesian product with pair labels `(a,b)`; index = `i * |b| + j`.
    pub fn product(a: &Arc<FinSet>, b: &Arc<FinSet>) -> Arc<FinSet> {
        let mut labels = Vec::with_capacity(a.size() * b.size());
        for la in a.labels() {
            for lb in b.labels() {
                labels.push(format!("({la},{lb})"));
            }
        }
        Arc::new(FinSet { name: format!("{}×{}", a.name, b.name), labels })
    }
}

/// Index of the pair `(i,j)` in `FinSet::product(a,b)`.
pub fn pair_index(b_size: usize, i: usize, j: usize) -> usize {
    i * b_size + j
}

pub fn unpair_index(b_size: usize, p: usize) -> (usize, usize) {
    (p / b_size, p % b_size)
}

/// A function between finite sets, stored as an index table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFun {
    pub dom: Arc<FinSet>,
    pub cod: Arc<FinSet>,
    pub table: Vec<usize>,
}

impl SetFun {
    pub fn new(dom: Arc<FinSet>, cod: Arc<FinSet>, table: Vec<usize>) -> Result<SetFun, Error> {
        if table.len() != dom.size() {
            return Err(Error::Invalid("function table length mismatch".into()));
        }
        if table.iter().any(|&i| i >= cod.size()) {
            return Err(Error::Invalid("function table entry out of range".into()));
        }
        Ok(SetFun { dom, cod, table })
    }

    pub fn identity(x: Arc<FinSet>) -> SetFun {
        let table = (0..x.size()).collect();
        SetFun { dom: x.clone(), cod: x, table }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn compose(g: &SetFun, f: &SetFun) -> SetFun {
        assert_eq!(f.cod, g.dom, "composing functions with mismatched sets");
        SetFun {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&i| g.table[i]).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &i in &self.table {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// First projection `A×B → A`.
    pub fn proj1(a: &Arc<FinSet>, b: &Arc<FinSet>) -> SetFun {
        let prod = FinSet::product(a, b);
        let table = (0..prod.size()).map(|p| unpair_index(b.size(), p).0).collect();
        SetFun { dom: prod, cod: a.clone(), table }
    }

    /// Second projection `A×B → B`.
    pub fn proj2(a: &Arc<FinSet>, b: &Arc<FinSet>) -> SetFun {
        let prod = FinSet::product(a, b);
        let table = (0..prod.size()).map(|p| unpair_index(b.size(), p).1).collect();
        SetFun { dom: prod, cod: b.clone(), table }
    }

    /// Graph of the function as a V-matrix: `k` at `(x, f(x))`, `⊥` elsewhere.
    pub fn graph(&self, q: &Arc<Quantale>) -> VMatrix {
        let mut m = VMatrix::constant(self.dom.clone(), self.cod.clone(), q.clone(), q.bottom());
        for (i, &j) in self.table.iter().enumerate() {
            m.set(i, j, q.unit());
        }
        m
    }
}

/// A V-valued relation `r: X ⇸ Y`, stored densely row-major (`X` rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VMatrix {
    src: Arc<FinSet>,
    dst: Arc<FinSet>,
    quantale: Arc<Quantale>,
    entries: Vec<Value>,
}

impl VMatrix {
    pub fn new(
        src: Arc<FinSet>,
        dst: Arc<FinSet>,
        quantale: Arc<Quantale>,
        entries: Vec<Value>,
    ) -> Result<VMatrix, Error> {
        if entries.len() != src.size() * dst.size() {
            return Err(Error::Invalid(format!(
                "matrix shape mismatch: {}×{} needs {} entries, got {}",
                src.size(),
                dst.size(),
                src.size() * dst.size(),
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&v| !quantale.contains(v)) {
            return Err(Error::Invalid(format!(
                "matrix entry {bad:?} does not belong to quantale `{}`",
                quantale.name()
            )));
        }
        Ok(VMatrix { src, dst, quantale, entries })
    }

    pub fn constant(src: Arc<FinSet>, dst: Arc<FinSet>, q: Arc<Quantale>, v: Value) -> VMatrix {
        let entries = vec![v; src.size() * dst.size()];
        VMatrix { src, dst, quantale: q, entries }
    }

    pub fn bottom(src: Arc<FinSet>, dst: Arc<FinSet>, q: Arc<Quantale>) -> VMatrix {
        let b = q.bottom();
        VMatrix::constant(src, dst, q, b)
    }

    /// Diagonal unit of `Mat(V)`: `k` on the diagonal, `⊥` elsewhere.
    pub fn identity(x: Arc<FinSet>, q: Arc<Quantale>) -> VMatrix {
        let mut m = VMatrix::bottom(x.clone(), x, q.clone());
        for i in 0..m.src.size() {
            m.set(i, i, q.unit());
        }
        m
    }

    pub fn src(&self) -> &Arc<FinSet> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FinSet> {
        &self.dst
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn entries(&self) -> &[Value] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Value {
        self.entries[i * self.dst.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.entries[i * self.dst.size() + j] = v;
    }

    /// Involution `r°(y,x) = r(x,y)`.
    pub fn transpose(&self) -> VMatrix {
        let mut out =
            VMatrix::bottom(self.dst.clone(), self.src.clone(), self.quantale.clone());
        for i in 0..self.src.size() {
            for j in 0..self.dst.size() {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn leq(&self, other: &VMatrix) -> bool {
        assert_shape(self, other);
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| self.quantale.leq(a, b))
    }

    pub fn join(&self, other: &VMatrix) -> VMatrix {
        assert_shape(self, other);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.quantale.join2(a, b))
            .collect();
        VMatrix { src: self.src.clone(), dst: self.dst.clone(), quantale: self.quantale.clone(), entries }
    }

    pub fn meet(&self, other: &VMatrix) -> VMatrix {
        assert_shape(self, other);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.quantale.meet2(a, b))
            .collect();
        VMatrix { src: self.src.clone(), dst: self.dst.clone(), quantale: self.quantale.clone(), entries }
    }

    /// Row `i` as a values vector (used for column/presheaf extraction via
    /// the transpose).
    pub fn row(&self, i: usize) -> Vec<Value> {
        (0..self.dst.size()).map(|j| self.get(i, j)).collect()
    }

    /// Column `j` as a values vector.
    pub fn column(&self, j: usize) -> Vec<Value> {
        (0..self.src.size()).map(|i| self.get(i, j)).collect()
    }
}

fn assert_shape(a: &VMatrix, b: &VMatrix) {
    assert!(
        a.src.size() == b.src.size() && a.dst.size() == b.dst.size(),
        "matrix shape mismatch: {}×{} vs {}×{}",
        a.src.size(),
        a.dst.size(),
        b.src.size(),
        b.dst.size()
    );
}

/// Composition `(s·r)(x,z) = ⋁_y r(x,y) ⊗ s(y,z)` for `r: X ⇸ Y`, `s: Y ⇸ Z`.
pub fn compose(s: &VMatrix, r: &VMatrix) -> VMatrix {
    assert_eq!(
        r.dst.size(),
        s.src.size(),
        "composing {}⇸{} after {}⇸{}",
        s.src.name(),
        s.dst.name(),
        r.src.name(),
        r.dst.name()
    );
    let q = &r.quantale;
    let mut out = VMatrix::bottom(r.src.clone(), s.dst.clone(), q.clone());
    for x in 0..r.src.size() {
        for z in 0..s.dst.size() {
            let mut acc = q.bottom();
            for y in 0..r.dst.size() {
                acc = q.join2(acc, q.tensor(r.get(x, y), s.get(y, z)));
            }
            out.set(x, z, acc);
        }
    }
    out
}

/// Right extension `t ⟜ r`: the largest `s: Y ⇸ Z` with `s·r ≤ t`,
/// pointwise `(t⟜r)(y,z) = ⋀_x hom(r(x,y), t(x,z))` for `r: X ⇸ Y`, `t: X ⇸ Z`.
pub fn right_extension(t: &VMatrix, r: &VMatrix) -> VMatrix {
    assert_eq!(t.src.size(), r.src.size(), "right extension needs a common source");
    let q = &t.quantale;
    let mut out = VMatrix::bottom(r.dst.clone(), t.dst.clone(), q.clone());
    for y in 0..r.dst.size() {
        for z in 0..t.dst.size() {
            let mut acc = q.top();
            for x in 0..r.src.size() {
                acc = q.meet2(acc, q.hom(r.get(x, y), t.get(x, z)));
            }
            out.set(y, z, acc);
        }
    }
    out
}

/// Right lifting `r ⊸ t`: the largest `s: Z ⇸ X` with `r·s ≤ t`,
/// pointwise `(r⊸t)(z,x) = ⋀_y hom(r(x,y), t(z,y))` for `r: X ⇸ Y`, `t: Z ⇸ Y`.
pub fn right_lifting(r: &VMatrix, t: &VMatrix) -> VMatrix {
    assert_eq!(r.dst.size(), t.dst.size(), "right lifting needs a common target");
    let q = &t.quantale;
    let mut out = VMatrix::bottom(t.src.clone(), r.src.clone(), q.clone());
    for z in 0..t.src.size() {
        for x in 0..r.src.size() {
            let mut acc = q.top();
            for y in 0..r.dst.size() {
                acc = q.meet2(acc, q.hom(r.get(x, y), t.get(z, y)));
            }
            out.set(z, x, acc);
        }
    }
    out
}

impl fmt::Display for VMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.src.size() {
            let row: Vec<String> =
                (0..self.dst.size()).map(|j| self.quantale.label(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
