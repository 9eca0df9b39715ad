//! T-categories and T-functors: the lax reflexivity/transitivity axioms,
//! induced distributor adjunctions `f_* ⊣ f^*`, the order and separation
//! structure, tensor and exponential, the functors between V-categories,
//! Eilenberg-Moore algebras, dualisation, and coequalisers via final
//! structures.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::distributor::Distributor;
use crate::quantale::{Quantale, Value};
use crate::theory::Theory;
use crate::vmatrix::{compose, unpair_index, FinSet, SetFun, VMatrix};
use crate::Error;

/// A T-category: a finite carrier `X` with a lax-reflexive, lax-transitive
/// structure `a: TX ⇸ X`. The `T`-images of the carrier and the monad's
/// unit/multiplication tables are materialised once at construction.
#[derive(Debug)]
pub struct TCategory {
    theory: Arc<Theory>,
    carrier: Arc<FinSet>,
    t_carrier: Arc<FinSet>,
    tt_carrier: Arc<FinSet>,
    e_table: Vec<usize>,
    m_table: Vec<usize>,
    structure: VMatrix,
    txi: OnceLock<VMatrix>,
}

impl PartialEq for TCategory {
    fn eq(&self, other: &Self) -> bool {
        self.theory.name() == other.theory.name()
            && self.theory.quantale().name() == other.theory.quantale().name()
            && self.carrier.labels() == other.carrier.labels()
            && self.structure.entries() == other.structure.entries()
    }
}

impl Eq for TCategory {}

impl TCategory {
    /// Validates the two lax axioms and builds the category, or reports the
    /// first violated inequality with witnesses.
    pub fn check(
        theory: Arc<Theory>,
        carrier: Arc<FinSet>,
        structure: VMatrix,
    ) -> Result<Arc<TCategory>, Error> {
        if !theory.is_audited() {
            return Err(Error::UnauditedTheory(theory.name().to_string()));
        }
        let q = theory.quantale();
        let t_carrier = theory.monad().apply_obj(&carrier);
        let tt_carrier = theory.monad().apply_obj(&t_carrier);
        if structure.src().size() != t_carrier.size() || structure.dst().size() != carrier.size() {
            return Err(Error::Category(format!(
                "structure must be {}×{}, got {}×{}",
                t_carrier.size(),
                carrier.size(),
                structure.src().size(),
                structure.dst().size()
            )));
        }
        if structure.quantale().name() != q.name() {
            return Err(Error::Category("structure over the wrong quantale".into()));
        }
        let e_table = theory.monad().unit_table(carrier.size());
        let m_table = theory.monad().mult_table(carrier.size());
        for x in 0..carrier.size() {
            if !q.leq(q.unit(), structure.get(e_table[x], x)) {
                return Err(Error::Category(format!(
                    "not reflexive: k ≰ a(e({0}), {0}) = {1}",
                    carrier.label(x),
                    q.label(structure.get(e_table[x], x))
                )));
            }
        }
        let txi = theory.t_xi_extend(&structure);
        for xx in 0..tt_carrier.size() {
            for tx in 0..t_carrier.size() {
                for x in 0..carrier.size() {
                    let lhs = q.tensor(txi.get(xx, tx), structure.get(tx, x));
                    let rhs = structure.get(m_table[xx], x);
                    if !q.leq(lhs, rhs) {
                        return Err(Error::Category(format!(
                            "not transitive at (𝔛={}, 𝔵={}, x={}): {} ≰ {}",
                            tt_carrier.label(xx),
                            t_carrier.label(tx),
                            carrier.label(x),
                            q.label(lhs),
                            q.label(rhs)
                        )));
                    }
                }
            }
        }
        let cat = TCategory {
            theory,
            carrier,
            t_carrier,
            tt_carrier,
            e_table,
            m_table,
            structure,
            txi: OnceLock::new(),
        };
        let _ = cat.txi.set(txi);
        Ok(Arc::new(cat))
    }

    /// `disc(S) = (S, e_S°)`: the least structure on a carrier.
    pub fn discrete(theory: &Arc<Theory>, s: &Arc<FinSet>) -> Result<Arc<TCategory>, Error> {
        let q = theory.quantale();
        let t = theory.monad().apply_obj(s);
        let e = SetFun::new(s.clone(), t, theory.monad().unit_table(s.size()))?;
        TCategory::check(theory.clone(), s.clone(), e.graph(q).transpose())
    }

    /// The free T-category on a point: `G = (1, e_1°)`.
    pub fn generator(theory: &Arc<Theory>) -> Result<Arc<TCategory>, Error> {
        TCategory::discrete(theory, &FinSet::singleton())
    }

    /// The free Eilenberg-Moore algebra `|S| = (TS, graph(m_S))` as a
    /// T-category.
    pub fn free_em(theory: &Arc<Theory>, s: &Arc<FinSet>) -> Result<Arc<TCategory>, Error> {
        let q = theory.quantale();
        let ts = theory.monad().apply_obj(s);
        let tts = theory.monad().apply_obj(&ts);
        let m = SetFun::new(tts, ts.clone(), theory.monad().mult_table(s.size()))?;
        TCategory::check(theory.clone(), ts, m.graph(q))
    }

    /// The quantale as a T-category `(V, hom_ξ)`; needs a finite carrier.
    pub fn v_as_category(theory: &Arc<Theory>) -> Result<Arc<TCategory>, Error> {
        let q = theory.quantale();
        let elems = q.elements();
        if !q.is_finite() {
            return Err(Error::InfiniteQuantale(q.name().to_string()));
        }
        let labels = elems.iter().map(|&v| q.label(v)).collect();
        let v_set = FinSet::new("V", labels)?;
        let tv = theory.monad().apply_obj(&v_set);
        let mut structure = VMatrix::bottom(tv.clone(), v_set.clone(), q.clone());
        for w in 0..tv.size() {
            let xi_w = theory.xi_after_t(&elems, w);
            for (j, &v) in elems.iter().enumerate() {
                structure.set(w, j, q.hom(xi_w, v));
            }
        }
        TCategory::check(theory.clone(), v_set, structure)
    }

    /// The ⊗-neutral object `E = (1, k)`.
    pub fn neutral(theory: &Arc<Theory>) -> Result<Arc<TCategory>, Error> {
        let q = theory.quantale();
        let one = FinSet::singleton();
        let t1 = theory.monad().apply_obj(&one);
        let structure = VMatrix::constant(t1, one.clone(), q.clone(), q.unit());
        TCategory::check(theory.clone(), one, structure)
    }

    /// An Eilenberg-Moore algebra `α: TX → X`, validated against the algebra
    /// laws and regarded as the T-category `(X, graph α)`.
    pub fn em_to_cat(
        theory: &Arc<Theory>,
        carrier: &Arc<FinSet>,
        alpha: &[usize],
    ) -> Result<Arc<TCategory>, Error> {
        let monad = theory.monad();
        let n = carrier.size();
        let tn = monad.t_size(n);
        if alpha.len() != tn || alpha.iter().any(|&i| i >= n) {
            return Err(Error::Precondition("algebra table has the wrong shape".into()));
        }
        let e = monad.unit_table(n);
        for x in 0..n {
            if alpha[e[x]] != x {
                return Err(Error::Precondition(format!(
                    "algebra unit law fails at `{}`",
                    carrier.label(x)
                )));
            }
        }
        let m = monad.mult_table(n);
        let t_alpha = monad.apply_table(alpha, n);
        for w in 0..monad.t_size(tn) {
            if alpha[m[w]] != alpha[t_alpha[w]] {
                return Err(Error::Precondition(format!(
                    "algebra multiplication law fails at index {w}"
                )));
            }
        }
        let t_carrier = monad.apply_obj(carrier);
        let alpha_fun = SetFun::new(t_carrier, carrier.clone(), alpha.to_vec())?;
        TCategory::check(theory.clone(), carrier.clone(), alpha_fun.graph(theory.quantale()))
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.theory.quantale()
    }

    pub fn carrier(&self) -> &Arc<FinSet> {
        &self.carrier
    }

    pub fn t_carrier(&self) -> &Arc<FinSet> {
        &self.t_carrier
    }

    pub fn tt_carrier(&self) -> &Arc<FinSet> {
        &self.tt_carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn e_table(&self) -> &[usize] {
        &self.e_table
    }

    pub fn m_table(&self) -> &[usize] {
        &self.m_table
    }

    /// `e_X` as a function into the materialised `TX`.
    pub fn e_fun(&self) -> SetFun {
        SetFun::new(self.carrier.clone(), self.t_carrier.clone(), self.e_table.clone())
            .expect("unit table is well formed")
    }

    /// `m_X` as a function `TTX → TX`.
    pub fn m_fun(&self) -> SetFun {
        SetFun::new(self.tt_carrier.clone(), self.t_carrier.clone(), self.m_table.clone())
            .expect("multiplication table is well formed")
    }

    pub fn structure(&self) -> &VMatrix {
        &self.structure
    }

    /// Cached lax extension `T_ξ a : TTX ⇸ TX` of the structure.
    pub fn txi_structure(&self) -> &VMatrix {
        self.txi.get_or_init(|| self.theory.t_xi_extend(&self.structure))
    }

    /// Column `a(−,x)` of the structure: the Yoneda image of a point as a
    /// map `TX → V`.
    pub fn yoneda_column(&self, x: usize) -> Vec<Value> {
        self.structure.column(x)
    }

    /// Separation, decided by columns: no two distinct points share the
    /// presheaf `a(−,x)`.
    pub fn separated(&self) -> bool {
        let n = self.size();
        for x in 0..n {
            for y in x + 1..n {
                if self.yoneda_column(x) == self.yoneda_column(y) {
                    return false;
                }
            }
        }
        true
    }

    /// Points `x ≅ x'` (equal structure columns).
    pub fn points_equivalent(&self, x: usize, y: usize) -> bool {
        self.yoneda_column(x) == self.yoneda_column(y)
    }

    /// The full subcategory on a list of carrier indices, together with the
    /// (fully faithful) inclusion functor.
    pub fn full_subcategory(
        x: &Arc<TCategory>,
        indices: &[usize],
    ) -> Result<(Arc<TCategory>, TFunctor), Error> {
        let labels: Vec<String> =
            indices.iter().map(|&i| x.carrier.label(i).to_string()).collect();
        let sub = FinSet::new(format!("{}⊇", x.carrier.name()), labels)?;
        let q = x.quantale();
        let inclusion = SetFun::new(sub.clone(), x.carrier.clone(), indices.to_vec())?;
        let t_inclusion = x.theory.monad().apply_map(&inclusion);
        let t_sub = t_inclusion.dom.clone();
        let mut structure = VMatrix::bottom(t_sub.clone(), sub.clone(), q.clone());
        for ts in 0..t_sub.size() {
            for (s, &orig) in indices.iter().enumerate() {
                structure.set(ts, s, x.structure.get(t_inclusion.apply(ts), orig));
            }
        }
        let cat = TCategory::check(x.theory.clone(), sub, structure)?;
        let incl = TFunctor::check(cat.clone(), x.clone(), indices.to_vec())?;
        Ok((cat, incl))
    }

    /// Tensor product `(X,a) ⊗ (Y,b)` with the pointwise-tensored structure.
    pub fn tensor(x: &Arc<TCategory>, y: &Arc<TCategory>) -> Result<Arc<TCategory>, Error> {
        if x.theory.name() != y.theory.name()
            || x.quantale().name() != y.quantale().name()
        {
            return Err(Error::Precondition("tensor needs a common theory".into()));
        }
        let q = x.quantale();
        let monad = x.theory.monad();
        let prod = FinSet::product(&x.carrier, &y.carrier);
        let tp1 = monad.apply_map(&SetFun::proj1(&x.carrier, &y.carrier));
        let tp2 = monad.apply_map(&SetFun::proj2(&x.carrier, &y.carrier));
        let t_prod = tp1.dom.clone();
        let mut structure = VMatrix::bottom(t_prod.clone(), prod.clone(), q.clone());
        for w in 0..t_prod.size() {
            for p in 0..prod.size() {
                let (i, j) = unpair_index(y.size(), p);
                structure.set(
                    w,
                    p,
                    q.tensor(x.structure.get(tp1.apply(w), i), y.structure.get(tp2.apply(w), j)),
                );
            }
        }
        TCategory::check(x.theory.clone(), prod, structure)
    }

    /// The exponential `V^{|X|}`: the T-category of all maps `TX → V` with
    /// the lifted hom structure. Returns the category together with the value
    /// table of each carrier element. Requires finite `V`; refuses when
    /// `|V|^{|TX|}` exceeds `space_cap`.
    pub fn exponential_v(
        x: &Arc<TCategory>,
        space_cap: usize,
    ) -> Result<(Arc<TCategory>, Vec<Vec<Value>>), Error> {
        let q = x.quantale();
        let elems = q.elements();
        if !q.is_finite() {
            return Err(Error::InfiniteQuantale(q.name().to_string()));
        }
        let tn = x.t_carrier.size();
        let count = elems.len().checked_pow(tn as u32).filter(|&c| c <= space_cap);
        let Some(_) = count else {
            return Err(Error::CapExceeded(format!(
                "|V|^|TX| = {}^{} exceeds the presheaf-space cap {}",
                elems.len(),
                tn,
                space_cap
            )));
        };
        let tables: Vec<Vec<Value>> = crate::theory::all_tables(tn, elems.len())
            .into_iter()
            .map(|t| t.into_iter().map(|i| elems[i]).collect())
            .collect();
        let cat = function_space_category(x, &tables, "V^|X|")?;
        Ok((cat, tables))
    }

    /// Restriction along the V-category forgetful functor: `SX = (X, a·e_X)`
    /// over the identity theory.
    pub fn forget_to_v(x: &Arc<TCategory>) -> Result<Arc<TCategory>, Error> {
        let q = x.quantale();
        let idth = Theory::identity(q.clone());
        let structure = compose(&x.structure, &x.e_fun().graph(q));
        TCategory::check(idth, x.carrier.clone(), structure)
    }

    /// Left adjoint of the forgetful functor: a V-category `(X, r)` becomes
    /// the T-category `(X, e_X° · T_ξ r)`.
    pub fn lift_a(theory: &Arc<Theory>, vcat: &Arc<TCategory>) -> Result<Arc<TCategory>, Error> {
        if vcat.theory.monad().t_size(1) != 1 || vcat.theory.name() != "identity" {
            return Err(Error::Precondition("lift_a expects a V-category (identity theory)".into()));
        }
        if vcat.quantale().name() != theory.quantale().name() {
            return Err(Error::Precondition("lift_a needs a matching quantale".into()));
        }
        let q = theory.quantale();
        let carrier = vcat.carrier.clone();
        let t_carrier = theory.monad().apply_obj(&carrier);
        let e = SetFun::new(carrier.clone(), t_carrier, theory.monad().unit_table(carrier.size()))?;
        let txi_r = theory.t_xi_extend(&vcat.structure);
        let structure = compose(&e.graph(q).transpose(), &txi_r);
        TCategory::check(theory.clone(), carrier, structure)
    }

    /// The V-category `M(X) = (TX, T_ξ a · m_X°)`.
    pub fn functor_m(x: &Arc<TCategory>) -> Result<Arc<TCategory>, Error> {
        let q = x.quantale();
        let idth = Theory::identity(q.clone());
        let structure = compose(x.txi_structure(), &x.m_fun().graph(q).transpose());
        TCategory::check(idth, x.t_carrier.clone(), structure)
    }

    /// Dualisation `X^op = A(M(X)^op)`: a T-category structure on `TX`.
    pub fn dual_op(x: &Arc<TCategory>) -> Result<Arc<TCategory>, Error> {
        let m = TCategory::functor_m(x)?;
        let op = TCategory::check(
            m.theory.clone(),
            m.carrier.clone(),
            m.structure.transpose(),
        )?;
        TCategory::lift_a(&x.theory, &op)
    }

    /// Coequaliser of an equivalence relation by the final (least) structure
    /// on the set quotient: iterate `c ← c₀ ∨ e_Q° ∨ (c ∘ c)` to fixpoint.
    pub fn coequalizer(
        pi1: &TFunctor,
        pi2: &TFunctor,
    ) -> Result<(Arc<TCategory>, TFunctor), Error> {
        if pi1.dom != pi2.dom || pi1.cod != pi2.cod {
            return Err(Error::Precondition("parallel pair expected".into()));
        }
        let x = &pi1.cod;
        let n = x.size();
        let mut related = vec![false; n * n];
        for r in 0..pi1.dom.size() {
            related[pi1.apply(r) * n + pi2.apply(r)] = true;
        }
        for i in 0..n {
            if !related[i * n + i] {
                return Err(Error::Precondition(format!(
                    "not reflexive: ({0},{0}) missing",
                    x.carrier.label(i)
                )));
            }
            for j in 0..n {
                if related[i * n + j] && !related[j * n + i] {
                    return Err(Error::Precondition(format!(
                        "not symmetric at ({},{})",
                        x.carrier.label(i),
                        x.carrier.label(j)
                    )));
                }
                for k in 0..n {
                    if related[i * n + j] && related[j * n + k] && !related[i * n + k] {
                        return Err(Error::Precondition(format!(
                            "not transitive at ({},{},{})",
                            x.carrier.label(i),
                            x.carrier.label(j),
                            x.carrier.label(k)
                        )));
                    }
                }
            }
        }
        // Quotient carrier: classes named after their least representative.
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if class_of[i] == usize::MAX {
                let c = reps.len();
                for j in i..n {
                    if related[i * n + j] {
                        class_of[j] = c;
                    }
                }
                reps.push(i);
            }
        }
        let q_set = FinSet::new(
            format!("{}/≈", x.carrier.name()),
            reps.iter().map(|&r| format!("[{}]", x.carrier.label(r))).collect(),
        )?;
        let theory = x.theory.clone();
        let qv = theory.quantale();
        let q_fun = SetFun::new(x.carrier.clone(), q_set.clone(), class_of.clone())?;
        let tq_fun = theory.monad().apply_map(&q_fun);
        let t_qset = tq_fun.cod.clone();
        let tt_qset = theory.monad().apply_obj(&t_qset);
        let e_q = SetFun::new(q_set.clone(), t_qset.clone(), theory.monad().unit_table(q_set.size()))?;
        let m_q = SetFun::new(tt_qset, t_qset, theory.monad().mult_table(q_set.size()))?;

        let c0 = compose(
            &compose(&q_fun.graph(qv), &x.structure),
            &tq_fun.graph(qv).transpose(),
        );
        let base = c0.join(&e_q.graph(qv).transpose());
        let mut c = base.clone();
        let budget = 8 + 4 * c.src().size() * c.dst().size();
        let mut done = false;
        for _ in 0..budget {
            // c ∘ c = c · T_ξ c · m_Q° computed directly on matrices.
            let cc = compose(
                &compose(&c, &theory.t_xi_extend(&c)),
                &m_q.graph(qv).transpose(),
            );
            let next = base.join(&cc);
            if next == c {
                done = true;
                break;
            }
            c = next;
        }
        if !done {
            return Err(Error::Invalid("coequaliser closure did not stabilise".into()));
        }
        let q_cat = TCategory::check(theory, q_set, c)?;
        let q_functor = TFunctor::check(x.clone(), q_cat.clone(), class_of)?;
        Ok((q_cat, q_functor))
    }
}

impl fmt::Display for TCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "T-category on {{{}}} over {} / {}",
            self.carrier.labels().join(", "),
            self.theory.name(),
            self.quantale().name()
        )?;
        write!(f, "{}", self.structure)
    }
}

/// Builds the T-category structure on a list of V-valued maps `TX → V`,
/// following the exponential formula: for `𝔭 ∈ TF` and `ψ ∈ F`,
/// `⟨𝔭,ψ⟩ = ⋀ hom(ξ·T(ev)(𝔮), ψ(m_X · Tπ1(𝔮)))` over `𝔮 ∈ T(TX×F)` with
/// `Tπ2(𝔮) = 𝔭`. Applied to all of `V^{TX}` this is the exponential; applied
/// to a (BC-stable) subset it is the full substructure on that subset.
pub fn function_space_category(
    x: &Arc<TCategory>,
    tables: &[Vec<Value>],
    name: &str,
) -> Result<Arc<TCategory>, Error> {
    let q = x.quantale();
    let theory = x.theory();
    let labels: Vec<String> = tables
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().map(|&v| q.label(v)).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let f_set = FinSet::new(name, labels)?;
    let tn = x.t_carrier().size();
    let tp1 = theory.monad().apply_map(&SetFun::proj1(x.t_carrier(), &f_set));
    let tp2 = theory.monad().apply_map(&SetFun::proj2(x.t_carrier(), &f_set));
    let tf_set = tp2.cod.clone();
    let ev_vals: Vec<Value> = (0..tn * f_set.size())
        .map(|p| {
            let (i, j) = unpair_index(f_set.size(), p);
            tables[j][i]
        })
        .collect();
    // Bucket T(TX×F) by the second projection.
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); tf_set.size()];
    for w in 0..tp1.dom.size() {
        buckets[tp2.apply(w)].push(w);
    }
    let m_table = x.m_table();
    let mut structure = VMatrix::bottom(tf_set.clone(), f_set.clone(), q.clone());
    for p in 0..tf_set.size() {
        for (psi, table) in tables.iter().enumerate() {
            let mut acc = q.top();
            for &w in &buckets[p] {
                let ev = theory.xi_after_t(&ev_vals, w);
                acc = q.meet2(acc, q.hom(ev, table[m_table[tp1.apply(w)]]));
            }
            structure.set(p, psi, acc);
        }
    }
    TCategory::check(theory.clone(), f_set, structure)
}

/// A structure-nonexpanding map between T-categories.
#[derive(Debug, Clone)]
pub struct TFunctor {
    pub dom: Arc<TCategory>,
    pub cod: Arc<TCategory>,
    table: Vec<usize>,
    t_table: Vec<usize>,
}

impl PartialEq for TFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.table == other.table
    }
}

impl Eq for TFunctor {}

impl TFunctor {
    /// Validates `a(𝔵,x) ≤ b(Tf 𝔵, f x)` and builds the functor.
    pub fn check(
        dom: Arc<TCategory>,
        cod: Arc<TCategory>,
        table: Vec<usize>,
    ) -> Result<TFunctor, Error> {
        if table.len() != dom.size() || table.iter().any(|&i| i >= cod.size()) {
            return Err(Error::Functor("map table has the wrong shape".into()));
        }
        let q = dom.quantale();
        let t_table = dom.theory().monad().apply_table(&table, cod.size());
        for tx in 0..dom.t_carrier().size() {
            for x in 0..dom.size() {
                let lhs = dom.structure().get(tx, x);
                let rhs = cod.structure().get(t_table[tx], table[x]);
                if !q.leq(lhs, rhs) {
                    return Err(Error::Functor(format!(
                        "not a T-functor at (𝔵={}, x={}): a = {} ≰ b = {}",
                        dom.t_carrier().label(tx),
                        dom.carrier().label(x),
                        q.label(lhs),
                        q.label(rhs)
                    )));
                }
            }
        }
        Ok(TFunctor { dom, cod, table, t_table })
    }

    /// Functor condition for a raw table, without constructing anything.
    pub fn is_functor_table(dom: &TCategory, cod: &TCategory, table: &[usize]) -> bool {
        let q = dom.quantale();
        let t_table = dom.theory().monad().apply_table(table, cod.size());
        for tx in 0..dom.t_carrier().size() {
            for x in 0..dom.size() {
                if !q.leq(dom.structure().get(tx, x), cod.structure().get(t_table[tx], table[x])) {
                    return false;
                }
            }
        }
        true
    }

    pub fn identity(x: Arc<TCategory>) -> TFunctor {
        let table: Vec<usize> = (0..x.size()).collect();
        let t_table = (0..x.t_carrier().size()).collect();
        TFunctor { dom: x.clone(), cod: x, table, t_table }
    }

    pub fn compose(g: &TFunctor, f: &TFunctor) -> TFunctor {
        assert!(f.cod == g.dom, "composing functors with mismatched categories");
        TFunctor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&i| g.table[i]).collect(),
            t_table: f.t_table.iter().map(|&i| g.t_table[i]).collect(),
        }
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn t_table(&self) -> &[usize] {
        &self.t_table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn t_apply(&self, i: usize) -> usize {
        self.t_table[i]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &i in &self.table {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `f_* = b · Tf : X ⇸∘ Y`.
    pub fn star(&self) -> Distributor {
        let b = self.cod.structure();
        let mut m = VMatrix::bottom(
            self.dom.t_carrier().clone(),
            self.cod.carrier().clone(),
            self.dom.quantale().clone(),
        );
        for tx in 0..self.dom.t_carrier().size() {
            for y in 0..self.cod.size() {
                m.set(tx, y, b.get(self.t_table[tx], y));
            }
        }
        Distributor::new_unchecked(self.dom.clone(), self.cod.clone(), m)
    }

    /// `f^* = f° · b : Y ⇸∘ X`.
    pub fn costar(&self) -> Distributor {
        let b = self.cod.structure();
        let mut m = VMatrix::bottom(
            self.cod.t_carrier().clone(),
            self.dom.carrier().clone(),
            self.dom.quantale().clone(),
        );
        for ty in 0..self.cod.t_carrier().size() {
            for x in 0..self.dom.size() {
                m.set(ty, x, b.get(ty, self.table[x]));
            }
        }
        Distributor::new_unchecked(self.cod.clone(), self.dom.clone(), m)
    }

    /// Fully faithful: `f^* ∘ f_* = 1_X^*`.
    pub fn fully_faithful(&self) -> bool {
        Distributor::compose(&self.costar(), &self.star()).matrix()
            == Distributor::unit(&self.dom).matrix()
    }

    /// Dense: `f_* ∘ f^* = 1_Y^*`.
    pub fn dense(&self) -> bool {
        Distributor::compose(&self.star(), &self.costar()).matrix()
            == Distributor::unit(&self.cod).matrix()
    }

    /// The 2-cell order transported from distributors: `f ≤ g ⟺ f^* ≤ g^*`.
    pub fn leq(&self, other: &TFunctor) -> bool {
        assert!(
            self.dom == other.dom && self.cod == other.cod,
            "comparing non-parallel functors"
        );
        self.costar().matrix().leq(other.costar().matrix())
    }

    pub fn equiv(&self, other: &TFunctor) -> bool {
        self.leq(other) && other.leq(self)
    }
}

/// `f ⊣ g`, decided by the distributor criterion `f_* = g^*`.
pub fn adjoint_pair(f: &TFunctor, g: &TFunctor) -> bool {
    assert!(
        f.dom == g.cod && f.cod == g.dom,
        "adjoint candidates must be opposed"
    );
    f.star().matrix() == g.costar().matrix()
}

impl fmt::Display for TFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{}↦{}", self.dom.carrier().label(i), self.cod.carrier().label(j)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributor::Distributor;
    use crate::quantale::Quantale;
    use crate::theory::Theory;

    use crate::instances::{bool2_id, chain_cat, lawvere_id, metric_cat};

    #[test]
    fn preorders_are_bool2_identity_categories() {
        let th = bool2_id();
        let carrier = FinSet::canonical(2);
        // Irreflexive structure fails with a witness naming the point.
        let bad = VMatrix::bottom(carrier.clone(), carrier.clone(), th.quantale().clone());
        let err = TCategory::check(th.clone(), carrier.clone(), bad).unwrap_err();
        assert!(err.to_string().contains("not reflexive"), "{err}");
        // Non-transitive relation fails.
        let entries = vec![
            Value::Idx(1),
            Value::Idx(1),
            Value::Idx(0),
            Value::Idx(0),
            Value::Idx(1),
            Value::Idx(1),
            Value::Idx(0),
            Value::Idx(0),
            Value::Idx(1),
        ];
        let c3 = FinSet::canonical(3);
        let m = VMatrix::new(c3.clone(), c3.clone(), th.quantale().clone(), entries).unwrap();
        let err = TCategory::check(th, c3, m).unwrap_err();
        assert!(err.to_string().contains("not transitive"), "{err}");
    }

    #[test]
    fn metric_axioms_are_zero_diagonal_and_triangle() {
        // Zero diagonal + triangle inequality passes.
        let x = metric_cat(&[&["0", "1"], &["3", "0"]]);
        assert_eq!(x.size(), 2);
        // Triangle violation: d(0,2) > d(0,1) + d(1,2).
        let th = lawvere_id();
        let q = th.quantale();
        let c = FinSet::canonical(3);
        let entries: Vec<Value> = ["0", "1", "9", "1", "0", "1", "9", "1", "0"]
            .iter()
            .map(|s| q.parse_value(s).unwrap())
            .collect();
        let m = VMatrix::new(c.clone(), c.clone(), q.clone(), entries).unwrap();
        assert!(TCategory::check(th, c, m).is_err());
    }

    #[test]
    fn discrete_is_always_a_category_and_initial() {
        let q = Quantale::bool2();
        for th in [
            bool2_id(),
            Theory::builtin("ultrafilter_principal", q.clone()).unwrap(),
        ] {
            for n in 0..=3 {
                let d = TCategory::discrete(&th, &FinSet::canonical(n)).unwrap();
                // Every map out of a discrete category is a T-functor.
                let target = TCategory::v_as_category(&th).unwrap();
                for t in crate::theory::all_tables(n, target.size()) {
                    assert!(TFunctor::is_functor_table(&d, &target, &t));
                }
            }
        }
    }

    #[test]
    fn generator_and_free_em_at_identity_theory() {
        let th = bool2_id();
        let g = TCategory::generator(&th).unwrap();
        assert_eq!(g.size(), 1);
        assert_eq!(g.structure().get(0, 0), Value::Idx(1));
        let s = FinSet::canonical(2);
        let free = TCategory::free_em(&th, &s).unwrap();
        let disc = TCategory::discrete(&th, &s).unwrap();
        assert_eq!(free.structure().entries(), disc.structure().entries());
    }

    #[test]
    fn v_as_category_bool2_is_the_two_chain() {
        let th = bool2_id();
        let v = TCategory::v_as_category(&th).unwrap();
        // hom table of bool2: ⊥ ≤ ⊤ as a 2-chain.
        assert_eq!(v.structure().get(0, 0), Value::Idx(1));
        assert_eq!(v.structure().get(0, 1), Value::Idx(1));
        assert_eq!(v.structure().get(1, 0), Value::Idx(0));
        assert_eq!(v.structure().get(1, 1), Value::Idx(1));
        assert!(v.separated());
    }

    #[test]
    fn functor_checks_monotone_and_lipschitz() {
        let th = bool2_id();
        let chain = chain_cat(&th, 2);
        assert!(TFunctor::is_functor_table(&chain, &chain, &[0, 0]));
        assert!(TFunctor::is_functor_table(&chain, &chain, &[0, 1]));
        assert!(!TFunctor::is_functor_table(&chain, &chain, &[1, 0]));
        // Lawvere: 1-Lipschitz maps pass, expansive ones fail.
        let x = metric_cat(&[&["0", "1"], &["1", "0"]]);
        let y = metric_cat(&[&["0", "1/2"], &["1/2", "0"]]);
        assert!(TFunctor::is_functor_table(&x, &y, &[0, 1]));
        assert!(!TFunctor::is_functor_table(&y, &x, &[0, 1]));
    }

    #[test]
    fn star_costar_adjunction_for_all_small_functors() {
        let th = bool2_id();
        let cats = crate::enumerate::all_categories(&th, 3).unwrap();
        for x in &cats {
            for y in &cats {
                for f in crate::enumerate::all_functors(x, y) {
                    let star = f.star();
                    let costar = f.costar();
                    // Unit: 1_X^* ≤ f^* ∘ f_*; counit: f_* ∘ f^* ≤ 1_Y^*.
                    let unit = Distributor::compose(&costar, &star);
                    assert!(Distributor::unit(x).matrix().leq(unit.matrix()));
                    let counit = Distributor::compose(&star, &costar);
                    assert!(counit.matrix().leq(Distributor::unit(y).matrix()));
                }
            }
        }
    }

    #[test]
    fn identity_functor_star_is_structure() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let id = TFunctor::identity(x.clone());
        assert_eq!(id.star().matrix(), x.structure());
        assert_eq!(id.costar().matrix(), x.structure());
        assert!(id.fully_faithful());
        assert!(id.dense());
    }

    #[test]
    fn point_inclusion_ff_not_dense() {
        let th = bool2_id();
        let chain = chain_cat(&th, 2);
        let (sub, incl) = TCategory::full_subcategory(&chain, &[0]).unwrap();
        assert_eq!(sub.size(), 1);
        assert!(incl.fully_faithful());
        assert!(!incl.dense());
        // Pointwise characterisation of full faithfulness.
        for tx in 0..sub.t_carrier().size() {
            for x in 0..sub.size() {
                assert_eq!(
                    sub.structure().get(tx, x),
                    chain.structure().get(incl.t_apply(tx), incl.apply(x))
                );
            }
        }
    }

    #[test]
    fn functor_order_and_separation() {
        let th = bool2_id();
        let chain = chain_cat(&th, 2);
        let bot = TFunctor::check(chain.clone(), chain.clone(), vec![0, 0]).unwrap();
        let top = TFunctor::check(chain.clone(), chain.clone(), vec![1, 1]).unwrap();
        assert!(bot.leq(&top));
        assert!(!top.leq(&bot));
        assert!(bot.leq(&bot));
        // f ≤ g ⟺ g_* ≤ f_*.
        assert!(top.star().matrix().leq(bot.star().matrix()));
        assert!(chain.separated());
        // Indiscrete 2-point preorder is not separated.
        let q = th.quantale();
        let c2 = FinSet::canonical(2);
        let indiscrete = TCategory::check(
            th.clone(),
            c2.clone(),
            VMatrix::constant(c2.clone(), c2, q.clone(), q.unit()),
        )
        .unwrap();
        assert!(!indiscrete.separated());
    }

    #[test]
    fn adjoint_pair_detects_galois_maps() {
        let th = bool2_id();
        let chain = chain_cat(&th, 2);
        let id = TFunctor::identity(chain.clone());
        assert!(adjoint_pair(&id, &id));
        let bot = TFunctor::check(chain.clone(), chain.clone(), vec![0, 0]).unwrap();
        let top = TFunctor::check(chain.clone(), chain.clone(), vec![1, 1]).unwrap();
        // Constant-bottom ⊣ constant-top fails; but on the chain the pair
        // (bot ⊣ top)? b_*(x,y) = a(bot x, y): check against the criterion.
        assert_eq!(adjoint_pair(&bot, &top), bot.star().matrix() == top.costar().matrix());
    }

    #[test]
    fn tensor_is_product_preorder_with_neutral_unit() {
        let th = bool2_id();
        let chain = chain_cat(&th, 2);
        let prod = TCategory::tensor(&chain, &chain).unwrap();
        // Product preorder: (i,j) ≤ (i',j') iff both coordinates compare.
        for p in 0..4 {
            for r in 0..4 {
                let (i, j) = unpair_index(2, p);
                let (i2, j2) = unpair_index(2, r);
                let expect = i <= i2 && j <= j2;
                assert_eq!(prod.structure().get(p, r) == Value::Idx(1), expect);
            }
        }
        // X ⊗ E ≅ X via the canonical bijection.
        let e = TCategory::neutral(&th).unwrap();
        for n in 1..=3 {
            let x = chain_cat(&th, n);
            let xe = TCategory::tensor(&x, &e).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(xe.structure().get(i, j), x.structure().get(i, j));
                }
            }
        }
    }

    #[test]
    fn exponential_identity_theory_reduces_to_pointwise_hom() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let (exp, tables) = TCategory::exponential_v(&x, 256).unwrap();
        let q = th.quantale();
        assert_eq!(exp.size(), 4);
        for (i, phi) in tables.iter().enumerate() {
            for (j, psi) in tables.iter().enumerate() {
                let direct = q.meet((0..2).map(|p| q.hom(phi[p], psi[p])));
                assert_eq!(exp.structure().get(i, j), direct);
            }
        }
        assert!(exp.separated());
        // Exponential over a 1-point discrete base is the 2-chain of subsets.
        let one = TCategory::discrete(&th, &FinSet::canonical(1)).unwrap();
        let (exp1, _) = TCategory::exponential_v(&one, 256).unwrap();
        assert_eq!(exp1.size(), 2);
        assert!(exp1.structure().get(0, 1) == Value::Idx(1));
        assert!(exp1.structure().get(1, 0) == Value::Idx(0));
    }

    #[test]
    fn sam_functors_are_trivial_at_identity_theory() {
        let th = bool2_id();
        let x = chain_cat(&th, 3);
        let s = TCategory::forget_to_v(&x).unwrap();
        assert_eq!(s.structure().entries(), x.structure().entries());
        let m = TCategory::functor_m(&x).unwrap();
        assert_eq!(m.structure().entries(), x.structure().entries());
        let back = TCategory::lift_a(&th, &s).unwrap();
        assert_eq!(back.structure().entries(), x.structure().entries());
        let op = TCategory::dual_op(&x).unwrap();
        assert_eq!(op.structure().entries(), x.structure().transpose().entries());
    }

    #[test]
    fn s_after_a_is_identity_on_small_v_categories() {
        // For each enabled theory, A followed by S returns the original
        // V-category structure at sizes ≤ 3.
        let q = Quantale::bool2();
        for th in [bool2_id(), Theory::builtin("ultrafilter_principal", q).unwrap()] {
            let idth = Theory::identity(th.quantale().clone());
            for vcat in crate::enumerate::all_categories(&idth, 3).unwrap() {
                let lifted = TCategory::lift_a(&th, &vcat).unwrap();
                let back = TCategory::forget_to_v(&lifted).unwrap();
                assert_eq!(back.structure().entries(), vcat.structure().entries());
            }
        }
    }

    #[test]
    fn em_to_cat_validates_algebra_laws() {
        let th = bool2_id();
        let c2 = FinSet::canonical(2);
        // Identity theory: α must be the identity.
        let cat = TCategory::em_to_cat(&th, &c2, &[0, 1]).unwrap();
        let disc = TCategory::discrete(&th, &c2).unwrap();
        assert_eq!(cat.structure().entries(), disc.structure().entries());
        assert!(TCategory::em_to_cat(&th, &c2, &[0, 0]).is_err());
        // Ultrafilter: the canonical bijection inverse is forced.
        let uth = Theory::builtin("ultrafilter_principal", Quantale::bool2()).unwrap();
        assert!(TCategory::em_to_cat(&uth, &c2, &[0, 1]).is_ok());
        assert!(TCategory::em_to_cat(&uth, &c2, &[1, 0]).is_err());
    }

    #[test]
    fn coequalizer_diagonal_and_indiscrete() {
        let th = bool2_id();
        let q = th.quantale();
        // Diagonal relation: Q ≅ X.
        let chain = chain_cat(&th, 2);
        let diag_carrier = FinSet::new("R", vec!["(x0,x0)".into(), "(x1,x1)".into()]).unwrap();
        let r = TCategory::discrete(&th, &diag_carrier).unwrap();
        let p1 = TFunctor::check(r.clone(), chain.clone(), vec![0, 1]).unwrap();
        let (qc, qf) = TCategory::coequalizer(&p1, &p1).unwrap();
        assert_eq!(qc.size(), 2);
        assert_eq!(qc.structure().entries(), chain.structure().entries());
        assert!(qf.is_surjective());
        // Collapsing the 2-point indiscrete preorder gives the point.
        let c2 = FinSet::canonical(2);
        let indiscrete = TCategory::check(
            th.clone(),
            c2.clone(),
            VMatrix::constant(c2.clone(), c2, q.clone(), q.unit()),
        )
        .unwrap();
        let full = FinSet::new(
            "R",
            vec!["(0,0)".into(), "(0,1)".into(), "(1,0)".into(), "(1,1)".into()],
        )
        .unwrap();
        let rfull = TCategory::discrete(&th, &full).unwrap();
        let pi1 = TFunctor::check(rfull.clone(), indiscrete.clone(), vec![0, 0, 1, 1]).unwrap();
        let pi2 = TFunctor::check(rfull.clone(), indiscrete.clone(), vec![0, 1, 0, 1]).unwrap();
        let (qc, qf) = TCategory::coequalizer(&pi1, &pi2).unwrap();
        assert_eq!(qc.size(), 1);
        assert!(qf.is_surjective());
        assert!(qf.dense());
        // Couniversality: functors out of X coequalising the pair factor
        // uniquely through Q.
        let targets = crate::enumerate::all_categories(&th, 2).unwrap();
        for w in &targets {
            for h in crate::enumerate::all_functors(&indiscrete, w) {
                if TFunctor::compose(&h, &pi1) != TFunctor::compose(&h, &pi2) {
                    continue;
                }
                let mut found = 0;
                for t in crate::theory::all_tables(qc.size(), w.size()) {
                    if !TFunctor::is_functor_table(&qc, w, &t) {
                        continue;
                    }
                    let cand = TFunctor::check(qc.clone(), w.clone(), t).unwrap();
                    if TFunctor::compose(&cand, &qf) == h {
                        found += 1;
                    }
                }
                assert_eq!(found, 1, "unique factorisation through the coequaliser");
            }
        }
        // Non-equivalence-relations are rejected.
        let half = FinSet::new("R", vec!["(0,1)".into()]).unwrap();
        let rbad = TCategory::discrete(&th, &half).unwrap();
        let b1 = TFunctor::check(rbad.clone(), indiscrete.clone(), vec![0]).unwrap();
        let b2 = TFunctor::check(rbad, indiscrete, vec![1]).unwrap();
        assert!(TCategory::coequalizer(&b1, &b2).is_err());
    }

    #[test]
    fn functoriality_of_star_on_composites() {
        let th = bool2_id();
        let cats = crate::enumerate::all_categories(&th, 2).unwrap();
        for x in &cats {
            for y in &cats {
                for z in &cats {
                    for f in crate::enumerate::all_functors(x, y) {
                        for g in crate::enumerate::all_functors(y, z) {
                            let gf = TFunctor::compose(&g, &f);
                            let lhs = gf.star();
                            let rhs = Distributor::compose(&g.star(), &f.star());
                            assert_eq!(lhs.matrix(), rhs.matrix());
                            let lhs = gf.costar();
                            let rhs = Distributor::compose(&f.costar(), &g.costar());
                            assert_eq!(lhs.matrix(), rhs.matrix());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn structures_are_kleisli_idempotent() {
        let th = bool2_id();
        for x in crate::enumerate::all_categories(&th, 2).unwrap() {
            let a = Distributor::unit(&x);
            let aa = Distributor::compose(&a, &a);
            assert_eq!(aa.matrix(), a.matrix());
        }
    }
}
