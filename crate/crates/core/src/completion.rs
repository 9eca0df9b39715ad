//! Presheaf categories `PX` and `ΦX`, Yoneda maps, suprema functors,
//! Φ-weighted colimits, the four-way cocompleteness/injectivity audit, the
//! Kock-Zöberlein adjunction chain, split forks, and the Kan-style
//! equivalence.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::distributor::Distributor;
use crate::enumerate::{all_categories, all_maps, all_value_tables};
use crate::phiclass::PhiClass;
use crate::quantale::Value;
use crate::report::{AuditEntry, AuditReport};
use crate::tcategory::{function_space_category, TCategory, TFunctor};
use crate::theory::Theory;
use crate::vmatrix::{FinSet, VMatrix};
use crate::{Caps, Error};

/// The T-category `ΦX` of Φ-presheaves on `X`: the maps `TX → V` that are
/// distributors `X ⇸∘ G` and members of Φ, carrying the substructure of the
/// exponential. Elements are kept in lexicographic value-table order.
#[derive(Debug, Clone)]
pub struct PresheafCategory {
    pub base: Arc<TCategory>,
    pub phi: PhiClass,
    pub cat: Arc<TCategory>,
    pub tables: Vec<Vec<Value>>,
    pub weights: Vec<Distributor>,
    generator: Arc<TCategory>,
}

impl PresheafCategory {
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn element_index(&self, table: &[Value]) -> Option<usize> {
        self.tables.iter().position(|t| t == table)
    }

    pub fn generator(&self) -> &Arc<TCategory> {
        &self.generator
    }

    /// The weight `ψ` of an element as a distributor `X ⇸∘ G`.
    pub fn weight(&self, idx: usize) -> &Distributor {
        &self.weights[idx]
    }
}

/// Enumerates `ΦX = {ψ ∈ PX | ψ ∈ Φ}` with the restricted exponential
/// structure. Needs a finite quantale and `|V|^{|TX|}` under the presheaf
/// cap.
pub fn presheaf_cat(
    x: &Arc<TCategory>,
    phi: PhiClass,
    caps: &Caps,
) -> Result<PresheafCategory, Error> {
    let q = x.quantale();
    if !q.is_finite() {
        return Err(Error::InfiniteQuantale(q.name().to_string()));
    }
    let tn = x.t_carrier().size();
    let total = q
        .size()
        .expect("finite")
        .checked_pow(tn as u32)
        .filter(|&c| c <= caps.presheaf_space);
    if total.is_none() {
        return Err(Error::CapExceeded(format!(
            "|V|^|TX| exceeds the presheaf-space cap {}",
            caps.presheaf_space
        )));
    }
    let generator = TCategory::generator(x.theory())?;
    let mut tables = Vec::new();
    let mut weights = Vec::new();
    for table in all_value_tables(q, tn) {
        let matrix = VMatrix::new(
            x.t_carrier().clone(),
            generator.carrier().clone(),
            q.clone(),
            table.clone(),
        )?;
        let Ok(dist) = Distributor::check(x.clone(), generator.clone(), matrix) else {
            continue;
        };
        if phi.member(&dist, caps)? {
            tables.push(table);
            weights.push(dist);
        }
    }
    let name = format!("{}[{}]", phi.name(), x.carrier().name());
    let cat = function_space_category(x, &tables, &name)?;
    Ok(PresheafCategory { base: x.clone(), phi, cat, tables, weights, generator })
}

/// The Yoneda functor `x ↦ a(−,x)` into `PX` (Φ = all).
pub fn yoneda(x: &Arc<TCategory>, caps: &Caps) -> Result<(TFunctor, PresheafCategory), Error> {
    yoneda_phi(x, PhiClass::All, caps)
}

/// The restricted Yoneda functor into `ΦX`; every column `a(−,x)` must be a
/// Φ-member (guaranteed by (Ax 1) for honest classes).
pub fn yoneda_phi(
    x: &Arc<TCategory>,
    phi: PhiClass,
    caps: &Caps,
) -> Result<(TFunctor, PresheafCategory), Error> {
    let p = presheaf_cat(x, phi, caps)?;
    let mut table = Vec::with_capacity(x.size());
    for i in 0..x.size() {
        let col = x.yoneda_column(i);
        let idx = p.element_index(&col).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "Yoneda column of `{}` is not a Φ-presheaf; (Ax 1) fails for Φ = {}",
                x.carrier().label(i),
                phi.name()
            ))
        })?;
        table.push(idx);
    }
    let y = TFunctor::check(x.clone(), p.cat.clone(), table)?;
    Ok((y, p))
}

/// `Φf: ΦX → ΦY`, `ψ ↦ ψ ∘ f^*`; returns the functor with both presheaf
/// categories.
pub fn phi_functor(
    f: &TFunctor,
    phi: PhiClass,
    caps: &Caps,
) -> Result<(TFunctor, PresheafCategory, PresheafCategory), Error> {
    let px = presheaf_cat(&f.dom, phi, caps)?;
    let py = presheaf_cat(&f.cod, phi, caps)?;
    let functor = phi_functor_between(f, &px, &py)?;
    Ok((functor, px, py))
}

pub(crate) fn phi_functor_between(
    f: &TFunctor,
    px: &PresheafCategory,
    py: &PresheafCategory,
) -> Result<TFunctor, Error> {
    let costar = f.costar();
    let mut table = Vec::with_capacity(px.len());
    for psi in &px.weights {
        let image = Distributor::compose(psi, &costar);
        let row = image.matrix().column(0);
        let idx = py.element_index(&row).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "Φf image left ΦY; (Ax 1)/(Ax 2) closure fails for Φ = {}",
                px.phi.name()
            ))
        })?;
        table.push(idx);
    }
    TFunctor::check(px.cat.clone(), py.cat.clone(), table)
}

/// `f⁻¹: ΦY → ΦX`, `ψ ↦ ψ ∘ f_*`; defined when `f` is Φ-dense.
pub fn inverse_image(
    f: &TFunctor,
    phi: PhiClass,
    caps: &Caps,
) -> Result<(TFunctor, PresheafCategory, PresheafCategory), Error> {
    if !phi.dense(f, caps)? {
        return Err(Error::Precondition(format!(
            "inverse image needs a {}-dense functor",
            phi.name()
        )));
    }
    let px = presheaf_cat(&f.dom, phi, caps)?;
    let py = presheaf_cat(&f.cod, phi, caps)?;
    let functor = inverse_image_between(f, &px, &py)?;
    Ok((functor, px, py))
}

pub(crate) fn inverse_image_between(
    f: &TFunctor,
    px: &PresheafCategory,
    py: &PresheafCategory,
) -> Result<TFunctor, Error> {
    let star = f.star();
    let mut table = Vec::with_capacity(py.len());
    for psi in &py.weights {
        let image = Distributor::compose(psi, &star);
        let row = image.matrix().column(0);
        let idx = px.element_index(&row).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "f⁻¹ image left ΦX; (Ax 2) closure fails for Φ = {}",
                px.phi.name()
            ))
        })?;
        table.push(idx);
    }
    TFunctor::check(py.cat.clone(), px.cat.clone(), table)
}

/// The Φ-weighted colimit of `h` by the weight `φ: Y ⇸∘ Z`: the functor
/// `g: Z → X` with `g_* = h_* ⟜ φ`, canonicalised by the element order, or
/// `None` when no functor realises the extension.
pub fn colimit(weight: &Distributor, along: &TFunctor) -> Result<Option<TFunctor>, Error> {
    if weight.dom() != &along.dom {
        return Err(Error::Precondition(
            "weight and diagram must share their domain category".into(),
        ));
    }
    let delta = Distributor::extension(&along.star(), weight);
    let z = weight.cod();
    let x = &along.cod;
    for table in all_maps(z.size(), x.size()) {
        if !TFunctor::is_functor_table(z, x, &table) {
            continue;
        }
        let g = TFunctor::check(z.clone(), x.clone(), table)?;
        if g.star().matrix() == delta.matrix() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Outcome of the supremum search.
#[derive(Debug, Clone)]
pub enum SupOutcome {
    /// A left adjoint `Sup ⊣ y` (unique up to ≅, canonical tie-break).
    Present(TFunctor),
    /// No left adjoint; `certificate` indexes a presheaf without a colimit
    /// when one exists.
    Absent { certificate: Option<usize> },
}

/// The assembled supremum search: the presheaf category, its Yoneda functor,
/// the pointwise colimits, and the adjoint verdict.
#[derive(Debug, Clone)]
pub struct SupSearch {
    pub presheaves: PresheafCategory,
    pub yoneda: TFunctor,
    /// For each `ψ ∈ ΦX`, the canonical colimit point when it exists.
    pub colimit_points: Vec<Option<usize>>,
    pub outcome: SupOutcome,
}

/// Searches for `Sup_X^Φ: ΦX → X`, the left adjoint of the Yoneda functor.
///
/// Each `ψ ∈ ΦX` pins its value up to equivalence (`Sup ψ` must be a colimit
/// point of `ψ`), so the search assembles pointwise colimits and verifies
/// functoriality plus the adjunction `Sup_* = y^*`; absence of some colimit
/// certifies absence of the adjoint.
pub fn sup_phi(x: &Arc<TCategory>, phi: PhiClass, caps: &Caps) -> Result<SupSearch, Error> {
    let (y, p) = yoneda_phi(x, phi, caps)?;
    let mut candidate_lists: Vec<Vec<usize>> = Vec::with_capacity(p.len());
    let mut colimit_points = Vec::with_capacity(p.len());
    let mut certificate = None;
    for (idx, psi) in p.weights.iter().enumerate() {
        let delta = Distributor::extension(&Distributor::unit(x), psi);
        let mut points = Vec::new();
        for point in 0..x.size() {
            let g = TFunctor::check(p.generator().clone(), x.clone(), vec![point])?;
            if g.star().matrix() == delta.matrix() {
                points.push(point);
            }
        }
        colimit_points.push(points.first().copied());
        if points.is_empty() {
            // Keep the canonically last colimit-less presheaf as the
            // certificate (for an antichain that is the full presheaf, the
            // missing join one expects to see reported).
            certificate = Some(idx);
        }
        candidate_lists.push(points);
    }
    if certificate.is_some() {
        return Ok(SupSearch {
            presheaves: p,
            yoneda: y,
            colimit_points,
            outcome: SupOutcome::Absent { certificate },
        });
    }
    // All colimits exist; assemble a functor choice (candidates beyond the
    // canonical one only arise on non-separated carriers).
    let sup = assemble_adjoint(&p, &y, x, &candidate_lists);
    match sup {
        Some(s) => Ok(SupSearch {
            presheaves: p,
            yoneda: y,
            colimit_points,
            outcome: SupOutcome::Present(s),
        }),
        None => Ok(SupSearch {
            presheaves: p,
            yoneda: y,
            colimit_points,
            outcome: SupOutcome::Absent { certificate: None },
        }),
    }
}

fn assemble_adjoint(
    p: &PresheafCategory,
    y: &TFunctor,
    x: &Arc<TCategory>,
    candidates: &[Vec<usize>],
) -> Option<TFunctor> {
    let ystar = y.costar();
    let mut table = vec![0usize; p.len()];
    fn rec(
        p: &PresheafCategory,
        x: &Arc<TCategory>,
        candidates: &[Vec<usize>],
        ystar: &Distributor,
        table: &mut Vec<usize>,
        pos: usize,
        budget: &mut usize,
    ) -> Option<TFunctor> {
        if *budget == 0 {
            return None;
        }
        if pos == candidates.len() {
            *budget -= 1;
            if !TFunctor::is_functor_table(&p.cat, x, table) {
                return None;
            }
            let s = TFunctor::check(p.cat.clone(), x.clone(), table.clone()).ok()?;
            if s.star().matrix() == ystar.matrix() {
                return Some(s);
            }
            return None;
        }
        for &c in &candidates[pos] {
            table[pos] = c;
            if let Some(s) = rec(p, x, candidates, ystar, table, pos + 1, budget) {
                return Some(s);
            }
        }
        None
    }
    let mut budget = 1 << 16;
    rec(p, x, candidates, &ystar, &mut table, 0, &mut budget)
}

/// Backtracking search for a plain left inverse `s·y ≅ 1_X` among functors
/// `ΦX → X`; complete over the functor space, pruned by partial
/// monotonicity and the forced values on the Yoneda image.
fn search_left_inverse(
    p: &PresheafCategory,
    y: &TFunctor,
    x: &Arc<TCategory>,
) -> Option<Vec<usize>> {
    let n = p.len();
    let q = x.quantale();
    // Allowed values per element: Yoneda images are pinned to the equivalence
    // class of their point; everything else is free.
    let mut allowed: Vec<Vec<usize>> = vec![(0..x.size()).collect(); n];
    for point in 0..x.size() {
        let img = y.apply(point);
        let class: Vec<usize> =
            (0..x.size()).filter(|&z| x.points_equivalent(z, point)).collect();
        allowed[img] = class;
    }
    // Assign pinned positions first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (allowed[i].len(), i));
    let monad = x.theory().monad();
    let mut partial: Vec<Option<usize>> = vec![None; n];
    fn consistent(
        p: &PresheafCategory,
        x: &Arc<TCategory>,
        q: &Arc<crate::quantale::Quantale>,
        monad: &crate::theory::Monad,
        partial: &[Option<usize>],
    ) -> bool {
        let t_partial = monad.apply_partial(partial, x.size());
        for (te, tv) in t_partial.iter().enumerate() {
            let Some(tv) = tv else { continue };
            for (e, v) in partial.iter().enumerate() {
                let Some(v) = v else { continue };
                if !q.leq(p.cat.structure().get(te, e), x.structure().get(*tv, *v)) {
                    return false;
                }
            }
        }
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: &PresheafCategory,
        x: &Arc<TCategory>,
        q: &Arc<crate::quantale::Quantale>,
        monad: &crate::theory::Monad,
        allowed: &[Vec<usize>],
        order: &[usize],
        partial: &mut Vec<Option<usize>>,
        depth: usize,
        budget: &mut usize,
    ) -> Option<Vec<usize>> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if depth == order.len() {
            let table: Vec<usize> = partial.iter().map(|v| v.unwrap()).collect();
            if TFunctor::is_functor_table(&p.cat, x, &table) {
                return Some(table);
            }
            return None;
        }
        let pos = order[depth];
        for &c in &allowed[pos] {
            partial[pos] = Some(c);
            if consistent(p, x, q, monad, partial) {
                if let Some(t) =
                    rec(p, x, q, monad, allowed, order, partial, depth + 1, budget)
                {
                    return Some(t);
                }
            }
            partial[pos] = None;
        }
        None
    }
    let mut budget = 1 << 22;
    rec(p, x, q, monad, &allowed, &order, &mut partial, 0, &mut budget)
}

/// The four-way verdict of the injectivity/cocompleteness audit.
#[derive(Debug, Clone)]
pub struct CocompleteRecord {
    /// (i) Φ-injectivity, bounded search over fully faithful Φ-dense maps.
    pub injective: bool,
    /// (ii) the Yoneda functor has a left inverse.
    pub left_inverse: bool,
    /// (iii) the Yoneda functor has a left adjoint.
    pub left_adjoint: bool,
    /// (iv) every Φ-presheaf has a colimit.
    pub cocomplete: bool,
    pub injective_witness: Option<String>,
    /// Value table of a colimit-less presheaf, when one exists.
    pub certificate: Option<Vec<Value>>,
    /// The supremum map as `(element, point)` label pairs, when present.
    pub sup_table: Option<Vec<(String, String)>>,
}

impl CocompleteRecord {
    /// The flagship property: all four flags agree.
    pub fn agreement(&self) -> bool {
        self.injective == self.left_inverse
            && self.left_inverse == self.left_adjoint
            && self.left_adjoint == self.cocomplete
    }

    pub fn verdict(&self) -> bool {
        self.cocomplete
    }
}

/// Runs the four-flag audit with a freshly built injectivity universe.
pub fn cocomplete_check(
    x: &Arc<TCategory>,
    phi: PhiClass,
    caps: &Caps,
) -> Result<CocompleteRecord, Error> {
    let universe = InjectivityUniverse::build(x.theory(), phi, caps)?;
    cocomplete_check_with(x, phi, caps, &universe)
}

/// Runs the four-flag audit against a shared injectivity universe (the
/// expensive part of flag (i) is independent of `X`).
pub fn cocomplete_check_with(
    x: &Arc<TCategory>,
    phi: PhiClass,
    caps: &Caps,
    universe: &InjectivityUniverse,
) -> Result<CocompleteRecord, Error> {
    let search = sup_phi(x, phi, caps)?;
    let cocomplete = search.colimit_points.iter().all(|c| c.is_some());
    let certificate = search
        .colimit_points
        .iter()
        .rposition(|c| c.is_none())
        .map(|i| search.presheaves.tables[i].clone());
    let (left_adjoint, sup_table) = match &search.outcome {
        SupOutcome::Present(s) => {
            let rows = search
                .presheaves
                .tables
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    (
                        search.presheaves.cat.carrier().label(i).to_string(),
                        x.carrier().label(s.apply(i)).to_string(),
                    )
                })
                .collect();
            (true, Some(rows))
        }
        SupOutcome::Absent { .. } => (false, None),
    };
    let left_inverse = match &search.outcome {
        SupOutcome::Present(s) => {
            let sy = TFunctor::compose(s, &search.yoneda);
            sy.equiv(&TFunctor::identity(x.clone()))
                || search_left_inverse(&search.presheaves, &search.yoneda, x).is_some()
        }
        SupOutcome::Absent { .. } => {
            search_left_inverse(&search.presheaves, &search.yoneda, x).is_some()
        }
    };
    let injective_witness = universe.check(x, caps)?;
    Ok(CocompleteRecord {
        injective: injective_witness.is_none(),
        left_inverse,
        left_adjoint,
        cocomplete,
        injective_witness,
        certificate,
        sup_table,
    })
}

/// The (X-independent) universe of fully faithful Φ-dense maps `i: A → B`
/// with `|A|,|B|` under the injectivity cap, deduplicated up to isomorphism.
/// `A` is the pullback of `B` along `i`, which is exactly full
/// faithfulness.
pub struct InjectivityUniverse {
    phi: PhiClass,
    triples: Vec<(Arc<TCategory>, Arc<TCategory>, TFunctor)>,
}

impl InjectivityUniverse {
    pub fn build(theory: &Arc<Theory>, phi: PhiClass, caps: &Caps) -> Result<Self, Error> {
        let q = theory.quantale();
        if !q.is_finite() {
            return Err(Error::InfiniteQuantale(q.name().to_string()));
        }
        let cap = caps.injective_b;
        let all = all_categories(theory, cap)?;
        // Representatives of structure-isomorphism classes.
        let mut reps: Vec<Arc<TCategory>> = Vec::new();
        let mut seen = HashSet::new();
        for cat in all {
            if seen.insert(canonical_category_key(&cat)) {
                reps.push(cat);
            }
        }
        let mut triples = Vec::new();
        let mut seen_triples = HashSet::new();
        for b in &reps {
            for a_size in 0..=cap {
                let a_carrier = FinSet::canonical(a_size);
                for i_table in all_maps(a_size, b.size()) {
                    // Pullback structure: a(𝔞,x) = b(Ti 𝔞, i x).
                    let ti = theory.monad().apply_table(&i_table, b.size());
                    let ta = theory.monad().apply_obj(&a_carrier);
                    let mut structure =
                        VMatrix::bottom(ta.clone(), a_carrier.clone(), q.clone());
                    for te in 0..ta.size() {
                        for e in 0..a_size {
                            structure.set(te, e, b.structure().get(ti[te], i_table[e]));
                        }
                    }
                    let Ok(a_cat) = TCategory::check(
                        theory.clone(),
                        a_carrier.clone(),
                        structure,
                    ) else {
                        continue;
                    };
                    let Ok(i) = TFunctor::check(a_cat.clone(), b.clone(), i_table.clone()) else {
                        continue;
                    };
                    if !phi.dense(&i, caps)? {
                        continue;
                    }
                    if seen_triples.insert(canonical_triple_key(&a_cat, b, &i_table)) {
                        triples.push((a_cat, b.clone(), i));
                    }
                }
            }
        }
        Ok(InjectivityUniverse { phi, triples })
    }

    pub fn class(&self) -> PhiClass {
        self.phi
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    /// Bounded injectivity: for every triple `(A, B, i)` and functor
    /// `f: A → X`, some `g: B → X` must satisfy `g·i ≅ f`. Returns a witness
    /// description on failure, `None` when no counterexample exists within
    /// the caps.
    pub fn check(&self, x: &Arc<TCategory>, _caps: &Caps) -> Result<Option<String>, Error> {
        let mut functor_memo: HashMap<Vec<u8>, Arc<Vec<Vec<usize>>>> = HashMap::new();
        let mut enumerate = |dom: &Arc<TCategory>| -> Arc<Vec<Vec<usize>>> {
            let key = cat_bytes(dom);
            functor_memo
                .entry(key)
                .or_insert_with(|| {
                    Arc::new(
                        all_maps(dom.size(), x.size())
                            .into_iter()
                            .filter(|t| TFunctor::is_functor_table(dom, x, t))
                            .collect(),
                    )
                })
                .clone()
        };
        for (a, b, i) in &self.triples {
            let fun_b = enumerate(b);
            let fun_a = enumerate(a);
            if fun_a.is_empty() {
                continue;
            }
            let mut extendable: HashSet<Vec<u8>> = HashSet::with_capacity(fun_b.len());
            for g in fun_b.iter() {
                let gi: Vec<usize> = i.table().iter().map(|&t| g[t]).collect();
                extendable.insert(star_bytes(a, x, &gi));
            }
            for f in fun_a.iter() {
                if !extendable.contains(&star_bytes(a, x, f)) {
                    return Ok(Some(format!(
                        "no extension of f = {:?} : A → X along i = {:?} : A ↪ B (|A|={}, |B|={})",
                        f,
                        i.table(),
                        a.size(),
                        b.size()
                    )));
                }
            }
        }
        Ok(None)
    }
}

/// Structure bytes of a category (carrier is canonical, so this is a full
/// key for sameness of enumerated categories).
fn cat_bytes(cat: &TCategory) -> Vec<u8> {
    let mut out = vec![cat.size() as u8];
    for v in cat.structure().entries() {
        out.push(value_byte(*v));
    }
    out
}

fn value_byte(v: Value) -> u8 {
    match v {
        Value::Idx(i) => u8::try_from(i).expect("finite carriers stay under 256"),
        _ => panic!("finite quantale expected in byte encodings"),
    }
}

/// Bytes of `f_* = b·Tf` for a raw table `f: A → X`.
fn star_bytes(a: &TCategory, x: &TCategory, table: &[usize]) -> Vec<u8> {
    let tf = a.theory().monad().apply_table(table, x.size());
    let mut out = Vec::with_capacity(tf.len() * x.size());
    for &ti in &tf {
        for y in 0..x.size() {
            out.push(value_byte(x.structure().get(ti, y)));
        }
    }
    out
}

/// Canonical key of a category structure under carrier relabelling.
fn canonical_category_key(cat: &TCategory) -> Vec<u8> {
    let n = cat.size();
    let mut best: Option<Vec<u8>> = None;
    for perm in permutations(n) {
        let bytes = permuted_cat_bytes(cat, &perm);
        if best.as_ref().is_none_or(|b| bytes < *b) {
            best = Some(bytes);
        }
    }
    best.unwrap_or_default()
}

fn permuted_cat_bytes(cat: &TCategory, perm: &[usize]) -> Vec<u8> {
    // perm maps old index -> new index; structure entry at (T(new), new)
    // reads from the inverse images.
    let n = cat.size();
    let monad = cat.theory().monad();
    let mut inv = vec![0usize; n];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    let t_inv = monad.apply_table(&inv, n);
    let tn = cat.t_carrier().size();
    let mut out = Vec::with_capacity(tn * n + 1);
    out.push(n as u8);
    for te in 0..tn {
        for e in 0..n {
            out.push(value_byte(cat.structure().get(t_inv[te], inv[e])));
        }
    }
    out
}

fn canonical_triple_key(a: &TCategory, b: &TCategory, i_table: &[usize]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for pa in permutations(a.size()) {
        let mut inv_a = vec![0usize; a.size()];
        for (old, &new) in pa.iter().enumerate() {
            inv_a[new] = old;
        }
        let a_bytes = permuted_cat_bytes(a, &pa);
        for pb in permutations(b.size()) {
            let b_bytes = permuted_cat_bytes(b, &pb);
            let mut bytes = a_bytes.clone();
            bytes.extend_from_slice(&b_bytes);
            // i conjugated: new A index -> new B index.
            for na in 0..a.size() {
                bytes.push(pb[i_table[inv_a[na]]] as u8);
            }
            if best.as_ref().is_none_or(|bst| bytes < *bst) {
                best = Some(bytes);
            }
        }
    }
    best.unwrap_or_default()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permutations(&mut items, n, &mut out);
    out
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Φ-cocontinuity of `f: X → Y`: when both ends are Φ-cocomplete this is the
/// square `f·Sup_X ≅ Sup_Y·Φf`; otherwise every existing colimit is compared
/// directly.
pub fn cocontinuous_check(f: &TFunctor, phi: PhiClass, caps: &Caps) -> Result<bool, Error> {
    let sx = sup_phi(&f.dom, phi, caps)?;
    let sy = sup_phi(&f.cod, phi, caps)?;
    match (&sx.outcome, &sy.outcome) {
        (SupOutcome::Present(sup_x), SupOutcome::Present(sup_y)) => {
            let phi_f = phi_functor_between(f, &sx.presheaves, &sy.presheaves)?;
            let lhs = TFunctor::compose(f, sup_x);
            let rhs = TFunctor::compose(sup_y, &phi_f);
            Ok(lhs.equiv(&rhs))
        }
        _ => {
            // Fallback: compare the image of each existing colimit.
            for (idx, point) in sx.colimit_points.iter().enumerate() {
                let Some(point) = point else { continue };
                let psi = sx.presheaves.weight(idx);
                let Some(g) = colimit(psi, f)? else {
                    return Ok(false);
                };
                let g_point = TFunctor::check(
                    sx.presheaves.generator().clone(),
                    f.cod.clone(),
                    vec![f.apply(*point)],
                )?;
                if !g.equiv(&g_point) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Audits the Kock-Zöberlein chain `Φy_X ⊣ (y_X)⁻¹ = Sup_{ΦX} ⊣ y_{ΦX}` on
/// one instance.
pub fn kz_audit(x: &Arc<TCategory>, phi: PhiClass, caps: &Caps) -> Result<AuditReport, Error> {
    let (y1, p1) = yoneda_phi(x, phi, caps)?;
    if p1.len() > caps.phiphi {
        return Err(Error::CapExceeded(format!(
            "|ΦX| = {} exceeds the ΦΦ audit cap {}",
            p1.len(),
            caps.phiphi
        )));
    }
    let mut report = AuditReport::new(
        format!("KZ chain on `{}` for Φ = {}", x.carrier().name(), phi.name()),
        false,
    );
    let dense = phi.dense(&y1, caps)?;
    report.push(AuditEntry::new(
        "y_X^Φ is Φ-dense",
        dense,
        Some("(y_X)_* fails membership".into()),
    ));
    if !dense {
        return Ok(report);
    }
    let (y2, p2) = yoneda_phi(&p1.cat, phi, caps)?;
    let phi_y = phi_functor_between(&y1, &p1, &p2)?;
    let y_inv = inverse_image_between(&y1, &p1, &p2)?;

    let adj1 = adjoint_ok(&phi_y, &y_inv);
    report.push(AuditEntry::new(
        "Φy_X ⊣ (y_X)⁻¹",
        adj1,
        Some("adjunction identities fail".into()),
    ));

    let sup2 = sup_phi(&p1.cat, phi, caps)?;
    match &sup2.outcome {
        SupOutcome::Present(sup) => {
            report.push(AuditEntry::new(
                "Sup_{ΦX} = (y_X)⁻¹",
                sup.equiv(&y_inv),
                Some("the supremum of ΦX differs from the inverse image".into()),
            ));
            let adj2 = adjoint_ok(sup, &y2);
            report.push(AuditEntry::new(
                "Sup_{ΦX} ⊣ y_{ΦX}",
                adj2,
                Some("adjunction identities fail".into()),
            ));
        }
        SupOutcome::Absent { .. } => {
            report.push(AuditEntry::fail("Sup_{ΦX} = (y_X)⁻¹", "ΦX is not Φ-cocomplete"));
        }
    }
    // Left-inverse law: (y_X)⁻¹ · y_{ΦX} = 1 on elements.
    let mut law = true;
    for psi in 0..p1.len() {
        if y_inv.apply(y2.apply(psi)) != psi {
            law = false;
        }
    }
    report.push(AuditEntry::new(
        "(y_X)⁻¹ · y_{ΦX} = 1_{ΦX}",
        law,
        Some("the restriction law fails on an element".into()),
    ));
    Ok(report)
}

fn adjoint_ok(left: &TFunctor, right: &TFunctor) -> bool {
    crate::tcategory::adjoint_pair(left, right)
        && TFunctor::identity(left.dom.clone()).leq(&TFunctor::compose(right, left))
        && TFunctor::compose(left, right).leq(&TFunctor::identity(right.dom.clone()))
}

/// Audits the split-fork identities for an equivalence relation `R ⇉ X`:
/// builds the coequaliser `q`, requires the instance-level (Ax 4) (the
/// surjections are Φ-dense), and checks
/// `Φq·q⁻¹ = 1`, `Φπ1·π1⁻¹ = 1`, and `q⁻¹·Φq = Φπ2·π1⁻¹`.
pub fn split_fork_audit(
    pi1: &TFunctor,
    pi2: &TFunctor,
    phi: PhiClass,
    caps: &Caps,
) -> Result<AuditReport, Error> {
    let (q_cat, q) = TCategory::coequalizer(pi1, pi2)?;
    for (name, f) in [("π1", pi1), ("π2", pi2), ("q", &q)] {
        if !f.is_surjective() {
            return Err(Error::Precondition(format!("{name} is not surjective")));
        }
        if !phi.dense(f, caps)? {
            return Err(Error::Precondition(format!(
                "(Ax 4) fails on this instance: surjective {name} is not {}-dense; witness {name} = {f}",
                phi.name()
            )));
        }
    }
    let x = &pi1.cod;
    let pr = presheaf_cat(&pi1.dom, phi, caps)?;
    let px = presheaf_cat(x, phi, caps)?;
    let pq = presheaf_cat(&q_cat, phi, caps)?;

    let phi_pi1 = phi_functor_between(pi1, &pr, &px)?;
    let phi_pi2 = phi_functor_between(pi2, &pr, &px)?;
    let phi_q = phi_functor_between(&q, &px, &pq)?;
    let pi1_inv = inverse_image_between(pi1, &pr, &px)?;
    let q_inv = inverse_image_between(&q, &px, &pq)?;

    let mut report = AuditReport::new(
        format!(
            "split fork for R = `{}` ⇉ X = `{}`, Φ = {}",
            pi1.dom.carrier().name(),
            x.carrier().name(),
            phi.name()
        ),
        false,
    );
    let id_pq = TFunctor::identity(pq.cat.clone());
    let id_px = TFunctor::identity(px.cat.clone());
    report.push(AuditEntry::new(
        "Φq · q⁻¹ = 1_{ΦQ}",
        TFunctor::compose(&phi_q, &q_inv) == id_pq,
        Some("splitting identity fails".into()),
    ));
    report.push(AuditEntry::new(
        "Φπ1 · π1⁻¹ = 1_{ΦX}",
        TFunctor::compose(&phi_pi1, &pi1_inv) == id_px,
        Some("splitting identity fails".into()),
    ));
    report.push(AuditEntry::new(
        "q⁻¹ · Φq = Φπ2 · π1⁻¹",
        TFunctor::compose(&q_inv, &phi_q) == TFunctor::compose(&phi_pi2, &pi1_inv),
        Some("fork identity fails".into()),
    ));
    Ok(report)
}

/// Audits the Kan-style equivalence: composition with `y_X^Φ` is a bijection
/// up to ≅ between Φ-cocontinuous functors `ΦX → Y` and all functors
/// `X → Y`, monotone in both directions. Needs `Y` Φ-cocomplete.
pub fn kan_check(
    x: &Arc<TCategory>,
    y: &Arc<TCategory>,
    phi: PhiClass,
    caps: &Caps,
) -> Result<AuditReport, Error> {
    let sy = sup_phi(y, phi, caps)?;
    if !matches!(sy.outcome, SupOutcome::Present(_)) {
        return Err(Error::Precondition(
            "kan_check needs a Φ-cocomplete codomain".into(),
        ));
    }
    let (yx, px) = yoneda_phi(x, phi, caps)?;
    let mut cocontinuous: Vec<TFunctor> = Vec::new();
    for table in all_maps(px.len(), y.size()) {
        if !TFunctor::is_functor_table(&px.cat, y, &table) {
            continue;
        }
        let kappa = TFunctor::check(px.cat.clone(), y.clone(), table)?;
        if cocontinuous_check(&kappa, phi, caps)? {
            cocontinuous.push(kappa);
        }
    }
    let composed: Vec<TFunctor> =
        cocontinuous.iter().map(|k| TFunctor::compose(k, &yx)).collect();

    let mut report = AuditReport::new(
        format!(
            "Kan equivalence (−)∘y for X = `{}`, Y = `{}`, Φ = {}",
            x.carrier().name(),
            y.carrier().name(),
            phi.name()
        ),
        false,
    );

    // Surjective up to ≅ onto all functors X → Y.
    let mut onto = true;
    let mut witness = None;
    for table in all_maps(x.size(), y.size()) {
        if !TFunctor::is_functor_table(x, y, &table) {
            continue;
        }
        let f = TFunctor::check(x.clone(), y.clone(), table)?;
        if !composed.iter().any(|c| c.equiv(&f)) {
            onto = false;
            witness = Some(format!("no cocontinuous preimage of {f}"));
            break;
        }
    }
    report.push(AuditEntry::new("surjective up to ≅", onto, witness));

    // Injective up to ≅.
    let mut injective = true;
    let mut witness = None;
    for i in 0..cocontinuous.len() {
        for j in i + 1..cocontinuous.len() {
            if composed[i].equiv(&composed[j]) && !cocontinuous[i].equiv(&cocontinuous[j]) {
                injective = false;
                witness = Some(format!(
                    "κ{} ≇ κ{} but they agree after y",
                    i, j
                ));
            }
        }
    }
    report.push(AuditEntry::new("injective up to ≅", injective, witness));

    // Order preserved and reflected.
    let mut monotone = true;
    let mut witness = None;
    for i in 0..cocontinuous.len() {
        for j in 0..cocontinuous.len() {
            let lhs = cocontinuous[i].leq(&cocontinuous[j]);
            let rhs = composed[i].leq(&composed[j]);
            if lhs != rhs {
                monotone = false;
                witness = Some(format!("order mismatch between κ{i} and κ{j}"));
            }
        }
    }
    report.push(AuditEntry::new("monotone in both directions", monotone, witness));
    Ok(report)
}

/// The V-category `V^X` of covariant presheaves (T-functors `X → V`),
/// with the lifted structure `[α,β]`; requires `T1 = 1` and finite `V`.
#[derive(Debug, Clone)]
pub struct CovariantPresheafCategory {
    pub base: Arc<TCategory>,
    /// The V-category structure (identity theory over the same quantale).
    pub cat: Arc<TCategory>,
    /// Value tables of the elements, indexed by the base carrier.
    pub tables: Vec<Vec<Value>>,
    weights: Vec<Distributor>,
}

impl CovariantPresheafCategory {
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    fn elem_leq(&self, i: usize, j: usize) -> bool {
        let q = self.cat.quantale();
        q.leq(q.unit(), self.cat.structure().get(i, j))
    }

    /// Index of the top element, when there is one.
    pub fn top_index(&self) -> Option<usize> {
        (0..self.len()).find(|&g| (0..self.len()).all(|i| self.elem_leq(i, g)))
    }

    /// The cotensor `u ⋔ α`, by its universal property
    /// `[β, u⋔α] = hom(u, [β,α])`.
    pub fn cotensor(&self, u: Value, alpha: usize) -> Option<usize> {
        let q = self.cat.quantale();
        (0..self.len()).find(|&g| {
            (0..self.len()).all(|beta| {
                self.cat.structure().get(beta, g)
                    == q.hom(u, self.cat.structure().get(beta, alpha))
            })
        })
    }

    /// Greatest lower bound of a subset within the carrier, when it exists.
    pub fn infimum(&self, subset: &[usize]) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&g| subset.iter().all(|&s| self.elem_leq(g, s)))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&g| lower.iter().all(|&l| self.elem_leq(l, g)))
    }

    /// The map `φ∘(−): V^X → V^Y` as an index table into `vy`.
    pub fn apply(
        &self,
        phi: &Distributor,
        vy: &CovariantPresheafCategory,
    ) -> Result<Vec<usize>, Error> {
        let mut out = Vec::with_capacity(self.len());
        for alpha in &self.weights {
            let image = Distributor::compose(phi, alpha);
            let row = image.matrix().row(0);
            let idx = vy.tables.iter().position(|t| *t == row).ok_or_else(|| {
                Error::TheoremViolation(
                    "φ∘α is not a covariant presheaf on the codomain".into(),
                )
            })?;
            out.push(idx);
        }
        Ok(out)
    }
}

/// Builds `V^X` with the pointwise lifting `[α,β] = ⋀_x hom(α(x), β(x))`,
/// which computes the T-distributor lifting because `e_1: 1 → T1` is an
/// isomorphism under the `T1 = 1` capability.
pub fn covariant_presheaf_cat(
    x: &Arc<TCategory>,
    caps: &Caps,
) -> Result<CovariantPresheafCategory, Error> {
    let theory = x.theory();
    let q = x.quantale();
    if !q.is_finite() {
        return Err(Error::Capability(format!(
            "covariant presheaves need a finite quantale, got `{}`",
            q.name()
        )));
    }
    if !theory.t1_is_singleton() {
        return Err(Error::Capability(
            "covariant presheaves need T1 = 1, which this theory violates".into(),
        ));
    }
    let v_size = q.size().expect("finite");
    if v_size
        .checked_pow(x.size() as u32)
        .filter(|&c| c <= caps.presheaf_space)
        .is_none()
    {
        return Err(Error::CapExceeded(format!(
            "|V|^|X| exceeds the presheaf-space cap {}",
            caps.presheaf_space
        )));
    }
    let v_cat = TCategory::v_as_category(theory)?;
    let generator = TCategory::generator(theory)?;
    let elems = q.elements();
    let mut tables = Vec::new();
    let mut weights = Vec::new();
    for table in all_maps(x.size(), v_size) {
        if !TFunctor::is_functor_table(x, &v_cat, &table) {
            continue;
        }
        let vals: Vec<Value> = table.iter().map(|&i| elems[i]).collect();
        let matrix = VMatrix::new(
            generator.t_carrier().clone(),
            x.carrier().clone(),
            q.clone(),
            vals.clone(),
        )?;
        let dist = Distributor::check(generator.clone(), x.clone(), matrix).map_err(|e| {
            Error::TheoremViolation(format!(
                "a T-functor X → V failed to be a covariant presheaf: {e}"
            ))
        })?;
        tables.push(vals);
        weights.push(dist);
    }
    let labels: Vec<String> = tables
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().map(|&v| q.label(v)).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let carrier = FinSet::new(format!("V^{}", x.carrier().name()), labels)?;
    let idth = Theory::identity(q.clone());
    let mut structure =
        VMatrix::bottom(carrier.clone(), carrier.clone(), q.clone());
    for (i, alpha) in tables.iter().enumerate() {
        for (j, beta) in tables.iter().enumerate() {
            let mut acc = q.top();
            for p in 0..x.size() {
                acc = q.meet2(acc, q.hom(alpha[p], beta[p]));
            }
            structure.set(i, j, acc);
        }
    }
    let cat = TCategory::check(idth, carrier, structure)?;
    Ok(CovariantPresheafCategory { base: x.clone(), cat, tables, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::all_functors;
    use crate::instances::{antichain_cat, bool2_id, chain_cat, diamond_cat, preorder_cat};

    fn caps() -> Caps {
        Caps::default()
    }

    fn tables_as_sets(p: &PresheafCategory) -> Vec<Vec<usize>> {
        p.tables
            .iter()
            .map(|t| {
                t.iter()
                    .enumerate()
                    .filter(|(_, v)| **v == Value::Idx(1))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn presheaves_of_the_two_chain_are_downsets() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let p = presheaf_cat(&x, PhiClass::All, &caps()).unwrap();
        assert_eq!(tables_as_sets(&p), vec![vec![], vec![0], vec![0, 1]]);
        // Structure is containment.
        for i in 0..3 {
            for j in 0..3 {
                let expect = i <= j;
                assert_eq!(p.cat.structure().get(i, j) == Value::Idx(1), expect);
            }
        }
    }

    #[test]
    fn representable_presheaves_are_points() {
        let th = bool2_id();
        for x in [chain_cat(&th, 3), antichain_cat(&th, 2), diamond_cat(&th)] {
            let p = presheaf_cat(&x, PhiClass::Representable, &caps()).unwrap();
            assert_eq!(p.len(), x.size());
            let (y, _) = yoneda_phi(&x, PhiClass::Representable, &caps()).unwrap();
            // The Yoneda map is a bijection onto ΦX here.
            let mut seen: Vec<usize> = (0..x.size()).map(|i| y.apply(i)).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..x.size()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn almost_representable_presheaves_are_points_plus_bottom() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let p = presheaf_cat(&x, PhiClass::AlmostRepresentable, &caps()).unwrap();
        assert_eq!(tables_as_sets(&p), vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn inhabited_presheaves_of_the_antichain() {
        let th = bool2_id();
        let x = antichain_cat(&th, 2);
        let p = presheaf_cat(&x, PhiClass::Inhabited, &caps()).unwrap();
        // The nonempty subsets, in lexicographic value-table order.
        assert_eq!(tables_as_sets(&p), vec![vec![1], vec![0], vec![0, 1]]);
    }

    #[test]
    fn yoneda_is_fully_faithful_with_evaluation_law() {
        let th = bool2_id();
        let thc = crate::instances::chain3_id();
        for th in [&th, &thc] {
            for x in crate::enumerate::all_categories(th, 3).unwrap() {
                let (y, p) = yoneda(&x, &caps()).unwrap();
                assert!(y.fully_faithful());
                // ψ(𝔵) = ⟨T y(𝔵), ψ⟩ for every presheaf and every 𝔵.
                for (pi, table) in p.tables.iter().enumerate() {
                    for tx in 0..x.t_carrier().size() {
                        let lhs = table[tx];
                        let rhs = p.cat.structure().get(y.t_apply(tx), pi);
                        assert_eq!(lhs, rhs, "evaluation law at ψ={pi}, 𝔵={tx}");
                    }
                }
                // y_X is Φ-dense for Φ = all.
                assert!(PhiClass::All.dense(&y, &caps()).unwrap());
            }
        }
    }

    #[test]
    fn yoneda_on_two_chain_hits_downsets() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let (y, p) = yoneda(&x, &caps()).unwrap();
        let sets = tables_as_sets(&p);
        assert_eq!(sets[y.apply(0)], vec![0]);
        assert_eq!(sets[y.apply(1)], vec![0, 1]);
    }

    #[test]
    fn membership_iff_mate_factors_through_phix() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let y = antichain_cat(&th, 2);
        for phi in [PhiClass::Inhabited, PhiClass::Representable, PhiClass::RightAdjoint] {
            let p = presheaf_cat(&x, phi, &caps()).unwrap();
            for d in crate::enumerate::all_distributors(&x, &y) {
                let member = phi.member(&d, &caps()).unwrap();
                let factors = d.mate_into(&p.cat, &p.tables).is_ok();
                assert_eq!(member, factors, "Φ = {} mate factorisation", phi.name());
            }
        }
    }

    #[test]
    fn colimit_along_unit_weight_returns_diagram() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let y = antichain_cat(&th, 2);
        for h in all_functors(&y, &x) {
            let unit = Distributor::unit(&y);
            let g = colimit(&unit, &h).unwrap().unwrap();
            assert!(g.equiv(&h));
        }
    }

    #[test]
    fn colimit_of_full_downset_is_the_join() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let p = presheaf_cat(&x, PhiClass::All, &caps()).unwrap();
        let full = p.weight(2); // {0,1}
        let g = colimit(full, &TFunctor::identity(x.clone())).unwrap().unwrap();
        assert_eq!(g.apply(0), 1, "the join of the 2-chain is its top");
        // Representable weights give back the point.
        for point in 0..2 {
            let w = p.weight(if point == 0 { 1 } else { 2 });
            let g = colimit(w, &TFunctor::identity(x.clone())).unwrap().unwrap();
            assert_eq!(g.apply(0), point);
        }
    }

    #[test]
    fn sup_of_the_two_chain_and_absence_on_the_antichain() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        let s = sup_phi(&x, PhiClass::All, &caps()).unwrap();
        match &s.outcome {
            SupOutcome::Present(sup) => {
                // {∅ ↦ 0, {0} ↦ 0, {0,1} ↦ 1}.
                assert_eq!(sup.table(), &[0, 0, 1]);
            }
            _ => panic!("2-chain must have suprema"),
        }
        let a = antichain_cat(&th, 2);
        let s = sup_phi(&a, PhiClass::All, &caps()).unwrap();
        match &s.outcome {
            SupOutcome::Absent { certificate } => {
                let idx = certificate.expect("certificate expected");
                assert_eq!(
                    s.presheaves.tables[idx],
                    vec![Value::Idx(1), Value::Idx(1)],
                    "the missing join is the full presheaf"
                );
            }
            _ => panic!("the antichain has no joins"),
        }
        // Antichain plus top is inhabited-cocomplete.
        let v = preorder_cat(&th, 3, |i, j| i == j || j == 2);
        let s = sup_phi(&v, PhiClass::Inhabited, &caps()).unwrap();
        assert!(matches!(s.outcome, SupOutcome::Present(_)));
    }

    #[test]
    fn four_flags_agree_on_small_preorders() {
        let th = bool2_id();
        let caps = caps();
        for phi in [PhiClass::All, PhiClass::Representable, PhiClass::Inhabited] {
            let universe = InjectivityUniverse::build(&th, phi, &caps).unwrap();
            for x in crate::enumerate::all_categories(&th, 3).unwrap() {
                let record = cocomplete_check_with(&x, phi, &caps, &universe).unwrap();
                assert!(
                    record.agreement(),
                    "flag disagreement for Φ = {} on\n{}",
                    phi.name(),
                    x
                );
            }
        }
    }

    #[test]
    fn all_class_matches_complete_lattice_oracle() {
        let th = bool2_id();
        let caps = caps();
        let universe = InjectivityUniverse::build(&th, PhiClass::All, &caps).unwrap();
        for x in crate::enumerate::all_categories(&th, 3).unwrap() {
            // Independent oracle: every subset has a least upper bound.
            let n = x.size();
            let leq = |i: usize, j: usize| x.structure().get(i, j) == Value::Idx(1);
            let mut all_joins = true;
            for subset in crate::enumerate::all_subsets(n) {
                let ubs: Vec<usize> = (0..n)
                    .filter(|&u| subset.iter().all(|&s| leq(s, u)))
                    .collect();
                let lub = ubs.iter().any(|&u| ubs.iter().all(|&v| leq(u, v)));
                if !lub {
                    all_joins = false;
                }
            }
            let record = cocomplete_check_with(&x, PhiClass::All, &caps, &universe).unwrap();
            assert_eq!(record.cocomplete, all_joins, "lattice oracle mismatch on\n{x}");
            assert!(record.agreement());
        }
    }

    #[test]
    fn representable_and_right_adjoint_are_always_cocomplete() {
        let th = bool2_id();
        let caps = caps();
        for phi in [PhiClass::Representable, PhiClass::RightAdjoint] {
            let universe = InjectivityUniverse::build(&th, phi, &caps).unwrap();
            for x in crate::enumerate::all_categories(&th, 3).unwrap() {
                let record = cocomplete_check_with(&x, phi, &caps, &universe).unwrap();
                assert!(record.cocomplete, "Φ = {} should make\n{x}\ncocomplete", phi.name());
                assert!(record.agreement());
            }
        }
    }

    #[test]
    fn phi_functor_naturality_and_density_equivalences() {
        let th = bool2_id();
        let caps = caps();
        let cats = crate::enumerate::all_categories(&th, 2).unwrap();
        for phi in [PhiClass::All, PhiClass::Inhabited, PhiClass::Representable] {
            for x in &cats {
                let (yx, px) = yoneda_phi(x, phi, &caps).unwrap();
                for ycat in &cats {
                    let (yy, py) = yoneda_phi(ycat, phi, &caps).unwrap();
                    for f in all_functors(x, ycat) {
                        let phi_f = phi_functor_between(&f, &px, &py).unwrap();
                        // Naturality square Φf ∘ y_X = y_Y ∘ f.
                        let lhs = TFunctor::compose(&phi_f, &yx);
                        let rhs = TFunctor::compose(&yy, &f);
                        assert_eq!(lhs.table(), rhs.table(), "Yoneda naturality");
                        // (i) f Φ-dense ⟺ (ii) Φf left adjoint ⟺ (iii) Φf Φ-dense.
                        let dense = phi.dense(&f, &caps).unwrap();
                        let mut has_left_adjoint_inverse = false;
                        for table in crate::enumerate::all_maps(py.len(), px.len()) {
                            if !TFunctor::is_functor_table(&py.cat, &px.cat, &table) {
                                continue;
                            }
                            let g =
                                TFunctor::check(py.cat.clone(), px.cat.clone(), table).unwrap();
                            if crate::tcategory::adjoint_pair(&phi_f, &g) {
                                has_left_adjoint_inverse = true;
                            }
                        }
                        let phi_f_dense = phi.dense(&phi_f, &caps).unwrap();
                        assert_eq!(dense, has_left_adjoint_inverse, "Φ = {}", phi.name());
                        assert_eq!(dense, phi_f_dense, "Φ = {}", phi.name());
                        // (Φf)_* = ((y_Y)_* ∘ f_*) ⟜ (y_X)_*.
                        let lhs = phi_f.star();
                        let rhs = Distributor::extension(
                            &Distributor::compose(&yy.star(), &f.star()),
                            &yx.star(),
                        );
                        assert_eq!(lhs.matrix(), rhs.matrix(), "Φf as a colimit");
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_image_needs_density() {
        let th = bool2_id();
        let x = chain_cat(&th, 2);
        // Including only the top point is not inhabited-dense: the column of
        // the bottom point is empty.
        let (_, incl_top) = TCategory::full_subcategory(&x, &[1]).unwrap();
        assert!(inverse_image(&incl_top, PhiClass::Inhabited, &caps()).is_err());
        // Including the bottom point is inhabited-dense, so f⁻¹ exists.
        let (_, incl_bot) = TCategory::full_subcategory(&x, &[0]).unwrap();
        assert!(inverse_image(&incl_bot, PhiClass::Inhabited, &caps()).is_ok());
        let id = TFunctor::identity(x.clone());
        let (inv, _, _) = inverse_image(&id, PhiClass::All, &caps()).unwrap();
        let n = inv.dom.size();
        assert_eq!(inv.table(), (0..n).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn kz_chain_on_point_and_chain() {
        let th = bool2_id();
        let caps = caps();
        for phi in [PhiClass::All, PhiClass::Inhabited] {
            for x in [chain_cat(&th, 1), chain_cat(&th, 2)] {
                let report = kz_audit(&x, phi, &caps).unwrap();
                assert!(report.all_passed(), "Φ = {}\n{report}", phi.name());
            }
        }
        // ΦX of a point is the 2-chain, ΦΦX the 3-chain for Φ = all.
        let point = chain_cat(&th, 1);
        let p1 = presheaf_cat(&point, PhiClass::All, &caps).unwrap();
        assert_eq!(p1.len(), 2);
        let p2 = presheaf_cat(&p1.cat, PhiClass::All, &caps).unwrap();
        assert_eq!(p2.len(), 3);
    }

    #[test]
    fn split_fork_on_diagonal_and_indiscrete_collapse() {
        let th = bool2_id();
        let caps = caps();
        let q = th.quantale();
        // Diagonal on the 2-chain.
        let x = chain_cat(&th, 2);
        let diag = crate::vmatrix::FinSet::new("R", vec!["(0,0)".into(), "(1,1)".into()]).unwrap();
        let sub = TCategory::tensor(&x, &x).unwrap();
        let (rdiag, _) = TCategory::full_subcategory(&sub, &[0, 3]).unwrap();
        let _ = diag;
        let p1 = TFunctor::check(rdiag.clone(), x.clone(), vec![0, 1]).unwrap();
        let report = split_fork_audit(&p1, &p1, PhiClass::Inhabited, &caps).unwrap();
        assert!(report.all_passed(), "{report}");
        // Indiscrete collapse.
        let c2 = crate::vmatrix::FinSet::canonical(2);
        let indiscrete = TCategory::check(
            th.clone(),
            c2.clone(),
            VMatrix::constant(c2.clone(), c2, q.clone(), q.unit()),
        )
        .unwrap();
        let r = TCategory::tensor(&indiscrete, &indiscrete).unwrap();
        let pi1 = TFunctor::check(r.clone(), indiscrete.clone(), vec![0, 0, 1, 1]).unwrap();
        let pi2 = TFunctor::check(r.clone(), indiscrete.clone(), vec![0, 1, 0, 1]).unwrap();
        let report = split_fork_audit(&pi1, &pi2, PhiClass::Inhabited, &caps).unwrap();
        assert!(report.all_passed(), "{report}");
        // Φ = representable refuses on the antichain collapse: the quotient
        // map is surjective but not representably dense.
        let anti = antichain_cat(&th, 2);
        let ra = TCategory::tensor(&anti, &anti).unwrap();
        let a1 = TFunctor::check(ra.clone(), anti.clone(), vec![0, 0, 1, 1]).unwrap();
        let a2 = TFunctor::check(ra.clone(), anti.clone(), vec![0, 1, 0, 1]).unwrap();
        let err = split_fork_audit(&a1, &a2, PhiClass::Representable, &caps);
        assert!(err.is_err());
        assert!(err.unwrap_err().to_string().contains("(Ax 4)"));
    }

    #[test]
    fn kan_equivalence_on_small_instances() {
        let th = bool2_id();
        let caps = caps();
        for x in [chain_cat(&th, 1), chain_cat(&th, 2)] {
            for y in [chain_cat(&th, 2), diamond_cat(&th)] {
                let report = kan_check(&x, &y, PhiClass::All, &caps).unwrap();
                assert!(report.all_passed(), "{report}");
            }
        }
    }

    #[test]
    fn covariant_presheaves_identity_theory() {
        let th = bool2_id();
        let caps = caps();
        let x = chain_cat(&th, 2);
        let vx = covariant_presheaf_cat(&x, &caps).unwrap();
        // Covariant presheaves of the 2-chain are its up-closed subsets:
        // ∅, {1}, {0,1}.
        assert_eq!(vx.len(), 3);
        let q = th.quantale();
        for (i, a) in vx.tables.iter().enumerate() {
            for (j, b) in vx.tables.iter().enumerate() {
                let direct = q.meet((0..2).map(|p| q.hom(a[p], b[p])));
                assert_eq!(vx.cat.structure().get(i, j), direct);
            }
        }
        // apply(unit) is the identity.
        let unit = Distributor::unit(&x);
        let applied = vx.apply(&unit, &vx).unwrap();
        assert_eq!(applied, (0..vx.len()).collect::<Vec<_>>());
        // Right adjoint distributors preserve all the enumerated infima.
        let y = antichain_cat(&th, 2);
        let vy = covariant_presheaf_cat(&y, &caps).unwrap();
        for phi in crate::enumerate::all_distributors(&y, &x) {
            if !phi.is_right_adjoint() {
                continue;
            }
            let apply = vy.apply(&phi, &vx).unwrap();
            for subset in crate::enumerate::all_subsets(vy.len()) {
                if let Some(inf) = vy.infimum(&subset) {
                    let image: Vec<usize> = subset.iter().map(|&i| apply[i]).collect();
                    let inf_y = vx.infimum(&image).expect("image infimum");
                    assert_eq!(apply[inf], inf_y);
                }
            }
        }
    }

    #[test]
    fn inclusion_of_phix_into_px_is_cocontinuous() {
        let th = bool2_id();
        let caps = caps();
        let x = chain_cat(&th, 2);
        for phi in [PhiClass::Inhabited, PhiClass::All] {
            let pphi = presheaf_cat(&x, phi, &caps).unwrap();
            let pall = presheaf_cat(&x, PhiClass::All, &caps).unwrap();
            let mut incl_table = Vec::new();
            for t in &pphi.tables {
                incl_table.push(pall.element_index(t).unwrap());
            }
            let incl = TFunctor::check(pphi.cat.clone(), pall.cat.clone(), incl_table).unwrap();
            assert!(cocontinuous_check(&incl, phi, &caps).unwrap());
        }
    }

    #[test]
    fn cocontinuity_matches_join_preservation_oracle() {
        let th = bool2_id();
        let caps = caps();
        // Between small complete lattices, Φ=all cocontinuity must coincide
        // with preservation of all joins.
        let x = diamond_cat(&th);
        let y = chain_cat(&th, 3);
        let leq_x = |i: usize, j: usize| x.structure().get(i, j) == Value::Idx(1);
        let leq_y = |i: usize, j: usize| y.structure().get(i, j) == Value::Idx(1);
        let join_x = |s: &[usize]| -> usize {
            (0..4)
                .find(|&u| {
                    s.iter().all(|&a| leq_x(a, u))
                        && (0..4).all(|v| !(s.iter().all(|&a| leq_x(a, v)) && !leq_x(u, v)))
                })
                .unwrap()
        };
        let join_y = |s: &[usize]| -> usize {
            (0..3)
                .find(|&u| {
                    s.iter().all(|&a| leq_y(a, u))
                        && (0..3).all(|v| !(s.iter().all(|&a| leq_y(a, v)) && !leq_y(u, v)))
                })
                .unwrap()
        };
        for f in all_functors(&x, &y) {
            let preserves = crate::enumerate::all_subsets(4)
                .into_iter()
                .all(|s| {
                    let img: Vec<usize> = s.iter().map(|&i| f.apply(i)).collect();
                    f.apply(join_x(&s)) == join_y(&img)
                });
            let cocont = cocontinuous_check(&f, PhiClass::All, &caps).unwrap();
            assert_eq!(cocont, preserves, "join oracle mismatch for {f}");
        }
        // CharPhiCont (2): cocontinuous f is Φ-dense iff it is left adjoint.
        for f in all_functors(&x, &y) {
            if !cocontinuous_check(&f, PhiClass::All, &caps).unwrap() {
                continue;
            }
            let dense = PhiClass::All.dense(&f, &caps).unwrap();
            let mut left_adjoint = false;
            for table in crate::enumerate::all_maps(y.size(), x.size()) {
                if !TFunctor::is_functor_table(&y, &x, &table) {
                    continue;
                }
                let g = TFunctor::check(y.clone(), x.clone(), table).unwrap();
                if crate::tcategory::adjoint_pair(&f, &g) {
                    left_adjoint = true;
                }
            }
            assert_eq!(dense, left_adjoint);
        }
    }

    #[test]
    fn z2_weights_reduce_to_pointwise_z1_colimits() {
        // Regression for the Z=1 reduction: a weight into a 2-point discrete
        // codomain has a colimit iff both its point-columns do.
        let th = bool2_id();
        let caps = caps();
        let z = antichain_cat(&th, 2);
        for x in crate::enumerate::all_categories(&th, 2).unwrap() {
            if x.size() == 0 {
                continue;
            }
            let g1 = TCategory::generator(&th).unwrap();
            for phi in crate::enumerate::all_distributors(&x, &z) {
                if !PhiClass::All.member(&phi, &caps).unwrap() {
                    continue;
                }
                let whole = colimit(&phi, &TFunctor::identity(x.clone())).unwrap();
                let mut pointwise = true;
                for point in 0..2 {
                    let col = phi.column(point);
                    let m = VMatrix::new(
                        x.t_carrier().clone(),
                        g1.carrier().clone(),
                        th.quantale().clone(),
                        col,
                    )
                    .unwrap();
                    let psi = Distributor::check(x.clone(), g1.clone(), m).unwrap();
                    if colimit(&psi, &TFunctor::identity(x.clone())).unwrap().is_none() {
                        pointwise = false;
                    }
                }
                assert_eq!(whole.is_some(), pointwise);
            }
        }
    }
}
