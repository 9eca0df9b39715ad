//! T-distributors and their calculus: Kleisli convolution, extensions
//! (the right adjoint of pre-composition), mates into the exponential, and
//! adjointness tests.

use std::fmt;
use std::sync::Arc;

use crate::quantale::Value;
use crate::tcategory::{TCategory, TFunctor};
use crate::vmatrix::{compose, right_extension, VMatrix};
use crate::Error;

/// A T-distributor `φ: X ⇸∘ Y`: a V-matrix `TX × Y` absorbing both category
/// structures under Kleisli convolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distributor {
    dom: Arc<TCategory>,
    cod: Arc<TCategory>,
    matrix: VMatrix,
}

impl Distributor {
    /// Validates the two absorption laws `φ∘a ≤ φ` and `b∘φ ≤ φ` (their `≥`
    /// companions hold automatically over valid categories) and builds the
    /// distributor. On failure reports the violated cell.
    pub fn check(
        dom: Arc<TCategory>,
        cod: Arc<TCategory>,
        matrix: VMatrix,
    ) -> Result<Distributor, Error> {
        if matrix.src().size() != dom.t_carrier().size()
            || matrix.dst().size() != cod.size()
        {
            return Err(Error::Distributor(format!(
                "matrix must be {}×{}, got {}×{}",
                dom.t_carrier().size(),
                cod.size(),
                matrix.src().size(),
                matrix.dst().size()
            )));
        }
        if matrix.quantale().name() != dom.quantale().name() {
            return Err(Error::Distributor("matrix over the wrong quantale".into()));
        }
        let cand = Distributor { dom, cod, matrix };
        let q = cand.dom.quantale();
        let right = Distributor::compose_matrix(&cand.matrix, cand.dom.txi_structure(), &cand.dom);
        // right = φ ∘ a (precomposition with the unit distributor of dom).
        for i in 0..right.src().size() {
            for j in 0..right.dst().size() {
                if !q.leq(right.get(i, j), cand.matrix.get(i, j)) {
                    return Err(Error::Distributor(format!(
                        "φ∘a ≰ φ at (𝔵={}, y={}): {} ≰ {}",
                        cand.dom.t_carrier().label(i),
                        cand.cod.carrier().label(j),
                        q.label(right.get(i, j)),
                        q.label(cand.matrix.get(i, j))
                    )));
                }
            }
        }
        let txi_phi = cand.dom.theory().t_xi_extend(&cand.matrix);
        let left = Distributor::compose_matrix(cand.cod.structure(), &txi_phi, &cand.dom);
        for i in 0..left.src().size() {
            for j in 0..left.dst().size() {
                if !q.leq(left.get(i, j), cand.matrix.get(i, j)) {
                    return Err(Error::Distributor(format!(
                        "b∘φ ≰ φ at (𝔵={}, y={}): {} ≰ {}",
                        cand.dom.t_carrier().label(i),
                        cand.cod.carrier().label(j),
                        q.label(left.get(i, j)),
                        q.label(cand.matrix.get(i, j))
                    )));
                }
            }
        }
        Ok(cand)
    }

    /// Internal constructor for matrices that are distributors by a theorem
    /// (`f_*`, `f^*`, units, validated composites); tests re-check them.
    pub(crate) fn new_unchecked(
        dom: Arc<TCategory>,
        cod: Arc<TCategory>,
        matrix: VMatrix,
    ) -> Distributor {
        Distributor { dom, cod, matrix }
    }

    /// The unit `1_X^* = a : X ⇸∘ X`.
    pub fn unit(x: &Arc<TCategory>) -> Distributor {
        Distributor { dom: x.clone(), cod: x.clone(), matrix: x.structure().clone() }
    }

    pub fn dom(&self) -> &Arc<TCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<TCategory> {
        &self.cod
    }

    pub fn matrix(&self) -> &VMatrix {
        &self.matrix
    }

    pub fn get(&self, tx: usize, y: usize) -> Value {
        self.matrix.get(tx, y)
    }

    /// The matrix of `β ∘ α` given `β`'s matrix and `T_ξ α`, both over the
    /// Kleisli leg `m_X°` of `dom_of_alpha`.
    fn compose_matrix(beta: &VMatrix, txi_alpha: &VMatrix, dom_of_alpha: &TCategory) -> VMatrix {
        let m_inv = dom_of_alpha.m_fun().graph(dom_of_alpha.quantale()).transpose();
        compose(beta, &compose(txi_alpha, &m_inv))
    }

    /// Kleisli convolution `β ∘ α = β · T_ξ α · m_X°`.
    pub fn compose(beta: &Distributor, alpha: &Distributor) -> Distributor {
        assert!(
            alpha.cod == beta.dom,
            "kleisli composition needs matching middle category"
        );
        let txi_alpha = alpha.dom.theory().t_xi_extend(&alpha.matrix);
        let matrix = Distributor::compose_matrix(&beta.matrix, &txi_alpha, &alpha.dom);
        Distributor { dom: alpha.dom.clone(), cod: beta.cod.clone(), matrix }
    }

    /// Extension `γ ⟜ α`: the largest `δ: Y ⇸∘ Z` with `δ ∘ α ≤ γ`,
    /// computed in `Mat(V)` as `γ ⟜· (T_ξ α · m_X°)`.
    pub fn extension(gamma: &Distributor, alpha: &Distributor) -> Distributor {
        assert!(
            alpha.dom == gamma.dom,
            "extension needs a common domain category"
        );
        let q = alpha.dom.quantale();
        let txi_alpha = alpha.dom.theory().t_xi_extend(&alpha.matrix);
        let leg = compose(&txi_alpha, &alpha.dom.m_fun().graph(q).transpose());
        let matrix = right_extension(&gamma.matrix, &leg);
        Distributor { dom: alpha.cod.clone(), cod: gamma.cod.clone(), matrix }
    }

    /// Column `φ(−, y)` as a value table over `TX` — the mate's image point.
    pub fn column(&self, y: usize) -> Vec<Value> {
        self.matrix.column(y)
    }

    /// The mate `Y → V^{|X|}`, `y ↦ φ(−,y)`, landing in the exponential.
    /// Returns the functor together with the exponential's value tables.
    pub fn mate(&self, space_cap: usize) -> Result<(TFunctor, Vec<Vec<Value>>), Error> {
        let (exp, tables) = TCategory::exponential_v(&self.dom, space_cap)?;
        let mut map = Vec::with_capacity(self.cod.size());
        for y in 0..self.cod.size() {
            let col = self.column(y);
            let idx = tables
                .iter()
                .position(|t| *t == col)
                .expect("every column is a point of the full function space");
            map.push(idx);
        }
        let f = TFunctor::check(self.cod.clone(), exp, map)?;
        Ok((f, tables))
    }

    /// Mate restricted to a given list of value tables (for instance a
    /// presheaf carrier); errors if some column is missing from the list.
    pub fn mate_into(
        &self,
        cat: &Arc<TCategory>,
        tables: &[Vec<Value>],
    ) -> Result<TFunctor, Error> {
        let mut map = Vec::with_capacity(self.cod.size());
        for y in 0..self.cod.size() {
            let col = self.column(y);
            let idx = tables.iter().position(|t| *t == col).ok_or_else(|| {
                Error::Precondition(format!(
                    "column at `{}` is not an element of the target presheaf category",
                    self.cod.carrier().label(y)
                ))
            })?;
            map.push(idx);
        }
        TFunctor::check(self.cod.clone(), cat.clone(), map)
    }

    /// The canonical left-adjoint candidate `γ = a ⟜ φ` (the largest `δ`
    /// with `δ ∘ φ ≤ 1_X^*`) and whether it really is one, i.e. whether
    /// `1_Y^* ≤ φ ∘ γ`.
    pub fn left_adjoint_candidate(&self) -> (Distributor, bool) {
        let gamma = Distributor::extension(&Distributor::unit(&self.dom), self);
        let unit_cod = Distributor::unit(&self.cod);
        let ok = unit_cod.matrix.leq(&Distributor::compose(self, &gamma).matrix);
        (gamma, ok)
    }

    /// Whether this distributor is a right adjoint.
    pub fn is_right_adjoint(&self) -> bool {
        self.left_adjoint_candidate().1
    }

    /// Builds a distributor `X ⇸∘ Y` from a `|TX| × |Y|` row-major value
    /// table, validating it.
    pub fn from_rows(
        dom: Arc<TCategory>,
        cod: Arc<TCategory>,
        rows: Vec<Vec<Value>>,
    ) -> Result<Distributor, Error> {
        let entries: Vec<Value> = rows.into_iter().flatten().collect();
        let matrix = VMatrix::new(
            dom.t_carrier().clone(),
            cod.carrier().clone(),
            dom.quantale().clone(),
            entries,
        )?;
        Distributor::check(dom, cod, matrix)
    }
}

impl fmt::Display for Distributor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "distributor {} ⇸∘ {}",
            self.dom.carrier().name(),
            self.cod.carrier().name()
        )?;
        write!(f, "{}", self.matrix)
    }
}

/// The mate of the unit distributor: the Yoneda data `x ↦ a(−,x)` as raw
/// columns (the functor version lives in the completion module).
pub fn yoneda_columns(x: &TCategory) -> Vec<Vec<Value>> {
    (0..x.size()).map(|i| x.yoneda_column(i)).collect()
}

/// Theorem-style cross-check: a `TX × Y` value table is a distributor iff it
/// is a T-functor both on `|X| ⊗ Y` and on `X^op ⊗ Y` into `V`. Needs a
/// finite quantale. Exposed for the test suites.
pub fn is_functor_on_both_tensors(
    x: &Arc<TCategory>,
    y: &Arc<TCategory>,
    table: &VMatrix,
) -> Result<bool, Error> {
    let theory = x.theory();
    let v_cat = TCategory::v_as_category(theory)?;
    let q = x.quantale();
    let fmx = TCategory::free_em(theory, x.carrier())?;
    let xop = TCategory::dual_op(x)?;
    for base in [fmx, xop] {
        let prod = TCategory::tensor(&base, y)?;
        let mut map = Vec::with_capacity(prod.size());
        for p in 0..prod.size() {
            let (i, j) = crate::vmatrix::unpair_index(y.size(), p);
            let v = table.get(i, j);
            let idx = q
                .elements()
                .iter()
                .position(|&e| e == v)
                .expect("finite quantale value");
            map.push(idx);
        }
        if !TFunctor::is_functor_table(&prod, &v_cat, &map) {
            return Ok(false);
        }
    }
    Ok(true)
}
