//! Workspace files: a JSON document declaring the quantale, the theory, and
//! named categories, functors, and distributors. Everything is validated on
//! load; every failure names the offending object and the violated law.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tvcat_core::{
    Caps, Distributor, FinSet, PhiClass, Quantale, TCategory, TFunctor, Theory, VMatrix, Value,
};

use crate::CliError;

/// On-disk shape of a workspace document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkspaceFile {
    pub quantale: QuantaleSpec,
    pub theory: TheorySpec,
    #[serde(default)]
    pub categories: BTreeMap<String, CategorySpec>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default)]
    pub distributors: BTreeMap<String, DistributorSpec>,
    #[serde(default)]
    pub classes: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantaleSpec {
    Builtin { name: String },
    Table { carrier: Vec<String>, leq: Vec<Vec<bool>>, tensor: Vec<Vec<String>>, unit: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheorySpec {
    pub monad: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategorySpec {
    pub carrier: Vec<String>,
    /// Row-major over `T(carrier) × carrier`, rows in the canonical order of
    /// `T(carrier)` (for the identity theory that is the carrier itself).
    pub structure: Vec<Vec<serde_json::Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub dom: String,
    pub cod: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributorSpec {
    pub dom: String,
    pub cod: String,
    pub matrix: Vec<Vec<serde_json::Value>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CapsSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injective_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phiphi: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presheaf_space: Option<usize>,
}

impl CapsSpec {
    pub fn apply(&self, caps: &mut Caps) {
        if let Some(v) = self.carrier {
            caps.carrier = v;
        }
        if let Some(v) = self.finite_v {
            caps.finite_v = v;
        }
        if let Some(v) = self.injective_b {
            caps.injective_b = v;
        }
        if let Some(v) = self.phiphi {
            caps.phiphi = v;
        }
        if let Some(v) = self.presheaf_space {
            caps.presheaf_space = v;
        }
    }

    /// Parses `key=value` pairs separated by commas, the format of the
    /// `TVCAT_DEFAULT_CAPS` environment variable.
    pub fn parse_env(s: &str) -> Result<CapsSpec, CliError> {
        let mut spec = CapsSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("bad caps entry `{part}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad caps value in `{part}`")))?;
            match key.trim() {
                "carrier" => spec.carrier = Some(value),
                "finite_v" => spec.finite_v = Some(value),
                "injective_b" => spec.injective_b = Some(value),
                "phiphi" => spec.phiphi = Some(value),
                "presheaf_space" => spec.presheaf_space = Some(value),
                other => return Err(CliError::Usage(format!("unknown caps key `{other}`"))),
            }
        }
        Ok(spec)
    }
}

/// A fully validated workspace.
pub struct Workspace {
    pub quantale: Arc<Quantale>,
    pub theory: Arc<Theory>,
    pub categories: BTreeMap<String, Arc<TCategory>>,
    pub functors: BTreeMap<String, TFunctor>,
    pub distributors: BTreeMap<String, Distributor>,
    pub classes: BTreeMap<String, PhiClass>,
    pub caps: Caps,
    pub theory_audited_on_load: bool,
}

impl Workspace {
    pub fn category(&self, name: &str) -> Result<&Arc<TCategory>, CliError> {
        self.categories
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown category `{name}`")))
    }

    pub fn functor(&self, name: &str) -> Result<&TFunctor, CliError> {
        self.functors
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown functor `{name}`")))
    }

    pub fn distributor(&self, name: &str) -> Result<&Distributor, CliError> {
        self.distributors
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown distributor `{name}`")))
    }

    /// Resolves `--class` arguments, allowing both built-in names and names
    /// declared in the workspace `classes` section.
    pub fn class(&self, name: &str) -> Result<PhiClass, CliError> {
        if let Some(phi) = self.classes.get(name) {
            return Ok(*phi);
        }
        PhiClass::parse(name).map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn parse_entry(q: &Arc<Quantale>, cell: &serde_json::Value, at: &str) -> Result<Value, CliError> {
    let text = match cell {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => {
            return Err(CliError::Validation(format!(
                "{at}: expected a quantale element literal, got {other}"
            )))
        }
    };
    q.parse_value(&text)
        .map_err(|e| CliError::Validation(format!("{at}: {e}")))
}

fn matrix_from_rows(
    q: &Arc<Quantale>,
    src: &Arc<FinSet>,
    dst: &Arc<FinSet>,
    rows: &[Vec<serde_json::Value>],
    object: &str,
) -> Result<VMatrix, CliError> {
    if rows.len() != src.size() {
        return Err(CliError::Validation(format!(
            "{object}: expected {} rows (the canonical order of T(carrier)), got {}",
            src.size(),
            rows.len()
        )));
    }
    let mut entries = Vec::with_capacity(src.size() * dst.size());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dst.size() {
            return Err(CliError::Validation(format!(
                "{object}: row {i} has {} entries, expected {}",
                row.len(),
                dst.size()
            )));
        }
        for (j, cell) in row.iter().enumerate() {
            entries.push(parse_entry(q, cell, &format!("{object}: cell ({i},{j})"))?);
        }
    }
    VMatrix::new(src.clone(), dst.clone(), q.clone(), entries)
        .map_err(|e| CliError::Validation(format!("{object}: {e}")))
}

/// Loads and validates a workspace file.
pub fn parse_workspace(
    path: &Path,
    allow_unaudited: bool,
    env_caps: Option<&CapsSpec>,
) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read `{}`: {e}", path.display())))?;
    let file: WorkspaceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("parse error in `{}`: {e}", path.display())))?;
    build_workspace(file, allow_unaudited, env_caps)
}

pub fn build_workspace(
    file: WorkspaceFile,
    allow_unaudited: bool,
    env_caps: Option<&CapsSpec>,
) -> Result<Workspace, CliError> {
    let quantale = match &file.quantale {
        QuantaleSpec::Builtin { name } => {
            Quantale::builtin(name).map_err(|e| CliError::Validation(e.to_string()))?
        }
        QuantaleSpec::Table { carrier, leq, tensor, unit } => {
            let index = |label: &String| {
                carrier.iter().position(|l| l == label).ok_or_else(|| {
                    CliError::Validation(format!("quantale: `{label}` is not in the carrier"))
                })
            };
            let tensor_idx: Vec<Vec<usize>> = tensor
                .iter()
                .map(|row| row.iter().map(index).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?;
            Quantale::from_tables("workspace", carrier.clone(), leq, &tensor_idx, index(unit)?)
                .map_err(|e| CliError::Validation(format!("quantale: {e}")))?
        }
    };

    let mut theory = Theory::builtin(&file.theory.monad, quantale.clone())
        .map_err(|e| CliError::Validation(format!("theory: {e}")))?;
    let mut theory_audited_on_load = false;
    if !theory.is_audited() {
        let report = theory.audit(2);
        if report.all_passed() {
            theory = theory.into_audited(&report).expect("report passed");
            theory_audited_on_load = true;
        } else if allow_unaudited {
            theory = theory.assume_audited();
        } else {
            let failure = report
                .failures()
                .next()
                .map(|e| e.law.clone())
                .unwrap_or_default();
            return Err(CliError::Validation(format!(
                "theory `{}` failed its audit ({failure}); pass --allow-unaudited to override",
                file.theory.monad
            )));
        }
    }

    let mut caps = Caps::default();
    if let Some(env) = env_caps {
        env.apply(&mut caps);
    }
    if let Some(ws_caps) = &file.caps {
        ws_caps.apply(&mut caps);
    }

    let mut categories = BTreeMap::new();
    for (name, spec) in &file.categories {
        let carrier = FinSet::new(name.clone(), spec.carrier.clone())
            .map_err(|e| CliError::Validation(format!("category `{name}`: {e}")))?;
        let t_carrier = theory.monad().apply_obj(&carrier);
        let matrix = matrix_from_rows(
            &quantale,
            &t_carrier,
            &carrier,
            &spec.structure,
            &format!("category `{name}`"),
        )?;
        let cat = TCategory::check(theory.clone(), carrier, matrix)
            .map_err(|e| CliError::Validation(format!("category `{name}`: {e}")))?;
        categories.insert(name.clone(), cat);
    }

    let mut functors = BTreeMap::new();
    for (name, spec) in &file.functors {
        let dom = categories.get(&spec.dom).ok_or_else(|| {
            CliError::Validation(format!("functor `{name}`: unknown category `{}`", spec.dom))
        })?;
        let cod = categories.get(&spec.cod).ok_or_else(|| {
            CliError::Validation(format!("functor `{name}`: unknown category `{}`", spec.cod))
        })?;
        let mut table = Vec::with_capacity(dom.size());
        for i in 0..dom.size() {
            let from = dom.carrier().label(i);
            let to = spec.map.get(from).ok_or_else(|| {
                CliError::Validation(format!("functor `{name}`: no image for `{from}`"))
            })?;
            let j = cod.carrier().index_of(to).ok_or_else(|| {
                CliError::Validation(format!(
                    "functor `{name}`: `{to}` is not in `{}`",
                    spec.cod
                ))
            })?;
            table.push(j);
        }
        let f = TFunctor::check(dom.clone(), cod.clone(), table)
            .map_err(|e| CliError::Validation(format!("functor `{name}`: {e}")))?;
        functors.insert(name.clone(), f);
    }

    let mut distributors = BTreeMap::new();
    for (name, spec) in &file.distributors {
        let dom = categories.get(&spec.dom).ok_or_else(|| {
            CliError::Validation(format!("distributor `{name}`: unknown category `{}`", spec.dom))
        })?;
        let cod = categories.get(&spec.cod).ok_or_else(|| {
            CliError::Validation(format!("distributor `{name}`: unknown category `{}`", spec.cod))
        })?;
        let matrix = matrix_from_rows(
            &quantale,
            dom.t_carrier(),
            cod.carrier(),
            &spec.matrix,
            &format!("distributor `{name}`"),
        )?;
        let d = Distributor::check(dom.clone(), cod.clone(), matrix)
            .map_err(|e| CliError::Validation(format!("distributor `{name}`: {e}")))?;
        distributors.insert(name.clone(), d);
    }

    let mut classes = BTreeMap::new();
    for (name, class_name) in &file.classes {
        let phi = PhiClass::parse(class_name)
            .map_err(|e| CliError::Validation(format!("class `{name}`: {e}")))?;
        classes.insert(name.clone(), phi);
    }

    Ok(Workspace {
        quantale,
        theory,
        categories,
        functors,
        distributors,
        classes,
        caps,
        theory_audited_on_load,
    })
}

/// Serialises a workspace back into its file form (used by the round-trip
/// guarantees of `check`).
pub fn serialize_workspace(ws: &Workspace) -> WorkspaceFile {
    let quantale = if ws.quantale.is_finite() && ws.quantale.name() == "workspace" {
        let n = ws.quantale.size().unwrap();
        let labels: Vec<String> =
            ws.quantale.elements().iter().map(|&v| ws.quantale.label(v)).collect();
        let leq = (0..n)
            .map(|i| (0..n).map(|j| ws.quantale.leq(Value::Idx(i), Value::Idx(j))).collect())
            .collect();
        let tensor = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ws.quantale.label(ws.quantale.tensor(Value::Idx(i), Value::Idx(j))))
                    .collect()
            })
            .collect();
        QuantaleSpec::Table {
            carrier: labels,
            leq,
            tensor,
            unit: ws.quantale.label(ws.quantale.unit()),
        }
    } else {
        QuantaleSpec::Builtin { name: ws.quantale.name().to_string() }
    };
    let categories = ws
        .categories
        .iter()
        .map(|(name, cat)| {
            let rows = (0..cat.t_carrier().size())
                .map(|i| {
                    (0..cat.size())
                        .map(|j| {
                            serde_json::Value::String(
                                ws.quantale.label(cat.structure().get(i, j)),
                            )
                        })
                        .collect()
                })
                .collect();
            (
                name.clone(),
                CategorySpec {
                    carrier: cat.carrier().labels().to_vec(),
                    structure: rows,
                },
            )
        })
        .collect();
    let functors = ws
        .functors
        .iter()
        .map(|(name, f)| {
            let map = (0..f.dom.size())
                .map(|i| {
                    (
                        f.dom.carrier().label(i).to_string(),
                        f.cod.carrier().label(f.apply(i)).to_string(),
                    )
                })
                .collect();
            (
                name.clone(),
                FunctorSpec {
                    dom: f.dom.carrier().name().to_string(),
                    cod: f.cod.carrier().name().to_string(),
                    map,
                },
            )
        })
        .collect();
    let distributors = ws
        .distributors
        .iter()
        .map(|(name, d)| {
            let rows = (0..d.dom().t_carrier().size())
                .map(|i| {
                    (0..d.cod().size())
                        .map(|j| serde_json::Value::String(ws.quantale.label(d.get(i, j))))
                        .collect()
                })
                .collect();
            (
                name.clone(),
                DistributorSpec {
                    dom: d.dom().carrier().name().to_string(),
                    cod: d.cod().carrier().name().to_string(),
                    matrix: rows,
                },
            )
        })
        .collect();
    WorkspaceFile {
        quantale,
        theory: TheorySpec { monad: ws.theory.name().to_string() },
        categories,
        functors,
        distributors,
        classes: ws.classes.iter().map(|(k, v)| (k.clone(), v.name())).collect(),
        caps: None,
    }
}

// Re-exported for the split-fork command: projections out of a relation
// category whose labels are pairs over the base carrier.
pub fn pair_projections(
    r: &Arc<TCategory>,
    x: &Arc<TCategory>,
) -> Result<(TFunctor, TFunctor), CliError> {
    let mut t1 = Vec::with_capacity(r.size());
    let mut t2 = Vec::with_capacity(r.size());
    for idx in 0..r.size() {
        let label = r.carrier().label(idx);
        let inner = label
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "relation labels must look like (a,b); got `{label}`"
                ))
            })?;
        let mut found = None;
        for (pos, _) in inner.match_indices(',') {
            let (a, b) = inner.split_at(pos);
            let b = &b[1..];
            if let (Some(i), Some(j)) = (x.carrier().index_of(a), x.carrier().index_of(b)) {
                found = Some((i, j));
                break;
            }
        }
        let (i, j) = found.ok_or_else(|| {
            CliError::Validation(format!(
                "relation label `{label}` does not split into two points of `{}`",
                x.carrier().name()
            ))
        })?;
        t1.push(i);
        t2.push(j);
    }
    let p1 = TFunctor::check(r.clone(), x.clone(), t1)
        .map_err(|e| CliError::Validation(format!("π1 is not a T-functor: {e}")))?;
    let p2 = TFunctor::check(r.clone(), x.clone(), t2)
        .map_err(|e| CliError::Validation(format!("π2 is not a T-functor: {e}")))?;
    Ok((p1, p2))
}
