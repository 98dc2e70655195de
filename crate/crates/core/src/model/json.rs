//! The JSON model file format.
//!
//! ```json
//! {"kind": "gen", "worlds": ["u", "w"], "R": [["w", "u"]],
//!  "S": {"w": {"u": [["u"]]}}, "valuation": {"p": ["u"]}}
//! ```
//!
//! For `"kind": "ord"` the `S` entry maps each `w` to a list of pairs `[u, v]`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{GenFrame, GenModel, OrdFrame, OrdModel, Report, Valuation};
use crate::worldset::{Antichain, WorldSet, MAX_WORLDS};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown model kind {0:?} (expected \"gen\" or \"ord\")")]
    Kind(String),
    #[error("world {0:?} is listed more than once")]
    DuplicateWorld(String),
    #[error("reference to undeclared world {0:?}")]
    UnknownWorld(String),
    #[error("too many worlds: {0} (limit {MAX_WORLDS})")]
    TooManyWorlds(usize),
    #[error("malformed S entry: {0}")]
    BadS(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub kind: String,
    pub worlds: Vec<String>,
    #[serde(rename = "R", default)]
    pub r: Vec<[String; 2]>,
    #[serde(rename = "S", default)]
    pub s: Value,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub refuted_at: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadedModel {
    Gen(GenModel),
    Ord(OrdModel),
}

impl LoadedModel {
    pub fn validate(&self) -> Report {
        match self {
            LoadedModel::Gen(m) => m.validate(),
            LoadedModel::Ord(m) => m.validate(),
        }
    }

    /// The generalized model, embedding ordinary ones.
    pub fn to_gen(&self) -> GenModel {
        match self {
            LoadedModel::Gen(m) => m.clone(),
            LoadedModel::Ord(m) => super::gen_of_ordinary(m),
        }
    }

    pub fn worlds(&self) -> &[String] {
        match self {
            LoadedModel::Gen(m) => m.frame.worlds(),
            LoadedModel::Ord(m) => m.frame.worlds(),
        }
    }
}

struct Index(BTreeMap<String, usize>);

impl Index {
    fn get(&self, name: &str) -> Result<usize, ModelError> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    fn set(&self, names: &[String]) -> Result<WorldSet, ModelError> {
        names.iter().map(|n| self.get(n)).collect()
    }
}

fn string_list(v: &Value) -> Option<Vec<String>> {
    v.as_array()?
        .iter()
        .map(|x| x.as_str().map(str::to_string))
        .collect()
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    /// Converts to an in-memory model. Worlds are reordered lexicographically.
    pub fn to_model(&self) -> Result<LoadedModel, ModelError> {
        let mut worlds = self.worlds.clone();
        worlds.sort();
        if let Some(d) = worlds.windows(2).find(|p| p[0] == p[1]) {
            return Err(ModelError::DuplicateWorld(d[0].clone()));
        }
        let n = worlds.len();
        if n > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(n));
        }
        let idx = Index(worlds.iter().cloned().zip(0..).collect());
        let mut succ = vec![WorldSet::EMPTY; n];
        for [a, b] in &self.r {
            succ[idx.get(a)?].insert(idx.get(b)?);
        }
        let mut valuation = Valuation::new();
        for (p, ws) in &self.valuation {
            valuation.insert(p.clone(), idx.set(ws)?);
        }
        let empty = serde_json::Map::new();
        let s_obj = match &self.s {
            Value::Null => &empty,
            Value::Object(m) => m,
            _ => return Err(ModelError::BadS("expected an object".into())),
        };
        match self.kind.as_str() {
            "gen" => {
                let mut s = vec![vec![Antichain::new(); n]; n];
                for (w, inner) in s_obj {
                    let wi = idx.get(w)?;
                    let inner = inner
                        .as_object()
                        .ok_or_else(|| ModelError::BadS(format!("S[{w}] must be an object")))?;
                    for (u, sets) in inner {
                        let ui = idx.get(u)?;
                        let sets = sets.as_array().ok_or_else(|| {
                            ModelError::BadS(format!("S[{w}][{u}] must be a list of sets"))
                        })?;
                        for set in sets {
                            let names = string_list(set).ok_or_else(|| {
                                ModelError::BadS(format!("S[{w}][{u}] entries must be lists of ids"))
                            })?;
                            s[wi][ui].insert(idx.set(&names)?);
                        }
                    }
                }
                let frame = GenFrame::from_parts(worlds, succ, s);
                Ok(LoadedModel::Gen(GenModel::new(frame, valuation)))
            }
            "ord" => {
                let mut s = vec![vec![WorldSet::EMPTY; n]; n];
                for (w, pairs) in s_obj {
                    let wi = idx.get(w)?;
                    let pairs = pairs
                        .as_array()
                        .ok_or_else(|| ModelError::BadS(format!("S[{w}] must be a list of pairs")))?;
                    for pair in pairs {
                        match string_list(pair).as_deref() {
                            Some([u, v]) => s[wi][idx.get(u)?].insert(idx.get(v)?),
                            _ => {
                                return Err(ModelError::BadS(format!(
                                    "S[{w}] entries must be pairs of ids"
                                )))
                            }
                        }
                    }
                }
                let frame = OrdFrame::from_parts(worlds, succ, s);
                Ok(LoadedModel::Ord(OrdModel::new(frame, valuation)))
            }
            other => Err(ModelError::Kind(other.to_string())),
        }
    }

    pub fn from_gen(m: &GenModel) -> ModelFile {
        let f = &m.frame;
        let names = f.worlds();
        let name_list = |s: WorldSet| s.iter().map(|i| names[i].clone()).collect::<Vec<_>>();
        let mut s = serde_json::Map::new();
        for w in 0..f.len() {
            let mut inner = serde_json::Map::new();
            for u in 0..f.len() {
                let gens = f.generators(w, u);
                if !gens.is_empty() {
                    let sets: Vec<Value> = gens
                        .iter()
                        .map(|g| Value::from(name_list(*g)))
                        .collect();
                    inner.insert(names[u].clone(), Value::Array(sets));
                }
            }
            if !inner.is_empty() {
                s.insert(names[w].clone(), Value::Object(inner));
            }
        }
        ModelFile {
            kind: "gen".into(),
            worlds: names.to_vec(),
            r: edges(names, |w| f.succ(w)),
            s: Value::Object(s),
            valuation: valuation_names(names, &m.valuation),
            refuted_at: None,
        }
    }

    pub fn from_ord(m: &OrdModel) -> ModelFile {
        let f = &m.frame;
        let names = f.worlds();
        let mut s = serde_json::Map::new();
        for w in 0..f.len() {
            let mut pairs = Vec::new();
            for u in 0..f.len() {
                for v in f.s_image(w, u) {
                    pairs.push(Value::from(vec![names[u].clone(), names[v].clone()]));
                }
            }
            if !pairs.is_empty() {
                s.insert(names[w].clone(), Value::Array(pairs));
            }
        }
        ModelFile {
            kind: "ord".into(),
            worlds: names.to_vec(),
            r: edges(names, |w| f.succ(w)),
            s: Value::Object(s),
            valuation: valuation_names(names, &m.valuation),
            refuted_at: None,
        }
    }

    pub fn from_loaded(m: &LoadedModel) -> ModelFile {
        match m {
            LoadedModel::Gen(g) => ModelFile::from_gen(g),
            LoadedModel::Ord(o) => ModelFile::from_ord(o),
        }
    }
}

fn edges(names: &[String], succ: impl Fn(usize) -> WorldSet) -> Vec<[String; 2]> {
    (0..names.len())
        .flat_map(|w| succ(w).iter().map(move |u| (w, u)).collect::<Vec<_>>())
        .map(|(w, u)| [names[w].clone(), names[u].clone()])
        .collect()
}

fn valuation_names(names: &[String], val: &Valuation) -> BTreeMap<String, Vec<String>> {
    val.iter()
        .map(|(p, s)| (p.clone(), s.iter().map(|i| names[i].clone()).collect()))
        .collect()
}

/// Parses a model file, optionally closing `S` (generalized models only, and
/// only when `R` is already a strict order), then validates it.
pub fn load(text: &str, closure: bool) -> Result<(LoadedModel, Report), ModelError> {
    let mut model = ModelFile::parse(text)?.to_model()?;
    if closure {
        if let LoadedModel::Gen(m) = &mut model {
            let order_ok = m.frame.validate().violations.iter().all(|v| {
                !matches!(
                    v,
                    super::Violation::Reflexive { .. } | super::Violation::NotTransitive { .. }
                )
            });
            if order_ok {
                m.frame = m.frame.close_s();
            }
        }
    }
    let report = model.validate();
    Ok((model, report))
}

/// Names of variables used by a model's valuation.
pub fn valuation_variables(val: &Valuation) -> BTreeSet<String> {
    val.keys().cloned().collect()
}
