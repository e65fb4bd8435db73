//! Construction files: the JSON description of a blow-up configuration,
//! its chain, complement relations and verification targets.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowdown::{ChainEmbedding, ConstructionContext, FiberType};
use crate::exact::Rational;
use crate::lattice::{CurveRole, DivisorClass, LatticeError, SurfaceModel};
use crate::tchain::{BoundarySide, Chain};
use crate::vankampen::{Argument, ComplementRelation};

pub const MAIN_JSON: &str = include_str!("../data/main.json");
pub const SECOND_JSON: &str = include_str!("../data/second.json");

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

impl ConstructionError {
    fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema { pointer: pointer.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    pub degree: i64,
    /// `mᵢ` in `dH − Σ mᵢEᵢ`. Curves of positive degree are proper
    /// transforms and need `mᵢ ≥ 0`; exceptional components (degree 0)
    /// use signed entries, e.g. `E₁ − E₂` is `[-1, 1]`.
    #[serde(default)]
    pub multiplicities: Vec<i64>,
    pub role: CurveRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub entries: Chain,
    pub member_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    #[serde(flatten)]
    pub relation: ComplementRelation,
    /// Registered curve whose incidences realise the relation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionTerm {
    pub curve: String,
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensSpec {
    pub n: i64,
    pub qprime: i64,
    #[serde(default = "default_side")]
    pub side: BoundarySide,
}

fn default_side() -> BoundarySide {
    BoundarySide::Neighborhood
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WahlSpec {
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(rename = "K2_X")]
    pub k2_x: Rational,
    #[serde(rename = "e_X", default, skip_serializing_if = "Option::is_none")]
    pub e_x: Option<i64>,
    pub lens: LensSpec,
    pub wahl: WahlSpec,
    #[serde(default)]
    pub exponent_spot_checks: BTreeMap<usize, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionFile {
    pub name: String,
    #[serde(default = "default_context")]
    pub context: ConstructionContext,
    /// Which printed exponent argument to replay against the chain.
    #[serde(default)]
    pub replay: Option<Argument>,
    pub blowups: usize,
    pub curves: Vec<CurveSpec>,
    pub chain: ChainSpec,
    #[serde(default)]
    pub minus_one_curves: Vec<String>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    #[serde(default)]
    pub fibers: Vec<FiberType>,
    #[serde(default)]
    pub decomposition: Vec<DecompositionTerm>,
    pub expected: Expected,
}

fn default_context() -> ConstructionContext {
    ConstructionContext::Generic
}

/// `a.b[3].c` to `/a/b/3/c`.
fn json_pointer(path: &str) -> String {
    if path == "." || path.is_empty() {
        return "/".into();
    }
    let mut out = String::new();
    for seg in path.split('.') {
        let mut rest = seg;
        if let Some(i) = rest.find('[') {
            if i > 0 {
                out.push('/');
                out.push_str(&rest[..i]);
            }
            rest = &rest[i..];
            while let Some(stripped) = rest.strip_prefix('[') {
                let end = stripped.find(']').unwrap_or(stripped.len());
                out.push('/');
                out.push_str(&stripped[..end]);
                rest = stripped.get(end + 1..).unwrap_or("");
            }
        } else {
            out.push('/');
            out.push_str(rest);
        }
    }
    out
}

impl ConstructionFile {
    pub fn from_json(text: &str) -> Result<Self, ConstructionError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| ConstructionError::schema(json_pointer(&e.path().to_string()), e.inner().to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConstructionError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConstructionError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let text = match name {
            "main" => MAIN_JSON,
            "second" => SECOND_JSON,
            _ => return None,
        };
        Some(Self::from_json(text).expect("shipped construction files are schema-valid"))
    }

    /// Reference and shape checks that serde cannot express.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let mut names = HashSet::new();
        for (i, c) in self.curves.iter().enumerate() {
            if !names.insert(c.name.as_str()) {
                return Err(ConstructionError::schema(
                    format!("/curves/{i}/name"),
                    format!("duplicate curve '{}'", c.name),
                ));
            }
            if c.multiplicities.len() > self.blowups {
                return Err(ConstructionError::schema(
                    format!("/curves/{i}/multiplicities"),
                    format!("{} entries but only {} blow-ups", c.multiplicities.len(), self.blowups),
                ));
            }
            if c.degree < 0 {
                return Err(ConstructionError::schema(format!("/curves/{i}/degree"), "degree must be non-negative"));
            }
            if c.degree > 0 {
                if let Some(j) = c.multiplicities.iter().position(|&m| m < 0) {
                    return Err(ConstructionError::schema(
                        format!("/curves/{i}/multiplicities/{j}"),
                        "a proper transform needs non-negative multiplicities",
                    ));
                }
            }
        }
        let known = |pointer: String, name: &str| {
            if names.contains(name) {
                Ok(())
            } else {
                Err(ConstructionError::schema(pointer, format!("unknown curve '{name}'")))
            }
        };
        let k = self.chain.entries.len();
        if self.chain.member_names.len() != k {
            return Err(ConstructionError::schema(
                "/chain/member_names",
                format!("{} names for {k} chain entries", self.chain.member_names.len()),
            ));
        }
        for (i, n) in self.chain.member_names.iter().enumerate() {
            known(format!("/chain/member_names/{i}"), n)?;
        }
        for (i, n) in self.minus_one_curves.iter().enumerate() {
            known(format!("/minus_one_curves/{i}"), n)?;
        }
        for (i, r) in self.relations.iter().enumerate() {
            if let Some(w) = &r.witness {
                known(format!("/relations/{i}/witness"), w)?;
            }
        }
        for (i, t) in self.decomposition.iter().enumerate() {
            known(format!("/decomposition/{i}/curve"), &t.curve)?;
        }
        for &idx in self.expected.exponent_spot_checks.keys() {
            if idx == 0 || idx > k {
                return Err(ConstructionError::schema(
                    format!("/expected/exponent_spot_checks/{idx}"),
                    format!("index outside 1..={k}"),
                ));
            }
        }
        Ok(())
    }

    pub fn embedding(&self) -> ChainEmbedding {
        ChainEmbedding::new(self.chain.entries.clone(), self.chain.member_names.clone()).expect("lengths validated")
    }

    pub fn relations(&self) -> Vec<ComplementRelation> {
        self.relations.iter().map(|r| r.relation).collect()
    }

    pub fn decomposition_terms(&self) -> Vec<(String, Rational)> {
        self.decomposition.iter().map(|t| (t.curve.clone(), t.coefficient.clone())).collect()
    }

    /// Builds the surface. A curve declared as a (−1)-curve whose class
    /// fails `C² = K·C = −1` is kept as auxiliary and reported here.
    pub fn build(&self) -> BuiltSurface {
        let mut model = SurfaceModel::with_blowups(self.blowups);
        let declared: HashSet<&str> = self.minus_one_curves.iter().map(String::as_str).collect();
        let mut rejected = Vec::new();
        for c in &self.curves {
            let class = DivisorClass::from_degree_multiplicities(self.blowups, c.degree, &c.multiplicities)
                .expect("length validated");
            let role = if declared.contains(c.name.as_str()) { CurveRole::MinusOneCurve } else { c.role };
            match model.register(c.name.clone(), class.clone(), role) {
                Ok(_) => {}
                Err(e @ LatticeError::NotMinusOne { .. }) => {
                    rejected.push(e);
                    model.register(c.name.clone(), class, CurveRole::Auxiliary).expect("name is unique");
                }
                Err(e) => unreachable!("validated construction failed to register: {e}"),
            }
        }
        BuiltSurface { model, rejected_minus_one: rejected }
    }
}

pub struct BuiltSurface {
    pub model: SurfaceModel,
    pub rejected_minus_one: Vec<LatticeError>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_files_load() {
        let m = ConstructionFile::builtin("main").unwrap();
        assert_eq!(m.chain.entries.entries(), &[3, 2, 3, 2, 2, 2, 4, 2, 6, 2, 6, 4, 2]);
        assert_eq!(m.minus_one_curves.len(), 8);
        let built = m.build();
        assert!(built.rejected_minus_one.is_empty());
        assert_eq!(built.model.blowups(), 18);
        let s = ConstructionFile::builtin("second").unwrap();
        assert_eq!(s.expected.lens.qprime, -6953);
        assert!(ConstructionFile::builtin("third").is_none());
    }

    #[test]
    fn pointer_conversion() {
        assert_eq!(json_pointer("curves[3].multiplicities[2]"), "/curves/3/multiplicities/2");
        assert_eq!(json_pointer("chain.entries[0]"), "/chain/entries/0");
        assert_eq!(json_pointer("."), "/");
    }

    fn schema_pointer(text: &str) -> String {
        match ConstructionFile::from_json(text) {
            Err(ConstructionError::Schema { pointer, .. }) => pointer,
            other => panic!("expected a schema error, got {:?}", other.map(|f| f.name)),
        }
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let bad_entry = MAIN_JSON.replacen("\"entries\": [3, 2,", "\"entries\": [3, 1,", 1);
        assert_eq!(schema_pointer(&bad_entry), "/chain/entries");
        let bad_name = MAIN_JSON.replacen("\"witness\": \"N_s\"", "\"witness\": \"Nope\"", 1);
        assert_eq!(schema_pointer(&bad_name), "/relations/0/witness");
        let bad_type = MAIN_JSON.replacen("\"blowups\": 18", "\"blowups\": \"18\"", 1);
        assert_eq!(schema_pointer(&bad_type), "/blowups");
        let negative = MAIN_JSON.replacen(
            "\"multiplicities\": [0, 0, 0, 0, 0, 0, 1, 1, 1]",
            "\"multiplicities\": [0, 0, 0, 0, 0, 0, 1, -1, 1]",
            1,
        );
        assert_eq!(schema_pointer(&negative), "/curves/12/multiplicities/7");
        let missing = MAIN_JSON.replacen("\"expected\"", "\"unexpected\"", 1);
        assert!(schema_pointer(&missing).starts_with('/'));
    }

    #[test]
    fn bad_minus_one_curve_is_demoted() {
        let text = MAIN_JSON.replacen(
            "{\"name\": \"E11\", \"degree\": 0, \"multiplicities\": [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1]",
            "{\"name\": \"E11\", \"degree\": 0, \"multiplicities\": [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1]",
            1,
        );
        let built = ConstructionFile::from_json(&text).unwrap().build();
        assert_eq!(built.rejected_minus_one.len(), 1);
        assert_eq!(built.model.curve("E11").unwrap().role, CurveRole::Auxiliary);
    }
}
