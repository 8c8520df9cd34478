//! Job files: a structure or atlas document plus an optional `job` section.

use std::collections::BTreeMap;
use std::path::Path;

use conformal_atlas::{AtlasDoc, AtlasOptions, ChartDoc, ConformalAtlas};
use multivector::{Form, MultiVector};
use scalar_expr::{parse, Expr, SampleBox};
use serde::{Deserialize, Serialize};
use structures::{Candidate, Kind};
use thiserror::Error;

/// Load and schema failures; all map to exit code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed job file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
}

pub fn schema(msg: impl ToString) -> InputError {
    InputError::Schema(msg.to_string())
}

/// Command parameters. Every field is optional at the schema level; each
/// subcommand states what it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSection {
    pub hamiltonians: Option<Vec<String>>,
    pub fixers: Option<Vec<String>>,
    pub x0: Option<Vec<f64>>,
    pub t_end: Option<f64>,
    pub h: Option<f64>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    /// Diagnostic law families: energy, bracket_conservation, homomorphism,
    /// preservation, flow_agreement.
    pub laws: Option<Vec<String>>,
    pub partners: Option<Vec<String>>,
    pub bracket_tuple: Option<Vec<String>>,
}

/// A structure file or an atlas file, told apart by the `charts` key.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub coordinates: Vec<String>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion: Option<BTreeMap<String, String>>,
    /// Lee form of a glued pair; informational on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charts: Option<Vec<ChartDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub job: Option<JobSection>,
}

/// Flag overrides, applied over the job section.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
}

/// A loaded structure: candidate plus its sampling box.
#[derive(Debug, Clone)]
pub struct Structure {
    pub candidate: Candidate,
    pub bounds: Vec<[f64; 2]>,
}

pub enum Input {
    Structure(Structure),
    Atlas(ConformalAtlas),
}

impl JobFile {
    pub fn load(path: &Path) -> Result<JobFile, InputError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| InputError::Read { path: path.display().to_string(), source })?;
        let file: JobFile = serde_json::from_str(&text)?;
        if let Some(n) = file.dimension {
            if n != file.coordinates.len() {
                return Err(schema(format!("{} coordinates declared for dimension {n}", file.coordinates.len())));
            }
        }
        Ok(file)
    }

    pub fn job(&self) -> JobSection {
        self.job.clone().unwrap_or_default()
    }

    fn kind(&self) -> Result<Kind, InputError> {
        let order = match (self.kind.as_str(), self.order) {
            ("poisson" | "jacobi", o) => o.unwrap_or(2),
            (_, Some(o)) => o,
            (k, None) => return Err(schema(format!("kind {k:?} needs an order"))),
        };
        let kind = Kind::from_tag(&self.kind, order).ok_or_else(|| schema(format!("unknown kind {:?}", self.kind)))?;
        if matches!(kind, Kind::Poisson | Kind::Jacobi) && order != 2 {
            return Err(schema(format!("{kind} has order 2, got {order}")));
        }
        Ok(kind)
    }

    pub fn input(&self) -> Result<Input, InputError> {
        let n = self.coordinates.len();
        if n == 0 {
            return Err(schema("no coordinates"));
        }
        if let Some(charts) = &self.charts {
            if self.tensor.is_some() || self.companion.is_some() || self.bounds.is_some() {
                return Err(schema("an atlas file keeps tensors and boxes inside its charts"));
            }
            let kind = self.kind()?;
            let doc = AtlasDoc {
                dimension: n,
                coordinates: self.coordinates.clone(),
                kind: self.kind.clone(),
                order: kind.arity(),
                charts: charts.clone(),
            };
            return doc.to_atlas().map(Input::Atlas).map_err(schema);
        }
        let kind = self.kind()?;
        let k = kind.arity();
        let tensor = self.tensor.as_ref().ok_or_else(|| schema("structure file without tensor"))?;
        let eta = multivector(&self.coordinates, k, tensor)?;
        let companion = match (&self.companion, kind.has_companion()) {
            (Some(c), true) => Some(multivector(&self.coordinates, k - 1, c)?),
            (None, true) => return Err(schema(format!("{kind} needs a companion"))),
            (Some(_), false) => return Err(schema(format!("{kind} takes no companion"))),
            (None, false) => None,
        };
        let candidate = Candidate::new(kind, eta, companion).map_err(schema)?;
        let bounds = self.bounds.clone().unwrap_or_else(|| vec![[-1.0, 1.0]; n]);
        SampleBox::from_bounds(&bounds).map_err(schema)?;
        if bounds.len() != n {
            return Err(schema(format!("box has {} intervals for {n} coordinates", bounds.len())));
        }
        Ok(Input::Structure(Structure { candidate, bounds }))
    }

    /// Parse a list of expressions over the file's coordinates.
    pub fn exprs(&self, what: &str, list: &[String]) -> Result<Vec<Expr>, InputError> {
        list.iter().map(|s| parse(s, &self.coordinates).map_err(|e| schema(format!("{what} {s:?}: {e}")))).collect()
    }

    /// Structure document of a tensor pair, ready to be written out.
    pub fn structure(
        coords: &[String],
        kind: Kind,
        bounds: Vec<[f64; 2]>,
        eta: &MultiVector,
        companion: Option<&MultiVector>,
        theta: Option<&Form>,
    ) -> JobFile {
        JobFile {
            dimension: Some(coords.len()),
            coordinates: coords.to_vec(),
            kind: kind.tag().to_string(),
            order: Some(kind.arity()),
            bounds: Some(bounds),
            tensor: Some(eta.to_text(coords)),
            companion: companion.map(|c| c.to_text(coords)),
            theta: theta.map(|t| t.to_text(coords)),
            ..JobFile::default()
        }
    }

    /// Atlas document wrapped as a job file.
    pub fn atlas(atlas: &ConformalAtlas) -> JobFile {
        let doc = atlas.to_doc();
        JobFile {
            dimension: Some(doc.dimension),
            coordinates: doc.coordinates,
            kind: doc.kind,
            order: Some(doc.order),
            charts: Some(doc.charts),
            ..JobFile::default()
        }
    }
}

fn multivector(coords: &[String], order: usize, map: &BTreeMap<String, String>) -> Result<MultiVector, InputError> {
    MultiVector::from_text(coords, order, map.iter().map(|(k, v)| (k.as_str(), v.as_str()))).map_err(schema)
}

/// Sampling protocol: flags over job section over defaults.
pub fn atlas_options(job: &JobSection, o: Overrides) -> AtlasOptions {
    let d = AtlasOptions::default();
    AtlasOptions {
        seed: o.seed.or(job.seed).unwrap_or(d.seed),
        tol: o.tol.or(job.tol).unwrap_or(d.tol),
        samples: o.samples.or(job.samples).unwrap_or(d.samples),
        ..d
    }
}

pub fn sample_box(bounds: &[[f64; 2]], opts: &AtlasOptions) -> SampleBox {
    SampleBox {
        lo: bounds.iter().map(|b| b[0]).collect(),
        hi: bounds.iter().map(|b| b[1]).collect(),
        samples: opts.samples,
        seed: opts.seed,
        tol: opts.tol,
    }
}
