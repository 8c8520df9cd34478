//! JSON atlas documents.

use std::collections::BTreeMap;

use multivector::MultiVector;
use scalar_expr::parse;
use serde::{Deserialize, Serialize};
use structures::Kind;

use crate::atlas::{AtlasError, Chart, ConformalAtlas};

/// `{"dimension", "coordinates", "kind", "order", "charts": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasDoc {
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub kind: String,
    pub order: usize,
    pub charts: Vec<ChartDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartDoc {
    pub name: String,
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    pub sigma: String,
    pub tensor: BTreeMap<String, String>,
}

fn chart_error(chart: &str, reason: impl ToString) -> AtlasError {
    AtlasError::Chart { chart: chart.to_string(), reason: reason.to_string() }
}

impl AtlasDoc {
    pub fn to_atlas(&self) -> Result<ConformalAtlas, AtlasError> {
        if self.coordinates.len() != self.dimension {
            return Err(chart_error(
                "<atlas>",
                format!("{} coordinates declared for dimension {}", self.coordinates.len(), self.dimension),
            ));
        }
        let kind = Kind::from_tag(&self.kind, self.order)
            .ok_or_else(|| chart_error("<atlas>", format!("unknown kind {:?}", self.kind)))?;
        let mut charts = Vec::with_capacity(self.charts.len());
        for c in &self.charts {
            let sigma = parse(&c.sigma, &self.coordinates).map_err(|e| chart_error(&c.name, format!("sigma: {e}")))?;
            let tensor =
                MultiVector::from_text(&self.coordinates, self.order, c.tensor.iter().map(|(k, v)| (k.as_str(), v.as_str())))
                    .map_err(|e| chart_error(&c.name, e))?;
            charts.push(Chart::new(c.name.clone(), c.bounds.clone(), tensor, sigma));
        }
        ConformalAtlas::new(self.coordinates.clone(), kind, charts)
    }
}

impl ConformalAtlas {
    pub fn to_doc(&self) -> AtlasDoc {
        let (kind, order) = match self.kind() {
            Kind::Poisson => ("poisson", 2),
            k => (k.tag(), k.arity()),
        };
        AtlasDoc {
            dimension: self.dim(),
            coordinates: self.coords().to_vec(),
            kind: kind.to_string(),
            order,
            charts: self
                .charts()
                .iter()
                .map(|c| ChartDoc {
                    name: c.name.clone(),
                    bounds: c.bounds.clone(),
                    sigma: c.sigma.to_text(self.coords()),
                    tensor: c.tensor.to_text(self.coords()),
                })
                .collect(),
        }
    }
}
