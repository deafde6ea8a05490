use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{KripkeModel, Lts, Model, SetCoalgebra, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Matrix, Rational};

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Scalar::Int(i) => Ok(crate::linalg::rat(*i)),
            Scalar::Text(s) => parse_rational(s),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Scalar::Text(format_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    pub from: String,
    pub label: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawKripkeEdge {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLts {
    pub states: Vec<String>,
    pub labels: Vec<String>,
    pub edges: Vec<RawEdge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawKripke {
    pub states: Vec<String>,
    pub edges: Vec<RawKripkeEdge>,
    pub props: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWa {
    pub dim: usize,
    #[serde(default = "default_field")]
    pub field: String,
    pub output: Vec<Scalar>,
    pub matrices: IndexMap<String, Vec<Vec<Scalar>>>,
}

fn default_field() -> String {
    "rational".to_string()
}

/// The external document format, tagged by `"type"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum RawModel {
    #[serde(rename = "lts")]
    Lts(RawLts),
    #[serde(rename = "kripke")]
    Kripke(RawKripke),
    #[serde(rename = "wa")]
    Wa(RawWa),
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<Model> {
    let raw: RawModel = serde_json::from_str(text)?;
    validate_model(raw)
}

pub fn validate_model(raw: RawModel) -> Result<Model> {
    match raw {
        RawModel::Lts(d) => {
            let edges: Vec<(&str, &str, &str)> = d
                .edges
                .iter()
                .map(|e| (e.from.as_str(), e.label.as_str(), e.to.as_str()))
                .collect();
            let states: Vec<&str> = d.states.iter().map(String::as_str).collect();
            let labels: Vec<&str> = d.labels.iter().map(String::as_str).collect();
            Ok(Model::Lts(Lts::new(&states, &labels, &edges)?))
        }
        RawModel::Kripke(d) => {
            let states: Vec<&str> = d.states.iter().map(String::as_str).collect();
            let rel: Vec<(&str, &str)> = d.edges.iter().map(|e| (e.from.as_str(), e.to.as_str())).collect();
            let props: Vec<&str> = d.props.iter().map(String::as_str).collect();
            let val: Vec<(&str, Vec<&str>)> = d
                .valuation
                .iter()
                .map(|(s, ps)| (s.as_str(), ps.iter().map(String::as_str).collect()))
                .collect();
            Ok(Model::Kripke(KripkeModel::new(&states, &rel, &props, &val)?))
        }
        RawModel::Wa(d) => {
            if d.field != "rational" {
                return Err(Error::UnknownField(d.field));
            }
            if d.dim == 0 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: 0,
                });
            }
            if d.output.len() != d.dim {
                return Err(Error::DimensionMismatch {
                    expected: d.dim,
                    found: d.output.len(),
                });
            }
            let output = d.output.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>()?;
            let mut trans = Vec::with_capacity(d.matrices.len());
            for (label, rows) in d.matrices {
                let nrows = rows.len();
                let ncols = rows.first().map_or(0, Vec::len);
                if nrows != d.dim || rows.iter().any(|r| r.len() != d.dim) {
                    let cols = rows.iter().map(Vec::len).find(|&c| c != d.dim).unwrap_or(ncols);
                    return Err(Error::NonSquareMatrix {
                        label,
                        rows: nrows,
                        cols,
                        dim: d.dim,
                    });
                }
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                trans.push((label, Matrix::from_rows(d.dim, rows)?));
            }
            Ok(Model::Wa(WeightedAutomaton::new(output, trans)?))
        }
    }
}

impl Model {
    /// Canonical document for this model (declaration order, edges sorted by
    /// index).
    pub fn to_raw(&self) -> RawModel {
        match self {
            Model::Lts(m) => RawModel::Lts(RawLts {
                states: m.state_names().to_vec(),
                labels: m.labels().to_vec(),
                edges: m
                    .edges()
                    .into_iter()
                    .map(|(f, a, t)| RawEdge {
                        from: m.state_names()[f].clone(),
                        label: m.labels()[a].clone(),
                        to: m.state_names()[t].clone(),
                    })
                    .collect(),
            }),
            Model::Kripke(m) => RawModel::Kripke(RawKripke {
                states: m.state_names().to_vec(),
                edges: m
                    .edges()
                    .into_iter()
                    .map(|(f, t)| RawKripkeEdge {
                        from: m.state_names()[f].clone(),
                        to: m.state_names()[t].clone(),
                    })
                    .collect(),
                props: m.props().to_vec(),
                valuation: (0..m.num_states())
                    .filter(|&x| m.true_props(x).next().is_some())
                    .map(|x| (m.state_names()[x].clone(), m.true_props(x).map(String::from).collect()))
                    .collect(),
            }),
            Model::Wa(w) => RawModel::Wa(RawWa {
                dim: w.dim(),
                field: default_field(),
                output: w.output().iter().map(Scalar::from_rational).collect(),
                matrices: w
                    .labels()
                    .iter()
                    .enumerate()
                    .map(|(a, l)| {
                        let rows = w
                            .matrix(a)
                            .rows()
                            .iter()
                            .map(|r| r.iter().map(Scalar::from_rational).collect())
                            .collect();
                        (l.clone(), rows)
                    })
                    .collect(),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("model documents always serialize")
    }
}
