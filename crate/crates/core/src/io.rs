//! JSON documents for networks and response functions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{ResponseFunction, Term};
use crate::error::{Error, Result};
use crate::network::{is_identity_color, validate_network, Diagnostic, InputMapNetwork, Network, DEFAULT_CELL_COLOR};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub name: String,
    pub cells: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_colors: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_maps: Option<Vec<InputMapDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<ArrowDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputMapDoc {
    pub color: String,
    /// `[source color, target color]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<[String; 2]>,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub color: String,
    pub source: String,
    pub target: String,
}

/// A network as read from a file, in whichever form it was written.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedNetwork {
    InputMaps(InputMapNetwork),
    Digraph(Network),
}

impl LoadedNetwork {
    pub fn digraph(&self) -> Network {
        match self {
            LoadedNetwork::InputMaps(m) => m.to_digraph(),
            LoadedNetwork::Digraph(n) => n.clone(),
        }
    }

    /// The input-map form; fails for networks with repeated input colors.
    pub fn input_maps(&self) -> Result<InputMapNetwork> {
        match self {
            LoadedNetwork::InputMaps(m) => Ok(m.clone()),
            LoadedNetwork::Digraph(n) => crate::network::to_input_maps(n),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            LoadedNetwork::InputMaps(m) => m.name(),
            LoadedNetwork::Digraph(n) => n.name(),
        }
    }

    pub fn cells(&self) -> &[String] {
        match self {
            LoadedNetwork::InputMaps(m) => m.cells(),
            LoadedNetwork::Digraph(n) => n.cells(),
        }
    }
}

impl NetworkDoc {
    fn colors(&self) -> Vec<String> {
        self.cells
            .iter()
            .map(|c| {
                self.cell_colors
                    .as_ref()
                    .and_then(|m| m.get(c).cloned())
                    .unwrap_or_else(|| DEFAULT_CELL_COLOR.to_string())
            })
            .collect()
    }

    /// Builds the network and checks the coloring conditions.
    pub fn load(&self) -> Result<LoadedNetwork> {
        let loaded = self.build()?;
        let diags = validate_network(&loaded.digraph());
        if !diags.is_empty() {
            return Err(Error::InvalidNetwork(diags));
        }
        Ok(loaded)
    }

    /// Builds the network without checking the coloring conditions.
    pub fn build(&self) -> Result<LoadedNetwork> {
        let colors = self.colors();
        if let Some(cc) = &self.cell_colors {
            if let Some(k) = cc.keys().find(|k| !self.cells.contains(k)) {
                return Err(Error::UnknownCell(k.clone()));
            }
        }
        match (&self.input_maps, &self.arrows) {
            (Some(maps), None) => {
                let multi = colors.iter().any(|c| c != &colors[0]);
                let mut out = Vec::with_capacity(maps.len());
                for m in maps {
                    let (cod, dom) = match (&m.signature, multi) {
                        (Some([s, t]), _) => (s.clone(), t.clone()),
                        (None, false) => {
                            let c = colors.first().cloned().unwrap_or_else(|| DEFAULT_CELL_COLOR.to_string());
                            (c.clone(), c)
                        }
                        (None, true) => return Err(Error::Parse(format!("input map {} needs a signature", m.color))),
                    };
                    let mut images = Vec::new();
                    for (v, c) in self.cells.iter().zip(&colors) {
                        if *c != dom {
                            continue;
                        }
                        let img = m.map.get(v).ok_or_else(|| {
                            Error::InvalidInputMaps(format!("map {} does not assign cell {v}", m.color))
                        })?;
                        images.push(img.clone());
                    }
                    if let Some(k) = m.map.keys().find(|k| !self.cells.contains(k)) {
                        return Err(Error::UnknownCell(k.clone()));
                    }
                    out.push((m.color.clone(), cod, dom, images));
                }
                let imn = InputMapNetwork::new(self.name.clone(), self.cells.clone(), colors, out)?;
                Ok(LoadedNetwork::InputMaps(imn))
            }
            (None, Some(arrows)) => {
                let cells: Vec<(String, String)> = self.cells.iter().cloned().zip(colors).collect();
                let arrows: Vec<(String, String, String)> =
                    arrows.iter().map(|a| (a.color.clone(), a.source.clone(), a.target.clone())).collect();
                Network::build(self.name.clone(), &cells, &arrows)
                    .map(LoadedNetwork::Digraph)
                    .map_err(Error::InvalidNetwork)
            }
            _ => Err(Error::Parse("exactly one of input_maps and arrows must be present".into())),
        }
    }

    /// Every structural and coloring problem, without stopping at the first.
    pub fn diagnostics(&self) -> Result<Vec<Diagnostic>> {
        match self.build() {
            Ok(n) => Ok(validate_network(&n.digraph())),
            Err(Error::InvalidNetwork(d)) => Ok(d),
            Err(e) => Err(e),
        }
    }

    pub fn from_input_maps(imn: &InputMapNetwork) -> Self {
        let multi = !imn.is_homogeneous() || imn.colors().iter().any(|c| c != DEFAULT_CELL_COLOR);
        let colors = imn.colors();
        let cell_colors = multi.then(|| {
            imn.cells().iter().enumerate().map(|(v, id)| (id.clone(), colors[imn.cell_color(v)].clone())).collect()
        });
        let maps = imn
            .maps()
            .iter()
            .filter(|m| !is_identity_color(&m.color))
            .map(|m| InputMapDoc {
                color: m.color.clone(),
                signature: multi.then(|| [colors[m.map.cod].clone(), colors[m.map.dom].clone()]),
                map: imn
                    .members(m.map.dom)
                    .iter()
                    .map(|&v| (imn.cells()[v].clone(), imn.cells()[imn.apply(&m.map, v)].clone()))
                    .collect(),
            })
            .collect();
        NetworkDoc {
            name: imn.name().to_string(),
            cells: imn.cells().to_vec(),
            cell_colors,
            input_maps: Some(maps),
            arrows: None,
        }
    }

    pub fn from_digraph(net: &Network) -> Self {
        let multi = net.cell_colors().iter().any(|c| c != DEFAULT_CELL_COLOR);
        NetworkDoc {
            name: net.name().to_string(),
            cells: net.cells().to_vec(),
            cell_colors: multi.then(|| net.cells().iter().cloned().zip(net.cell_colors().iter().cloned()).collect()),
            input_maps: None,
            arrows: Some(
                net.arrows()
                    .iter()
                    .map(|a| ArrowDoc {
                        color: a.color.clone(),
                        source: net.cells()[a.source].clone(),
                        target: net.cells()[a.target].clone(),
                    })
                    .collect(),
            ),
        }
    }
}

pub fn parse_network(json: &str) -> Result<LoadedNetwork> {
    let doc: NetworkDoc = serde_json::from_str(json)?;
    doc.load()
}

pub fn read_network(path: impl AsRef<Path>) -> Result<LoadedNetwork> {
    parse_network(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub c: f64,
    pub powers: Vec<u32>,
    #[serde(default)]
    pub lpowers: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseDoc {
    pub arity: usize,
    pub dim: usize,
    #[serde(default)]
    pub params: usize,
    /// Dimension of each argument; defaults to `dim` for all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_dims: Option<Vec<usize>>,
    pub terms: Vec<TermDoc>,
    #[serde(default)]
    pub symmetric_groups: Vec<Vec<usize>>,
}

impl ResponseDoc {
    pub fn to_response(&self) -> Result<ResponseFunction> {
        let input_dims = self.input_dims.clone().unwrap_or_else(|| vec![self.dim; self.arity]);
        if input_dims.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: input_dims.len() });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.c,
                out: t.out.unwrap_or(0),
                powers: t.powers.clone(),
                lpowers: if t.lpowers.is_empty() { vec![0; self.params] } else { t.lpowers.clone() },
            })
            .collect();
        ResponseFunction::new(input_dims, self.dim, self.params, terms, self.symmetric_groups.clone())
    }

    pub fn from_response(f: &ResponseFunction) -> Self {
        let dim = f.out_dim();
        ResponseDoc {
            arity: f.arity(),
            dim,
            params: f.params(),
            input_dims: f.input_dims().iter().any(|&d| d != dim).then(|| f.input_dims().to_vec()),
            terms: f
                .terms()
                .iter()
                .map(|t| TermDoc {
                    c: t.coeff,
                    powers: t.powers.clone(),
                    lpowers: t.lpowers.clone(),
                    out: (dim > 1).then_some(t.out),
                })
                .collect(),
            symmetric_groups: f.symmetric_groups().to_vec(),
        }
    }
}

/// A response file: one function for all cells, or one per cell color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResponseFile {
    ByColor { by_color: BTreeMap<String, ResponseDoc> },
    Single(ResponseDoc),
}

impl ResponseFile {
    /// Resolves to one response per cell color.
    pub fn responses(&self, colors: &[String]) -> Result<BTreeMap<String, ResponseFunction>> {
        let mut out = BTreeMap::new();
        match self {
            ResponseFile::Single(doc) => {
                let f = doc.to_response()?;
                for c in colors {
                    out.insert(c.clone(), f.clone());
                }
            }
            ResponseFile::ByColor { by_color } => {
                for c in colors {
                    let doc = by_color
                        .get(c)
                        .ok_or_else(|| Error::InvalidResponse(format!("no response for cell color {c}")))?;
                    out.insert(c.clone(), doc.to_response()?);
                }
            }
        }
        Ok(out)
    }
}

pub fn read_response(path: impl AsRef<Path>) -> Result<ResponseFile> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
