//! Colored directed graphs and their input-map form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Cell color assigned when a network does not name its cell colors.
pub const DEFAULT_CELL_COLOR: &str = "default";

/// Reserved arrow color of the identity input map of cells of color `cell_color`.
pub fn identity_color(cell_color: &str) -> String {
    if cell_color == DEFAULT_CELL_COLOR {
        "id".to_string()
    } else {
        format!("id:{cell_color}")
    }
}

pub fn is_identity_color(color: &str) -> bool {
    color == "id" || color.starts_with("id:")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub color: String,
    pub source: usize,
    pub target: usize,
}

/// A structural problem found while building or validating a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateCell { cell: String },
    UnknownCell { cell: String },
    MixedSourceColors { color: String },
    MixedTargetColors { color: String },
    InputMultiset { cell: String, reference: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateCell { cell } => write!(f, "cell {cell} is declared twice"),
            Diagnostic::UnknownCell { cell } => write!(f, "arrow refers to unknown cell {cell}"),
            Diagnostic::MixedSourceColors { color } => {
                write!(f, "arrows of color {color} leave cells of different colors")
            }
            Diagnostic::MixedTargetColors { color } => {
                write!(f, "arrows of color {color} enter cells of different colors")
            }
            Diagnostic::InputMultiset { cell, reference } => {
                write!(f, "cell {cell} input-color multiset differs from {reference}")
            }
        }
    }
}

/// A colored directed graph. Arrows point from source to target; the target
/// receives input from the source.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    name: String,
    cells: Vec<String>,
    cell_colors: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

impl Network {
    /// Builds a network from named cells `(id, color)` and arrows
    /// `(color, source, target)`. Unknown or duplicate ids are reported.
    pub fn build(
        name: impl Into<String>,
        cells: &[(String, String)],
        arrows: &[(String, String, String)],
    ) -> std::result::Result<Network, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut index = HashMap::new();
        for (i, (id, _)) in cells.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                diags.push(Diagnostic::DuplicateCell { cell: id.clone() });
            }
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (color, s, t) in arrows {
            let src = index.get(s).copied();
            let tgt = index.get(t).copied();
            if src.is_none() {
                diags.push(Diagnostic::UnknownCell { cell: s.clone() });
            }
            if tgt.is_none() {
                diags.push(Diagnostic::UnknownCell { cell: t.clone() });
            }
            if let (Some(source), Some(target)) = (src, tgt) {
                out.push(Arrow { color: color.clone(), source, target });
            }
        }
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Network {
            name: name.into(),
            cells: cells.iter().map(|c| c.0.clone()).collect(),
            cell_colors: cells.iter().map(|c| c.1.clone()).collect(),
            arrows: out,
            index,
        })
    }

    /// Builds a network from cell lists and index-based arrows.
    pub fn from_parts(
        name: impl Into<String>,
        cells: Vec<String>,
        cell_colors: Vec<String>,
        arrows: Vec<Arrow>,
    ) -> Result<Network> {
        if cells.len() != cell_colors.len() {
            return Err(Error::DimensionMismatch { expected: cells.len(), found: cell_colors.len() });
        }
        let mut index = HashMap::new();
        for (i, id) in cells.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidNetwork(vec![Diagnostic::DuplicateCell { cell: id.clone() }]));
            }
        }
        for a in &arrows {
            if a.source >= cells.len() || a.target >= cells.len() {
                return Err(Error::InvalidNetwork(vec![Diagnostic::UnknownCell {
                    cell: format!("#{}", a.source.max(a.target)),
                }]));
            }
        }
        Ok(Network { name: name.into(), cells, cell_colors, arrows, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn cells(&self) -> &[String] {
        &self.cells
    }

    pub fn cell_colors(&self) -> &[String] {
        &self.cell_colors
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    /// Distinct cell colors in order of first appearance.
    pub fn color_order(&self) -> Vec<String> {
        first_appearance(self.cell_colors.iter())
    }

    /// Distinct arrow colors: identity colors first, then order of first appearance.
    pub fn arrow_color_order(&self) -> Vec<String> {
        let all = first_appearance(self.arrows.iter().map(|a| &a.color));
        let (mut ids, rest): (Vec<_>, Vec<_>) = all.into_iter().partition(|c| is_identity_color(c));
        ids.extend(rest);
        ids
    }

    /// Indices of arrows entering `v`, in declaration order.
    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.target == v).map(|(i, _)| i)
    }

    /// Arrows entering each cell, in canonical argument order: identity colors
    /// first, then arrow colors by first appearance, then declaration order.
    pub fn ordered_inputs(&self) -> Vec<Vec<usize>> {
        let rank: HashMap<String, usize> =
            self.arrow_color_order().into_iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut inputs = vec![Vec::new(); self.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            inputs[a.target].push(i);
        }
        for list in &mut inputs {
            list.sort_by_key(|&i| (rank[&self.arrows[i].color], i));
        }
        inputs
    }
}

fn first_appearance<'a>(items: impl Iterator<Item = &'a String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in items {
        if !out.contains(c) {
            out.push(c.clone());
        }
    }
    out
}

/// Checks the two coloring conditions of a network and returns every violation.
pub fn validate_network(net: &Network) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut ends: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
    let mut bad_src: Vec<&str> = Vec::new();
    let mut bad_tgt: Vec<&str> = Vec::new();
    for a in &net.arrows {
        let s = net.cell_colors[a.source].as_str();
        let t = net.cell_colors[a.target].as_str();
        let e = ends.entry(a.color.as_str()).or_insert((s, t));
        if e.0 != s && !bad_src.contains(&a.color.as_str()) {
            bad_src.push(a.color.as_str());
        }
        if e.1 != t && !bad_tgt.contains(&a.color.as_str()) {
            bad_tgt.push(a.color.as_str());
        }
    }
    for c in bad_src {
        diags.push(Diagnostic::MixedSourceColors { color: c.to_string() });
    }
    for c in bad_tgt {
        diags.push(Diagnostic::MixedTargetColors { color: c.to_string() });
    }

    let mut profiles: Vec<BTreeMap<&str, usize>> = vec![BTreeMap::new(); net.len()];
    for a in &net.arrows {
        *profiles[a.target].entry(a.color.as_str()).or_insert(0) += 1;
    }
    let mut reference: HashMap<&str, usize> = HashMap::new();
    for v in 0..net.len() {
        let r = *reference.entry(net.cell_colors[v].as_str()).or_insert(v);
        if profiles[v] != profiles[r] {
            diags.push(Diagnostic::InputMultiset { cell: net.cells[v].clone(), reference: net.cells[r].clone() });
        }
    }
    diags
}

/// A map `V_dom -> V_cod` between the cells of two colors, stored on local
/// indices (positions within each color class).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypedMap {
    pub dom: usize,
    pub cod: usize,
    pub image: Vec<usize>,
}

impl TypedMap {
    pub fn identity(color: usize, size: usize) -> Self {
        TypedMap { dom: color, cod: color, image: (0..size).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ inner`, defined when `inner` lands where `self` starts.
    pub fn after(&self, inner: &TypedMap) -> Option<TypedMap> {
        if inner.cod != self.dom {
            return None;
        }
        Some(TypedMap { dom: inner.dom, cod: self.cod, image: inner.image.iter().map(|&k| self.image[k]).collect() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputMap {
    pub color: String,
    pub map: TypedMap,
}

/// A network presented by its input maps, one map per arrow color.
#[derive(Debug, Clone, PartialEq)]
pub struct InputMapNetwork {
    name: String,
    cells: Vec<String>,
    colors: Vec<String>,
    cell_colors: Vec<usize>,
    members: Vec<Vec<usize>>,
    local: Vec<usize>,
    maps: Vec<InputMap>,
}

impl InputMapNetwork {
    /// Builds the network; every input map must be distinct from the others
    /// of its signature.
    pub fn new(
        name: impl Into<String>,
        cells: Vec<String>,
        cell_colors: Vec<String>,
        maps: Vec<(String, String, String, Vec<String>)>,
    ) -> Result<Self> {
        Self::assemble(name.into(), cells, cell_colors, maps, true)
    }

    /// Like [`InputMapNetwork::new`] but tolerates coinciding maps, which occur
    /// in fundamental networks of multi-colored networks.
    pub fn new_lenient(
        name: impl Into<String>,
        cells: Vec<String>,
        cell_colors: Vec<String>,
        maps: Vec<(String, String, String, Vec<String>)>,
    ) -> Result<Self> {
        Self::assemble(name.into(), cells, cell_colors, maps, false)
    }

    /// Maps are given as `(color, cod color, dom color, images)`, where
    /// `images[k]` is the image of the `k`-th cell of the domain color.
    fn assemble(
        name: String,
        cells: Vec<String>,
        cell_colors: Vec<String>,
        maps: Vec<(String, String, String, Vec<String>)>,
        strict: bool,
    ) -> Result<Self> {
        if cells.len() != cell_colors.len() {
            return Err(Error::DimensionMismatch { expected: cells.len(), found: cell_colors.len() });
        }
        let mut index = HashMap::new();
        for (i, id) in cells.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidNetwork(vec![Diagnostic::DuplicateCell { cell: id.clone() }]));
            }
        }
        let colors = first_appearance(cell_colors.iter());
        let color_idx: Vec<usize> = cell_colors.iter().map(|c| colors.iter().position(|x| x == c).unwrap()).collect();
        let mut members = vec![Vec::new(); colors.len()];
        let mut local = vec![0; cells.len()];
        for (v, &c) in color_idx.iter().enumerate() {
            local[v] = members[c].len();
            members[c].push(v);
        }
        let find_color = |c: &str| {
            colors.iter().position(|x| x == c).ok_or_else(|| Error::InvalidInputMaps(format!("unknown cell color {c}")))
        };
        let mut typed = Vec::with_capacity(maps.len());
        for (color, cod, dom, images) in maps {
            let d = find_color(&cod)?;
            let c = find_color(&dom)?;
            if images.len() != members[c].len() {
                return Err(Error::InvalidInputMaps(format!(
                    "map {color} has {} images, expected {}",
                    images.len(),
                    members[c].len()
                )));
            }
            let mut image = Vec::with_capacity(images.len());
            for id in &images {
                let v = *index.get(id).ok_or_else(|| Error::UnknownCell(id.clone()))?;
                if color_idx[v] != d {
                    return Err(Error::InvalidInputMaps(format!(
                        "map {color} sends a cell to {id}, which is not of color {cod}"
                    )));
                }
                image.push(local[v]);
            }
            typed.push(InputMap { color, map: TypedMap { dom: c, cod: d, image } });
        }
        Self::from_typed(name, cells, colors, color_idx, typed, strict)
    }

    /// Builds from already-typed maps on local indices.
    pub(crate) fn from_typed(
        name: String,
        cells: Vec<String>,
        colors: Vec<String>,
        cell_colors: Vec<usize>,
        maps: Vec<InputMap>,
        strict: bool,
    ) -> Result<Self> {
        let mut members = vec![Vec::new(); colors.len()];
        let mut local = vec![0; cells.len()];
        for (v, &c) in cell_colors.iter().enumerate() {
            local[v] = members[c].len();
            members[c].push(v);
        }
        let mut seen: Vec<&str> = Vec::new();
        for m in &maps {
            if seen.contains(&m.color.as_str()) {
                return Err(Error::InvalidInputMaps(format!("color {} used twice", m.color)));
            }
            seen.push(m.color.as_str());
        }
        let mut out: Vec<InputMap> = Vec::with_capacity(maps.len() + colors.len());
        for c in 0..colors.len() {
            let id_color = identity_color(&colors[c]);
            let given: Vec<&InputMap> = maps.iter().filter(|m| m.color == id_color).collect();
            match given.first() {
                Some(m) if !(m.map.dom == c && m.map.is_identity()) => {
                    return Err(Error::InvalidInputMaps(format!("reserved color {id_color} must be the identity")));
                }
                _ => {}
            }
            out.push(InputMap { color: id_color, map: TypedMap::identity(c, members[c].len()) });
        }
        out.extend(maps.into_iter().filter(|m| !is_identity_color(&m.color)));
        out.sort_by_key(|m| (m.map.cod, m.map.dom, !is_identity_color(&m.color)));
        if strict {
            for (i, a) in out.iter().enumerate() {
                for b in &out[..i] {
                    if a.map == b.map {
                        return Err(Error::InvalidInputMaps(format!("maps {} and {} coincide", b.color, a.color)));
                    }
                }
            }
        }
        Ok(InputMapNetwork { name, cells, colors, cell_colors, members, local, maps: out })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn cells(&self) -> &[String] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn cell_color(&self, v: usize) -> usize {
        self.cell_colors[v]
    }

    pub fn cell_colors(&self) -> &[usize] {
        &self.cell_colors
    }

    pub fn members(&self, color: usize) -> &[usize] {
        &self.members[color]
    }

    pub fn local_index(&self, v: usize) -> usize {
        self.local[v]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.colors.len() <= 1
    }

    pub fn cell_index(&self, id: &str) -> Result<usize> {
        self.cells.iter().position(|c| c == id).ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    /// Input maps in canonical order: by (codomain, domain) color, identity first.
    pub fn maps(&self) -> &[InputMap] {
        &self.maps
    }

    pub fn map_by_color(&self, color: &str) -> Option<&InputMap> {
        self.maps.iter().find(|m| m.color == color)
    }

    /// Global index of the image of global cell `v` under `map`.
    pub fn apply(&self, map: &TypedMap, v: usize) -> usize {
        debug_assert_eq!(self.cell_colors[v], map.dom);
        self.members[map.cod][map.image[self.local[v]]]
    }

    /// Input maps acting on cells of `color`, in argument order.
    pub fn maps_into(&self, color: usize) -> impl Iterator<Item = &InputMap> + '_ {
        self.maps.iter().filter(move |m| m.map.dom == color)
    }

    /// Source cells feeding `v`, one per input map into its color, in argument order.
    pub fn sources(&self, v: usize) -> Vec<usize> {
        self.maps_into(self.cell_colors[v]).map(|m| self.apply(&m.map, v)).collect()
    }

    /// Converts to a colored digraph with one arrow per input map and cell.
    pub fn to_digraph(&self) -> Network {
        let mut arrows = Vec::new();
        for m in &self.maps {
            for &v in &self.members[m.map.dom] {
                arrows.push(Arrow { color: m.color.clone(), source: self.apply(&m.map, v), target: v });
            }
        }
        let cell_colors = self.cell_colors.iter().map(|&c| self.colors[c].clone()).collect();
        Network::from_parts(self.name.clone(), self.cells.clone(), cell_colors, arrows)
            .expect("input-map network has consistent cells")
    }

    /// Signature `(cod, dom)` of each map by color name.
    pub fn signatures(&self) -> BTreeMap<String, (String, String)> {
        self.maps
            .iter()
            .map(|m| (m.color.clone(), (self.colors[m.map.cod].clone(), self.colors[m.map.dom].clone())))
            .collect()
    }
}

/// Converts a network in which every cell receives at most one arrow of each
/// color into its input-map form. Identity arrows are added when absent.
pub fn to_input_maps(net: &Network) -> Result<InputMapNetwork> {
    let diags = validate_network(net);
    if !diags.is_empty() {
        return Err(Error::InvalidNetwork(diags));
    }
    let colors = net.color_order();
    let cell_colors: Vec<usize> =
        net.cell_colors().iter().map(|c| colors.iter().position(|x| x == c).unwrap()).collect();
    let mut members = vec![Vec::new(); colors.len()];
    let mut local = vec![0; net.len()];
    for (v, &c) in cell_colors.iter().enumerate() {
        local[v] = members[c].len();
        members[c].push(v);
    }
    let mut maps = Vec::new();
    for color in net.arrow_color_order() {
        let arrows: Vec<&Arrow> = net.arrows().iter().filter(|a| a.color == color).collect();
        let dom = cell_colors[arrows[0].target];
        let cod = cell_colors[arrows[0].source];
        let mut image: Vec<Option<usize>> = vec![None; members[dom].len()];
        for a in &arrows {
            let slot = &mut image[local[a.target]];
            if slot.is_some() {
                return Err(Error::DuplicateInputColor { cell: net.cells()[a.target].clone(), color: color.clone() });
            }
            *slot = Some(local[a.source]);
        }
        let image = image
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                s.ok_or_else(|| {
                    Error::InvalidInputMaps(format!(
                        "cell {} receives no arrow of color {color}",
                        net.cells()[members[dom][k]]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(InputMap { color, map: TypedMap { dom, cod, image } });
    }
    InputMapNetwork::from_typed(net.name().to_string(), net.cells().to_vec(), colors, cell_colors, maps, true)
}

/// A partition of the cells, kept in canonical form: members ascending,
/// blocks ordered by their least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Partition { blocks }
    }

    /// Partition whose blocks are the classes of equal labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(v);
        }
        Partition::new(groups.into_values().collect())
    }

    pub fn singletons(n: usize) -> Self {
        Partition::new((0..n).map(|v| vec![v]).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Checks that the blocks cover `0..n` exactly once.
    pub fn check_cover(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            for &v in b {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("cell index {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!("cell index {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("cell index {v} is not covered")));
        }
        Ok(())
    }

    /// Block index of every cell; assumes the partition covers `0..n`.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut labels = vec![usize::MAX; n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &v in b {
                labels[v] = k;
            }
        }
        labels
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let n = self.blocks.iter().flatten().count();
        let lo = other.labels(n);
        self.blocks.iter().all(|b| b.iter().all(|&v| lo[v] == lo[b[0]]))
    }

    /// The finest partition coarser than both.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.blocks.iter().flatten().count();
        let pairs = self.blocks.iter().chain(other.blocks.iter()).flat_map(|b| b.windows(2).map(|w| (w[0], w[1])));
        Partition::from_pairs(n, pairs)
    }

    /// Finest partition of `0..n` in which each pair shares a block.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let labels: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        Partition::from_labels(&labels)
    }

    /// Parses `{v1 v2 | v3}` against a list of cell ids. Cells left out
    /// become singletons.
    pub fn parse(text: &str, cells: &[String]) -> Result<Partition> {
        let body = text.trim();
        let body = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("partition must be enclosed in braces: {text}")))?;
        let mut blocks = Vec::new();
        let mut used = vec![false; cells.len()];
        for part in body.split('|') {
            let mut block = Vec::new();
            for id in part.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                let v = cells.iter().position(|c| c == id).ok_or_else(|| Error::UnknownCell(id.to_string()))?;
                if std::mem::replace(&mut used[v], true) {
                    return Err(Error::InvalidPartition(format!("cell {id} appears twice")));
                }
                block.push(v);
            }
            blocks.push(block);
        }
        for (v, u) in used.iter().enumerate() {
            if !u {
                blocks.push(vec![v]);
            }
        }
        Ok(Partition::new(blocks))
    }

    pub fn display(&self, cells: &[String]) -> String {
        let parts: Vec<String> =
            self.blocks.iter().map(|b| b.iter().map(|&v| cells[v].as_str()).collect::<Vec<_>>().join(" ")).collect();
        format!("{{{}}}", parts.join(" | "))
    }
}
