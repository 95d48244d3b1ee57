//! Graph fibrations: checking, enumeration, composition and pullback.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::network::{InputMapNetwork, Network};

/// Default combined cell-count limit for fibration searches.
pub const FIBRATION_LIMIT: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFibration {
    pub source: String,
    pub target: String,
    pub source_cells: Vec<String>,
    pub target_cells: Vec<String>,
    /// Image of each source cell, by index into `target_cells`.
    pub vertex_map: Vec<usize>,
    /// Image of each source arrow, for digraph-form networks.
    pub arrow_map: Option<Vec<usize>>,
}

impl GraphFibration {
    pub fn new(
        source: &str,
        source_cells: &[String],
        target: &str,
        target_cells: &[String],
        vertex_map: Vec<usize>,
    ) -> Self {
        GraphFibration {
            source: source.to_string(),
            target: target.to_string(),
            source_cells: source_cells.to_vec(),
            target_cells: target_cells.to_vec(),
            vertex_map,
            arrow_map: None,
        }
    }

    pub fn identity(name: &str, cells: &[String]) -> Self {
        Self::new(name, cells, name, cells, (0..cells.len()).collect())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_cells.len()];
        self.vertex_map.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_cells.len()];
        for &t in &self.vertex_map {
            seen[t] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_cells.len() == self.target_cells.len() && self.is_injective()
    }

    /// `(φ*y)_v = y_{φ(v)}` for states with equal-sized cells.
    pub fn pullback(&self, y: &[f64]) -> Result<Vec<f64>> {
        let n = self.target_cells.len();
        if n == 0 || !y.len().is_multiple_of(n) {
            return Err(Error::DimensionMismatch { expected: n, found: y.len() });
        }
        self.pullback_with_dims(y, &vec![y.len() / n; n])
    }

    /// Pullback for states whose target cell `u` has `dims[u]` coordinates.
    pub fn pullback_with_dims(&self, y: &[f64], dims: &[usize]) -> Result<Vec<f64>> {
        if dims.len() != self.target_cells.len() {
            return Err(Error::DimensionMismatch { expected: self.target_cells.len(), found: dims.len() });
        }
        let total: usize = dims.iter().sum();
        if total != y.len() {
            return Err(Error::DimensionMismatch { expected: total, found: y.len() });
        }
        let offsets = offsets(dims);
        let mut out = Vec::new();
        for &u in &self.vertex_map {
            out.extend_from_slice(&y[offsets[u]..offsets[u] + dims[u]]);
        }
        Ok(out)
    }

    /// The 0/1 matrix of the pullback for cells of dimension `dim`.
    pub fn pullback_matrix(&self, dim: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.source_cells.len() * dim, self.target_cells.len() * dim);
        for (v, &u) in self.vertex_map.iter().enumerate() {
            for k in 0..dim {
                m[(v * dim + k, u * dim + k)] = 1.0;
            }
        }
        m
    }

    /// `(map.source -> map.target)` pairs as cell names.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        self.vertex_map
            .iter()
            .enumerate()
            .map(|(v, &u)| (self.source_cells[v].as_str(), self.target_cells[u].as_str()))
            .collect()
    }
}

impl fmt::Display for GraphFibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a}->{b}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    dims.iter()
        .map(|&d| {
            let o = acc;
            acc += d;
            o
        })
        .collect()
}

/// `g ∘ f`, where `f` lands in the source of `g`.
pub fn compose(g: &GraphFibration, f: &GraphFibration) -> Result<GraphFibration> {
    if f.target != g.source || f.target_cells != g.source_cells {
        return Err(Error::CompositionMismatch { first: f.target.clone(), second: g.source.clone() });
    }
    let arrow_map = match (&g.arrow_map, &f.arrow_map) {
        (Some(ga), Some(fa)) => Some(fa.iter().map(|&a| ga[a]).collect()),
        _ => None,
    };
    Ok(GraphFibration {
        source: f.source.clone(),
        target: g.target.clone(),
        source_cells: f.source_cells.clone(),
        target_cells: g.target_cells.clone(),
        vertex_map: f.vertex_map.iter().map(|&v| g.vertex_map[v]).collect(),
        arrow_map,
    })
}

/// Arrow map of a digraph fibration, or `None` when `map` is not one.
pub fn induced_arrow_map(map: &[usize], n1: &Network, n2: &Network) -> Option<Vec<usize>> {
    if map.len() != n1.len() || map.iter().any(|&u| u >= n2.len()) {
        return None;
    }
    if (0..n1.len()).any(|v| n1.cell_colors()[v] != n2.cell_colors()[map[v]]) {
        return None;
    }
    let mut ins2: Vec<Vec<usize>> = vec![Vec::new(); n2.len()];
    for (i, a) in n2.arrows().iter().enumerate() {
        ins2[a.target].push(i);
    }
    let mut ins1: Vec<Vec<usize>> = vec![Vec::new(); n1.len()];
    for (i, a) in n1.arrows().iter().enumerate() {
        ins1[a.target].push(i);
    }
    let mut arrow_map = vec![usize::MAX; n1.arrows().len()];
    for v in 0..n1.len() {
        let targets = &ins2[map[v]];
        if targets.len() != ins1[v].len() {
            return None;
        }
        let mut used = vec![false; targets.len()];
        for &a1 in &ins1[v] {
            let arrow = &n1.arrows()[a1];
            let hit = targets.iter().enumerate().position(|(k, &a2)| {
                let b = &n2.arrows()[a2];
                !used[k] && b.color == arrow.color && b.source == map[arrow.source]
            })?;
            used[hit] = true;
            arrow_map[a1] = targets[hit];
        }
    }
    Some(arrow_map)
}

/// Checks the fibration conditions for a vertex map between digraphs.
pub fn check_fibration(map: &[usize], n1: &Network, n2: &Network) -> bool {
    induced_arrow_map(map, n1, n2).is_some()
}

/// Checks `φ ∘ σ = σ' ∘ φ` for every input map, matching maps by color.
pub fn check_fibration_input_maps(map: &[usize], n1: &InputMapNetwork, n2: &InputMapNetwork) -> bool {
    if map.len() != n1.len() || map.iter().any(|&u| u >= n2.len()) {
        return false;
    }
    if (0..n1.len()).any(|v| n1.colors()[n1.cell_color(v)] != n2.colors()[n2.cell_color(map[v])]) {
        return false;
    }
    for m1 in n1.maps() {
        let Some(m2) = n2.map_by_color(&m1.color) else {
            return false;
        };
        for &v in n1.members(m1.map.dom) {
            if map[n1.apply(&m1.map, v)] != n2.apply(&m2.map, map[v]) {
                return false;
            }
        }
    }
    true
}

fn check_signatures(n1: &InputMapNetwork, n2: &InputMapNetwork) -> Result<()> {
    let (s1, s2) = (n1.signatures(), n2.signatures());
    if s1 != s2 {
        let diff: BTreeMap<_, _> = s1.iter().filter(|(k, v)| s2.get(*k) != Some(v)).collect();
        return Err(Error::SignatureMismatch(format!(
            "{} and {} differ in input maps {:?}",
            n1.name(),
            n2.name(),
            diff.keys().collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// All fibrations between two input-map networks, in lexicographic order of
/// the vertex map.
pub fn enumerate_fibrations(n1: &InputMapNetwork, n2: &InputMapNetwork, limit: usize) -> Result<Vec<GraphFibration>> {
    check_signatures(n1, n2)?;
    if n1.len() + n2.len() > limit {
        return Err(Error::TooLarge { size: n1.len() + n2.len(), limit });
    }
    let pairs: Vec<(usize, usize)> = n1
        .maps()
        .iter()
        .map(|m| {
            let j = n2.maps().iter().position(|x| x.color == m.color).unwrap();
            (n1.maps().iter().position(|x| x.color == m.color).unwrap(), j)
        })
        .collect();
    let mut found = Vec::new();
    let mut map = vec![None; n1.len()];
    search_input_maps(n1, n2, &pairs, &mut map, &mut found);
    found.sort();
    Ok(found.into_iter().map(|m| GraphFibration::new(n1.name(), n1.cells(), n2.name(), n2.cells(), m)).collect())
}

fn search_input_maps(
    n1: &InputMapNetwork,
    n2: &InputMapNetwork,
    pairs: &[(usize, usize)],
    map: &mut Vec<Option<usize>>,
    found: &mut Vec<Vec<usize>>,
) {
    let Some(v) = map.iter().position(|m| m.is_none()) else {
        found.push(map.iter().map(|m| m.unwrap()).collect());
        return;
    };
    let color = &n1.colors()[n1.cell_color(v)];
    for t in 0..n2.len() {
        if &n2.colors()[n2.cell_color(t)] != color {
            continue;
        }
        let saved = map.clone();
        if propagate(n1, n2, pairs, map, v, t) {
            search_input_maps(n1, n2, pairs, map, found);
        }
        *map = saved;
    }
}

/// Assigns `v -> t` and every image forced by intertwining; false on conflict.
fn propagate(
    n1: &InputMapNetwork,
    n2: &InputMapNetwork,
    pairs: &[(usize, usize)],
    map: &mut [Option<usize>],
    v: usize,
    t: usize,
) -> bool {
    let mut stack = vec![(v, t)];
    while let Some((v, t)) = stack.pop() {
        match map[v] {
            Some(u) if u != t => return false,
            Some(_) => continue,
            None => map[v] = Some(t),
        }
        for &(i, j) in pairs {
            let (m1, m2) = (&n1.maps()[i].map, &n2.maps()[j].map);
            if m1.dom != n1.cell_color(v) {
                continue;
            }
            if n2.cell_color(t) != m2.dom {
                return false;
            }
            stack.push((n1.apply(m1, v), n2.apply(m2, t)));
        }
    }
    true
}

/// All digraph fibrations `n1 -> n2` whose vertex map picks `v`'s image from
/// `candidates[v]`; sorted lexicographically.
pub fn enumerate_digraph_fibrations(
    n1: &Network,
    n2: &Network,
    candidates: &[Vec<usize>],
    limit: usize,
) -> Result<Vec<GraphFibration>> {
    if n1.len() + n2.len() > limit {
        return Err(Error::TooLarge { size: n1.len() + n2.len(), limit });
    }
    let mut sources: Vec<Vec<usize>> = vec![Vec::new(); n1.len()];
    for a in n1.arrows() {
        sources[a.target].push(a.source);
    }
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); n1.len()];
    for v in 0..n1.len() {
        let r = sources[v].iter().copied().chain(std::iter::once(v)).max().unwrap();
        ready_at[r].push(v);
    }
    let mut profiles2: Vec<Vec<(&str, usize)>> = vec![Vec::new(); n2.len()];
    for a in n2.arrows() {
        profiles2[a.target].push((a.color.as_str(), a.source));
    }
    for p in &mut profiles2 {
        p.sort_unstable();
    }
    let mut found = Vec::new();
    let mut map = vec![0; n1.len()];
    digraph_search(n1, n2, candidates, &ready_at, &profiles2, 0, &mut map, &mut found);
    Ok(found
        .into_iter()
        .map(|m| {
            let arrows = induced_arrow_map(&m, n1, n2);
            let mut f = GraphFibration::new(n1.name(), n1.cells(), n2.name(), n2.cells(), m);
            f.arrow_map = arrows;
            f
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn digraph_search(
    n1: &Network,
    n2: &Network,
    candidates: &[Vec<usize>],
    ready_at: &[Vec<usize>],
    profiles2: &[Vec<(&str, usize)>],
    i: usize,
    map: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if i == n1.len() {
        found.push(map.clone());
        return;
    }
    for &t in &candidates[i] {
        if n1.cell_colors()[i] != n2.cell_colors()[t] {
            continue;
        }
        map[i] = t;
        let ok = ready_at[i].iter().all(|&v| {
            let mut prof: Vec<(&str, usize)> =
                n1.arrows().iter().filter(|a| a.target == v).map(|a| (a.color.as_str(), map[a.source])).collect();
            prof.sort_unstable();
            prof == profiles2[map[v]]
        });
        if ok {
            digraph_search(n1, n2, candidates, ready_at, profiles2, i + 1, map, found);
        }
    }
}
