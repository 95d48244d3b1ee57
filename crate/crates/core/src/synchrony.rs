//! Balanced partitions, their enumeration and quotient networks.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::fibration::GraphFibration;
use crate::network::{InputMap, InputMapNetwork, Network, Partition, TypedMap};

/// Default cell-count limit for exhaustive enumeration.
pub const ENUMERATION_LIMIT: usize = 12;

fn check_color_refining(colors: &[impl PartialEq], p: &Partition) -> Result<()> {
    p.check_cover(colors.len())?;
    for b in p.blocks() {
        if b.iter().any(|&v| colors[v] != colors[b[0]]) {
            return Err(Error::InvalidPartition("block mixes cell colors".into()));
        }
    }
    Ok(())
}

/// Count criterion: cells in a block receive equally many arrows of each
/// color from each block.
pub fn is_balanced(net: &Network, p: &Partition) -> Result<bool> {
    check_color_refining(net.cell_colors(), p)?;
    let labels = p.labels(net.len());
    let profiles = input_profiles(net, &labels);
    Ok(p.blocks().iter().all(|b| b.iter().all(|&v| profiles[v] == profiles[b[0]])))
}

fn input_profiles<'a>(net: &'a Network, labels: &[usize]) -> Vec<BTreeMap<(&'a str, usize), usize>> {
    let mut profiles = vec![BTreeMap::new(); net.len()];
    for a in net.arrows() {
        *profiles[a.target].entry((a.color.as_str(), labels[a.source])).or_insert(0) += 1;
    }
    profiles
}

/// Input-map criterion: each map sends every block into a single block.
pub fn is_balanced_input_maps(net: &InputMapNetwork, p: &Partition) -> Result<bool> {
    check_color_refining(net.cell_colors(), p)?;
    let labels = p.labels(net.len());
    for m in net.maps() {
        for b in p.blocks() {
            if net.cell_color(b[0]) != m.map.dom {
                continue;
            }
            let first = labels[net.apply(&m.map, b[0])];
            if b.iter().any(|&v| labels[net.apply(&m.map, v)] != first) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical order: more blocks first, then lexicographic on blocks.
pub fn canonical_order(a: &Partition, b: &Partition) -> std::cmp::Ordering {
    b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b))
}

/// All balanced partitions of a network with at most `limit` cells.
pub fn enumerate_balanced(net: &Network, limit: usize) -> Result<Vec<Partition>> {
    let n = net.len();
    if n > limit {
        return Err(Error::TooLarge { size: n, limit });
    }
    let color_names = net.arrow_color_order();
    let color_rank: HashMap<&str, usize> = color_names.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let cell_color_names = net.color_order();
    let cell_color: Vec<usize> =
        net.cell_colors().iter().map(|c| cell_color_names.iter().position(|x| x == c).unwrap()).collect();
    let mut inputs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for a in net.arrows() {
        inputs[a.target].push((color_rank[a.color.as_str()], a.source));
    }
    // A cell's input profile is known once it and all its sources are labeled.
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, ins) in inputs.iter().enumerate() {
        let r = ins.iter().map(|x| x.1).chain(std::iter::once(v)).max().unwrap();
        ready_at[r].push(v);
    }
    let mut search = Search {
        n,
        cell_color: &cell_color,
        inputs: &inputs,
        ready_at: &ready_at,
        labels: vec![0; n],
        block_color: Vec::new(),
        reference: Vec::new(),
        found: Vec::new(),
    };
    if n == 0 {
        return Ok(vec![Partition::new(Vec::new())]);
    }
    search.assign(0);
    let mut found = search.found;
    found.sort_by(canonical_order);
    Ok(found)
}

struct Search<'a> {
    n: usize,
    cell_color: &'a [usize],
    inputs: &'a [Vec<(usize, usize)>],
    ready_at: &'a [Vec<usize>],
    labels: Vec<usize>,
    block_color: Vec<usize>,
    reference: Vec<Option<Vec<(usize, usize)>>>,
    found: Vec<Partition>,
}

impl Search<'_> {
    fn profile(&self, v: usize) -> Vec<(usize, usize)> {
        let mut p: Vec<(usize, usize)> = self.inputs[v].iter().map(|&(c, s)| (c, self.labels[s])).collect();
        p.sort_unstable();
        p
    }

    fn assign(&mut self, i: usize) {
        if i == self.n {
            self.found.push(Partition::from_labels(&self.labels));
            return;
        }
        let blocks = self.block_color.len();
        for b in 0..=blocks {
            if b < blocks && self.block_color[b] != self.cell_color[i] {
                continue;
            }
            self.labels[i] = b;
            if b == blocks {
                self.block_color.push(self.cell_color[i]);
                self.reference.push(None);
            }
            let saved = self.reference.clone();
            let mut ok = true;
            for &v in &self.ready_at[i] {
                let prof = self.profile(v);
                let slot = &mut self.reference[self.labels[v]];
                match slot {
                    Some(r) if *r != prof => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => *slot = Some(prof),
                }
            }
            if ok {
                self.assign(i + 1);
            }
            self.reference = saved;
            if b == blocks {
                self.block_color.pop();
                self.reference.pop();
            }
        }
    }
}

/// Quotient network over a balanced partition, with the projection fibration.
pub fn quotient(net: &InputMapNetwork, p: &Partition) -> Result<(InputMapNetwork, GraphFibration)> {
    if !is_balanced_input_maps(net, p)? {
        return Err(Error::NotBalanced);
    }
    let labels = p.labels(net.len());
    let cells: Vec<String> =
        p.blocks().iter().map(|b| b.iter().map(|&v| net.cells()[v].as_str()).collect::<Vec<_>>().join("+")).collect();
    let block_colors: Vec<usize> = p.blocks().iter().map(|b| net.cell_color(b[0])).collect();
    // Quotient colors keep the parent's color order.
    let used: Vec<usize> = {
        let mut u: Vec<usize> = Vec::new();
        for &c in &block_colors {
            if !u.contains(&c) {
                u.push(c);
            }
        }
        u
    };
    let colors: Vec<String> = used.iter().map(|&c| net.colors()[c].clone()).collect();
    let qcolor = |c: usize| used.iter().position(|&x| x == c).unwrap();
    let cell_colors: Vec<usize> = block_colors.iter().map(|&c| qcolor(c)).collect();
    let mut members = vec![Vec::new(); colors.len()];
    let mut local = vec![0; cells.len()];
    for (k, &c) in cell_colors.iter().enumerate() {
        local[k] = members[c].len();
        members[c].push(k);
    }
    let mut maps = Vec::new();
    for m in net.maps() {
        if !used.contains(&m.map.dom) {
            continue;
        }
        let dom = qcolor(m.map.dom);
        let cod = qcolor(m.map.cod);
        let image = members[dom].iter().map(|&k| local[labels[net.apply(&m.map, p.blocks()[k][0])]]).collect();
        maps.push(InputMap { color: m.color.clone(), map: TypedMap { dom, cod, image } });
    }
    let name = format!("{}/P", net.name());
    let q = InputMapNetwork::from_typed(name, cells, colors, cell_colors, maps, false)?;
    let fib = GraphFibration::new(net.name(), net.cells(), q.name(), q.cells(), labels);
    Ok((q, fib))
}

/// Orthogonal projection onto the synchrony subspace of `p` for states with
/// one coordinate per cell.
pub fn syn_subspace_project(p: &Partition, x: &[f64]) -> Result<Vec<f64>> {
    let n = p.blocks().iter().map(|b| b.len()).sum();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    syn_subspace_project_dims(p, x, &vec![1; n])
}

/// Block-mean projection for states whose cell `v` has `dims[v]` coordinates.
pub fn syn_subspace_project_dims(p: &Partition, x: &[f64], dims: &[usize]) -> Result<Vec<f64>> {
    let total: usize = dims.iter().sum();
    if total != x.len() {
        return Err(Error::DimensionMismatch { expected: total, found: x.len() });
    }
    p.check_cover(dims.len())?;
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let mut out = x.to_vec();
    for b in p.blocks() {
        let d = dims[b[0]];
        if let Some(&v) = b.iter().find(|&&v| dims[v] != d) {
            return Err(Error::DimensionMismatch { expected: d, found: dims[v] });
        }
        for k in 0..d {
            let mean = b.iter().map(|&v| x[offsets[v] + k]).sum::<f64>() / b.len() as f64;
            for &v in b {
                out[offsets[v] + k] = mean;
            }
        }
    }
    Ok(out)
}
