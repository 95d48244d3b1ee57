//! Input subgraphs over a cell set, connected sums and interior symmetries.

use crate::error::{Error, Result};
use crate::exact::{same_column_span, RatMatrix};
use crate::fibration::{check_fibration, compose, enumerate_digraph_fibrations, induced_arrow_map, GraphFibration};
use crate::network::{Arrow, Network, Partition};
use crate::synchrony::is_balanced;

/// Default combined cell-count limit for interior-symmetry searches.
pub const INTERIOR_LIMIT: usize = 32;

/// The input subgraph over a cell set `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    /// Cells of `S` and every source of an arrow into `S`, with exactly the
    /// arrows into `S`.
    pub network: Network,
    /// Indices (into `network`) of the cells outside `S`.
    pub boundary: Vec<usize>,
    /// Index in the parent network of each subgraph cell.
    pub inclusion: Vec<usize>,
}

impl Subgraph {
    /// Indices (into `network`) of the cells of `S`.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.network.len()).filter(|v| !self.boundary.contains(v)).collect()
    }
}

fn check_subset(net: &Network, s: &[usize]) -> Result<Vec<bool>> {
    if s.is_empty() {
        return Err(Error::InvalidPartition("cell set must be nonempty".into()));
    }
    let mut inside = vec![false; net.len()];
    for &v in s {
        if v >= net.len() {
            return Err(Error::UnknownCell(format!("#{v}")));
        }
        inside[v] = true;
    }
    Ok(inside)
}

/// Resolves cell ids to indices.
pub fn cell_set(net: &Network, ids: &[&str]) -> Result<Vec<usize>> {
    ids.iter().map(|id| net.cell_index(id)).collect()
}

pub fn subgraph_over(net: &Network, s: &[usize]) -> Result<Subgraph> {
    let inside = check_subset(net, s)?;
    let mut keep = inside.clone();
    for a in net.arrows() {
        if inside[a.target] {
            keep[a.source] = true;
        }
    }
    let cells: Vec<usize> = (0..net.len()).filter(|&v| keep[v]).collect();
    let local = |v: usize| cells.iter().position(|&c| c == v).unwrap();
    let arrows = net
        .arrows()
        .iter()
        .filter(|a| inside[a.target])
        .map(|a| Arrow { color: a.color.clone(), source: local(a.source), target: local(a.target) })
        .collect();
    let network = Network::from_parts(
        format!("{}^S", net.name()),
        cells.iter().map(|&v| net.cells()[v].clone()).collect(),
        cells.iter().map(|&v| net.cell_colors()[v].clone()).collect(),
        arrows,
    )?;
    let boundary = (0..cells.len()).filter(|&k| !inside[cells[k]]).collect();
    Ok(Subgraph { network, boundary, inclusion: cells })
}

/// The connected sum of a network with its input subgraph over `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectedSum {
    /// Cells of the network followed by one copy `v#S` of each cell of `S`.
    pub network: Network,
    /// Injective fibration from the network into the sum.
    pub inclusion: GraphFibration,
    /// Surjective fibration from the sum onto the network.
    pub fold: GraphFibration,
    /// Sum index of the copy of each cell, `None` outside `S`.
    pub copies: Vec<Option<usize>>,
}

pub fn connected_sum(net: &Network, s: &[usize]) -> Result<ConnectedSum> {
    let inside = check_subset(net, s)?;
    let n = net.len();
    let mut cells = net.cells().to_vec();
    let mut colors = net.cell_colors().to_vec();
    let mut copies = vec![None; n];
    for v in 0..n {
        if inside[v] {
            copies[v] = Some(cells.len());
            cells.push(format!("{}#S", net.cells()[v]));
            colors.push(net.cell_colors()[v].clone());
        }
    }
    let mut arrows = net.arrows().to_vec();
    for a in net.arrows().iter().filter(|a| inside[a.target]) {
        arrows.push(Arrow {
            color: a.color.clone(),
            source: copies[a.source].unwrap_or(a.source),
            target: copies[a.target].unwrap(),
        });
    }
    let sum = Network::from_parts(format!("{}#S", net.name()), cells, colors, arrows)?;
    let mut inclusion = GraphFibration::new(net.name(), net.cells(), sum.name(), sum.cells(), (0..n).collect());
    inclusion.arrow_map = induced_arrow_map(&inclusion.vertex_map, net, &sum);
    let mut fold_map: Vec<usize> = (0..n).collect();
    fold_map.extend((0..n).filter(|&v| inside[v]));
    let mut fold = GraphFibration::new(sum.name(), sum.cells(), net.name(), net.cells(), fold_map);
    fold.arrow_map = induced_arrow_map(&fold.vertex_map, &sum, net);
    Ok(ConnectedSum { network: sum, inclusion, fold, copies })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorSymmetry {
    /// Self-fibration of the input subgraph.
    pub fibration: GraphFibration,
    pub invertible: bool,
}

/// Self-fibrations of the input subgraph over `S` that fix the boundary
/// pointwise and map `S` into itself, in lexicographic order.
pub fn interior_symmetries(net: &Network, s: &[usize], limit: usize) -> Result<Vec<InteriorSymmetry>> {
    let sub = subgraph_over(net, s)?;
    let m = sub.network.len();
    if 2 * m > limit {
        return Err(Error::TooLarge { size: 2 * m, limit });
    }
    let interior = sub.interior();
    let candidates: Vec<Vec<usize>> =
        (0..m).map(|v| if sub.boundary.contains(&v) { vec![v] } else { interior.clone() }).collect();
    Ok(enumerate_digraph_fibrations(&sub.network, &sub.network, &candidates, limit)?
        .into_iter()
        .map(|f| {
            let invertible = f.is_bijective();
            InteriorSymmetry { fibration: f, invertible }
        })
        .collect())
}

fn check_interior(sub: &Subgraph, phi: &GraphFibration) -> Result<()> {
    let m = sub.network.len();
    if phi.vertex_map.len() != m || phi.vertex_map.iter().any(|&t| t >= m) {
        return Err(Error::NotInteriorSymmetry("map does not act on the input subgraph".into()));
    }
    if sub.boundary.iter().any(|&b| phi.vertex_map[b] != b) {
        return Err(Error::NotInteriorSymmetry("boundary cells must stay fixed".into()));
    }
    if (0..m).any(|v| !sub.boundary.contains(&v) && sub.boundary.contains(&phi.vertex_map[v])) {
        return Err(Error::NotInteriorSymmetry("interior cells must map into the interior".into()));
    }
    if !check_fibration(&phi.vertex_map, &sub.network, &sub.network) {
        return Err(Error::NotInteriorSymmetry("map is not a fibration".into()));
    }
    Ok(())
}

/// Finest partition of the network with `v ~ φ(v)` for every `v` in `S`;
/// it is balanced for every interior symmetry.
pub fn interior_to_balanced(net: &Network, s: &[usize], phi: &GraphFibration) -> Result<Partition> {
    let sub = subgraph_over(net, s)?;
    check_interior(&sub, phi)?;
    let pairs = sub.interior().into_iter().map(|v| (sub.inclusion[v], sub.inclusion[phi.vertex_map[v]]));
    let p = Partition::from_pairs(net.len(), pairs);
    if !is_balanced(net, &p)? {
        return Err(Error::NotBalanced);
    }
    Ok(p)
}

/// The self-fibration of the connected sum acting as the identity on the
/// network and as `φ` on the copies.
pub fn extend_to_sum(net: &Network, s: &[usize], phi: &GraphFibration, sum: &ConnectedSum) -> Result<GraphFibration> {
    let sub = subgraph_over(net, s)?;
    check_interior(&sub, phi)?;
    let mut map: Vec<usize> = (0..sum.network.len()).collect();
    for v in sub.interior() {
        let from = sum.copies[sub.inclusion[v]].expect("interior cells are copied");
        let to = sum.copies[sub.inclusion[phi.vertex_map[v]]].expect("interior maps into interior");
        map[from] = to;
    }
    let arrows = induced_arrow_map(&map, &sum.network, &sum.network)
        .ok_or_else(|| Error::NotInteriorSymmetry("extension is not a fibration of the sum".into()))?;
    let mut f =
        GraphFibration::new(sum.network.name(), sum.network.cells(), sum.network.name(), sum.network.cells(), map);
    f.arrow_map = Some(arrows);
    Ok(f)
}

fn pullback_rational(f: &GraphFibration) -> RatMatrix {
    let mut m = RatMatrix::zeros(f.source_cells.len(), f.target_cells.len());
    for (v, &u) in f.vertex_map.iter().enumerate() {
        m.set(v, u, 1.into());
    }
    m
}

/// Checks exactly that pulling back `Fix((i∘j)*) ∩ Fix(φ*)` along the
/// inclusion gives the synchrony subspace of `p`.
pub fn fixed_space_matches(sum: &ConnectedSum, phi_sum: &GraphFibration, p: &Partition) -> Result<bool> {
    let fold_then_include = compose(&sum.inclusion, &sum.fold)?;
    let k = sum.network.len();
    let id = RatMatrix::identity(k);
    let constraints = pullback_rational(&fold_then_include).sub(&id).stack(&pullback_rational(phi_sum).sub(&id));
    let fixed = constraints.kernel();
    let image = pullback_rational(&sum.inclusion).mul(&fixed);
    let n = sum.inclusion.source_cells.len();
    p.check_cover(n)?;
    let mut syn = RatMatrix::zeros(n, p.num_blocks());
    for (b, block) in p.blocks().iter().enumerate() {
        for &v in block {
            syn.set(v, b, 1.into());
        }
    }
    Ok(same_column_span(&image, &syn))
}
