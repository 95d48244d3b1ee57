//! Composition closure of input maps and fundamental networks.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fibration::{check_fibration_input_maps, induced_arrow_map, GraphFibration};
use crate::network::{InputMap, InputMapNetwork, Network, Partition, TypedMap};

/// The semigroup (or semigroupoid) generated by the input maps of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupTable {
    base: String,
    colors: Vec<String>,
    elements: Vec<TypedMap>,
    /// `product[i][j]` is the index of `elements[i] ∘ elements[j]`.
    product: Vec<Vec<Option<usize>>>,
    generators: Vec<usize>,
    generator_colors: Vec<String>,
}

impl SemigroupTable {
    pub fn elements(&self) -> &[TypedMap] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn product_table(&self) -> &[Vec<Option<usize>>] {
        &self.product
    }

    /// Element index of each input map, in the network's map order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_colors(&self) -> &[String] {
        &self.generator_colors
    }

    pub fn is_homogeneous(&self) -> bool {
        self.colors.len() <= 1
    }

    /// `elements[i] ∘ elements[j]`.
    pub fn compose(&self, i: usize, j: usize) -> Result<usize> {
        self.product[i][j]
            .ok_or_else(|| Error::SignatureError(format!("{} ∘ {} is not composable", self.name(i), self.name(j))))
    }

    /// Element names: `σj` for a semigroup, `σj^{d,c}` with `j` counted within
    /// the signature for a semigroupoid.
    pub fn name(&self, i: usize) -> String {
        if self.is_homogeneous() {
            return format!("σ{}", i + 1);
        }
        let e = &self.elements[i];
        let j = self.elements[..i].iter().filter(|x| (x.cod, x.dom) == (e.cod, e.dom)).count() + 1;
        format!("σ{}^{{{},{}}}", j, self.colors[e.cod], self.colors[e.dom])
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.name(i)).collect()
    }

    /// Associativity on every composable triple.
    pub fn is_associative(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let Some(ij) = self.product[i][j] else { continue };
                for k in 0..n {
                    let (Some(jk), Some(ij_k)) = (self.product[j][k], self.product[ij][k]) else {
                        continue;
                    };
                    if self.product[i][jk] != Some(ij_k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Elements whose domain is the given color, in element order.
    pub fn with_domain(&self, color: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].dom == color).collect()
    }

    fn require_homogeneous(&self) -> Result<()> {
        if self.is_homogeneous() {
            Ok(())
        } else {
            Err(Error::SignatureError("operation needs a single cell color".into()))
        }
    }
}

/// Closure of the input maps under composition. Elements are numbered by
/// discovery: generators first, then products `σk ∘ σj` scanned by generator
/// `k` and growing element index `j`, repeated until nothing new appears.
/// With several cell colors the result is stably ordered by signature.
pub fn closure(imn: &InputMapNetwork) -> SemigroupTable {
    let gens: Vec<&InputMap> = imn.maps().iter().collect();
    let mut elements: Vec<TypedMap> = Vec::new();
    let mut index: HashMap<TypedMap, usize> = HashMap::new();
    let mut generators = Vec::with_capacity(gens.len());
    for g in &gens {
        let i = *index.entry(g.map.clone()).or_insert_with(|| {
            elements.push(g.map.clone());
            elements.len() - 1
        });
        generators.push(i);
    }
    loop {
        let before = elements.len();
        for g in &gens {
            let mut j = 0;
            while j < elements.len() {
                if let Some(p) = g.map.after(&elements[j]) {
                    if !index.contains_key(&p) {
                        index.insert(p.clone(), elements.len());
                        elements.push(p);
                    }
                }
                j += 1;
            }
        }
        if elements.len() == before {
            break;
        }
    }
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by_key(|&i| (elements[i].cod, elements[i].dom));
    let mut rank = vec![0; elements.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let elements: Vec<TypedMap> = order.iter().map(|&i| elements[i].clone()).collect();
    let index: HashMap<&TypedMap, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let product = elements.iter().map(|a| elements.iter().map(|b| a.after(b).map(|p| index[&p])).collect()).collect();
    SemigroupTable {
        base: imn.name().to_string(),
        colors: imn.colors().to_vec(),
        generators: generators.iter().map(|&g| rank[g]).collect(),
        generator_colors: gens.iter().map(|g| g.color.clone()).collect(),
        elements,
        product,
    }
}

/// The fundamental network of a single-colored network.
pub fn fundamental_network(st: &SemigroupTable) -> Result<InputMapNetwork> {
    st.require_homogeneous()?;
    fundamental_network_color(st, 0)
}

/// The fundamental network on the elements with domain `color`, each cell
/// colored by its codomain. Empty when no element starts at `color`.
pub fn fundamental_network_color(st: &SemigroupTable, color: usize) -> Result<InputMapNetwork> {
    if color >= st.colors.len() {
        return Err(Error::InvalidInputMaps(format!("no cell color with index {color}")));
    }
    let cells_idx = st.with_domain(color);
    let position: HashMap<usize, usize> = cells_idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let used: Vec<usize> = {
        let mut u: Vec<usize> = cells_idx.iter().map(|&i| st.elements[i].cod).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    let ncolor = |c: usize| used.iter().position(|&x| x == c);
    let cells: Vec<String> = cells_idx.iter().map(|&i| st.name(i)).collect();
    let cell_colors: Vec<usize> = cells_idx.iter().map(|&i| ncolor(st.elements[i].cod).unwrap()).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); used.len()];
    let mut local = vec![0; cells.len()];
    for (k, &c) in cell_colors.iter().enumerate() {
        local[k] = members[c].len();
        members[c].push(k);
    }
    let mut maps = Vec::new();
    for (&g, gcolor) in st.generators.iter().zip(&st.generator_colors) {
        let e = &st.elements[g];
        let Some(dom) = ncolor(e.dom) else { continue };
        let cod = ncolor(e.cod).expect("products stay in the same domain class");
        let image = members[dom].iter().map(|&k| local[position[&st.product[g][cells_idx[k]].unwrap()]]).collect();
        maps.push(InputMap { color: gcolor.clone(), map: TypedMap { dom, cod, image } });
    }
    let name = if st.is_homogeneous() { format!("{}~", st.base) } else { format!("{}~{}", st.base, st.colors[color]) };
    let colors = used.iter().map(|&c| st.colors[c].clone()).collect();
    InputMapNetwork::from_typed(name, cells, colors, cell_colors, maps, false)
}

/// The fundamental network carrying every element `σ̃i` as an input map.
pub fn extended_fundamental_network(st: &SemigroupTable) -> Result<InputMapNetwork> {
    st.require_homogeneous()?;
    let n = st.len();
    let cells = st.names();
    let color = st.colors.first().cloned().unwrap_or_default();
    let maps = (0..n)
        .filter(|&i| !st.elements[i].is_identity())
        .map(|i| InputMap {
            color: st.name(i),
            map: TypedMap { dom: 0, cod: 0, image: (0..n).map(|j| st.product[i][j].unwrap()).collect() },
        })
        .collect();
    InputMapNetwork::from_typed(format!("{}~ext", st.base), cells, vec![color], vec![0; n], maps, true)
}

/// `φ_v(σj) = σj(v)` from the fundamental network of `v`'s color onto the base.
pub fn base_fibrations(st: &SemigroupTable, imn: &InputMapNetwork) -> Result<Vec<GraphFibration>> {
    let mut out = Vec::with_capacity(imn.len());
    let fundamentals: Vec<InputMapNetwork> =
        (0..st.colors.len()).map(|c| fundamental_network_color(st, c)).collect::<Result<_>>()?;
    for v in 0..imn.len() {
        let c = imn.cell_color(v);
        let fund = &fundamentals[c];
        let map = st.with_domain(c).iter().map(|&i| imn.apply(&st.elements[i], v)).collect();
        out.push(GraphFibration::new(fund.name(), fund.cells(), imn.name(), imn.cells(), map));
    }
    Ok(out)
}

/// Partition of the fundamental network grouping elements that agree at `v`.
pub fn base_cell_partition(st: &SemigroupTable, imn: &InputMapNetwork, v: usize) -> Partition {
    let labels: Vec<usize> = st.with_domain(imn.cell_color(v)).iter().map(|&i| imn.apply(&st.elements[i], v)).collect();
    Partition::from_labels(&labels)
}

/// Subnetwork of cells with a directed path to `v`, and its embedding.
pub fn input_network(net: &Network, v: usize) -> Result<(Network, GraphFibration)> {
    if v >= net.len() {
        return Err(Error::UnknownCell(format!("#{v}")));
    }
    let mut inside = vec![false; net.len()];
    inside[v] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for a in net.arrows().iter().filter(|a| a.target == u) {
            if !std::mem::replace(&mut inside[a.source], true) {
                queue.push_back(a.source);
            }
        }
    }
    let kept: Vec<usize> = (0..net.len()).filter(|&u| inside[u]).collect();
    let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &u)| (u, k)).collect();
    let arrows = net
        .arrows()
        .iter()
        .filter(|a| inside[a.target])
        .map(|a| crate::network::Arrow {
            color: a.color.clone(),
            source: new_index[&a.source],
            target: new_index[&a.target],
        })
        .collect();
    let sub = Network::from_parts(
        format!("{}_({})", net.name(), net.cells()[v]),
        kept.iter().map(|&u| net.cells()[u].clone()).collect(),
        kept.iter().map(|&u| net.cell_colors()[u].clone()).collect(),
        arrows,
    )?;
    let mut emb = GraphFibration::new(sub.name(), sub.cells(), net.name(), net.cells(), kept);
    emb.arrow_map = induced_arrow_map(&emb.vertex_map, &sub, net);
    Ok((sub, emb))
}

/// Right multiplications `φ_{σi}(σj) = σj ∘ σi`, one per element.
pub fn self_fibrations_fundamental(st: &SemigroupTable) -> Result<Vec<GraphFibration>> {
    let fund = fundamental_network(st)?;
    Ok((0..st.len())
        .map(|i| {
            let map = (0..st.len()).map(|j| st.product[j][i].unwrap()).collect();
            GraphFibration::new(fund.name(), fund.cells(), fund.name(), fund.cells(), map)
        })
        .collect())
}

/// Right multiplications `σj ↦ σj ∘ σi` between per-color fundamental
/// networks, one per element.
pub fn groupoid_fibrations(st: &SemigroupTable) -> Result<Vec<GraphFibration>> {
    let fundamentals: Vec<InputMapNetwork> =
        (0..st.colors.len()).map(|c| fundamental_network_color(st, c)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(st.len());
    for i in 0..st.len() {
        let (b, c) = (st.elements[i].dom, st.elements[i].cod);
        let from = st.with_domain(c);
        let to = st.with_domain(b);
        let map = from
            .iter()
            .map(|&j| {
                let p = st.product[j][i].expect("σj ends where σi starts");
                to.iter().position(|&x| x == p).unwrap()
            })
            .collect();
        let (src, dst) = (&fundamentals[c], &fundamentals[b]);
        out.push(GraphFibration::new(src.name(), src.cells(), dst.name(), dst.cells(), map));
    }
    Ok(out)
}

/// Verifies that the fundamental network of the fundamental network is
/// isomorphic to it via `σj ↦ σ̃j`, and returns that isomorphism.
pub fn double_fundamental_check(st: &SemigroupTable) -> Result<GraphFibration> {
    let fund = fundamental_network(st)?;
    let st2 = closure(&fund);
    let fund2 = fundamental_network(&st2)?;
    let n = st.len();
    let index: HashMap<&TypedMap, usize> = st2.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut map = Vec::with_capacity(n);
    for j in 0..n {
        let left = TypedMap { dom: 0, cod: 0, image: (0..n).map(|k| st.product[j][k].unwrap()).collect() };
        let Some(&i) = index.get(&left) else {
            return Err(Error::IsoFailure(format!("left multiplication by {} is not generated", st.name(j))));
        };
        map.push(i);
    }
    let iso = GraphFibration::new(fund.name(), fund.cells(), fund2.name(), fund2.cells(), map);
    if !iso.is_bijective() {
        return Err(Error::IsoFailure("element map is not a bijection".into()));
    }
    if !check_fibration_input_maps(&iso.vertex_map, &fund, &fund2) {
        return Err(Error::IsoFailure("element map does not intertwine the input maps".into()));
    }
    Ok(iso)
}
