use std::collections::BTreeMap;

use cellnet::dynamics::{random_responses, AdmissibleSystem, ResponseFunction};
use cellnet::fundamental::{closure, fundamental_network};
use cellnet::network::{Arrow, InputMapNetwork, Network, Partition, DEFAULT_CELL_COLOR};
use cellnet::rng::SplitMix64;
use cellnet::{bundled, LoadedNetwork, SemigroupTable};

pub fn s(x: &str) -> String {
    x.to_string()
}

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| s(x)).collect()
}

pub fn imn(name: &str) -> InputMapNetwork {
    bundled::network(name).input_maps().unwrap()
}

pub fn table(name: &str) -> SemigroupTable {
    closure(&imn(name))
}

pub fn fundamental(name: &str) -> InputMapNetwork {
    fundamental_network(&table(name)).unwrap()
}

/// Partition from blocks of cell names.
pub fn partition(cells: &[String], blocks: &[&[&str]]) -> Partition {
    Partition::new(
        blocks.iter().map(|b| b.iter().map(|id| cells.iter().position(|c| c == id).unwrap()).collect()).collect(),
    )
}

/// Product table rendered with element names, `*` for undefined entries.
pub fn named_table(st: &SemigroupTable) -> Vec<Vec<String>> {
    st.product_table().iter().map(|row| row.iter().map(|e| e.map_or(s("*"), |i| st.name(i))).collect()).collect()
}

/// Random single-colored network with `maps` distinct non-identity input maps.
pub fn random_homogeneous(seed: u64, cells: usize, maps: usize) -> InputMapNetwork {
    let mut rng = SplitMix64::new(seed);
    let ids: Vec<String> = (1..=cells).map(|i| format!("v{i}")).collect();
    let mut chosen: Vec<Vec<usize>> = vec![(0..cells).collect()];
    while chosen.len() < maps + 1 {
        let m: Vec<usize> = (0..cells).map(|_| (rng.next_u64() % cells as u64) as usize).collect();
        if !chosen.contains(&m) {
            chosen.push(m);
        }
    }
    let spec = chosen[1..]
        .iter()
        .enumerate()
        .map(|(k, m)| {
            (format!("c{k}"), s(DEFAULT_CELL_COLOR), s(DEFAULT_CELL_COLOR), m.iter().map(|&v| ids[v].clone()).collect())
        })
        .collect();
    InputMapNetwork::new(format!("R{seed}"), ids.clone(), vec![s(DEFAULT_CELL_COLOR); cells], spec).unwrap()
}

/// Random valid digraph network: up to two cell colors, each arrow color
/// delivering a fixed number of arrows to every cell of its target color.
pub fn random_digraph(seed: u64, cells: usize) -> Network {
    let mut rng = SplitMix64::new(seed);
    let two = cells > 1 && rng.next_u64().is_multiple_of(2);
    let colors: Vec<String> =
        (0..cells).map(|v| if two && (v == 0 || rng.next_u64().is_multiple_of(2)) { s("p") } else { s("q") }).collect();
    let mut colors = colors;
    if two && !colors.iter().any(|c| c == "q") {
        colors[cells - 1] = s("q");
    }
    let palette: Vec<String> = {
        let mut p: Vec<String> = colors.clone();
        p.sort();
        p.dedup();
        p
    };
    let members = |c: &str| -> Vec<usize> { (0..cells).filter(|&v| colors[v] == c).collect() };
    let mut arrows = Vec::new();
    let n_colors = 1 + (rng.next_u64() % 3) as usize;
    for k in 0..n_colors {
        let src = &palette[(rng.next_u64() % palette.len() as u64) as usize];
        let tgt = &palette[(rng.next_u64() % palette.len() as u64) as usize];
        let count = 1 + (rng.next_u64() % 2) as usize;
        let sources = members(src);
        for &v in &members(tgt) {
            for _ in 0..count {
                let u = sources[(rng.next_u64() % sources.len() as u64) as usize];
                arrows.push(Arrow { color: format!("a{k}"), source: u, target: v });
            }
        }
    }
    let ids = (1..=cells).map(|i| format!("v{i}")).collect();
    Network::from_parts(format!("G{seed}"), ids, colors, arrows).unwrap()
}

/// Every set partition of `0..n` that keeps cell colors apart.
pub fn all_partitions(colors: &[String]) -> Vec<Partition> {
    let n = colors.len();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, colors: &[String], out: &mut Vec<Partition>) {
        if i == labels.len() {
            let p = Partition::from_labels(labels);
            if p.blocks().iter().all(|b| b.iter().all(|&v| colors[v] == colors[b[0]])) {
                out.push(p);
            }
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, if l == max { max + 1 } else { max }, labels, colors, out);
        }
    }
    if n > 0 {
        rec(0, 0, &mut labels, colors, &mut out);
    }
    out
}

/// Balanced test by explicit search for block-respecting input bijections.
pub fn balanced_by_bijection(net: &Network, p: &Partition) -> bool {
    let labels = p.labels(net.len());
    let ins = |v: usize| -> Vec<(String, usize)> {
        net.arrows().iter().filter(|a| a.target == v).map(|a| (a.color.clone(), labels[a.source])).collect()
    };
    fn extend(i: usize, a: &[(String, usize)], b: &[(String, usize)], used: &mut Vec<bool>) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && a[i] == b[j] {
                used[j] = true;
                if extend(i + 1, a, b, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    p.blocks().iter().all(|block| {
        block.iter().all(|&v| {
            let (a, b) = (ins(v), ins(block[0]));
            a.len() == b.len() && extend(0, &a, &b, &mut vec![false; b.len()])
        })
    })
}

/// Random scalar degree-3 responses for the network.
pub fn responses(net: &LoadedNetwork, seed: u64) -> BTreeMap<String, ResponseFunction> {
    random_responses(net, seed, 3, 0).unwrap()
}

pub fn system(net: &InputMapNetwork, responses: &BTreeMap<String, ResponseFunction>) -> AdmissibleSystem {
    AdmissibleSystem::new(&LoadedNetwork::InputMaps(net.clone()), responses).unwrap()
}
