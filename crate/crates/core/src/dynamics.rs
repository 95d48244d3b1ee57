//! Polynomial response functions and the admissible vector fields they define.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fibration::GraphFibration;
use crate::io::LoadedNetwork;
use crate::network::{InputMapNetwork, Partition};
use crate::rng::{derive_seed, SplitMix64};

/// One monomial `coeff * prod x_i^powers[i] * prod λ_k^lpowers[k]` in output
/// component `out`. `powers` runs over the flattened arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub out: usize,
    pub powers: Vec<u32>,
    pub lpowers: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseFunction {
    input_dims: Vec<usize>,
    out_dim: usize,
    params: usize,
    terms: Vec<Term>,
    symmetric_groups: Vec<Vec<usize>>,
    arg_offsets: Vec<usize>,
}

impl ResponseFunction {
    /// Builds a response and symmetrizes it over the given groups of
    /// argument positions (0-based).
    pub fn new(
        input_dims: Vec<usize>,
        out_dim: usize,
        params: usize,
        terms: Vec<Term>,
        symmetric_groups: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let nvars: usize = input_dims.iter().sum();
        for t in &terms {
            if t.powers.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: t.powers.len() });
            }
            if t.lpowers.len() != params {
                return Err(Error::DimensionMismatch { expected: params, found: t.lpowers.len() });
            }
            if t.out >= out_dim {
                return Err(Error::InvalidResponse(format!("term output {} out of range", t.out)));
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; input_dims.len()];
        for g in symmetric_groups {
            let mut g = g;
            g.sort_unstable();
            g.dedup();
            for &p in &g {
                if p >= input_dims.len() {
                    return Err(Error::InvalidResponse(format!("symmetric position {p} out of range")));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidResponse(format!("position {p} in two symmetric groups")));
                }
                if input_dims[p] != input_dims[g[0]] {
                    return Err(Error::InvalidResponse("symmetric arguments differ in dimension".into()));
                }
            }
            if g.len() > 1 {
                groups.push(g);
            }
        }
        groups.sort();
        let arg_offsets = offsets(&input_dims);
        let mut f = ResponseFunction { input_dims, out_dim, params, terms, symmetric_groups: groups, arg_offsets };
        f.symmetrize();
        Ok(f)
    }

    /// The zero response.
    pub fn zero(input_dims: Vec<usize>, out_dim: usize, params: usize) -> Self {
        Self::new(input_dims, out_dim, params, Vec::new(), Vec::new()).expect("no terms to check")
    }

    fn symmetrize(&mut self) {
        let perms = group_permutations(&self.symmetric_groups, self.input_dims.len());
        let mut acc: BTreeMap<(usize, Vec<u32>, Vec<u32>), Vec<f64>> = BTreeMap::new();
        for t in &self.terms {
            for perm in &perms {
                let mut powers = vec![0; t.powers.len()];
                for (i, &pi) in perm.iter().enumerate() {
                    let d = self.input_dims[i];
                    let (src, dst) = (self.arg_offsets[i], self.arg_offsets[pi]);
                    powers[dst..dst + d].copy_from_slice(&t.powers[src..src + d]);
                }
                acc.entry((t.out, powers, t.lpowers.clone())).or_default().push(t.coeff);
            }
        }
        let scale = perms.len() as f64;
        self.terms = acc
            .into_iter()
            .filter_map(|((out, powers, lpowers), mut cs)| {
                cs.sort_by(f64::total_cmp);
                let coeff = cs.iter().sum::<f64>() / scale;
                (coeff != 0.0).then_some(Term { coeff, out, powers, lpowers })
            })
            .collect();
    }

    pub fn arity(&self) -> usize {
        self.input_dims.len()
    }

    pub fn input_dims(&self) -> &[usize] {
        &self.input_dims
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn symmetric_groups(&self) -> &[Vec<usize>] {
        &self.symmetric_groups
    }

    /// Argument order that sorts each symmetric group; `order[slot]` is the
    /// original argument placed in `slot`.
    fn canonical_order(&self, args: &[f64]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.arity()).collect();
        for g in &self.symmetric_groups {
            let d = self.input_dims[g[0]];
            let mut members = g.clone();
            members.sort_by(|&a, &b| {
                let (xa, xb) = (self.arg_offsets[a], self.arg_offsets[b]);
                args[xa..xa + d]
                    .iter()
                    .zip(&args[xb..xb + d])
                    .map(|(p, q)| p.total_cmp(q))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            });
            for (&slot, &arg) in g.iter().zip(&members) {
                order[slot] = arg;
            }
        }
        order
    }

    /// Flattened variable index that feeds each flattened slot.
    fn variable_order(&self, order: &[usize]) -> Vec<usize> {
        let mut vars = Vec::with_capacity(self.arg_offsets.last().map_or(0, |o| o + self.input_dims.last().unwrap()));
        for &arg in order {
            let o = self.arg_offsets[arg];
            vars.extend(o..o + self.input_dims[arg]);
        }
        vars
    }

    fn check_args(&self, args: &[f64], lambda: &[f64]) -> Result<()> {
        let nvars: usize = self.input_dims.iter().sum();
        if args.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: args.len() });
        }
        if lambda.len() != self.params {
            return Err(Error::DimensionMismatch { expected: self.params, found: lambda.len() });
        }
        Ok(())
    }

    /// Value of the response at flattened arguments.
    pub fn eval(&self, args: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
        self.check_args(args, lambda)?;
        let mut out = vec![0.0; self.out_dim];
        self.eval_into(args, lambda, &mut out);
        Ok(out)
    }

    fn eval_into(&self, args: &[f64], lambda: &[f64], out: &mut [f64]) {
        let vars = self.variable_order(&self.canonical_order(args));
        out.iter_mut().for_each(|o| *o = 0.0);
        for t in &self.terms {
            let mut v = t.coeff;
            for (slot, &p) in t.powers.iter().enumerate() {
                if p > 0 {
                    v *= args[vars[slot]].powi(p as i32);
                }
            }
            for (k, &p) in t.lpowers.iter().enumerate() {
                if p > 0 {
                    v *= lambda[k].powi(p as i32);
                }
            }
            out[t.out] += v;
        }
    }

    /// Derivative of each output with respect to each flattened argument.
    pub fn jacobian(&self, args: &[f64], lambda: &[f64]) -> Result<DMatrix<f64>> {
        self.check_args(args, lambda)?;
        let mut jac = DMatrix::zeros(self.out_dim, args.len());
        self.jacobian_into(args, lambda, &mut jac);
        Ok(jac)
    }

    fn jacobian_into(&self, args: &[f64], lambda: &[f64], jac: &mut DMatrix<f64>) {
        let vars = self.variable_order(&self.canonical_order(args));
        jac.fill(0.0);
        for t in &self.terms {
            let mut lam = t.coeff;
            for (k, &p) in t.lpowers.iter().enumerate() {
                if p > 0 {
                    lam *= lambda[k].powi(p as i32);
                }
            }
            for (slot, &p) in t.powers.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let mut v = lam * p as f64 * args[vars[slot]].powi(p as i32 - 1);
                for (other, &q) in t.powers.iter().enumerate() {
                    if other != slot && q > 0 {
                        v *= args[vars[other]].powi(q as i32);
                    }
                }
                jac[(t.out, vars[slot])] += v;
            }
        }
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

/// Every permutation of argument positions in the product of the symmetric
/// groups on `groups`; `perm[i]` is where argument `i` moves.
fn group_permutations(groups: &[Vec<usize>], arity: usize) -> Vec<Vec<usize>> {
    let mut perms = vec![(0..arity).collect::<Vec<usize>>()];
    for g in groups {
        let mut next = Vec::new();
        for p in &perms {
            for arrangement in permutations(g) {
                let mut q = p.clone();
                for (&from, &to) in g.iter().zip(&arrangement) {
                    q[from] = to;
                }
                next.push(q);
            }
        }
        perms = next;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Options for [`random_response`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomResponse {
    pub input_dims: Vec<usize>,
    pub out_dim: usize,
    pub params: usize,
    pub degree: u32,
    pub constant: bool,
    pub symmetric_groups: Vec<Vec<usize>>,
}

impl RandomResponse {
    /// Scalar cells, no parameters, no constant term.
    pub fn scalar(arity: usize, degree: u32) -> Self {
        RandomResponse {
            input_dims: vec![1; arity],
            out_dim: 1,
            params: 0,
            degree,
            constant: false,
            symmetric_groups: Vec::new(),
        }
    }
}

/// Polynomial with every monomial of degree `1..=degree` (and degree 0 when
/// `constant`) in arguments and parameters, coefficients uniform on `[-1, 1)`.
/// Monomials are drawn by output, then degree, then descending exponent vector.
pub fn random_response(seed: u64, spec: &RandomResponse) -> Result<ResponseFunction> {
    if spec.degree == 0 {
        return Err(Error::InvalidResponse("degree must be at least 1".into()));
    }
    let nvars: usize = spec.input_dims.iter().sum();
    let total = nvars + spec.params;
    let mut rng = SplitMix64::new(seed);
    let mut terms = Vec::new();
    let start = if spec.constant { 0 } else { 1 };
    for out in 0..spec.out_dim {
        for deg in start..=spec.degree {
            for exps in exponent_vectors(total, deg) {
                terms.push(Term {
                    coeff: rng.uniform(-1.0, 1.0),
                    out,
                    powers: exps[..nvars].to_vec(),
                    lpowers: exps[nvars..].to_vec(),
                });
            }
        }
    }
    ResponseFunction::new(spec.input_dims.clone(), spec.out_dim, spec.params, terms, spec.symmetric_groups.clone())
}

/// Exponent vectors of length `n` summing to `deg`, descending lexicographically.
fn exponent_vectors(n: usize, deg: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in exponent_vectors(n - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// An admissible vector field: one response per cell color, applied to each
/// cell's inputs in canonical argument order.
#[derive(Debug, Clone)]
pub struct AdmissibleSystem {
    name: String,
    cells: Vec<String>,
    colors: Vec<String>,
    cell_color: Vec<usize>,
    responses: Vec<ResponseFunction>,
    inputs: Vec<Vec<usize>>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    params: usize,
}

/// Number of inputs, their source colors and repeated-color runs of a cell
/// color, as seen by an admissible system.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgumentShape {
    pub source_colors: Vec<String>,
    pub repeated: Vec<Vec<usize>>,
}

/// Argument shape of every cell color of the network, keyed by color name.
pub fn argument_shapes(net: &LoadedNetwork) -> BTreeMap<String, ArgumentShape> {
    let mut out = BTreeMap::new();
    match net {
        LoadedNetwork::InputMaps(m) => {
            for (c, name) in m.colors().iter().enumerate() {
                let source_colors = m.maps_into(c).map(|x| m.colors()[x.map.cod].clone()).collect();
                out.insert(name.clone(), ArgumentShape { source_colors, repeated: Vec::new() });
            }
        }
        LoadedNetwork::Digraph(n) => {
            let inputs = n.ordered_inputs();
            for v in 0..n.len() {
                let color = &n.cell_colors()[v];
                if out.contains_key(color) {
                    continue;
                }
                let args = &inputs[v];
                let source_colors = args.iter().map(|&a| n.cell_colors()[n.arrows()[a].source].clone()).collect();
                let mut repeated: Vec<Vec<usize>> = Vec::new();
                let mut k = 0;
                while k < args.len() {
                    let c = &n.arrows()[args[k]].color;
                    let run: Vec<usize> = (k..args.len()).take_while(|&j| &n.arrows()[args[j]].color == c).collect();
                    k += run.len();
                    if run.len() > 1 {
                        repeated.push(run);
                    }
                }
                out.insert(color.clone(), ArgumentShape { source_colors, repeated });
            }
        }
    }
    out
}

/// Random responses fitting the network: scalar cells, symmetric in
/// repeated input colors, one independent stream per color.
pub fn random_responses(
    net: &LoadedNetwork,
    seed: u64,
    degree: u32,
    params: usize,
) -> Result<BTreeMap<String, ResponseFunction>> {
    argument_shapes(net)
        .into_iter()
        .enumerate()
        .map(|(k, (color, shape))| {
            let spec = RandomResponse {
                input_dims: vec![1; shape.source_colors.len()],
                out_dim: 1,
                params,
                degree,
                constant: false,
                symmetric_groups: shape.repeated,
            };
            Ok((color, random_response(derive_seed(seed, k as u64), &spec)?))
        })
        .collect()
}

impl AdmissibleSystem {
    pub fn new(net: &LoadedNetwork, responses: &BTreeMap<String, ResponseFunction>) -> Result<Self> {
        let shapes = argument_shapes(net);
        let (name, cells, colors, cell_color, inputs) = match net {
            LoadedNetwork::InputMaps(m) => {
                let inputs = (0..m.len()).map(|v| m.sources(v)).collect();
                (m.name(), m.cells().to_vec(), m.colors().to_vec(), m.cell_colors().to_vec(), inputs)
            }
            LoadedNetwork::Digraph(n) => {
                let diags = crate::network::validate_network(n);
                if !diags.is_empty() {
                    return Err(Error::InvalidNetwork(diags));
                }
                let colors = n.color_order();
                let cell_color = n.cell_colors().iter().map(|c| colors.iter().position(|x| x == c).unwrap()).collect();
                let inputs = n
                    .ordered_inputs()
                    .into_iter()
                    .map(|args| args.into_iter().map(|a| n.arrows()[a].source).collect())
                    .collect();
                (n.name(), n.cells().to_vec(), colors, cell_color, inputs)
            }
        };
        let mut resp = Vec::with_capacity(colors.len());
        for c in &colors {
            let f =
                responses.get(c).ok_or_else(|| Error::InvalidResponse(format!("no response for cell color {c}")))?;
            let shape = &shapes[c];
            if f.arity() != shape.source_colors.len() {
                return Err(Error::DimensionMismatch { expected: shape.source_colors.len(), found: f.arity() });
            }
            for run in &shape.repeated {
                if !f.symmetric_groups().iter().any(|g| run.iter().all(|p| g.contains(p))) {
                    return Err(Error::InvalidResponse(format!(
                        "response of color {c} must be symmetric in positions {run:?}"
                    )));
                }
            }
            resp.push(f.clone());
        }
        for (c, f) in colors.iter().zip(&resp) {
            for (k, sc) in shapes[c].source_colors.iter().enumerate() {
                let src = &resp[colors.iter().position(|x| x == sc).unwrap()];
                if f.input_dims()[k] != src.out_dim() {
                    return Err(Error::DimensionMismatch { expected: src.out_dim(), found: f.input_dims()[k] });
                }
            }
        }
        let params = resp.first().map_or(0, |f| f.params());
        if let Some(f) = resp.iter().find(|f| f.params() != params) {
            return Err(Error::DimensionMismatch { expected: params, found: f.params() });
        }
        let dims: Vec<usize> = (0..cells.len()).map(|v| resp[cell_color[v]].out_dim()).collect();
        let offsets = offsets(&dims);
        Ok(AdmissibleSystem {
            name: name.to_string(),
            cells,
            colors,
            cell_color,
            responses: resp,
            inputs,
            dims,
            offsets,
            params,
        })
    }

    /// Every cell of a single-colored input-map network uses `f`.
    pub fn homogeneous(net: &InputMapNetwork, f: &ResponseFunction) -> Result<Self> {
        let responses = net.colors().iter().map(|c| (c.clone(), f.clone())).collect();
        Self::new(&LoadedNetwork::InputMaps(net.clone()), &responses)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cells(&self) -> &[String] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn cell_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn cell_colors(&self) -> &[usize] {
        &self.cell_color
    }

    /// Source cells of each cell in argument order.
    pub fn inputs(&self) -> &[Vec<usize>] {
        &self.inputs
    }

    fn check(&self, x: &[f64], lambda: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        if lambda.len() != self.params {
            return Err(Error::DimensionMismatch { expected: self.params, found: lambda.len() });
        }
        Ok(())
    }

    fn gather(&self, v: usize, x: &[f64], buf: &mut Vec<f64>) {
        buf.clear();
        for &u in &self.inputs[v] {
            buf.extend_from_slice(&x[self.offsets[u]..self.offsets[u] + self.dims[u]]);
        }
    }

    pub fn eval(&self, x: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
        self.check(x, lambda)?;
        let mut out = vec![0.0; x.len()];
        self.eval_into(x, lambda, &mut out);
        Ok(out)
    }

    fn eval_into(&self, x: &[f64], lambda: &[f64], out: &mut [f64]) {
        let mut buf = Vec::new();
        for v in 0..self.cells.len() {
            self.gather(v, x, &mut buf);
            let o = self.offsets[v];
            self.responses[self.cell_color[v]].eval_into(&buf, lambda, &mut out[o..o + self.dims[v]]);
        }
    }

    /// Exact Jacobian with respect to the state.
    pub fn jacobian(&self, x: &[f64], lambda: &[f64]) -> Result<DMatrix<f64>> {
        self.check(x, lambda)?;
        let n = x.len();
        let mut jac = DMatrix::zeros(n, n);
        let mut buf = Vec::new();
        for v in 0..self.cells.len() {
            self.gather(v, x, &mut buf);
            let f = &self.responses[self.cell_color[v]];
            let local = f.jacobian(&buf, lambda)?;
            let mut col = 0;
            for &u in &self.inputs[v] {
                for k in 0..self.dims[u] {
                    for r in 0..self.dims[v] {
                        jac[(self.offsets[v] + r, self.offsets[u] + k)] += local[(r, col)];
                    }
                    col += 1;
                }
            }
        }
        Ok(jac)
    }

    /// Classical RK4 with step `dt`; the last step is shortened to land on `t_end`.
    pub fn integrate(&self, x0: &[f64], lambda: &[f64], t_end: f64, dt: f64, bound: f64) -> Result<Trajectory> {
        self.check(x0, lambda)?;
        if dt <= 0.0 || t_end < 0.0 || !dt.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidResponse(format!("bad time step {dt} or horizon {t_end}")));
        }
        let n = x0.len();
        let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
        let mut times = Vec::with_capacity(steps + 1);
        let mut states = Vec::with_capacity(steps + 1);
        let mut x = x0.to_vec();
        let mut t = 0.0;
        times.push(t);
        states.push(x.clone());
        let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
            (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for step in 0..steps {
            let h = if step + 1 == steps { t_end - step as f64 * dt } else { dt };
            self.eval_into(&x, lambda, &mut k1);
            axpy(&x, h / 2.0, &k1, &mut tmp);
            self.eval_into(&tmp, lambda, &mut k2);
            axpy(&x, h / 2.0, &k2, &mut tmp);
            self.eval_into(&tmp, lambda, &mut k3);
            axpy(&x, h, &k3, &mut tmp);
            self.eval_into(&tmp, lambda, &mut k4);
            for i in 0..n {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t = if step + 1 == steps { t_end } else { (step + 1) as f64 * dt };
            if x.iter().any(|v| !v.is_finite() || v.abs() > bound) {
                return Err(Error::NonFinite { t });
            }
            times.push(t);
            states.push(x.clone());
        }
        Ok(Trajectory { times, states })
    }
}

fn axpy(x: &[f64], a: f64, y: &[f64], out: &mut [f64]) {
    for i in 0..x.len() {
        out[i] = x[i] + a * y[i];
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// Largest `‖φ*(γ₂(y)) − γ₁(φ*y)‖∞` over random states and parameters.
pub fn check_conjugacy(
    fib: &GraphFibration,
    target: &AdmissibleSystem,
    source: &AdmissibleSystem,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    if fib.target_cells.len() != target.cells.len() {
        return Err(Error::DimensionMismatch { expected: target.cells.len(), found: fib.target_cells.len() });
    }
    if fib.source_cells.len() != source.cells.len() {
        return Err(Error::DimensionMismatch { expected: source.cells.len(), found: fib.source_cells.len() });
    }
    let mut rng = SplitMix64::new(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n_samples {
        let y = rng.symmetric_vec(target.dim());
        let lambda = rng.symmetric_vec(target.params);
        let lhs = fib.pullback_with_dims(&target.eval(&y, &lambda)?, &target.dims)?;
        let rhs = source.eval(&fib.pullback_with_dims(&y, &target.dims)?, &lambda)?;
        if lhs.len() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: rhs.len(), found: lhs.len() });
        }
        for (a, b) in lhs.iter().zip(&rhs) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Largest spread of the vector field within a block, over random points of
/// the synchrony subspace of `p`.
pub fn check_synchrony_invariance(sys: &AdmissibleSystem, p: &Partition, n_samples: usize, seed: u64) -> Result<f64> {
    p.check_cover(sys.cells.len())?;
    for b in p.blocks() {
        if b.iter().any(|&v| sys.cell_color[v] != sys.cell_color[b[0]]) {
            return Err(Error::InvalidPartition("block mixes cell colors".into()));
        }
    }
    let mut rng = SplitMix64::new(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n_samples {
        let mut x = vec![0.0; sys.dim()];
        for b in p.blocks() {
            let vals = rng.symmetric_vec(sys.dims[b[0]]);
            for &v in b {
                x[sys.offsets[v]..sys.offsets[v] + sys.dims[v]].copy_from_slice(&vals);
            }
        }
        let lambda = rng.symmetric_vec(sys.params);
        let g = sys.eval(&x, &lambda)?;
        for b in p.blocks() {
            let r = b[0];
            for &v in &b[1..] {
                for k in 0..sys.dims[v] {
                    worst = worst.max((g[sys.offsets[v] + k] - g[sys.offsets[r] + k]).abs());
                }
            }
        }
    }
    Ok(worst)
}
