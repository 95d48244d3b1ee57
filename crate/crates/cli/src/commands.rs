//! Subcommand implementations. Each returns a text rendering and a JSON report.

use std::fmt::Write;
use std::path::Path;

use cellnet::bifurcation::{
    classify_synchrony, find_branches, fit_exponents, BranchConfig, FitOutcome, QuadraticResponse, Target,
};
use cellnet::dynamics::{AdmissibleSystem, ResponseFunction};
use cellnet::fibration::{enumerate_digraph_fibrations, enumerate_fibrations, FIBRATION_LIMIT};
use cellnet::fundamental::{closure, double_fundamental_check, fundamental_network, fundamental_network_color};
use cellnet::interior::{cell_set, connected_sum, interior_symmetries, interior_to_balanced, INTERIOR_LIMIT};
use cellnet::io::{read_network, read_response, NetworkDoc};
use cellnet::linalg::{
    generalized_eigenspace, generalized_eigenspace_pair, linearize as jacobian, null_space, spectrum,
};
use cellnet::synchrony::{enumerate_balanced, is_balanced, quotient as quotient_network, ENUMERATION_LIMIT};
use cellnet::{GraphFibration, InputMapNetwork, LoadedNetwork, Network, Partition, Tolerances};
use nalgebra::DMatrix;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cellnet::Error),
    #[error("{path}: {source}")]
    File { path: String, source: cellnet::Error },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub struct Report {
    pub text: String,
    pub json: Value,
    pub warnings: Vec<String>,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, warnings: Vec::new() }
    }
}

/// Shortest decimal that reads back to the same value, without `-0`.
fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

fn rounded(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn doc_json(doc: &NetworkDoc) -> Value {
    serde_json::to_value(doc).expect("network document serializes")
}

fn doc_text(doc: &NetworkDoc) -> String {
    serde_json::to_string_pretty(doc).expect("network document serializes") + "\n"
}

fn fibration_line(f: &GraphFibration) -> String {
    f.pairs().iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ")
}

fn fibration_json(f: &GraphFibration) -> Value {
    json!(f.pairs().iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn load(path: &Path) -> Result<LoadedNetwork> {
    read_network(path).map_err(|source| CliError::File { path: path.display().to_string(), source })
}

fn color_names(net: &LoadedNetwork) -> Vec<String> {
    match net {
        LoadedNetwork::InputMaps(m) => m.colors().to_vec(),
        LoadedNetwork::Digraph(n) => n.color_order(),
    }
}

fn system(net: &LoadedNetwork, response: &Path) -> Result<AdmissibleSystem> {
    let responses = read_response(response)
        .map_err(|source| CliError::File { path: response.display().to_string(), source })?
        .responses(&color_names(net))?;
    Ok(AdmissibleSystem::new(net, &responses)?)
}

/// Broadcasts a single value, or checks a full state vector.
fn state(values: &[f64], dim: usize, flag: &str) -> Result<Vec<f64>> {
    match values.len() {
        0 => Ok(vec![0.0; dim]),
        1 => Ok(vec![values[0]; dim]),
        n if n == dim => Ok(values.to_vec()),
        n => Err(CliError::Invalid(format!("{flag} has {n} values, expected 1 or {dim}"))),
    }
}

fn coordinate_names(sys: &AdmissibleSystem) -> Vec<String> {
    sys.cells()
        .iter()
        .zip(sys.cell_dims())
        .flat_map(|(c, &d)| (0..d).map(move |k| if d == 1 { c.clone() } else { format!("{c}[{k}]") }))
        .collect()
}

pub fn validate(path: &Path) -> Result<Report> {
    let net = load(path)?;
    let json = json!({"valid": true, "name": net.name(), "cells": net.cells().len()});
    Ok(Report::new("OK\n".into(), json))
}

pub fn synchronies(path: &Path, check: Option<&str>) -> Result<Report> {
    let net = load(path)?.digraph();
    let parts = enumerate_balanced(&net, ENUMERATION_LIMIT)?;
    let mut text = String::new();
    let mut list = Vec::new();
    for p in &parts {
        let shown = p.display(net.cells());
        if p.is_singletons() {
            writeln!(text, "{shown}  trivial").unwrap();
        } else {
            writeln!(text, "{shown}").unwrap();
        }
        list.push(json!({"partition": shown, "trivial": p.is_singletons()}));
    }
    let mut json = json!({"network": net.name(), "partitions": list});
    if let Some(check) = check {
        let p = Partition::parse(check, net.cells())?;
        let balanced = is_balanced(&net, &p)?;
        let shown = p.display(net.cells());
        writeln!(text, "check {shown}  balanced: {}", if balanced { "yes" } else { "no" }).unwrap();
        json["check"] = json!({"partition": shown, "balanced": balanced});
    }
    Ok(Report::new(text, json))
}

pub fn quotient(path: &Path, partition: &str) -> Result<Report> {
    let net = load(path)?.input_maps()?;
    let p = Partition::parse(partition, net.cells())?;
    let (q, fib) = quotient_network(&net, &p)?;
    let doc = NetworkDoc::from_input_maps(&q);
    let text = format!("projection: {}\n{}", fibration_line(&fib), doc_text(&doc));
    Ok(Report::new(text, json!({"network": doc_json(&doc), "projection": fibration_json(&fib)})))
}

pub fn fundamental(path: &Path, color: Option<&str>, check_double: bool) -> Result<Report> {
    let net = load(path)?.input_maps()?;
    let st = closure(&net);
    let names = st.names();
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(1) + 2;
    let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
    let mut text = String::new();
    let header: String = names.iter().map(|n| pad(n)).collect();
    writeln!(text, "{}{}", pad("∘"), header.trim_end()).unwrap();
    let mut table = Vec::new();
    for (i, row) in st.product_table().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|e| e.map_or("*".to_string(), |k| st.name(k))).collect();
        let line: String = cells.iter().map(|c| pad(c)).collect();
        writeln!(text, "{}{}", pad(&names[i]), line.trim_end()).unwrap();
        table.push(row.iter().map(|e| e.map(|k| st.name(k))).collect::<Vec<_>>());
    }

    let mut warnings = Vec::new();
    let networks: Vec<InputMapNetwork> = match color {
        Some(c) => {
            let k = st
                .colors()
                .iter()
                .position(|x| x == c)
                .ok_or_else(|| CliError::Invalid(format!("--color {c}: no such cell color")))?;
            vec![fundamental_network_color(&st, k)?]
        }
        None if st.is_homogeneous() => vec![fundamental_network(&st)?],
        None => (0..st.colors().len()).map(|k| fundamental_network_color(&st, k)).collect::<cellnet::Result<_>>()?,
    };
    let mut docs = Vec::new();
    for n in &networks {
        if n.is_empty() {
            warnings.push(format!("fundamental network {} is empty", n.name()));
        }
        let doc = NetworkDoc::from_input_maps(n);
        write!(text, "\n{}", doc_text(&doc)).unwrap();
        docs.push(doc_json(&doc));
    }
    let mut json = json!({"elements": names, "table": table, "networks": docs});
    if check_double {
        let iso = double_fundamental_check(&st)?;
        writeln!(text, "\ndouble fundamental isomorphism: {}", fibration_line(&iso)).unwrap();
        json["double_fundamental"] = fibration_json(&iso);
    }
    Ok(Report { text, json, warnings })
}

fn all_fibrations(source: &LoadedNetwork, target: &LoadedNetwork) -> Result<Vec<GraphFibration>> {
    if let (Ok(a), Ok(b)) = (source.input_maps(), target.input_maps()) {
        return Ok(enumerate_fibrations(&a, &b, FIBRATION_LIMIT)?);
    }
    let (a, b): (Network, Network) = (source.digraph(), target.digraph());
    let candidates: Vec<Vec<usize>> =
        a.cell_colors().iter().map(|c| (0..b.len()).filter(|&u| &b.cell_colors()[u] == c).collect()).collect();
    Ok(enumerate_digraph_fibrations(&a, &b, &candidates, FIBRATION_LIMIT)?)
}

pub fn fibrations(source: &Path, target: Option<&Path>, self_maps: bool) -> Result<Report> {
    let src = load(source)?;
    let dst = match (target, self_maps) {
        (Some(_), true) => return Err(CliError::Invalid("--self takes a single network".into())),
        (Some(t), false) => load(t)?,
        (None, true) => src.clone(),
        (None, false) => return Err(CliError::Invalid("a target network is required without --self".into())),
    };
    let fibs = all_fibrations(&src, &dst)?;
    let mut text = String::new();
    for f in &fibs {
        writeln!(text, "{}", fibration_line(f)).unwrap();
    }
    if fibs.is_empty() {
        text.push_str("no fibrations\n");
    }
    let list: Vec<Value> = fibs.iter().map(fibration_json).collect();
    Ok(Report::new(text, json!({"source": src.name(), "target": dst.name(), "fibrations": list})))
}

pub fn simulate(network: &Path, response: &Path, x0: &[f64], t_end: f64, dt: f64, lambda: &[f64]) -> Result<Report> {
    let net = load(network)?;
    let sys = system(&net, response)?;
    let x0 = state(x0, sys.dim(), "--x0")?;
    let traj = sys.integrate(&x0, lambda, t_end, dt, 1e12)?;
    let columns: Vec<String> =
        std::iter::once("t".to_string()).chain(coordinate_names(&sys).iter().map(|c| format!("x_{c}"))).collect();
    let mut text = columns.join(",") + "\n";
    let mut rows = Vec::new();
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let row: Vec<String> = std::iter::once(*t).chain(x.iter().copied()).map(num).collect();
        text.push_str(&row.join(","));
        text.push('\n');
        rows.push(std::iter::once(*t).chain(x.iter().copied()).collect::<Vec<f64>>());
    }
    Ok(Report::new(text, json!({"columns": columns, "rows": rows})))
}

/// Reduced row echelon form, dropping zero rows.
fn rref(mut m: DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).max_by(|&a, &b| m[(a, c)].abs().total_cmp(&m[(b, c)].abs())) else { break };
        if m[(p, c)].abs() <= tol {
            continue;
        }
        m.swap_rows(p, r);
        let pivot = m[(r, c)];
        for k in 0..cols {
            m[(r, k)] /= pivot;
        }
        for i in 0..rows {
            if i != r {
                let f = m[(i, c)];
                for k in 0..cols {
                    m[(i, k)] -= f * m[(r, k)];
                }
            }
        }
        r += 1;
    }
    m.rows(0, r).into_owned()
}

/// Linear equations cutting out the column span of `basis`.
fn equations(basis: &DMatrix<f64>, names: &[String]) -> Vec<String> {
    let normals = rref(null_space(&basis.transpose(), 1e-9).transpose(), 1e-9);
    normals
        .row_iter()
        .map(|row| {
            let mut out = String::new();
            for (v, n) in row.iter().zip(names) {
                if v.abs() <= 1e-9 {
                    continue;
                }
                let c = rounded(v.abs(), 6);
                let sign = if *v < 0.0 { "-" } else { "+" };
                if out.is_empty() {
                    out.push_str(if *v < 0.0 { "-" } else { "" });
                } else {
                    write!(out, " {sign} ").unwrap();
                }
                if c != "1" {
                    write!(out, "{c}*").unwrap();
                }
                write!(out, "X_{n}").unwrap();
            }
            out + " = 0"
        })
        .collect()
}

pub fn linearize(network: &Path, response: &Path, at: &[f64], lambda: &[f64]) -> Result<Report> {
    let net = load(network)?;
    let sys = system(&net, response)?;
    let x = state(at, sys.dim(), "--at")?;
    let l = jacobian(&sys, &x, lambda)?;
    let tol = Tolerances::default();
    let spec = spectrum(&l, &tol)?;
    let names = coordinate_names(&sys);

    let mut text = String::from("matrix:\n");
    for r in 0..l.nrows() {
        let row: Vec<String> = (0..l.ncols()).map(|c| rounded(l[(r, c)], 10)).collect();
        writeln!(text, "  [{}]", row.join(", ")).unwrap();
    }
    text.push_str("eigenvalues:\n");
    let mut eig_json = Vec::new();
    for e in &spec.eigenvalues {
        let shown = if e.value.im.abs() < 1e-12 {
            rounded(e.value.re, 8)
        } else {
            format!(
                "{}{}{}i",
                rounded(e.value.re, 8),
                if e.value.im < 0.0 { "-" } else { "+" },
                rounded(e.value.im.abs(), 8)
            )
        };
        writeln!(text, "  {shown}  algebraic {}  geometric {}", e.algebraic, e.geometric).unwrap();
        let space = if e.value.im.abs() < 1e-12 {
            Some(generalized_eigenspace(&l, e.value.re, &tol)?)
        } else if e.value.im > 0.0 {
            Some(generalized_eigenspace_pair(&l, e.value, &tol)?)
        } else {
            None
        };
        let eqs = space.as_ref().map(|b| equations(b, &names)).unwrap_or_default();
        if space.is_some() {
            writeln!(text, "  generalized eigenspace:").unwrap();
            if eqs.is_empty() {
                writeln!(text, "    whole space").unwrap();
            }
            for eq in &eqs {
                writeln!(text, "    {eq}").unwrap();
            }
        }
        eig_json.push(json!({
            "re": e.value.re,
            "im": e.value.im,
            "algebraic": e.algebraic,
            "geometric": e.geometric,
            "equations": eqs,
        }));
    }
    let warnings: Vec<String> = spec.warnings.iter().map(|w| format!("{w:?}")).collect();
    let matrix: Vec<Vec<f64>> = (0..l.nrows()).map(|r| l.row(r).iter().copied().collect()).collect();
    let json = json!({"coordinates": names, "matrix": matrix, "eigenvalues": eig_json});
    Ok(Report { text, json, warnings })
}

pub struct BranchOptions<'a> {
    pub network: &'a Path,
    pub response: Option<&'a Path>,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub points: usize,
    pub starts: usize,
    pub seed: u64,
}

fn target_name(t: Target, cells: &[String]) -> String {
    match t {
        Target::Cell(i) => cells[i].clone(),
        Target::Difference(i, j) => format!("{}-{}", cells[i], cells[j]),
    }
}

pub fn branches(opts: &BranchOptions) -> Result<Report> {
    let loaded = load(opts.network)?;
    let sys = match opts.response {
        Some(path) => system(&loaded, path)?,
        None => {
            let f: ResponseFunction = QuadraticResponse::default().response()?;
            AdmissibleSystem::homogeneous(&loaded.input_maps()?, &f)?
        }
    };
    let cfg = BranchConfig {
        lambda_max: opts.lambda_max,
        lambda_min: opts.lambda_min,
        points: opts.points,
        starts: opts.starts,
        seed: opts.seed,
        ..BranchConfig::default()
    };
    let parts = enumerate_balanced(&loaded.digraph(), ENUMERATION_LIMIT)?;
    let search = find_branches(&sys, &cfg)?;
    let cells = coordinate_names(&sys);

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut list = Vec::new();
    for (k, b) in search.branches.iter().enumerate() {
        let (p, label) = classify_synchrony(b, &parts, &cfg.tolerances);
        let side = if b.samples[0].lambda > 0.0 { "+" } else { "-" };
        let fits = fit_exponents(&b.projected(&p)?, &cfg.tolerances);
        let mut row = vec![(k + 1).to_string(), side.to_string(), label.to_string(), p.display(sys.cells())];
        let mut exps = serde_json::Map::new();
        for f in &fits {
            let (shown, value) = match f.outcome {
                FitOutcome::Slope(fit) => (format!("{:.3}", fit.slope), json!(fit.slope)),
                FitOutcome::Zero => ("0".to_string(), json!("zero")),
                FitOutcome::Insufficient => ("-".to_string(), Value::Null),
            };
            row.push(shown);
            exps.insert(target_name(f.target, &cells), value);
        }
        rows.push(row);
        list.push(json!({
            "id": k + 1,
            "side": side,
            "synchrony": label.to_string(),
            "partition": p.display(sys.cells()),
            "exponents": exps,
        }));
    }

    let mut header = vec!["branch".to_string(), "side".into(), "synchrony".into(), "partition".into()];
    if let Some(b) = search.branches.first() {
        header.extend(fit_exponents(b, &cfg.tolerances).iter().map(|f| target_name(f.target, &cells)));
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |r: &[String]| -> String {
        let s: String = r.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}  ")).collect();
        s.trim_end().to_string() + "\n"
    };
    let mut text = line(&header);
    for r in &rows {
        text.push_str(&line(r));
    }
    writeln!(text, "failed starts: {}", search.failed_starts).unwrap();
    let json = json!({"network": loaded.name(), "branches": list, "failed_starts": search.failed_starts});
    Ok(Report::new(text, json))
}

pub fn interior(network: &Path, subset: &[String], sum: bool) -> Result<Report> {
    let net = load(network)?.digraph();
    let ids: Vec<&str> = subset.iter().map(String::as_str).collect();
    let s = cell_set(&net, &ids)?;
    if sum {
        let cs = connected_sum(&net, &s)?;
        let doc = NetworkDoc::from_digraph(&cs.network);
        return Ok(Report::new(doc_text(&doc), json!({"network": doc_json(&doc)})));
    }
    let mut text = String::new();
    let mut list = Vec::new();
    for sym in interior_symmetries(&net, &s, INTERIOR_LIMIT)? {
        let p = interior_to_balanced(&net, &s, &sym.fibration)?;
        let kind = if sym.invertible { "invertible" } else { "non-invertible" };
        let shown = p.display(net.cells());
        writeln!(text, "{}  {kind}  {shown}", fibration_line(&sym.fibration)).unwrap();
        list.push(json!({
            "map": fibration_json(&sym.fibration),
            "invertible": sym.invertible,
            "partition": shown,
        }));
    }
    Ok(Report::new(text, json!({"network": net.name(), "symmetries": list})))
}
