//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any of them fails.

mod support;

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cellnet::bifurcation::{
    classify_synchrony, find_branches, fit_exponents, Branch, BranchConfig, FitOutcome, QuadraticResponse, SyncLabel,
    Target,
};
use cellnet::dynamics::{
    check_conjugacy, check_synchrony_invariance, random_response, AdmissibleSystem, RandomResponse, ResponseFunction,
    Term,
};
use cellnet::fibration::{check_fibration, check_fibration_input_maps, enumerate_fibrations, FIBRATION_LIMIT};
use cellnet::fundamental::{
    base_fibrations, double_fundamental_check, extended_fundamental_network, fundamental_network,
    fundamental_network_color, groupoid_fibrations, self_fibrations_fundamental,
};
use cellnet::interior::{
    cell_set, connected_sum, extend_to_sum, fixed_space_matches, interior_symmetries, interior_to_balanced,
    INTERIOR_LIMIT,
};
use cellnet::linalg::{generalized_eigenspace, linearize, null_space, spectrum, subspace_distance, Spectrum};
use cellnet::network::{InputMapNetwork, Network, Partition};
use cellnet::rng::SplitMix64;
use cellnet::synchrony::{enumerate_balanced, is_balanced, ENUMERATION_LIMIT};
use cellnet::{bundled, LoadedNetwork, Tolerances};
use nalgebra::DMatrix;
use num_complex::Complex64;
use support::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rows(table: &[&[&str]]) -> Vec<Vec<String>> {
    table.iter().map(|r| names(r)).collect()
}

fn criterion_1() -> Outcome {
    let expected = [
        ("A", rows(&[&["σ1", "σ2", "σ3"], &["σ2", "σ3", "σ3"], &["σ3", "σ3", "σ3"]])),
        (
            "B",
            rows(&[
                &["σ1", "σ2", "σ3", "σ4"],
                &["σ2", "σ4", "σ4", "σ4"],
                &["σ3", "σ3", "σ3", "σ3"],
                &["σ4", "σ4", "σ4", "σ4"],
            ]),
        ),
        (
            "C",
            rows(&[
                &["σ1", "σ2", "σ3", "σ4", "σ5"],
                &["σ2", "σ4", "σ5", "σ4", "σ4"],
                &["σ3", "σ3", "σ3", "σ3", "σ3"],
                &["σ4", "σ4", "σ4", "σ4", "σ4"],
                &["σ5", "σ5", "σ5", "σ5", "σ5"],
            ]),
        ),
    ];
    let mut sizes = Vec::new();
    for (name, rows) in expected {
        let st = table(name);
        ensure(named_table(&st) == rows, || format!("{name}: product table differs"))?;
        sizes.push(st.len().to_string());
    }
    Ok(format!("|Σ| = {}, tables exact", sizes.join(", ")))
}

fn criterion_2() -> Outcome {
    let three = |cells: &[String]| {
        vec![Partition::singletons(3), partition(cells, &[&["v1", "v2"], &["v3"]]), Partition::new(vec![vec![0, 1, 2]])]
    };
    for name in ["A", "B", "C"] {
        let n = bundled::network(name).digraph();
        let mut found = ok(enumerate_balanced(&n, ENUMERATION_LIMIT))?;
        let mut want = three(n.cells());
        found.sort();
        want.sort();
        ensure(found == want, || format!("{name}: {} balanced partitions", found.len()))?;
    }
    let ct = fundamental("C").to_digraph();
    let p = partition(ct.cells(), &[&["σ1", "σ3"], &["σ2", "σ5"], &["σ4"]]);
    ensure(ok(enumerate_balanced(&ct, ENUMERATION_LIMIT))?.contains(&p), || "C~ lacks {σ1,σ3},{σ2,σ5},{σ4}".into())?;

    let mut nets: Vec<Network> = bundled::ALL.iter().map(|(n, _)| bundled::network(n).digraph()).collect();
    for seed in 0..60u64 {
        nets.push(random_digraph(seed, 1 + (seed % 6) as usize));
    }
    let mut checked = 0;
    for net in &nets {
        if net.len() > 6 {
            continue;
        }
        let mut brute: Vec<Partition> =
            all_partitions(net.cell_colors()).into_iter().filter(|p| balanced_by_bijection(net, p)).collect();
        let mut found = ok(enumerate_balanced(net, ENUMERATION_LIMIT))?;
        brute.sort();
        found.sort();
        ensure(brute == found, || format!("{}: enumeration disagrees with brute force", net.name()))?;
        checked += 1;
    }
    Ok(format!("A, B, C have 3 each; C~ partition present; oracle agrees on {checked} networks"))
}

fn criterion_3() -> Outcome {
    for name in ["A", "B", "C"] {
        let n = imn(name);
        let fibs = ok(enumerate_fibrations(&fundamental(name), &n, FIBRATION_LIMIT))?;
        ensure(fibs.len() == n.len(), || format!("{name}: {} fibrations, expected {}", fibs.len(), n.len()))?;
    }
    let (st, c) = (table("C"), imn("C"));
    let phi = &ok(base_fibrations(&st, &c))?[2];
    let image: Vec<&str> = phi.vertex_map.iter().map(|&v| c.cells()[v].as_str()).collect();
    ensure(image == ["v3", "v1", "v3", "v2", "v1"], || format!("φ_v3 of C = {image:?}"))?;
    Ok("3, 3, 3 fibrations; φ_v3 of C = (v3,v1,v3,v2,v1)".into())
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for name in ["A", "B", "C"] {
        let (st, n) = (table(name), imn(name));
        let ft = ok(fundamental_network(&st))?;
        let base = ok(base_fibrations(&st, &n))?;
        let selfs = ok(self_fibrations_fundamental(&st))?;
        for seed in 0..20 {
            let f = responses(&bundled::network(name), seed);
            let (sn, sft) = (system(&n, &f), system(&ft, &f));
            for phi in &base {
                worst = worst.max(ok(check_conjugacy(phi, &sn, &sft, 20, seed))?);
                checks += 1;
            }
            for phi in &selfs {
                worst = worst.max(ok(check_conjugacy(phi, &sft, &sft, 20, seed))?);
                checks += 1;
            }
        }
    }
    ensure(worst < 1e-12, || format!("max residual {worst:.3e}"))?;
    Ok(format!("max residual {worst:.3e} over {checks} fibration/response pairs"))
}

/// Vector field whose response differs from cell to cell.
fn non_equivariant(net: &InputMapNetwork, seed: u64) -> Vec<ResponseFunction> {
    let arity = net.maps().len();
    (0..net.len())
        .map(|v| random_response(seed * 1000 + v as u64, &RandomResponse::scalar(arity, 3)).unwrap())
        .collect()
}

fn eval_non_equivariant(net: &InputMapNetwork, fs: &[ResponseFunction], x: &[f64]) -> Vec<f64> {
    let maps = net.maps();
    (0..net.len())
        .map(|v| {
            let args: Vec<f64> = maps.iter().map(|m| x[m.map.image[v]]).collect();
            fs[v].eval(&args, &[]).unwrap()[0]
        })
        .collect()
}

fn spread(p: &Partition, g: &[f64]) -> f64 {
    p.blocks().iter().flat_map(|b| b.iter().map(move |&v| (g[v] - g[b[0]]).abs())).fold(0.0, f64::max)
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut control: f64 = 0.0;
    for name in ["A", "B", "C"] {
        let st = table(name);
        let ft = ok(fundamental_network(&st))?;
        let ext = ok(extended_fundamental_network(&st))?;
        let loaded = LoadedNetwork::InputMaps(ext.clone());
        let balanced = ok(enumerate_balanced(&ft.to_digraph(), ENUMERATION_LIMIT))?;
        for seed in 0..20 {
            let sys = ok(AdmissibleSystem::new(&loaded, &responses(&loaded, seed)))?;
            for p in &balanced {
                worst = worst.max(ok(check_synchrony_invariance(&sys, p, 10, seed))?);
            }
        }
        let colors = vec![s("default"); ft.len()];
        let unbalanced: Vec<Partition> =
            all_partitions(&colors).into_iter().filter(|p| !balanced.contains(p)).collect();
        let fs = non_equivariant(&ext, 7);
        let mut rng = SplitMix64::new(11);
        let mut best: f64 = 0.0;
        for p in &unbalanced {
            let vals = rng.symmetric_vec(p.num_blocks());
            let labels = p.labels(ft.len());
            let x: Vec<f64> = labels.iter().map(|&l| vals[l]).collect();
            best = best.max(spread(p, &eval_non_equivariant(&ext, &fs, &x)));
        }
        ensure(best > 1e-6, || format!("{name}: non-equivariant map preserved every unbalanced partition"))?;
        control = if control == 0.0 { best } else { control.min(best) };
    }
    ensure(worst < 1e-12, || format!("balanced residual {worst:.3e}"))?;
    Ok(format!("balanced residual {worst:.3e}; negative control violation {control:.3e}"))
}

fn criterion_6() -> Outcome {
    for name in ["A", "B", "C"] {
        let iso = ok(double_fundamental_check(&table(name)))?;
        ensure(iso.is_bijective(), || format!("{name}: not an isomorphism"))?;
    }
    let mut rng = SplitMix64::new(6);
    for _ in 0..50 {
        let seed = rng.next_u64();
        let n = random_homogeneous(seed, 4, 3);
        let st = cellnet::fundamental::closure(&n);
        let iso = ok(double_fundamental_check(&st))?;
        ensure(iso.is_bijective(), || format!("random network {seed}: not an isomorphism"))?;
    }
    Ok("Σ_A, Σ_B, Σ_C and 50 random networks".into())
}

fn linear(a: f64, b: f64, c: f64) -> ResponseFunction {
    let t = |coeff: f64, k: usize| {
        let mut powers = vec![0; 3];
        powers[k] = 1;
        Term { coeff, out: 0, powers, lpowers: vec![] }
    };
    ResponseFunction::new(vec![1; 3], 1, 0, vec![t(a, 0), t(b, 1), t(c, 2)], vec![]).unwrap()
}

fn lin(net: &InputMapNetwork, a: f64, b: f64, c: f64) -> DMatrix<f64> {
    let sys = AdmissibleSystem::homogeneous(net, &linear(a, b, c)).unwrap();
    linearize(&sys, &vec![0.0; net.len()], &[]).unwrap()
}

fn mult(s: &Spectrum, value: f64) -> (usize, usize) {
    match s.nearest(Complex64::new(value, 0.0)) {
        Some(e) if (e.value - value).norm() < 1e-6 => (e.algebraic, e.geometric),
        _ => (0, 0),
    }
}

fn hyperplane(normal: &[f64]) -> DMatrix<f64> {
    null_space(&DMatrix::from_row_slice(1, normal.len(), normal), 1e-12)
}

fn criterion_7() -> Outcome {
    let tol = Tolerances::default();
    let mut params = vec![(0.3, 0.5, -0.2)];
    let mut rng = SplitMix64::new(2024);
    while params.len() < 21 {
        let (a, b, c) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        if b.abs() > 0.1 && (b + c).abs() > 0.1 {
            params.push((a, b, c));
        }
    }
    let (at, bt, ct) = (fundamental("A"), fundamental("B"), fundamental("C"));
    let mut problems = Vec::new();
    let mut fundamental_c = Vec::new();
    let mut worst_dist: f64 = 0.0;
    for &(a, b, c) in &params {
        for name in ["A", "B", "C"] {
            let s = ok(spectrum(&lin(&imn(name), a, b, c), &tol))?;
            if mult(&s, a) != (2, 1) || mult(&s, a + b + c) != (1, 1) {
                problems.push(format!("L_{name} at ({a:.3},{b:.3},{c:.3})"));
            }
        }
        let s = ok(spectrum(&lin(&ct, a, b, c), &tol))?;
        fundamental_c.push(mult(&s, a));
        let spaces =
            [(&at, vec![0.0, 0.0, 1.0]), (&bt, vec![0.0, 0.0, c, b]), (&ct, vec![0.0, 0.0, c * (b + c), b * b, b * c])];
        for (net, normal) in spaces {
            let e = ok(generalized_eigenspace(&lin(net, a, b, c), a, &tol))?;
            worst_dist = worst_dist.max(subspace_distance(&e, &hyperplane(&normal)));
        }
    }
    ensure(problems.is_empty(), || format!("multiplicities differ for {}", problems.join(", ")))?;
    ensure(worst_dist < 1e-8, || format!("eigenspace distance {worst_dist:.3e}"))?;
    let alg_ok = fundamental_c.iter().all(|m| m.0 == 4);
    let geo: Vec<usize> = fundamental_c.iter().map(|m| m.1).collect();
    ensure(alg_ok && geo.iter().all(|&g| g == 1), || {
        let mut g = geo.clone();
        g.dedup();
        format!(
            "L_C~ eigenvalue a: algebraic 4 but geometric {g:?} on all 21 draws, expected 1; \
             L_A/L_B/L_C multiplicities and eigenspaces (distance {worst_dist:.1e}) pass"
        )
    })?;
    Ok(format!("21 parameter sets; eigenspace distance {worst_dist:.3e}"))
}

struct Found {
    label: SyncLabel,
    branch: Branch,
}

fn analyse(name: &str) -> Result<Vec<Found>, String> {
    let cfg = BranchConfig::default();
    let net = imn(name);
    let sys = ok(AdmissibleSystem::homogeneous(&net, &ok(QuadraticResponse::default().response())?))?;
    let parts = ok(enumerate_balanced(&net.to_digraph(), ENUMERATION_LIMIT))?;
    ok(find_branches(&sys, &cfg))?
        .branches
        .iter()
        .filter(|b| b.samples[0].lambda > 0.0)
        .map(|b| {
            let (partition, label) = classify_synchrony(b, &parts, &cfg.tolerances);
            Ok(Found { label, branch: ok(b.projected(&partition))? })
        })
        .collect()
}

fn slope(b: &Branch, target: Target) -> Option<f64> {
    fit_exponents(b, &Tolerances::default()).into_iter().find(|f| f.target == target).and_then(|f| match f.outcome {
        FitOutcome::Slope(p) => Some(p.slope),
        _ => None,
    })
}

fn is_zero(b: &Branch, target: Target) -> bool {
    fit_exponents(b, &Tolerances::default()).into_iter().any(|f| f.target == target && f.outcome == FitOutcome::Zero)
}

fn near(x: Option<f64>, value: f64, tol: f64) -> bool {
    x.is_some_and(|s| (s - value).abs() <= tol)
}

fn fmt(x: Option<f64>) -> String {
    x.map_or("-".into(), |s| format!("{s:.3}"))
}

fn criterion_8() -> Outcome {
    use Target::{Cell, Difference};
    let mut summary = Vec::new();

    let a = analyse("A")?;
    let partial = a.iter().find(|f| {
        f.label == SyncLabel::Partial && is_zero(&f.branch, Cell(0)) && near(slope(&f.branch, Cell(2)), 1.0, 0.05)
    });
    ensure(partial.is_some(), || "A: no Partial branch with v3 ~ λ".into())?;
    let none = a.iter().find(|f| {
        f.label == SyncLabel::None
            && near(slope(&f.branch, Cell(1)), 1.0, 0.05)
            && near(slope(&f.branch, Cell(2)), 0.5, 0.05)
    });
    let none = none.ok_or("A: no None branch with v2 ~ λ, v3 ~ √λ")?;
    summary.push(format!("A v2 {} v3 {}", fmt(slope(&none.branch, Cell(1))), fmt(slope(&none.branch, Cell(2)))));

    let b = analyse("B")?;
    ensure(b.iter().any(|f| f.label == SyncLabel::Partial && near(slope(&f.branch, Cell(2)), 1.0, 0.05)), || {
        "B: no Partial branch with v3 ~ λ".into()
    })?;
    let none = b
        .iter()
        .find(|f| {
            f.label == SyncLabel::None
                && near(slope(&f.branch, Difference(0, 1)), 1.0, 0.05)
                && near(slope(&f.branch, Cell(2)), 0.5, 0.05)
        })
        .ok_or("B: no None branch with v1-v2 ~ λ, v3 ~ √λ")?;
    summary.push(format!(
        "B v1-v2 {} v3 {}",
        fmt(slope(&none.branch, Difference(0, 1))),
        fmt(slope(&none.branch, Cell(2)))
    ));

    let c = analyse("C")?;
    let all_linear = |f: &Found| (0..3).all(|k| near(slope(&f.branch, Cell(k)), 1.0, 0.05));
    ensure(c.iter().any(|f| f.label == SyncLabel::Partial && all_linear(f)), || {
        "C: no Partial branch with all slopes 1".into()
    })?;
    let none = c
        .iter()
        .find(|f| f.label == SyncLabel::None && all_linear(f) && near(slope(&f.branch, Difference(0, 1)), 2.0, 0.15))
        .ok_or("C: no None branch with slopes 1 and v1-v2 slope 2")?;
    summary.push(format!("C v1-v2 {}", fmt(slope(&none.branch, Difference(0, 1)))));
    Ok(summary.join("; "))
}

fn criterion_9() -> Outcome {
    let n = bundled::network("triangle").digraph();
    let s = ok(cell_set(&n, &["v1", "v2", "v3"]))?;
    let syms = ok(interior_symmetries(&n, &s, INTERIOR_LIMIT))?;
    let perms = syms.iter().filter(|f| f.invertible).count();
    ensure(perms == 6, || format!("{perms} invertible interior symmetries"))?;
    let sum = ok(connected_sum(&n, &s))?;
    ensure(sum.network.len() == 7, || format!("connected sum has {} cells", sum.network.len()))?;
    ensure(check_fibration(&sum.inclusion.vertex_map, &n, &sum.network), || "i is not a fibration".into())?;
    ensure(check_fibration(&sum.fold.vertex_map, &sum.network, &n), || "j is not a fibration".into())?;
    for sym in &syms {
        let p = ok(interior_to_balanced(&n, &s, &sym.fibration))?;
        ensure(ok(is_balanced(&n, &p))?, || format!("{} is not balanced", p.display(n.cells())))?;
        let phi = ok(extend_to_sum(&n, &s, &sym.fibration, &sum))?;
        ensure(check_fibration(&phi.vertex_map, &sum.network, &sum.network), || "extension is not a fibration".into())?;
        ensure(ok(fixed_space_matches(&sum, &phi, &p))?, || {
            format!("fixed space differs for {}", p.display(n.cells()))
        })?;
    }
    Ok(format!("6 permutations, {} symmetries checked, 7-cell sum", syms.len()))
}

fn criterion_10() -> Outcome {
    let st = table("nonhom");
    let want = rows(&[
        &["σ1^{1,1}", "σ2^{1,1}", "σ1^{1,2}", "*", "*"],
        &["σ2^{1,1}", "σ2^{1,1}", "σ1^{1,2}", "*", "*"],
        &["*", "*", "*", "σ2^{1,1}", "σ1^{1,2}"],
        &["σ1^{2,1}", "σ1^{2,1}", "σ1^{2,2}", "*", "*"],
        &["*", "*", "*", "σ1^{2,1}", "σ1^{2,2}"],
    ]);
    ensure(named_table(&st) == want, || "semigroupoid table differs".into())?;
    let n = imn("nonhom");
    let f1 = ok(fundamental_network_color(&st, 0))?;
    let isos = ok(enumerate_fibrations(&f1, &n, FIBRATION_LIMIT))?.into_iter().filter(|f| f.is_bijective()).count();
    ensure(isos >= 1, || "first fundamental network is not isomorphic to N".into())?;
    let nets: Vec<InputMapNetwork> =
        (0..st.colors().len()).map(|c| fundamental_network_color(&st, c).unwrap()).collect();
    let fibs = ok(groupoid_fibrations(&st))?;
    let mut worst: f64 = 0.0;
    for f in &fibs {
        let src = nets.iter().find(|x| x.name() == f.source).ok_or("unknown source")?;
        let dst = nets.iter().find(|x| x.name() == f.target).ok_or("unknown target")?;
        ensure(check_fibration_input_maps(&f.vertex_map, src, dst), || format!("{f} is not a fibration"))?;
        for seed in 0..5 {
            let rs = responses(&LoadedNetwork::InputMaps(n.clone()), seed);
            worst = worst.max(ok(check_conjugacy(f, &system(dst, &rs), &system(src, &rs), 50, seed))?);
        }
    }
    ensure(worst < 1e-12, || format!("equivariance residual {worst:.3e}"))?;
    Ok(format!("5-element table exact; {} cross fibrations, residual {worst:.3e}", fibs.len()))
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Outcome, Duration); 10] = [
        (criterion_1, Duration::from_secs(1)),
        (criterion_2, Duration::from_secs(5)),
        (criterion_3, Duration::from_secs(1)),
        (criterion_4, Duration::from_secs(10)),
        (criterion_5, Duration::from_secs(10)),
        (criterion_6, Duration::from_secs(30)),
        (criterion_7, Duration::from_secs(5)),
        (criterion_8, Duration::from_secs(120)),
        (criterion_9, Duration::from_secs(5)),
        (criterion_10, Duration::from_secs(5)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *budget => {
                Err(format!("took {:.2}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs()))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
