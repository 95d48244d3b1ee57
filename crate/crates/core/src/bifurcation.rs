//! Steady-state branches near a fully synchronous bifurcation point, their
//! synchrony and power-law asymptotics.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::dynamics::{AdmissibleSystem, ResponseFunction, Term};
use crate::error::{Error, Result};
use crate::network::Partition;
use crate::rng::{derive_seed, SplitMix64};
use crate::synchrony::syn_subspace_project;
use crate::tolerances::Tolerances;

/// Coefficients of `f(x,y,z;λ) = αλx + b y + c z + A x² + B xy + C y² + D xz + E yz + F z²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticResponse {
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub d2: f64,
    pub e2: f64,
    pub f2: f64,
}

impl Default for QuadraticResponse {
    fn default() -> Self {
        QuadraticResponse { alpha: 1.0, b: 0.5, c: -0.2, a2: 1.0, b2: 0.3, c2: 0.2, d2: 0.1, e2: -0.15, f2: 0.05 }
    }
}

impl QuadraticResponse {
    /// `A − (c/b)B + (c/b)²C + D − (c/b)E + F`.
    pub fn h(&self) -> f64 {
        let r = self.c / self.b;
        self.a2 - r * self.b2 + r * r * self.c2 + self.d2 - r * self.e2 + self.f2
    }

    /// Fails when one of `α, b, c, b + c, A, H` is smaller than `1e-6` in magnitude.
    pub fn check_genericity(&self) -> Result<()> {
        let witnesses = [
            ("alpha", self.alpha),
            ("b", self.b),
            ("c", self.c),
            ("b + c", self.b + self.c),
            ("A", self.a2),
            ("H", if self.b == 0.0 { 0.0 } else { self.h() }),
        ];
        for (name, value) in witnesses {
            if value.abs() < 1e-6 {
                return Err(Error::Genericity(format!("{name} = {value:e} vanishes")));
            }
        }
        Ok(())
    }

    pub fn response(&self) -> Result<ResponseFunction> {
        let t =
            |coeff: f64, powers: [u32; 3], lp: u32| Term { coeff, out: 0, powers: powers.to_vec(), lpowers: vec![lp] };
        let terms = vec![
            t(self.alpha, [1, 0, 0], 1),
            t(self.b, [0, 1, 0], 0),
            t(self.c, [0, 0, 1], 0),
            t(self.a2, [2, 0, 0], 0),
            t(self.b2, [1, 1, 0], 0),
            t(self.c2, [0, 2, 0], 0),
            t(self.d2, [1, 0, 1], 0),
            t(self.e2, [0, 1, 1], 0),
            t(self.f2, [0, 0, 2], 0),
        ];
        ResponseFunction::new(vec![1; 3], 1, 1, terms.into_iter().filter(|t| t.coeff != 0.0).collect(), vec![])
    }
}

/// Grid and search settings for [`find_branches`].
#[derive(Debug, Clone, PartialEq)]
pub struct BranchConfig {
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub points: usize,
    pub starts: usize,
    /// Start balls have radii `radius·√|λ|` and `radius·|λ|`.
    pub radius: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for BranchConfig {
    fn default() -> Self {
        BranchConfig {
            lambda_max: 1e-2,
            lambda_min: 1e-5,
            points: 16,
            starts: 200,
            radius: 3.0,
            max_iterations: 50,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

impl BranchConfig {
    /// Geometric grid from `lambda_max` down to `lambda_min`, times `sign`.
    pub fn grid(&self, sign: f64) -> Vec<f64> {
        let n = self.points.max(2);
        let ratio = (self.lambda_min / self.lambda_max).ln() / (n - 1) as f64;
        (0..n).map(|k| sign * self.lambda_max * (ratio * k as f64).exp()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub lambda: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub samples: Vec<Sample>,
}

impl Branch {
    pub fn lambdas(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.lambda).collect()
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.samples.iter().all(|s| s.x.iter().all(|v| v.abs() <= tol))
    }

    /// Samples replaced by their block means over `p`.
    pub fn projected(&self, p: &Partition) -> Result<Branch> {
        let samples = self
            .samples
            .iter()
            .map(|s| Ok(Sample { lambda: s.lambda, x: syn_subspace_project(p, &s.x)? }))
            .collect::<Result<_>>()?;
        Ok(Branch { samples })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchSearch {
    pub branches: Vec<Branch>,
    /// Start points whose Newton iteration did not converge.
    pub failed_starts: usize,
}

/// Newton's method with step halving; returns the root and its residual.
pub fn newton(sys: &AdmissibleSystem, x0: &[f64], lambda: &[f64], max_iterations: usize, tol: f64) -> Option<Vec<f64>> {
    let mut x = DVector::from_column_slice(x0);
    let mut fx = DVector::from_vec(sys.eval(x.as_slice(), lambda).ok()?);
    let mut res = fx.amax();
    let mut polish = 0;
    for _ in 0..max_iterations {
        if res < tol {
            polish += 1;
            if polish > 2 {
                break;
            }
        }
        let jac: DMatrix<f64> = sys.jacobian(x.as_slice(), lambda).ok()?;
        let step = jac.lu().solve(&(-&fx))?;
        let mut t = 1.0;
        loop {
            let trial = &x + &step * t;
            let ft = DVector::from_vec(sys.eval(trial.as_slice(), lambda).ok()?);
            let rt = ft.amax();
            if rt.is_finite() && (rt <= res || t < 1e-3 || res < tol) {
                x = trial;
                fx = ft;
                res = rt;
                break;
            }
            t *= 0.5;
        }
        if !res.is_finite() {
            return None;
        }
    }
    (res < tol).then(|| x.as_slice().to_vec())
}

/// Keeps the smallest-norm representative of each cluster.
fn dedup(mut sols: Vec<Vec<f64>>, radius: f64) -> Vec<Vec<f64>> {
    sols.sort_by(|a, b| {
        norm(a).total_cmp(&norm(b)).then_with(|| {
            a.iter().zip(b).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let mut out: Vec<Vec<f64>> = Vec::new();
    for s in sols {
        if !out.iter().any(|o| dist(o, &s) <= radius) {
            out.push(s);
        }
    }
    out
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Steady states near zero at one parameter value.
fn solve_at(
    sys: &AdmissibleSystem,
    lambda: f64,
    previous: &[Vec<f64>],
    cfg: &BranchConfig,
    stream: u64,
) -> (Vec<Vec<f64>>, usize) {
    let n = sys.dim();
    let mut rng = SplitMix64::new(derive_seed(cfg.seed, stream));
    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    starts.extend(previous.iter().cloned());
    let big = cfg.radius * lambda.abs().sqrt();
    let small = cfg.radius * lambda.abs();
    for k in 0..cfg.starts {
        let r = if k % 2 == 0 { big } else { small };
        starts.push(rng.symmetric_vec(n).into_iter().map(|v| v * r).collect());
    }
    let bound = cfg.radius * lambda.abs().sqrt();
    let results: Vec<Option<Vec<f64>>> =
        starts.par_iter().map(|s| newton(sys, s, &[lambda], cfg.max_iterations, cfg.tolerances.newton)).collect();
    let failed = results.iter().filter(|r| r.is_none()).count();
    let sols = results.into_iter().flatten().filter(|x| norm(x) <= bound).collect();
    (dedup(sols, cfg.tolerances.solution_cluster), failed)
}

/// Predicted position of a branch at `lambda` by power-law extrapolation.
fn predict(samples: &[Sample], lambda: f64, exponent_guess: f64) -> Vec<f64> {
    let last = samples.last().unwrap();
    let ratio = lambda / last.lambda;
    if samples.len() < 2 {
        return last.x.iter().map(|v| v * ratio.powf(exponent_guess)).collect();
    }
    let prev = &samples[samples.len() - 2];
    let step = (last.lambda / prev.lambda).ln();
    last.x
        .iter()
        .zip(&prev.x)
        .map(|(&a, &b)| {
            if a != 0.0 && b != 0.0 && a.signum() == b.signum() {
                let s = (a / b).ln() / step;
                a * ratio.powf(s)
            } else {
                a * ratio
            }
        })
        .collect()
}

fn match_distance(pred: &[f64], sol: &[f64], floor: f64) -> f64 {
    dist(pred, sol) / norm(pred).max(floor)
}

/// Follows steady states along the grid; only branches present at every grid
/// point are returned.
pub fn find_branches_on(sys: &AdmissibleSystem, grid: &[f64], cfg: &BranchConfig) -> Result<BranchSearch> {
    if sys.params() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: sys.params() });
    }
    let floor = cfg.tolerances.newton;
    let mut failed_starts = 0;
    let mut live: Vec<Branch> = Vec::new();
    let mut previous: Vec<Vec<f64>> = Vec::new();
    for (k, &lambda) in grid.iter().enumerate() {
        let (sols, failed) = solve_at(sys, lambda, &previous, cfg, k as u64);
        failed_starts += failed;
        if k == 0 {
            live = sols.iter().map(|x| Branch { samples: vec![Sample { lambda, x: x.clone() }] }).collect();
        } else {
            let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
            for (b, br) in live.iter().enumerate() {
                let preds: Vec<Vec<f64>> = if br.samples.len() < 2 {
                    vec![predict(&br.samples, lambda, 0.5), predict(&br.samples, lambda, 1.0)]
                } else {
                    vec![predict(&br.samples, lambda, 1.0)]
                };
                for (s, x) in sols.iter().enumerate() {
                    let d = preds.iter().map(|p| match_distance(p, x, floor)).fold(f64::INFINITY, f64::min);
                    if d < 0.5 {
                        candidates.push((d, b, s));
                    }
                }
            }
            candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut branch_used = vec![false; live.len()];
            let mut sol_used = vec![false; sols.len()];
            for (_, b, s) in candidates {
                if branch_used[b] || sol_used[s] {
                    continue;
                }
                branch_used[b] = true;
                sol_used[s] = true;
                live[b].samples.push(Sample { lambda, x: sols[s].clone() });
            }
            live = live.into_iter().zip(branch_used).filter(|(_, u)| *u).map(|(b, _)| b).collect();
        }
        previous = live.iter().map(|b| b.samples.last().unwrap().x.clone()).collect();
    }
    for i in 0..live.len() {
        for j in 0..i {
            let (a, b) = (&live[i].samples, &live[j].samples);
            if a.iter().zip(b).all(|(p, q)| dist(&p.x, &q.x) <= cfg.tolerances.solution_cluster) {
                return Err(Error::BranchAssemblyAmbiguous { lambda: a.last().unwrap().lambda });
            }
        }
    }
    live.sort_by(|a, b| {
        let (x, y) = (&a.samples.last().unwrap().x, &b.samples.last().unwrap().x);
        norm(x).total_cmp(&norm(y)).then_with(|| {
            x.iter().zip(y).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(BranchSearch { branches: live, failed_starts })
}

/// Branches on the positive side of the grid; the negative side is scanned
/// as well when no branch grows like a square root.
pub fn find_branches(sys: &AdmissibleSystem, cfg: &BranchConfig) -> Result<BranchSearch> {
    let mut found = find_branches_on(sys, &cfg.grid(1.0), cfg)?;
    let has_root = found.branches.iter().any(|b| {
        fit_exponents(b, &cfg.tolerances)
            .iter()
            .any(|f| matches!(f.outcome, FitOutcome::Slope(p) if (p.slope - 0.5).abs() < 0.1))
    });
    if !has_root {
        let neg = find_branches_on(sys, &cfg.grid(-1.0), cfg)?;
        found.failed_starts += neg.failed_starts;
        found.branches.extend(neg.branches.into_iter().filter(|b| !b.is_trivial(0.0)));
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncLabel {
    Full,
    Partial,
    None,
}

impl std::fmt::Display for SyncLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SyncLabel::Full => "Full",
            SyncLabel::Partial => "Partial",
            SyncLabel::None => "None",
        })
    }
}

/// The balanced partition with fewest blocks whose synchrony subspace holds
/// every sample (relative spread below `sync_spread`), and its label.
pub fn classify_synchrony(branch: &Branch, partitions: &[Partition], tol: &Tolerances) -> (Partition, SyncLabel) {
    let n = branch.samples.first().map_or(0, |s| s.x.len());
    let holds = |p: &Partition| {
        branch.samples.iter().all(|s| {
            let scale = norm(&s.x);
            p.blocks().iter().all(|b| b.iter().all(|&v| (s.x[v] - s.x[b[0]]).abs() <= tol.sync_spread * scale))
        })
    };
    let best = partitions
        .iter()
        .filter(|p| holds(p))
        .min_by_key(|p| p.num_blocks())
        .cloned()
        .unwrap_or_else(|| Partition::singletons(n));
    let label = if best.num_blocks() == 1 {
        SyncLabel::Full
    } else if best.is_singletons() {
        SyncLabel::None
    } else {
        SyncLabel::Partial
    };
    (best, label)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub stderr: f64,
    pub max_residual: f64,
}

/// Least-squares slope of `log|value|` against `log|λ|`.
pub fn fit_power_law(lambdas: &[f64], values: &[f64]) -> Result<PowerFit> {
    let pts: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(values)
        .filter(|(l, v)| v.abs() > 0.0 && l.abs() > 0.0)
        .map(|(l, v)| (l.abs().ln(), v.abs().ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientData { found: pts.len(), needed: 8 });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx = pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let resid: Vec<f64> = pts.iter().map(|p| p.1 - (icpt + slope * p.0)).collect();
    let ssr = resid.iter().map(|r| r * r).sum::<f64>();
    let stderr = (ssr / (m - 2.0) / sxx).sqrt();
    let max_residual = resid.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(PowerFit { slope, stderr, max_residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Cell(usize),
    Difference(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitOutcome {
    Slope(PowerFit),
    /// Every sample is zero up to rounding.
    Zero,
    Insufficient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub target: Target,
    pub outcome: FitOutcome,
}

/// Exponents of every coordinate and every pairwise difference. Values
/// within `zero_value · ‖x‖∞` of zero count as zero.
pub fn fit_exponents(branch: &Branch, tol: &Tolerances) -> Vec<ExponentFit> {
    let n = branch.samples.first().map_or(0, |s| s.x.len());
    let mut targets: Vec<Target> = (0..n).map(Target::Cell).collect();
    for i in 0..n {
        for j in i + 1..n {
            targets.push(Target::Difference(i, j));
        }
    }
    targets
        .into_iter()
        .map(|target| {
            let mut lambdas = Vec::new();
            let mut values = Vec::new();
            for s in &branch.samples {
                let v = match target {
                    Target::Cell(i) => s.x[i],
                    Target::Difference(i, j) => s.x[i] - s.x[j],
                };
                if v.abs() > tol.zero_value * norm(&s.x) && v != 0.0 {
                    lambdas.push(s.lambda);
                    values.push(v);
                }
            }
            let outcome = if values.is_empty() {
                FitOutcome::Zero
            } else {
                match fit_power_law(&lambdas, &values) {
                    Ok(p) => FitOutcome::Slope(p),
                    Err(_) => FitOutcome::Insufficient,
                }
            };
            ExponentFit { target, outcome }
        })
        .collect()
}
