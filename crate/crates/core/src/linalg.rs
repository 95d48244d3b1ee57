//! Linearization, spectra with multiplicities, generalized eigenspaces.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::dynamics::AdmissibleSystem;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Largest matrix [`spectrum`] accepts.
pub const SPECTRUM_LIMIT: usize = 50;

/// Exact Jacobian of the vector field at `(x, λ)`.
pub fn linearize(sys: &AdmissibleSystem, x: &[f64], lambda: &[f64]) -> Result<DMatrix<f64>> {
    sys.jacobian(x, lambda)
}

/// Central-difference Jacobian, for cross-checking [`linearize`].
pub fn finite_difference_jacobian(sys: &AdmissibleSystem, x: &[f64], lambda: &[f64], h: f64) -> Result<DMatrix<f64>> {
    let n = x.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    for j in 0..n {
        xp[j] = x[j] + h;
        let fp = sys.eval(&xp, lambda)?;
        xp[j] = x[j] - h;
        let fm = sys.eval(&xp, lambda)?;
        xp[j] = x[j];
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Induced infinity norm (largest absolute row sum).
pub fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumWarning {
    /// Computed eigenvalues near this value could not be grouped reliably.
    IllConditioned { near: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Eigenvalue>,
    pub warnings: Vec<SpectrumWarning>,
}

impl Spectrum {
    /// The eigenvalue closest to `value`.
    pub fn nearest(&self, value: Complex64) -> Option<&Eigenvalue> {
        self.eigenvalues.iter().min_by(|a, b| (a.value - value).norm().total_cmp(&(b.value - value).norm()))
    }
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    m.map(|x| Complex::new(x, 0.0))
}

fn singular_values_sorted(m: &DMatrix<Complex<f64>>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol`.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    singular_values_sorted(&to_complex(m)).iter().filter(|&&s| s > tol).count()
}

fn shifted(l: &DMatrix<f64>, mu: Complex64) -> DMatrix<Complex<f64>> {
    let mut m = to_complex(l);
    for i in 0..l.nrows() {
        m[(i, i)] -= mu;
    }
    m
}

fn mean(values: &[Complex64]) -> Complex64 {
    values.iter().sum::<Complex64>() / values.len() as f64
}

/// Dimension of `ker (L − μI)^k`, counting singular values below
/// `tol * ‖L − μI‖^k`.
fn kernel_dim_of_power(l: &DMatrix<f64>, mu: Complex64, k: usize, tol: f64) -> usize {
    let a = shifted(l, mu);
    let scale = a.norm().max(f64::MIN_POSITIVE).powi(k as i32);
    let mut p = DMatrix::identity(l.nrows(), l.nrows());
    for _ in 0..k {
        p = &p * &a;
    }
    singular_values_sorted(&p).iter().filter(|&&s| s <= tol * scale).count()
}

/// Eigenvalues with algebraic and geometric multiplicities.
///
/// Computed eigenvalues are first grouped at `cluster * (1 + ‖L‖)`. Groups
/// within `1e-3 * (1 + ‖L‖)` of each other are then merged when the merged
/// group passes a kernel-dimension test, which recovers defective eigenvalues
/// whose computed copies spread like `ε^(1/m)`.
pub fn spectrum(l: &DMatrix<f64>, tol: &Tolerances) -> Result<Spectrum> {
    let n = l.nrows();
    if n != l.ncols() {
        return Err(Error::DimensionMismatch { expected: n, found: l.ncols() });
    }
    if n > SPECTRUM_LIMIT {
        return Err(Error::TooLarge { size: n, limit: SPECTRUM_LIMIT });
    }
    if n == 0 {
        return Ok(Spectrum { eigenvalues: Vec::new(), warnings: Vec::new() });
    }
    let norm = norm_inf(l);
    let tight = tol.cluster * (1.0 + norm);
    let loose = 1e-3 * (1.0 + norm);
    let raw: Vec<Complex64> = l.complex_eigenvalues().iter().map(|z| Complex64::new(z.re, z.im)).collect();

    let mut clusters = single_linkage(&raw, tight);
    let mut warnings = Vec::new();
    loop {
        let mut merged = false;
        'outer: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let gap = clusters[i]
                    .iter()
                    .flat_map(|a| clusters[j].iter().map(move |b| (a - b).norm()))
                    .fold(f64::INFINITY, f64::min);
                if gap > loose {
                    continue;
                }
                let mut joint = clusters[i].clone();
                joint.extend(clusters[j].iter().copied());
                let mu = mean(&joint);
                if kernel_dim_of_power(l, mu, joint.len(), tol.rank) == joint.len() {
                    clusters[i] = joint;
                    clusters.remove(j);
                    merged = true;
                    break 'outer;
                }
                let near = mu;
                if !warnings.contains(&SpectrumWarning::IllConditioned { near }) {
                    warnings.push(SpectrumWarning::IllConditioned { near });
                }
            }
        }
        if !merged {
            break;
        }
    }

    let rank_tol = tol.rank * norm;
    let mut eigenvalues: Vec<Eigenvalue> = clusters
        .into_iter()
        .map(|c| {
            let mut value = mean(&c);
            if value.im.abs() <= loose {
                value.im = 0.0;
            }
            let r = singular_values_sorted(&shifted(l, value)).iter().filter(|&&s| s > rank_tol).count();
            let geometric = (n - r).clamp(1, c.len());
            Eigenvalue { value, algebraic: c.len(), geometric }
        })
        .collect();
    eigenvalues.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    Ok(Spectrum { eigenvalues, warnings })
}

fn single_linkage(values: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let mut out: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &l) in label.iter().enumerate() {
        match out.iter_mut().find(|(k, _)| *k == l) {
            Some((_, v)) => v.push(values[i]),
            None => out.push((l, vec![values[i]])),
        }
    }
    out.into_iter().map(|(_, v)| v).collect()
}

/// Orthonormal basis (as columns) of the `k` right singular directions with
/// the smallest singular values.
fn smallest_right_singular(m: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = m.ncols();
    let mut square = DMatrix::zeros(m.nrows().max(n), n);
    square.rows_mut(0, m.nrows()).copy_from(m);
    let svd = square.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut basis = DMatrix::zeros(n, k);
    for (c, &i) in idx.iter().take(k).enumerate() {
        basis.set_column(c, &vt.row(i).transpose());
    }
    basis
}

/// Orthonormal basis of `ker m`, using singular values at or below `tol`.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    let mut square = DMatrix::zeros(m.nrows().max(n), n);
    square.rows_mut(0, m.nrows()).copy_from(m);
    let s = square.clone().svd(false, false).singular_values;
    let k = s.iter().filter(|&&x| x <= tol).count();
    smallest_right_singular(m, k)
}

/// Orthonormal basis of `ker (L − λI)^m` for a real eigenvalue `λ` of
/// algebraic multiplicity `m`.
pub fn generalized_eigenspace(l: &DMatrix<f64>, lambda: f64, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let spec = spectrum(l, tol)?;
    let target = Complex64::new(lambda, 0.0);
    let ev = spec
        .nearest(target)
        .filter(|e| (e.value - target).norm() <= 1e-3 * (1.0 + norm_inf(l)) && e.value.im == 0.0)
        .ok_or(Error::NotAnEigenvalue { value: lambda })?;
    let n = l.nrows();
    let mut a = l.clone();
    for i in 0..n {
        a[(i, i)] -= ev.value.re;
    }
    let mut p = DMatrix::identity(n, n);
    for _ in 0..ev.algebraic {
        p = &p * &a;
    }
    Ok(smallest_right_singular(&p, ev.algebraic))
}

/// Real invariant subspace of a complex-conjugate eigenvalue pair:
/// `ker (L² − 2 Re λ L + |λ|² I)^m`, of dimension `2m`.
pub fn generalized_eigenspace_pair(l: &DMatrix<f64>, lambda: Complex64, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let spec = spectrum(l, tol)?;
    let ev = spec
        .nearest(lambda)
        .filter(|e| (e.value - lambda).norm() <= 1e-3 * (1.0 + norm_inf(l)) && e.value.im != 0.0)
        .ok_or(Error::NotAnEigenvalue { value: lambda.re })?;
    let n = l.nrows();
    let q = l * l - l * (2.0 * ev.value.re) + DMatrix::identity(n, n) * ev.value.norm_sqr();
    let mut p = DMatrix::identity(n, n);
    for _ in 0..ev.algebraic {
        p = &p * &q;
    }
    Ok(smallest_right_singular(&p, 2 * ev.algebraic))
}

/// Largest `‖L P − P L‖∞` over the given matrices.
pub fn check_linear_equivariance(l: &DMatrix<f64>, maps: &[DMatrix<f64>]) -> f64 {
    maps.iter().map(|p| norm_inf(&(l * p - p * l))).fold(0.0, f64::max)
}

/// Spectral norm of the difference of the orthogonal projectors onto the
/// column spans of `a` and `b`; zero exactly when the spans agree.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let pa = projector(a);
    let pb = projector(b);
    (pa - pb).svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

fn projector(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 {
        return DMatrix::zeros(n, n);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut p = DMatrix::zeros(n, n);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > 1e-10 * smax {
            let c = u.column(i);
            p += c * c.transpose();
        }
    }
    p
}
