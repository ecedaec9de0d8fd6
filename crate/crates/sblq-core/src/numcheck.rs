//! Desk-scale numerics for the singular Brascamp–Lieb form
//! `Λ = ∫_H f₁(Π₁x) f₂(Π₂x) f₃(Π₃x) K(Π₀x) dx`: kernels with their symbols, the
//! extension `K′(x, y) = |x|^{−d′} e^{−π|y|²/|x|²} K(x)`, a sampled Mikhlin check,
//! quadrature of the form, equivalence invariance and the δ-limit of narrow kernels.
//!
//! Quadrature works in the frame of the Gaussian envelope `e^{−π xᵀQx}` assembled from
//! every Gaussian factor: `x = x_c + L^{−T}u` with `Q = LLᵀ`, then tensor
//! Gauss–Hermite for the weight `e^{−π|u|²}` or importance sampling from a wider normal.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg::{det, inverse, kernel_basis, to_f64, Matrix};
use crate::module::{apply_equivalence, Datum, EquivalenceMap};
use crate::rng::Stream;
use crate::rotations::gauss_legendre;
use crate::Error;

pub const TENSOR_MAX_DIM: usize = 4;
pub const MC_MAX_DIM: usize = 6;
const MC_CHUNK: usize = 1024;

pub fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| to_f64(&m[(i, j)]))
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelKind {
    /// `w^{−d} e^{−π|x|²/w²}`; symbol `e^{−πw²|ξ|²}`.
    NarrowGaussian { width: f64 },
    /// `(1/x)(e^{−πx²/R²} − e^{−πx²/s²})` on ℝ with `s = inner`, `R = outer`.
    TruncatedHomogeneousOdd { inner: f64, outer: f64 },
    /// Radial symbol: a smooth bump on the annulus `r0 < |ξ| < r1`.
    SmoothMultiplierBump { r0: f64, r1: f64 },
    /// `|x|^{−extra} e^{−π|y|²/|x|²} K(x)` over a one-dimensional base kernel.
    Extended { base: Box<KernelSpec>, extra: usize },
}

/// `c · k(Mx)` where `k` is described by `kind` on `ℝ^dim` and `M = pre` (identity if absent).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub dim: usize,
    pub normalization: f64,
    pub pre: Option<DMatrix<f64>>,
}

fn bump(u: f64) -> f64 {
    if libm::fabs(u) >= 1.0 {
        0.0
    } else {
        libm::exp(1.0 - 1.0 / (1.0 - u * u))
    }
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|a| a * a).sum())
}

impl KernelSpec {
    pub fn narrow_gaussian(dim: usize, width: f64) -> Self {
        KernelSpec { kind: KernelKind::NarrowGaussian { width }, dim, normalization: 1.0, pre: None }
    }

    pub fn truncated_odd(inner: f64, outer: f64) -> Self {
        KernelSpec {
            kind: KernelKind::TruncatedHomogeneousOdd { inner, outer },
            dim: 1,
            normalization: 1.0,
            pre: None,
        }
    }

    pub fn bump(dim: usize, r0: f64, r1: f64) -> Self {
        KernelSpec { kind: KernelKind::SmoothMultiplierBump { r0, r1 }, dim, normalization: 1.0, pre: None }
    }

    pub fn scaled(&self, c: f64) -> Self {
        KernelSpec { normalization: self.normalization * c, ..self.clone() }
    }

    /// The argument dimension before the optional pre-map.
    pub fn arg_dim(&self) -> usize {
        self.pre.as_ref().map_or(self.dim, |m| m.ncols())
    }

    /// Whether `eval` is available.
    pub fn spatial(&self) -> bool {
        match &self.kind {
            KernelKind::SmoothMultiplierBump { .. } => self.dim == 1,
            _ => true,
        }
    }

    fn raw(&self, x: &[f64]) -> f64 {
        match &self.kind {
            KernelKind::NarrowGaussian { width } => {
                let r2: f64 = x.iter().map(|a| a * a).sum();
                libm::pow(*width, -(self.dim as f64)) * libm::exp(-PI * r2 / (width * width))
            }
            KernelKind::TruncatedHomogeneousOdd { inner, outer } => {
                let t = x[0];
                let (a, b) = (PI / (outer * outer), PI / (inner * inner));
                if libm::fabs(t) < 1e-6 {
                    // first terms of the Taylor expansion
                    t * (b - a) - t * t * t * (b * b - a * a) / 2.0
                } else {
                    (libm::exp(-a * t * t) - libm::exp(-b * t * t)) / t
                }
            }
            KernelKind::SmoothMultiplierBump { r0, r1 } => {
                // K(x) = 2 ∫ ψ(r) cos(2πxr) dr over the annulus
                let (nodes, w) = gauss_legendre(24);
                let panels = 8;
                let h = (r1 - r0) / panels as f64;
                let mut s = 0.0;
                for p in 0..panels {
                    for (z, wz) in nodes.iter().zip(&w) {
                        let r = r0 + h * (p as f64 + (z + 1.0) / 2.0);
                        let u = (2.0 * r - r0 - r1) / (r1 - r0);
                        s += wz * h / 2.0 * bump(u) * libm::cos(2.0 * PI * x[0] * r);
                    }
                }
                2.0 * s
            }
            KernelKind::Extended { base, extra } => {
                let t = x[0];
                if t == 0.0 {
                    return 0.0;
                }
                let y2: f64 = x[1..].iter().map(|a| a * a).sum();
                libm::pow(libm::fabs(t), -(*extra as f64)) * libm::exp(-PI * y2 / (t * t)) * base.eval(&x[..1])
            }
        }
    }

    /// `c · k(Mx)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.pre {
            None => self.normalization * self.raw(x),
            Some(m) => {
                let y = m * DVector::from_column_slice(x);
                self.normalization * self.raw(y.as_slice())
            }
        }
    }

    /// Symbol `ĉk(ξ) = c ∫ k(x) e^{−2πi x·ξ} dx` (the pre-map is not applied).
    pub fn symbol(&self, xi: &[f64]) -> Complex64 {
        let c = self.normalization;
        match &self.kind {
            KernelKind::NarrowGaussian { width } => {
                let r2: f64 = xi.iter().map(|a| a * a).sum();
                Complex64::new(c * libm::exp(-PI * width * width * r2), 0.0)
            }
            KernelKind::TruncatedHomogeneousOdd { inner, outer } => {
                let sp = libm::sqrt(PI);
                let v = libm::erf(sp * outer * xi[0]) - libm::erf(sp * inner * xi[0]);
                Complex64::new(0.0, -c * PI * v)
            }
            KernelKind::SmoothMultiplierBump { r0, r1 } => {
                let r = norm(xi);
                Complex64::new(c * bump((2.0 * r - r0 - r1) / (r1 - r0)), 0.0)
            }
            KernelKind::Extended { base, .. } => {
                let eta2: f64 = xi[1..].iter().map(|a| a * a).sum();
                c * extended_symbol(base, xi[0], eta2)
            }
        }
    }
}

/// Gaussian decay scale of a one-dimensional base kernel.
fn decay_scale(k: &KernelSpec) -> Option<f64> {
    match k.kind {
        KernelKind::NarrowGaussian { width } => Some(width),
        KernelKind::TruncatedHomogeneousOdd { outer, .. } => Some(outer),
        _ => None,
    }
}

/// `∫ K(x) e^{−πx²|η|²} e^{−2πixξ} dx`: the `y`-integral of the extension done in closed
/// form (`∫ e^{−π|y|²/x²} e^{−2πi y·η} dy = |x|^{d′} e^{−πx²|η|²}`), the `x`-integral by
/// composite Gauss–Legendre on a half-line using the parity of the base kernel.
fn extended_symbol(base: &KernelSpec, xi: f64, eta2: f64) -> Complex64 {
    let scale = decay_scale(base).expect("extension bases are validated");
    let x_max = 4.5 / libm::sqrt(eta2 + 1.0 / (scale * scale));
    let fine = match base.kind {
        KernelKind::TruncatedHomogeneousOdd { inner, .. } => inner,
        _ => scale,
    };
    let h = (1.0 / libm::fabs(xi).max(1e-300)).min(fine).min(x_max / 8.0);
    let panels = libm::ceil(x_max / h) as usize;
    let h = x_max / panels as f64;
    let (z, w) = gauss_legendre(16);
    let odd = matches!(base.kind, KernelKind::TruncatedHomogeneousOdd { .. });
    let mut s = 0.0;
    for p in 0..panels {
        for (zi, wi) in z.iter().zip(&w) {
            let x = h * (p as f64 + (zi + 1.0) / 2.0);
            let g = base.eval(&[x]) * libm::exp(-PI * x * x * eta2);
            let osc = if odd { libm::sin(2.0 * PI * x * xi) } else { libm::cos(2.0 * PI * x * xi) };
            s += wi * h / 2.0 * g * osc;
        }
    }
    if odd {
        Complex64::new(0.0, -2.0 * s)
    } else {
        Complex64::new(2.0 * s, 0.0)
    }
}

/// `K′(x, y) = |x|^{−extra} e^{−π|y|²/|x|²} K(x)` on `ℝ^{1+extra}`.
pub fn extend_kernel(k: &KernelSpec, extra: usize) -> Result<KernelSpec, Error> {
    if k.dim != 1 || k.pre.is_some() || decay_scale(k).is_none() {
        return Err(Error::Numeric(
            "extension needs a one-dimensional narrow Gaussian or truncated odd kernel without pre-map".into(),
        ));
    }
    Ok(KernelSpec {
        kind: KernelKind::Extended { base: Box::new(k.clone()), extra },
        dim: 1 + extra,
        normalization: 1.0,
        pre: None,
    })
}

/// Log-radial samples `r_min · 10^{(k + shift/2)/per_decade} ≤ r_max` times directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MikhlinGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub per_decade: usize,
    /// Directions: ignored in dimension 1 (±1), angles in 2, Fibonacci points in 3.
    pub directions: usize,
    pub shift: bool,
}

impl MikhlinGrid {
    pub fn coarse() -> Self {
        MikhlinGrid { r_min: 1.0 / 64.0, r_max: 64.0, per_decade: 8, directions: 16, shift: false }
    }

    /// Twice as dense in radius and direction, offset from the coarse samples.
    pub fn fine() -> Self {
        MikhlinGrid { r_min: 1.0 / 64.0, r_max: 64.0, per_decade: 16, directions: 32, shift: true }
    }

    fn radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let off = if self.shift { 0.5 } else { 0.0 };
        for k in 0.. {
            let r = self.r_min * libm::pow(10.0, (k as f64 + off) / self.per_decade as f64);
            if r > self.r_max {
                break;
            }
            out.push(r);
        }
        out
    }

    fn unit_directions(&self, dim: usize) -> Vec<Vec<f64>> {
        let off = if self.shift { 0.5 } else { 0.0 };
        match dim {
            1 => alloc::vec![alloc::vec![1.0], alloc::vec![-1.0]],
            2 => (0..self.directions)
                .map(|k| {
                    let a = 2.0 * PI * (k as f64 + off) / self.directions as f64;
                    alloc::vec![libm::cos(a), libm::sin(a)]
                })
                .collect(),
            _ => {
                let n = self.directions.max(2);
                let golden = PI * (3.0 - libm::sqrt(5.0));
                (0..n)
                    .map(|k| {
                        let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                        let r = libm::sqrt(1.0 - z * z);
                        let a = golden * k as f64 + off;
                        alloc::vec![r * libm::cos(a), r * libm::sin(a), z]
                    })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MikhlinReport {
    pub pass: bool,
    /// `max |ξ|^{|α|} |∂^α K̂(ξ)|` over the samples.
    pub worst: f64,
    pub worst_xi: Vec<f64>,
    pub worst_alpha: Vec<usize>,
    pub samples: usize,
}

fn multi_indices(d: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = alloc::vec![alloc::vec![0; d]];
    if max_order >= 1 {
        for j in 0..d {
            let mut a = alloc::vec![0; d];
            a[j] = 1;
            out.push(a);
        }
    }
    if max_order >= 2 {
        for j in 0..d {
            for l in j..d {
                let mut a = alloc::vec![0; d];
                a[j] += 1;
                a[l] += 1;
                out.push(a);
            }
        }
    }
    out
}

/// `|ξ|^{|α|}|∂^α K̂(ξ)|` by central differences with step `|ξ|/20`.
pub fn mikhlin_sample(k: &KernelSpec, xi: &[f64], alpha: &[usize]) -> f64 {
    let r = norm(xi);
    let h = r / 20.0;
    let at = |shift: &[(usize, f64)]| {
        let mut p = xi.to_vec();
        for &(j, s) in shift {
            p[j] += s;
        }
        k.symbol(&p)
    };
    let idx: Vec<usize> = (0..alpha.len()).flat_map(|j| core::iter::repeat(j).take(alpha[j])).collect();
    let der = match idx.as_slice() {
        [] => at(&[]),
        [j] => (at(&[(*j, h)]) - at(&[(*j, -h)])) / (2.0 * h),
        [j, l] if j == l => (at(&[(*j, h)]) - at(&[]) * 2.0 + at(&[(*j, -h)])) / (h * h),
        [j, l] => {
            (at(&[(*j, h), (*l, h)]) - at(&[(*j, h), (*l, -h)]) - at(&[(*j, -h), (*l, h)]) + at(&[(*j, -h), (*l, -h)]))
                / (4.0 * h * h)
        }
        _ => panic!("orders above 2 are not sampled"),
    };
    libm::pow(r, idx.len() as f64) * der.norm()
}

fn check_grid(k: &KernelSpec, max_order: usize, grid: &MikhlinGrid) -> Result<(), Error> {
    if max_order > 2 {
        return Err(Error::Numeric("symbol derivatives are sampled up to order 2".into()));
    }
    if k.dim == 0 || k.dim > 3 {
        return Err(Error::Numeric(format!("Mikhlin sampling supports dimensions 1..=3, got {}", k.dim)));
    }
    if !(grid.r_min > 0.0) || grid.r_max <= grid.r_min || grid.per_decade < 2 || (k.dim > 1 && grid.directions < 2) {
        return Err(Error::Numeric(format!(
            "grid too coarse: need 0 < r_min < r_max, >= 2 radii per decade and >= 2 directions (got {grid:?})"
        )));
    }
    Ok(())
}

/// Every sample `(value, ξ, α)` of the grid.
fn mikhlin_samples(k: &KernelSpec, max_order: usize, grid: &MikhlinGrid) -> Vec<(f64, Vec<f64>, Vec<usize>)> {
    let alphas = multi_indices(k.dim, max_order);
    let mut out = Vec::new();
    for r in grid.radii() {
        for u in grid.unit_directions(k.dim) {
            let xi: Vec<f64> = u.iter().map(|a| a * r).collect();
            for a in &alphas {
                out.push((mikhlin_sample(k, &xi, a), xi.clone(), a.clone()));
            }
        }
    }
    out
}

/// Samples `|ξ|^{|α|}|∂^α K̂(ξ)|`, `|α| ≤ max_order`, over the grid; passes iff the max is ≤ 1.
pub fn verify_mikhlin(k: &KernelSpec, max_order: usize, grid: &MikhlinGrid) -> Result<MikhlinReport, Error> {
    check_grid(k, max_order, grid)?;
    let samples = mikhlin_samples(k, max_order, grid);
    let mut rep = MikhlinReport { pass: true, worst: 0.0, worst_xi: Vec::new(), worst_alpha: Vec::new(), samples: samples.len() };
    for (v, xi, a) in samples {
        if v > rep.worst {
            rep.worst = v;
            rep.worst_xi = xi;
            rep.worst_alpha = a;
        }
    }
    rep.pass = rep.worst <= 1.0;
    Ok(rep)
}

/// Local pattern search for a larger sample near `xi`: relative coordinate steps from
/// 1/10 down to 1/1000 of `|ξ|`.
fn refine(k: &KernelSpec, xi: &[f64], alpha: &[usize], start: f64) -> (f64, Vec<f64>) {
    let (mut best, mut at) = (start, xi.to_vec());
    let mut step = 0.1;
    while step > 1e-3 {
        let mut moved = false;
        for j in 0..at.len() {
            for s in [1.0, -1.0] {
                let mut p = at.clone();
                p[j] += s * step * norm(&at);
                let v = mikhlin_sample(k, &p, alpha);
                if v > best {
                    best = v;
                    at = p;
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    (best, at)
}

/// Normalization `c = 0.97 / sup`, with the supremum estimated from the coarse grid and a
/// local search around its eight largest samples. The report carries the estimate.
pub fn calibrate(k: &KernelSpec, max_order: usize) -> Result<(KernelSpec, MikhlinReport), Error> {
    let unit = k.scaled(1.0 / k.normalization);
    let grid = MikhlinGrid::coarse();
    check_grid(&unit, max_order, &grid)?;
    let mut samples = mikhlin_samples(&unit, max_order, &grid);
    let count = samples.len();
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut rep = MikhlinReport { pass: false, worst: 0.0, worst_xi: Vec::new(), worst_alpha: Vec::new(), samples: count };
    for (v, xi, a) in samples.into_iter().take(8) {
        let (best, at) = refine(&unit, &xi, &a, v);
        if best > rep.worst {
            rep.worst = best;
            rep.worst_xi = at;
            rep.worst_alpha = a;
        }
    }
    if rep.worst == 0.0 {
        return Err(Error::Numeric("kernel symbol vanishes on the grid".into()));
    }
    rep.pass = rep.worst <= 1.0;
    let mut out = unit;
    out.normalization = 0.97 / rep.worst;
    Ok((out, rep))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianTerm {
    pub amp: f64,
    pub center: Vec<f64>,
}

/// `f(y) = Σ_k a_k Π_j e^{−π((My)_j − c_kj)²/w_j²}`; all terms share `M` and `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub terms: Vec<GaussianTerm>,
    pub width: Vec<f64>,
    pub pre: Option<DMatrix<f64>>,
}

impl TestFunction {
    pub fn gaussian(center: Vec<f64>, width: Vec<f64>) -> Self {
        TestFunction { terms: alloc::vec![GaussianTerm { amp: 1.0, center }], width, pre: None }
    }

    pub fn arg_dim(&self) -> usize {
        self.pre.as_ref().map_or(self.width.len(), |m| m.ncols())
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let z: Vec<f64> = match &self.pre {
            None => y.to_vec(),
            Some(m) => (m * DVector::from_column_slice(y)).as_slice().to_vec(),
        };
        self.terms
            .iter()
            .map(|t| {
                let e: f64 = z.iter().zip(&t.center).zip(&self.width).map(|((a, c), w)| (a - c) * (a - c) / (w * w)).sum();
                t.amp * libm::exp(-PI * e)
            })
            .sum()
    }

    pub fn plus(&self, o: &TestFunction) -> Result<TestFunction, Error> {
        if self.width != o.width || self.pre != o.pre {
            return Err(Error::Numeric("summed test functions must share widths and pre-map".into()));
        }
        let mut f = self.clone();
        f.terms.extend(o.terms.iter().cloned());
        Ok(f)
    }

    pub fn scaled(&self, c: f64) -> TestFunction {
        let mut f = self.clone();
        for t in &mut f.terms {
            t.amp *= c;
        }
        f
    }

    fn compose(&self, m: &DMatrix<f64>) -> TestFunction {
        let pre = match &self.pre {
            None => m.clone(),
            Some(p) => p * m,
        };
        TestFunction { pre: Some(pre), ..self.clone() }
    }

    /// Envelope rows `diag(1/w) M` and the mean centre over `w`.
    fn envelope(&self) -> (DMatrix<f64>, DVector<f64>) {
        let k = self.width.len();
        let m = self.pre.clone().unwrap_or_else(|| DMatrix::identity(k, k));
        let g = DMatrix::from_fn(k, m.ncols(), |i, j| m[(i, j)] / self.width[i]);
        let nt = self.terms.len().max(1) as f64;
        let h = DVector::from_fn(k, |i, _| self.terms.iter().map(|t| t.center[i]).sum::<f64>() / nt / self.width[i]);
        (g, h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormSpec {
    pub datum: Datum,
    pub kernel: KernelSpec,
    pub functions: [TestFunction; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadSpec {
    /// Gauss–Hermite points per axis; the error estimate compares with half as many.
    Tensor(usize),
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec::Tensor(32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

enum FactorKind<'a> {
    Function(&'a TestFunction),
    Kernel(&'a KernelSpec),
}

/// One factor `g(A x)` of an integrand on `ℝ^m`.
struct Factor<'a> {
    map: DMatrix<f64>,
    kind: FactorKind<'a>,
}

impl Factor<'_> {
    fn eval(&self, x: &DVector<f64>) -> f64 {
        let y = &self.map * x;
        match self.kind {
            FactorKind::Function(f) => f.eval(y.as_slice()),
            FactorKind::Kernel(k) => k.eval(y.as_slice()),
        }
    }

    fn envelope(&self) -> Option<(DMatrix<f64>, DVector<f64>)> {
        match self.kind {
            FactorKind::Function(f) => {
                let (g, h) = f.envelope();
                Some((g * &self.map, h))
            }
            FactorKind::Kernel(k) => match k.kind {
                KernelKind::NarrowGaussian { width } => {
                    let m = k.pre.clone().unwrap_or_else(|| DMatrix::identity(k.dim, k.dim));
                    Some((m * &self.map / width, DVector::zeros(k.dim)))
                }
                _ => None,
            },
        }
    }
}

fn integrate(factors: &[Factor], dim: usize, quad: QuadSpec) -> Result<Estimate, Error> {
    let product = |x: &DVector<f64>| factors.iter().map(|f| f.eval(x)).product::<f64>();
    if dim == 0 {
        return Ok(Estimate { value: product(&DVector::zeros(0)), error: 0.0 });
    }
    let mut q = DMatrix::<f64>::zeros(dim, dim);
    let mut b = DVector::<f64>::zeros(dim);
    for f in factors {
        if let Some((g, h)) = f.envelope() {
            q += g.transpose() * &g;
            b += g.transpose() * h;
        }
    }
    let trace = q.trace();
    let chol = nalgebra::Cholesky::new(q.clone())
        .filter(|c| c.l().diagonal().iter().all(|d| d * d > 1e-12 * trace.max(1e-300)))
        .ok_or_else(|| {
            Error::Numeric("integrand has no Gaussian envelope: the joint kernel of the Gaussian factors is nontrivial".into())
        })?;
    let center = chol.solve(&b);
    let l = chol.l();
    let lt_inv = l.transpose().try_inverse().expect("Cholesky factor is invertible");
    let jac = 1.0 / l.diagonal().iter().product::<f64>();
    let at = |u: &[f64]| {
        let x = &center + &lt_inv * DVector::from_column_slice(u);
        product(&x)
    };
    match quad {
        QuadSpec::Tensor(n) => {
            if dim > TENSOR_MAX_DIM {
                return Err(Error::Numeric(format!("tensor quadrature limited to dimension {TENSOR_MAX_DIM}, got {dim}")));
            }
            if n < 2 {
                return Err(Error::Numeric("tensor quadrature needs at least 2 points per axis".into()));
            }
            let (full, abs) = tensor_rule(&at, dim, n);
            let (half, _) = tensor_rule(&at, dim, n / 2);
            let floor = 64.0 * f64::EPSILON * abs;
            Ok(Estimate { value: jac * full, error: jac * (libm::fabs(full - half) + floor) })
        }
        QuadSpec::MonteCarlo { samples, seed } => {
            if dim > MC_MAX_DIM {
                return Err(Error::Numeric(format!("Monte Carlo limited to dimension {MC_MAX_DIM}, got {dim}")));
            }
            if samples < 2 {
                return Err(Error::Numeric("Monte Carlo needs at least 2 samples".into()));
            }
            // proposal density 2^{−m/2} e^{−π|u|²/2}
            let sigma = libm::sqrt(1.0 / PI);
            let pnorm = libm::pow(2.0, -(dim as f64) / 2.0);
            let (mut sum, mut sum2) = (0.0, 0.0);
            let chunks = samples.div_ceil(MC_CHUNK);
            for c in 0..chunks {
                let mut s = Stream::new(seed, c as u64);
                let (mut cs, mut cs2) = (0.0, 0.0);
                for _ in 0..MC_CHUNK.min(samples - c * MC_CHUNK) {
                    let u: Vec<f64> = (0..dim).map(|_| sigma * s.normal()).collect();
                    let r2: f64 = u.iter().map(|a| a * a).sum();
                    let v = at(&u) / (pnorm * libm::exp(-PI * r2 / 2.0));
                    cs += v;
                    cs2 += v * v;
                }
                sum += cs;
                sum2 += cs2;
            }
            let nf = samples as f64;
            let mean = sum / nf;
            let var = ((sum2 / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
            Ok(Estimate { value: jac * mean, error: jac * libm::sqrt(var / nf) })
        }
    }
}

/// Gauss–Hermite nodes and weights for `∫ g(v) e^{−v²} dv`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let pim4 = libm::pow(PI, -0.25);
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        // initial guesses for the largest roots, then extrapolation from the previous ones
        z = match i {
            0 => libm::sqrt(2.0 * n as f64 + 1.0) - 1.85575 * libm::pow(2.0 * n as f64 + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * libm::pow(n as f64, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // orthonormal Hermite recurrence
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = z * libm::sqrt(2.0 / j as f64) * p2 - libm::sqrt((j as f64 - 1.0) / j as f64) * p3;
            }
            pp = libm::sqrt(2.0 * n as f64) * p2;
            let dz = p1 / pp;
            z -= dz;
            if libm::fabs(dz) <= 1e-15 * libm::fabs(z).max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Tensor Gauss–Hermite for `∫ f(u) du` with `f(u) = g(u) e^{−π|u|²}`: the sum and the
/// sum of absolute terms.
fn tensor_rule(f: &impl Fn(&[f64]) -> f64, dim: usize, n: usize) -> (f64, f64) {
    let (z, w) = gauss_hermite(n);
    let s = 1.0 / libm::sqrt(PI);
    let mut idx = alloc::vec![0usize; dim];
    let mut u = alloc::vec![0.0; dim];
    let (mut sum, mut abs) = (0.0, 0.0);
    loop {
        let (mut wt, mut r2) = (1.0, 0.0);
        for j in 0..dim {
            u[j] = s * z[idx[j]];
            r2 += z[idx[j]] * z[idx[j]];
            wt *= s * w[idx[j]];
        }
        let v = wt * libm::exp(r2) * f(&u);
        sum += v;
        abs += libm::fabs(v);
        let mut j = 0;
        loop {
            if j == dim {
                return (sum, abs);
            }
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn check_shapes(spec: &FormSpec) -> Result<(), Error> {
    let d = &spec.datum;
    if spec.kernel.arg_dim() != d.dims[0] {
        return Err(Error::Shape(format!("kernel takes {} arguments, h0 = {}", spec.kernel.arg_dim(), d.dims[0])));
    }
    if !spec.kernel.spatial() {
        return Err(Error::Numeric("kernel has no spatial evaluator in this dimension".into()));
    }
    for i in 0..3 {
        let f = &spec.functions[i];
        if f.arg_dim() != d.dims[i + 1] {
            return Err(Error::Shape(format!("f{} takes {} arguments, h{} = {}", i + 1, f.arg_dim(), i + 1, d.dims[i + 1])));
        }
        if f.terms.iter().any(|t| t.center.len() != f.width.len()) {
            return Err(Error::Shape(format!("f{}: centre and width lengths differ", i + 1)));
        }
    }
    Ok(())
}

/// `Λ_H(K, f₁, f₂, f₃)` with an error estimate.
pub fn eval_form(spec: &FormSpec, quad: QuadSpec) -> Result<Estimate, Error> {
    check_shapes(spec)?;
    let pi: Vec<DMatrix<f64>> = spec.datum.pi.iter().map(to_dmatrix).collect();
    let mut factors: Vec<Factor> = (0..3)
        .map(|i| Factor { map: pi[i + 1].clone(), kind: FactorKind::Function(&spec.functions[i]) })
        .collect();
    factors.push(Factor { map: pi[0].clone(), kind: FactorKind::Kernel(&spec.kernel) });
    integrate(&factors, spec.datum.dim_h, quad)
}

/// `Λ` in the frame of `(φ, φ_i)`: each `Π_i` becomes `φ_i Π_i φ⁻¹`, each function
/// `f_i ∘ φ_i⁻¹` (kernel `K ∘ φ₀⁻¹`), and the result is divided by `|det φ|`.
pub fn transformed_spec(spec: &FormSpec, e: &EquivalenceMap) -> Result<(FormSpec, f64), Error> {
    let datum = apply_equivalence(&spec.datum, e)?;
    let inv = |m: &Matrix| inverse(m).map(|x| to_dmatrix(&x)).ok_or(Error::Singular("phi_i"));
    let mut kernel = spec.kernel.clone();
    let k0 = inv(&e.phi_i[0])?;
    kernel.pre = Some(match &kernel.pre {
        None => k0,
        Some(p) => p * k0,
    });
    let mut functions = spec.functions.clone();
    for i in 0..3 {
        functions[i] = spec.functions[i].compose(&inv(&e.phi_i[i + 1])?);
    }
    let jac = libm::fabs(to_f64(&det(&e.phi)));
    Ok((FormSpec { datum, kernel, functions }, jac))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvarianceReport {
    pub original: Estimate,
    pub transformed: Estimate,
    /// `|det φ|`, exact up to the final conversion.
    pub jacobian: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn check_equivalence_invariance(spec: &FormSpec, e: &EquivalenceMap, quad: QuadSpec) -> Result<InvarianceReport, Error> {
    let original = eval_form(spec, quad)?;
    let (t, jac) = transformed_spec(spec, e)?;
    let transformed = eval_form(&t, quad)?;
    let residual = libm::fabs(transformed.value / jac - original.value);
    let tolerance = 3.0 * (original.error + transformed.error / jac);
    Ok(InvarianceReport { original, transformed, jacobian: jac, residual, tolerance, pass: residual <= tolerance })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaReport {
    pub widths: Vec<f64>,
    pub values: Vec<Estimate>,
    /// `(1/√det(Π₀Π₀ᵀ)) ∫_{ker Π₀} f₁(Π₁x) f₂(Π₂x) f₃(Π₃x) dx`.
    pub limit: Estimate,
    pub constant: f64,
    pub residuals: Vec<f64>,
    pub decreasing: bool,
}

pub const DELTA_WIDTHS: [f64; 3] = [0.25, 0.125, 0.0625];

/// Orthonormal basis of `ker Π₀` (exactly the identity when `h₀ = 0`).
fn orthonormal_kernel(p0: &Matrix) -> DMatrix<f64> {
    if p0.rows() == 0 {
        return DMatrix::identity(p0.cols(), p0.cols());
    }
    let k = kernel_basis(p0);
    let b = to_dmatrix(k.basis());
    if b.ncols() == 0 {
        return DMatrix::zeros(p0.cols(), 0);
    }
    b.qr().q()
}

pub fn delta_limit_check(d: &Datum, functions: &[TestFunction; 3], quad: QuadSpec) -> Result<DeltaReport, Error> {
    let mut values = Vec::new();
    for w in DELTA_WIDTHS {
        let spec = FormSpec { datum: d.clone(), kernel: KernelSpec::narrow_gaussian(d.dims[0], w), functions: functions.clone() };
        values.push(eval_form(&spec, quad)?);
    }
    let constant = 1.0 / libm::sqrt(to_f64(&det(&d.pi[0].mul(&d.pi[0].transpose()))));
    let u = orthonormal_kernel(&d.pi[0]);
    let factors: Vec<Factor> = (0..3)
        .map(|i| Factor { map: to_dmatrix(&d.pi[i + 1]) * &u, kind: FactorKind::Function(&functions[i]) })
        .collect();
    let raw = integrate(&factors, u.ncols(), quad)?;
    let limit = Estimate { value: constant * raw.value, error: constant * raw.error };
    let residuals: Vec<f64> = values.iter().map(|v| libm::fabs(v.value - limit.value)).collect();
    let decreasing = residuals.windows(2).all(|w| w[1] < w[0]) || residuals.iter().all(|r| *r == 0.0);
    Ok(DeltaReport { widths: DELTA_WIDTHS.to_vec(), values, limit, constant, residuals, decreasing })
}

/// Unit-width Gaussians with centres `k/4`, `|k| ≤ 2`, drawn from `(seed, 0)`.
pub fn default_functions(d: &Datum, seed: u64) -> [TestFunction; 3] {
    let mut s = Stream::new(seed, 0);
    core::array::from_fn(|i| {
        let h = d.dims[i + 1];
        let center = (0..h).map(|_| s.int_in(-2, 2) as f64 / 4.0).collect();
        TestFunction::gaussian(center, alloc::vec![1.0; h])
    })
}

/// Narrow Gaussian of width 1/2 on `H₀` and `default_functions`.
pub fn default_form(d: &Datum, seed: u64) -> FormSpec {
    FormSpec { datum: d.clone(), kernel: KernelSpec::narrow_gaussian(d.dims[0], 0.5), functions: default_functions(d, seed) }
}

pub fn describe_kernel(k: &KernelSpec) -> String {
    match &k.kind {
        KernelKind::NarrowGaussian { width } => format!("narrow-gaussian(w={width}, dim={})", k.dim),
        KernelKind::TruncatedHomogeneousOdd { inner, outer } => format!("truncated-odd(s={inner}, R={outer})"),
        KernelKind::SmoothMultiplierBump { r0, r1 } => format!("bump({r0}<|xi|<{r1}, dim={})", k.dim),
        KernelKind::Extended { base, extra } => format!("extended({}, +{extra})", describe_kernel(base)),
    }
}
