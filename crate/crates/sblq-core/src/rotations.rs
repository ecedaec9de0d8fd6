//! Funk transform spectrum and the slice decomposition of mean-zero sphere functions.
//!
//! General `d` is handled at the eigenvalue level. The slice machinery is `d = 3`:
//! real spherical harmonics orthonormal for the probability measure `σ`, a
//! Gauss–Legendre × uniform-azimuth grid, and uniform great-circle quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::rng::Stream;
use crate::Error;

/// Centralized tolerances for the spectral and quadrature checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub spectral: f64,
    pub quadrature: f64,
    pub superposition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { spectral: 1e-10, quadrature: 1e-6, superposition: 1e-5 }
    }
}

/// `C_n^k(t)` by the three-term recurrence of the generating function `(1 − 2rt + r²)^{−k}`.
pub fn gegenbauer(n: usize, k: f64, t: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * k * t);
    if n == 0 {
        return a;
    }
    for m in 2..=n {
        let m = m as f64;
        let c = (2.0 * t * (m + k - 1.0) * b - (m + 2.0 * k - 2.0) * a) / m;
        a = b;
        b = c;
    }
    b
}

/// `λ_n = C_n^{(d−2)/2}(0) / C_n^{(d−2)/2}(1)`.
pub fn funk_eigenvalue(n: usize, d: usize) -> f64 {
    assert!(d >= 3, "Funk eigenvalues need d >= 3");
    if n % 2 == 1 {
        return 0.0;
    }
    let k = (d as f64 - 2.0) / 2.0;
    gegenbauer(n, k, 0.0) / gegenbauer(n, k, 1.0)
}

/// Closed form for even `n`: `(−1)^{n/2} 2^{3−d} Γ(d−2) Γ((n+1)/2) / (Γ(d/2−1) Γ((n+d−1)/2))`.
pub fn funk_eigenvalue_gamma(n: usize, d: usize) -> f64 {
    assert!(d >= 3);
    if n % 2 == 1 {
        return 0.0;
    }
    let (nf, df) = (n as f64, d as f64);
    let lg = libm::lgamma;
    let log_abs = (3.0 - df) * core::f64::consts::LN_2 + lg(df - 2.0) + lg((nf + 1.0) / 2.0)
        - lg(df / 2.0 - 1.0)
        - lg((nf + df - 1.0) / 2.0);
    let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * libm::exp(log_abs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunkSpectrum {
    pub d: usize,
    pub max_degree: usize,
    pub lambda: Vec<f64>,
}

impl FunkSpectrum {
    pub fn new(d: usize, max_degree: usize) -> Self {
        FunkSpectrum { d, max_degree, lambda: (0..=max_degree).map(|n| funk_eigenvalue(n, d)).collect() }
    }
}

/// Least-squares slope of `log|λ_n|` against `log n` over even `n ∈ [lo, hi]`.
pub fn decay_exponent_fit(d: usize, lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .filter(|n| n % 2 == 0)
        .map(|n| (libm::log(n as f64), libm::log(libm::fabs(funk_eigenvalue(n, d)))))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if libm::fabs(dz) < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Real spherical-harmonic coefficients up to degree `band`, entry `n² + n + m` for `|m| ≤ n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShCoeffs {
    pub band: usize,
    pub c: Vec<f64>,
}

pub fn sh_index(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

impl ShCoeffs {
    pub fn zero(band: usize) -> Self {
        ShCoeffs { band, c: alloc::vec![0.0; (band + 1) * (band + 1)] }
    }

    /// The single harmonic `Y_{n,m}`.
    pub fn harmonic(band: usize, n: usize, m: i64) -> Self {
        let mut z = ShCoeffs::zero(band);
        z.c[sh_index(n, m)] = 1.0;
        z
    }

    pub fn degree_of(i: usize) -> usize {
        libm::sqrt(i as f64) as usize
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        dot(&self.c, &sh_basis(self.band, x))
    }

    /// `L²(σ)` norm.
    pub fn l2(&self) -> f64 {
        libm::sqrt(self.c.iter().map(|a| a * a).sum())
    }

    pub fn mean(&self) -> f64 {
        self.c[0]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All `Y_{n,m}(x)` for `n ≤ band`, orthonormal for `σ`.
pub fn sh_basis(band: usize, x: [f64; 3]) -> Vec<f64> {
    let r = libm::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    let t = x[2] / r;
    let s = libm::sqrt((1.0 - t * t).max(0.0));
    let phi = libm::atan2(x[1], x[0]);
    let l = band + 1;
    let mut p = alloc::vec![0.0; l * l];
    let at = |n: usize, m: usize| n * l + m;
    p[at(0, 0)] = 1.0;
    for m in 1..=band {
        let mf = m as f64;
        let mut v = s * libm::sqrt((2.0 * mf + 1.0) / (2.0 * mf)) * p[at(m - 1, m - 1)];
        if m == 1 {
            v *= core::f64::consts::SQRT_2;
        }
        p[at(m, m)] = v;
    }
    for m in 0..band {
        p[at(m + 1, m)] = libm::sqrt(2.0 * m as f64 + 3.0) * t * p[at(m, m)];
    }
    for m in 0..=band {
        for n in m + 2..=band {
            let (nf, mf) = (n as f64, m as f64);
            let a = libm::sqrt((2.0 * nf - 1.0) * (2.0 * nf + 1.0) / ((nf - mf) * (nf + mf)));
            let b = libm::sqrt(
                (2.0 * nf + 1.0) * (nf + mf - 1.0) * (nf - mf - 1.0) / ((nf - mf) * (nf + mf) * (2.0 * nf - 3.0)),
            );
            p[at(n, m)] = a * t * p[at(n - 1, m)] - b * p[at(n - 2, m)];
        }
    }
    let mut out = alloc::vec![0.0; l * l];
    for n in 0..=band {
        for m in 0..=n {
            let base = n * n + n;
            if m == 0 {
                out[base] = p[at(n, 0)];
            } else {
                let mf = m as f64;
                out[base + m] = p[at(n, m)] * libm::cos(mf * phi);
                out[base - m] = p[at(n, m)] * libm::sin(mf * phi);
            }
        }
    }
    out
}

/// Product grid exact for harmonics of degree `≤ 2·band`; weights sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub band: usize,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(band: usize) -> Self {
        let (t, wt) = gauss_legendre(band + 1);
        let na = 2 * band + 2;
        let mut nodes = Vec::with_capacity(t.len() * na);
        let mut weights = Vec::with_capacity(t.len() * na);
        for (ti, wi) in t.iter().zip(&wt) {
            let s = libm::sqrt(1.0 - ti * ti);
            for k in 0..na {
                let phi = 2.0 * PI * k as f64 / na as f64;
                nodes.push([s * libm::cos(phi), s * libm::sin(phi), *ti]);
                weights.push(wi / 2.0 / na as f64);
            }
        }
        SphereGrid { band, nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// `m` equally spaced points on the great circle `ν^⊥ ∩ S²`.
pub fn great_circle(nu: [f64; 3], m: usize) -> Vec<[f64; 3]> {
    let n = normalize(nu);
    let a = if libm::fabs(n[0]) < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalize(sub(a, scale(n, dot3(a, n))));
    let v = cross(n, u);
    (0..m)
        .map(|k| {
            let g = 2.0 * PI * k as f64 / m as f64;
            let (c, s) = (libm::cos(g), libm::sin(g));
            [c * u[0] + s * v[0], c * u[1] + s * v[1], c * u[2] + s * v[2]]
        })
        .collect()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    scale(a, 1.0 / libm::sqrt(dot3(a, a)))
}

/// Mean of `f` over `ν^⊥ ∩ S²` with `2(band + 1)` points (exact for degree ≤ band).
pub fn circle_mean(f: &ShCoeffs, nu: [f64; 3]) -> f64 {
    let pts = great_circle(nu, 2 * (f.band + 1));
    pts.iter().map(|x| f.eval(*x)).sum::<f64>() / pts.len() as f64
}

/// `T` on coefficients: degree-`n` block times `λ_n` (`d = 3`).
pub fn funk_apply(f: &ShCoeffs, spectrum: &FunkSpectrum) -> Result<ShCoeffs, Error> {
    if spectrum.d != 3 {
        return Err(Error::Numeric("coefficient-level Funk transform is implemented for d = 3".into()));
    }
    if f.band > spectrum.max_degree {
        return Err(Error::Numeric(alloc::format!(
            "band {} exceeds spectrum max degree {}",
            f.band,
            spectrum.max_degree
        )));
    }
    let mut out = f.clone();
    for (i, a) in out.c.iter_mut().enumerate() {
        *a *= spectrum.lambda[ShCoeffs::degree_of(i)];
    }
    Ok(out)
}

/// `Ω = (1 − T²)F` solved per degree; `Γ(ν, θ) = F(θ) − (TF)(ν)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceDecomposition {
    pub f: ShCoeffs,
    pub tf: ShCoeffs,
    /// Terms summed in the Neumann series `Σ T^{2l} Ω` and its max deviation from `f`.
    pub neumann_terms: usize,
    pub neumann_gap: f64,
}

impl SliceDecomposition {
    pub fn gamma(&self, nu: [f64; 3], theta: [f64; 3]) -> f64 {
        self.f.eval(theta) - self.tf.eval(nu)
    }
}

pub fn neumann_solve(omega: &ShCoeffs) -> Result<SliceDecomposition, Error> {
    if libm::fabs(omega.mean()) > 1e-12 {
        return Err(Error::Numeric(alloc::format!("Omega has mean {} (must vanish)", omega.mean())));
    }
    let spec = FunkSpectrum::new(3, omega.band);
    let mut f = omega.clone();
    f.c[0] = 0.0;
    for (i, a) in f.c.iter_mut().enumerate().skip(1) {
        let l = spec.lambda[ShCoeffs::degree_of(i)];
        *a /= 1.0 - l * l;
    }
    let mut sum = f.clone();
    sum.c.copy_from_slice(&omega.c);
    sum.c[0] = 0.0;
    let mut term = sum.clone();
    let mut terms = 1;
    loop {
        term = funk_apply(&funk_apply(&term, &spec)?, &spec)?;
        let inc = term.c.iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
        for (s, t) in sum.c.iter_mut().zip(&term.c) {
            *s += t;
        }
        terms += 1;
        if inc < 1e-14 || terms > 200 {
            break;
        }
    }
    let gap = sum.c.iter().zip(&f.c).fold(0.0f64, |m, (a, b)| m.max(libm::fabs(a - b)));
    if gap > 1e-12 {
        return Err(Error::Numeric(alloc::format!("Neumann series disagrees with division by {gap:e}")));
    }
    let tf = funk_apply(&f, &spec)?;
    Ok(SliceDecomposition { f, tf, neumann_terms: terms, neumann_gap: gap })
}

/// `|∫ fΩ dσ − ∫∫ f(θ) Γ(ν, θ) dσ_ν(θ) dσ(ν)|` for each test function.
pub fn verify_repr(dec: &SliceDecomposition, omega: &ShCoeffs, tests: &[ShCoeffs], grid: &SphereGrid) -> Vec<f64> {
    let m = 2 * (grid.band + 1);
    // coefficient vectors are prefixes of the largest band's basis
    let band = tests.iter().map(|f| f.band).chain([omega.band, dec.f.band]).max().unwrap_or(0);
    let eval = |c: &ShCoeffs, basis: &[f64]| dot(&c.c, &basis[..c.c.len()]);
    let mut lhs = alloc::vec![0.0; tests.len()];
    let mut rhs = alloc::vec![0.0; tests.len()];
    for (x, w) in grid.nodes.iter().zip(&grid.weights) {
        let bx = sh_basis(band, *x);
        let om = eval(omega, &bx);
        for (j, f) in tests.iter().enumerate() {
            lhs[j] += w * eval(f, &bx) * om;
        }
        let tf_nu = eval(&dec.tf, &bx);
        let mut inner = alloc::vec![0.0; tests.len()];
        for th in great_circle(*x, m) {
            let bt = sh_basis(band, th);
            let g = eval(&dec.f, &bt) - tf_nu;
            for (j, f) in tests.iter().enumerate() {
                inner[j] += eval(f, &bt) * g;
            }
        }
        for j in 0..tests.len() {
            rhs[j] += w * inner[j] / m as f64;
        }
    }
    lhs.iter().zip(&rhs).map(|(a, b)| libm::fabs(a - b)).collect()
}

/// `max_ν |∫ Γ(ν, ·) dσ_ν|` over the grid nodes, with `m`-point circles.
pub fn gamma_circle_means(dec: &SliceDecomposition, grid: &SphereGrid, m: usize) -> f64 {
    grid.nodes
        .iter()
        .map(|nu| {
            let pts = great_circle(*nu, m);
            let s: f64 = pts.iter().map(|th| dec.gamma(*nu, *th)).sum();
            libm::fabs(s / m as f64)
        })
        .fold(0.0, f64::max)
}

/// `(Σ_n |n(n+1)|^s ‖π_n f‖²)^{1/2}`; the degree-0 weight is 0.
pub fn sobolev_norm(f: &ShCoeffs, s: f64) -> f64 {
    let mut acc = 0.0;
    for (i, a) in f.c.iter().enumerate() {
        let n = ShCoeffs::degree_of(i) as f64;
        if n > 0.0 {
            acc += libm::pow(n * (n + 1.0), s) * a * a;
        }
    }
    libm::sqrt(acc)
}

/// Random mean-zero coefficients of degrees `1..=band` with standard normal entries.
pub fn random_mean_zero(s: &mut Stream, band: usize) -> ShCoeffs {
    let mut f = ShCoeffs::zero(band);
    for a in f.c.iter_mut().skip(1) {
        *a = s.normal();
    }
    f
}

/// Smooth bump supported in `[a, b]`, `0 < a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialProfile {
    pub a: f64,
    pub b: f64,
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        let u = (2.0 * r - self.a - self.b) / (self.b - self.a);
        if libm::fabs(u) >= 1.0 {
            0.0
        } else {
            libm::exp(1.0 - 1.0 / (1.0 - u * u))
        }
    }
}

/// `f(x) = Σ_j g_j(|x|) A_j(x/|x|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialTensor {
    pub terms: Vec<(RadialProfile, ShCoeffs)>,
}

impl RadialTensor {
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let r = libm::sqrt(dot3(x, x));
        self.terms.iter().map(|(g, a)| g.eval(r) * a.eval(x)).sum()
    }

    /// `Σ_k w_k f(r_k u)` along the ray through the unit vector `u`.
    fn ray_integral(&self, u: [f64; 3], radial: &[(f64, f64)]) -> f64 {
        let ang: Vec<f64> = self.terms.iter().map(|(_, a)| a.eval(u)).collect();
        radial
            .iter()
            .map(|(r, w)| w * self.terms.iter().zip(&ang).map(|((g, _), a)| g.eval(*r) * a).sum::<f64>())
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Superposition {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Composite Gauss–Legendre nodes/weights for `dr/r` over `[a, b]`.
fn radial_rule(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            let r = lo + (xi + 1.0) * h / 2.0;
            out.push((r, wi * h / 2.0 / r));
        }
    }
    out
}

/// Both sides of `∫ f K = ∫_{S²} ∫_{θ^⊥} f K_θ dμ_θ dσ(θ)` for `K = Ω*(x/|x|)|x|^{−3}`
/// and `K_θ = 2|x|^{−2} Γ(θ, x/|x|)` on the plane `θ^⊥`, in polar coordinates.
pub fn verify_superposition(
    omega_star: &ShCoeffs,
    f: &RadialTensor,
    grid: &SphereGrid,
) -> Result<Superposition, Error> {
    let (mut a, mut b) = (f64::INFINITY, 0.0f64);
    for (g, _) in &f.terms {
        if g.a <= 0.0 || g.b <= g.a {
            return Err(Error::Numeric("radial profile support must lie in (0, inf)".into()));
        }
        a = a.min(g.a);
        b = b.max(g.b);
    }
    if f.terms.is_empty() {
        return Ok(Superposition { lhs: 0.0, rhs: 0.0, residual: 0.0 });
    }
    let dec = neumann_solve(omega_star)?;
    let radial = radial_rule(a, b, 4, 16);
    let four_pi = 4.0 * PI;
    // ∫ f K dx = 4π ∫ dr/r ∫ f(rν) Ω*(ν) dσ(ν)
    let mut lhs = 0.0;
    for (x, w) in grid.nodes.iter().zip(&grid.weights) {
        let om = omega_star.eval(*x);
        lhs += w * om * f.ray_integral(*x, &radial);
    }
    lhs *= four_pi;
    // plane θ^⊥ in polar coordinates: dμ = r dr dφ, K_θ = 2 r^{−2} Γ
    let m = 2 * (grid.band + 1);
    let mut rhs = 0.0;
    for (th, w) in grid.nodes.iter().zip(&grid.weights) {
        let tf = dec.tf.eval(*th);
        let mut plane = 0.0;
        for g in great_circle(*th, m) {
            let gam = dec.f.eval(g) - tf;
            plane += gam * f.ray_integral(g, &radial);
        }
        rhs += w * 2.0 * (2.0 * PI / m as f64) * plane;
    }
    Ok(Superposition { lhs, rhs, residual: libm::fabs(lhs - rhs) })
}

/// Seeded slice-reconstruction run: `omegas` mean-zero `Ω` of degree `≤ band` drawn from
/// stream `(seed, 6)`, each checked against `tests` functions with a nonzero mean.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceCheck {
    pub repr_residual_max: f64,
    pub gamma_circle_mean_max: f64,
    pub neumann_terms_max: usize,
    pub neumann_gap_max: f64,
}

pub fn slice_check(band: usize, grid_band: usize, seed: u64, omegas: usize, tests: usize) -> Result<SliceCheck, Error> {
    let grid = SphereGrid::new(grid_band);
    let coarse = SphereGrid::new(band);
    let mut s = Stream::new(seed, 6);
    let mut out = SliceCheck { repr_residual_max: 0.0, gamma_circle_mean_max: 0.0, neumann_terms_max: 0, neumann_gap_max: 0.0 };
    for _ in 0..omegas {
        let om = random_mean_zero(&mut s, band);
        let fs: Vec<ShCoeffs> = (0..tests)
            .map(|_| {
                let mut f = random_mean_zero(&mut s, band);
                f.c[0] = s.normal();
                f
            })
            .collect();
        let dec = neumann_solve(&om)?;
        let worst = verify_repr(&dec, &om, &fs, &grid).into_iter().fold(0.0, f64::max);
        out.repr_residual_max = out.repr_residual_max.max(worst);
        out.gamma_circle_mean_max = out.gamma_circle_mean_max.max(gamma_circle_means(&dec, &coarse, 64));
        out.neumann_terms_max = out.neumann_terms_max.max(dec.neumann_terms);
        out.neumann_gap_max = out.neumann_gap_max.max(dec.neumann_gap);
    }
    Ok(out)
}

/// Seeded `(Ω*, f)`: `Ω*` mean zero of degree `≤ 6`; `f` two terms with bump profiles in
/// `[1/2, 2]` and angular parts of degree `≤ 4`, one with a nonzero mean.
pub fn superposition_pair(seed: u64, k: u64) -> (ShCoeffs, RadialTensor) {
    let mut s = Stream::new(seed, 700 + k);
    let om = random_mean_zero(&mut s, 6);
    let mut a = random_mean_zero(&mut s, 4);
    a.c[0] = s.normal();
    let lo = 0.5 + 0.25 * s.uniform();
    let hi = 2.0 - 0.25 * s.uniform();
    let f = RadialTensor {
        terms: alloc::vec![
            (RadialProfile { a: 0.5, b: 2.0 }, a),
            (RadialProfile { a: lo, b: hi }, random_mean_zero(&mut s, 4)),
        ],
    };
    (om, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gegenbauer_values() {
        assert_eq!(gegenbauer(0, 0.5, 0.3), 1.0);
        assert!(libm::fabs(gegenbauer(2, 0.5, 0.0) + 0.5) < 1e-15);
        assert!(libm::fabs(gegenbauer(2, 0.5, 1.0) - 1.0) < 1e-15);
    }

    #[test]
    fn funk_low_degrees() {
        assert_eq!(funk_eigenvalue(0, 3), 1.0);
        assert_eq!(funk_eigenvalue(3, 5), 0.0);
        assert!(libm::fabs(funk_eigenvalue(2, 3) + 0.5) < 1e-15);
    }

    #[test]
    fn harmonics_are_orthonormal_on_the_grid() {
        let band = 6;
        let grid = SphereGrid::new(band);
        let k = (band + 1) * (band + 1);
        let basis: Vec<Vec<f64>> = grid.nodes.iter().map(|x| sh_basis(band, *x)).collect();
        for i in 0..k {
            for j in 0..k {
                let g: f64 = basis.iter().zip(&grid.weights).map(|(b, w)| w * b[i] * b[j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(libm::fabs(g - want) < 1e-12, "({i},{j}) {g}");
            }
        }
    }

    #[test]
    fn y2_solution() {
        let y = ShCoeffs::harmonic(2, 2, 1);
        let dec = neumann_solve(&y).unwrap();
        assert!(libm::fabs(dec.f.c[7] - 4.0 / 3.0) < 1e-12);
        assert!(neumann_solve(&ShCoeffs::harmonic(2, 0, 0)).is_err());
    }
}
