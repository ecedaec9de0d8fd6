mod io;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sblq_core::classify::classify;
use sblq_core::decompose::{decompose, DecomposeConfig, DecomposeOutcome};
use sblq_core::fixtures::{fixture, random_equivalence, FIXTURE_NAMES};
use sblq_core::linalg::{ratio, to_f64, Poly, Rational};
use sblq_core::module::{module_to_datum, validate_datum};
use sblq_core::numcheck::{
    self, calibrate, check_equivalence_invariance, delta_limit_check, describe_kernel, extend_kernel, verify_mikhlin,
    KernelSpec, MikhlinGrid, QuadSpec,
};
use sblq_core::rng::Stream;
use sblq_core::rotations::{self, FunkSpectrum, Tolerances};
use sblq_core::tables::{build, Family, FamilyTag, GENERAL_FAMILIES, HOLDER_FAMILIES, SPORADIC_FAMILIES, NON_HOLDER_SERIES};
use sblq_core::Datum;

use report::{Obj, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "sblq", version, about = "Exact classification and numerical checks for trilinear singular Brascamp–Lieb forms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Search {
    /// Seed for certificate search and random test data.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random trials per certificate search.
    #[arg(long, default_value_t = 32)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    report: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check shapes and surjectivity of a datum file (`-` for stdin).
    Validate {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        report: Format,
    },
    /// Decompose and report the boundedness status.
    Classify {
        file: String,
        #[command(flatten)]
        search: Search,
        /// Embed the change-of-basis certificates.
        #[arg(long)]
        certificates: bool,
    },
    /// Decompose into indecomposable summands.
    Decompose {
        file: String,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        certificates: bool,
        /// Add isolating intervals for the real roots of N-type polynomials.
        #[arg(long)]
        refine_real: bool,
    },
    /// Funk transform spectrum and slice decompositions on S².
    Rotations {
        #[command(subcommand)]
        cmd: RotCmd,
    },
    /// Floating-point checks of forms and kernels.
    Numcheck {
        #[command(subcommand)]
        cmd: NumCmd,
    },
    /// Print a datum: a fixture name or a table family (`N`, `J2`, `TypeI`, `P1`, ...).
    Fixtures {
        name: String,
        /// Parameter of `bht`, root of the N / 0 polynomial `(t - alpha)^n`.
        #[arg(long, default_value = "1/3")]
        alpha: String,
        /// Size parameter.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum RotCmd {
    /// Funk eigenvalues from the Gegenbauer ratio and from the Gamma closed form.
    Eigen {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 40)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Seeded slice reconstruction and superposition checks (d = 3).
    Verify {
        #[arg(long, default_value_t = 8)]
        band: usize,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        report: Format,
    },
}

#[derive(Args, Clone)]
struct NumOpts {
    /// `tensor:N` or `mc:SAMPLES:SEED`; default tensor for dim_H <= 4, else Monte Carlo.
    #[arg(long)]
    quad: Option<String>,
    /// Seed for test functions and equivalences.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    report: Format,
}

#[derive(Subcommand)]
enum NumCmd {
    /// Evaluate the form with the default test functions.
    Eval {
        file: String,
        #[command(flatten)]
        opts: NumOpts,
        /// `gaussian:W`, `odd:S:R` or `bump:R0:R1`.
        #[arg(long, default_value = "gaussian:1/2")]
        kernel: String,
    },
    /// Compare the form before and after 3 seeded equivalences.
    Equiv {
        file: String,
        #[command(flatten)]
        opts: NumOpts,
        #[arg(long, default_value = "gaussian:1/2")]
        kernel: String,
    },
    /// Narrow-Gaussian kernels against the delta limit.
    Delta {
        file: String,
        #[command(flatten)]
        opts: NumOpts,
    },
    /// Calibrate and verify the Mikhlin condition for |alpha| <= 2.
    Mikhlin {
        /// Optional datum; fixes the dimension of `gaussian` and `bump` kernels.
        file: Option<String>,
        #[arg(long, default_value = "odd:1/4:4")]
        kernel: String,
        /// Extend the 1-dim kernel by this many variables.
        #[arg(long, default_value_t = 1)]
        extend: usize,
        /// Also verify the calibrated kernel multiplied by this factor (expected to fail).
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        report: Format,
    },
}

enum Failure {
    Invalid(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

#[derive(Clone, Copy)]
enum Exit {
    Ok = 0,
    Unclassified = 2,
    Tolerance = 3,
}

enum Output {
    Report { body: Obj, format: Format, exit: Exit, table: Option<String> },
    Raw(String),
}

fn envelope(argv: &[String], config: Value) -> Obj {
    Obj::new().put("schema_version", SCHEMA_VERSION).put("command", json!(argv)).put("config", config)
}

fn config(search: &Search) -> Value {
    Obj::new().put("seed", search.seed).put("trials", search.trials).put("arithmetic", "exact rational").done()
}

fn load(path: &str) -> Result<Datum, Failure> {
    let d = io::load_datum(path)?;
    let v = validate_datum(&d);
    if !v.is_valid() {
        let failures: Vec<String> =
            v.surjectivity_failures.iter().map(|(i, r)| format!("Pi{i} has rank {r}, not surjective")).collect();
        return Err(Failure::Invalid(format!("{path}: {}", failures.join("; "))));
    }
    for w in &v.warnings {
        eprintln!("warning: {w}");
    }
    Ok(d)
}

fn cmd_validate(argv: &[String], file: &str, format: Format) -> Result<Output, Failure> {
    let d = io::load_datum(file)?;
    let v = validate_datum(&d);
    let failures: Vec<Value> = v
        .surjectivity_failures
        .iter()
        .map(|(i, r)| Obj::new().put("index", *i).put("rank", *r).put("required", d.dims[*i]).done())
        .collect();
    let mut body = envelope(argv, json!({}));
    body.set(
        "validation",
        Obj::new()
            .put("valid", v.is_valid())
            .put("dim_H", d.dim_h)
            .put("dims", json!(d.dims))
            .put("surjectivity_failures", failures)
            .put("warnings", json!(v.warnings))
            .done(),
    );
    if !v.is_valid() {
        print!("{}", render(&body.done(), format));
        return Err(Failure::Invalid(format!("{file}: datum is not surjective")));
    }
    Ok(Output::Report { body, format, exit: Exit::Ok, table: None })
}

fn cmd_classify(argv: &[String], file: &str, search: &Search, certificates: bool) -> Result<Output, Failure> {
    let d = load(file)?;
    let cfg = DecomposeConfig { trials: search.trials, seed: search.seed };
    let v = classify(&d, &cfg)?;
    let mut body = envelope(argv, config(search));
    body.set("verdict", report::verdict_json(&v));
    if certificates {
        if let Some(dec) = &v.decomposition {
            body.set("certificates", report::certificates_json(dec));
        }
    }
    let exit = if v.unclassified() { Exit::Unclassified } else { Exit::Ok };
    let table = (search.report == Format::Text).then(|| {
        let mut s = format!("status: {}\n", v.status);
        for sm in &v.summands {
            s.push_str(&format!("summand: {} x{}\n", sm.tag.label(), sm.multiplicity));
        }
        for c in &v.cases {
            s.push_str(&format!("case {}: {}\n", c.case, c.exponents));
        }
        for w in v.witnesses.iter().chain(&v.diagnostics) {
            s.push_str(&format!("note: {w}\n"));
        }
        s
    });
    Ok(Output::Report { body, format: search.report, exit, table })
}

fn cmd_decompose(
    argv: &[String],
    file: &str,
    search: &Search,
    certificates: bool,
    refine_real: bool,
) -> Result<Output, Failure> {
    let d = load(file)?;
    let cfg = DecomposeConfig { trials: search.trials, seed: search.seed };
    let precision = ratio(1, 1 << 20);
    let mut conf = Obj::new().put("seed", search.seed).put("trials", search.trials);
    if refine_real {
        conf.set("root_interval_width", precision.to_string());
    }
    let mut body = envelope(argv, conf.done());
    let exit = match decompose(&d, &cfg) {
        DecomposeOutcome::Decomposed(dec) => {
            body.set("decomposition", report::decomposition_json(&dec));
            if refine_real {
                body.set("real_roots", report::real_roots_json(&dec, &precision));
            }
            if certificates {
                body.set("certificates", report::certificates_json(&dec));
            }
            Exit::Ok
        }
        DecomposeOutcome::Unclassified(reasons) => {
            body.set("unclassified", json!(reasons));
            Exit::Unclassified
        }
    };
    Ok(Output::Report { body, format: search.report, exit, table: None })
}

fn cmd_eigen(argv: &[String], d: usize, max_degree: usize, format: Format) -> Result<Output, Failure> {
    if d < 3 {
        return Err(Failure::Invalid("--dim must be at least 3".into()));
    }
    let tol = Tolerances::default();
    let spec = FunkSpectrum::new(d, max_degree);
    let mut pass = true;
    let mut rows = Vec::new();
    let mut table = format!("{:>4} {:>24} {:>24} {:>10}\n", "n", "gegenbauer ratio", "gamma formula", "diff");
    for (n, l) in spec.lambda.iter().enumerate() {
        let g = if n % 2 == 1 { 0.0 } else { rotations::funk_eigenvalue_gamma(n, d) };
        let diff = (l - g).abs();
        pass &= diff <= tol.spectral;
        table.push_str(&format!("{n:>4} {l:>24.16e} {g:>24.16e} {diff:>10.2e}\n"));
        rows.push(Obj::new().put("n", n).put("lambda", *l).put("lambda_gamma", g).put("diff", diff).done());
    }
    let mut payload = Obj::new().put("rows", rows);
    if max_degree >= 2 {
        let dev = (spec.lambda[2].abs() - 1.0 / (d as f64 - 1.0)).abs();
        pass &= dev <= 1e-12;
        payload.set("lambda2_deviation", dev);
    }
    if max_degree >= 20 {
        let slope = rotations::decay_exponent_fit(d, max_degree / 2, max_degree);
        payload.set("decay_fit", Obj::new().put("slope", slope).put("expected", (2.0 - d as f64) / 2.0).done());
        table.push_str(&format!("decay slope over n in [{}, {max_degree}]: {slope:.4} (expected {:.1})\n", max_degree / 2, (2.0 - d as f64) / 2.0));
    }
    payload.set("pass", pass);
    let mut body = envelope(argv, Obj::new().put("d", d).put("max_degree", max_degree).put("tolerance", tol.spectral).done());
    body.set("spectrum", payload.done());
    let exit = if pass { Exit::Ok } else { Exit::Tolerance };
    Ok(Output::Report { body, format, exit, table: Some(table) })
}

fn cmd_rot_verify(argv: &[String], band: usize, grid: usize, seed: u64, format: Format) -> Result<Output, Failure> {
    let tol = Tolerances::default();
    let sc = rotations::slice_check(band, grid, seed, 5, 5)?;
    let slice_pass = sc.repr_residual_max < tol.quadrature && sc.gamma_circle_mean_max < tol.spectral;
    let g = rotations::SphereGrid::new(16);
    let mut pairs = Vec::new();
    let mut sup_pass = true;
    for k in 0..3 {
        let (om, f) = rotations::superposition_pair(seed, k);
        let s = rotations::verify_superposition(&om, &f, &g)?;
        sup_pass &= s.residual < tol.superposition;
        pairs.push(Obj::new().put("lhs", s.lhs).put("rhs", s.rhs).put("residual", s.residual).done());
    }
    let mut body = envelope(
        argv,
        Obj::new()
            .put("seed", seed)
            .put("band", band)
            .put("grid_band", grid)
            .put("omegas", 5)
            .put("tests_per_omega", 5)
            .put("circle_points", 64)
            .put("superposition_grid_band", 16)
            .put(
                "tolerances",
                Obj::new()
                    .put("repr", tol.quadrature)
                    .put("circle_mean", tol.spectral)
                    .put("superposition", tol.superposition)
                    .done(),
            )
            .done(),
    );
    body.set(
        "slice",
        Obj::new()
            .put("repr_residual_max", sc.repr_residual_max)
            .put("gamma_circle_mean_max", sc.gamma_circle_mean_max)
            .put("neumann_terms_max", sc.neumann_terms_max)
            .put("neumann_gap_max", sc.neumann_gap_max)
            .put("pass", slice_pass)
            .done(),
    );
    body.set("superposition", Obj::new().put("pairs", pairs).put("pass", sup_pass).done());
    let exit = if slice_pass && sup_pass { Exit::Ok } else { Exit::Tolerance };
    Ok(Output::Report { body, format, exit, table: None })
}

fn rational_f64(s: &str, what: &str) -> Result<f64, Failure> {
    Ok(to_f64(&io::parse_rational(s, what)?))
}

/// `gaussian:W`, `odd:S:R`, `bump:R0:R1`; `dim` is the kernel dimension where it is free.
fn parse_kernel(s: &str, dim: usize) -> Result<KernelSpec, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let k = match parts.as_slice() {
        ["gaussian", w] => KernelSpec::narrow_gaussian(dim, rational_f64(w, "--kernel width")?),
        ["odd", a, b] => KernelSpec::truncated_odd(rational_f64(a, "--kernel inner")?, rational_f64(b, "--kernel outer")?),
        ["bump", a, b] => KernelSpec::bump(dim, rational_f64(a, "--kernel r0")?, rational_f64(b, "--kernel r1")?),
        _ => return Err(Failure::Invalid(format!("--kernel: expected gaussian:W, odd:S:R or bump:R0:R1, found {s:?}"))),
    };
    match &k.kind {
        numcheck::KernelKind::TruncatedHomogeneousOdd { inner, outer } if !(0.0 < *inner && inner < outer) => {
            Err(Failure::Invalid("--kernel: odd needs 0 < S < R".into()))
        }
        numcheck::KernelKind::SmoothMultiplierBump { r0, r1 } if !(0.0 < *r0 && r0 < r1) => {
            Err(Failure::Invalid("--kernel: bump needs 0 < R0 < R1".into()))
        }
        numcheck::KernelKind::NarrowGaussian { width } if *width <= 0.0 => {
            Err(Failure::Invalid("--kernel: gaussian width must be positive".into()))
        }
        _ => Ok(k),
    }
}

fn parse_quad(q: &Option<String>, dim_h: usize, seed: u64) -> Result<QuadSpec, Failure> {
    let Some(q) = q else {
        return Ok(match dim_h {
            0..=3 => QuadSpec::Tensor(32),
            4 => QuadSpec::Tensor(16),
            _ => QuadSpec::MonteCarlo { samples: 1 << 16, seed },
        });
    };
    let bad = || Failure::Invalid(format!("--quad: expected tensor:N or mc:SAMPLES:SEED, found {q:?}"));
    let parts: Vec<&str> = q.split(':').collect();
    match parts.as_slice() {
        ["tensor", n] => {
            let n: usize = n.parse().map_err(|_| bad())?;
            if n < 2 {
                return Err(bad());
            }
            Ok(QuadSpec::Tensor(n))
        }
        ["mc", s, seed] => {
            let samples: usize = s.parse().map_err(|_| bad())?;
            if samples == 0 {
                return Err(bad());
            }
            Ok(QuadSpec::MonteCarlo { samples, seed: seed.parse().map_err(|_| bad())? })
        }
        _ => Err(bad()),
    }
}

fn quad_json(q: QuadSpec) -> Value {
    match q {
        QuadSpec::Tensor(n) => Obj::new().put("mode", "tensor-gauss-hermite").put("points_per_axis", n).done(),
        QuadSpec::MonteCarlo { samples, seed } => {
            Obj::new().put("mode", "monte-carlo").put("samples", samples).put("seed", seed).done()
        }
    }
}

fn form_with_kernel(d: &Datum, seed: u64, kernel: &str) -> Result<numcheck::FormSpec, Failure> {
    let mut spec = numcheck::default_form(d, seed);
    spec.kernel = parse_kernel(kernel, d.dims[0])?;
    if spec.kernel.dim != d.dims[0] {
        return Err(Failure::Invalid(format!(
            "kernel dimension {} does not match h0 = {}",
            spec.kernel.dim, d.dims[0]
        )));
    }
    Ok(spec)
}

fn num_config(opts: &NumOpts, q: QuadSpec, kernel: Option<&KernelSpec>) -> Obj {
    let mut c = Obj::new()
        .put("seed", opts.seed)
        .put("test_functions", "unit-width Gaussians, centres k/4 with |k| <= 2 from the seed")
        .put("quadrature", quad_json(q));
    if let Some(k) = kernel {
        c.set("kernel", describe_kernel(k));
    }
    c
}

fn cmd_num_eval(argv: &[String], file: &str, opts: &NumOpts, kernel: &str) -> Result<Output, Failure> {
    let d = load(file)?;
    let spec = form_with_kernel(&d, opts.seed, kernel)?;
    let q = parse_quad(&opts.quad, d.dim_h, opts.seed)?;
    let e = numcheck::eval_form(&spec, q)?;
    let mut body = envelope(argv, num_config(opts, q, Some(&spec.kernel)).done());
    body.set("estimate", report::estimate_json(&e));
    Ok(Output::Report { body, format: opts.report, exit: Exit::Ok, table: None })
}

fn cmd_num_equiv(argv: &[String], file: &str, opts: &NumOpts, kernel: &str) -> Result<Output, Failure> {
    let d = load(file)?;
    let spec = form_with_kernel(&d, opts.seed, kernel)?;
    let q = parse_quad(&opts.quad, d.dim_h, opts.seed)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for k in 0..3 {
        let e = random_equivalence(&mut Stream::new(opts.seed, 100 + k), &d);
        let r = check_equivalence_invariance(&spec, &e, q)?;
        pass &= r.pass;
        rows.push(
            Obj::new()
                .put("equivalence_stream", 100 + k)
                .put("original", report::estimate_json(&r.original))
                .put("transformed", report::estimate_json(&r.transformed))
                .put("jacobian", r.jacobian)
                .put("residual", r.residual)
                .put("tolerance", r.tolerance)
                .put("pass", r.pass)
                .done(),
        );
    }
    let mut conf = num_config(opts, q, Some(&spec.kernel));
    conf.set("tolerance_rule", "3 x (error + error' / |det phi|)");
    let mut body = envelope(argv, conf.done());
    body.set("equivalences", rows);
    body.set("pass", pass);
    Ok(Output::Report { body, format: opts.report, exit: if pass { Exit::Ok } else { Exit::Tolerance }, table: None })
}

fn cmd_num_delta(argv: &[String], file: &str, opts: &NumOpts) -> Result<Output, Failure> {
    let d = load(file)?;
    let q = parse_quad(&opts.quad, d.dim_h, opts.seed)?;
    let fs = numcheck::default_functions(&d, opts.seed);
    let r = delta_limit_check(&d, &fs, q)?;
    let mut conf = num_config(opts, q, None);
    conf.set("widths", json!(r.widths));
    let mut body = envelope(argv, conf.done());
    body.set(
        "delta",
        Obj::new()
            .put("values", r.values.iter().map(report::estimate_json).collect::<Vec<_>>())
            .put("limit", report::estimate_json(&r.limit))
            .put("constant", r.constant)
            .put("residuals", json!(r.residuals))
            .put("decreasing", r.decreasing)
            .done(),
    );
    let exit = if r.decreasing { Exit::Ok } else { Exit::Tolerance };
    Ok(Output::Report { body, format: opts.report, exit, table: None })
}

fn cmd_mikhlin(
    argv: &[String],
    file: Option<&str>,
    kernel: &str,
    extend: usize,
    scale: Option<f64>,
    format: Format,
) -> Result<Output, Failure> {
    let dim = match file {
        Some(f) => load(f)?.dims[0],
        None => 1,
    };
    let mut k = parse_kernel(kernel, dim)?;
    if extend > 0 {
        k = extend_kernel(&k, extend)?;
    }
    let (cal, coarse) = calibrate(&k, 2)?;
    let fine = verify_mikhlin(&cal, 2, &MikhlinGrid::fine())?;
    let grid = MikhlinGrid::fine();
    let mut body = envelope(
        argv,
        Obj::new()
            .put("kernel", describe_kernel(&k))
            .put("max_order", 2)
            .put(
                "grid",
                Obj::new()
                    .put("r_min", grid.r_min)
                    .put("r_max", grid.r_max)
                    .put("per_decade", grid.per_decade)
                    .put("directions", grid.directions)
                    .done(),
            )
            .put("calibration_margin", 0.97)
            .put("derivative_step", "|xi|/20")
            .done(),
    );
    body.set(
        "calibration",
        Obj::new()
            .put("normalization", cal.normalization)
            .put("unnormalized_estimate", report::mikhlin_json(&coarse))
            .done(),
    );
    body.set("fine", report::mikhlin_json(&fine));
    if let Some(c) = scale {
        let r = verify_mikhlin(&cal.scaled(c), 2, &MikhlinGrid::fine())?;
        body.set("scaled", Obj::new().put("factor", c).put("report", report::mikhlin_json(&r)).done());
    }
    let exit = if fine.pass { Exit::Ok } else { Exit::Tolerance };
    Ok(Output::Report { body, format, exit, table: None })
}

fn parse_family(name: &str) -> Option<Family> {
    let norm = |s: &str| s.to_ascii_lowercase().replace(['(', ')', '_'], "");
    let want = norm(name);
    GENERAL_FAMILIES.iter().chain(&HOLDER_FAMILIES).chain(&SPORADIC_FAMILIES).chain(&NON_HOLDER_SERIES).copied().find(|f| {
        norm(f.name()) == want || norm(&format!("{f:?}")) == want || norm(&format!("{f:?}")).replace("star", "*") == want
    })
}

fn cmd_fixtures(name: &str, alpha: &str, n: usize) -> Result<Output, Failure> {
    let a: Rational = io::parse_rational(alpha, "--alpha")?;
    let d = if FIXTURE_NAMES.contains(&name) {
        fixture(name, &a, n)?
    } else if let Some(f) = parse_family(name) {
        let tag = if f.needs_poly() {
            FamilyTag::regular(f, Poly::linear_root(&a).pow(n))
        } else if f.has_size() {
            FamilyTag::new(f, n)
        } else {
            FamilyTag::fixed(f)
        };
        module_to_datum(&build(&tag)?)
    } else {
        return Err(Failure::Invalid(format!(
            "unknown fixture {name:?}; fixtures: {}; or a table family such as N, J2, TypeI, P1",
            FIXTURE_NAMES.join(", ")
        )));
    };
    Ok(Output::Raw(io::to_text(&io::datum_json(&d))))
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => io::to_text(v),
        Format::Text => {
            let mut s = String::new();
            report::flatten("", v, &mut s);
            s
        }
    }
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Validate { file, report } => cmd_validate(argv, file, *report),
        Cmd::Classify { file, search, certificates } => cmd_classify(argv, file, search, *certificates),
        Cmd::Decompose { file, search, certificates, refine_real } => {
            cmd_decompose(argv, file, search, *certificates, *refine_real)
        }
        Cmd::Rotations { cmd: RotCmd::Eigen { dim, max_degree, report } } => cmd_eigen(argv, *dim, *max_degree, *report),
        Cmd::Rotations { cmd: RotCmd::Verify { band, grid, seed, report } } => {
            cmd_rot_verify(argv, *band, *grid, *seed, *report)
        }
        Cmd::Numcheck { cmd } => match cmd {
            NumCmd::Eval { file, opts, kernel } => cmd_num_eval(argv, file, opts, kernel),
            NumCmd::Equiv { file, opts, kernel } => cmd_num_equiv(argv, file, opts, kernel),
            NumCmd::Delta { file, opts } => cmd_num_delta(argv, file, opts),
            NumCmd::Mikhlin { file, kernel, extend, scale, report } => {
                cmd_mikhlin(argv, file.as_deref(), kernel, *extend, *scale, *report)
            }
        },
        Cmd::Fixtures { name, alpha, n } => cmd_fixtures(name, alpha, *n),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&cli, &argv) {
        Ok(Output::Raw(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report { mut body, format, exit, table }) => {
            body.set("timing", Obj::new().put("elapsed_ms", start.elapsed().as_secs_f64() * 1e3).done());
            match (format, table) {
                (Format::Text, Some(t)) => print!("{t}"),
                _ => print!("{}", render(&body.done(), format)),
            }
            ExitCode::from(exit as u8)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
