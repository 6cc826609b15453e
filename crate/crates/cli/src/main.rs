//! `tri-implicit`: approximate implicitization of triangular Bézier patches
//! from the command line.
//!
//! Exit codes: 0 success, 1 other errors, 2 malformed input, 3 degenerate or
//! mismatched tetrahedron, 4 SVD non-convergence, 6 finished with warnings.

mod input;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tri_implicit::implicitize::{
    algebraic_error, build_d, build_m_elementwise, combine, solve_original, solve_weak, stack_d, sum_m, DMatrix,
    IntegralSource, MMatrix, Solution,
};
use tri_implicit::{BarycentricPatch, Error, ImplicitApprox, Method, QuadratureRule, Rational, Simplex};

use input::LoadedPatch;

/// `σ_min` at or below this is reported as an exact implicitization.
const EXACT_SIGMA: f64 = 1e-10;
/// The same for `λ_min = ∫ q(p(s))²`.
const EXACT_LAMBDA: f64 = 1e-20;

#[derive(Parser)]
#[command(name = "tri-implicit", version, about = "Approximate implicitization of triangular Bézier patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit an implicit polynomial of degree m to one or more patches.
    Implicitize(ImplicitizeArgs),
    /// Sample q(p(s)) over the domain lattice as CSV, optionally as a PPM image.
    Errormap(ErrormapArgs),
    /// Smallest singular value of D for m = 1..max-degree.
    Table(TableArgs),
    /// Weighted, sign-aligned sum of two approximations.
    Combine(CombineArgs),
    /// Value, gradient and distance estimate of an approximation at points.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct PatchInput {
    /// Patch JSON file (one patch or an array) or `fixture:NAME`; repeatable.
    #[arg(long = "patch", required = true)]
    patches: Vec<String>,
    /// `auto`, a JSON file, or inline JSON with four vertices.
    #[arg(long, default_value = "auto")]
    tetrahedron: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Original,
    WeakExact,
    WeakNumeric,
}

#[derive(Args)]
struct ImplicitizeArgs {
    #[command(flatten)]
    input: PatchInput,
    #[arg(long, value_enum, default_value = "original")]
    method: MethodArg,
    /// Implicit degree m.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    degree: u32,
    /// Exactness degree of the quadrature rule (weak-numeric); defaults to 2mn.
    #[arg(long)]
    quadrature_degree: Option<usize>,
    /// Build D or M in exact rational arithmetic before the solve.
    #[arg(long)]
    exact_arithmetic: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ErrormapArgs {
    /// Approximation JSON written by `implicitize`.
    #[arg(long)]
    approx: PathBuf,
    #[arg(long)]
    patch: String,
    /// If given, must agree with the approximation's tetrahedron.
    #[arg(long)]
    tetrahedron: Option<String>,
    /// Lattice resolution r; the map has (r+1)(r+2)/2 rows.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(2..))]
    grid: u32,
    /// CSV destination (stdout if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    ppm: Option<PathBuf>,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(2..))]
    ppm_size: u32,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    input: PatchInput,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: u32,
    #[arg(long)]
    exact_arithmetic: bool,
    /// Also write the table as JSON.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CombineArgs {
    /// Exactly two approximation files.
    #[arg(long = "approx", num_args = 1, required = true)]
    approx: Vec<PathBuf>,
    /// `w1,w2`.
    #[arg(long, default_value = "1,1", value_parser = parse_weights)]
    weights: [f64; 2],
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    approx: PathBuf,
    /// Cartesian point `x,y,z`; repeatable.
    #[arg(long = "point", required = true, value_parser = parse_point)]
    points: Vec<[f64; 3]>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_floats<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| e.to_string())?;
    values.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_weights(s: &str) -> std::result::Result<[f64; 2], String> {
    parse_floats(s)
}

fn parse_point(s: &str) -> std::result::Result<[f64; 3], String> {
    parse_floats(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Implicitize(a) => implicitize(a),
        Command::Errormap(a) => errormap(a),
        Command::Table(a) => table(a),
        Command::Combine(a) => combine_cmd(a),
        Command::Evaluate(a) => evaluate(a),
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(6),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::DegenerateSimplex(_) | Error::SimplexMismatch => 3,
                Error::NoConvergence(..) => 4,
                _ => 1,
            };
        }
    }
    1
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn echo_setup(patches: &[LoadedPatch], tet: &Simplex) -> Result<()> {
    eprintln!("tetrahedron:");
    for v in tet.vertices() {
        eprintln!("  {v:?}");
    }
    for p in patches {
        eprintln!("patch {}: degree {}", p.label, p.patch.degree());
        if p.patch.is_rational() {
            let (lo, hi) = p.patch.denominator_range()?;
            eprintln!("  rational; denominator h in [{lo}, {hi}] on the sampled domain (error measures scale by h^m)");
        }
    }
    Ok(())
}

fn float_patches(patches: &[LoadedPatch], tet: &Simplex) -> Result<Vec<BarycentricPatch>> {
    patches.iter().map(|p| Ok(p.patch.to_barycentric_patch(tet)?)).collect()
}

fn exact_patches(patches: &[LoadedPatch], tet: &Simplex) -> Result<Vec<BarycentricPatch<Rational>>> {
    patches.iter().map(|p| Ok(p.patch.to_barycentric_patch(tet)?)).collect()
}

fn stacked_d(patches: &[LoadedPatch], tet: &Simplex, m: usize, exact: bool) -> Result<DMatrix> {
    let blocks: Vec<DMatrix> = if exact {
        exact_patches(patches, tet)?.iter().map(|bp| Ok(build_d(bp, m)?.to_f64())).collect::<Result<_>>()?
    } else {
        float_patches(patches, tet)?.iter().map(|bp| Ok(build_d(bp, m)?)).collect::<Result<_>>()?
    };
    Ok(stack_d(&blocks)?)
}

fn implicitize(args: ImplicitizeArgs) -> Result<usize> {
    let patches = input::load_all(&args.input.patches)?;
    let tet = input::resolve_tetrahedron(&args.input.tetrahedron, &patches)?;
    echo_setup(&patches, &tet)?;
    let m = args.degree as usize;
    let mut warnings = 0;
    let solution: Solution = match args.method {
        MethodArg::Original => {
            if args.quadrature_degree.is_some() {
                eprintln!("note: --quadrature-degree only applies to weak-numeric");
            }
            let sol = solve_original(&stacked_d(&patches, &tet, m, args.exact_arithmetic)?)?;
            eprintln!("singular values of D: {}", format_list(&sol.spectrum));
            sol
        }
        MethodArg::WeakExact => {
            let parts: Vec<MMatrix> = if args.exact_arithmetic {
                exact_patches(&patches, &tet)?
                    .iter()
                    .map(|bp| Ok(build_m_elementwise(bp, m, IntegralSource::Exact)?.matrix.to_f64()))
                    .collect::<Result<_>>()?
            } else {
                float_patches(&patches, &tet)?
                    .iter()
                    .map(|bp| Ok(build_m_elementwise(bp, m, IntegralSource::Exact)?.matrix))
                    .collect::<Result<_>>()?
            };
            let sol = solve_weak(&sum_m(&parts)?, Method::WeakExact)?;
            eprintln!("eigenvalues of M: {}", format_list(&sol.spectrum));
            sol
        }
        MethodArg::WeakNumeric => {
            if args.exact_arithmetic {
                bail!(Error::InvalidArgument("--exact-arithmetic does not apply to weak-numeric".into()));
            }
            let max_n = patches.iter().map(|p| p.patch.degree()).max().unwrap_or(1);
            let rule = QuadratureRule::build(args.quadrature_degree.unwrap_or(2 * m * max_n))?;
            eprintln!("quadrature: {} nodes, exact to degree {}", rule.len(), rule.exactness());
            let mut parts = Vec::new();
            for bp in float_patches(&patches, &tet)? {
                let built = build_m_elementwise(&bp, m, IntegralSource::Quadrature(&rule))?;
                for w in &built.warnings {
                    eprintln!("warning: {w}");
                }
                warnings += built.warnings.len();
                parts.push(built.matrix);
            }
            let sol = solve_weak(&sum_m(&parts)?, Method::WeakNumeric)?;
            eprintln!("eigenvalues of M: {}", format_list(&sol.spectrum));
            sol
        }
    };
    if solution.multiplicity() > 1 {
        warnings += 1;
        eprintln!(
            "warning: the minimum has multiplicity {}; any unit vector in the tied space is an equally good answer",
            solution.multiplicity()
        );
    }
    let sigma = solution.approx.sigma();
    let threshold = if matches!(args.method, MethodArg::Original) { EXACT_SIGMA } else { EXACT_LAMBDA };
    if sigma < -threshold {
        warnings += 1;
        eprintln!("warning: M has a negative eigenvalue; it is not a Gram matrix (quadrature too coarse?)");
    }
    let exact = warnings == 0 && sigma.abs() <= threshold;
    eprintln!("sigma = {sigma:.6e}{}", if exact { "  exact (to rounding)" } else { "" });
    write_or_print(args.output.as_deref(), &to_json(&solution.approx)?)?;
    Ok(warnings)
}

fn format_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.6e}")).collect::<Vec<_>>().join(" ")
}

fn errormap(args: ErrormapArgs) -> Result<usize> {
    let approx = input::load_approx(&args.approx)?;
    let loaded = input::load_patches(&args.patch)?;
    let [patch] = loaded.as_slice() else {
        bail!(Error::InvalidArgument(format!("{} holds {} patches; errormap takes one", args.patch, loaded.len())));
    };
    if let Some(spec) = &args.tetrahedron {
        let tet = input::resolve_tetrahedron(spec, &loaded)?;
        if !tet.approx_eq(approx.tetrahedron(), 1e-12) {
            bail!(Error::SimplexMismatch);
        }
    }
    let bp: BarycentricPatch = patch.patch.to_barycentric_patch(approx.tetrahedron())?;
    let field = algebraic_error(&approx, &bp, args.grid as usize)?;
    eprintln!("max |q(p(s))| on the lattice: {:.6e}", field.max_abs);
    eprintln!("integral of q(p(s))^2: {:.6e}", field.integral_sq);
    write_or_print(args.output.as_deref(), &render::csv(&field))?;
    if let Some(path) = &args.ppm {
        fs::write(path, render::ppm(&approx, &bp, args.ppm_size as usize)?)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct TableRow {
    m: usize,
    sigma_min: f64,
}

fn table(args: TableArgs) -> Result<usize> {
    let patches = input::load_all(&args.input.patches)?;
    let tet = input::resolve_tetrahedron(&args.input.tetrahedron, &patches)?;
    echo_setup(&patches, &tet)?;
    let mut rows = Vec::new();
    println!("m  sigma_min");
    for m in 1..=args.max_degree as usize {
        let sol = solve_original(&stacked_d(&patches, &tet, m, args.exact_arithmetic)?)?;
        let sigma_min = sol.approx.sigma();
        println!("{m}  {sigma_min:.6e}");
        rows.push(TableRow { m, sigma_min });
    }
    if let Some(path) = &args.output {
        fs::write(path, to_json(&rows)?)?;
    }
    Ok(0)
}

fn combine_cmd(args: CombineArgs) -> Result<usize> {
    let [a, b] = args.approx.as_slice() else {
        bail!(Error::InvalidArgument(format!("combine takes two approximations, got {}", args.approx.len())));
    };
    let (a, b) = (input::load_approx(a)?, input::load_approx(b)?);
    let combined = combine(&a, &b, args.weights)?;
    write_or_print(args.output.as_deref(), &to_json(&combined)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct PointValue {
    point: [f64; 3],
    value: f64,
    gradient: Option<[f64; 3]>,
    distance_estimate: Option<f64>,
}

fn evaluate(args: EvaluateArgs) -> Result<usize> {
    let approx: ImplicitApprox = input::load_approx(&args.approx)?;
    let mut out = Vec::new();
    for point in args.points {
        let value = approx.evaluate(&point)?;
        let gradient = match approx.gradient(&point) {
            Ok(g) => Some(g),
            Err(Error::SingularPoint) => None,
            Err(e) => return Err(e.into()),
        };
        let distance_estimate = gradient.map(|g| value.abs() / g.iter().map(|c| c * c).sum::<f64>().sqrt());
        out.push(PointValue { point, value, gradient, distance_estimate });
    }
    write_or_print(args.output.as_deref(), &to_json(&out)?)?;
    Ok(0)
}
