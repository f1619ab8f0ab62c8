//! Command-line front end: loads pair definitions, runs the geometry checks,
//! and emits JSON/CSV reports with stable schemas and seeded randomness.
//!
//! Exit codes: 0 pass/complete, 1 check failed, 2 bad input, 3 degenerate
//! (every sampled point umbilic).

#![allow(clippy::needless_range_loop)]

mod pair;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use contactmetric::blair;
use contactmetric::contact;
use contactmetric::expr::Point;
use contactmetric::gallery;
use contactmetric::report::{fp3, fp3x3, tool_version, Fp};
use contactmetric::riemann::{christoffel, riemann_tensor, sectional_curvature};
use contactmetric::rng::SplitMix64;
use contactmetric::shape;

#[derive(Parser)]
#[command(
    name = "cmcheck",
    version,
    about = "Verification engine for contact metric structures on a chart"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compatibility audit of a (metric, contact form) pair at seeded points
    Check {
        #[command(flatten)]
        pair: PairArgs,
        /// Number of uniform sample points in the pair's domain
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Residuals of the extrinsic curvature identity at seeded points
    LemmaVerify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Pass threshold on the max entrywise residual
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Negativity audit of the counterexample family over a ball
    Verdict {
        /// Family parameters, e.g. -P A=1 -P B=2
        #[arg(short = 'P', value_parser = parse_kv)]
        param: Vec<(String, f64)>,
        #[arg(long, default_value_t = 0.25)]
        radius: f64,
        /// Grid nodes per axis (restricted to the ball)
        #[arg(long, default_value_t = 9)]
        grid: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan the pair's domain box for umbilic points of ξ
    ScanUmbilic {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Umbilic threshold on the principal curvature
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List the built-in gallery pairs
    Gallery,
    /// Dump Christoffel symbols, curvature, and coordinate-plane sectionals
    Curvature {
        #[command(flatten)]
        pair: PairArgs,
        /// Evaluation point as x,y,z
        #[arg(long, value_parser = parse_point)]
        at: Point,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Pair definition JSON file
    #[arg(long, conflicts_with = "gallery")]
    input: Option<PathBuf>,
    /// Built-in pair name (see `gallery`)
    #[arg(long)]
    gallery: Option<String>,
    /// Parameter overrides, e.g. -P A=1.5 (repeatable)
    #[arg(short = 'P', value_parser = parse_kv)]
    param: Vec<(String, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let value: f64 = v.parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    if k.is_empty() {
        return Err(format!("empty key in `{s}`"));
    }
    Ok((k.to_owned(), value))
}

fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z; got `{s}`"));
    }
    let mut c = [0.0; 3];
    for (slot, part) in c.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|e| format!("bad coordinate `{part}`: {e}"))?;
    }
    if !c.iter().all(|v: &f64| v.is_finite()) {
        return Err(format!("coordinates must be finite, got `{s}`"));
    }
    Ok(Point::from(c))
}

struct Failure {
    code: u8,
    message: String,
}

fn bad_input(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn check_failed(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn load(args: &PairArgs) -> Result<pair::LoadedPair, Failure> {
    match (&args.input, &args.gallery) {
        (Some(path), None) => pair::from_file(path, &args.param).map_err(bad_input),
        (None, Some(name)) => pair::from_gallery(name, &args.param).map_err(bad_input),
        (None, None) => Err(bad_input("one of --input or --gallery is required")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

#[derive(Serialize)]
struct Envelope<R: Serialize> {
    command: &'static str,
    tool_version: &'static str,
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<Fp>,
    parameters: BTreeMap<String, Fp>,
    report: R,
}

fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let done = out.write_all(text.as_bytes()).and_then(|_| out.flush());
    if let Err(e) = done {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error writing output: {e}");
        std::process::exit(2);
    }
}

fn emit<R: Serialize>(envelope: &Envelope<R>) {
    let mut text = serde_json::to_string_pretty(envelope).expect("report serializes");
    text.push('\n');
    write_stdout(&text);
}

fn param_map(params: &contactmetric::Params) -> BTreeMap<String, Fp> {
    params.iter().map(|(k, v)| (k.to_owned(), Fp(v))).collect()
}

fn sample_points(rng: &mut SplitMix64, domain: &shape::ScanBox, n: usize) -> Vec<Point> {
    (0..n).map(|_| rng.point_in_box(domain.min, domain.max)).collect()
}

fn cmd_check(args: PairArgs, points: usize, seed: u64) -> Result<u8, Failure> {
    let pair = load(&args)?;
    if points == 0 {
        return Err(bad_input("--points must be positive"));
    }
    let mut rng = SplitMix64::new(seed);
    let samples = sample_points(&mut rng, &pair.domain, points);
    let report =
        contact::compatibility_check(&pair.metric, &pair.alpha, &samples, &pair.params, &mut rng)
            .map_err(|e| check_failed(e.to_string()))?;
    let compatible = report.is_compatible;
    let failed = report.failed_predicates.clone();
    emit(&Envelope {
        command: "check",
        tool_version: tool_version(),
        name: pair.name,
        seed: Some(seed),
        points: Some(points),
        tol: None,
        parameters: param_map(&pair.params),
        report,
    });
    if compatible {
        Ok(0)
    } else {
        eprintln!("incompatible: failed predicates: {}", failed.join(", "));
        Ok(1)
    }
}

#[derive(Serialize)]
struct LemmaReport {
    evaluated: usize,
    skipped_umbilic: usize,
    max_residual: Fp,
    max_webster_cross_residual: Fp,
    pass: bool,
    points: Vec<blair::IdentityResidual>,
}

fn cmd_lemma_verify(
    args: PairArgs,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<u8, Failure> {
    let pair = load(&args)?;
    if points == 0 {
        return Err(bad_input("--points must be positive"));
    }
    let mut rng = SplitMix64::new(seed);
    let samples = sample_points(&mut rng, &pair.domain, points);
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for p in samples {
        let sd = shape::shape_data(&pair.metric, &pair.alpha, p, &pair.params)
            .map_err(|e| check_failed(format!("shape data at {p:?}: {e}")))?;
        if sd.is_umbilic {
            skipped += 1;
            continue;
        }
        let res = blair::curvature_identity_check(&pair.metric, &pair.alpha, p, &pair.params, tol)
            .map_err(|e| check_failed(format!("identity check at {p:?}: {e}")))?;
        records.push(res);
    }
    let max_residual = records.iter().map(|r| r.max_residual.0).fold(0.0, f64::max);
    let max_cross = records
        .iter()
        .map(|r| r.webster_cross_residual.0)
        .fold(0.0, f64::max);
    let evaluated = records.len();
    let pass = evaluated > 0 && max_residual < tol;
    let report = LemmaReport {
        evaluated,
        skipped_umbilic: skipped,
        max_residual: Fp(max_residual),
        max_webster_cross_residual: Fp(max_cross),
        pass,
        points: records,
    };
    emit(&Envelope {
        command: "lemma-verify",
        tool_version: tool_version(),
        name: pair.name,
        seed: Some(seed),
        points: Some(points),
        tol: Some(Fp(tol)),
        parameters: param_map(&pair.params),
        report,
    });
    if evaluated == 0 {
        eprintln!("degenerate: every sampled point is umbilic");
        return Ok(3);
    }
    if pass {
        Ok(0)
    } else {
        eprintln!("identity residual {max_residual:e} exceeds tolerance {tol:e}");
        Ok(1)
    }
}

fn cmd_verdict(
    param: Vec<(String, f64)>,
    radius: f64,
    grid: usize,
    seed: u64,
    format: Format,
) -> Result<u8, Failure> {
    let mut a = 1.0;
    let mut b = 2.0;
    for (k, v) in &param {
        match k.as_str() {
            "A" => a = *v,
            "B" => b = *v,
            other => return Err(bad_input(format!("unknown parameter `{other}` (want A, B)"))),
        }
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN radius must be rejected
    if !(radius > 0.0) || grid == 0 {
        return Err(bad_input("radius must be positive and grid nonzero"));
    }
    let cp = gallery::CounterexampleParams::new(a, b)
        .map_err(|e| bad_input(e.to_string()))?;
    let mut rng = SplitMix64::new(seed);
    let report = gallery::counterexample_verdict(&cp, radius, grid, &mut rng)
        .map_err(|e| check_failed(e.to_string()))?;
    match format {
        Format::Json => {
            let parameters =
                BTreeMap::from([("A".to_owned(), Fp(a)), ("B".to_owned(), Fp(b))]);
            emit(&Envelope {
                command: "verdict",
                tool_version: tool_version(),
                name: "counterexample".to_owned(),
                seed: Some(seed),
                points: None,
                tol: None,
                parameters,
                report,
            });
        }
        Format::Csv => {
            let mut text = String::from("x,y,z,min_sectional,max_sectional,residual\n");
            for rec in &report.points {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    rec.point[0],
                    rec.point[1],
                    rec.point[2],
                    rec.min_sectional,
                    rec.max_sectional,
                    rec.residual
                ));
            }
            write_stdout(&text);
        }
    }
    Ok(0)
}

fn cmd_scan_umbilic(
    args: PairArgs,
    grid: usize,
    tol: f64,
    format: Format,
) -> Result<u8, Failure> {
    let pair = load(&args)?;
    let scan =
        shape::umbilic_scan(&pair.metric, &pair.alpha, &pair.domain, grid, &pair.params, tol);
    match format {
        Format::Json => emit(&Envelope {
            command: "scan-umbilic",
            tool_version: tool_version(),
            name: pair.name,
            seed: None,
            points: Some(grid * grid * grid),
            tol: Some(Fp(tol)),
            parameters: param_map(&pair.params),
            report: scan,
        }),
        Format::Csv => {
            let mut text = String::from("x,y,z,lambda\n");
            for rec in &scan.records {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    rec.point[0], rec.point[1], rec.point[2], rec.lambda
                ));
            }
            write_stdout(&text);
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct GalleryListing {
    command: &'static str,
    tool_version: &'static str,
    entries: Vec<GalleryItem>,
}

#[derive(Serialize)]
struct GalleryItem {
    name: &'static str,
    description: &'static str,
    metric: [[&'static str; 3]; 3],
    alpha: [&'static str; 3],
    parameters: BTreeMap<String, Fp>,
    domain_min: [Fp; 3],
    domain_max: [Fp; 3],
}

fn cmd_gallery() -> Result<u8, Failure> {
    let entries = gallery::gallery_entries()
        .into_iter()
        .map(|e| GalleryItem {
            name: e.name,
            description: e.description,
            metric: e.metric,
            alpha: e.alpha,
            parameters: e.parameters.iter().map(|(k, v)| (k.to_string(), Fp(*v))).collect(),
            domain_min: fp3(e.domain.min),
            domain_max: fp3(e.domain.max),
        })
        .collect();
    let listing =
        GalleryListing { command: "gallery", tool_version: tool_version(), entries };
    let mut text = serde_json::to_string_pretty(&listing).expect("listing serializes");
    text.push('\n');
    write_stdout(&text);
    Ok(0)
}

#[derive(Serialize)]
struct CurvatureDump {
    point: [Fp; 3],
    g: [[Fp; 3]; 3],
    g_inv: [[Fp; 3]; 3],
    det: Fp,
    /// Γ^l_{ij} indexed [l][i][j]
    christoffel: [[[Fp; 3]; 3]; 3],
    /// ⟨R(∂i,∂j)∂k, ∂l⟩ indexed [i][j][k][l]
    riemann_lower: [[[[Fp; 3]; 3]; 3]; 3],
    sectional_xy: Fp,
    sectional_xz: Fp,
    sectional_yz: Fp,
}

fn cmd_curvature(args: PairArgs, at: Point) -> Result<u8, Failure> {
    let pair = load(&args)?;
    let mj = pair
        .metric
        .jet(at, &pair.params)
        .map_err(|e| check_failed(e.to_string()))?;
    let ch = christoffel(&mj);
    let rm = riemann_tensor(&mj);
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let sec = |i: usize, j: usize| -> Result<Fp, Failure> {
        sectional_curvature(&mj, &rm, axes[i], axes[j])
            .map(Fp)
            .map_err(|e| check_failed(e.to_string()))
    };
    let dump = CurvatureDump {
        point: fp3(at.coords()),
        g: fp3x3(mj.g),
        g_inv: fp3x3(mj.g_inv),
        det: Fp(mj.det),
        christoffel: ch.upper.map(fp3x3),
        riemann_lower: rm.low.map(|a| a.map(fp3x3)),
        sectional_xy: sec(0, 1)?,
        sectional_xz: sec(0, 2)?,
        sectional_yz: sec(1, 2)?,
    };
    emit(&Envelope {
        command: "curvature",
        tool_version: tool_version(),
        name: pair.name,
        seed: None,
        points: None,
        tol: None,
        parameters: param_map(&pair.params),
        report: dump,
    });
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Check { pair, points, seed } => cmd_check(pair, points, seed),
        Cmd::LemmaVerify { pair, points, seed, tol } => {
            cmd_lemma_verify(pair, points, seed, tol)
        }
        Cmd::Verdict { param, radius, grid, seed, format } => {
            cmd_verdict(param, radius, grid, seed, format)
        }
        Cmd::ScanUmbilic { pair, grid, tol, format } => {
            cmd_scan_umbilic(pair, grid, tol, format)
        }
        Cmd::Gallery => cmd_gallery(),
        Cmd::Curvature { pair, at } => cmd_curvature(pair, at),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
