//! Command-line surface: cone checks, gauge evaluation, retraction images,
//! property audits and sphere dumps over cones stored as JSON.
//!
//! Exit codes are stable across commands: 0 when every requested check
//! passes, 1 when a mathematical check fails, 2 on input or usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use conegauge::tolerances::{BISECTION_TOL, CHECK_TOL, EXTERIOR_GAUGE_MIN, FEASIBILITY_TOL};
use conegauge::{
    audit_retraction, eliminate_redundancy, fixture_suite, gauge_by_bisection, verify_equivalence,
    Cone, ConeJson, Error as LibError, FunctionalHandle, GaugeNorm, RetractionPair, Vector,
};

/// Version tag carried by every JSON report this binary emits.
const REPORT_SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "conegauge",
    version,
    about = "Gauges of proper convex cones, their retraction pairs, and numerical property checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a cone for pointedness, full dimension and properness.
    ConeCheck {
        #[command(flatten)]
        cone: ConeArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Evaluate the gauge, its symmetrization and kernel membership at
    /// points.
    Gauge {
        #[command(flatten)]
        cone: ConeArg,
        #[command(flatten)]
        apex: ApexArg,
        #[command(flatten)]
        points: PointsArg,
        /// Also run the bisection oracle and report the difference.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Apply the retraction pair Q and R to points.
    Retract {
        #[command(flatten)]
        cone: ConeArg,
        #[command(flatten)]
        apex: ApexArg,
        #[command(flatten)]
        points: PointsArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Audit every retraction law on seeded samples.
    Audit {
        #[command(flatten)]
        cone: ConeArg,
        #[command(flatten)]
        apex: ApexArg,
        #[command(flatten)]
        sampling: SamplingArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Verify the properness conditions for a gauge or a named functional.
    ProperCheck {
        /// Cone file (gauge mode): {"dim": n, "rep": "H"|"V", "rows": [...]}.
        #[arg(long)]
        cone: Option<PathBuf>,
        #[command(flatten)]
        apex: ApexArg,
        /// Check a built-in functional instead of a gauge: `euclidean`.
        #[arg(long, conflicts_with = "cone")]
        functional: Option<String>,
        /// Dimension for `--functional` (defaults to the apex dimension).
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        sampling: SamplingArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Sample the unit sphere of the gauge and write it as CSV.
    SphereDump {
        #[command(flatten)]
        cone: ConeArg,
        #[command(flatten)]
        apex: ApexArg,
        /// Number of sphere points.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// RNG seed (must be positive; echoed into the header).
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// List the built-in reference cones, optionally exporting them.
    Fixtures {
        /// Write each fixture as `<name>.h.json` and `<name>.v.json` here.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Args)]
struct ConeArg {
    /// Cone file: {"dim": n, "rep": "H"|"V", "rows": [[...], ...]}.
    #[arg(long)]
    cone: PathBuf,
}

#[derive(Args)]
struct ApexArg {
    /// Apex u as comma-separated coordinates, e.g. "1,1".
    #[arg(long, allow_hyphen_values = true)]
    apex: String,
}

#[derive(Args)]
struct PointsArg {
    /// A point as comma-separated coordinates; repeatable.
    #[arg(long = "point", allow_hyphen_values = true)]
    points: Vec<String>,
    /// CSV file with one point per line ('#' lines skipped).
    #[arg(long)]
    points_file: Option<PathBuf>,
}

#[derive(Args)]
struct SamplingArg {
    /// Number of random samples (must be positive).
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// RNG seed (must be positive; echoed into the report).
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct OutputArg {
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TolArg {
    /// Override the absolute membership/residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Failure modes with their exit codes: input problems exit 2, failed
/// mathematical checks exit 1.
enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Check(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Check(m) => m,
        }
    }
}

fn classify(err: LibError) -> CliError {
    match err {
        LibError::DimensionMismatch { .. }
        | LibError::EmptyVector
        | LibError::NonFinite { .. }
        | LibError::ZeroRow { .. }
        | LibError::UnknownRep(_)
        | LibError::ProblemTooLarge { .. } => CliError::Input(err.to_string()),
        _ => CliError::Check(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::ConeCheck { cone, output } => cmd_cone_check(&cone.cone, &output),
        Command::Gauge {
            cone,
            apex,
            points,
            oracle,
            format,
            output,
            tol,
        } => cmd_gauge(&cone.cone, &apex, &points, oracle, format, &output, &tol),
        Command::Retract {
            cone,
            apex,
            points,
            format,
            output,
            tol,
        } => cmd_retract(&cone.cone, &apex, &points, format, &output, &tol),
        Command::Audit {
            cone,
            apex,
            sampling,
            output,
        } => cmd_audit(&cone.cone, &apex, &sampling, &output),
        Command::ProperCheck {
            cone,
            apex,
            functional,
            dim,
            sampling,
            output,
        } => cmd_proper_check(cone.as_deref(), &apex, functional, dim, &sampling, &output),
        Command::SphereDump {
            cone,
            apex,
            count,
            seed,
            output,
        } => cmd_sphere_dump(&cone.cone, &apex, count, seed, &output),
        Command::Fixtures { export, output } => cmd_fixtures(export.as_deref(), &output),
    }
}

// ---------------------------------------------------------------------------
// Input helpers
// ---------------------------------------------------------------------------

fn parse_vector(text: &str) -> Result<Vector, CliError> {
    let coords = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("bad coordinate {part:?}: {e}")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Vector::new(coords).map_err(classify)
}

fn load_cone(path: &Path) -> Result<Cone, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let json: ConeJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed cone file {}: {e}", path.display())))?;
    Cone::from_json(&json).map_err(classify)
}

fn collect_points(arg: &PointsArg, dim: usize) -> Result<Vec<Vector>, CliError> {
    let mut points = Vec::new();
    for text in &arg.points {
        points.push(parse_vector(text)?);
    }
    if let Some(path) = &arg.points_file {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            points.push(parse_vector(line)?);
        }
    }
    if points.is_empty() {
        return Err(CliError::Input(
            "no points given: use --point or --points-file".into(),
        ));
    }
    for p in &points {
        if p.dim() != dim {
            return Err(CliError::Input(format!(
                "point {p} has dimension {}, cone has {dim}",
                p.dim()
            )));
        }
    }
    Ok(points)
}

fn validate_sampling(samples: usize, seed: u64) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    if seed == 0 {
        return Err(CliError::Input("--seed must be positive".into()));
    }
    Ok(())
}

fn emit(output: &OutputArg, text: &str) -> Result<(), CliError> {
    match &output.output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}

fn build_gauge(cone: Cone, apex: &ApexArg) -> Result<GaugeNorm, CliError> {
    let u = parse_vector(&apex.apex)?;
    GaugeNorm::new(cone, u).map_err(|err| match &err {
        LibError::ApexNotInterior { margin, min } => CliError::Check(format!(
            "apex not interior: margin {margin:.3e} is below the minimum {min:.3e}"
        )),
        _ => classify(err),
    })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ConeCheckReport {
    schema: u32,
    command: &'static str,
    rep: String,
    dim: usize,
    pointed: bool,
    full_dimensional: bool,
    proper: bool,
    interior_point: Option<Vector>,
    irredundant_facets: Option<usize>,
}

fn cmd_cone_check(path: &Path, output: &OutputArg) -> Result<u8, CliError> {
    let cone = load_cone(path)?;
    let pointed = cone.is_pointed().map_err(classify)?;
    let interior = match cone.interior_point() {
        Ok(x) => Some(x),
        Err(LibError::NotFullDimensional) => None,
        Err(e) => return Err(classify(e)),
    };
    let irredundant_facets = match &cone {
        Cone::Halfspace(h) => Some(eliminate_redundancy(h).map_err(classify)?.normals().len()),
        Cone::Generator(_) => None,
    };
    let report = ConeCheckReport {
        schema: REPORT_SCHEMA,
        command: "cone-check",
        rep: cone.rep_label().to_string(),
        dim: cone.dim(),
        pointed,
        full_dimensional: interior.is_some(),
        proper: pointed && interior.is_some(),
        interior_point: interior,
        irredundant_facets,
    };
    let proper = report.proper;
    emit(output, &to_pretty_json(&report))?;
    Ok(if proper { 0 } else { 1 })
}

#[derive(Serialize)]
struct GaugePointReport {
    point: Vector,
    gauge: f64,
    symmetrized: f64,
    kernel_member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

#[derive(Serialize)]
struct OracleReport {
    bisection: f64,
    delta: f64,
}

#[derive(Serialize)]
struct GaugeReport {
    schema: u32,
    command: &'static str,
    apex: Vector,
    tol: f64,
    points: Vec<GaugePointReport>,
}

fn cmd_gauge(
    path: &Path,
    apex: &ApexArg,
    points_arg: &PointsArg,
    oracle: bool,
    format: Format,
    output: &OutputArg,
    tol_arg: &TolArg,
) -> Result<u8, CliError> {
    let cone = load_cone(path)?;
    let points = collect_points(points_arg, cone.dim())?;
    let gauge = build_gauge(cone, apex)?;
    let p = gauge.functional();
    let ps = p.symmetrize();
    let tol = tol_arg.tol.unwrap_or(FEASIBILITY_TOL);

    let mut rows = Vec::with_capacity(points.len());
    for x in points {
        let q = gauge.eval(&x).map_err(classify)?;
        let sym = ps.eval(&x).map_err(classify)?;
        let oracle_report = if oracle {
            let bisection = gauge_by_bisection(gauge.cone(), gauge.apex(), &x, BISECTION_TOL)
                .map_err(classify)?;
            Some(OracleReport {
                bisection,
                delta: q - bisection,
            })
        } else {
            None
        };
        rows.push(GaugePointReport {
            point: x,
            gauge: q,
            symmetrized: sym,
            kernel_member: q <= tol,
            oracle: oracle_report,
        });
    }

    let text = match format {
        Format::Json => to_pretty_json(&GaugeReport {
            schema: REPORT_SCHEMA,
            command: "gauge",
            apex: gauge.apex().clone(),
            tol,
            points: rows,
        }),
        Format::Csv => {
            let mut text = format!("# dim={} command=gauge\n", gauge.dim());
            for r in &rows {
                let coords: Vec<String> =
                    r.point.coords().iter().map(|c| c.to_string()).collect();
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    coords.join(","),
                    r.gauge,
                    r.symmetrized,
                    r.kernel_member
                ));
            }
            text
        }
    };
    emit(output, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct RetractPointReport {
    point: Vector,
    gauge: f64,
    q_image: Vector,
    r_image: Vector,
    /// 1-based index of a facet active at the Q image; absent for points
    /// inside the cone or generator-form cones.
    #[serde(skip_serializing_if = "Option::is_none")]
    active_facet: Option<usize>,
}

#[derive(Serialize)]
struct RetractReport {
    schema: u32,
    command: &'static str,
    apex: Vector,
    points: Vec<RetractPointReport>,
}

fn cmd_retract(
    path: &Path,
    apex: &ApexArg,
    points_arg: &PointsArg,
    format: Format,
    output: &OutputArg,
    tol_arg: &TolArg,
) -> Result<u8, CliError> {
    let cone = load_cone(path)?;
    let points = collect_points(points_arg, cone.dim())?;
    let pair = RetractionPair::new(build_gauge(cone, apex)?);
    let tol = tol_arg.tol.unwrap_or(CHECK_TOL);

    let facets = match pair.gauge().cone() {
        Cone::Halfspace(h) => Some(eliminate_redundancy(h).map_err(classify)?),
        Cone::Generator(_) => None,
    };

    let mut rows = Vec::with_capacity(points.len());
    for x in points {
        let q = pair.gauge().eval(&x).map_err(classify)?;
        let q_image = pair.apply_q(&x).map_err(classify)?;
        let r_image = pair.apply_r(&x).map_err(classify)?;
        let active_facet = facets.as_ref().and_then(|lean| {
            if q <= EXTERIOR_GAUGE_MIN {
                return None;
            }
            lean.normals()
                .iter()
                .position(|a| a.dot(&q_image).is_ok_and(|s| s.abs() <= tol))
                .map(|i| i + 1)
        });
        rows.push(RetractPointReport {
            point: x,
            gauge: q,
            q_image,
            r_image,
            active_facet,
        });
    }

    let text = match format {
        Format::Json => to_pretty_json(&RetractReport {
            schema: REPORT_SCHEMA,
            command: "retract",
            apex: pair.direction().clone(),
            points: rows,
        }),
        Format::Csv => {
            let mut text = format!("# dim={} command=retract\n", pair.dim());
            for r in &rows {
                let fmt = |v: &Vector| {
                    v.coords()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt(&r.point),
                    r.gauge,
                    fmt(&r.q_image),
                    fmt(&r.r_image)
                ));
            }
            text
        }
    };
    emit(output, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct AuditWrapper<'a> {
    schema: u32,
    command: &'static str,
    apex: Vector,
    report: &'a conegauge::RetractionAuditReport,
}

fn cmd_audit(
    path: &Path,
    apex: &ApexArg,
    sampling: &SamplingArg,
    output: &OutputArg,
) -> Result<u8, CliError> {
    validate_sampling(sampling.samples, sampling.seed)?;
    let cone = load_cone(path)?;
    let pair = RetractionPair::new(build_gauge(cone, apex)?);
    let report = audit_retraction(&pair, sampling.samples, sampling.seed).map_err(classify)?;
    let all_pass = report.all_pass();
    emit(
        output,
        &to_pretty_json(&AuditWrapper {
            schema: REPORT_SCHEMA,
            command: "audit",
            apex: pair.direction().clone(),
            report: &report,
        }),
    )?;
    Ok(if all_pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct ProperWrapper<'a> {
    schema: u32,
    command: &'static str,
    functional: String,
    report: &'a conegauge::PropernessReport,
}

fn cmd_proper_check(
    cone_path: Option<&Path>,
    apex: &ApexArg,
    functional: Option<String>,
    dim: Option<usize>,
    sampling: &SamplingArg,
    output: &OutputArg,
) -> Result<u8, CliError> {
    validate_sampling(sampling.samples, sampling.seed)?;
    let u = parse_vector(&apex.apex)?;
    let handle = match (cone_path, functional) {
        (Some(path), None) => {
            let cone = load_cone(path)?;
            build_gauge(cone, apex)?.functional()
        }
        (None, Some(name)) => match name.as_str() {
            "euclidean" => FunctionalHandle::euclidean(dim.unwrap_or(u.dim())),
            other => {
                return Err(CliError::Input(format!(
                    "unknown functional {other:?}: expected \"euclidean\""
                )))
            }
        },
        _ => {
            return Err(CliError::Input(
                "give exactly one of --cone or --functional".into(),
            ))
        }
    };
    let report =
        verify_equivalence(&handle, &u, sampling.samples, sampling.seed).map_err(classify)?;
    let ok = report.all_pass() && report.equivalence_consistent;
    emit(
        output,
        &to_pretty_json(&ProperWrapper {
            schema: REPORT_SCHEMA,
            command: "proper-check",
            functional: handle.name().to_string(),
            report: &report,
        }),
    )?;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_sphere_dump(
    path: &Path,
    apex: &ApexArg,
    count: usize,
    seed: u64,
    output: &OutputArg,
) -> Result<u8, CliError> {
    validate_sampling(count, seed)?;
    let cone = load_cone(path)?;
    let gauge = build_gauge(cone, apex)?;
    let points = gauge.sphere_sample(count, seed).map_err(classify)?;
    let mut text = format!("# dim={} seed={}\n", gauge.dim(), seed);
    for x in &points {
        let coords: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
        text.push_str(&coords.join(","));
        text.push('\n');
    }
    emit(output, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct FixtureInfo {
    name: String,
    dim: usize,
    facets: usize,
    generators: usize,
    apex: Vector,
    closed_form: Option<String>,
}

#[derive(Serialize)]
struct FixturesReport {
    schema: u32,
    command: &'static str,
    fixtures: Vec<FixtureInfo>,
}

fn cmd_fixtures(export: Option<&Path>, output: &OutputArg) -> Result<u8, CliError> {
    let fixtures = fixture_suite().map_err(classify)?;
    let mut infos = Vec::with_capacity(fixtures.len());
    for f in &fixtures {
        if let Some(dir) = export {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
            let h = Cone::Halfspace(f.cone_h.clone()).to_json();
            let v = Cone::Generator(f.cone_v.clone()).to_json();
            fs::write(dir.join(format!("{}.h.json", f.name)), to_pretty_json(&h))
                .map_err(|e| CliError::Input(format!("cannot write fixture: {e}")))?;
            fs::write(dir.join(format!("{}.v.json", f.name)), to_pretty_json(&v))
                .map_err(|e| CliError::Input(format!("cannot write fixture: {e}")))?;
        }
        infos.push(FixtureInfo {
            name: f.name.to_string(),
            dim: f.dim(),
            facets: f.cone_h.normals().len(),
            generators: f.cone_v.generators().len(),
            apex: f.apex.clone(),
            closed_form: f.closed_form.map(|c| c.description.to_string()),
        });
    }
    emit(
        output,
        &to_pretty_json(&FixturesReport {
            schema: REPORT_SCHEMA,
            command: "fixtures",
            fixtures: infos,
        }),
    )?;
    Ok(0)
}
