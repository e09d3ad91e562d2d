use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use quasigeodesic::diskflow::{
    iterate_flow, sweep_out_fibers, FlowOutcome, FlowRun, DEFAULT_FLOW_TOLERANCE, DEFAULT_MAX_ITERATIONS,
};
use quasigeodesic::geometry::{parse_word, strips_svg, PLCurve, SurfacePoint};
use quasigeodesic::mesh::io::{load_path, mesh_hash, to_json as mesh_json, to_obj};
use quasigeodesic::mesh::{compute_shelling, generate, preprocess, IntrinsicMesh, MeshError, DEFAULT_TOLERANCE};
use quasigeodesic::pipeline::{curve_from_word, export, find, ExportError, ExportFormat, FindConfig, FindError};
use quasigeodesic::search::{search, SearchConfig};
use quasigeodesic::verify::{check_word, check_word_with_strips, Certificate, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "qg", version, about = "Closed quasigeodesics on polyhedral spheres")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Geometric tolerance.
    #[arg(long, global = true, env = "QG_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Do not print the run manifest to stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check mesh invariants.
    Validate { mesh: PathBuf },
    /// Report metric quantities, curvature and the shelling.
    Analyze { mesh: PathBuf },
    /// Verify a crossing word or a certificate file.
    Verify(VerifyArgs),
    /// Bounded search for closed quasigeodesics.
    Search(SearchArgs),
    /// Run the disk flow.
    Flow(FlowArgs),
    /// Flow sweep-out fibers, then search; prints the certificate.
    Find(FindArgs),
    /// Render a certificate.
    Export(ExportArgs),
    /// Write a named test mesh.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct VerifyArgs {
    mesh: PathBuf,
    #[arg(long, required_unless_present = "certificate", conflicts_with = "certificate")]
    word: Option<String>,
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    mesh: PathBuf,
    /// Bound on the total length (default: edge sum).
    #[arg(long)]
    max_length: Option<f64>,
    /// Bound on the word length (default: the word-length bound of the mesh).
    #[arg(long)]
    max_word: Option<usize>,
    #[arg(long)]
    max_solutions: Option<usize>,
    /// Node budget per start vertex.
    #[arg(long)]
    budget: Option<u64>,
    /// Stop at the first certificate.
    #[arg(long, conflicts_with = "emit_all")]
    first: bool,
    /// Emit every certificate found (default).
    #[arg(long)]
    emit_all: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Init {
    Sweepout,
    Word,
    File,
}

#[derive(Args, Serialize)]
struct FlowArgs {
    mesh: PathBuf,
    #[arg(long, value_enum, default_value_t = Init::Sweepout)]
    init: Init,
    /// Word for `--init word`.
    #[arg(long, required_if_eq("init", "word"))]
    word: Option<String>,
    /// Curve JSON for `--init file`.
    #[arg(long, required_if_eq("init", "file"))]
    curve: Option<PathBuf>,
    /// Fibers per face for `--init sweepout`.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_FLOW_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iter: usize,
    /// Per-iteration length trace (CSV).
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct FindArgs {
    mesh: PathBuf,
    #[arg(long, default_value_t = 3)]
    samples: usize,
    /// Node budget per start vertex of the search.
    #[arg(long)]
    budget: Option<u64>,
    /// Keep the shortest flowed certificate without searching below it.
    #[arg(long)]
    no_refine: bool,
    /// SVG of the unfolded strips.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Svg,
    ObjPolyline,
    Json,
}

#[derive(Args, Serialize)]
struct ExportArgs {
    #[arg(long)]
    certificate: PathBuf,
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MeshFormat {
    Obj,
    Json,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    /// tetrahedron, doubled-triangle, cube, octahedron, icosahedron or random.
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex count for `random`.
    #[arg(long, default_value_t = 8)]
    vertices: usize,
    /// Output format (default: OBJ when the mesh has 3D positions).
    #[arg(long, value_enum)]
    format: Option<MeshFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

const OK: u8 = 0;
const INVALID: u8 = 1;
const BUDGET: u8 = 2;
const INTERNAL: u8 = 3;

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure { code: INVALID, message: message.to_string() }
    }
}

impl From<MeshError> for Failure {
    fn from(e: MeshError) -> Self {
        let code = match e {
            MeshError::Internal(_) | MeshError::ShellingNotFound => INTERNAL,
            _ => INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

/// What a command leaves for the manifest.
struct Done {
    code: u8,
    mesh_hash: Option<String>,
    outcome: Value,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    schema_version: u32,
    command: &'a str,
    config: Value,
    mesh_hash: Option<String>,
    version: &'a str,
    wall_time_s: f64,
    exit_code: u8,
    outcome: Value,
}

fn load(path: &Path, eps: f64) -> Result<IntrinsicMesh, Failure> {
    Ok(preprocess(load_path(path, eps)?)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::invalid(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

/// Variant name of a mesh error, e.g. `GluingLengthMismatch`.
fn error_kind(e: &MeshError) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn mesh_report(mesh: &IntrinsicMesh) -> Value {
    let g = mesh.global_quantities();
    let vertices: Vec<Value> = (0..mesh.num_vertices())
        .map(|v| {
            let d = mesh.vertex_data(v);
            json!({
                "id": v,
                "cone_angle": d.cone_angle,
                "curvature": d.curvature,
                "is_convex": d.is_convex,
                "degree": d.degree,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "mesh_hash": mesh_hash(mesh),
        "valid": true,
        "subdivisions": mesh.subdivisions(),
        "vertices": mesh.num_vertices(),
        "edges": mesh.num_edges(),
        "faces": mesh.num_faces(),
        "edge_sum": g.edge_sum,
        "min_altitude": g.min_altitude,
        "max_degree": g.max_degree,
        "eta": g.eta,
        "total_curvature": mesh.total_curvature(),
        "curvature": vertices,
    })
}

fn cmd_validate(path: &Path, eps: f64) -> Result<Done, Failure> {
    let loaded = load_path(path, eps).and_then(preprocess);
    match loaded {
        Ok(mesh) => {
            emit(&pretty(&mesh_report(&mesh)), None)?;
            Ok(Done { code: OK, mesh_hash: Some(mesh_hash(&mesh)), outcome: json!("valid") })
        }
        Err(e) => {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "valid": false,
                "error": error_kind(&e),
                "message": e.to_string(),
            });
            emit(&pretty(&report), None)?;
            let f = Failure::from(e);
            Ok(Done { code: f.code, mesh_hash: None, outcome: json!({ "invalid": f.message }) })
        }
    }
}

fn cmd_analyze(path: &Path, eps: f64) -> Result<Done, Failure> {
    let mesh = load(path, eps)?;
    let mut report = mesh_report(&mesh);
    let shelling = compute_shelling(&mesh)?;
    let stars: Vec<Value> = (0..mesh.num_vertices()).map(|v| json!(mesh.vertex_data(v).star_faces)).collect();
    report["total_area"] = json!(mesh.total_area());
    report["gauss_bonnet_error"] = json!(mesh.total_curvature() - 4.0 * std::f64::consts::PI);
    report["star_faces"] = json!(stars);
    report["shelling"] = json!(shelling.order);
    emit(&pretty(&report), None)?;
    Ok(Done { code: OK, mesh_hash: Some(mesh_hash(&mesh)), outcome: json!("analyzed") })
}

fn cmd_verify(a: &VerifyArgs, eps: f64) -> Result<Done, Failure> {
    let mesh = load(&a.mesh, eps)?;
    let hash = mesh_hash(&mesh);
    let (word, claimed) = match (&a.word, &a.certificate) {
        (Some(w), _) => (parse_word(&mesh, w).map_err(Failure::invalid)?, None),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?;
            let cert: Certificate = serde_json::from_str(&text).map_err(Failure::invalid)?;
            if cert.mesh_hash != hash {
                return Err(Failure::invalid(ExportError::HashMismatch { expected: cert.mesh_hash, found: hash }));
            }
            (cert.word.clone(), Some(cert))
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    match check_word(&mesh, &word) {
        Ok(cert) => {
            if let Some(c) = &claimed {
                if (c.total_length - cert.total_length).abs() > eps * (1.0 + cert.total_length) {
                    return Err(Failure::invalid(format!(
                        "certificate claims length {} but the word realizes {}",
                        c.total_length, cert.total_length
                    )));
                }
            }
            emit(&cert.to_json(), None)?;
            Ok(Done { code: OK, mesh_hash: Some(hash), outcome: json!({ "accept": true, "length": cert.total_length }) })
        }
        Err(r) => {
            let report = json!({ "schema_version": SCHEMA_VERSION, "mesh_hash": hash, "accept": false, "rejection": r });
            emit(&pretty(&report), None)?;
            Ok(Done { code: INVALID, mesh_hash: Some(hash), outcome: json!({ "accept": false, "reason": r.to_string() }) })
        }
    }
}

fn cmd_search(a: &SearchArgs, eps: f64) -> Result<Done, Failure> {
    let mesh = load(&a.mesh, eps)?;
    let mut config = SearchConfig::for_mesh(&mesh);
    if let Some(l) = a.max_length {
        config.max_total_length = l;
        config.max_segment_length = l;
    }
    if let Some(w) = a.max_word {
        config.max_word_length = w;
    }
    if let Some(s) = a.max_solutions {
        config.max_solutions = s;
    }
    if let Some(b) = a.budget {
        config.budget = b;
    }
    config.first_only = a.first;
    let r = search(&mesh, &config);
    emit(&pretty(&r.certificates), a.out.as_deref())?;
    let code = if r.certificates.is_empty() && !r.complete { BUDGET } else { OK };
    Ok(Done {
        code,
        mesh_hash: Some(mesh_hash(&mesh)),
        outcome: json!({ "certificates": r.certificates.len(), "complete": r.complete, "nodes": r.nodes }),
    })
}

fn status(o: &FlowOutcome) -> &'static str {
    match o {
        FlowOutcome::Converged { .. } => "converged",
        FlowOutcome::Collapsed { .. } => "collapsed",
        FlowOutcome::Stalled { .. } => "stalled",
        FlowOutcome::MaxIterations { .. } => "max_iterations",
    }
}

fn cmd_flow(a: &FlowArgs, eps: f64) -> Result<Done, Failure> {
    use rayon::prelude::*;
    let mesh = load(&a.mesh, eps)?;
    let hash = mesh_hash(&mesh);
    let curves: Vec<PLCurve> = match a.init {
        Init::Sweepout => {
            let shelling = compute_shelling(&mesh)?;
            sweep_out_fibers(&mesh, &shelling, a.samples).into_iter().map(|f| f.curve).collect()
        }
        Init::Word => {
            let w = parse_word(&mesh, a.word.as_deref().unwrap_or_default()).map_err(Failure::invalid)?;
            vec![curve_from_word(&mesh, &w).ok_or_else(|| Failure::invalid("the word names no closed curve"))?]
        }
        Init::File => {
            let p = a.curve.as_deref().expect("clap requires --curve");
            let text = fs::read_to_string(p).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?;
            let c: PLCurve = serde_json::from_str(&text).map_err(Failure::invalid)?;
            let ids_ok = c.points.iter().all(|p| match *p {
                SurfacePoint::Vertex { vertex } => vertex < mesh.num_vertices(),
                SurfacePoint::Edge { edge, .. } => edge < mesh.num_edges(),
                SurfacePoint::Face { face, .. } => face < mesh.num_faces(),
            });
            if !c.closed || !ids_ok || !c.is_consistent(&mesh) {
                return Err(Failure::invalid("the curve file is not a closed curve on this mesh"));
            }
            vec![c]
        }
    };
    let runs: Vec<FlowRun> = curves.par_iter().map(|c| iterate_flow(&mesh, c, a.tol, a.max_iter)).collect();
    if let Some(t) = &a.trace {
        let mut csv = String::from("run,iteration,length\n");
        for (k, r) in runs.iter().enumerate() {
            for (i, l) in r.lengths.iter().enumerate() {
                csv.push_str(&format!("{k},{i},{l:.15e}\n"));
            }
        }
        fs::write(t, csv).map_err(|e| Failure::invalid(format!("{}: {e}", t.display())))?;
    }
    let mut tally = std::collections::BTreeMap::<&str, usize>::new();
    for r in &runs {
        *tally.entry(status(&r.outcome)).or_default() += 1;
    }
    let doc = json!({ "schema_version": SCHEMA_VERSION, "mesh_hash": hash, "runs": runs });
    emit(&pretty(&doc), a.out.as_deref())?;
    let code = if runs.iter().all(|r| matches!(r.outcome, FlowOutcome::MaxIterations { .. })) { BUDGET } else { OK };
    Ok(Done { code, mesh_hash: Some(hash), outcome: json!(tally) })
}

fn cmd_find(a: &FindArgs, eps: f64) -> Result<Done, Failure> {
    let mesh = load(&a.mesh, eps)?;
    let hash = mesh_hash(&mesh);
    let mut config = FindConfig::for_mesh(&mesh);
    config.samples = a.samples;
    config.refine = !a.no_refine;
    if let Some(b) = a.budget {
        config.search.budget = b;
        config.refine_budget = config.refine_budget.min(b);
    }
    let report = match find(&mesh, &config) {
        Ok(r) => r,
        Err(FindError::Mesh(e)) => return Err(e.into()),
        Err(e @ FindError::BudgetExhausted { .. }) => {
            return Ok(Done { code: BUDGET, mesh_hash: Some(hash), outcome: json!({ "error": e.to_string() }) })
        }
        Err(e @ FindError::SearchExhausted) => return Err(Failure { code: INTERNAL, message: e.to_string() }),
    };
    if let Some(p) = &a.svg {
        let (_, strips) = check_word_with_strips(&mesh, &report.certificate.word)
            .map_err(|r| Failure { code: INTERNAL, message: format!("certificate failed to re-verify: {r}") })?;
        fs::write(p, strips_svg(&mesh, &strips)).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?;
    }
    emit(&report.certificate.to_json(), a.out.as_deref())?;
    Ok(Done {
        code: OK,
        mesh_hash: Some(hash),
        outcome: json!({
            "length": report.certificate.total_length,
            "word": report.certificate.word_text,
            "source": report.source,
            "fibers": report.fibers,
            "flow_certified": report.flow_certified,
            "search_complete": report.search_complete,
            "search_nodes": report.search_nodes,
        }),
    })
}

fn cmd_export(a: &ExportArgs, eps: f64) -> Result<Done, Failure> {
    let mesh = load(&a.mesh, eps)?;
    let text = fs::read_to_string(&a.certificate)
        .map_err(|e| Failure::invalid(format!("{}: {e}", a.certificate.display())))?;
    let cert: Certificate = serde_json::from_str(&text).map_err(Failure::invalid)?;
    let format = match a.format {
        Format::Svg => ExportFormat::Svg,
        Format::ObjPolyline => ExportFormat::ObjPolyline,
        Format::Json => ExportFormat::Json,
    };
    let out = export(&mesh, &cert, format).map_err(Failure::invalid)?;
    emit(out.trim_end(), a.out.as_deref())?;
    Ok(Done { code: OK, mesh_hash: Some(cert.mesh_hash), outcome: json!("exported") })
}

fn cmd_generate(a: &GenerateArgs) -> Result<Done, Failure> {
    let mesh = generate::by_name(&a.name, a.seed, a.vertices)
        .ok_or_else(|| Failure::invalid(format!("unknown mesh name {}", a.name)))??;
    let text = match a.format {
        Some(MeshFormat::Json) => mesh_json(&mesh),
        Some(MeshFormat::Obj) => to_obj(&mesh).ok_or_else(|| Failure::invalid("the mesh has no 3D embedding"))?,
        None => to_obj(&mesh).unwrap_or_else(|| mesh_json(&mesh)),
    };
    emit(text.trim_end(), a.out.as_deref())?;
    Ok(Done { code: OK, mesh_hash: Some(mesh_hash(&mesh)), outcome: json!("generated") })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { OK });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(INTERNAL);
        }
    }
    let eps = cli.tolerance;
    let start = Instant::now();
    let (name, config, result) = match &cli.command {
        Command::Validate { mesh } => ("validate", json!({ "mesh": mesh }), cmd_validate(mesh, eps)),
        Command::Analyze { mesh } => ("analyze", json!({ "mesh": mesh }), cmd_analyze(mesh, eps)),
        Command::Verify(a) => (
            "verify",
            json!({ "mesh": a.mesh, "word": a.word, "certificate": a.certificate }),
            cmd_verify(a, eps),
        ),
        Command::Search(a) => ("search", json!(a), cmd_search(a, eps)),
        Command::Flow(a) => ("flow", json!(a), cmd_flow(a, eps)),
        Command::Find(a) => ("find", json!(a), cmd_find(a, eps)),
        Command::Export(a) => ("export", json!(a), cmd_export(a, eps)),
        Command::Generate(a) => ("generate", json!(a), cmd_generate(a)),
    };
    let done = result.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message);
        Done { code: f.code, mesh_hash: None, outcome: json!({ "error": f.message }) }
    });
    if !cli.quiet {
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            command: name,
            config: json!({ "tolerance": eps, "threads": cli.threads, "args": config }),
            mesh_hash: done.mesh_hash,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s: start.elapsed().as_secs_f64(),
            exit_code: done.code,
            outcome: done.outcome,
        };
        eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes"));
    }
    ExitCode::from(done.code)
}
