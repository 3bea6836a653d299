//! Command-line front end: construct, verify, search, report.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails (the report names the falsified statement and a witness),
//! 2 on usage or configuration errors.

use crate::adjembed::{
    arises_from_embedding, gram_diagnostics, quasi_singular_hyperplane, tensor_hyperplane,
    GeometricHyperplane, HyperplaneFile,
};
use crate::battery::{self, CriterionOutcome};
use crate::exactlinalg::Mat;
use crate::flaggeometry::FlagGeometry;
use crate::gf::{Fe, Field, FieldRc, QuadExt};
use crate::hyperplanelab::{complement_connected, is_geometric_hyperplane, is_maximal_hyperplane};
use crate::projspace::ProjSpace;
use crate::report::{Check, Report, Verdict};
use crate::spreads::{
    canonical_spread, dual_spread, is_standard, piecemeal_spread, search_spreads,
    spread_from_matrix, spread_hyperplane, standard_spread, LineSpread, SearchMode, SpreadFile,
    Standardness,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "flagpg",
    version,
    about = "Exact constructions and verification batteries for point-hyperplane flag geometries over GF(q)"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Projective dimension n of PG(n, q)
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    /// Field order q (a prime power); shorthand for --p/--k with the default modulus
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Field characteristic (overrides --q)
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Extension degree, used with --p
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Comma-separated little-endian modulus coefficients, used with --p/--k
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Refuse to build flag geometries bigger than this
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap_flags: usize,
    /// Node cap for spread search and class cap for standardness search
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap_search: u64,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled checks; recorded in every report
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Treat inconclusive standardness verdicts as acceptable
    #[arg(long, global = true)]
    allow_inconclusive: bool,
    /// Run-length encode hyperplane member lists
    #[arg(long, global = true)]
    rle: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the field, optionally applying one arithmetic operation
    Field {
        #[arg(long, value_enum)]
        op: Option<FieldOp>,
        #[arg(long)]
        lhs: Option<Fe>,
        #[arg(long)]
        rhs: Option<Fe>,
    },
    /// Counts and enumerations of PG(n, q)
    Pg {
        /// Also list the subspaces of this projective dimension
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Build the flag geometry and report its shape
    Flags,
    /// Construct a geometric hyperplane and emit it as JSON
    Hyperplane {
        #[command(subcommand)]
        source: HyperplaneSource,
    },
    /// Construct a line-spread and emit it as JSON
    Spread {
        #[command(subcommand)]
        source: SpreadSource,
    },
    /// Compute the dual of a spread
    Dual {
        #[command(subcommand)]
        source: SpreadSource,
    },
    /// The spread-type hyperplane of a spread
    SpreadHyperplane {
        #[command(subcommand)]
        source: SpreadSource,
    },
    /// Run one verification battery and report verdicts
    Verify {
        #[command(subcommand)]
        check: VerifyCmd,
    },
    /// Enumerate line-spreads by backtracking; emits one JSON line per spread
    SearchSpreads {
        #[arg(long, value_enum, default_value_t = SearchCliMode::Exhaustive)]
        mode: SearchCliMode,
        /// Stop after this many spreads (first-k mode)
        #[arg(long)]
        count: Option<usize>,
    },
    /// Run the full acceptance battery
    Suite,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchCliMode {
    Exhaustive,
    FirstK,
}

#[derive(Subcommand, Clone)]
enum HyperplaneSource {
    /// Tensor-type: all flags with xi * M * x = 0
    Tensor {
        /// Matrix expression: JSON grid, I, O, B, companion(a,b), diag(...)
        #[arg(long)]
        matrix: String,
    },
    /// Quasi-singular: the tensor hyperplane of a point (x) covector
    QuasiSingular {
        /// Point coordinates, comma-separated
        #[arg(long)]
        point: String,
        /// Hyperplane (covector) coordinates, comma-separated
        #[arg(long)]
        hyp: String,
    },
    /// Load a hyperplane file
    FromFile {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Clone)]
enum SpreadSource {
    /// Standard construction from extension-scalar tuples
    Standard {
        /// Comma-separated extension scalars (integer representations)
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Canonical spread of a generator of the quadratic extension
    Canonical {
        /// Generator (integer representation); defaults to the adjoined root
        #[arg(long)]
        omega: Option<Fe>,
    },
    /// Lines <x, Mx> of an eigenvalue-free matrix with the span condition
    Matrix {
        #[arg(long)]
        matrix: String,
    },
    /// Piecemeal construction from eigenvalue-free 2x2 blocks
    Piecemeal {
        /// Block list: matrix expressions separated by ';', or lambda(l1,l2,..)
        #[arg(long)]
        blocks: String,
    },
    /// Load a spread file
    FromFile {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Clone)]
enum VerifyCmd {
    /// Validate the hyperplane axiom on a constructed or loaded set
    Hyperplane {
        #[command(subcommand)]
        source: HyperplaneSource,
    },
    /// Maximality: adjoining any external flag generates everything
    Maximality {
        #[command(subcommand)]
        source: HyperplaneSource,
    },
    /// Connectivity of the hyperplane complement
    Connectivity {
        #[command(subcommand)]
        source: HyperplaneSource,
    },
    /// Tensor hyperplane = spread hyperplane exactly for eigenvalue-free
    /// matrices with the span condition
    #[command(name = "theorem-1-14")]
    Theorem114 {
        #[arg(long)]
        matrix: Option<String>,
        /// Sweep every matrix (q = 2) or the full qualifying set plus a
        /// seeded sample (q = 3)
        #[arg(long)]
        exhaustive: bool,
        /// Sample size for the q = 3 sweep
        #[arg(long, default_value_t = 2000)]
        samples: u64,
    },
    /// Right and left span conditions agree on every matrix
    #[command(name = "lemma-1-12")]
    Lemma112 {
        /// Matrix order to sweep (defaults to n + 1)
        #[arg(long)]
        size: Option<usize>,
    },
    /// Eigen-containment of singular subspaces in tensor hyperplanes
    #[command(name = "prop-1-3")]
    Prop13,
    /// Tensor hyperplanes coincide iff their matrices span the same plane
    /// with the identity
    #[command(name = "prop-2-1")]
    Prop21,
    /// Orthogonality of embedded flags = distance at most 2
    #[command(name = "cor-2-2")]
    Cor22,
    /// Every linear hyperplane of the null-trace space: preimage, maximality,
    /// connectivity, spanning
    #[command(name = "gen-1")]
    Gen1,
    /// Gram rank, block structure and isotropy laws of the trace form
    Gram,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli.opts, &cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            2
        }
    }
}

fn dispatch(opts: &GlobalOpts, cmd: &Command) -> Result<i32, String> {
    match cmd {
        Command::Field { op, lhs, rhs } => cmd_field(opts, *op, *lhs, *rhs),
        Command::Pg { dim } => cmd_pg(opts, *dim),
        Command::Flags => cmd_flags(opts),
        Command::Hyperplane { source } => cmd_hyperplane(opts, source),
        Command::Spread { source } => cmd_spread(opts, source),
        Command::Dual { source } => cmd_dual(opts, source),
        Command::SpreadHyperplane { source } => cmd_spread_hyperplane(opts, source),
        Command::Verify { check } => cmd_verify(opts, check),
        Command::SearchSpreads { mode, count } => cmd_search(opts, *mode, *count),
        Command::Suite => cmd_suite(opts),
    }
}

// ---- configuration helpers ----

fn resolve_field(opts: &GlobalOpts) -> Result<FieldRc, String> {
    let field = if let Some(p) = opts.p {
        let modulus = match &opts.modulus {
            None => None,
            Some(s) => Some(parse_csv(s)?),
        };
        Field::new(p, opts.k, modulus).map_err(|e| e.to_string())?
    } else {
        Field::of_order(opts.q.unwrap_or(2)).map_err(|e| {
            format!("--q must be a prime power ({})", e)
        })?
    };
    Ok(Arc::new(field))
}

fn build_space(opts: &GlobalOpts) -> Result<ProjSpace, String> {
    if opts.n < 2 {
        return Err("--n must be at least 2".into());
    }
    Ok(ProjSpace::new(resolve_field(opts)?, opts.n))
}

fn build_geometry(opts: &GlobalOpts) -> Result<FlagGeometry, String> {
    if opts.n < 2 {
        return Err("--n must be at least 2".into());
    }
    FlagGeometry::build(resolve_field(opts)?, opts.n, opts.cap_flags)
        .map_err(|e| e.to_string())
}

fn config_json(opts: &GlobalOpts, field: &Field) -> serde_json::Value {
    json!({
        "n": opts.n,
        "field": field.spec(),
        "seed": opts.seed,
        "cap_flags": opts.cap_flags,
        "cap_search": opts.cap_search,
    })
}

fn emit(opts: &GlobalOpts, text: &str) -> Result<(), String> {
    match &opts.out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {:?}: {}", path, e)),
    }
}

fn emit_report(opts: &GlobalOpts, report: &Report) -> Result<i32, String> {
    let text = match opts.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(opts, &text)?;
    if opts.out.is_some() {
        println!("{}", report.summary_lines());
    }
    Ok(report.exit_code(opts.allow_inconclusive))
}

// ---- parsers ----

fn parse_csv(s: &str) -> Result<Vec<Fe>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<Fe>().map_err(|e| format!("bad number {:?}: {}", t, e)))
        .collect()
}

/// Matrix expressions: a JSON grid, `I`, `O`, `B` (the companion of the
/// least rootless quadratic), `companion(a,b)`, or `diag(e1,e2,...)`.
/// `I` and `O` take the ambient order; inside `diag(...)` blocks must carry
/// their own size.
fn parse_matrix(field: &FieldRc, expr: &str, size: usize) -> Result<Mat, String> {
    let expr = expr.trim();
    let m = match expr {
        "I" => Mat::identity(size),
        "O" => Mat::zeros(size),
        _ => parse_matrix_block(field, expr)?,
    };
    if m.n != size {
        return Err(format!("matrix has order {}, expected {}", m.n, size));
    }
    Ok(m)
}

fn parse_matrix_block(field: &FieldRc, expr: &str) -> Result<Mat, String> {
    let expr = expr.trim();
    if expr == "I" || expr == "O" {
        return Err("I and O are size-ambiguous here; write the grid out".into());
    }
    if expr == "B" {
        let (a, b) = crate::gf::find_irreducible_quadratic(field);
        return Ok(Mat::companion2(field, a, b));
    }
    if let Some(inner) = expr.strip_prefix("companion(").and_then(|r| r.strip_suffix(')')) {
        let v = parse_csv(inner)?;
        if v.len() != 2 {
            return Err("companion(a,b) takes two coefficients".into());
        }
        field.check(v[0]).map_err(|e| e.to_string())?;
        field.check(v[1]).map_err(|e| e.to_string())?;
        return Ok(Mat::companion2(field, v[0], v[1]));
    }
    if let Some(inner) = expr.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let blocks: Vec<Mat> = split_top_level(inner, ',')
            .iter()
            .map(|p| parse_matrix_block(field, p))
            .collect::<Result<_, _>>()?;
        return Ok(Mat::block_diag(&blocks));
    }
    let grid: Vec<Vec<Fe>> =
        serde_json::from_str(expr).map_err(|e| format!("bad matrix literal {:?}: {}", expr, e))?;
    Mat::from_rows(field, &grid).map_err(|e| e.to_string())
}

/// Split on a separator at parenthesis depth zero.
fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

fn parse_blocks(field: &FieldRc, expr: &str) -> Result<Vec<Mat>, String> {
    let expr = expr.trim();
    if let Some(inner) = expr.strip_prefix("lambda(").and_then(|r| r.strip_suffix(')')) {
        let lambdas = parse_csv(inner)?;
        return lambdas
            .iter()
            .map(|&l| {
                field.check(l).map_err(|e| e.to_string())?;
                let mut b = Mat::zeros(2);
                b.set(0, 1, l);
                b.set(1, 0, 1);
                Ok(b)
            })
            .collect();
    }
    if expr.starts_with("[[[") {
        let grids: Vec<Vec<Vec<Fe>>> =
            serde_json::from_str(expr).map_err(|e| format!("bad block list: {}", e))?;
        return grids
            .iter()
            .map(|g| Mat::from_rows(field, g).map_err(|e| e.to_string()))
            .collect();
    }
    split_top_level(expr, ';')
        .iter()
        .map(|p| parse_matrix(field, p, 2))
        .collect()
}

// ---- construction commands ----

fn cmd_field(
    opts: &GlobalOpts,
    op: Option<FieldOp>,
    lhs: Option<Fe>,
    rhs: Option<Fe>,
) -> Result<i32, String> {
    let field = resolve_field(opts)?;
    let mut doc = json!({
        "field": field.spec(),
        "q": field.q(),
    });
    if let Some((a, b)) = field.adjoined_root_poly() {
        doc["adjoined_root_poly"] = json!([b, a, 1]);
    }
    if let Some(op) = op {
        let a = lhs.ok_or("--lhs required with --op")?;
        field.check(a).map_err(|e| e.to_string())?;
        let result = match op {
            FieldOp::Neg => field.neg(a),
            FieldOp::Inv => field.inv(a).map_err(|e| e.to_string())?,
            FieldOp::Add | FieldOp::Mul => {
                let b = rhs.ok_or("--rhs required for add/mul")?;
                field.check(b).map_err(|e| e.to_string())?;
                match op {
                    FieldOp::Add => field.add(a, b),
                    _ => field.mul(a, b),
                }
            }
        };
        doc["op"] = json!({
            "kind": match op { FieldOp::Add => "add", FieldOp::Mul => "mul",
                               FieldOp::Neg => "neg", FieldOp::Inv => "inv" },
            "lhs": a,
            "rhs": rhs,
            "result": result,
        });
    }
    emit(opts, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    Ok(0)
}

fn cmd_pg(opts: &GlobalOpts, dim: Option<usize>) -> Result<i32, String> {
    let pg = build_space(opts)?;
    let mut counts = serde_json::Map::new();
    for d in 0..=pg.n() {
        let c = pg.subspaces(d).map_err(|e| e.to_string())?.len();
        counts.insert(format!("dim_{}", d), json!(c));
    }
    let mut doc = json!({
        "n": pg.n(),
        "field": pg.field().spec(),
        "points": pg.point_count(),
        "hyperplanes": pg.hyp_count(),
        "subspace_counts": counts,
    });
    if let Some(d) = dim {
        let subs = pg.subspaces(d).map_err(|e| e.to_string())?;
        doc["subspaces"] = json!(subs.iter().map(|s| s.points.clone()).collect::<Vec<_>>());
    }
    emit(opts, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    Ok(0)
}

fn cmd_flags(opts: &GlobalOpts) -> Result<i32, String> {
    let g = build_geometry(opts)?;
    let pencils = g
        .lines()
        .iter()
        .filter(|l| matches!(l.kind, crate::flaggeometry::LineKind::Pencil { .. }))
        .count();
    let doc = json!({
        "n": g.pg().n(),
        "field": g.field().spec(),
        "flags": g.flag_count(),
        "lines": g.line_count(),
        "pencil_lines": pencils,
        "axial_lines": g.line_count() - pencils,
        "lines_per_flag": g.lines_of_flag(0).len(),
        "flags_per_line": g.q() + 1,
    });
    emit(opts, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    Ok(0)
}

fn construct_hyperplane(
    geom: &FlagGeometry,
    source: &HyperplaneSource,
) -> Result<GeometricHyperplane, String> {
    match source {
        HyperplaneSource::Tensor { matrix } => {
            let m = parse_matrix(geom.field(), matrix, geom.pg().n() + 1)?;
            tensor_hyperplane(geom, &m).map_err(|e| e.to_string())
        }
        HyperplaneSource::QuasiSingular { point, hyp } => {
            let pv = parse_csv(point)?;
            let hv = parse_csv(hyp)?;
            let p = geom
                .pg()
                .point_index(&pv)
                .ok_or("--point is not a point of this space")?;
            let h = geom
                .pg()
                .hyp_index(&hv)
                .ok_or("--hyp is not a hyperplane of this space")?;
            quasi_singular_hyperplane(geom, p, h).map_err(|e| e.to_string())
        }
        HyperplaneSource::FromFile { file } => {
            let text =
                std::fs::read_to_string(file).map_err(|e| format!("reading {:?}: {}", file, e))?;
            let hf: HyperplaneFile =
                serde_json::from_str(&text).map_err(|e| format!("parsing {:?}: {}", file, e))?;
            let (set, provenance) = hf
                .into_parts(geom.flag_count())
                .map_err(|e| e.to_string())?;
            // loaded sets are taken as raw data; callers validate
            Ok(GeometricHyperplane { set, provenance })
        }
    }
}

fn cmd_hyperplane(opts: &GlobalOpts, source: &HyperplaneSource) -> Result<i32, String> {
    let geom = build_geometry(opts)?;
    let h = construct_hyperplane(&geom, source)?;
    let check = is_geometric_hyperplane(&geom, &h.set);
    if !check.ok {
        return Err(format!(
            "the set is not a geometric hyperplane (violation: {:?})",
            check.violation
        ));
    }
    let file = HyperplaneFile::from_hyperplane(&h, opts.rle);
    emit(opts, &(serde_json::to_string_pretty(&file).unwrap() + "\n"))?;
    Ok(0)
}

fn construct_spread(pg: &ProjSpace, source: &SpreadSource) -> Result<LineSpread, String> {
    match source {
        SpreadSource::Standard { a, b } => {
            let ext = QuadExt::auto(pg.field().clone());
            let av = parse_csv(a)?;
            let bv = parse_csv(b)?;
            standard_spread(pg, &ext, &av, &bv).map_err(|e| e.to_string())
        }
        SpreadSource::Canonical { omega } => {
            let ext = QuadExt::auto(pg.field().clone());
            let w = omega.unwrap_or_else(|| ext.omega());
            canonical_spread(pg, &ext, w)
                .map(|(s, _)| s)
                .map_err(|e| e.to_string())
        }
        SpreadSource::Matrix { matrix } => {
            let m = parse_matrix(pg.field(), matrix, pg.n() + 1)?;
            spread_from_matrix(pg, &m).map_err(|e| e.to_string())
        }
        SpreadSource::Piecemeal { blocks } => {
            let blks = parse_blocks(pg.field(), blocks)?;
            piecemeal_spread(pg, &blks).map_err(|e| e.to_string())
        }
        SpreadSource::FromFile { file } => {
            let text =
                std::fs::read_to_string(file).map_err(|e| format!("reading {:?}: {}", file, e))?;
            let sf: SpreadFile =
                serde_json::from_str(&text).map_err(|e| format!("parsing {:?}: {}", file, e))?;
            sf.into_spread(pg).map_err(|e| e.to_string())
        }
    }
}

fn cmd_spread(opts: &GlobalOpts, source: &SpreadSource) -> Result<i32, String> {
    let pg = build_space(opts)?;
    let s = construct_spread(&pg, source)?;
    let file = SpreadFile::from_spread(&pg, &s);
    emit(opts, &(serde_json::to_string_pretty(&file).unwrap() + "\n"))?;
    Ok(0)
}

fn cmd_dual(opts: &GlobalOpts, source: &SpreadSource) -> Result<i32, String> {
    let pg = build_space(opts)?;
    let s = construct_spread(&pg, source)?;
    let dual = dual_spread(&pg, &s).map_err(|e| e.to_string())?;
    let doc = json!({
        "n": pg.n(),
        "field": pg.field().spec(),
        "members": dual.members.iter().map(|m| m.points.clone()).collect::<Vec<_>>(),
        "member_of_hyperplane": dual.member_of_hyp,
    });
    emit(opts, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    Ok(0)
}

fn cmd_spread_hyperplane(opts: &GlobalOpts, source: &SpreadSource) -> Result<i32, String> {
    let geom = build_geometry(opts)?;
    let s = construct_spread(geom.pg(), source)?;
    let h = spread_hyperplane(&geom, &s).map_err(|e| e.to_string())?;
    let file = HyperplaneFile::from_hyperplane(&h, opts.rle);
    emit(opts, &(serde_json::to_string_pretty(&file).unwrap() + "\n"))?;
    Ok(0)
}

// ---- verification commands ----

fn check_from(
    id: &str,
    paper_ref: &str,
    instance: Option<String>,
    start: Instant,
    pass: bool,
    details: String,
    witness: Option<serde_json::Value>,
) -> Check {
    Check {
        id: id.to_string(),
        paper_ref: paper_ref.to_string(),
        instance,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        witness,
        details,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn cmd_verify(opts: &GlobalOpts, check: &VerifyCmd) -> Result<i32, String> {
    let field = resolve_field(opts)?;
    let mut report = Report::new("verify", config_json(opts, &field));
    match check {
        VerifyCmd::Hyperplane { source } => {
            let geom = build_geometry(opts)?;
            let h = construct_hyperplane(&geom, source)?;
            let start = Instant::now();
            let c = is_geometric_hyperplane(&geom, &h.set);
            report.push_check(check_from(
                "hyperplane-axiom",
                "geometric-hyperplane",
                Some(format!("{:?}", h.provenance)),
                start,
                c.ok,
                format!("{} of {} flags", h.size(), geom.flag_count()),
                c.violation.map(|(l, n)| json!({"line": l, "count": n})),
            ));
        }
        VerifyCmd::Maximality { source } => {
            let geom = build_geometry(opts)?;
            let h = construct_hyperplane(&geom, source)?;
            let start = Instant::now();
            let m = is_maximal_hyperplane(&geom, &h.set).map_err(|e| e.to_string())?;
            report.push_check(check_from(
                "maximality",
                "theorem-1-7",
                Some(format!("{:?}", h.provenance)),
                start,
                m.ok,
                "closure with every external flag saturates".into(),
                m.witness.map(|(f, size)| json!({"flag": f, "stalled_at": size})),
            ));
        }
        VerifyCmd::Connectivity { source } => {
            let geom = build_geometry(opts)?;
            let h = construct_hyperplane(&geom, source)?;
            let start = Instant::now();
            let ok = complement_connected(&geom, &h.set).map_err(|e| e.to_string())?;
            report.push_check(check_from(
                "complement-connectivity",
                "cor-1-8",
                Some(format!("{:?}", h.provenance)),
                start,
                ok,
                format!("complement of {} flags", geom.flag_count() - h.size()),
                None,
            ));
        }
        VerifyCmd::Theorem114 {
            matrix,
            exhaustive,
            samples,
        } => {
            match (matrix, exhaustive) {
                (Some(mexpr), _) => {
                    let geom = build_geometry(opts)?;
                    let m = parse_matrix(geom.field(), mexpr, geom.pg().n() + 1)?;
                    let start = Instant::now();
                    match battery::tensor_spread_instance(&geom, &m) {
                        Ok(details) => report.push_check(check_from(
                            "theorem-1-14",
                            "theorem-1-14",
                            Some(mexpr.clone()),
                            start,
                            true,
                            details,
                            None,
                        )),
                        Err(details) => report.push_check(check_from(
                            "theorem-1-14",
                            "theorem-1-14",
                            Some(mexpr.clone()),
                            start,
                            false,
                            details,
                            Some(json!({"matrix": m.to_grid()})),
                        )),
                    }
                }
                (None, true) => {
                    if opts.n != 3 {
                        return Err("the exhaustive sweep is wired for n = 3".into());
                    }
                    let start = Instant::now();
                    let out = match field.q() {
                        2 => battery::tensor_spread_battery_gf2(),
                        3 => battery::tensor_spread_battery_gf3(*samples, opts.seed),
                        q => return Err(format!("exhaustive sweep supports q in {{2, 3}}, got {}", q)),
                    };
                    report.push_check(check_from(
                        "theorem-1-14",
                        "theorem-1-14",
                        Some(format!("n=3, q={}", field.q())),
                        start,
                        out.pass,
                        out.details,
                        out.witness,
                    ));
                }
                (None, false) => return Err("need --matrix or --exhaustive".into()),
            }
        }
        VerifyCmd::Lemma112 { size } => {
            let size = size.unwrap_or(opts.n + 1);
            let total = (field.q() as u128).pow((size * size) as u32);
            if total > opts.cap_search as u128 * 64 {
                return Err(format!(
                    "sweep of {} matrices exceeds the search cap; raise --cap-search",
                    total
                ));
            }
            report.run(|| battery::smat_battery(size, field.q()));
        }
        VerifyCmd::Prop13 => {
            guard_matrix_sweep(opts, &field)?;
            let (n, q) = (opts.n, field.q());
            report.run(|| battery::eigen_containment_battery(n, q));
        }
        VerifyCmd::Prop21 => {
            guard_matrix_sweep(opts, &field)?;
            let (n, q) = (opts.n, field.q());
            report.run(|| battery::perp_class_battery(n, q));
        }
        VerifyCmd::Cor22 => {
            let (n, q) = (opts.n, field.q());
            report.run(|| cor_2_2_battery(n, q));
        }
        VerifyCmd::Gen1 => {
            let dim = crate::adjembed::null_trace_dim(opts.n);
            let count = (field.q() as u128).pow(dim as u32);
            if count > opts.cap_search as u128 * 64 {
                return Err("too many functionals; raise --cap-search".into());
            }
            let (n, q) = (opts.n, field.q());
            report.run(|| battery::gen_1_battery(n, q));
        }
        VerifyCmd::Gram => {
            let start = Instant::now();
            let r = gram_diagnostics(&field, opts.n, opts.seed);
            let pass = r.ok();
            report.push_check(check_from(
                "gram-diagnostics",
                "saturation-form; char-2-isotropy",
                Some(format!("n={}, q={}", opts.n, field.q())),
                start,
                pass,
                format!(
                    "rank {}/{}, blocks {}, char-2 law {:?} over {} matrices, pure isotropy {}",
                    r.gram_rank,
                    r.expected_rank,
                    r.block_structure_ok,
                    r.char2_isotropy_ok,
                    r.char2_checked,
                    r.pure_isotropy_ok
                ),
                (!pass).then(|| serde_json::to_value(&r).unwrap()),
            ));
        }
    }
    emit_report(opts, &report)
}

fn guard_matrix_sweep(opts: &GlobalOpts, field: &Field) -> Result<(), String> {
    let d = opts.n + 1;
    let total = (field.q() as u128).pow((d * d) as u32);
    if total > 1 << 20 {
        return Err(format!(
            "a sweep of {} matrices at (n={}, q={}) is beyond desk scale",
            total,
            opts.n,
            field.q()
        ));
    }
    Ok(())
}

/// Orthogonality of embedded flags equals distance at most 2, exhaustively.
fn cor_2_2_battery(n: usize, q: u32) -> CriterionOutcome {
    use crate::adjembed::{embed_flag, saturation_form};
    let g = FlagGeometry::build(Arc::new(Field::of_order(q).unwrap()), n, 1 << 22)
        .expect("desk scale");
    let f = g.field().clone();
    let embeds: Vec<Mat> = (0..g.flag_count() as u32)
        .map(|fl| embed_flag(&g, fl).mat)
        .collect();
    for a in 0..g.flag_count() as u32 {
        for b in 0..g.flag_count() as u32 {
            let orth = saturation_form(&f, &embeds[a as usize], &embeds[b as usize]).unwrap() == 0;
            let close = g.pair_class(a, b).distance() <= 2;
            if orth != close {
                return CriterionOutcome {
                    id: "cor-2-2",
                    refs: "cor-2-2",
                    pass: false,
                    inconclusive: false,
                    details: "orthogonality disagrees with distance".into(),
                    witness: Some(json!({"a": g.format_flag(a), "b": g.format_flag(b)})),
                };
            }
        }
    }
    CriterionOutcome {
        id: "cor-2-2",
        refs: "cor-2-2",
        pass: true,
        inconclusive: false,
        details: format!(
            "all {} flag pairs at (n={}, q={}): orthogonal iff distance <= 2",
            g.flag_count() * g.flag_count(),
            n,
            q
        ),
        witness: None,
    }
}

// ---- search and suite ----

fn cmd_search(opts: &GlobalOpts, mode: SearchCliMode, count: Option<usize>) -> Result<i32, String> {
    let pg = build_space(opts)?;
    let geom = build_geometry(opts)?;
    let mode = match mode {
        SearchCliMode::Exhaustive => SearchMode::Exhaustive,
        SearchCliMode::FirstK => SearchMode::FirstK(count.ok_or("--count required for first-k")?),
    };
    let outcome = search_spreads(&pg, mode, opts.cap_search).map_err(|e| e.to_string())?;
    let mut lines_out = String::new();
    let mut all_standard = true;
    let mut any_inconclusive = false;
    let mut non_standard_dual_hits = Vec::new();
    for (i, s) in outcome.spreads.iter().enumerate() {
        let standard = is_standard(&pg, s, opts.cap_search);
        let dual_ok = dual_spread(&pg, s).is_ok();
        let arises = if dual_ok {
            let h = spread_hyperplane(&geom, s).map_err(|e| e.to_string())?;
            Some(arises_from_embedding(&geom, &h))
        } else {
            None
        };
        match standard.outcome {
            Standardness::Standard(_) => {}
            Standardness::NotStandard => {
                all_standard = false;
                if dual_ok {
                    // a non-standard dual-admitting spread would be a
                    // noteworthy find; surface it prominently
                    non_standard_dual_hits.push(i);
                }
            }
            Standardness::Inconclusive => any_inconclusive = true,
        }
        let record = json!({
            "index": i,
            "lines": s.lines.iter().map(|l| l.points.clone()).collect::<Vec<_>>(),
            "standard": standard.outcome.verdict(),
            "stabilizer_dim": standard.stabilizer_dim,
            "admits_dual": dual_ok,
            "hyperplane_arises": arises,
        });
        lines_out.push_str(&serde_json::to_string(&record).unwrap());
        lines_out.push('\n');
    }
    let summary = json!({
        "summary": {
            "config": config_json(opts, pg.field()),
            "found": outcome.spreads.len(),
            "nodes": outcome.nodes,
            "complete": outcome.complete,
            "all_standard": all_standard,
            "non_standard_with_dual": non_standard_dual_hits,
        }
    });
    lines_out.push_str(&serde_json::to_string(&summary).unwrap());
    lines_out.push('\n');
    emit(opts, &lines_out)?;
    if !non_standard_dual_hits.is_empty() {
        eprintln!(
            "NOTE: non-standard dual-admitting spreads found at indices {:?}; their hyperplanes cannot arise from the embedding",
            non_standard_dual_hits
        );
    }
    if any_inconclusive && !opts.allow_inconclusive {
        return Ok(1);
    }
    Ok(0)
}

fn cmd_suite(opts: &GlobalOpts) -> Result<i32, String> {
    let field = resolve_field(opts)?;
    let mut report = Report::new("suite", config_json(opts, &field));
    let class_cap = opts.cap_search;
    let node_cap = opts.cap_search;
    report.run(battery::criterion_geometry_sanity);
    report.run(battery::criterion_hexagon);
    report.run(battery::criterion_symps);
    report.run(battery::criterion_eigen_containment);
    report.run(battery::criterion_quasi_singular);
    report.run(battery::criterion_perp_classes);
    report.run(battery::criterion_linear_hyperplanes);
    report.run(battery::criterion_smat_equivalence);
    report.run(battery::criterion_spread_battery);
    report.run(|| battery::criterion_piecemeal(class_cap));
    report.run(|| battery::criterion_spread_search(class_cap, node_cap));
    report.run(battery::criterion_gram);
    if opts.out.is_none() {
        // keep the human summary visible even when the report goes to stdout
        eprintln!("{}", report.summary_lines());
    }
    emit_report(opts, &report)
}
