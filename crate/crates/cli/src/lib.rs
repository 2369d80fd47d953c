//! Command line front end. [`run`] parses arguments, dispatches to the core
//! library and returns the process exit status.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypertrop::catalog::{enumerate_trivalent_graphs, MAX_CATALOG_GENUS};
use hypertrop::chains::{bits_to_string, enumerate_chains, is_chain, is_hyperelliptic_chain, is_ladder, ChainStructure};
use hypertrop::embedding::{embedding_classes, is_crowded, Crowdedness};
use hypertrop::hyperelliptic::{is_hyperelliptic, HyperellipticityWitness};
use hypertrop::io::{read_json, to_json, CurveDoc};
use hypertrop::lattice::{
    enumerate_hyperelliptic_polygons_up_to, enumerate_maximal_hyperelliptic, enumerate_maximal_nonhyperelliptic,
    maximal_polygons, LatticePoint, LatticePolygon, PolygonClass, PolygonData,
};
use hypertrop::moduli::{
    skeleton_type, verify_metric_obstruction, verify_theorem, ObstructionReport, TheoremOptions, TheoremReport,
};
use hypertrop::render::{self, SvgOptions};
use hypertrop::triangulation::{enumerate_triangulations, EnumerationOptions};
use hypertrop::tropical::{dual_curve, skeleton, Skeleton, TropicalCurve};
use hypertrop::{Error, MetricGraph};
use serde::Serialize;

/// Overrides the default genus guard.
pub const MAX_GENUS_ENV: &str = "HYPERTROP_MAX_GENUS";
/// Overrides the default lattice point guard.
pub const MAX_POINTS_ENV: &str = "HYPERTROP_MAX_POINTS";
pub const DEFAULT_MAX_GENUS: usize = 3;
pub const DEFAULT_MAX_POINTS: usize = 30;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hypertrop", version, about = "Tropical plane curves, skeletons and hyperelliptic metric graphs")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest genus accepted by heavy commands.
    #[arg(long, global = true, env = MAX_GENUS_ENV, default_value_t = DEFAULT_MAX_GENUS)]
    pub max_genus: usize,
    /// Largest number of lattice points accepted by enumeration.
    #[arg(long, global = true, env = MAX_POINTS_ENV, default_value_t = DEFAULT_MAX_POINTS)]
    pub max_points: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice data and classification of a polygon.
    Polygon(PolygonInput),
    /// Polygon corpora of one genus.
    Polygons {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_enum, default_value_t = PolygonKind::Maximal)]
        kind: PolygonKind,
    },
    /// Regular (or all) unimodular triangulations of a polygon.
    Triangulations {
        #[command(flatten)]
        polygon: PolygonInput,
        /// Include nonregular triangulations.
        #[arg(long)]
        all: bool,
        /// One triangulation per symmetry orbit.
        #[arg(long)]
        modulo_symmetry: bool,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Tropical curve dual to a triangulated polygon with heights.
    Curve { input: PathBuf },
    /// Skeleton of the dual curve with its hyperelliptic verdicts.
    Skeleton { input: PathBuf },
    /// Metric graph commands.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Writes one graph file per combinatorial type.
    Catalog {
        #[arg(value_enum)]
        family: CatalogFamily,
        #[arg(long)]
        genus: usize,
        /// Directory for the graph files.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Checks the hyperelliptic skeleton theorem over every maximal polygon.
    Verify {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        modulo_symmetry: bool,
        /// Skip the exact per-cone hyperelliptic metric search.
        #[arg(long)]
        no_symbolic: bool,
        /// Where a counterexample witness is written.
        #[arg(long, default_value = "witness.json")]
        witness: PathBuf,
    },
    /// SVG figures.
    Render {
        #[arg(value_enum)]
        kind: RenderKind,
        input: PathBuf,
        /// Which embedding class to draw.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
        #[arg(long, default_value_t = 20.0)]
        margin: f64,
    },
}

#[derive(Debug, Args)]
pub struct PolygonInput {
    /// Polygon document `{"vertices": [[x, y], ...]}`.
    #[arg(required_unless_present = "vertices")]
    pub file: Option<PathBuf>,
    /// Inline vertices, e.g. `0,0 4,0 0,4`.
    #[arg(long, num_args = 3.., value_parser = parse_point, conflicts_with = "file")]
    pub vertices: Option<Vec<LatticePoint>>,
}

#[derive(Debug, Subcommand)]
pub enum GraphAction {
    /// Genus, bridges, sprawling, crowded, chain and hyperelliptic verdicts.
    Classify { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolygonKind {
    Maximal,
    MaximalHyperelliptic,
    MaximalNonhyperelliptic,
    Hyperelliptic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CatalogFamily {
    Chains,
    Trivalent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderKind {
    Polygon,
    Triangulation,
    Curve,
    Skeleton,
    Chain,
    Embedding,
}

fn parse_point(s: &str) -> Result<LatticePoint, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y but got {s:?}"))?;
    let x = x.trim().parse().map_err(|_| format!("bad x coordinate in {s:?}"))?;
    let y = y.trim().parse().map_err(|_| format!("bad y coordinate in {s:?}"))?;
    Ok(LatticePoint::new(x, y))
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Violation { witness: PathBuf, message: String },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Violation { witness, message } => {
                write!(f, "theorem violation, witness written to {}: {message}", witness.display())
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

fn emit(common: &Common, text: &str) -> CmdResult {
    match &common.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(common: &Common, value: &T) -> CmdResult {
    emit(common, &to_json(value)?)
}

fn guard_genus(common: &Common, g: usize) -> CmdResult {
    if g > common.max_genus {
        return Err(Error::Guard(format!("genus {g} exceeds the limit {} (raise with --max-genus or {MAX_GENUS_ENV})", common.max_genus)).into());
    }
    Ok(())
}

fn guard_points(common: &Common, p: &LatticePolygon) -> CmdResult {
    let n = p.lattice_points().len();
    if n > common.max_points {
        return Err(Error::Guard(format!("{n} lattice points exceed the limit {} (raise with --max-points or {MAX_POINTS_ENV})", common.max_points)).into());
    }
    Ok(())
}

fn load_polygon(input: &PolygonInput) -> CmdResult<LatticePolygon> {
    match (&input.file, &input.vertices) {
        (_, Some(v)) => Ok(LatticePolygon::hull_of(v)?),
        (Some(f), None) => Ok(read_json(f)?),
        (None, None) => Err(Error::Malformed("no polygon given".into()).into()),
    }
}

/// Accepts a full curve document or a bare polygon document.
fn load_curve_doc(path: &Path) -> CmdResult<CurveDoc> {
    let value: serde_json::Value = read_json(path)?;
    let source = path.display().to_string();
    let doc = if value.get("polygon").is_some() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value::<LatticePolygon>(value).map(|polygon| CurveDoc { polygon, triangles: None, heights: None })
    };
    doc.map_err(|e| Error::Parse(format!("{source}: {e}")).into())
}

#[derive(Serialize)]
struct PolygonReport {
    polygon: LatticePolygon,
    normal_form: LatticePolygon,
    class: PolygonClass,
    data: PolygonData,
    symmetries: usize,
}

#[derive(Serialize)]
struct PolygonList {
    genus: usize,
    kind: String,
    count: usize,
    polygons: Vec<LatticePolygon>,
}

#[derive(Serialize)]
struct TriangulationList {
    polygon: LatticePolygon,
    regular_only: bool,
    modulo_symmetry: bool,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    triangulations: Option<Vec<CurveDoc>>,
}

#[derive(Serialize)]
struct CurveReport {
    input: CurveDoc,
    curve: TropicalCurve,
}

#[derive(Serialize)]
struct SkeletonReport {
    input: CurveDoc,
    skeleton: Skeleton,
    skeleton_type: String,
    chain: Option<ChainStructure>,
    hyperelliptic: HyperellipticityWitness,
    hyperelliptic_polygon: bool,
    obstruction: Option<ObstructionReport>,
}

#[derive(Serialize)]
pub struct GraphReport {
    pub genus: usize,
    pub trivalent: bool,
    pub bridges: Vec<usize>,
    pub sprawling: bool,
    pub planar: Option<bool>,
    pub crowded: Option<bool>,
    pub chain: bool,
    pub chain_bits: Option<String>,
    pub ladder: bool,
    pub hyperelliptic: bool,
    /// Equal lengths across every parallel pair; chains only.
    pub two_cut_criterion: Option<bool>,
}

#[derive(Serialize)]
struct CatalogEntry {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<String>,
}

#[derive(Serialize)]
struct CatalogIndex {
    family: String,
    genus: usize,
    count: usize,
    entries: Vec<CatalogEntry>,
}

#[derive(Serialize)]
struct VerifyReport {
    genus: usize,
    seed: u64,
    samples: usize,
    polygons: usize,
    regular_triangulations: usize,
    instances: usize,
    hyperelliptic_metrics: usize,
    nonhyperelliptic_metrics: usize,
    counterexamples: usize,
    reports: Vec<TheoremReport>,
}

pub fn classify_graph(g: &MetricGraph) -> hypertrop::Result<GraphReport> {
    let stats = g.stats()?;
    let trivalent = stats.trivalent;
    let (planar, crowded) = if trivalent && g.vertices <= hypertrop::embedding::MAX_EMBEDDING_VERTICES {
        match is_crowded(g)? {
            Crowdedness::NotPlanar => (Some(false), None),
            Crowdedness::Crowded => (Some(true), Some(true)),
            Crowdedness::NotCrowded => (Some(true), Some(false)),
        }
    } else {
        (None, None)
    };
    let chain = is_chain(g);
    Ok(GraphReport {
        genus: stats.genus,
        trivalent,
        bridges: stats.bridges,
        sprawling: trivalent && g.is_sprawling().is_some(),
        planar,
        crowded,
        chain: chain.is_some(),
        chain_bits: chain.as_ref().map(|c| bits_to_string(&c.bits)),
        ladder: is_ladder(g).is_some(),
        hyperelliptic: is_hyperelliptic(g)?.verdict,
        two_cut_criterion: match chain {
            Some(_) => Some(is_hyperelliptic_chain(g)?),
            None => None,
        },
    })
}

fn polygons(common: &Common, genus: usize, kind: PolygonKind) -> CmdResult {
    let list = match kind {
        PolygonKind::Maximal => maximal_polygons(genus)?,
        PolygonKind::MaximalHyperelliptic => enumerate_maximal_hyperelliptic(genus)?,
        PolygonKind::MaximalNonhyperelliptic => enumerate_maximal_nonhyperelliptic(genus)?,
        PolygonKind::Hyperelliptic => {
            guard_genus(common, genus)?;
            enumerate_hyperelliptic_polygons_up_to(genus, common.max_genus)?
        }
    };
    let kind = format!("{kind:?}").to_lowercase();
    emit_json(common, &PolygonList { genus, kind, count: list.len(), polygons: list })
}

fn triangulations(common: &Common, input: &PolygonInput, all: bool, modulo_symmetry: bool, count: bool) -> CmdResult {
    let p = load_polygon(input)?;
    guard_genus(common, p.genus())?;
    guard_points(common, &p)?;
    let opts = EnumerationOptions { regular_only: !all, modulo_symmetry, max_genus: common.max_genus };
    let tris = enumerate_triangulations(&p, opts)?;
    let docs = (!count).then(|| tris.iter().map(|t| CurveDoc::new(&p, t, None)).collect());
    emit_json(common, &TriangulationList { polygon: p, regular_only: !all, modulo_symmetry, count: tris.len(), triangulations: docs })
}

fn skeleton_report(doc: CurveDoc) -> CmdResult<SkeletonReport> {
    let (tri, h) = doc.resolve()?;
    let p = &doc.polygon;
    let sk = skeleton(&dual_curve(p, &tri, &h)?)?;
    let chain = is_chain(&sk.graph);
    let hyperelliptic_polygon = p.is_hyperelliptic();
    let obstruction = match (&chain, hyperelliptic_polygon) {
        (Some(_), false) if p.genus() == 3 => Some(verify_metric_obstruction(p, &tri, &h)?),
        _ => None,
    };
    Ok(SkeletonReport {
        input: CurveDoc::new(p, &tri, Some(&h)),
        skeleton_type: skeleton_type(&sk.graph),
        hyperelliptic: is_hyperelliptic(&sk.graph)?,
        skeleton: sk,
        chain,
        hyperelliptic_polygon,
        obstruction,
    })
}

fn catalog(common: &Common, family: CatalogFamily, genus: usize, out_dir: &Path) -> CmdResult {
    std::fs::create_dir_all(out_dir)?;
    let mut entries = Vec::new();
    match family {
        CatalogFamily::Chains => {
            for (bits, c) in enumerate_chains(genus)? {
                let bits = bits_to_string(&bits);
                let file = format!("chain_g{genus}_{bits}.json");
                std::fs::write(out_dir.join(&file), to_json(&c)?)?;
                entries.push(CatalogEntry { file, bits: Some(bits) });
            }
        }
        CatalogFamily::Trivalent => {
            if genus > MAX_CATALOG_GENUS {
                return Err(Error::Guard(format!("the trivalent catalog stops at genus {MAX_CATALOG_GENUS}")).into());
            }
            let graphs = enumerate_trivalent_graphs(genus)?;
            let width = graphs.len().to_string().len();
            for (i, g) in graphs.iter().enumerate() {
                let file = format!("trivalent_g{genus}_{i:0width$}.json");
                std::fs::write(out_dir.join(&file), to_json(g)?)?;
                entries.push(CatalogEntry { file, bits: None });
            }
        }
    }
    let family = format!("{family:?}").to_lowercase();
    emit_json(common, &CatalogIndex { family, genus, count: entries.len(), entries })
}

/// Writes the witness file and returns the failure carrying its path.
fn record_violation(path: &Path, genus: usize, opts: &TheoremOptions, witness: String) -> CmdResult<Failure> {
    let value: serde_json::Value = serde_json::from_str(&witness).unwrap_or(serde_json::Value::String(witness));
    let doc = serde_json::json!({ "genus": genus, "seed": opts.seed, "samples": opts.samples, "witness": value });
    std::fs::write(path, to_json(&doc)?)?;
    let message = doc["witness"]["failure"].as_str().unwrap_or("counterexample").to_string();
    Ok(Failure::Violation { witness: path.to_path_buf(), message })
}

fn verify(common: &Common, genus: usize, opts: TheoremOptions, witness: &Path) -> CmdResult {
    guard_genus(common, genus)?;
    let polygons = maximal_polygons(genus)?;
    for p in &polygons {
        guard_points(common, p)?;
    }
    let mut reports = Vec::new();
    for p in &polygons {
        match verify_theorem(p, &opts) {
            Ok(r) => reports.push(r),
            Err(Error::TheoremViolation(w)) => return Err(record_violation(witness, genus, &opts, w)?),
            Err(e) => return Err(e.into()),
        }
    }
    let sum = |f: fn(&TheoremReport) -> usize| reports.iter().map(f).sum::<usize>();
    let report = VerifyReport {
        genus,
        seed: opts.seed,
        samples: opts.samples,
        polygons: reports.len(),
        regular_triangulations: sum(|r| r.regular_triangulations),
        instances: sum(|r| r.instances),
        hyperelliptic_metrics: sum(|r| r.hyperelliptic_metrics),
        nonhyperelliptic_metrics: sum(|r| r.nonhyperelliptic_metrics),
        counterexamples: 0,
        reports,
    };
    emit_json(common, &report)
}

fn render_cmd(common: &Common, kind: RenderKind, input: &Path, index: usize, opts: SvgOptions) -> CmdResult {
    let svg = match kind {
        RenderKind::Polygon => render::render_polygon(&load_curve_doc(input)?.polygon, opts),
        RenderKind::Triangulation => {
            let doc = load_curve_doc(input)?;
            let (tri, _) = doc.resolve()?;
            render::render_triangulation(&doc.polygon, &tri, opts)
        }
        RenderKind::Curve | RenderKind::Skeleton => {
            let doc = load_curve_doc(input)?;
            let (tri, h) = doc.resolve()?;
            let curve = dual_curve(&doc.polygon, &tri, &h)?;
            if kind == RenderKind::Curve {
                render::render_curve(&curve, opts)
            } else {
                let sk = skeleton(&curve)?;
                render::render_skeleton(&curve, &sk, opts)
            }
        }
        RenderKind::Chain => {
            let g: MetricGraph = read_json(input)?;
            render::render_chain(&g, opts).ok_or_else(|| Error::Graph("the graph is not a chain".into()))?
        }
        RenderKind::Embedding => {
            let g: MetricGraph = read_json(input)?;
            let classes = embedding_classes(&g)?;
            let e = classes.get(index).ok_or_else(|| {
                Error::Domain(format!("embedding class {index} requested, the graph has {}", classes.len()))
            })?;
            render::render_embedding(&g, e, opts)
        }
    };
    emit(common, &svg)
}

fn dispatch(cfg: &CommandConfig) -> CmdResult {
    let common = &cfg.common;
    match &cfg.command {
        Command::Polygon(input) => {
            let p = load_polygon(input)?;
            let report = PolygonReport {
                normal_form: p.normal_form(),
                class: p.classify(),
                data: p.data(),
                symmetries: p.symmetries().len(),
                polygon: p,
            };
            emit_json(common, &report)
        }
        Command::Polygons { genus, kind } => polygons(common, *genus, *kind),
        Command::Triangulations { polygon, all, modulo_symmetry, count } => {
            triangulations(common, polygon, *all, *modulo_symmetry, *count)
        }
        Command::Curve { input } => {
            let doc = load_curve_doc(input)?;
            let (tri, h) = doc.resolve()?;
            let curve = dual_curve(&doc.polygon, &tri, &h)?;
            emit_json(common, &CurveReport { input: CurveDoc::new(&doc.polygon, &tri, Some(&h)), curve })
        }
        Command::Skeleton { input } => emit_json(common, &skeleton_report(load_curve_doc(input)?)?),
        Command::Graph { action: GraphAction::Classify { input } } => {
            let g: MetricGraph = read_json(input)?;
            emit_json(common, &classify_graph(&g)?)
        }
        Command::Catalog { family, genus, out_dir } => catalog(common, *family, *genus, out_dir),
        Command::Verify { genus, samples, seed, modulo_symmetry, no_symbolic, witness } => {
            let opts = TheoremOptions {
                samples: *samples,
                seed: *seed,
                modulo_symmetry: *modulo_symmetry,
                symbolic: !no_symbolic,
                max_genus: common.max_genus,
            };
            verify(common, *genus, opts, witness)
        }
        Command::Render { kind, input, index, scale, margin } => {
            render_cmd(common, *kind, input, *index, SvgOptions { scale: *scale, margin: *margin })
        }
    }
}

/// Runs the command line; returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CommandConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(&cfg) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            match f {
                Failure::Violation { .. } => EXIT_VIOLATION,
                Failure::Core(_) => EXIT_ERROR,
            }
        }
    }
}
