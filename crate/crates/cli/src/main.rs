//! `hypb`: hyperbolic polygonal billiards from the command line.
//!
//! Every command prints a single JSON document on standard output. Exit code
//! 0 means a decision was produced (including negative ones), 2 means the
//! answer is undecided (unknown, budget exhausted, grazing), and 1 means the
//! input was rejected.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::OnceLock;

use billiard_core::billiards::{bounce_word, simulate, SimulationError, Trajectory};
use billiard_core::cone::{
    bound_check, cone_area, double, orbifold_area, validate_cover, Angle, BranchedCoverData, ConeError,
    ConeSurfaceData, OrbifoldSignature,
};
use billiard_core::hyperbolic::HPoint;
use billiard_core::polygon::{
    build_regular, io::{load_polygon, PolygonFile}, solve_closure, DeformationParams, LabeledPolygon, RationalAngle,
};
use billiard_core::rigidity::{
    classify, compare, grammar_check, tiling_closure, CompareConfig, GrammarSpec, RigidityVerdict, TilingBudget,
    TilingStatus,
};
use billiard_core::unfolding::{enumerate_diagonals, generalized_diagonal, realizable, unfold, Realizability, UnfoldError};
use billiard_core::word::BounceWord;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use svg::Figure;

#[derive(Parser)]
#[command(name = "hypb", version, about = "Billiards in compact hyperbolic polygons")]
struct Cli {
    /// Directory that relative `--svg` paths are written into.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polygon construction and checks.
    #[command(subcommand)]
    Polygon(PolygonCmd),
    /// Follow a billiard trajectory and report its bounce word.
    Simulate {
        #[arg(long)]
        polygon: PathBuf,
        /// Start point in Klein coordinates, `u,v`.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        /// Initial direction in radians.
        #[arg(long, allow_hyphen_values = true)]
        dir: f64,
        #[arg(long)]
        bounces: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decide whether a word is the bounce word of some trajectory.
    Realize {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decide whether a word is carried by a vertex-to-vertex geodesic.
    Diagonal {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// All generalized-diagonal words up to a length.
    Diagonals {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Rigid, flexible or unknown.
    Classify {
        #[arg(long)]
        polygon: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a word against the forbidden-subword rules of a good polygon.
    Grammar {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Sample words from two polygons and test each in the other.
    Compare {
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        len: usize,
        #[arg(long, env = "HYPB_SEED", default_value_t = 0)]
        seed: u64,
        /// Compare generalized diagonals up to this length (0 skips).
        #[arg(long, default_value_t = 4)]
        diagonal_len: usize,
    },
    /// Run the reflection-group closure and extract a tile.
    Tile {
        #[arg(long)]
        polygon: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Area bookkeeping for cone surfaces, orbifolds and covers.
    #[command(subcommand)]
    Cone(ConeCmd),
}

#[derive(Subcommand)]
enum PolygonCmd {
    Validate {
        #[arg(long)]
        polygon: PathBuf,
    },
    Area {
        #[arg(long)]
        polygon: PathBuf,
    },
    /// Print a regular polygon file.
    Regular {
        #[arg(long)]
        n: usize,
        /// Interior angle as `p/q` (times pi) or plain radians.
        #[arg(long)]
        angle: String,
    },
    /// Print the polygon with the given angles and first `n-3` side lengths.
    Deform {
        /// Comma-separated angles, each `p/q` (times pi) or radians.
        #[arg(long)]
        angles: String,
        #[arg(long)]
        lengths: String,
    },
}

#[derive(Subcommand)]
enum ConeCmd {
    /// Area of a cone surface.
    Area {
        #[arg(long)]
        genus: u32,
        /// Comma-separated cone angles: `4pi`, `2/3pi` or radians.
        #[arg(long, default_value = "")]
        angles: String,
    },
    /// The double of a polygon as a cone sphere.
    Double {
        #[arg(long)]
        polygon: PathBuf,
    },
    OrbifoldArea {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        orders: String,
    },
    /// Validate branched-cover data from a JSON file.
    CheckCover {
        #[arg(long)]
        data: PathBuf,
    },
    /// Recompute both sides of the cone-point bound for a cover.
    Bound {
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = TilingBudget::default().max_word_len)]
    max_word_len: usize,
    #[arg(long, default_value_t = TilingBudget::default().region_margin)]
    region_margin: f64,
    #[arg(long, default_value_t = TilingBudget::default().max_elements)]
    max_elements: usize,
}

impl BudgetArgs {
    fn budget(&self) -> TilingBudget {
        TilingBudget { max_word_len: self.max_word_len, region_margin: self.region_margin, max_elements: self.max_elements }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("{message}")]
    Invalid { kind: &'static str, message: String, details: Value },
}

impl CliError {
    fn invalid(kind: &'static str, e: impl ToString) -> CliError {
        CliError::Invalid { kind, message: e.to_string(), details: Value::Null }
    }

    fn to_json(&self) -> Value {
        let (kind, details) = match self {
            CliError::Usage(_) => ("usage", Value::Null),
            CliError::Read { .. } => ("read", Value::Null),
            CliError::Write { .. } => ("write", Value::Null),
            CliError::Invalid { kind, details, .. } => (*kind, details.clone()),
        };
        let mut err = json!({ "kind": kind, "message": self.to_string() });
        if !details.is_null() {
            err["details"] = details;
        }
        json!({ "error": err })
    }
}

/// A JSON report and whether it is a decision.
struct Report {
    value: Value,
    decided: bool,
}

fn decided(v: impl Serialize) -> Result<Report, CliError> {
    Ok(Report { value: to_value(v), decided: true })
}

fn undecided(v: impl Serialize) -> Result<Report, CliError> {
    Ok(Report { value: to_value(v), decided: false })
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })
}

static OUT_DIR: OnceLock<PathBuf> = OnceLock::new();

fn write_svg(path: &Path, fig: Figure) -> Result<(), CliError> {
    let path = &match OUT_DIR.get() {
        Some(dir) if path.is_relative() => {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Write { path: dir.display().to_string(), message: e.to_string() })?;
            dir.join(path)
        }
        _ => path.to_path_buf(),
    };
    fs::write(path, fig.finish()).map_err(|e| CliError::Write { path: path.display().to_string(), message: e.to_string() })
}

/// Load a polygon file and refuse it unless it validates.
fn polygon(path: &Path) -> Result<LabeledPolygon, CliError> {
    let (poly, report) = load_polygon(&read(path)?).map_err(|e| CliError::invalid("polygon", e))?;
    if !report.is_valid() {
        return Err(CliError::Invalid {
            kind: "invalid_polygon",
            message: format!("{} fails validation", path.display()),
            details: to_value(&report),
        });
    }
    Ok(poly)
}

fn word(s: &str, poly: &LabeledPolygon) -> Result<BounceWord, CliError> {
    let w: BounceWord = s.parse().map_err(|e| CliError::invalid("word", e))?;
    w.check_alphabet(poly.n()).map_err(|e| CliError::invalid("word", e))?;
    Ok(w)
}

fn parse_angle(s: &str) -> Result<RationalAngle, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot parse angle {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
            RationalAngle::pi_frac(p, q).map_err(|e| CliError::invalid("angle", e))
        }
        None => s.parse::<f64>().map(RationalAngle::numeric).map_err(|_| bad()),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| CliError::Usage(format!("cannot parse {what} {t:?}"))))
        .collect()
}

fn summary(line: impl AsRef<str>) {
    eprintln!("{}", line.as_ref());
}

fn run_polygon(cmd: PolygonCmd) -> Result<Report, CliError> {
    match cmd {
        PolygonCmd::Validate { polygon } => {
            let (poly, report) = load_polygon(&read(&polygon)?).map_err(|e| CliError::invalid("polygon", e))?;
            summary(format!("{}-gon, valid: {}", poly.n(), report.is_valid()));
            decided(json!({ "valid": report.is_valid(), "report": report }))
        }
        PolygonCmd::Area { polygon: path } => {
            let poly = polygon(&path)?;
            decided(json!({ "area": poly.area(), "sides": poly.n() }))
        }
        PolygonCmd::Regular { n, angle } => {
            let poly = build_regular(n, parse_angle(&angle)?).map_err(|e| CliError::invalid("polygon", e))?;
            summary(format!("regular {n}-gon with side length {:.12}", poly.side_length(0)));
            decided(PolygonFile::from_polygon(&poly))
        }
        PolygonCmd::Deform { angles, lengths } => {
            let target_angles = angles.split(',').map(parse_angle).collect::<Result<Vec<_>, _>>()?;
            let free_lengths = parse_list::<f64>(&lengths, "length")?;
            let sol = solve_closure(&DeformationParams { target_angles, free_lengths }, None)
                .map_err(|e| CliError::invalid("closure", e))?;
            summary(format!(
                "closed after {} iterations, residual {:.1e}, solved lengths {:?}",
                sol.iterations, sol.residual, sol.solved_lengths
            ));
            decided(PolygonFile::from_polygon(&sol.polygon))
        }
    }
}

fn trajectory_json(t: &Trajectory) -> Value {
    let events: Vec<Value> = t
        .events
        .iter()
        .map(|e| json!({ "side": e.side_label, "hit": e.hit_point.to_klein(), "arc_param": e.arc_param, "time": e.time }))
        .collect();
    json!({ "word": bounce_word(t), "events": events })
}

fn trajectory_figure(poly: &LabeledPolygon, t: &Trajectory) -> Figure {
    let mut fig = Figure::new();
    fig.polygon(poly.vertices(), "#222", "#fffbe6", 2.0);
    let mut pts = vec![t.start.base];
    pts.extend(t.events.iter().map(|e| e.hit_point));
    fig.path(&pts, "#c0392b", 1.0);
    fig.dot(&t.start.base, "#c0392b");
    for k in 0..poly.n() {
        let (a, b) = poly.side_segment(k);
        fig.label(&billiard_core::hyperbolic::midpoint(&a, &b), &(k + 1).to_string());
    }
    fig
}

fn run_simulate(path: &Path, start: &str, dir: f64, bounces: usize, svg: Option<PathBuf>) -> Result<Report, CliError> {
    let poly = polygon(path)?;
    let uv = parse_list::<f64>(start, "coordinate")?;
    let [u, v] = uv[..] else { return Err(CliError::Usage("--start takes two coordinates u,v".into())) };
    let p = HPoint::from_klein(u, v).map_err(|e| CliError::invalid("start", e))?;
    match simulate(&poly, p, dir, bounces) {
        Ok(t) => {
            if let Some(out) = svg {
                write_svg(&out, trajectory_figure(&poly, &t))?;
            }
            summary(format!("{} bounces: {}", t.events.len(), bounce_word(&t)));
            let mut v = trajectory_json(&t);
            v["status"] = json!("complete");
            decided(v)
        }
        Err(SimulationError::VertexHit { step, partial }) => {
            if let Some(out) = svg {
                write_svg(&out, trajectory_figure(&poly, &partial))?;
            }
            let mut v = trajectory_json(&partial);
            v["status"] = json!("vertex_hit");
            v["step"] = json!(step);
            undecided(v)
        }
        Err(e) => Err(CliError::invalid("simulation", e)),
    }
}

/// Exit-2 report for unfoldings that outrun double-double precision.
fn unfold_failure(e: UnfoldError) -> Result<Report, CliError> {
    match e {
        UnfoldError::PrecisionExceeded { .. } | UnfoldError::BudgetExceeded { .. } => {
            undecided(json!({ "result": "unknown", "message": e.to_string() }))
        }
        e => Err(CliError::invalid("word", e)),
    }
}

fn run_realize(path: &Path, w: &str, svg: Option<PathBuf>) -> Result<Report, CliError> {
    let poly = polygon(path)?;
    let w = word(w, &poly)?;
    let r = match realizable(&poly, &w) {
        Ok(r) => r,
        Err(e) => return unfold_failure(e),
    };
    if let Some(out) = svg {
        let mut fig = Figure::new();
        if let Ok(c) = unfold(&poly, &w) {
            for i in 0..=c.len() {
                fig.polygon(&c.copy_vertices(i), "#555", if i == c.frame_copy { "#fffbe6" } else { "none" }, 1.0);
            }
            if let Realizability::Yes { witness } = &r {
                let a = HPoint::from_klein(witness.chord.a[0] * 0.999_999, witness.chord.a[1] * 0.999_999);
                let b = HPoint::from_klein(witness.chord.b[0] * 0.999_999, witness.chord.b[1] * 0.999_999);
                if let (Ok(a), Ok(b)) = (a, b) {
                    fig.path(&[a, b], "#c0392b", 1.5);
                }
            }
        } else {
            fig.polygon(poly.vertices(), "#222", "#fffbe6", 2.0);
        }
        write_svg(&out, fig)?;
    }
    let label = match &r {
        Realizability::Yes { .. } => "yes",
        Realizability::No { .. } => "no",
        Realizability::Grazing { .. } => "grazing",
    };
    summary(format!("{w}: {label}"));
    match r {
        Realizability::Grazing { .. } => undecided(r),
        r => decided(r),
    }
}

fn run_classify(path: &Path, budget: &TilingBudget) -> Result<Report, CliError> {
    let poly = polygon(path)?;
    let v = classify(&poly, budget);
    let tag = match &v {
        RigidityVerdict::Rigid { .. } => "rigid",
        RigidityVerdict::Flexible { .. } => "flexible",
        RigidityVerdict::Unknown { .. } => "unknown",
    };
    summary(format!("verdict: {tag}"));
    match v {
        RigidityVerdict::Unknown { .. } => undecided(v),
        v => decided(v),
    }
}

fn run_tile(path: &Path, budget: &TilingBudget, svg: Option<PathBuf>) -> Result<Report, CliError> {
    let poly = polygon(path)?;
    let r = tiling_closure(&poly, budget);
    if let Some(out) = svg {
        let mut fig = Figure::new();
        for l in &r.lines {
            fig.line(&l.geodesic(), "#9aa", 0.6);
        }
        if let TilingStatus::Discrete { tile, .. } = &r.status {
            fig.polygon(tile.polygon.vertices(), "#2c7", "#dfd", 1.5);
        }
        fig.polygon(poly.vertices(), "#222", "none", 2.0);
        write_svg(&out, fig)?;
    }
    let mut v = to_value(&r);
    v["lines"] = json!(r.lines.len());
    summary(format!("closure depth {}, {} elements, {} lines", r.depth_reached, r.elements, r.lines.len()));
    match r.status {
        TilingStatus::BudgetExhausted { .. } => Ok(Report { value: v, decided: false }),
        _ => Ok(Report { value: v, decided: true }),
    }
}

fn cover_data(path: &Path) -> Result<BranchedCoverData, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::invalid("cover", e))
}

fn cone_failure(e: ConeError) -> CliError {
    match e {
        ConeError::InvalidCover(fails) => CliError::Invalid {
            kind: "invalid_cover",
            message: format!("cover fails {} check(s)", fails.len()),
            details: to_value(&fails),
        },
        e => CliError::invalid("cone", e),
    }
}

fn run_cone(cmd: ConeCmd) -> Result<Report, CliError> {
    match cmd {
        ConeCmd::Area { genus, angles } => {
            let cone_angles = parse_list::<Angle>(&angles, "angle")?;
            let data = ConeSurfaceData { genus, cone_angles };
            let a = cone_area(&data).map_err(cone_failure)?;
            decided(json!({ "surface": data, "area": a }))
        }
        ConeCmd::Double { polygon: path } => {
            let poly = polygon(&path)?;
            let d = double(&poly);
            let a = cone_area(&d).map_err(cone_failure)?;
            decided(json!({ "surface": d, "area": a }))
        }
        ConeCmd::OrbifoldArea { genus, orders } => {
            let sig = OrbifoldSignature::new(genus, parse_list::<u32>(&orders, "order")?);
            let a = orbifold_area(&sig).map_err(cone_failure)?;
            decided(json!({ "orbifold": sig, "area": a }))
        }
        ConeCmd::CheckCover { data } => {
            let d = cover_data(&data)?;
            match validate_cover(&d) {
                Ok(rep) => decided(json!({ "valid": true, "report": rep })),
                Err(ConeError::InvalidCover(fails)) => decided(json!({ "valid": false, "failures": fails })),
                Err(e) => Err(cone_failure(e)),
            }
        }
        ConeCmd::Bound { data } => {
            let b = bound_check(&cover_data(&data)?).map_err(cone_failure)?;
            summary(format!("k = {} < {} <= {}: {}", b.k, b.rhs, b.bound, b.holds));
            decided(b)
        }
    }
}

fn run(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Polygon(p) => run_polygon(p),
        Command::Simulate { polygon, start, dir, bounces, svg } => run_simulate(&polygon, &start, dir, bounces, svg),
        Command::Realize { polygon, word, svg } => run_realize(&polygon, &word, svg),
        Command::Diagonal { polygon: path, word: w } => {
            let poly = polygon(&path)?;
            let w = word(&w, &poly)?;
            match generalized_diagonal(&poly, &w) {
                Ok(d) => decided(d),
                Err(e) => unfold_failure(e),
            }
        }
        Command::Diagonals { polygon: path, max_len } => {
            let poly = polygon(&path)?;
            match enumerate_diagonals(&poly, max_len) {
                Ok(set) => {
                    summary(format!("{} diagonal words up to length {max_len}", set.len()));
                    decided(json!({ "max_len": max_len, "count": set.len(), "words": set }))
                }
                Err(e) => unfold_failure(e),
            }
        }
        Command::Classify { polygon, budget } => run_classify(&polygon, &budget.budget()),
        Command::Grammar { polygon: path, word: w } => {
            let poly = polygon(&path)?;
            let w = word(&w, &poly)?;
            let spec = GrammarSpec::from_polygon(&poly).map_err(|e| CliError::invalid("grammar", e))?;
            decided(grammar_check(&spec, &w))
        }
        Command::Compare { p1, p2, samples, len, seed, diagonal_len } => {
            let (a, b) = (polygon(&p1)?, polygon(&p2)?);
            if a.n() != b.n() {
                return Err(CliError::Usage(format!("polygons have {} and {} sides", a.n(), b.n())));
            }
            let rep = compare(&a, &b, &CompareConfig { samples, word_len: len, seed, diagonal_len });
            summary(format!("{} one-sided words", rep.one_sided_total));
            decided(rep)
        }
        Command::Tile { polygon, budget, svg } => run_tile(&polygon, &budget.budget(), svg),
        Command::Cone(c) => run_cone(c),
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&CliError::Usage(e.render().to_string().trim().to_string()).to_json());
            return ExitCode::from(1);
        }
    };
    if let Some(dir) = cli.out_dir {
        let _ = OUT_DIR.set(dir);
    }
    match run(cli.command) {
        Ok(Report { value, decided }) => {
            emit(&value);
            if decided {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            summary(format!("error: {e}"));
            emit(&e.to_json());
            ExitCode::from(1)
        }
    }
}
