//! `equidissect`: command-line front end. Every subcommand prints JSON
//! (CSV for `momentum`) on standard output and exits with 0 on success,
//! 1 on a failed precondition or verdict, 2 on malformed input.

mod io;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use equidissect::balanced::{certify, pair_edges, trace_refs};
use equidissect::coloring::color_under;
use equidissect::cycles::{class_of_lattice_line, decompose_mu, degree_of_line};
use equidissect::dissection::{equal_area_check, lemma2_degree_check, validate, Dissection};
use equidissect::search::{
    enumerate_equidissections, GridSpec, SearchOptions, SearchSpace, SearchStatus,
    DEFAULT_BUDGET,
};
use equidissect::tropical::{
    momentum_csv, momentum_p2, momentum_svg, sample_line_image, torus_csv, ProjectivePoint,
};
use equidissect::{val2, BrokenLine, Point, Polygon, Rational};
use serde_json::{json, Value};

use crate::io::{line, parse_map, read_json, with_refs, CliResult, Failure};

#[derive(Parser)]
#[command(name = "equidissect", version, about = "Exact checks for equal-area cuts of lattice polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 2-adic valuation of each rational ("p/q" or "p").
    Valuate {
        #[arg(required = true, allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Color of the point (x, y) under an area-preserving map.
    Color {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        map: MapArg,
    },
    /// Degree in K3 of a closed broken line, JSON {"vertices": [...]}.
    Degree {
        input: Option<PathBuf>,
        #[command(flatten)]
        map: MapArg,
    },
    /// Class in the cycle space of K4 of a closed lattice broken line.
    Class { input: Option<PathBuf> },
    /// Edge pairing of a polygon, or null when it is not balanced.
    Balanced { input: Option<PathBuf> },
    /// Certificate that a polygon admits no odd equal-area cut.
    Certify { input: Option<PathBuf> },
    /// Validates a dissection JSON {"polygon": ..., "triangles": [...]}.
    Verify {
        input: Option<PathBuf>,
        #[command(flatten)]
        map: MapArg,
    },
    /// Exhaustive search for equal-area cuts on a rational grid.
    Search(SearchArgs),
    /// Momentum-map images as CSV, with an optional SVG plot.
    Momentum(MomentumArgs),
}

#[derive(Args)]
struct MapArg {
    /// E, U, V, or a JSON map {"matrix": [[a,b],[c,d]], "translation": [e,f]}.
    #[arg(long, default_value = "E")]
    map: String,
}

#[derive(Args)]
#[command(group(ArgGroup::new("grid").args(["denominator", "max_denominator"])))]
struct SearchArgs {
    /// Polygon JSON {"vertices": [...]}.
    input: Option<PathBuf>,
    #[arg(long)]
    pieces: usize,
    /// Coordinates with denominator dividing D.
    #[arg(long, default_value_t = 1)]
    denominator: u32,
    /// Coordinates with denominator at most D.
    #[arg(long)]
    max_denominator: Option<u32>,
    /// Cap on candidate triangles examined.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Emit every cut (default).
    #[arg(long, conflicts_with = "first_only")]
    emit_all: bool,
    /// Stop after the first cut.
    #[arg(long)]
    first_only: bool,
    /// Keep one cut per orbit of the polygon's symmetries.
    #[arg(long)]
    symmetry: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["line", "points", "torus"])))]
struct MomentumArgs {
    /// Sample the line ax + by + cz = 0.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_hyphen_values = true)]
    line: Option<Vec<String>>,
    /// Number of samples on the line.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// JSON list of projective points [[x, y, z], ...].
    #[arg(long)]
    points: Option<PathBuf>,
    /// JSON list of torus points [[x, y], ...]; prints valuations.
    #[arg(long)]
    torus: Option<PathBuf>,
    /// Also write an SVG scatter plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn rational(s: &str) -> CliResult<Rational> {
    s.parse().map_err(|e: equidissect::Error| Failure::malformed(e.to_string()))
}

fn precondition<T>(r: equidissect::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure::precondition(&e))
}

/// Output lines of a successful run.
type Lines = Vec<String>;

fn run(cli: Cli) -> CliResult<Lines> {
    match cli.command {
        Command::Valuate { values } => {
            let results = values
                .iter()
                .map(|s| {
                    let q = rational(s)?;
                    Ok(json!({ "input": q, "valuation": val2(&q) }))
                })
                .collect::<CliResult<Vec<Value>>>()?;
            Ok(vec![line(&json!({ "results": results, "traceRefs": [] }))])
        }
        Command::Color { x, y, map } => {
            let map = parse_map(&map.map)?;
            let p = Point::new(rational(&x)?, rational(&y)?);
            let out = json!({
                "point": p,
                "image": map.apply(&p),
                "color": color_under(&map, &p).to_string(),
                "traceRefs": [],
            });
            Ok(vec![line(&out)])
        }
        Command::Degree { input, map } => {
            let map = parse_map(&map.map)?;
            let l: BrokenLine = read_json(input.as_deref())?;
            if l.vertices.is_empty() {
                return Err(Failure::malformed("broken line has no vertices"));
            }
            let out = json!({
                "degree": degree_of_line(&l, &map),
                "map": map,
                "traceRefs": [trace_refs::DEGREE_VANISHES],
            });
            Ok(vec![line(&out)])
        }
        Command::Class { input } => {
            let l: BrokenLine = read_json(input.as_deref())?;
            if l.vertices.is_empty() {
                return Err(Failure::malformed("broken line has no vertices"));
            }
            let class = precondition(class_of_lattice_line(&l))?;
            let out = json!({
                "class": class,
                "mu": decompose_mu(class).ok(),
                "traceRefs": [trace_refs::LATTICE_CLASS],
            });
            Ok(vec![line(&out)])
        }
        Command::Balanced { input } => {
            let polygon: Polygon = read_json(input.as_deref())?;
            let pairing = pair_edges(&polygon);
            let out = json!({
                "balanced": pairing.is_some(),
                "pairing": pairing,
                "traceRefs": [trace_refs::BALANCED_PARITY],
            });
            Ok(vec![line(&out)])
        }
        Command::Certify { input } => {
            let polygon: Polygon = read_json(input.as_deref())?;
            Ok(vec![line(&with_refs(&certify(&polygon), &[]))])
        }
        Command::Verify { input, map } => {
            let map = parse_map(&map.map)?;
            let d: Dissection = read_json(input.as_deref())?;
            let verdict = validate(&d);
            if !verdict.is_ok() {
                let message = format!("dissection is invalid: {}", verdict.kind());
                let details = serde_json::to_value(&verdict).expect("verdicts serialize");
                return Err(Failure::new(1, verdict.kind(), message, details));
            }
            let (piece_area, distinct) = match equal_area_check(&d) {
                Ok(a) => (Some(a), None),
                Err(e) => (None, Some(e.areas)),
            };
            let degree = lemma2_degree_check(&d, &map).expect("validated above");
            let out = json!({
                "verdict": verdict,
                "pieces": d.triangles.len(),
                "pieceArea": piece_area,
                "distinctAreas": distinct,
                "degreeCheck": degree,
                "traceRefs": [trace_refs::DEGREE_VANISHES],
            });
            Ok(vec![line(&out)])
        }
        Command::Search(args) => search(args),
        Command::Momentum(args) => momentum(args),
    }
}

fn search(args: SearchArgs) -> CliResult<Lines> {
    let polygon: Polygon = read_json(args.input.as_deref())?;
    let spec = match args.max_denominator {
        Some(d) => GridSpec::MaxDenominator(d),
        None => GridSpec::Denominator(args.denominator),
    };
    let space = precondition(SearchSpace::with_grid(polygon, args.pieces, spec))?
        .with_symmetry_reduction(args.symmetry);
    let options = SearchOptions {
        budget: args.budget,
        first_only: args.first_only && !args.emit_all,
    };
    let outcome = precondition(enumerate_equidissections(&space, options))?;
    let mut lines: Lines = outcome
        .dissections
        .iter()
        .map(|d| line(&with_refs(d, &[])))
        .collect();
    eprintln!(
        "{} cut(s), {} candidate triangles, status {:?}",
        outcome.dissections.len(),
        outcome.nodes,
        outcome.status
    );
    if outcome.status == SearchStatus::BudgetExceeded {
        let failure = Failure::new(
            1,
            "BudgetExceeded",
            format!("budget of {} candidate triangles exhausted; results above are partial", args.budget),
            json!({ "partialResults": outcome.dissections.len(), "nodes": outcome.nodes }),
        );
        lines.push(line(&failure.body));
        for l in &lines {
            println!("{l}");
        }
        return Err(Failure { code: 1, body: Value::Null });
    }
    Ok(lines)
}

fn momentum(args: MomentumArgs) -> CliResult<Lines> {
    if let Some(path) = &args.torus {
        let raw: Vec<[Rational; 2]> = read_json(Some(path))?;
        let points: Vec<Point> = raw.into_iter().map(Point::from).collect();
        let csv = precondition(torus_csv(&points))?;
        return Ok(vec![csv.trim_end().to_string()]);
    }
    let rows = if let Some(coeffs) = &args.line {
        let [a, b, c] = [0, 1, 2].map(|i| rational(&coeffs[i]));
        precondition(sample_line_image(&a?, &b?, &c?, args.count))?
    } else {
        let raw: Vec<[Rational; 3]> = read_json(args.points.as_deref())?;
        raw.into_iter()
            .map(|c| {
                let p = precondition(ProjectivePoint::try_from(c))?;
                let m = momentum_p2(&p);
                Ok((p, m))
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    if let Some(path) = &args.svg {
        let images: Vec<_> = rows.iter().map(|r| r.1.clone()).collect();
        fs::write(path, momentum_svg(&images)).map_err(|e| {
            Failure::new(1, "Io", format!("cannot write {}: {e}", path.display()), Value::Null)
        })?;
    }
    Ok(vec![momentum_csv(&rows).trim_end().to_string()])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if !failure.body.is_null() {
                println!("{}", line(&failure.body));
            }
            ExitCode::from(failure.code)
        }
    }
}
