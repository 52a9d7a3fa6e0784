//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use equidissect::balanced::{apply_transposition, clockwise_area, parallelogram_class};
use equidissect::coloring::{color_under, is_rainbow, AffineMap};
use equidissect::cycles::{class_of_lattice_line, decompose_mu, K4Class};
use equidissect::dissection::{lemma2_degree_check, validate, Dissection, Lemma2Report};
use equidissect::dyadic::{val2, Rational, Valuation};
use equidissect::geometry::{triangle_area, triangulate_by_ears, wedge, BrokenLine, Point, Polygon};
use equidissect::sampling::{
    random_balanced_polygon, random_dyadic_spread, random_lattice_line, random_lattice_polygon,
    random_map, random_point, random_rainbow_triangle, random_rational,
};
use equidissect::search::{enumerate_equidissections, GridSpec, SearchOptions, SearchSpace, SearchStatus};
use equidissect::tropical::chart_agreement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_equidissect");

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p(x: i64, y: i64) -> Point {
    Point::new(x, y)
}

fn polygon(pts: &[(i64, i64)]) -> Polygon {
    Polygon::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
}

fn unit_square() -> Polygon {
    polygon(&[(0, 0), (1, 0), (1, 1), (0, 1)])
}

fn within(start: Instant, limit: Duration, summary: String) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed > limit {
        Err(format!("{summary}; took {elapsed:.2?}, limit {limit:?}"))
    } else {
        Ok(format!("{summary} in {elapsed:.2?}"))
    }
}

/// Exponent of 2 in the prime factorization of `n`, by trial division.
fn factor_two_exponent(n: i64) -> i64 {
    let mut n = n.abs();
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            factors.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors.iter().filter(|&&f| f == 2).count() as i64
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let big = 1_000_000;
    for _ in 0..10_000 {
        let a = random_rational(&mut r, big);
        let b = random_rational(&mut r, big);
        let (va, vb) = (val2(&a), val2(&b));
        if !a.is_zero() && !b.is_zero() {
            if val2(&(&a * &b)) != va + vb {
                return Err(format!("product rule fails for {a}, {b}"));
            }
            let (Valuation::Finite(x), Valuation::Finite(y)) = (va, vb) else {
                unreachable!()
            };
            if val2(&(&a / &b)) != Valuation::Finite(x - y) {
                return Err(format!("quotient rule fails for {a}, {b}"));
            }
        }
        let vs = val2(&(&a + &b));
        if vs < va.min(vb) {
            return Err(format!("ultrametric inequality fails for {a}, {b}"));
        }
        if va != vb && vs != va.min(vb) {
            return Err(format!("strict ultrametric equality fails for {a}, {b}"));
        }
    }
    for _ in 0..1_000 {
        let n: i64 = r.gen_range(1..=1_000_000) * if r.gen_bool(0.5) { 1 } else { -1 };
        if val2(&Rational::from(n)) != Valuation::Finite(factor_two_exponent(n)) {
            return Err(format!("valuation of {n} disagrees with its factorization"));
        }
    }
    within(start, Duration::from_secs(5), "10^4 pairs, 10^3 integers".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut checked = 0;
    for _ in 0..10 {
        let map = random_map(&mut r, 20);
        for _ in 0..10_000 {
            let t = random_rainbow_triangle(&mut r, &map, 64);
            if !is_rainbow(&t[0], &t[1], &t[2], &map) {
                return Err(format!("sampler returned a non-rainbow triangle {t:?}"));
            }
            let area = triangle_area(&t);
            if !(val2(&area) <= -1) {
                return Err(format!("rainbow triangle {t:?} has area {area}"));
            }
            checked += 1;
        }
    }
    within(
        start,
        Duration::from_secs(30),
        format!("{checked} rainbow triangles over 10 maps, all ν2(area) ≤ -1"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    for _ in 0..1_000 {
        let a = random_point(&mut r, 50);
        let b = loop {
            let b = random_point(&mut r, 50);
            if b != a {
                break b;
            }
        };
        let dir = &b - &a;
        let mut seen = [false; 3];
        for _ in 0..100 {
            let t = random_dyadic_spread(&mut r, 50, 12);
            let point = &a + &dir.scale(&t);
            seen[color_under(&AffineMap::e(), &point).index()] = true;
        }
        if seen.iter().all(|&s| s) {
            return Err(format!("line through {a:?}, {b:?} has three colors"));
        }
    }
    within(start, Duration::from_secs(600), "10^3 lines x 10^2 points".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let two = Rational::from(2);
    let mut done = 0;
    let mut attempts = 0;
    while done < 200 {
        attempts += 1;
        if attempts > 10_000 {
            return Err(format!("only {done} triangulable polygons generated"));
        }
        let Some(poly) = random_lattice_polygon(&mut r, 12, 8) else {
            continue;
        };
        let mut picks = rng(attempts);
        let Some(tris) = triangulate_by_ears(&poly, |n| picks.gen_range(0..n)) else {
            continue;
        };
        let scaled_poly = Polygon::new(poly.vertices().iter().map(|v| v.scale(&two)).collect()).unwrap();
        let scaled: Vec<_> = tris.iter().map(|t| t.clone().map(|v| v.scale(&two))).collect();
        let d = Dissection::new(scaled_poly, scaled);
        for map in [AffineMap::e(), AffineMap::u(), AffineMap::v()] {
            match lemma2_degree_check(&d, &map) {
                Ok(Lemma2Report::Pass { degree: 0 }) => {}
                other => return Err(format!("{d:?} under {map:?}: {other:?}")),
            }
        }
        done += 1;
    }
    within(start, Duration::from_secs(600), "200 scaled triangulated polygons, degree 0 under E, U, V".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let odd: Vec<K4Class> = K4Class::odd_parallelogram_classes().to_vec();
    let grid: Vec<Point> = (0..=4).flat_map(|x| (0..=4).map(move |y| p(x, y))).collect();
    let (mut even_count, mut odd_count) = (0, 0);
    for a in &grid {
        for b in &grid {
            for c in &grid {
                let d = a + &(c - b);
                let in_range = |v: &Rational| *v >= Rational::zero() && *v <= Rational::from(4);
                if !in_range(&d.x) || !in_range(&d.y) {
                    continue;
                }
                let area = wedge(&(b - a), &(c - b)).abs();
                if area.is_zero() {
                    continue;
                }
                let corners = [a.clone(), b.clone(), c.clone(), d];
                let class = parallelogram_class(&corners).map_err(|e| e.to_string())?.class;
                let direct = class_of_lattice_line(&BrokenLine::new(corners.to_vec())).unwrap();
                if class != direct {
                    return Err(format!("{corners:?}: class mismatch"));
                }
                if area.integer_is_odd() == Some(true) {
                    odd_count += 1;
                    if !odd.contains(&class) {
                        return Err(format!("{corners:?}: odd area, class {class:?}"));
                    }
                } else {
                    even_count += 1;
                    if !class.is_zero() {
                        return Err(format!("{corners:?}: even area, class {class:?}"));
                    }
                }
            }
        }
    }
    within(
        start,
        Duration::from_secs(10),
        format!("{even_count} even and {odd_count} odd parallelograms"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    for _ in 0..10_000 {
        let n = r.gen_range(3..=12);
        let line = random_lattice_line(&mut r, n, 10);
        let i = r.gen_range(0..n - 1);
        let moved = apply_transposition(&line, i).map_err(|e| e.to_string())?;
        let sides = line.sides();
        let (vi, vj) = (&sides[i], &sides[(i + 1) % n]);
        let expected = clockwise_area(&line) - wedge(vj, vi);
        if clockwise_area(&moved) != expected {
            return Err(format!("area identity fails on {line:?}, i = {i}"));
        }
        let li = line.vertex(i).clone();
        let parallelogram = BrokenLine::new(vec![
            li.clone(),
            line.vertex(i + 1).clone(),
            line.vertex(i + 2).clone(),
            &li + vj,
        ]);
        let lhs = class_of_lattice_line(&line).unwrap() - class_of_lattice_line(&moved).unwrap();
        if lhs != class_of_lattice_line(&parallelogram).unwrap() {
            return Err(format!("class identity fails on {line:?}, i = {i}"));
        }
    }
    within(start, Duration::from_secs(600), "10^4 broken lines".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut r = rng(7);
    let mut done = 0;
    let mut skipped = 0;
    while done < 500 {
        let pairs = r.gen_range(2..=5);
        let Some(poly) = random_balanced_polygon(&mut r, pairs, 4) else {
            skipped += 1;
            if skipped > 100 {
                return Err("generator keeps failing".into());
            }
            continue;
        };
        let class = class_of_lattice_line(poly.boundary()).unwrap();
        let mu = decompose_mu(class).map_err(|e| format!("{poly:?}: {e}"))?;
        let Some(odd) = poly.area().integer_is_odd() else {
            return Err(format!("{poly:?}: non-integer area"));
        };
        if odd != (mu.sum().rem_euclid(2) == 1) {
            return Err(format!("{poly:?}: area parity differs from μ sum {:?}", mu.0));
        }
        done += 1;
    }
    within(start, Duration::from_secs(600), format!("500 balanced polygons ({skipped} generator skips)"))
}

fn sorted_cut(triangles: &[[(i64, i64, i64, i64); 3]]) -> Vec<[Point; 3]> {
    let mut cut: Vec<[Point; 3]> = triangles
        .iter()
        .map(|t| {
            let mut t = t.map(|(a, b, c, d)| Point::new(Rational::new(a, b), Rational::new(c, d)));
            t.sort();
            t
        })
        .collect();
    cut.sort();
    cut
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let options = SearchOptions::default();
    let three = SearchSpace::with_grid(unit_square(), 3, GridSpec::MaxDenominator(4)).unwrap();
    let out3 = enumerate_equidissections(&three, options).unwrap();
    if out3.status != SearchStatus::Exhausted {
        return Err(format!("3-piece search ended with {:?}", out3.status));
    }
    if !out3.dissections.is_empty() {
        return Err(format!("3-piece search found {:?}", out3.dissections[0]));
    }
    let two = SearchSpace::with_grid(unit_square(), 2, GridSpec::Denominator(1)).unwrap();
    let out2 = enumerate_equidissections(&two, options).unwrap();
    let expected = vec![
        sorted_cut(&[[(0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 1, 1)], [(0, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1)]]),
        sorted_cut(&[[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1)], [(1, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1)]]),
    ];
    let mut got: Vec<Vec<[Point; 3]>> = out2.dissections.iter().map(|d| d.triangles.clone()).collect();
    got.sort();
    let mut expected_sorted = expected;
    expected_sorted.sort();
    if out2.status != SearchStatus::Exhausted || got != expected_sorted {
        return Err(format!("2-piece search returned {got:?}"));
    }
    let four = SearchSpace::with_grid(unit_square(), 4, GridSpec::Denominator(2)).unwrap();
    let out4 = enumerate_equidissections(&four, options).unwrap();
    let center = sorted_cut(&[
        [(0, 1, 0, 1), (1, 1, 0, 1), (1, 2, 1, 2)],
        [(1, 1, 0, 1), (1, 1, 1, 1), (1, 2, 1, 2)],
        [(1, 1, 1, 1), (0, 1, 1, 1), (1, 2, 1, 2)],
        [(0, 1, 1, 1), (0, 1, 0, 1), (1, 2, 1, 2)],
    ]);
    if !out4.dissections.iter().any(|d| d.triangles == center) {
        return Err("4-piece search missed the center cut".into());
    }
    for d in out2.dissections.iter().chain(&out4.dissections) {
        if !validate(d).is_ok() {
            return Err(format!("search returned an invalid cut {d:?}"));
        }
    }
    within(
        start,
        Duration::from_secs(600),
        format!(
            "3 pieces: none ({} nodes, exhausted); 2 pieces: the two diagonals; 4 pieces: {} cuts incl. center",
            out3.nodes,
            out4.dissections.len()
        ),
    )
}

fn run_cli(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("binary runs");
    if let Some(input) = stdin {
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn polygon_json(pts: &[(&str, &str)]) -> String {
    let vertices: Vec<Value> = pts.iter().map(|(x, y)| serde_json::json!([x, y])).collect();
    serde_json::json!({ "vertices": vertices }).to_string()
}

fn criterion_9() -> Outcome {
    let cases: [(&str, String, Value); 5] = [
        (
            "unit square",
            polygon_json(&[("0", "0"), ("1", "0"), ("1", "1"), ("0", "1")]),
            serde_json::json!({ "kind": "NoOddEquidissection" }),
        ),
        (
            "area-5 hexagon",
            polygon_json(&[("0", "0"), ("2", "0"), ("3", "1"), ("3", "2"), ("1", "2"), ("0", "1")]),
            serde_json::json!({ "kind": "NoOddEquidissection" }),
        ),
        (
            "triangle",
            polygon_json(&[("0", "0"), ("1", "0"), ("0", "1")]),
            serde_json::json!({ "kind": "NotApplicable", "reason": "unbalanced" }),
        ),
        (
            "2x1 rectangle",
            polygon_json(&[("0", "0"), ("2", "0"), ("2", "1"), ("0", "1")]),
            serde_json::json!({ "kind": "NotApplicable", "reason": "evenArea" }),
        ),
        (
            "half-integer square",
            polygon_json(&[("0", "0"), ("1/2", "0"), ("1/2", "1/2"), ("0", "1/2")]),
            serde_json::json!({ "kind": "NotApplicable", "reason": "notLattice" }),
        ),
    ];
    for (name, input, expected) in &cases {
        let (code, out) = run_cli(&["certify"], Some(input));
        let v: Value = serde_json::from_str(&out).map_err(|e| format!("{name}: {e}"))?;
        if code != 0 || &v["conclusion"] != expected {
            return Err(format!("{name}: exit {code}, conclusion {}", v["conclusion"]));
        }
    }
    Ok("certify verdicts correct for all five polygons".into())
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut r = rng(10);
    for _ in 0..1_000 {
        let point = Point::new(random_dyadic_spread(&mut r, 1000, 10), random_dyadic_spread(&mut r, 1000, 10));
        if !chart_agreement(&point) {
            return Err(format!("momentum region disagrees with the coloring at {point:?}"));
        }
    }
    within(start, Duration::from_secs(600), "10^3 random points".into())
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("square.json");
    std::fs::write(&path, polygon_json(&[("0", "0"), ("1", "0"), ("1", "1"), ("0", "1")])).unwrap();
    let file = path.to_str().unwrap();
    let mut total = 0;
    for (pieces, denominator) in [("2", "1"), ("4", "2")] {
        let args = ["search", file, "--pieces", pieces, "--denominator", denominator];
        let (code1, first) = run_cli(&args, None);
        let (code2, second) = run_cli(&args, None);
        if code1 != 0 || code2 != 0 {
            return Err(format!("search exited with {code1}, {code2}"));
        }
        if first != second {
            return Err("search output differs between runs".into());
        }
        for cut in first.lines() {
            let (code, verdict) = run_cli(&["verify"], Some(cut));
            let v: Value = serde_json::from_str(&verdict).map_err(|e| e.to_string())?;
            if code != 0 || v["verdict"]["verdict"] != "Ok" || v["pieceArea"].is_null() {
                return Err(format!("verify rejected {cut}: {verdict}"));
            }
            total += 1;
        }
    }
    let (_, c1) = run_cli(&["certify", file], None);
    let (_, c2) = run_cli(&["certify", file], None);
    if c1 != c2 {
        return Err("certify output differs between runs".into());
    }
    Ok(format!("{total} emitted cuts re-verified; outputs byte-identical across runs"))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("valuation axioms", criterion_1),
        ("rainbow triangles have ν2(area) ≤ -1", criterion_2),
        ("lines carry at most two colors", criterion_3),
        ("boundary degree vanishes for 2-integral cuts", criterion_4),
        ("parallelogram class dichotomy", criterion_5),
        ("transposition identities", criterion_6),
        ("balanced polygons: area parity equals μ sum", criterion_7),
        ("desk-scale search on the unit square", criterion_8),
        ("certificate verdicts", criterion_9),
        ("momentum chart agreement", criterion_10),
        ("search output re-verifies and is deterministic", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
