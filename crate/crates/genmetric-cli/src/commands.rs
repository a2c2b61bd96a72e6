//! Subcommands other than `solve`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use genmetric::alignment::{
    best_alignment, multi_score, score_pair, space_from_words, validate_scheme, ScoringScheme,
};
use genmetric::fixedpoint::maps::{self, map_entries};
use genmetric::sequences::{check_limit, check_special_limit, classify_cauchy, DistanceEvaluator};
use genmetric::space::{
    check_axioms, induce_metric, lift_to_n, shift_by_constant, FiniteSpace, Tolerance,
};
use genmetric::spaces::{
    build_space, catalog_entries, CatalogName, CatalogSpec, RealFamily, RealPoint, RealSpace,
};
use genmetric::topology::generate_topology;
use genmetric::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Construction, Report, SequenceArgs, SpaceArgs};

pub(crate) const EVIDENCE: &str =
    "numerical evidence over the tail window of a finite prefix, not a proof";

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<Value> {
    Ok(serde_json::to_value(value)?)
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub(crate) fn load_space_file(path: &Path) -> Result<FiniteSpace> {
    FiniteSpace::from_json(&read(path)?)
        .with_context(|| format!("invalid space file {}", path.display()))
}

pub(crate) fn catalog_space(name: &str, params: &[f64]) -> Result<FiniteSpace> {
    let name = CatalogName::parse(name).ok_or_else(|| anyhow!("unknown catalog space `{name}`"))?;
    Ok(build_space(&CatalogSpec::new(name, params.to_vec()))?)
}

fn load_space(args: &SpaceArgs) -> Result<FiniteSpace> {
    match (&args.space, &args.catalog) {
        (Some(path), _) => load_space_file(path),
        (None, Some(name)) => catalog_space(name, &args.params),
        (None, None) => bail!("one of --space or --catalog is required"),
    }
}

fn space_report(space: &FiniteSpace) -> Result<Report> {
    Ok(Report {
        json: to_json(&space.to_file())?,
        text: space.to_json() + "\n",
        passed: true,
    })
}

pub(crate) fn check(args: &SpaceArgs, tol: Tolerance) -> Result<Report> {
    let space = load_space(args)?;
    let report = check_axioms(&space, tol);
    let mut text = if report.overall {
        format!("all axioms pass ({})\n", report.kind_name)
    } else {
        format!("axioms fail ({})\n", report.kind_name)
    };
    for e in &report.entries {
        let _ = write!(
            text,
            "  {:<12} {:<4} {} instances",
            e.axiom,
            if e.holds { "pass" } else { "FAIL" },
            e.instances
        );
        if e.derived {
            text.push_str(" (derived)");
        }
        if let Some(w) = &e.witness {
            let _ = write!(text, ", witness {w}");
        }
        text.push('\n');
    }
    Ok(Report {
        json: to_json(&report)?,
        text,
        passed: report.overall,
    })
}

pub(crate) fn derive(
    construction: Construction,
    args: &SpaceArgs,
    n: Option<usize>,
    r: Option<f64>,
) -> Result<Report> {
    let space = load_space(args)?;
    let derived = match construction {
        Construction::Induce => induce_metric(&space)?,
        Construction::Lift => lift_to_n(&space, n.ok_or_else(|| anyhow!("lift needs --n"))?)?,
        Construction::Shift => {
            shift_by_constant(&space, r.ok_or_else(|| anyhow!("shift needs --r"))?)?
        }
    };
    space_report(&derived)
}

fn read_words(path: &Path) -> Result<Vec<String>> {
    Ok(read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

pub(crate) fn align(
    scheme_path: &Path,
    words_path: Option<&Path>,
    as_space: Option<usize>,
    inline: &[String],
) -> Result<Report> {
    let scheme = ScoringScheme::from_json(&read(scheme_path)?)
        .with_context(|| format!("invalid scheme file {}", scheme_path.display()))?;
    let mut words = match words_path {
        Some(p) => read_words(p)?,
        None => Vec::new(),
    };
    words.extend(inline.iter().cloned());
    if let Some(n) = as_space {
        return space_report(&space_from_words(&words, &scheme, n)?);
    }
    if words.len() < 2 {
        bail!("align needs at least two words, got {}", words.len());
    }
    let verdict = validate_scheme(&scheme);
    let mut text = String::new();
    let mut json = json!({ "scheme": to_json(&verdict)?, "words": words });
    if let [x, y] = words.as_slice() {
        let best = best_alignment(x, y, &scheme)?;
        let _ = writeln!(text, "score {}", best.score);
        let _ = writeln!(text, "  {}\n  {}", best.aligned_x, best.aligned_y);
        json["score"] = json!(best.score);
        json["alignment"] = to_json(&best)?;
    } else {
        let total = multi_score(&words, &scheme)?;
        let _ = writeln!(text, "sum of pairs score {total}");
        let mut pairs = Vec::new();
        for (i, x) in words.iter().enumerate() {
            for y in &words[i + 1..] {
                let s = score_pair(x, y, &scheme)?;
                let _ = writeln!(text, "  {x} {y}: {s}");
                pairs.push(json!({ "x": x, "y": y, "score": s }));
            }
        }
        json["score"] = json!(total);
        json["pairs"] = Value::Array(pairs);
    }
    if !verdict.valid {
        text.push_str(
            "warning: the scheme is not valid, so scores need not form a strong partial metric\n",
        );
        for v in &verdict.violations {
            let _ = writeln!(text, "  {v}");
        }
    }
    Ok(Report {
        json,
        text,
        passed: true,
    })
}

pub(crate) fn topology(args: &SpaceArgs) -> Result<Report> {
    let space = load_space(args)?;
    let report = generate_topology(&space)?;
    let mut text = format!("elements: {}\n", report.elements.join(", "));
    let _ = writeln!(text, "open sets ({}):", report.open_sets.len());
    for set in &report.open_sets {
        let _ = writeln!(text, "  {{{}}}", set.join(", "));
    }
    text.push_str("separation:\n");
    for (name, holds, witness) in [
        ("T0", report.t0, &report.t0_witness),
        ("T1", report.t1, &report.t1_witness),
        ("T2", report.t2, &report.t2_witness),
    ] {
        let _ = write!(text, "  {name}  {}", if holds { "yes" } else { "no" });
        if let Some([a, b]) = witness {
            let _ = write!(text, "  witness ({a}, {b})");
        }
        text.push('\n');
    }
    Ok(Report {
        json: to_json(&report)?,
        text,
        passed: true,
    })
}

fn sequence_report<E: DistanceEvaluator>(
    eval: &E,
    points: &[E::Point],
    limits: &[E::Point],
    tol: Tolerance,
    window: Option<usize>,
) -> Result<Report> {
    let verdict = classify_cauchy(eval, points, tol, window)?;
    let mut text = format!(
        "{} (central distance {}, tail deviation {}, window {})\n",
        if verdict.is_cauchy {
            "Cauchy"
        } else {
            "not Cauchy"
        },
        verdict.central_distance,
        verdict.max_tail_deviation,
        verdict.window
    );
    let mut candidates = Vec::new();
    for c in limits {
        let limit = check_limit(eval, points, c, tol, window)?;
        let special = match check_special_limit(eval, points, c, tol, window) {
            Ok(b) => b,
            Err(Error::NotCauchy) => false,
            Err(e) => return Err(e.into()),
        };
        let label = eval.label(c);
        let _ = writeln!(
            text,
            "  {label}: limit {}, special limit {}",
            if limit { "yes" } else { "no" },
            if special { "yes" } else { "no" }
        );
        candidates.push(json!({ "candidate": label, "limit": limit, "special_limit": special }));
    }
    let _ = writeln!(text, "{EVIDENCE}");
    let labels: Vec<String> = points.iter().map(|p| eval.label(p)).collect();
    Ok(Report {
        json: json!({
            "candidates": candidates,
            "evidence": EVIDENCE,
            "points": labels,
            "verdict": to_json(&verdict)?,
        }),
        text,
        passed: verdict.is_cauchy,
    })
}

pub(crate) fn sequence(args: &SequenceArgs, tol: Tolerance) -> Result<Report> {
    if let Some(family) = &args.real {
        let family =
            RealFamily::parse(family).ok_or_else(|| anyhow!("unknown real family `{family}`"))?;
        let eval = RealSpace::new(family, args.arity)?;
        let map = maps::by_name(
            args.map
                .as_deref()
                .ok_or_else(|| anyhow!("--real needs --map"))?,
            &args.map_params,
        )?;
        let x0: RealPoint = args
            .x0
            .as_deref()
            .ok_or_else(|| anyhow!("--real needs --x0"))?
            .parse()?;
        let mut points = vec![x0];
        while points.len() < args.len {
            let next = map
                .apply(points.last().expect("nonempty"))
                .map_err(|e| anyhow!("{}: {e}", map.name()))?;
            points.push(next);
        }
        let limits = args
            .limits
            .iter()
            .map(|l| l.parse::<RealPoint>())
            .collect::<Result<Vec<_>, _>>()?;
        return sequence_report(&eval, &points, &limits, tol, args.window);
    }
    let space = load_space(&args.space)?;
    let text = match (&args.points, &args.points_file) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => read(path)?,
        (None, None) => bail!("one of --points, --points-file or --real is required"),
    };
    let labels: Vec<String> =
        serde_json::from_str(&text).context("points must be a JSON array of labels")?;
    let points = space.indices_of(&labels)?;
    let limits = space.indices_of(&args.limits)?;
    sequence_report(&space, &points, &limits, tol, args.window)
}

pub(crate) fn catalog(name: Option<&str>, params: &[f64], list_maps: bool) -> Result<Report> {
    if let Some(name) = name {
        return space_report(&catalog_space(name, params)?);
    }
    let mut text = String::new();
    let json = if list_maps {
        let entries = map_entries();
        for e in &entries {
            let _ = writeln!(text, "{:<26} {:<6} {}", e.name, e.params, e.description);
        }
        to_json(&entries)?
    } else {
        let entries = catalog_entries();
        for e in &entries {
            let _ = writeln!(text, "{:<22} {:<28} {}", e.name, e.params, e.kind);
        }
        to_json(&entries)?
    };
    Ok(Report {
        json,
        text,
        passed: true,
    })
}
