//! The `solve` subcommand and its JSON problem description.
//!
//! ```json
//! {"problem": "fixed_point",
//!  "space": {"real": "max_partial", "lo": 0, "hi": 1},
//!  "f": {"map": "linear", "params": [0.5]},
//!  "x0": 1}
//! ```
//!
//! Spaces are closed-form real families (`real`, optional `arity`, `lo`,
//! `hi`), space files (`file`, relative to the config) or catalog entries
//! (`catalog`, `params`). Maps on real families are built-in maps by name;
//! maps on finite spaces are `table` objects from labels to labels.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use genmetric::fixedpoint::{
    find_coincidence_point, find_common_fixed_point, find_fixed_point, maps, Map, Route,
    SolveOptions, SolveResult,
};
use genmetric::sequences::DistanceEvaluator;
use genmetric::space::{FiniteSpace, Tolerance};
use genmetric::spaces::{format_real, RealFamily, RealPoint, RealSpace};
use serde::{Deserialize, Serialize};

use crate::commands::{catalog_space, load_space_file, read, to_json, EVIDENCE};
use crate::{Report, SolveArgs};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    problem: Problem,
    space: SpaceConfig,
    /// Codomain of a coincidence problem; defaults to `space`.
    #[serde(default)]
    codomain: Option<SpaceConfig>,
    f: MapConfig,
    #[serde(default)]
    g: Option<MapConfig>,
    #[serde(default)]
    selector: Option<MapConfig>,
    x0: Label,
    #[serde(default)]
    y0: Option<Label>,
    #[serde(default)]
    route: Option<RouteName>,
    #[serde(default)]
    max_iter: Option<usize>,
    #[serde(default)]
    window: Option<usize>,
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    r: Option<f64>,
    #[serde(default, rename = "A")]
    a: Option<f64>,
}

#[allow(clippy::enum_variant_names)]
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Problem {
    FixedPoint,
    CommonFixedPoint,
    CoincidencePoint,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RouteName {
    Partial,
    Strong,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpaceConfig {
    Real {
        real: String,
        #[serde(default = "two")]
        arity: usize,
        lo: Option<f64>,
        hi: Option<f64>,
    },
    File {
        file: PathBuf,
    },
    Catalog {
        catalog: String,
        #[serde(default)]
        params: Vec<f64>,
    },
}

fn two() -> usize {
    2
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MapConfig {
    Named {
        map: String,
        #[serde(default)]
        params: Vec<f64>,
    },
    Table {
        table: BTreeMap<String, String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Label {
    Text(String),
    Number(f64),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(x) => format_real(*x),
        }
    }
}

enum Carrier {
    Real(RealSpace),
    Finite(FiniteSpace),
}

fn load(cfg: &SpaceConfig, base: &Path) -> Result<Carrier> {
    Ok(match cfg {
        SpaceConfig::Real {
            real,
            arity,
            lo,
            hi,
        } => {
            let family =
                RealFamily::parse(real).ok_or_else(|| anyhow!("unknown real family `{real}`"))?;
            let space = RealSpace::new(family, *arity)?;
            Carrier::Real(match (lo, hi) {
                (Some(lo), Some(hi)) => space.with_bounds(*lo, *hi)?,
                (None, None) => space,
                _ => bail!("give both `lo` and `hi`, or neither"),
            })
        }
        SpaceConfig::File { file } => Carrier::Finite(load_space_file(&base.join(file))?),
        SpaceConfig::Catalog { catalog, params } => {
            Carrier::Finite(catalog_space(catalog, params)?)
        }
    })
}

/// Point parsing and map construction for one kind of carrier.
trait Points: DistanceEvaluator + Sized {
    fn point(&self, label: &Label) -> Result<Self::Point>;
    fn map_to(&self, codomain: &Self, name: &str, cfg: &MapConfig) -> Result<Map<Self::Point>>;
}

impl Points for RealSpace {
    fn point(&self, label: &Label) -> Result<RealPoint> {
        Ok(label.text().parse()?)
    }

    fn map_to(&self, _codomain: &Self, name: &str, cfg: &MapConfig) -> Result<Map<RealPoint>> {
        match cfg {
            MapConfig::Named { map, params } => Ok(maps::by_name(map, params)?),
            MapConfig::Table { .. } => bail!("map `{name}`: table maps need a finite space"),
        }
    }
}

impl Points for FiniteSpace {
    fn point(&self, label: &Label) -> Result<usize> {
        let text = label.text();
        self.index_of(&text)
            .ok_or_else(|| anyhow!("unknown element `{text}`"))
    }

    fn map_to(&self, codomain: &Self, name: &str, cfg: &MapConfig) -> Result<Map<usize>> {
        match cfg {
            MapConfig::Named { map, params } if map == "identity" && params.is_empty() => {
                Ok(maps::identity())
            }
            MapConfig::Named { map, .. } => {
                bail!("map `{name}`: only `identity` and table maps work on finite spaces, got `{map}`")
            }
            MapConfig::Table { table } => {
                let pairs: Vec<(&String, &String)> = table.iter().collect();
                Ok(maps::table_between(name, self, codomain, &pairs)?)
            }
        }
    }
}

fn need<'a>(m: &'a Option<MapConfig>, name: &str) -> Result<&'a MapConfig> {
    m.as_ref()
        .ok_or_else(|| anyhow!("this problem needs map `{name}`"))
}

fn run_problem<E>(
    cfg: &Config,
    dom: &E,
    cod: &E,
    opts: &SolveOptions,
) -> Result<SolveResult<E::Point>>
where
    E: Points,
{
    let x0 = dom.point(&cfg.x0)?;
    Ok(match cfg.problem {
        Problem::FixedPoint => find_fixed_point(&dom.map_to(dom, "f", &cfg.f)?, x0, dom, opts)?,
        Problem::CommonFixedPoint => {
            let f = dom.map_to(dom, "f", &cfg.f)?;
            let g = dom.map_to(dom, "g", need(&cfg.g, "g")?)?;
            let y0 = match &cfg.y0 {
                Some(y) => dom.point(y)?,
                None => x0.clone(),
            };
            find_common_fixed_point(&f, &g, x0, y0, dom, opts)?
        }
        Problem::CoincidencePoint => {
            let f = dom.map_to(cod, "f", &cfg.f)?;
            let g = dom.map_to(cod, "g", need(&cfg.g, "g")?)?;
            let selector = dom.map_to(dom, "selector", need(&cfg.selector, "selector")?)?;
            find_coincidence_point(&f, &g, &selector, dom, cod, x0, opts)?
        }
    })
}

fn render<P>(res: &SolveResult<P>) -> Result<Report>
where
    SolveResult<P>: Serialize,
{
    let json = to_json(res)?;
    let status = json["status"].as_str().unwrap_or_default().to_string();
    let route = json["route"].as_str().unwrap_or_default().to_string();
    let mut text = format!(
        "status: {status} (route {route}, {} iterations)\n",
        res.iterations
    );
    if !res.points.is_empty() {
        let pts: Vec<String> = res
            .points
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        let _ = writeln!(text, "{}", pts.join(", "));
    }
    if let Some(reason) = &res.reason {
        let _ = writeln!(text, "reason: {reason}");
    }
    text.push_str("checks:\n");
    for c in &res.checks {
        let _ = write!(
            text,
            "  {} {}",
            if c.passed { "pass" } else { "FAIL" },
            c.name
        );
        if let Some(d) = &c.detail {
            let _ = write!(text, " ({d})");
        }
        text.push('\n');
    }
    if !res.parameters.is_empty() {
        text.push_str("parameters:\n");
        for (k, p) in &res.parameters {
            let _ = writeln!(text, "  {k} = {} ({})", p.value, p.source);
        }
    }
    if !res.assumed.is_empty() {
        text.push_str("assumed:\n");
        for a in &res.assumed {
            let _ = writeln!(text, "  {a}");
        }
    }
    let _ = writeln!(text, "{EVIDENCE}");
    Ok(Report {
        json,
        text,
        passed: res.is_certified(),
    })
}

pub(crate) fn solve(args: &SolveArgs, tol: Tolerance) -> Result<Report> {
    let text = read(&args.config)?;
    let cfg: Config = serde_json::from_str(&text)
        .with_context(|| format!("invalid solve config {}", args.config.display()))?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let defaults = SolveOptions::default();
    let opts = SolveOptions {
        max_iter: args.max_iter.or(cfg.max_iter).unwrap_or(defaults.max_iter),
        tol,
        window: args.window.or(cfg.window),
        route: cfg.route.map(|r| match r {
            RouteName::Partial => Route::Partial,
            RouteName::Strong => Route::Strong,
        }),
        r: args.r.or(cfg.r),
        c: args.c.or(cfg.c),
        a: cfg.a,
    };
    let dom = load(&cfg.space, base)?;
    let cod = match &cfg.codomain {
        Some(c) => Some(load(c, base)?),
        None => None,
    };
    match (&dom, &cod) {
        (Carrier::Real(d), None) => render(&run_problem(&cfg, d, d, &opts)?),
        (Carrier::Real(d), Some(Carrier::Real(c))) => render(&run_problem(&cfg, d, c, &opts)?),
        (Carrier::Finite(d), None) => render(&run_problem(&cfg, d, d, &opts)?),
        (Carrier::Finite(d), Some(Carrier::Finite(c))) => render(&run_problem(&cfg, d, c, &opts)?),
        _ => bail!("domain and codomain must both be real families or both finite spaces"),
    }
}
