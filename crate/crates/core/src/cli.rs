//! Command-line front end.

use crate::bounds::{self, optimize_xi, paper_schedule, BoundProblem, BoundTrace, StepRule};
use crate::catalog::Catalog;
use crate::error::Error;
use crate::rational::to_canonical;
use crate::report::{Check, Report};
use crate::singularities::{reid_tai, resolve_surface_cyclic, singular_strata, QuotientSingularity, StratumReport};
use crate::stability::{estimate_rs, SectionModel};
use crate::surface::{discrepancies, CurveConfig};
use crate::verify::verify_paper;
use crate::wspace::{Hypersurface, WeightVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "hyperbound", version, about = "Volumes, singularities and stability indices of weighted hypersurfaces")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    Greedy,
    Paper,
}

#[derive(Args, Debug)]
pub struct HypersurfaceArgs {
    /// Comma-separated weights.
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<u64>,
    #[arg(long)]
    pub degree: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants and singular strata of a general hypersurface.
    Analyze(HypersurfaceArgs),
    /// Volume and stability bounds in dimension N.
    Bounds {
        n: i64,
        #[arg(long, value_enum, default_value_t = Schedule::Greedy)]
        schedule: Schedule,
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = bounds::DEFAULT_WINDOW)]
        m_window: u64,
    },
    /// Per-level birationality verdicts for the pluricanonical maps.
    Stability {
        #[command(flatten)]
        hypersurface: HypersurfaceArgs,
        #[arg(long, default_value_t = 20)]
        m_max: u64,
    },
    /// Minimal resolution of the surface singularity 1/R(1,Q).
    Resolve { r: i64, q: i64 },
    /// Run every check against a catalog of families.
    VerifyPaper {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        k_max: Option<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            code: report.exit_code(),
            stdout: match cli.format {
                Format::Text => report.render_text(),
                Format::Json => report.render_json(),
            },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn execute(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Analyze(h) => cmd_analyze(&hypersurface(h)?),
        Command::Bounds { n, schedule, trace, m_window } => cmd_bounds(*n, *schedule, *trace, *m_window),
        Command::Stability { hypersurface: h, m_max } => cmd_stability(&hypersurface(h)?, *m_max),
        Command::Resolve { r, q } => cmd_resolve(*r, *q),
        Command::VerifyPaper { catalog, k_max } => {
            let cat = match catalog {
                Some(p) => Catalog::load(p)?,
                None => Catalog::builtin(),
            };
            if k_max.is_some_and(|k| k < 1) {
                return Err(Error::Catalog("--k-max must be at least 1".into()));
            }
            Ok(verify_paper(&cat, *k_max))
        }
    }
}

fn hypersurface(a: &HypersurfaceArgs) -> Result<Hypersurface, Error> {
    Hypersurface::new(WeightVector::new(a.weights.clone())?, a.degree)
}

fn strata_json(strata: &[StratumReport]) -> Value {
    Value::Array(
        strata
            .iter()
            .map(|s| {
                json!({
                    "coordinates": s.coordinates,
                    "weights": s.weights,
                    "order": s.order,
                    "stratum_dim": s.stratum_dim,
                    "intersection_dim": s.intersection_dim,
                    "point_count": s.point_count.as_ref().map(to_canonical),
                    "interior_points": s.interior_points,
                    "eliminated": s.eliminated,
                    "transverse": s.transverse.as_ref().map(QuotientSingularity::to_string),
                    "verdict": s.verdict.map(|v| v.to_string()),
                    "flags": s.flags,
                })
            })
            .collect(),
    )
}

pub fn cmd_analyze(h: &Hypersurface) -> Result<Report, Error> {
    let strata = singular_strata(h);
    let volume = h.volume();
    let pg = h.geometric_genus();
    let canonical = h.canonical_image_dimension();
    let mut flags: Vec<String> = pg.flags.iter().map(|f| f.to_string()).collect();
    if let Ok(c) = &canonical {
        flags.extend(c.flags.iter().map(|f| f.to_string()));
    }
    let noncanonical: Vec<String> = strata
        .iter()
        .filter(|s| s.verdict == Some(crate::singularities::SingularityClass::NonCanonical))
        .filter_map(|s| s.transverse.as_ref().map(|q| q.to_string()))
        .collect();
    if !noncanonical.is_empty() {
        flags.push(crate::wspace::Flag::NonCanonical.to_string());
    }
    flags.sort();
    flags.dedup();
    let data = json!({
        "hypersurface": h.to_string(),
        "weights": h.weights(),
        "degree": h.degree(),
        "dimension": h.dim(),
        "well_formed": h.well_formed(),
        "quasi_smooth": h.quasi_smooth(),
        "amplitude": h.amplitude(),
        "volume": volume.as_ref().ok().map(to_canonical),
        "geometric_genus": pg.value.to_string(),
        "canonical_dimension": canonical.as_ref().ok().map(|c| c.value),
        "flags": flags,
        "noncanonical": noncanonical,
        "strata": strata_json(&strata),
    });
    let mut r = Report::new("analyze", data);
    let input = h.to_string();
    r.push(Check::holds("input.general_type", input.clone(), h.amplitude() > 0));
    r.push(Check::holds("input.quasi_smooth", input.clone(), h.quasi_smooth()));
    r.push(Check::holds("input.well_formed", input, h.well_formed()));
    Ok(r)
}

fn trace_json(t: &BoundTrace) -> Value {
    Value::Array(
        t.steps
            .iter()
            .map(|s| {
                let (rule, m, certificate) = match &s.rule {
                    StepRule::Ine1 { m } => ("ine1", Some(*m), Value::Null),
                    StepRule::Limit { certificate } => ("limit", None, serde_json::to_value(certificate).unwrap()),
                };
                json!({
                    "rule": rule,
                    "m": m,
                    "xi_before": to_canonical(&s.xi_before),
                    "xi_after": to_canonical(&s.xi_after),
                    "certified": s.certified.as_ref().map(to_canonical),
                    "certificate": certificate,
                    "verified": s.verified,
                })
            })
            .collect(),
    )
}

pub fn cmd_bounds(n: i64, schedule: Schedule, trace: bool, m_window: u64) -> Result<Report, Error> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let nu = n as u64;
    let p = BoundProblem::corank_one(nu)?;
    let t = match schedule {
        Schedule::Greedy => optimize_xi(&p, m_window, bounds::DEFAULT_ROUNDS),
        Schedule::Paper => paper_schedule(nu)?,
    };
    let full = BoundProblem::full_dimension(nu)?;
    let (cv, cr) = (bounds::closed_form_v(n, n - 1)?, bounds::closed_form_r(n, n - 1)?);
    let mut corank = json!({
        "xi": to_canonical(&t.final_xi),
        "volume": to_canonical(&t.volume_bound),
        "stability_index": t.rs_upper,
        "termination": t.termination,
    });
    if trace {
        corank["trace"] = trace_json(&t);
    }
    let data = json!({
        "n": n,
        "schedule": match schedule { Schedule::Greedy => "greedy", Schedule::Paper => "paper" },
        "canonical_dimension_n": {
            "volume": to_canonical(&bounds::volume_bound(&full)),
            "stability_index": bounds::rs_upper_bound(&full),
        },
        "canonical_dimension_n_minus_1": corank,
    });
    let mut r = Report::new("bounds", data);
    r.push(Check::compare("bounds.volume", format!("n={n}"), to_canonical(&cv), to_canonical(&t.volume_bound)));
    r.push(Check::compare("bounds.stability_index", format!("n={n}"), cr.to_string(), t.rs_upper.to_string()));
    r.push(Check::holds("bounds.steps_verified", format!("n={n}"), t.verified()));
    r.push(Check::compare(
        "bounds.full_dimension",
        format!("n={n}"),
        format!("2|{}", n + 2),
        format!("{}|{}", to_canonical(&bounds::volume_bound(&full)), bounds::rs_upper_bound(&full)),
    ));
    Ok(r)
}

pub fn cmd_stability(h: &Hypersurface, m_max: u64) -> Result<Report, Error> {
    if m_max < 1 {
        return Err(Error::InvalidConfig("--m-max must be at least 1".into()));
    }
    let e = estimate_rs(h, m_max)?;
    let levels: Vec<Value> = e
        .levels
        .iter()
        .map(|l| {
            json!({
                "m": l.m,
                "degree": l.degree,
                "status": l.verdict.status.to_string(),
                "reason": l.verdict.describe(),
                "evidence": serde_json::to_value(&l.verdict.evidence).unwrap(),
            })
        })
        .collect();
    let data = json!({
        "hypersurface": h.to_string(),
        "model": serde_json::to_value(&e.model).unwrap(),
        "r_lower": e.r_lower,
        "r_upper": e.r_upper,
        "r_s": e.exact(),
        "levels": levels,
    });
    let mut r = Report::new("stability", data);
    r.push(Check::holds(
        "stability.model_supported",
        h.to_string(),
        !matches!(e.model, SectionModel::Unsupported { .. }),
    ));
    Ok(r)
}

pub fn cmd_resolve(r: i64, q: i64) -> Result<Report, Error> {
    crate::singularities::hj_expand(r, q)?;
    let qs = QuotientSingularity::new(r as u64, &[1, q as u64]);
    let res = resolve_surface_cyclic(&qs)?;
    let labels: Vec<String> = (1..=res.chain.len()).map(|i| format!("E{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let general = discrepancies(&CurveConfig::chain(&refs, &res.chain)?)?;
    let data = json!({
        "singularity": qs.to_string(),
        "expansion": res.expansion.0,
        "chain": res.chain,
        "discrepancies": res.discrepancies.iter().map(to_canonical).collect::<Vec<_>>(),
        "correction": to_canonical(&res.correction()),
        "crepant": res.is_crepant(),
        "class": reid_tai(&qs).to_string(),
    });
    let mut rep = Report::new("resolve", data);
    rep.push(Check::holds("resolve.expansion_evaluates", format!("{r}/{q}"), res.expansion.evaluate() == crate::rational::rat(r, q)));
    rep.push(Check::compare(
        "resolve.discrepancy_routes_agree",
        qs.to_string(),
        res.discrepancies.iter().map(to_canonical).collect::<Vec<_>>().join(","),
        general.iter().map(to_canonical).collect::<Vec<_>>().join(","),
    ));
    Ok(rep)
}
