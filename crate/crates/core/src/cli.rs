//! Command-line front end. Every command builds one JSON value; the text
//! format is a flattened rendering of the same value.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{GradedAlgebra, GradedPresentation};
use crate::aut::{is_group, search_involutions, GeneratorAssignment, Rejection};
use crate::error::{Error, Result};
use crate::milnor::{
    euler_characteristic, floyd_s1_obstruction, milnor_presentation, Flavor, MilnorParams,
};
use crate::orbit::{verify_custom_presentation, verify_orbit_dims, OrbitParams, OrbitVerdict, ParamSearch};
use crate::report::{build_report, CaseSummary};
use crate::spectral::{enumerate_cases, run_borel_ss, BaseRing, CaseRun, DifferentialSpec, Group};

#[derive(Parser, Debug)]
#[command(name = "milnor-borel", version, about = "Free actions on Milnor manifolds")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupArg {
    Z2,
    S1,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Z2 => Group::Z2,
            GroupArg::S1 => Group::S1,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Real,
    Complex,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Real => Flavor::Real,
            FlavorArg::Complex => Flavor::Complex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    Auto,
    Trivial,
    I,
    Ii,
    Iii,
}

#[derive(Args, Debug)]
struct Manifold {
    #[arg(long, value_enum)]
    flavor: FlavorArg,
    #[arg(long = "r")]
    r: u32,
    #[arg(long = "s")]
    s: u32,
}

#[derive(Args, Debug)]
struct Action {
    #[arg(long, value_enum)]
    group: GroupArg,
    #[command(flatten)]
    manifold: Manifold,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti table and presentation of the cohomology ring.
    Cohomology {
        #[command(flatten)]
        manifold: Manifold,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Candidate differentials of the Borel spectral sequence.
    Spectral {
        #[command(flatten)]
        action: Action,
        #[arg(long, value_enum, default_value_t = CaseArg::Auto)]
        case: CaseArg,
    },
    /// Orbit-space presentations checked against the spectral sequence.
    Orbit {
        #[command(flatten)]
        action: Action,
        #[arg(long, conflicts_with_all = ["search", "presentation"])]
        params: Option<String>,
        #[arg(long)]
        search: bool,
        #[arg(long, conflicts_with = "search")]
        presentation: Option<PathBuf>,
    },
    /// Involutive ring automorphisms.
    Aut {
        #[arg(long, value_enum, required_unless_present = "presentation")]
        flavor: Option<FlavorArg>,
        #[arg(long = "r", required_unless_present = "presentation")]
        r: Option<u32>,
        #[arg(long = "s", required_unless_present = "presentation")]
        s: Option<u32>,
        #[arg(long, conflicts_with_all = ["flavor", "r", "s"])]
        presentation: Option<PathBuf>,
    },
    /// Everything the cohomology forces about a free action.
    Report {
        #[command(flatten)]
        action: Action,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `args` (without the program name).
pub fn run_command<I, S>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("milnor-borel".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandOutput {
                    exit_code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((query, result)) => {
            let doc = json!({
                "query": query,
                "result": result,
                "version": env!("CARGO_PKG_VERSION"),
            });
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
                    s.push('\n');
                    s
                }
                Format::Text => render_text(&doc),
            };
            CommandOutput {
                exit_code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => CommandOutput {
            exit_code: 1,
            stdout: String::new(),
            stderr: format!("error[{}]: {}\n", e.code(), e),
        },
    }
}

fn read_presentation(path: &PathBuf) -> Result<GradedPresentation> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidPresentation(format!("cannot read {}: {e}", path.display()))
    })?;
    GradedPresentation::from_text(&text)
}

fn manifold_query(m: &Manifold) -> Value {
    json!({"flavor": Flavor::from(m.flavor), "r": m.r, "s": m.s})
}

fn action_query(command: &str, a: &Action) -> Value {
    let mut q = manifold_query(&a.manifold);
    q["command"] = json!(command);
    q["group"] = json!(Group::from(a.group));
    q
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn execute(command: &Command) -> Result<(Value, Value)> {
    match command {
        Command::Cohomology { manifold, max_degree } => {
            let mut q = manifold_query(manifold);
            q["command"] = json!("cohomology");
            q["max_degree"] = json!(max_degree);
            Ok((q, cohomology(manifold, *max_degree)?))
        }
        Command::Spectral { action, case } => {
            let mut q = action_query("spectral", action);
            q["case"] = json!(format!("{case:?}").to_lowercase());
            Ok((q, spectral(action, *case)?))
        }
        Command::Orbit {
            action,
            params,
            search: _,
            presentation,
        } => {
            let mut q = action_query("orbit", action);
            q["params"] = json!(params);
            q["presentation"] = json!(presentation.as_ref().map(|p| p.display().to_string()));
            Ok((q, orbit(action, params.as_deref(), presentation.as_ref())?))
        }
        Command::Aut {
            flavor,
            r,
            s,
            presentation,
        } => {
            let q = json!({
                "command": "aut",
                "flavor": flavor.map(Flavor::from),
                "r": r,
                "s": s,
                "presentation": presentation.as_ref().map(|p| p.display().to_string()),
            });
            let alg = match presentation {
                Some(path) => GradedAlgebra::with_default_window(read_presentation(path)?, 16),
                None => {
                    let p = MilnorParams::new(
                        Flavor::from(flavor.expect("required")),
                        r.expect("required"),
                        s.expect("required"),
                    )?;
                    crate::milnor::milnor_algebra(&p)
                }
            };
            Ok((q, aut(&alg)?))
        }
        Command::Report { action } => {
            let q = action_query("report", action);
            let m = &action.manifold;
            let rep = build_report(action.group.into(), m.flavor.into(), m.r, m.s)?;
            Ok((q, to_value(&rep)))
        }
    }
}

fn cohomology(m: &Manifold, max_degree: Option<usize>) -> Result<Value> {
    let params = MilnorParams::new(m.flavor.into(), m.r, m.s)?;
    let pres = milnor_presentation(&params);
    let dim = params.manifold_dimension();
    let shown = max_degree.unwrap_or(dim);
    let window = shown.max(dim + pres.max_generator_degree());
    let alg = GradedAlgebra::new(pres.clone(), window);
    let betti = alg.poincare_table(shown)?;
    let full = alg.poincare_table(dim)?;
    let basis: Vec<Vec<String>> = (0..=shown)
        .map(|d| {
            alg.degree_basis(d).map(|b| {
                b.representatives
                    .iter()
                    .map(|m| pres.format_monomial(m))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    let mut out = json!({
        "dimension": dim,
        "generators": pres.generators().iter().map(|g| format!("{}:{}", g.name, g.degree)).collect::<Vec<_>>(),
        "relations": pres.relations().iter().map(|r| pres.format_polynomial(r)).collect::<Vec<_>>(),
        "betti": betti,
        "basis": basis,
        "total_dimension": full.iter().sum::<usize>(),
        "euler_characteristic": euler_characteristic(&full),
        "palindromic": full.iter().eq(full.iter().rev()),
    });
    if params.flavor == Flavor::Complex {
        out["s1_obstruction"] = to_value(&floyd_s1_obstruction(m.r, m.s)?);
    }
    Ok(out)
}

fn spectral(a: &Action, case: CaseArg) -> Result<Value> {
    let group: Group = a.group.into();
    let m = &a.manifold;
    let params = MilnorParams::new(m.flavor.into(), m.r, m.s)?;
    let runs: Vec<CaseRun> = match case {
        CaseArg::Auto => enumerate_cases(group, &params)?,
        other => {
            let label = format!("{other:?}").to_lowercase();
            let page = params.flavor.generator_degree() + 1;
            let spec = DifferentialSpec::from_case(&label, page).expect("known case");
            let fiber = std::sync::Arc::new(crate::milnor::milnor_algebra(&params));
            let result = run_borel_ss(BaseRing::new(group), fiber, &spec, params.manifold_dimension())?;
            vec![CaseRun { label, result }]
        }
    };
    let survivor = runs.iter().find(|c| c.result.admissible);
    let rank_table = survivor
        .and_then(|c| c.result.differential.as_ref())
        .map(|d| d.rank_table(0));
    Ok(json!({
        "cases": runs.iter().map(CaseSummary::from_run).collect::<Vec<_>>(),
        "survivors": runs.iter().filter(|c| c.result.admissible).map(|c| c.label.clone()).collect::<Vec<_>>(),
        "rank_table": rank_table,
    }))
}

fn verdict_value(v: &OrbitVerdict) -> Value {
    json!({
        "params": v.params.as_ref().map(OrbitParams::to_bits),
        "matches": v.matches,
        "finite": v.finite,
        "computed_dims": v.computed_dims,
    })
}

fn orbit(a: &Action, params: Option<&str>, presentation: Option<&PathBuf>) -> Result<Value> {
    let group: Group = a.group.into();
    let m = &a.manifold;
    let flavor: Flavor = m.flavor.into();
    let dim = MilnorParams::new(flavor, m.r, m.s)?.manifold_dimension();
    if let Some(path) = presentation {
        let pres = read_presentation(path)?;
        let v = verify_custom_presentation(group, flavor, m.r, m.s, &pres)?;
        return Ok(json!({
            "expected_dims": v.expected_dims,
            "verdicts": [verdict_value(&v)],
            "matching": [],
            "matches": v.matches,
        }));
    }
    let search = match params {
        Some(bits) => ParamSearch::Single(OrbitParams::parse(group, m.s, bits)?),
        None => ParamSearch::All,
    };
    let result = verify_orbit_dims(group, flavor, m.r, m.s, search)?;
    let matching: Vec<String> = result
        .matching()
        .filter_map(|v| v.params.as_ref().map(OrbitParams::to_bits))
        .collect();
    Ok(json!({
        "survivor": result.survivor.spec.case_label(),
        "tot_dims": result.survivor.tot_dims[..=dim].to_vec(),
        "expected_dims": result.expected_dims(),
        "verdicts": result.verdicts.iter().map(verdict_value).collect::<Vec<_>>(),
        "matching": matching,
        "matching_count": matching.len(),
    }))
}

fn assignment_value(alg: &GradedAlgebra, a: &GeneratorAssignment) -> Value {
    Value::Object(
        a.describe(alg)
            .into_iter()
            .map(|(g, im)| (g, Value::String(im)))
            .collect(),
    )
}

fn aut(alg: &GradedAlgebra) -> Result<Value> {
    let search = search_involutions(alg)?;
    let pres = alg.presentation();
    let candidates: Vec<Value> = search
        .candidates
        .iter()
        .map(|(a, rej)| {
            let (verdict, witness) = match rej {
                None => ("involution", None),
                Some(Rejection::RelationNotKilled(w)) => (
                    "relation_not_killed",
                    Some(format!(
                        "{} -> {}",
                        pres.format_polynomial(&w.relation),
                        alg.format_element(&w.image)
                    )),
                ),
                Some(Rejection::NotInvertible) => ("not_invertible", None),
                Some(Rejection::NotInvolutive) => ("not_involutive", None),
            };
            json!({"images": assignment_value(alg, a), "verdict": verdict, "witness": witness})
        })
        .collect();
    let survivors: Vec<GeneratorAssignment> = search.survivors().into_iter().cloned().collect();
    let only_identity = survivors == vec![GeneratorAssignment::identity(alg)?];
    Ok(json!({
        "candidates": candidates,
        "survivors": survivors.iter().map(|a| assignment_value(alg, a)).collect::<Vec<_>>(),
        "is_group": is_group(alg, &survivors)?,
        "only_identity": only_identity,
        "inference": if only_identity {
            "any involution of the space acts trivially on mod 2 cohomology"
        } else {
            "nontrivial involutive ring automorphisms exist"
        },
    }))
}

/// `path: value` lines. Scalar arrays are joined on one line, numbers by
/// spaces and strings by `, `.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    let join = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let sep = if items.iter().all(Value::is_number) { " " } else { ", " };
            let line: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{path}: {}\n", line.join(sep)));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        other => out.push_str(&format!("{path}: {}\n", scalar(other).expect("scalar"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_text() {
        let out = run_command(["cohomology", "--flavor", "real", "--r", "5", "--s", "3", "--format", "text"]);
        assert_eq!(out.exit_code, 0);
        assert!(out.stdout.contains("result.betti: 1 2 3 4 4 3 2 1\n"));
    }

    #[test]
    fn exit_codes() {
        let out = run_command(["cohomology", "--flavor", "real", "--r", "3", "--s", "4"]);
        assert_eq!(out.exit_code, 1);
        assert!(out.stderr.starts_with("error[s-exceeds-r]: s exceeds r"));
        assert_eq!(out.stderr.lines().count(), 1);
        let out = run_command(["cohomology", "--flavor", "octonion", "--r", "3", "--s", "1"]);
        assert_eq!(out.exit_code, 2);
        let out = run_command(["orbit", "--group", "z2", "--flavor", "real", "--r", "4", "--s", "3"]);
        assert_eq!(out.exit_code, 1);
        assert!(out.stderr.contains("even"));
    }

    #[test]
    fn text_flattening() {
        let v = json!({"a": {"b": [1, 2]}, "c": [{"d": "x"}], "e": ["p", "q"], "f": null});
        assert_eq!(render_text(&v), "a.b: 1 2\nc.0.d: x\ne: p, q\nf: null\n");
    }
}
