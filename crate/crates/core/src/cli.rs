//! The `orbicount` command line.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bundle::{verify_centralizer, SamplingPolicy};
use crate::error::{Error, Result};
use crate::euler::{chi_gamma, chi_gamma_burnside, chi_gamma_set, TheoremCOptions};
use crate::fixtures;
use crate::group::GroupLimits;
use crate::homspace::{enumerate_homs, enumerate_rho_classes, hom_classes};
use crate::par::{Budget, Context, Exec};
use crate::series::{dmvv_exp, dmvv_product, min_m_window};
use crate::subgroups::enumerate_subgroups;
use crate::verify::{self, VerifyReport};

pub const BUDGET_ENV: &str = "ORBICOUNT_BUDGET_SECS";

#[derive(Parser, Debug)]
#[command(name = "orbicount", version, about = "Exact orbit counts behind orbifold Euler characteristics and Hecke identities")]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Render an aligned text table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    /// Include wall-clock time in reports.
    #[arg(long, global = true)]
    timing: bool,
    /// Largest group order that may be constructed.
    #[arg(long, global = true, default_value_t = 4_000_000)]
    max_order: usize,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subgroup classes of a given index.
    Subgroups {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        index: usize,
    },
    /// Homomorphisms into a finite group, or from the subgroups of an index.
    Homs {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup_index: Option<usize>,
    },
    /// Orbifold Euler characteristics of a G-set.
    Euler {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "point")]
        gset: String,
        #[arg(long)]
        subgroup_index: Option<usize>,
    },
    /// Coefficients of the symmetric-product generating series.
    Series {
        #[command(flatten)]
        window: SeriesArgs,
        #[arg(long, value_enum, default_value_t = SeriesForm::Product)]
        form: SeriesForm,
    },
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// A coefficient JSON file, or `zero`, `partition`, `random-SEED`.
    #[arg(long)]
    coeffs: String,
    #[arg(long, default_value_t = 4)]
    p: usize,
    #[arg(long, default_value_t = 3)]
    q: usize,
    #[arg(long, default_value_t = 2)]
    y: i64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SeriesForm {
    Product,
    Exp,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    TheoremC {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "point")]
        gset: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        max_degree: usize,
        /// Skip the Burnside-form left side.
        #[arg(long)]
        no_burnside: bool,
    },
    Centralizer {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["samples", "classes"])]
        exhaustive: bool,
        /// One homomorphism per conjugacy class.
        #[arg(long, conflicts_with = "samples")]
        classes: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    HeckeLattice {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    HeckeFunctor {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "point")]
        gset: String,
    },
    Dmvv {
        #[command(flatten)]
        window: SeriesArgs,
    },
    /// Every check at desk-scale parameters.
    All,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Internal(_) => 2,
        _ => 1,
    }
}

fn budget_from_env() -> Result<Budget> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(|s| Budget::with_secs(Some(s)))
            .map_err(|_| Error::Input(format!("{BUDGET_ENV} must be a whole number of seconds, got `{v}`"))),
        Err(_) => Ok(Budget::default()),
    }
}

enum Output {
    Data(Value),
    Report(VerifyReport),
}

/// Runs the command line, writing the result to `out` and diagnostics to
/// `err`, and returns the exit status.
pub fn run_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = budget_from_env().and_then(|budget| {
        let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
        let ctx = Context { exec, budget };
        dispatch(&cli, echo, &ctx)
    });
    match result {
        Ok(Output::Data(mut v)) => {
            if cli.timing {
                v["wall_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            let _ = writeln!(out, "{}", render(&v, cli.table));
            0
        }
        Ok(Output::Report(mut r)) => {
            if cli.timing {
                r.wall_ms = Some(start.elapsed().as_millis() as u64);
            }
            let text = if cli.table { report_table(&r) } else { serde_json::to_string_pretty(&r).expect("report serializes") };
            let _ = writeln!(out, "{text}");
            if r.pass {
                0
            } else {
                2
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output serializes")
}

fn dispatch(cli: &Cli, echo: Vec<String>, ctx: &Context) -> Result<Output> {
    let limits = GroupLimits { max_order: cli.max_order, ..GroupLimits::default() };
    match &cli.command {
        Command::Subgroups { gamma, index } => {
            let gspec = fixtures::gamma(gamma)?;
            let e = enumerate_subgroups(&gspec, *index, ctx)?;
            let classes: Vec<Value> = e
                .classes
                .iter()
                .zip(&e.deck_orders)
                .map(|(h, d)| {
                    let mut v = json!({"table": h.action, "deck_order": d});
                    if let Some(l) = &h.lattice {
                        v["hnf"] = to_value(l);
                    }
                    v
                })
                .collect();
            Ok(Output::Data(json!({"gamma": gspec, "index": index, "classes": classes.len(), "subgroups": e.subgroups, "entries": classes})))
        }
        Command::Homs { gamma, group, subgroup_index } => {
            let gspec = fixtures::gamma(gamma)?;
            let g = fixtures::group(group, &limits)?;
            match subgroup_index {
                None => {
                    let homs = enumerate_homs(&gspec, &g, ctx)?;
                    let classes = hom_classes(&homs);
                    let reps: Vec<&[usize]> = classes.representatives.iter().map(|&i| homs.get(i)).collect();
                    Ok(Output::Data(json!({
                        "gamma": gspec, "group_order": g.order(), "homs": homs.len(),
                        "classes": classes.len(), "representatives": reps, "class_sizes": classes.sizes,
                    })))
                }
                Some(n) => {
                    let e = enumerate_subgroups(&gspec, *n, ctx)?;
                    let mut entries = vec![];
                    for h in &e.classes {
                        let t = enumerate_rho_classes(h, &g, ctx)?;
                        entries.push(json!({
                            "table": h.action,
                            "schreier_generators": t.schreier.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "deck_order": t.deck.order(),
                            "homs": t.homs.len(),
                            "rho_classes": t.classes,
                        }));
                    }
                    Ok(Output::Data(json!({"gamma": gspec, "group_order": g.order(), "index": n, "subgroups": entries})))
                }
            }
        }
        Command::Euler { gamma, group, gset, subgroup_index } => {
            let gspec = fixtures::gamma(gamma)?;
            let g = fixtures::group(group, &limits)?;
            let m = fixtures::gset(gset, &g)?;
            match subgroup_index {
                None => Ok(Output::Data(json!({
                    "gamma": gspec, "group_order": g.order(), "gset_size": m.size(),
                    "chi": chi_gamma(&m, &g, &gspec, ctx)?,
                    "chi_burnside": chi_gamma_burnside(&m, &g, &gspec, ctx)?,
                }))),
                Some(n) => {
                    let e = enumerate_subgroups(&gspec, *n, ctx)?;
                    let mut entries = vec![];
                    let mut total = 0;
                    for h in &e.classes {
                        let c = chi_gamma_set(&m, &g, h, ctx)?;
                        if !c.agree() {
                            return Err(Error::Internal(format!("set presentations disagree: {c:?}")));
                        }
                        total += c.by_pairs;
                        entries.push(json!({"table": h.action, "by_isotropy": c.by_isotropy, "by_pairs": c.by_pairs}));
                    }
                    Ok(Output::Data(json!({
                        "gamma": gspec, "group_order": g.order(), "gset_size": m.size(), "index": n,
                        "hecke_chi": total, "subgroups": entries,
                    })))
                }
            }
        }
        Command::Series { window, form } => {
            let c = fixtures::coeffs(&window.coeffs, min_m_window(window.p, window.q), window.y)?;
            let s = match form {
                SeriesForm::Product => dmvv_product(&c, window.p, window.q, window.y)?,
                SeriesForm::Exp => dmvv_exp(&c, window.p, window.q, window.y)?,
            };
            Ok(Output::Data(json!({"p": window.p, "q": window.q, "y": window.y, "terms": verify::series_terms(&s)})))
        }
        Command::Verify(v) => verify_command(v, echo, &limits, ctx).map(Output::Report),
    }
}

fn verify_command(v: &VerifyCommand, echo: Vec<String>, limits: &GroupLimits, ctx: &Context) -> Result<VerifyReport> {
    let records = match v {
        VerifyCommand::TheoremC { group, gset, gamma, max_degree, no_burnside } => {
            let gspec = fixtures::gamma(gamma)?;
            let g = fixtures::group(group, limits)?;
            let m = fixtures::gset(gset, &g)?;
            let opts = TheoremCOptions { burnside: !no_burnside, limits: *limits, timing: false };
            let inputs = json!({"group": group, "gset": gset, "gamma": gamma});
            verify::theorem_c_records("theorem-c", inputs, &m, &g, &gspec, *max_degree, &opts, ctx)?
        }
        VerifyCommand::Centralizer { gamma, group, n, exhaustive: _, classes, samples, seed } => {
            let gspec = fixtures::gamma(gamma)?;
            let g = fixtures::group(group, limits)?;
            let policy = match (samples, classes) {
                (Some(count), _) => SamplingPolicy::Sampled { count: *count, seed: *seed },
                (None, true) => SamplingPolicy::ClassRepresentatives,
                (None, false) => SamplingPolicy::Exhaustive,
            };
            let r = verify_centralizer(&gspec, &g, *n, policy, limits, ctx)?;
            verify::centralizer_records("centralizer", json!({"group": group, "gamma": gamma, "n": n}), &r)
        }
        VerifyCommand::HeckeLattice { m, n } => vec![verify::lattice_hecke_record(*m, *n)?, verify::commute_record(*m, *n)],
        VerifyCommand::HeckeFunctor { m, n, group, gset } => {
            let g = fixtures::group(group, limits)?;
            let ms = fixtures::gset(gset, &g)?;
            verify::functor_hecke_records("hecke-functor", json!({"group": group, "gset": gset}), &ms, &g, *m, *n, ctx)?
        }
        VerifyCommand::Dmvv { window } => {
            let c = fixtures::coeffs(&window.coeffs, min_m_window(window.p, window.q), window.y)?;
            verify::dmvv_records("dmvv", json!(window.coeffs), &c, window.p, window.q, window.y)?
        }
        VerifyCommand::All => verify::all_records(ctx)?,
    };
    Ok(VerifyReport::new(echo, records))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
            line.join("  ").trim_end().to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn report_table(r: &VerifyReport) -> String {
    let mut rows = vec![vec!["id".to_string(), "identity".into(), "lhs".into(), "rhs".into(), "pass".into()]];
    for rec in &r.records {
        rows.push(vec![rec.id.clone(), rec.identity.clone(), cell(&rec.lhs), cell(&rec.rhs), rec.pass.to_string()]);
    }
    let mut s = align(&rows);
    s.push_str(&format!("\noverall: {}", if r.pass { "pass" } else { "FAIL" }));
    if let Some(ms) = r.wall_ms {
        s.push_str(&format!("\nwall_ms: {ms}"));
    }
    s
}

/// Scalars as `key  value` lines; arrays of objects as tables.
fn render(v: &Value, table: bool) -> String {
    if !table {
        return serde_json::to_string_pretty(v).expect("value serializes");
    }
    let Value::Object(map) = v else {
        return cell(v);
    };
    let mut scalars = vec![];
    let mut blocks = vec![];
    for (k, val) in map {
        match val {
            Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                let mut keys: Vec<String> = vec![];
                for it in items {
                    for key in it.as_object().unwrap().keys() {
                        if !keys.contains(key) {
                            keys.push(key.clone());
                        }
                    }
                }
                let mut rows = vec![keys.clone()];
                for it in items {
                    rows.push(keys.iter().map(|key| it.get(key).map(cell).unwrap_or_default()).collect());
                }
                blocks.push(format!("{k}:\n{}", align(&rows)));
            }
            other => scalars.push(vec![k.clone(), cell(other)]),
        }
    }
    let mut parts = vec![align(&scalars)];
    parts.extend(blocks);
    parts.join("\n\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = vec![];
        let mut err = vec![];
        let code = run_to(std::iter::once("orbicount").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn hecke_lattice_report() {
        let (code, out, _) = run(&["verify", "hecke-lattice", "--m", "2", "--n", "2"]);
        assert_eq!(code, 0);
        let r: VerifyReport = serde_json::from_str(&out).unwrap();
        assert!(r.pass);
        assert_eq!((r.records[0].lhs.clone(), r.records[0].rhs.clone()), (json!(9), json!(9)));
        assert_eq!(r.command, vec!["verify", "hecke-lattice", "--m", "2", "--n", "2"]);
    }

    #[test]
    fn subgroups_listing() {
        let (code, out, _) = run(&["subgroups", "--gamma", "free-abelian-2", "--index", "4"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = run(&["subgroups", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
        assert_eq!(run(&["subgroups", "--gamma", "nope", "--index", "2"]).0, 1);
    }

    #[test]
    fn table_rendering() {
        let (code, out, _) = run(&["--table", "verify", "hecke-lattice", "--m", "2", "--n", "3"]);
        assert_eq!(code, 0);
        assert!(out.lines().next().unwrap().starts_with("id"));
        assert!(out.contains("overall: pass"));
        let (_, out, _) = run(&["euler", "--gamma", "z", "--group", "s3", "--table"]);
        assert!(out.contains("chi ") && out.contains('3'));
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::BudgetExceeded { stage: "x".into() }), 3);
        assert_eq!(exit_code(&Error::Input("x".into())), 1);
        assert_eq!(exit_code(&Error::Internal("x".into())), 2);
    }
}
