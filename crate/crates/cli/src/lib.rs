//! Command-line front end for `spaceform-core`.
//!
//! [`run`] parses arguments and returns the exit code and both output streams
//! instead of printing, so the binary and the tests share one code path.

pub mod cache;
pub mod output;
pub mod spec_lang;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spaceform_core::autos::{
    enumerate_automorphisms_bounded, fixing_character, inner_automorphisms, AutSource,
    MemoryAutCache, DEFAULT_BOUND,
};
use spaceform_core::cohomology::{cohomology_table, h2_oracle, least_period, ORACLE_BOUND};
use spaceform_core::derivations::{
    decompose_derivations, derivation_count_closed_form, enumerate_derivations, fixed_subgroup,
    Family,
};
use spaceform_core::spaceforms::{
    corollary_count, formula_count_o, formula_count_t, lens_count, lens_orbit_count, reconcile,
    selfeq_lens, selfeq_structure, standard_grid, orbit_count_oracle, FamilyParams, FormulaArgs,
    OracleContext, ReconcileReport,
};
use spaceform_core::{Action, Character, Error, FiniteGroup, GroupSpec};

use crate::cache::DiskAutCache;
use crate::output::{key_values, render_json, Table};
use crate::spec_lang::{family_of, parse_grid, parse_group_spec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "spaceform",
    version,
    about = "Periodic groups Z/a x| (Z/b x T*(n)) and Z/a x| (Z/b x O*(n)), their automorphisms, cohomology and space form counts"
)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for the automorphism cache.
    #[arg(long, global = true, env = "SPACEFORM_CACHE_DIR", value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    /// Ignore any cache directory.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest group order for automorphism enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND, value_name = "N")]
    max_enum: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "O", alias = "o")]
    O,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Small,
    Full,
}

#[derive(Debug, Args)]
struct ActionArgs {
    /// Modulus of the target unit group.
    #[arg(long)]
    a: Option<u64>,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[arg(long, default_value_t = 1)]
    v: u64,
    #[arg(long, default_value_t = 1)]
    w: u64,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 1)]
    a: u64,
    #[arg(long, default_value_t = 1)]
    b: u64,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[arg(long, default_value_t = 1)]
    v: u64,
    #[arg(long, default_value_t = 1)]
    w: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order, presentation check, center, abelianization and period.
    GroupInfo { spec: String },
    /// Enumerate automorphisms, optionally only those fixing an action.
    Aut {
        spec: String,
        #[command(flatten)]
        action: ActionArgs,
    },
    /// Crossed homomorphisms into Z/a.
    Der {
        spec: String,
        #[command(flatten)]
        action: ActionArgs,
    },
    /// Integral cohomology table over a degree range.
    Cohomology {
        spec: String,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long, default_value_t = 12)]
        to: u64,
    },
    /// Homotopy types of space forms: orbit oracle and closed forms.
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        /// Evaluate only this t.
        #[arg(long)]
        t: Option<u32>,
        /// Evaluate only this t' (tetrahedral family).
        #[arg(long)]
        t_prime: Option<u32>,
    },
    /// Group of self homotopy equivalences.
    Selfeq {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Lens space counts and self-equivalences for Z/m.
    Lens {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: u64,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Small)]
        suite: SuiteArg,
    },
    /// Compare oracle and closed forms over a grid.
    Reconcile {
        /// Grid file: one `SPEC k=K` per line. Defaults to the standard grid.
        #[arg(long, value_name = "FILE")]
        grid: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Report {
    command: &'static str,
    params: Value,
    results: Value,
    text: String,
    warnings: Vec<String>,
    /// Domain-level failure that still produced a report.
    failed: bool,
}

struct Context {
    json: bool,
    bound: u64,
    disk: Option<Arc<DiskAutCache>>,
    source: Arc<dyn AutSource>,
}

impl Context {
    fn warnings(&self) -> Vec<String> {
        self.disk
            .as_ref()
            .map(|d| d.take_warnings())
            .unwrap_or_default()
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let disk = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Arc::new(DiskAutCache::new(dir.clone(), cli.max_enum))),
        _ => None,
    };
    let source: Arc<dyn AutSource> = match &disk {
        Some(d) => d.clone(),
        None => Arc::new(MemoryAutCache::new(cli.max_enum)),
    };
    let ctx = Context {
        json: cli.json,
        bound: cli.max_enum,
        disk,
        source,
    };
    match dispatch(&cli.command, &ctx) {
        Ok(mut report) => {
            report.warnings.extend(ctx.warnings());
            let stdout = if ctx.json {
                render_json(report.command, report.params, report.results, report.warnings.clone())
            } else {
                report.text
            };
            let stderr = if ctx.json {
                String::new()
            } else {
                report
                    .warnings
                    .iter()
                    .map(|w| format!("warning: {w}\n"))
                    .collect()
            };
            Outcome {
                code: if report.failed { EXIT_DOMAIN } else { EXIT_OK },
                stdout,
                stderr,
            }
        }
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(msg)) => Outcome {
            code: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn spec_arg(text: &str) -> Result<GroupSpec, Failure> {
    parse_group_spec(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn family_params(f: &FamilyArgs) -> Result<FamilyParams, Failure> {
    let family = match f.family {
        FamilyArg::T => Family::T,
        FamilyArg::O => Family::O,
    };
    let action = Action::new(f.a, f.u, f.v, f.w);
    Ok(FamilyParams::new(family, f.a, f.b, f.n, action, f.k)?)
}

fn family_json(p: &FamilyParams) -> Value {
    json!({
        "family": p.family.to_string(),
        "a": p.a,
        "b": p.b,
        "n": p.n,
        "k": p.k,
        "u": p.action.u,
        "v": p.action.v,
        "w": p.action.w,
        "spec": p.spec().to_string(),
    })
}

fn dispatch(command: &Command, ctx: &Context) -> Result<Report, Failure> {
    match command {
        Command::GroupInfo { spec } => group_info(&spec_arg(spec)?, ctx),
        Command::Aut { spec, action } => aut(&spec_arg(spec)?, action, ctx),
        Command::Der { spec, action } => der(&spec_arg(spec)?, action),
        Command::Cohomology { spec, from, to } => cohomology(&spec_arg(spec)?, *from, *to),
        Command::Count { family, t, t_prime } => count(&family_params(family)?, *t, *t_prime, ctx),
        Command::Selfeq { family } => selfeq(&family_params(family)?, ctx),
        Command::Lens { m, k } => lens(*m, *k),
        Command::Verify { suite } => verify_cmd(*suite, ctx),
        Command::Reconcile { grid } => reconcile_cmd(grid.as_ref(), ctx),
    }
}

fn group_info(spec: &GroupSpec, ctx: &Context) -> Result<Report, Failure> {
    let g = FiniteGroup::build(spec)?;
    let report = g.verify_presentation();
    let (center, z) = g.center();
    let ab = g.abelianization();
    let h2 = if g.order() <= ORACLE_BOUND {
        Some(h2_oracle(&g)?.to_string())
    } else {
        None
    };
    let period = least_period(spec).ok();
    let inner = if (g.order() as u64) <= ctx.bound {
        Some(g.order() / center.len())
    } else {
        None
    };
    let results = json!({
        "spec": spec.to_string(),
        "order": g.order(),
        "generators": g.generator_names(),
        "relations": report.relations,
        "presentation_holds": report.passed(),
        "enumerated_order": report.enumerated_order,
        "abelian": g.is_abelian(),
        "center_order": center.len(),
        "center": z.to_string(),
        "center_invariants": z.factors(),
        "abelianization": ab.to_string(),
        "abelianization_invariants": ab.factors(),
        "inner_automorphisms": inner,
        "h2_oracle": h2,
        "least_period": period,
    });
    let mut pairs = vec![
        ("spec", spec.to_string()),
        ("order", g.order().to_string()),
        ("generators", g.generator_names().join(", ")),
    ];
    for r in &report.relations {
        pairs.push((
            "relation",
            format!("{}  {}", r.relation, if r.holds { "holds" } else { "FAILS" }),
        ));
    }
    pairs.extend([
        ("enumerated order", report.enumerated_order.to_string()),
        ("abelian", g.is_abelian().to_string()),
        ("center", format!("{z} (order {})", center.len())),
        ("abelianization", ab.to_string()),
        (
            "H^2 oracle",
            h2.clone().unwrap_or_else(|| "skipped (group too large)".into()),
        ),
        (
            "least period",
            period.map_or("not periodic in this engine".into(), |p| p.to_string()),
        ),
    ]);
    Ok(Report {
        command: "group-info",
        params: json!({ "spec": spec.to_string() }),
        results,
        text: key_values(&pairs),
        warnings: Vec::new(),
        failed: !report.passed(),
    })
}

fn action_of(spec: &GroupSpec, args: &ActionArgs) -> Result<Option<Action>, Failure> {
    match args.a {
        None => {
            if (args.u, args.v, args.w) != (1, 1, 1) {
                return Err(Failure::Usage("--u/--v/--w need --a".into()));
            }
            Ok(None)
        }
        Some(0) => Err(Failure::Usage("--a must be positive".into())),
        Some(a) => {
            let action = Action::new(a, args.u, args.v, args.w);
            spec.action_images(&action)?;
            Ok(Some(action))
        }
    }
}

fn aut(spec: &GroupSpec, args: &ActionArgs, ctx: &Context) -> Result<Report, Failure> {
    let action = action_of(spec, args)?;
    let g = FiniteGroup::build(spec)?;
    let all = ctx.source.automorphisms(&g)?;
    let auts = match &action {
        Some(act) => {
            let chi = Character::from_action(&g, act)?;
            fixing_character(&g, &all, &chi)
        }
        None => all.as_ref().clone(),
    };
    let inner = inner_automorphisms(&g)?.len();
    let names = g.generator_names();
    let rows: Vec<Vec<String>> = auts
        .iter()
        .map(|phi| {
            phi.images()
                .iter()
                .map(|&x| g.normal_form_of(x).to_string())
                .collect()
        })
        .collect();
    let results = json!({
        "order": auts.len(),
        "full_order": all.len(),
        "inner_order": inner,
        "generators": names,
        "automorphisms": rows,
    });
    let mut text = key_values(&[
        ("spec", spec.to_string()),
        (
            "automorphisms",
            match &action {
                Some(_) => format!("{} fixing the action (of {})", auts.len(), all.len()),
                None => auts.len().to_string(),
            },
        ),
        ("inner", inner.to_string()),
    ]);
    let mut headers = vec!["#".to_string()];
    headers.extend(names.iter().map(|n| format!("{n} ->")));
    let mut table = Table::new(&headers);
    for (i, r) in rows.iter().enumerate() {
        let mut cells = vec![i.to_string()];
        cells.extend(r.iter().cloned());
        table.row(&cells);
    }
    text.push('\n');
    text.push_str(&table.render());
    Ok(Report {
        command: "aut",
        params: json!({
            "spec": spec.to_string(),
            "action": action.map(|a| json!({"a": a.modulus, "u": a.u, "v": a.v, "w": a.w})),
            "max_enum": ctx.bound,
        }),
        results,
        text,
        warnings: Vec::new(),
        failed: false,
    })
}

fn headline_complement(spec: &GroupSpec) -> Option<(Family, u64, u32)> {
    let GroupSpec::Direct(l, r) = spec else {
        return None;
    };
    let GroupSpec::Cyclic(b) = l.as_ref() else {
        return None;
    };
    match r.as_ref() {
        GroupSpec::TStar(n) => Some((Family::T, *b, *n)),
        GroupSpec::OStar(n) => Some((Family::O, *b, *n)),
        _ => None,
    }
}

fn der(spec: &GroupSpec, args: &ActionArgs) -> Result<Report, Failure> {
    let action = action_of(spec, args)?.ok_or_else(|| Failure::Usage("der needs --a".into()))?;
    let h = FiniteGroup::build(spec)?;
    let chi = Character::from_action(&h, &action)?;
    let ders = enumerate_derivations(&h, &chi)?;
    let closed = derivation_count_closed_form(&h, &chi);
    let fixed = fixed_subgroup(&chi);
    let plan = headline_complement(spec)
        .map(|(family, b, n)| decompose_derivations(family, action.modulus, b, n, &action));
    let mut warnings = Vec::new();
    let closed_value = match &closed {
        Ok(c) => Some(*c),
        Err(e) => {
            warnings.push(format!("closed form not applicable: {e}"));
            None
        }
    };
    let plan_value = match plan {
        Some(Ok(p)) => Some(p),
        Some(Err(e)) => {
            warnings.push(format!("decomposition not applicable: {e}"));
            None
        }
        None => None,
    };
    let mismatch = closed_value.is_some_and(|c| c != ders.len() as u64)
        || plan_value.as_ref().is_some_and(|p| p.count != ders.len() as u64);
    let values: Vec<&[u64]> = ders.iter().map(|d| d.generator_values()).collect();
    let results = json!({
        "count": ders.len(),
        "closed_form": closed_value,
        "fixed_subgroup": fixed,
        "plan": plan_value,
        "generators": h.generator_names(),
        "derivations": values,
    });
    let mut pairs = vec![
        ("spec", spec.to_string()),
        ("a", action.modulus.to_string()),
        ("brute force", ders.len().to_string()),
        (
            "|A/A^H|",
            closed_value.map_or("n/a".into(), |c| c.to_string()),
        ),
        ("A^H", format!("{fixed:?}")),
    ];
    if let Some(p) = &plan_value {
        pairs.push((
            "reduction",
            format!(
                "kernel order {}, cyclic quotient of order {} acting by {}, count {}",
                p.kernel_order, p.quotient_order, p.quotient_unit, p.count
            ),
        ));
    }
    Ok(Report {
        command: "der",
        params: json!({
            "spec": spec.to_string(),
            "a": action.modulus, "u": action.u, "v": action.v, "w": action.w,
        }),
        results,
        text: key_values(&pairs),
        warnings,
        failed: mismatch,
    })
}

fn cohomology(spec: &GroupSpec, from: u64, to: u64) -> Result<Report, Failure> {
    if from > to {
        return Err(Failure::Usage("--from exceeds --to".into()));
    }
    let table = cohomology_table(spec)?;
    let mut rows = Vec::new();
    let mut t = Table::new(&["k", "H^k"]);
    for k in from..=to {
        let cell = match table.at(k) {
            Ok(x) => json!({"degree": k, "value": x.to_string(), "invariants": x.factors()}),
            Err(e) => json!({"degree": k, "value": Value::Null, "error": e.to_string()}),
        };
        t.row(&[
            k.to_string(),
            cell["value"]
                .as_str()
                .map(str::to_string)
                .unwrap_or_else(|| "not tabulated".into()),
        ]);
        rows.push(cell);
    }
    let mut warnings = Vec::new();
    let oracle = match FiniteGroup::build(spec).and_then(|g| h2_oracle(&g)) {
        Ok(x) => Some(x),
        Err(e) => {
            warnings.push(format!("H^2 oracle skipped: {e}"));
            None
        }
    };
    let h2_table = table.at(2).ok();
    let agrees = match (&oracle, &h2_table) {
        (Some(o), Some(t)) => Some(o == t),
        _ => None,
    };
    if *spec == GroupSpec::Q16 {
        warnings.push(
            "H^k(Q16) for k = 2 mod 4 is Z/2 + Z/2; the printed table reads Z + Z/2".into(),
        );
    }
    let mut text = key_values(&[
        ("spec", spec.to_string()),
        ("period", table.period.to_string()),
        (
            "H^2 oracle",
            oracle
                .as_ref()
                .map_or("skipped".into(), |o| format!("{o} (agrees: {})", agrees.unwrap_or(false))),
        ),
    ]);
    text.push('\n');
    text.push_str(&t.render());
    Ok(Report {
        command: "cohomology",
        params: json!({"spec": spec.to_string(), "from": from, "to": to}),
        results: json!({
            "period": table.period,
            "table": rows,
            "h2_oracle": oracle.map(|o| o.to_string()),
            "h2_agrees": agrees,
        }),
        text,
        warnings,
        failed: agrees == Some(false),
    })
}

fn ratio_text(r: &spaceform_core::spaceforms::Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn count(
    p: &FamilyParams,
    t: Option<u32>,
    t_prime: Option<u32>,
    ctx: &Context,
) -> Result<Report, Failure> {
    let oracle_ctx = OracleContext::new(ctx.source.clone());
    let oracle = orbit_count_oracle(p, &oracle_ctx)?;
    let args = FormulaArgs::from_params(p)?;
    let mut pairs: Vec<(u32, Option<u32>)> = Vec::new();
    match p.family {
        Family::T => {
            for ti in 0..=2 {
                for tp in 0..=1 {
                    if t.is_none_or(|x| x == ti) && t_prime.is_none_or(|x| x == tp) {
                        pairs.push((ti, Some(tp)));
                    }
                }
            }
            if let (Some(x), Some(y)) = (t, t_prime) {
                if x > 2 || y > 1 {
                    return Err(Error::OutOfRange(format!(
                        "need 0 <= t <= 2 and 0 <= t' <= 1, got t={x}, t'={y}"
                    ))
                    .into());
                }
            }
        }
        Family::O => {
            if t_prime.is_some() {
                return Err(Failure::Usage("--t-prime applies to the T family only".into()));
            }
            if let Some(x) = t {
                if x > 1 {
                    return Err(Error::OutOfRange(format!("need 0 <= t <= 1, got t={x}")).into());
                }
            }
            for ti in 0..=1 {
                if t.is_none_or(|x| x == ti) {
                    pairs.push((ti, None));
                }
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::OutOfRange("no admissible (t, t') selected".into()).into());
    }
    let mut formulas = Vec::new();
    let mut consistent = Vec::new();
    let mut flags = Vec::new();
    let mut table = Table::new(&["t", "t'", "formula", "matches oracle"]);
    for (ti, tp) in pairs {
        let v = match tp {
            Some(tp) => formula_count_t(&args, ti, tp)?,
            None => formula_count_o(&args, ti)?,
        };
        let matches = v.is_integer() && v.to_integer() == oracle.count;
        if matches {
            consistent.push(json!({"t": ti, "t_prime": tp}));
        }
        if !v.is_integer() && !flags.contains(&"non-integral formula value".to_string()) {
            flags.push("non-integral formula value".to_string());
        }
        table.row(&[
            ti.to_string(),
            tp.map_or("-".into(), |x| x.to_string()),
            ratio_text(&v),
            if matches { "yes" } else { "no" }.to_string(),
        ]);
        formulas.push(json!({
            "t": ti, "t_prime": tp, "value": ratio_text(&v), "integral": v.is_integer(),
        }));
    }
    if p.outside_hypothesis() {
        flags.push("outside theorem hypothesis (n >= 3)".into());
    }
    let (corollary, corollary_note) = match corollary_count(p) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let results = json!({
        "derived": {
            "ell": p.ell(),
            "K": p.big_k(),
            "n0": p.n0(),
            "N": p.big_n(),
        },
        "oracle_count": oracle.count,
        "oracle": oracle,
        "formula_counts": formulas,
        "consistent_pairs": consistent,
        "corollary_count": corollary,
        "corollary_note": corollary_note,
        "flags": flags,
    });
    let mut text = key_values(&[
        ("group", p.spec().to_string()),
        ("k", p.k.to_string()),
        (
            "l, K, n0, N",
            format!(
                "{}, {}, {}, {}",
                p.ell(),
                p.big_k(),
                p.n0().map_or("-".into(), |x| x.to_string()),
                p.big_n()
            ),
        ),
        (
            "oracle",
            format!(
                "{} = {} / {}",
                oracle.count, oracle.units, oracle.subgroup_order
            ),
        ),
        (
            "corollary",
            corollary.map_or_else(|| corollary_note.clone().unwrap_or_default(), |c| c.to_string()),
        ),
        ("flags", if flags.is_empty() { "none".into() } else { flags.join("; ") }),
    ]);
    text.push('\n');
    text.push_str(&table.render());
    Ok(Report {
        command: "count",
        params: json!({"family": family_json(p), "t": t, "t_prime": t_prime}),
        results,
        text,
        warnings: Vec::new(),
        failed: false,
    })
}

fn selfeq(p: &FamilyParams, ctx: &Context) -> Result<Report, Failure> {
    let oracle_ctx = OracleContext::new(ctx.source.clone());
    let r = selfeq_structure(p, &oracle_ctx)?;
    let mut warnings = Vec::new();
    if p.outside_hypothesis() {
        warnings.push("outside theorem hypothesis (n >= 3)".into());
    }
    let text = key_values(&[
        ("group", p.spec().to_string()),
        ("k", p.k.to_string()),
        ("structure", r.expression.clone()),
        (
            "components",
            r.components
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" x "),
        ),
        ("order", r.total.to_string()),
        (
            "tower kernel (brute force)",
            r.tower_kernel_brute.map_or("-".into(), |x| x.to_string()),
        ),
        ("E(lens a) at 2k[ord u,2]", r.lens_a_at_ell_u.to_string()),
    ]);
    Ok(Report {
        command: "selfeq",
        params: json!({"family": family_json(p)}),
        results: serde_json::to_value(&r).expect("serializable"),
        text,
        warnings,
        failed: false,
    })
}

fn lens(m: u64, k: u64) -> Result<Report, Failure> {
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let count = lens_count(m, k)?;
    let orbits = lens_orbit_count(m, k)?;
    let se = selfeq_lens(m, k)?;
    let text = key_values(&[
        ("m, k", format!("{m}, {k}")),
        ("O(m,k)", count.to_string()),
        ("orbit enumeration", orbits.to_string()),
        ("self-equivalences", se.order.to_string()),
        ("kernel", format!("{:?}", se.elements)),
    ]);
    Ok(Report {
        command: "lens",
        params: json!({"m": m, "k": k}),
        results: json!({
            "lens_count": count,
            "orbit_count": orbits,
            "selfeq_order": se.order,
            "selfeq_elements": se.elements,
        }),
        text,
        warnings: Vec::new(),
        failed: count != orbits,
    })
}

fn verify_cmd(suite: SuiteArg, ctx: &Context) -> Result<Report, Failure> {
    let suite = match suite {
        SuiteArg::Small => verify::Suite::Small,
        SuiteArg::Full => verify::Suite::Full,
    };
    let oracle_ctx = OracleContext::new(ctx.source.clone());
    let results = verify::run_suite(suite, &oracle_ctx);
    let mut table = Table::new(&["#", "result", "criterion", "detail"]);
    for r in &results {
        table.row(&[
            r.id.to_string(),
            if r.passed { "PASS" } else { "FAIL" }.to_string(),
            r.name.to_string(),
            r.detail.clone(),
        ]);
    }
    let failed = results.iter().any(|r| !r.passed);
    Ok(Report {
        command: "verify",
        params: json!({"suite": suite.name(), "suite_version": verify::SUITE_VERSION}),
        results: serde_json::to_value(&results).expect("serializable"),
        text: table.render(),
        warnings: Vec::new(),
        failed,
    })
}

pub fn reconcile_text(report: &ReconcileReport) -> String {
    let mut t = Table::new(&[
        "cell", "oracle", "formulas", "consistent", "corollary", "verdict", "flags",
    ]);
    for c in &report.cells {
        let pairs: Vec<String> = c
            .consistent_pairs
            .iter()
            .map(|(t, tp)| match tp {
                Some(tp) => format!("({t},{tp})"),
                None => format!("({t})"),
            })
            .collect();
        let mut flags = c.flags.clone();
        if let Some(e) = &c.error {
            flags.push(format!("error: {e}"));
        }
        t.row(&[
            c.label.clone(),
            c.oracle.map_or("-".into(), |x| x.to_string()),
            c.formula_values
                .iter()
                .map(|v| v.value.clone())
                .collect::<Vec<_>>()
                .join(","),
            if pairs.is_empty() { "-".into() } else { pairs.join(" ") },
            c.corollary.map_or("-".into(), |x| x.to_string()),
            c.verdict.clone(),
            flags.join("; "),
        ]);
    }
    let mut out = t.render();
    let consistent = report
        .cells
        .iter()
        .filter(|c| c.verdict == spaceform_core::spaceforms::CONSISTENT)
        .count();
    out.push_str(&format!(
        "\n{} cells, {} consistent, {} mismatches\n",
        report.cells.len(),
        consistent,
        report.cells.len() - consistent
    ));
    for n in &report.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

fn reconcile_cmd(grid: Option<&PathBuf>, ctx: &Context) -> Result<Report, Failure> {
    let (cells, source) = match grid {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            (parse_grid(&text).map_err(Failure::Usage)?, path.display().to_string())
        }
        None => (standard_grid(), "standard".to_string()),
    };
    let oracle_ctx = OracleContext::new(ctx.source.clone());
    let report = reconcile(&cells, &oracle_ctx);
    let errors = report.cells.iter().filter(|c| c.error.is_some()).count();
    let mut warnings = Vec::new();
    if errors > 0 {
        warnings.push(format!("{errors} cells failed to evaluate"));
    }
    Ok(Report {
        command: "reconcile",
        params: json!({"grid": source, "cells": cells.len()}),
        text: reconcile_text(&report),
        results: serde_json::to_value(&report).expect("serializable"),
        warnings,
        failed: false,
    })
}

/// Reads a family from a spec string such as `C(7)x(C(1)xT*(3))[u=1,v=2]`.
pub fn family_from_text(text: &str, k: u64) -> Result<FamilyParams, String> {
    let spec = parse_group_spec(text).map_err(|e| e.to_string())?;
    family_of(&spec, k)
}

/// Enumerates automorphisms with the default bound; used by the verify suites.
pub(crate) fn automorphisms(g: &FiniteGroup) -> spaceform_core::Result<Vec<spaceform_core::autos::Automorphism>> {
    enumerate_automorphisms_bounded(g, DEFAULT_BOUND)
}
