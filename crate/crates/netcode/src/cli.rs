//! Argument parsing and the subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use netcode_core::analysis::{
    builtin, combination_partitions, combination_projective_partial, combination_scale, evaluate, fit_polynomial,
    interpolate, residual, CountProfile, FitOutcome,
};
use netcode_core::code_graph::{build_code_graph, is_isomorphic, CodeGraph, NodeKind};
use netcode_core::coding::{detect_coding_points, reduce_network, Backend, Solver};
use netcode_core::field::{prime_powers, FiniteField, MAX_ORDER};
use netcode_core::fixtures;
use netcode_core::flow::capacity;
use netcode_core::labeling::{
    count_from_histogram, counting_search, enumerate_labelings, exists_labeling, extract_constraints, ConstraintSystem,
    Labeling, LabelingError, NormalizationMode,
};
use netcode_core::network::{Network, PathSystem};

use crate::corpus::{self, ENTRIES};
use crate::formats::{parse_document, to_json, CodeGraphDoc, Document};
use crate::parallel::{available_threads, map_indexed};

/// Largest field order scanned by `profile --deep`.
pub const DEEP_LIMIT: u64 = 40;

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    /// 0 success, 1 a mathematical negative, 2 an input error.
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome { code: 0, stdout, stderr: String::new() }
    }

    fn negative(stdout: String) -> Self {
        CommandOutcome { code: 1, stdout, stderr: String::new() }
    }

    fn input_error(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        CommandOutcome { code: 2, stdout: String::new(), stderr }
    }
}

#[derive(Parser, Debug)]
#[command(name = "netcode", version, about = "Multicast network coding analysis")]
struct Cli {
    /// Worker threads for the optimizer and counters (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// JSON document, or the name of a corpus file.
    input: Option<String>,
    /// A built-in example instead of a file.
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Ilp,
    Paths,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Ilp => Backend::Ilp,
            BackendArg::Paths => Backend::Paths,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Raw,
    SourceIdentity,
    Projective,
}

impl From<ModeArg> for NormalizationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => NormalizationMode::Raw,
            ModeArg::SourceIdentity => NormalizationMode::SourceIdentity,
            ModeArg::Projective => NormalizationMode::Projective,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-receiver mincuts and the network capacity.
    Capacity {
        #[command(flatten)]
        input: Input,
        /// CSV rows on stdout.
        #[arg(long)]
        csv: bool,
    },
    /// Path system with the fewest coding points.
    Mincode {
        #[command(flatten)]
        input: Input,
        /// Optimizer: the integer program or the path-combination search.
        #[arg(long, value_enum, default_value = "ilp")]
        backend: BackendArg,
    },
    /// Code graph of a network.
    Codegraph {
        #[command(flatten)]
        input: Input,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
        /// Optimizer used when the network carries no paths.
        #[arg(long, value_enum, default_value = "ilp")]
        backend: BackendArg,
    },
    /// Existence, count or enumeration of labelings over one field.
    Label {
        #[command(flatten)]
        input: Input,
        /// Field order `q` or `p^k`.
        #[arg(long, required_unless_present = "fields")]
        field: Option<String>,
        /// Inclusive range `a..b` of field orders; counts each prime power.
        #[arg(long, conflicts_with_all = ["field", "exists", "enumerate"])]
        fields: Option<String>,
        /// Find one labeling; exit 1 if there is none.
        #[arg(long, group = "action")]
        exists: bool,
        /// Count labelings (the default action).
        #[arg(long, group = "action")]
        count: bool,
        /// List up to N labelings.
        #[arg(long, group = "action", value_name = "N")]
        enumerate: Option<usize>,
        /// Normalization: all matrices, sources fixed to the identity, or also columns up to scale.
        #[arg(long, value_enum, default_value = "raw")]
        mode: ModeArg,
        /// Use the generic counter even where a specialized one applies.
        #[arg(long)]
        generic: bool,
        /// `q,count` rows on stdout (with --fields).
        #[arg(long)]
        csv: bool,
    },
    /// Smallest field admitting a labeling, and all achievable orders.
    Qmin {
        #[command(flatten)]
        input: Input,
        /// Largest field order to try.
        #[arg(long, default_value_t = 16)]
        max: u64,
    },
    /// Labeling counts across fields, optionally fitted by a polynomial in q.
    Profile {
        #[command(flatten)]
        input: Input,
        /// Inclusive range `a..b` of field orders.
        #[arg(long, default_value = "2..17")]
        fields: String,
        /// Fit degree D through the first D+1 points and check the rest.
        #[arg(long, value_name = "D")]
        fit: Option<usize>,
        /// Write q,count[,fitted,residual] rows to a file.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Normalization: all matrices, sources fixed to the identity, or also columns up to scale.
        #[arg(long, value_enum, default_value = "raw")]
        mode: ModeArg,
        /// Use the generic counter even where a specialized one applies.
        #[arg(long)]
        generic: bool,
        /// Extend the range to q <= 40.
        #[arg(long)]
        deep: bool,
    },
    /// Bundled example inputs.
    Corpus {
        /// Regenerate the corpus files into a directory.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
}

struct Ctx {
    threads: usize,
    json: bool,
}

type Outcome = Result<CommandOutcome, CommandOutcome>;

fn err(msg: impl std::fmt::Display) -> CommandOutcome {
    CommandOutcome::input_error(format!("error: {msg}"))
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutcome::ok(text)
                }
                _ => CommandOutcome::input_error(text),
            };
        }
    };
    let ctx = Ctx { threads: cli.threads.unwrap_or_else(available_threads).max(1), json: cli.json };
    let result = match cli.command {
        Command::Capacity { input, csv } => cmd_capacity(&ctx, &input, csv),
        Command::Mincode { input, backend } => cmd_mincode(&ctx, &input, backend.into()),
        Command::Codegraph { input, dot, backend } => cmd_codegraph(&ctx, &input, dot, backend.into()),
        Command::Label { input, field, fields, exists, count: _, enumerate, mode, generic, csv } => {
            cmd_label(&ctx, &input, field, fields, exists, enumerate, mode.into(), generic, csv)
        }
        Command::Qmin { input, max } => cmd_qmin(&ctx, &input, max),
        Command::Profile { input, fields, fit, csv, mode, generic, deep } => {
            cmd_profile(&ctx, &input, &fields, fit, csv, mode.into(), generic, deep)
        }
        Command::Corpus { export } => cmd_corpus(&ctx, export),
    };
    result.unwrap_or_else(|e| e)
}

fn read_document(input: &Input) -> Result<Document, CommandOutcome> {
    let Some(arg) = &input.input else {
        return Err(err("give an input file or --builtin NAME"));
    };
    let path = corpus::resolve(arg).ok_or_else(|| err(format!("no such file or corpus entry: {arg}")))?;
    let text = fs::read_to_string(&path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| err(format!("{}: {e}", path.display())))
}

fn builtin_network(name: &str) -> Option<(Network, PathSystem)> {
    Some(match name {
        "butterfly" => fixtures::butterfly(),
        "modified_butterfly" | "modified-butterfly" => fixtures::modified_butterfly(),
        "four_source" | "four-source" => fixtures::four_source(),
        "combination" => fixtures::combination(),
        _ => return None,
    })
}

fn load_network(input: &Input) -> Result<(Network, Option<PathSystem>), CommandOutcome> {
    if let Some(name) = &input.builtin {
        let (n, ps) = builtin_network(name).ok_or_else(|| err(format!("unknown built-in network {name}")))?;
        return Ok((n, Some(ps)));
    }
    match read_document(input)? {
        Document::Network(doc) => doc.to_network().map_err(err),
        _ => Err(err("expected a network document")),
    }
}

fn solve(ctx: &Ctx, n: &Network, backend: Backend) -> Result<netcode_core::coding::OptimizationResult, CommandOutcome> {
    use netcode_core::coding::SolveError;
    let solver = Solver::new(n, backend).map_err(|e| match e {
        SolveError::Infeasible { .. } => {
            CommandOutcome::negative(ctx_line(ctx, &e.to_string(), json!({"feasible": false, "error": e.to_string()})))
        }
        other => err(other),
    })?;
    let outcomes = map_indexed(solver.partition_count(), ctx.threads, |i| solver.run_partition(i));
    solver.combine(outcomes).map_err(err)
}

/// Human line or JSON object, per `--json`.
fn ctx_line(ctx: &Ctx, text: &str, value: Value) -> String {
    if ctx.json {
        to_json(&value)
    } else {
        format!("{text}\n")
    }
}

fn cmd_capacity(ctx: &Ctx, input: &Input, csv: bool) -> Outcome {
    let (n, _) = load_network(input)?;
    let cap = capacity(&n);
    let name = |v| n.vertex_name(v).to_string();
    let out = if ctx.json {
        let cuts: serde_json::Map<String, Value> =
            cap.cuts.iter().map(|c| (name(c.receiver), json!(c.mincut))).collect();
        to_json(&json!({
            "mincuts": cuts,
            "capacity": cap.capacity,
            "sources": n.sources().len(),
            "achievable": cap.achievable,
        }))
    } else if csv {
        let mut s = String::from("receiver,mincut\n");
        for c in &cap.cuts {
            writeln!(s, "{},{}", name(c.receiver), c.mincut).unwrap();
        }
        s
    } else {
        let width = cap.cuts.iter().map(|c| name(c.receiver).len()).max().unwrap_or(0).max(8);
        let mut s = format!("{:width$}  mincut\n", "receiver");
        for c in &cap.cuts {
            writeln!(s, "{:width$}  {}", name(c.receiver), c.mincut).unwrap();
        }
        writeln!(
            s,
            "capacity: {} with {} sources ({})",
            cap.capacity,
            n.sources().len(),
            if cap.achievable { "achievable" } else { "not achievable" }
        )
        .unwrap();
        s
    };
    Ok(if cap.achievable { CommandOutcome::ok(out) } else { CommandOutcome::negative(out) })
}

fn plural(k: usize) -> &'static str {
    if k == 1 {
        ""
    } else {
        "s"
    }
}

fn cmd_mincode(ctx: &Ctx, input: &Input, backend: Backend) -> Outcome {
    let (n, _) = load_network(input)?;
    let res = solve(ctx, &n, backend)?;
    let points: Vec<&str> = res.coding_points.edges().map(|e| n.edge_name(e)).collect();
    let paths = res.path_system.to_names(&n);
    let out = if ctx.json {
        to_json(&json!({
            "backend": backend.name(),
            "optimum": res.coding_point_count,
            "coding_points": points,
            "paths": paths,
            "nodes_explored": res.trace.nodes_explored,
        }))
    } else {
        let k = res.coding_point_count;
        let mut s = format!("optimum: {k} coding point{}\n", plural(k));
        if !points.is_empty() {
            writeln!(s, "coding points: {}", points.join(" ")).unwrap();
        }
        s.push_str("paths:\n");
        for (r, by_source) in &paths {
            for (src, edges) in by_source {
                writeln!(s, "  {r} <- {src}: {}", edges.join(" ")).unwrap();
            }
        }
        s
    };
    Ok(CommandOutcome::ok(out))
}

/// Code graph of a network, taking its own paths or an optimal system.
fn network_code_graph(
    ctx: &Ctx,
    n: &Network,
    ps: Option<PathSystem>,
    backend: Backend,
) -> Result<CodeGraph, CommandOutcome> {
    let ps = match ps {
        Some(p) => p,
        None => solve(ctx, n, backend)?.path_system,
    };
    let (rn, rps) = reduce_network(n, &ps).map_err(err)?;
    let cps = detect_coding_points(&rn, &rps).map_err(err)?;
    build_code_graph(&rn, &rps, &cps).map_err(err)
}

fn label_set(labels: &std::collections::BTreeSet<String>) -> String {
    format!("{{{}}}", labels.iter().cloned().collect::<Vec<_>>().join(", "))
}

fn cmd_codegraph(ctx: &Ctx, input: &Input, dot: bool, backend: Backend) -> Outcome {
    let (n, ps) = load_network(input)?;
    let g = network_code_graph(ctx, &n, ps, backend)?;
    let out = if ctx.json {
        to_json(&CodeGraphDoc::from_code_graph(&g))
    } else if dot {
        let mut s = String::from("digraph codegraph {\n");
        for v in g.nodes() {
            let shape = if v.kind == NodeKind::Source { "box" } else { "circle" };
            writeln!(s, "  \"{}\" [shape={shape}, xlabel=\"{}\"];", v.id, label_set(&v.labels)).unwrap();
        }
        for &(a, b) in g.edges() {
            writeln!(s, "  \"{}\" -> \"{}\";", g.node(a).id, g.node(b).id).unwrap();
        }
        s.push_str("}\n");
        s
    } else {
        let mut s = String::from("nodes:\n");
        for v in g.nodes() {
            let kind = if v.kind == NodeKind::Source { "source" } else { "coding" };
            writeln!(s, "  {} {kind} labels {}", v.id, label_set(&v.labels)).unwrap();
        }
        s.push_str("edges:\n");
        for &(a, b) in g.edges() {
            writeln!(s, "  {} -> {}", g.node(a).id, g.node(b).id).unwrap();
        }
        s
    };
    Ok(CommandOutcome::ok(out))
}

/// A constraint system and whether the combination counter applies.
struct LabelTarget {
    cs: ConstraintSystem,
    combination: bool,
}

fn load_target(ctx: &Ctx, input: &Input) -> Result<LabelTarget, CommandOutcome> {
    let from_graph = |g: CodeGraph| LabelTarget {
        combination: is_isomorphic(&g, &builtin::combination_code_graph()),
        cs: extract_constraints(&g),
    };
    if let Some(name) = &input.builtin {
        let cs = builtin::builtin_system(name).ok_or_else(|| {
            err(format!("unknown built-in {name}; expected one of {}", builtin::SYSTEM_NAMES.join(", ")))
        })?;
        return Ok(LabelTarget { cs, combination: name == "combination" });
    }
    Ok(match read_document(input)? {
        Document::CodeGraph(doc) => from_graph(doc.to_code_graph().map_err(err)?),
        Document::Constraints(doc) => LabelTarget { cs: doc.to_system().map_err(err)?, combination: false },
        Document::Network(doc) => {
            let (n, ps) = doc.to_network().map_err(err)?;
            from_graph(network_code_graph(ctx, &n, ps, Backend::Ilp)?)
        }
    })
}

fn field(spec: &str) -> Result<FiniteField, CommandOutcome> {
    FiniteField::from_spec(spec).map_err(err)
}

fn parse_range(spec: &str, deep: bool) -> Result<Vec<u64>, CommandOutcome> {
    let bad = || err(format!("field range must look like 2..17, got {spec}"));
    let (a, b) = spec.split_once("..").ok_or_else(bad)?;
    let lo: u64 = a.trim().parse().map_err(|_| bad())?;
    let hi: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    let hi = if deep { hi.max(DEEP_LIMIT) } else { hi };
    if lo > hi || hi > MAX_ORDER {
        return Err(bad());
    }
    Ok(prime_powers(lo, hi))
}

/// Count under `mode` and the counter used.
fn count(
    ctx: &Ctx,
    t: &LabelTarget,
    f: &FiniteField,
    mode: NormalizationMode,
    generic: bool,
) -> Result<(BigUint, &'static str), LabelingError> {
    if t.combination && !generic {
        let q = f.q() as u64;
        let parts = map_indexed(combination_partitions(q), ctx.threads, |i| combination_projective_partial(q, i));
        return Ok((combination_scale(q, parts.into_iter().sum(), mode), "combination"));
    }
    if t.cs.basis().is_none() && mode != NormalizationMode::Raw {
        return Err(LabelingError::NoBasis(mode));
    }
    let search = counting_search(&t.cs, f)?;
    let hists = map_indexed(search.partition_count(), ctx.threads, |i| search.count_partition(i));
    let mut total = vec![0u64; search.free_columns() + 1];
    for h in hists {
        for (a, b) in total.iter_mut().zip(h) {
            *a += b;
        }
    }
    Ok((count_from_histogram(&total, f.q(), t.cs.m(), t.cs.basis().is_some(), mode)?, "generic"))
}

fn field_json(f: &FiniteField) -> Value {
    json!({"q": f.q(), "p": f.p(), "k": f.k()})
}

fn matrix_text(l: &Labeling) -> String {
    l.rows()
        .iter()
        .map(|r| format!("  [{}]\n", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_label(
    ctx: &Ctx,
    input: &Input,
    field_spec: Option<String>,
    fields: Option<String>,
    exists: bool,
    enumerate: Option<usize>,
    mode: NormalizationMode,
    generic: bool,
    csv: bool,
) -> Outcome {
    let t = load_target(ctx, input)?;
    if let Some(range) = fields {
        let qs = parse_range(&range, false)?;
        let counts = qs
            .iter()
            .map(|&q| count(ctx, &t, &field(&q.to_string())?, mode, generic).map_err(err))
            .collect::<Result<Vec<_>, _>>()?;
        let out = if ctx.json {
            let rows: Vec<Value> = qs
                .iter()
                .zip(&counts)
                .map(|(q, (c, counter))| json!({"q": q, "count": c.to_string(), "counter": counter}))
                .collect();
            to_json(&json!({"mode": mode.name(), "counts": rows}))
        } else {
            let mut s = String::from(if csv { "q,count\n" } else { "" });
            for (q, (c, _)) in qs.iter().zip(&counts) {
                if csv {
                    writeln!(s, "{q},{c}").unwrap();
                } else {
                    writeln!(s, "GF({q}) {}: {c}", mode.name()).unwrap();
                }
            }
            s
        };
        return Ok(CommandOutcome::ok(out));
    }
    let f = field(field_spec.as_deref().expect("clap requires --field"))?;
    let q = f.q();
    if exists {
        let found = exists_labeling(&t.cs, &f);
        let out = if ctx.json {
            to_json(&json!({
                "field": field_json(&f),
                "exists": found.is_some(),
                "columns": t.cs.columns(),
                "labeling": found.as_ref().map(|l| l.rows()),
            }))
        } else {
            match &found {
                Some(l) => format!("labeling over GF({q}):\n{}", matrix_text(l)),
                None => format!("no labeling over GF({q})\n"),
            }
        };
        return Ok(if found.is_some() { CommandOutcome::ok(out) } else { CommandOutcome::negative(out) });
    }
    if let Some(limit) = enumerate {
        let all = enumerate_labelings(&t.cs, &f, mode, limit).map_err(err)?;
        let out = if ctx.json {
            let ls: Vec<Vec<Vec<u32>>> = all.iter().map(|l| l.rows()).collect();
            to_json(&json!({"field": field_json(&f), "mode": mode.name(), "columns": t.cs.columns(), "labelings": ls}))
        } else {
            let mut s = format!("{} labeling{} over GF({q}) ({}):\n", all.len(), plural(all.len()), mode.name());
            for (i, l) in all.iter().enumerate() {
                writeln!(s, "#{}", i + 1).unwrap();
                s.push_str(&matrix_text(l));
            }
            s
        };
        return Ok(CommandOutcome::ok(out));
    }
    let (c, counter) = count(ctx, &t, &f, mode, generic).map_err(err)?;
    let out = ctx_line(
        ctx,
        &format!("labelings over GF({q}) ({}): {c}", mode.name()),
        json!({"field": field_json(&f), "mode": mode.name(), "count": c.to_string(), "counter": counter}),
    );
    Ok(CommandOutcome::ok(out))
}

fn cmd_qmin(ctx: &Ctx, input: &Input, max: u64) -> Outcome {
    if max > MAX_ORDER {
        return Err(err(format!("--max is limited to {MAX_ORDER}")));
    }
    let t = load_target(ctx, input)?;
    let tested = prime_powers(2, max);
    let fields = tested.iter().map(|&q| FiniteField::of_order(q).map_err(err)).collect::<Result<Vec<_>, _>>()?;
    let found = map_indexed(fields.len(), ctx.threads, |i| exists_labeling(&t.cs, &fields[i]).is_some());
    let achievable: Vec<u64> = tested.iter().zip(&found).filter(|(_, ok)| **ok).map(|(q, _)| *q).collect();
    let q_min = achievable.first().copied();
    let out = if ctx.json {
        to_json(&json!({"q_min": q_min, "achievable": achievable, "tested": tested}))
    } else {
        let list = achievable.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
        match q_min {
            Some(q) => format!("q_min: {q}\nachievable (q <= {max}): {{{list}}}\n"),
            None => format!("no labeling over any GF(q) with q <= {max}\n"),
        }
    };
    Ok(if q_min.is_some() { CommandOutcome::ok(out) } else { CommandOutcome::negative(out) })
}

fn rational_text(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        r.to_string()
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_profile(
    ctx: &Ctx,
    input: &Input,
    range: &str,
    fit: Option<usize>,
    csv: Option<PathBuf>,
    mode: NormalizationMode,
    generic: bool,
    deep: bool,
) -> Outcome {
    let t = load_target(ctx, input)?;
    let qs = parse_range(range, deep)?;
    let mut points = Vec::new();
    let mut counter = "generic";
    for &q in &qs {
        let (c, used) = count(ctx, &t, &field(&q.to_string())?, mode, generic).map_err(err)?;
        counter = used;
        points.push((q, c));
    }
    let profile = CountProfile::new(points.clone()).map_err(err)?;
    let fitted = match fit {
        Some(d) => {
            let outcome = fit_polynomial(&profile, d).map_err(err)?;
            Some((d, interpolate(&points[..=d]), outcome))
        }
        None => None,
    };

    if let Some(path) = &csv {
        let mut s = String::from(if fitted.is_some() { "q,count,fitted,residual\n" } else { "q,count\n" });
        for (q, c) in &points {
            match &fitted {
                Some((_, coeffs, _)) => writeln!(
                    s,
                    "{q},{c},{},{}",
                    rational_text(&evaluate(coeffs, *q)),
                    rational_text(&residual(coeffs, *q, c))
                )
                .unwrap(),
                None => writeln!(s, "{q},{c}").unwrap(),
            }
        }
        fs::write(path, s).map_err(|e| err(format!("{}: {e}", path.display())))?;
    }

    let out = if ctx.json {
        let pts: Vec<Value> = points.iter().map(|(q, c)| json!({"q": q, "count": c.to_string()})).collect();
        let fit_json = fitted.as_ref().map(|(d, coeffs, outcome)| match outcome {
            FitOutcome::Fits(_) => json!({
                "degree": d,
                "fits": true,
                "coefficients": coeffs.iter().map(rational_text).collect::<Vec<_>>(),
            }),
            FitOutcome::Mismatch { q, predicted, actual } => json!({
                "degree": d,
                "fits": false,
                "mismatch": {"q": q, "predicted": rational_text(predicted), "actual": actual.to_string()},
            }),
        });
        to_json(&json!({"mode": mode.name(), "counter": counter, "points": pts, "fit": fit_json}))
    } else {
        let mut s = format!("{:>8}  count ({})\n", "q", mode.name());
        for (q, c) in &points {
            writeln!(s, "{q:>8}  {c}").unwrap();
        }
        match &fitted {
            Some((d, coeffs, FitOutcome::Fits(_))) => {
                let terms: Vec<String> = coeffs.iter().map(rational_text).collect();
                writeln!(s, "degree {d} fit holds; coefficients of q^0..q^{d}: {}", terms.join(" ")).unwrap();
            }
            Some((d, _, FitOutcome::Mismatch { q, predicted, actual })) => {
                writeln!(s, "degree {d} fit fails at q={q}: predicted {}, actual {actual}", rational_text(predicted))
                    .unwrap()
            }
            None => {}
        }
        s
    };
    Ok(CommandOutcome::ok(out))
}

fn cmd_corpus(ctx: &Ctx, export: Option<PathBuf>) -> Outcome {
    if let Some(dir) = export {
        corpus::export(&dir).map_err(|e| err(format!("{}: {e}", dir.display())))?;
        return Ok(CommandOutcome::ok(ctx_line(
            ctx,
            &format!("wrote {} files to {}", ENTRIES.len(), dir.display()),
            json!({"written": ENTRIES.iter().map(|e| e.file).collect::<Vec<_>>()}),
        )));
    }
    let dir = corpus::corpus_dir();
    let out = if ctx.json {
        let entries: Vec<Value> = ENTRIES
            .iter()
            .map(|e| json!({"file": e.file, "kind": e.kind.name(), "description": e.description, "present": dir.join(e.file).is_file()}))
            .collect();
        to_json(&json!({"entries": entries}))
    } else {
        let mut s = String::new();
        for e in &ENTRIES {
            writeln!(s, "{:28} {:12} {}", e.file, e.kind.name(), e.description).unwrap();
        }
        s
    };
    Ok(CommandOutcome::ok(out))
}
