//! The `rhobisim` command line: argument parsing, report construction and
//! rendering. [`execute`] is pure apart from reading input files, so tests
//! can drive it directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::engine::{check_rho_bisim_with, greatest_rho_bisim, BisimReport, CheckOptions, CoherentMode, Witness};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational};
use crate::linear::{check_linear_bisim, greatest_linear_bisim, SubspaceFile, SubspaceRelation};
use crate::logics::{eval_formula, parse_formula, theory_kernel, Kernel, Logic, Predicate};
use crate::models::{parse_model, Model, SetCoalgebra};
use crate::oracle::{oracle_linear_gfp, run_oracle_suite, InstanceFamily, ORACLE_LINEAR_DIM};
use crate::relations::{compose, is_full, join, Relation, RelationFile};
use crate::zoo::{compare, translate_formula, Inclusion};

/// Version tag of the JSON report layout.
pub const REPORT_SCHEMA: &str = "rhobisim-report/1";

/// Environment variable bounding the worker threads.
pub const THREADS_ENV: &str = "RHOBISIM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "rhobisim", version, about = "Logic-induced bisimulations for finite systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[default]
    Brute,
    Generators,
    Auto,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Add wall-clock timing to the report (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct LogicArg {
    /// Logic from the catalogue; defaults to hm for LTSs, kripke for Kripke
    /// models and linear-hm for automata.
    #[arg(long)]
    pub logic: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check whether a relation (or subspace, for automata) is a ρ-bisimulation.
    Check {
        model1: PathBuf,
        model2: PathBuf,
        relation: PathBuf,
        /// How coherent pairs are produced.
        #[arg(long, value_enum, default_value_t = ModeArg::Brute)]
        mode: ModeArg,
        /// Largest n1 + n2 for brute-force coherent pairs.
        #[arg(long, default_value_t = crate::relations::DEFAULT_COHERENT_BOUND)]
        bound: usize,
        #[command(flatten)]
        logic: LogicArg,
        #[command(flatten)]
        out: Output,
    },
    /// Compute the greatest ρ-bisimulation.
    Gfp {
        model1: PathBuf,
        model2: PathBuf,
        #[command(flatten)]
        logic: LogicArg,
        #[command(flatten)]
        out: Output,
    },
    /// Compute logical equivalence, optionally evaluating formulas.
    Logeq {
        model1: PathBuf,
        model2: PathBuf,
        /// Formula to evaluate on both models (repeatable).
        #[arg(long = "formula")]
        formulas: Vec<String>,
        #[command(flatten)]
        logic: LogicArg,
        #[command(flatten)]
        out: Output,
    },
    /// Compare T-bisimilarity, precocongruence, behavioural equivalence,
    /// logical equivalence and ρ-bisimilarity.
    Compare {
        model1: PathBuf,
        model2: PathBuf,
        #[command(flatten)]
        logic: LogicArg,
        #[command(flatten)]
        out: Output,
    },
    /// Compose two relations and check all three.
    Compose {
        model1: PathBuf,
        model2: PathBuf,
        model3: PathBuf,
        relation12: PathBuf,
        relation23: PathBuf,
        #[command(flatten)]
        logic: LogicArg,
        #[command(flatten)]
        out: Output,
    },
    /// Join relations and check the result.
    Join {
        model1: PathBuf,
        model2: PathBuf,
        relations: Vec<PathBuf>,
        #[command(flatten)]
        logic: LogicArg,
        #[command(flatten)]
        out: Output,
    },
    /// Translate a trace formula into Hennessy-Milner syntax.
    Translate {
        formula: String,
        /// Also evaluate both formulas on this model.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the engines against the brute-force oracles on a seeded family.
    Oracle {
        /// Family spec `kind:N1xN2@COUNT[/LABELS]`, kind one of lts, kripke, wa.
        #[arg(default_value = "lts:3x3@50")]
        spec: String,
        #[command(flatten)]
        out: Output,
    },
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const NOT_BISIMULATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const ORACLE_MISMATCH: i32 = 3;
}

/// A report under construction.
struct Report {
    command: &'static str,
    argv: Vec<String>,
    inputs: Vec<(String, String)>,
    logic: Option<String>,
    results: serde_json::Map<String, Value>,
    text: String,
    code: i32,
}

impl Report {
    fn new(command: &'static str, argv: &[String]) -> Self {
        Report {
            command,
            argv: argv.to_vec(),
            inputs: Vec::new(),
            logic: None,
            results: serde_json::Map::new(),
            text: String::new(),
            code: exit::OK,
        }
    }

    fn put(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn render(self, out: &Output, elapsed_ms: f64) -> String {
        match out.format {
            Format::Json => {
                let mut doc = serde_json::Map::new();
                doc.insert("schema".into(), json!(REPORT_SCHEMA));
                doc.insert("command".into(), json!(self.command));
                doc.insert("argv".into(), json!(self.argv));
                doc.insert(
                    "inputs".into(),
                    Value::Array(
                        self.inputs
                            .iter()
                            .map(|(p, d)| json!({"path": p, "sha256": d}))
                            .collect(),
                    ),
                );
                if let Some(l) = &self.logic {
                    doc.insert("logic".into(), json!(l));
                }
                doc.insert("results".into(), Value::Object(self.results));
                if out.timing {
                    doc.insert("timing_ms".into(), json!(elapsed_ms));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "command: {}", self.command);
                for (p, d) in &self.inputs {
                    let _ = writeln!(s, "input: {p} sha256:{}", &d[..16]);
                }
                if let Some(l) = &self.logic {
                    let _ = writeln!(s, "logic: {l}");
                }
                s.push_str(&self.text);
                if out.timing {
                    let _ = writeln!(s, "time: {elapsed_ms:.3} ms");
                }
                s
            }
        }
    }
}

fn load_model(report: &mut Report, path: &Path) -> Result<Model> {
    let bytes = std::fs::read(path)?;
    report.inputs.push((path.display().to_string(), hex::encode(Sha256::digest(&bytes))));
    let text = String::from_utf8(bytes).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

fn load_json<T: serde::de::DeserializeOwned>(report: &mut Report, path: &Path) -> Result<T> {
    let bytes = std::fs::read(path)?;
    report.inputs.push((path.display().to_string(), hex::encode(Sha256::digest(&bytes))));
    Ok(serde_json::from_slice(&bytes)?)
}

/// Aligns the label order of `m2` with `m1` when both use the same labels.
fn align(m1: &Model, m2: Model) -> Result<Model> {
    if m1.labels() != m2.labels() {
        let mut a = m1.labels().to_vec();
        let mut b = m2.labels().to_vec();
        a.sort();
        b.sort();
        if a == b {
            return m2.with_label_order(m1.labels());
        }
    }
    Ok(m2)
}

fn choose_logic(report: &mut Report, arg: &LogicArg, m: &Model) -> Result<Logic> {
    let name = match (&arg.logic, m) {
        (Some(l), _) => l.as_str(),
        (None, Model::Wa(_)) => "linear-hm",
        (None, Model::Kripke(_)) => "kripke",
        (None, Model::Lts(_)) => "hm",
    };
    let logic = Logic::by_name(name)?;
    report.logic = Some(logic.name().to_string());
    Ok(logic)
}

fn set_of(m: &Model) -> Result<&dyn SetCoalgebra> {
    m.as_set().ok_or(Error::BaseMismatch {
        logic: "set logic".into(),
        model: m.kind(),
    })
}

fn pairs_json(r: &Relation) -> Value {
    json!(r.pairs().map(|(i, j)| [i, j]).collect::<Vec<_>>())
}

fn pairs_text(r: &Relation, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> String {
    let items: Vec<String> = r
        .pairs()
        .map(|(i, j)| format!("({}, {})", m1.state_names()[i], m2.state_names()[j]))
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn row_json(v: &[Rational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn row_text(v: &[Rational]) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

fn subspace_json(s: &SubspaceRelation) -> Value {
    Value::Array(s.basis().rows().iter().map(|r| row_json(r)).collect())
}

fn subspace_text(s: &SubspaceRelation) -> String {
    if s.rank() == 0 {
        return "span{}".into();
    }
    let rows: Vec<String> = s.basis().rows().iter().map(|r| row_text(r)).collect();
    format!("span{{{}}}", rows.join(", "))
}

fn set_text(s: &fixedbitset::FixedBitSet, names: &[String]) -> String {
    format!("{{{}}}", s.ones().map(|x| names[x].as_str()).collect::<Vec<_>>().join(", "))
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Set { pair, lifting, coherent } => json!({
            "pair": [pair.0, pair.1],
            "lifting": lifting,
            "coherent": coherent.as_ref().map(|c| json!({
                "left": c.left.ones().collect::<Vec<_>>(),
                "right": c.right.ones().collect::<Vec<_>>(),
            })),
        }),
        Witness::Linear { vector, lifting, dual_pair } => json!({
            "vector": row_json(vector),
            "lifting": lifting,
            "dual_pair": dual_pair.as_ref().map(|d| row_json(d)),
        }),
    }
}

fn witness_text(w: &Witness, names: Option<(&[String], &[String])>) -> String {
    match w {
        Witness::Set { pair, lifting, coherent } => {
            let (n1, n2) = names.expect("set witness has names");
            let mut s = format!("witness: pair ({}, {}) lifting {lifting}", n1[pair.0], n2[pair.1]);
            if let Some(c) = coherent {
                let _ = write!(s, " coherent ({}, {})", set_text(&c.left, n1), set_text(&c.right, n2));
            }
            s
        }
        Witness::Linear { vector, lifting, dual_pair } => {
            let mut s = format!("witness: vector {} lifting {lifting}", row_text(vector));
            if let Some(d) = dual_pair {
                let _ = write!(s, " dual pair {}", row_text(d));
            }
            s
        }
    }
}

fn verdict_json(r: &BisimReport) -> Value {
    json!({
        "verdict": r.verdict,
        "witness": r.witness.as_ref().map(witness_json),
    })
}

fn mode_options(mode: ModeArg, bound: usize) -> CheckOptions {
    CheckOptions {
        mode: match mode {
            ModeArg::Brute => CoherentMode::BruteForce,
            ModeArg::Generators => CoherentMode::Generators,
            ModeArg::Auto => CoherentMode::Auto,
        },
        bound,
    }
}

fn load_relation(report: &mut Report, path: &Path, n1: usize, n2: usize) -> Result<Relation> {
    load_json::<RelationFile>(report, path)?.to_relation(n1, n2)
}

fn cmd_check(
    report: &mut Report,
    paths: (&Path, &Path, &Path),
    opts: CheckOptions,
    logic_arg: &LogicArg,
) -> Result<()> {
    let m1 = load_model(report, paths.0)?;
    let m2 = align(&m1, load_model(report, paths.1)?)?;
    let logic = choose_logic(report, logic_arg, &m1)?;
    let verdict = if let (Model::Wa(w1), Model::Wa(w2)) = (&m1, &m2) {
        let b = load_json::<SubspaceFile>(report, paths.2)?.to_relation(w1.dim(), w2.dim())?;
        report.put("subspace", subspace_json(&b));
        let r = check_linear_bisim(&logic, w1, w2, &b)?;
        report.line(format!("subspace: {}", subspace_text(&b)));
        if let Some(w) = &r.witness {
            report.line(witness_text(w, None));
        }
        r
    } else {
        let (s1, s2) = (set_of(&m1)?, set_of(&m2)?);
        let b = load_relation(report, paths.2, s1.num_states(), s2.num_states())?;
        report.put("relation", pairs_json(&b));
        report.put("mode", serde_json::to_value(opts.mode).expect("plain enum"));
        let r = check_rho_bisim_with(&logic, s1, s2, &b, &opts)?;
        report.line(format!("relation: {}", pairs_text(&b, s1, s2)));
        if let Some(w) = &r.witness {
            report.line(witness_text(w, Some((s1.state_names(), s2.state_names()))));
        }
        r
    };
    report.put("check", verdict_json(&verdict));
    report.line(format!(
        "verdict: {}",
        if verdict.verdict { "rho-bisimulation" } else { "not a rho-bisimulation" }
    ));
    if !verdict.verdict {
        report.code = exit::NOT_BISIMULATION;
    }
    Ok(())
}

fn cmd_gfp(report: &mut Report, p1: &Path, p2: &Path, logic_arg: &LogicArg) -> Result<()> {
    let m1 = load_model(report, p1)?;
    let m2 = align(&m1, load_model(report, p2)?)?;
    let logic = choose_logic(report, logic_arg, &m1)?;
    if let (Model::Wa(w1), Model::Wa(w2)) = (&m1, &m2) {
        let (g, r) = greatest_linear_bisim(&logic, w1, w2)?;
        report.put("gfp", subspace_json(&g));
        report.put("dimension", json!(g.rank()));
        report.put("iterations", json!(r.iterations));
        report.line(format!("greatest bisimulation: {}", subspace_text(&g)));
        report.line(format!("dimension: {}", g.rank()));
        report.line(format!("iterations: {}", r.iterations));
    } else {
        let (s1, s2) = (set_of(&m1)?, set_of(&m2)?);
        let (g, r) = greatest_rho_bisim(&logic, s1, s2)?;
        report.put("gfp", pairs_json(&g));
        report.put("iterations", json!(r.iterations));
        report.line(format!("greatest bisimulation: {}", pairs_text(&g, s1, s2)));
        report.line(format!("iterations: {}", r.iterations));
    }
    Ok(())
}

fn cmd_logeq(report: &mut Report, p1: &Path, p2: &Path, formulas: &[String], logic_arg: &LogicArg) -> Result<()> {
    let m1 = load_model(report, p1)?;
    let m2 = align(&m1, load_model(report, p2)?)?;
    let logic = choose_logic(report, logic_arg, &m1)?;
    match theory_kernel(&logic, &m1, &m2)? {
        Kernel::Set(k) => {
            let (s1, s2) = (set_of(&m1)?, set_of(&m2)?);
            report.put("kernel", pairs_json(&k));
            report.line(format!("logical equivalence: {}", pairs_text(&k, s1, s2)));
        }
        Kernel::Linear(k) => {
            report.put("kernel", subspace_json(&k));
            report.line(format!("logical equivalence: {}", subspace_text(&k)));
        }
    }
    let mut evals = Vec::new();
    for src in formulas {
        let phi = parse_formula(src)?;
        let e1 = eval_formula(&logic, &m1, &phi)?;
        let e2 = eval_formula(&logic, &m2, &phi)?;
        let (j, t) = match (&e1, &e2, m1.as_set(), m2.as_set()) {
            (Predicate::Set(a), Predicate::Set(b), Some(s1), Some(s2)) => (
                json!({"formula": phi.to_string(),
                       "left": a.ones().collect::<Vec<_>>(),
                       "right": b.ones().collect::<Vec<_>>()}),
                format!(
                    "[[{phi}]]: {} | {}",
                    set_text(a, s1.state_names()),
                    set_text(b, s2.state_names())
                ),
            ),
            (Predicate::Linear(a), Predicate::Linear(b), _, _) => (
                json!({"formula": phi.to_string(), "left": row_json(a), "right": row_json(b)}),
                format!("[[{phi}]]: {} | {}", row_text(a), row_text(b)),
            ),
            _ => unreachable!("evaluation matches the model kind"),
        };
        evals.push(j);
        report.line(t);
    }
    if !formulas.is_empty() {
        report.put("formulas", Value::Array(evals));
    }
    Ok(())
}

fn subspace_inclusion(a: &SubspaceRelation, b: &SubspaceRelation) -> Inclusion {
    match (a.is_subspace_of(b), b.is_subspace_of(a)) {
        (true, true) => Inclusion::Equal,
        (true, false) => Inclusion::Subset,
        (false, true) => Inclusion::Superset,
        (false, false) => Inclusion::Incomparable,
    }
}

fn table_text(report: &mut Report, names: &[&str], table: &[Vec<Inclusion>]) {
    let width = names.iter().map(|n| n.len()).max().unwrap_or(0);
    let header: Vec<String> = (0..names.len()).map(|j| format!("{:>3}", j + 1)).collect();
    report.line(format!("{:width$}     {}", "", header.join(""), width = width));
    for (i, row) in table.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| format!("{:>3}", c.symbol())).collect();
        report.line(format!("{:width$} ({}) {}", names[i], i + 1, cells.join(""), width = width));
    }
}

fn table_json(names: &[&str], table: &[Vec<Inclusion>]) -> Value {
    let mut rows = Vec::new();
    for (i, row) in table.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if i < j {
                rows.push(json!({"left": names[i], "right": names[j], "inclusion": c}));
            }
        }
    }
    Value::Array(rows)
}

fn cmd_compare(report: &mut Report, p1: &Path, p2: &Path, logic_arg: &LogicArg) -> Result<()> {
    let m1 = load_model(report, p1)?;
    let m2 = align(&m1, load_model(report, p2)?)?;
    let logic = choose_logic(report, logic_arg, &m1)?;
    if let (Model::Wa(w1), Model::Wa(w2)) = (&m1, &m2) {
        let mut rels = vec![
            ("theory-kernel", theory_kernel(&logic, &m1, &m2)?.as_linear().cloned().expect("linear")),
            ("rho-bisimilarity", greatest_linear_bisim(&logic, w1, w2)?.0),
        ];
        if w1.dim().max(w2.dim()) <= ORACLE_LINEAR_DIM {
            rels.push(("oracle-kernel", oracle_linear_gfp(w1, w2)?));
        }
        let names: Vec<&str> = rels.iter().map(|r| r.0).collect();
        let table: Vec<Vec<Inclusion>> = rels
            .iter()
            .map(|(_, a)| rels.iter().map(|(_, b)| subspace_inclusion(a, b)).collect())
            .collect();
        let mut obj = serde_json::Map::new();
        for (n, r) in &rels {
            obj.insert(n.to_string(), subspace_json(r));
            report.line(format!("{n}: {}", subspace_text(r)));
        }
        report.put("relations", Value::Object(obj));
        report.put("inclusions", table_json(&names, &table));
        table_text(report, &names, &table);
        return Ok(());
    }
    let (s1, s2) = (set_of(&m1)?, set_of(&m2)?);
    let c = compare(&logic, s1, s2)?;
    let names: Vec<&str> = c.relations.iter().map(|r| r.0).collect();
    let mut obj = serde_json::Map::new();
    for (n, r) in &c.relations {
        obj.insert(n.to_string(), pairs_json(r));
        report.line(format!("{n}: {}", pairs_text(r, s1, s2)));
    }
    report.put("relations", Value::Object(obj));
    report.put("inclusions", table_json(&names, &c.table));
    report.put(
        "checks",
        Value::Object(c.checks.iter().map(|(n, ok)| (n.to_string(), json!(ok))).collect()),
    );
    table_text(report, &names, &c.table);
    for (n, ok) in &c.checks {
        report.line(format!("check {n}: {}", if *ok { "pass" } else { "FAIL" }));
    }
    Ok(())
}

fn cmd_compose(report: &mut Report, models: [&Path; 3], rels: [&Path; 2], logic_arg: &LogicArg) -> Result<()> {
    let m1 = load_model(report, models[0])?;
    let m2 = align(&m1, load_model(report, models[1])?)?;
    let m3 = align(&m1, load_model(report, models[2])?)?;
    let logic = choose_logic(report, logic_arg, &m1)?;
    let (s1, s2, s3) = (set_of(&m1)?, set_of(&m2)?, set_of(&m3)?);
    let b12 = load_relation(report, rels[0], s1.num_states(), s2.num_states())?;
    let b23 = load_relation(report, rels[1], s2.num_states(), s3.num_states())?;
    let b13 = compose(&b12, &b23)?;
    let opts = CheckOptions::default();
    let entries = [
        ("relation12", &b12, s1, s2),
        ("relation23", &b23, s2, s3),
        ("composite", &b13, s1, s3),
    ];
    for (name, b, x, y) in entries {
        let r = check_rho_bisim_with(&logic, x, y, b, &opts)?;
        let mut v = verdict_json(&r);
        v["relation"] = pairs_json(b);
        v["full"] = json!(is_full(b));
        report.put(name, v);
        report.line(format!(
            "{name}: {} full={} verdict={}",
            pairs_text(b, x, y),
            is_full(b),
            r.verdict
        ));
        if let Some(w) = &r.witness {
            report.line(format!("  {}", witness_text(w, Some((x.state_names(), y.state_names())))));
        }
    }
    Ok(())
}

fn cmd_join(report: &mut Report, p1: &Path, p2: &Path, rels: &[PathBuf], logic_arg: &LogicArg) -> Result<()> {
    let m1 = load_model(report, p1)?;
    let m2 = align(&m1, load_model(report, p2)?)?;
    let logic = choose_logic(report, logic_arg, &m1)?;
    let (s1, s2) = (set_of(&m1)?, set_of(&m2)?);
    let (n1, n2) = (s1.num_states(), s2.num_states());
    let mut loaded = Vec::new();
    let mut parts = Vec::new();
    for p in rels {
        let b = load_relation(report, p, n1, n2)?;
        let r = check_rho_bisim_with(&logic, s1, s2, &b, &CheckOptions::default())?;
        report.line(format!("part: {} verdict={}", pairs_text(&b, s1, s2), r.verdict));
        let mut v = verdict_json(&r);
        v["relation"] = pairs_json(&b);
        parts.push(v);
        loaded.push(b);
    }
    let j = join(n1, n2, &loaded)?;
    let r = check_rho_bisim_with(&logic, s1, s2, &j, &CheckOptions::default())?;
    report.put("parts", Value::Array(parts));
    let mut v = verdict_json(&r);
    v["relation"] = pairs_json(&j);
    report.put("join", v);
    report.line(format!("join: {} verdict={}", pairs_text(&j, s1, s2), r.verdict));
    Ok(())
}

fn cmd_translate(report: &mut Report, src: &str, model: Option<&Path>) -> Result<()> {
    let phi = parse_formula(src)?;
    let tau = translate_formula(&phi)?;
    report.logic = Some("trace -> hm".into());
    report.put("input", json!(phi.to_string()));
    report.put("translation", json!(tau.to_string()));
    report.line(format!("trace: {phi}"));
    report.line(format!("hm: {tau}"));
    if let Some(p) = model {
        let m = load_model(report, p)?;
        let a = eval_formula(&Logic::by_name("trace")?, &m, &phi)?;
        let b = eval_formula(&Logic::by_name("hm")?, &m, &tau)?;
        let (Predicate::Set(a), Predicate::Set(b)) = (&a, &b) else {
            unreachable!("set logics evaluate to sets")
        };
        let names = set_of(&m)?.state_names();
        report.put("extension", json!(a.ones().collect::<Vec<_>>()));
        report.put("preserved", json!(a == b));
        report.line(format!("extension: {}", set_text(a, names)));
        report.line(format!("preserved: {}", a == b));
    }
    Ok(())
}

fn cmd_oracle(report: &mut Report, spec: &str) -> Result<()> {
    let family: InstanceFamily = spec.parse()?;
    let r = run_oracle_suite(&family)?;
    report.put("family", json!(r.family));
    report.put("instances", json!(r.instances));
    report.put("checks", json!(r.checks));
    report.put("mismatches", serde_json::to_value(&r.mismatches).expect("serializable"));
    report.line(format!("family: {}", r.family));
    report.line(format!("instances: {} checks: {}", r.instances, r.checks));
    for m in &r.mismatches {
        report.line(format!("MISMATCH seed {}: {}", m.seed, m.check));
    }
    report.line(format!("verdict: {}", if r.ok() { "all agree" } else { "MISMATCH" }));
    if !r.ok() {
        report.code = exit::ORACLE_MISMATCH;
    }
    Ok(())
}

/// Runs one invocation. `args` excludes the program name.
pub fn execute(args: &[String]) -> Outcome {
    let argv = std::iter::once("rhobisim".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if code == exit::OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let start = Instant::now();
    let (name, out) = match &cli.command {
        Command::Check { out, .. } => ("check", out),
        Command::Gfp { out, .. } => ("gfp", out),
        Command::Logeq { out, .. } => ("logeq", out),
        Command::Compare { out, .. } => ("compare", out),
        Command::Compose { out, .. } => ("compose", out),
        Command::Join { out, .. } => ("join", out),
        Command::Translate { out, .. } => ("translate", out),
        Command::Oracle { out, .. } => ("oracle", out),
    };
    let mut report = Report::new(name, args);
    let result = match &cli.command {
        Command::Check { model1, model2, relation, mode, bound, logic, .. } => {
            cmd_check(&mut report, (model1, model2, relation), mode_options(*mode, *bound), logic)
        }
        Command::Gfp { model1, model2, logic, .. } => cmd_gfp(&mut report, model1, model2, logic),
        Command::Logeq { model1, model2, formulas, logic, .. } => cmd_logeq(&mut report, model1, model2, formulas, logic),
        Command::Compare { model1, model2, logic, .. } => cmd_compare(&mut report, model1, model2, logic),
        Command::Compose { model1, model2, model3, relation12, relation23, logic, .. } => {
            cmd_compose(&mut report, [model1, model2, model3], [relation12, relation23], logic)
        }
        Command::Join { model1, model2, relations, logic, .. } => cmd_join(&mut report, model1, model2, relations, logic),
        Command::Translate { formula, model, .. } => cmd_translate(&mut report, formula, model.as_deref()),
        Command::Oracle { spec, .. } => cmd_oracle(&mut report, spec),
    };
    match result {
        Ok(()) => {
            let code = report.code;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            Outcome {
                code,
                stdout: report.render(out, elapsed),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: exit::USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Sizes the global worker pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(e.to_string()))?;
    }
    Ok(())
}
