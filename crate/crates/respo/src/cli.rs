//! The `respo` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use respo_core::generators::{gen_mvc, gen_perfect_matching, gen_reachability};
use respo_core::interaction_free::check_interaction_free;
use respo_core::rewriter::rewrite;
use respo_core::shapley::{shapley_scores, Method, Scorer, Wealth};
use respo_core::sql::{emit_loader, signature, SqlManifest, SqlSchema};
use respo_core::{ABox, Name, Rational, TBox, WeightFunction, OMQ, UCQ};
use serde_json::json;

use crate::error::{parse_file, write, Error, Result};
use crate::formats::{builtin_weight, histogram_json, parse_edge_list, parse_weight_file, scores_json, scores_table};
use crate::parallel::{score_parallel, threads_from_env};
use crate::suites::{self, SuiteReport};
use crate::textio::{parse_abox, parse_query_file, parse_tbox, render_abox, render_cq, render_query, render_tbox};

#[derive(Parser, Debug)]
#[command(name = "respo", version, about = "Responsibility scores for ontology-mediated queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Kb {
    /// TBox file; omitted means no axioms.
    #[arg(long)]
    tbox: Option<PathBuf>,
    #[arg(long)]
    abox: PathBuf,
    #[arg(long)]
    query: PathBuf,
    /// Binding `x=c` for an answer variable `?x`; repeatable.
    #[arg(long = "answer", value_name = "VAR=CONST")]
    answers: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// WSMS scores of every fact.
    Score {
        #[command(flatten)]
        kb: Kb,
        /// ms, uniform, invsq, or file:<path> with `n k p/q` lines.
        #[arg(long, default_value = "ms")]
        weight: String,
        /// auto, brute, partition, if or images.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Only report this fact.
        #[arg(long)]
        fact: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Number of minimal supports.
    CountMs {
        #[command(flatten)]
        kb: Kb,
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Minimal supports of one size, or all sizes as JSON.
    CountFms {
        #[command(flatten)]
        kb: Kb,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Prints the UCQ rewriting of a DL-Lite_R OMQ.
    Rewrite {
        #[arg(long)]
        tbox: Option<PathBuf>,
        #[arg(long)]
        query: PathBuf,
        #[arg(long = "answer", value_name = "VAR=CONST")]
        answers: Vec<String>,
    },
    /// Writes schema.sql, load.sql and manifest.json.
    EmitSql {
        #[command(flatten)]
        kb: Kb,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prints `ok` or an assertion that satisfies two query atoms.
    CheckIf {
        #[arg(long)]
        tbox: Option<PathBuf>,
        #[arg(long)]
        query: PathBuf,
        #[arg(long = "answer", value_name = "VAR=CONST")]
        answers: Vec<String>,
    },
    /// Shapley values of the 0/1 wealth "the query holds".
    ShapleyDrastic {
        #[command(flatten)]
        kb: Kb,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Writes a benchmark instance built from a graph.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Source vertex (reach).
        #[arg(long)]
        from: Option<String>,
        /// Target vertex (reach).
        #[arg(long)]
        to: Option<String>,
    },
    /// Cross-checks the counting pipelines on one instance, or on seeded
    /// random suites when no files are given.
    Verify {
        #[arg(long)]
        tbox: Option<PathBuf>,
        #[arg(long, requires = "query")]
        abox: Option<PathBuf>,
        #[arg(long, requires = "abox")]
        query: Option<PathBuf>,
        #[arg(long = "answer", value_name = "VAR=CONST")]
        answers: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random instances per suite.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Mvc,
    Reach,
    Pm,
}

/// Parses `argv` (program name first), runs the command, and returns the
/// exit code. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            // parse diagnostics already carry their severity
            let _ = match e {
                Error::Parse(_) | Error::ParseIn { .. } => writeln!(err, "{e}"),
                _ => writeln!(err, "error: {e}"),
            };
            e.exit_code()
        }
    }
}

fn load_tbox(path: Option<&Path>) -> Result<TBox> {
    match path {
        Some(p) => parse_file(p, parse_tbox),
        None => Ok(TBox::empty()),
    }
}

fn bindings(answers: &[String]) -> Result<BTreeMap<Name, Name>> {
    let mut out = BTreeMap::new();
    for a in answers {
        let (v, c) = a
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("--answer expects VAR=CONST, got `{a}`")))?;
        let v = v.trim().trim_start_matches('?');
        if v.is_empty() || c.trim().is_empty() {
            return Err(Error::Usage(format!("--answer expects VAR=CONST, got `{a}`")));
        }
        if out.insert(Name::new(v), Name::new(c.trim())).is_some() {
            return Err(Error::Usage(format!("?{v} is bound twice")));
        }
    }
    Ok(out)
}

fn load_query(path: &Path, answers: &[String]) -> Result<UCQ> {
    let file = parse_file(path, parse_query_file)?;
    let b = bindings(answers)?;
    file.instantiate(&b).map_err(|source| Error::ParseIn {
        path: path.to_path_buf(),
        source,
    })
}

fn load_omq(tbox: Option<&Path>, query: &Path, answers: &[String]) -> Result<OMQ> {
    Ok(OMQ::new(load_tbox(tbox)?, load_query(query, answers)?)?)
}

fn load_kb(kb: &Kb) -> Result<(ABox, OMQ)> {
    let omq = load_omq(kb.tbox.as_deref(), &kb.query, &kb.answers)?;
    let abox = parse_file(&kb.abox, parse_abox)?;
    Ok((abox, omq))
}

fn weight(spec: &str) -> Result<WeightFunction> {
    if let Some(p) = spec.strip_prefix("file:") {
        return parse_file(Path::new(p), parse_weight_file);
    }
    builtin_weight(spec).ok_or_else(|| {
        Error::Usage(format!("unknown weight `{spec}`; use ms, uniform, invsq or file:<path>"))
    })
}

fn method(spec: &str) -> Result<Method> {
    spec.parse::<Method>()
        .map_err(|_| Error::Usage(format!("unknown method `{spec}`; use auto, brute, partition, if or images")))
}

fn render_scores(scores: &[(Name, Rational)], format: Format) -> String {
    match format {
        Format::Json => scores_json(scores),
        Format::Table => scores_table(scores),
    }
}

fn histogram(kb: &Kb, m: &str) -> Result<respo_core::SupportHistogram> {
    let (abox, omq) = load_kb(kb)?;
    let scorer = Scorer::new(&abox, &omq, method(m)?)?;
    Ok(scorer.histogram(&vec![true; abox.len()])?)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Score {
            kb,
            weight: w,
            method: m,
            fact,
            format,
        } => {
            let (abox, omq) = load_kb(&kb)?;
            let w = weight(&w)?;
            let report = score_parallel(&abox, &omq, &w, method(&m)?, threads_from_env()?)?;
            let scores: Vec<(Name, Rational)> = match &fact {
                None => report.scores,
                Some(f) => {
                    let s = report
                        .scores
                        .into_iter()
                        .filter(|(l, _)| l.as_str() == f)
                        .collect::<Vec<_>>();
                    if s.is_empty() {
                        return Err(Error::Usage(format!("no fact labelled `{f}`")));
                    }
                    s
                }
            };
            emit(out, &render_scores(&scores, format))?;
        }
        Command::CountMs { kb, method: m } => {
            emit(out, &format!("{}\n", histogram(&kb, &m)?.total()))?;
        }
        Command::CountFms { kb, method: m, size } => {
            let h = histogram(&kb, &m)?;
            match size {
                Some(k) => emit(out, &format!("{}\n", h.get(k)))?,
                None => emit(out, &format!("{}\n", histogram_json(&h)))?,
            }
        }
        Command::Rewrite { tbox, query, answers } => {
            let omq = load_omq(tbox.as_deref(), &query, &answers)?;
            emit(out, &render_query(&rewrite(&omq)?.result))?;
        }
        Command::EmitSql { kb, size, out: dir } => {
            let (abox, omq) = load_kb(&kb)?;
            let ucq = if omq.tbox.is_empty() {
                omq.query.clone()
            } else {
                rewrite(&omq)?.result
            };
            let sig = signature(&abox, [&ucq]);
            let schema = SqlSchema::new(&sig);
            let manifest = SqlManifest::build(&ucq, size, &schema)?;
            let entries: Vec<_> = manifest
                .queries
                .iter()
                .map(|e| json!({"id": e.id, "sql": e.sql, "gamma": e.gamma.to_string(), "size": e.size}))
                .collect();
            let doc = json!({"aggregation": SqlManifest::AGGREGATION, "queries": entries});
            ensure_dir(&dir)?;
            write(&dir.join("schema.sql"), &manifest.schema)?;
            write(&dir.join("load.sql"), &emit_loader(&abox, &schema)?)?;
            let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
            text.push('\n');
            write(&dir.join("manifest.json"), &text)?;
            emit(out, &format!("{} queries written to {}\n", manifest.queries.len(), dir.display()))?;
        }
        Command::CheckIf { tbox, query, answers } => {
            let omq = load_omq(tbox.as_deref(), &query, &answers)?;
            match check_interaction_free(&omq)? {
                None => emit(out, "ok\n")?,
                Some(w) => {
                    emit(out, &format!("witness: {w}\n"))?;
                    return Ok(1);
                }
            }
        }
        Command::ShapleyDrastic { kb, format } => {
            let (abox, omq) = load_kb(&kb)?;
            let values = shapley_scores(&abox, &omq, Wealth::Drastic)?;
            let scores: Vec<(Name, Rational)> = abox.facts().iter().map(|f| f.label.clone()).zip(values).collect();
            emit(out, &render_scores(&scores, format))?;
        }
        Command::Gen {
            kind,
            graph,
            out: dir,
            from,
            to,
        } => {
            let edges = parse_file(&graph, parse_edge_list)?;
            ensure_dir(&dir)?;
            match kind {
                GenKind::Mvc => {
                    let inst = gen_mvc(&edges.undirected()?)?;
                    write_instance(&dir, &inst.omq, &inst.abox)?;
                }
                GenKind::Reach => {
                    let (Some(c), Some(d)) = (from, to) else {
                        return Err(Error::Usage("gen reach needs --from and --to".into()));
                    };
                    let inst = gen_reachability(&edges.directed()?, &c, &d)?;
                    write_instance(&dir, &inst.omq, &inst.abox)?;
                }
                GenKind::Pm => {
                    let mi = gen_perfect_matching(&edges.bipartite()?)?;
                    write(&dir.join("tbox.txt"), "")?;
                    write(&dir.join("abox.txt"), &render_abox(&mi.db))?;
                    write(&dir.join("q1.txt"), &format!("{}\n", render_cq(&mi.q1)))?;
                    write(&dir.join("q2.txt"), &render_query(&mi.q2))?;
                }
            }
            emit(out, &format!("instance written to {}\n", dir.display()))?;
        }
        Command::Verify {
            tbox,
            abox,
            query,
            answers,
            seed,
            count,
        } => {
            let reports = match (abox, query) {
                (Some(a), Some(q)) => {
                    let omq = load_omq(tbox.as_deref(), &q, &answers)?;
                    let abox = parse_file(&a, parse_abox)?;
                    let (mut reports, checks) = suites::cross_check(&abox, &omq)?;
                    reports.push(checks.properties);
                    reports.push(checks.efficiency);
                    reports
                }
                _ => random_suites(seed, count),
            };
            let mut ok = true;
            for r in &reports {
                ok &= r.passed();
                emit(out, &format!("{}\n", r.summary()))?;
            }
            return Ok(if ok { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn write_instance(dir: &Path, omq: &OMQ, abox: &ABox) -> Result<()> {
    write(&dir.join("tbox.txt"), &render_tbox(&omq.tbox))?;
    write(&dir.join("abox.txt"), &render_abox(abox))?;
    write(&dir.join("query.txt"), &render_query(&omq.query))
}

fn random_suites(seed: u64, count: usize) -> Vec<SuiteReport> {
    let part = suites::partition_suite(seed, count);
    let (rw, rw_checks) = suites::rewriting_suite(seed.wrapping_add(1), count);
    let (iff, if_checks) = suites::interaction_free_suite(seed.wrapping_add(2), count);
    let small = count.clamp(3, 40);
    let (mvc, mvc_checks) = suites::mvc_suite(seed.wrapping_add(3), small);
    let (reach, reach_checks) = suites::reachability_suite(seed.wrapping_add(4), small);
    let pm = suites::matching_suite(seed.wrapping_add(5), small);
    let mut checks = part.checks.clone();
    for c in [&rw_checks, &if_checks, &mvc_checks, &reach_checks] {
        checks.absorb(c);
    }
    vec![
        part.equivalence,
        part.claim,
        part.sql,
        rw,
        iff,
        mvc,
        reach,
        pm,
        checks.properties,
        checks.efficiency,
    ]
}
