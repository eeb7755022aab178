//! Seeded random instances and the cross-pipeline checks run over them.
//!
//! Every suite compares a fast counting path against subset enumeration,
//! then checks symmetry, nullity and efficiency of the resulting scores.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use respo_core::generators::{
    gen_mvc, gen_perfect_matching, gen_reachability, is_acyclic, is_self_join_free, oracle_matchings,
    oracle_mvc, oracle_simple_paths, Graph,
};
use respo_core::homomorphism::{self, Options, Structure};
use respo_core::interaction_free::{check_interaction_free, count_ms_interaction_free};
use respo_core::reasoner::Reasoner;
use respo_core::rewriter::rewrite;
use respo_core::shapley::{
    brute_supports, check_score_properties, score_all, shapley_scores, wsms_direct, Method, Wealth,
};
use respo_core::sql::{emit_loader, signature, SqlManifest, SqlSchema};
use respo_core::support::brute::{histogram_of, minimal_supports};
use respo_core::support::images;
use respo_core::support::partition::PartitionPlan;
use respo_core::support::OmqOracle;
use respo_core::{
    ABox, Atom, Axiom, BasicConcept, GroundAtom, Name, Rational, Role, SupportHistogram, TBox, Term,
    WeightFunction, CQ, OMQ, UCQ,
};

use crate::sqlexec;

/// Outcome of one suite.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..SuiteReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.instances > 0 && self.failures.is_empty()
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }

    /// Merges another report's counts and failures into this one.
    pub fn absorb(&mut self, other: &SuiteReport) {
        self.instances += other.instances;
        self.failures.extend(other.failures.iter().cloned());
        self.elapsed += other.elapsed;
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "pass" } else { "FAIL" };
        let mut s = format!(
            "{status} {}: {} instances, {} failures, {:.2}s",
            self.name,
            self.instances,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        );
        for f in self.failures.iter().take(5) {
            s.push_str(&format!("\n    {f}"));
        }
        s
    }
}

/// Property and efficiency verdicts collected alongside a suite.
#[derive(Clone, Debug)]
pub struct ScoreChecks {
    pub properties: SuiteReport,
    pub efficiency: SuiteReport,
}

impl ScoreChecks {
    pub fn new() -> Self {
        ScoreChecks {
            properties: SuiteReport::new("properties"),
            efficiency: SuiteReport::new("efficiency"),
        }
    }

    pub fn absorb(&mut self, other: &ScoreChecks) {
        self.properties.absorb(&other.properties);
        self.efficiency.absorb(&other.efficiency);
    }

    /// Scores one instance with `method` and checks the ms and drastic
    /// scores against its minimal supports found by subset enumeration.
    pub fn check(&mut self, tag: &str, abox: &ABox, omq: &OMQ, method: Method) {
        let start = Instant::now();
        self.properties.instances += 1;
        self.efficiency.instances += 1;
        if let Err(e) = self.check_inner(tag, abox, omq, method) {
            self.properties.fail(format!("{tag}: {e}"));
        }
        self.properties.elapsed += start.elapsed();
    }

    fn check_inner(&mut self, tag: &str, abox: &ABox, omq: &OMQ, method: Method) -> respo_core::Result<()> {
        let supports = brute_supports(abox, omq)?;
        let n = abox.len();
        let ms = score_all(abox, omq, &WeightFunction::Ms, method)?;
        for v in check_score_properties(&ms.scores, &supports, &[]) {
            if !v.holds {
                self.properties.fail(format!("{tag}: ms {} fails: {}", v.property, v.detail));
            }
        }
        for (i, (label, s)) in ms.scores.iter().enumerate() {
            let direct = wsms_direct(&supports, n, i, &WeightFunction::Ms)?;
            if *s != direct {
                self.properties
                    .fail(format!("{tag}: {label} scores {s} by histogram and {direct} directly"));
            }
        }
        let total: Rational = ms.scores.iter().map(|(_, s)| s).sum();
        if total != Rational::from_u128(supports.len() as u128) {
            self.efficiency
                .fail(format!("{tag}: ms scores sum to {total}, countMS is {}", supports.len()));
        }
        let drastic = shapley_scores(abox, omq, Wealth::Drastic)?;
        let labelled: Vec<(Name, Rational)> = abox.facts().iter().map(|f| f.label.clone()).zip(drastic).collect();
        for v in check_score_properties(&labelled, &supports, &[]) {
            if !v.holds {
                self.properties.fail(format!("{tag}: drastic {} fails: {}", v.property, v.detail));
            }
        }
        let total: Rational = labelled.iter().map(|(_, s)| s).sum();
        let expected = if supports.is_empty() { Rational::zero() } else { Rational::one() };
        if total != expected {
            self.efficiency.fail(format!("{tag}: drastic Shapley values sum to {total}"));
        }
        Ok(())
    }
}

impl Default for ScoreChecks {
    fn default() -> Self {
        ScoreChecks::new()
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick<'a, T>(r: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(r).expect("non-empty choice")
}

const UNARY: [&str; 2] = ["A", "B"];
const BINARY: [&str; 2] = ["r", "s"];

fn random_term(r: &mut ChaCha8Rng, vars: &[&str], consts: &[&str], p_var: f64) -> Term {
    if r.gen_bool(p_var) {
        Term::var(*pick(r, vars))
    } else {
        Term::constant(*pick(r, consts))
    }
}

fn random_atom(r: &mut ChaCha8Rng, unary: &[&str], binary: &[&str], vars: &[&str], consts: &[&str]) -> Atom {
    if r.gen_bool(0.4) {
        Atom::concept(*pick(r, unary), random_term(r, vars, consts, 0.75))
    } else {
        let s = random_term(r, vars, consts, 0.75);
        let o = random_term(r, vars, consts, 0.75);
        Atom::role(*pick(r, binary), s, o)
    }
}

fn random_abox(r: &mut ChaCha8Rng, unary: &[&str], binary: &[&str], consts: &[&str], max: usize) -> ABox {
    let want = r.gen_range(1..=max);
    let mut facts: BTreeSet<GroundAtom> = BTreeSet::new();
    let mut order = Vec::new();
    for _ in 0..want * 4 {
        if order.len() == want {
            break;
        }
        let g = if r.gen_bool(0.4) {
            GroundAtom::unary(*pick(r, unary), *pick(r, consts))
        } else {
            GroundAtom::binary(*pick(r, binary), *pick(r, consts), *pick(r, consts))
        };
        if facts.insert(g.clone()) {
            order.push(g);
        }
    }
    ABox::from_atoms(order).expect("distinct facts with fixed arities")
}

/// A UCQ with disequalities (at most 2 disjuncts of at most 3 relational
/// atoms) over a database of at most `max_facts` facts.
pub fn random_ucq_instance(r: &mut ChaCha8Rng, max_facts: usize) -> (ABox, UCQ) {
    let vars = ["x", "y", "z"];
    let consts = ["a", "b"];
    let ucq = loop {
        let mut disjuncts = Vec::new();
        for _ in 0..r.gen_range(1..=2) {
            let mut atoms: Vec<Atom> = (0..r.gen_range(1..=3))
                .map(|_| random_atom(r, &UNARY, &BINARY, &vars, &consts))
                .collect();
            if r.gen_bool(0.35) {
                let terms: Vec<Term> = atoms.iter().flat_map(|a| a.terms().cloned()).collect();
                let a = pick(r, &terms).clone();
                let b = pick(r, &terms).clone();
                if let Ok(neq) = Atom::neq(a, b) {
                    atoms.push(neq);
                }
            }
            if let Ok(q) = CQ::new(atoms) {
                disjuncts.push(q);
            }
        }
        if let Ok(u) = UCQ::new(disjuncts) {
            break u;
        }
    };
    let abox = random_abox(r, &UNARY, &BINARY, &["a", "b", "c"], max_facts);
    (abox, ucq)
}

fn random_role(r: &mut ChaCha8Rng, names: &[&str]) -> Role {
    let n = *pick(r, names);
    if r.gen_bool(0.5) {
        Role::named(n)
    } else {
        Role::inverse_of(n)
    }
}

fn random_basic(r: &mut ChaCha8Rng, concepts: &[&str], roles: &[&str]) -> BasicConcept {
    if r.gen_bool(0.5) {
        BasicConcept::name(*pick(r, concepts))
    } else {
        BasicConcept::exists(random_role(r, roles))
    }
}

/// A DL-Lite_R TBox with up to `max` axioms; negative inclusions only when
/// `negative` is set.
pub fn random_dl_tbox(r: &mut ChaCha8Rng, concepts: &[&str], roles: &[&str], max: usize, negative: bool) -> TBox {
    loop {
        let mut axioms = Vec::new();
        for _ in 0..r.gen_range(0..=max) {
            let neg = negative && r.gen_bool(0.1);
            let ax = if r.gen_bool(0.75) {
                let (a, b) = (random_basic(r, concepts, roles), random_basic(r, concepts, roles));
                if neg {
                    Axiom::concept_neg(a, b)
                } else {
                    Axiom::concept(a, b)
                }
            } else {
                let (a, b) = (random_role(r, roles), random_role(r, roles));
                if neg {
                    Axiom::role_neg(a, b)
                } else {
                    Axiom::role(a, b)
                }
            };
            axioms.push(ax);
        }
        if let Ok(t) = TBox::new(axioms) {
            if !t.is_horn_extended() || t.is_empty() {
                return t;
            }
        }
    }
}

/// A DL-Lite_R OMQ with a CQ of at most 3 atoms, and an ABox of at most
/// `max_facts` facts.
pub fn random_dl_instance(r: &mut ChaCha8Rng, max_facts: usize) -> (ABox, OMQ) {
    let concepts = ["A", "B", "C"];
    let roles = ["r", "s"];
    loop {
        let tbox = random_dl_tbox(r, &concepts, &roles, 4, true);
        let atoms: Vec<Atom> = (0..r.gen_range(1..=3))
            .map(|_| random_atom(r, &concepts, &roles, &["x", "y", "z"], &["a", "b"]))
            .collect();
        let Ok(q) = CQ::new(atoms) else { continue };
        let Ok(omq) = OMQ::cq(tbox, q) else { continue };
        let abox = random_abox(r, &concepts, &roles, &["a", "b", "c"], max_facts);
        return (abox, omq);
    }
}

/// An interaction-free DL-Lite_R OMQ (at most 4 atoms, no negative
/// inclusions) with an ABox of at most `max_facts` facts, by rejection.
pub fn random_if_instance(r: &mut ChaCha8Rng, max_facts: usize) -> (ABox, OMQ) {
    let concepts = ["A", "B", "C"];
    let roles = ["r", "s", "t"];
    loop {
        let tbox = random_dl_tbox(r, &concepts, &roles, 3, false);
        let atoms: Vec<Atom> = (0..r.gen_range(1..=4))
            .map(|_| random_atom(r, &concepts, &roles, &["x", "y", "z", "w"], &["a", "b"]))
            .collect();
        let Ok(q) = CQ::new(atoms) else { continue };
        let Ok(omq) = OMQ::cq(tbox, q) else { continue };
        if !matches!(check_interaction_free(&omq), Ok(None)) {
            continue;
        }
        let abox = random_abox(r, &concepts, &roles, &["a", "b", "c", "d"], max_facts);
        return (abox, omq);
    }
}

fn same_counts(a: &SupportHistogram, b: &SupportHistogram) -> bool {
    let top = a.max_size().max(b.max_size()).unwrap_or(0);
    (0..=top).all(|k| a.get(k) == b.get(k))
}

fn brute_histogram(abox: &ABox, omq: &OMQ) -> respo_core::Result<SupportHistogram> {
    let oracle = OmqOracle::new(&omq.tbox, abox, &omq.query)?;
    let supports = minimal_supports(&vec![true; abox.len()], |m| oracle.eval(m), None)?;
    Ok(histogram_of(&supports))
}

/// Symbols in a UCQ: one per predicate or disequality plus one per argument.
pub fn query_size(q: &UCQ) -> usize {
    q.disjuncts()
        .iter()
        .flat_map(|d| d.atoms())
        .map(|a| 1 + a.terms().count())
        .sum()
}

/// Reports of the partition suite.
#[derive(Clone, Debug)]
pub struct PartitionSuite {
    pub equivalence: SuiteReport,
    pub claim: SuiteReport,
    pub sql: SuiteReport,
    pub checks: ScoreChecks,
}

/// Partition counts against subset enumeration on random UCQ± instances,
/// per-counting-query homomorphism identities, and manifest execution.
pub fn partition_suite(seed: u64, count: usize) -> PartitionSuite {
    let mut r = rng(seed);
    let mut out = PartitionSuite {
        equivalence: SuiteReport::new("partition = brute"),
        claim: SuiteReport::new("homs = auto * minsups"),
        sql: SuiteReport::new("sql manifest"),
        checks: ScoreChecks::new(),
    };
    for i in 0..count {
        let (abox, ucq) = random_ucq_instance(&mut r, 6);
        let tag = format!("instance {i} ({})", ucq_line(&ucq));
        let omq = OMQ::new(TBox::empty(), ucq.clone()).expect("no TBox");
        let db = Structure::from_atoms(abox.atoms());

        let start = Instant::now();
        out.equivalence.instances += 1;
        let plan = match PartitionPlan::new(&ucq) {
            Ok(p) => p,
            Err(e) => {
                out.equivalence.fail(format!("{tag}: {e}"));
                continue;
            }
        };
        match (brute_histogram(&abox, &omq), plan.histogram(&db, None)) {
            (Ok(b), Ok(p)) if same_counts(&b, &p) => {}
            (Ok(b), Ok(p)) => out.equivalence.fail(format!("{tag}: brute {b}, partition {p}")),
            (b, p) => out.equivalence.fail(format!("{tag}: {:?} / {:?}", b.err(), p.err())),
        }
        out.equivalence.elapsed += start.elapsed();

        let start = Instant::now();
        for cq in plan.queries() {
            out.claim.instances += 1;
            let homs = homomorphism::count(&cq.cq, &db);
            let sups = minimal_supports(
                &vec![true; abox.len()],
                |m| {
                    Ok(homomorphism::exists(
                        &cq.cq,
                        &db,
                        Options {
                            domain: None,
                            tags: Some(m),
                        },
                    ))
                },
                None,
            );
            match (homs, sups) {
                (Ok(h), Ok(s)) if h == cq.automorphisms * s.len() as u128 => {}
                (Ok(h), Ok(s)) => out.claim.fail(format!(
                    "{tag}: {} has {h} homomorphisms, {} automorphisms, {} minimal supports",
                    cq.cq,
                    cq.automorphisms,
                    s.len()
                )),
                (h, s) => out.claim.fail(format!("{tag}: {:?} / {:?}", h.err(), s.err())),
            }
        }
        out.claim.elapsed += start.elapsed();

        let start = Instant::now();
        out.sql.instances += 1;
        if let Err(e) = check_manifest(&abox, &ucq, &plan, &db) {
            out.sql.fail(format!("{tag}: {e}"));
        }
        out.sql.elapsed += start.elapsed();

        out.checks.check(&tag, &abox, &omq, Method::Partition);
    }
    out
}

fn ucq_line(q: &UCQ) -> String {
    q.disjuncts().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" | ")
}

/// Runs the emitted SQL on the in-memory engine and compares the
/// aggregated counts with the partition histogram.
fn check_manifest(abox: &ABox, ucq: &UCQ, plan: &PartitionPlan, db: &Structure) -> Result<(), String> {
    let sig = signature(abox, [ucq]);
    let schema = SqlSchema::new(&sig);
    let manifest = SqlManifest::build(ucq, None, &schema).map_err(|e| e.to_string())?;
    let mut engine = sqlexec::Database::new();
    engine.execute_script(&manifest.schema).map_err(|e| e.to_string())?;
    engine
        .execute_script(&emit_loader(abox, &schema).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let counts = manifest
        .queries
        .iter()
        .map(|e| engine.count(&e.sql))
        .collect::<Result<Vec<u128>, _>>()
        .map_err(|e| e.to_string())?;
    let agg = manifest.aggregate(&counts).map_err(|e| e.to_string())?;
    let hist = plan.histogram(db, None).map_err(|e| e.to_string())?;
    for (&k, v) in &agg {
        if *v != Rational::from_u128(hist.get(k)) {
            return Err(format!("size {k}: manifest gives {v}, partition {}", hist.get(k)));
        }
    }
    for (k, c) in hist.iter() {
        if c != 0 && !agg.contains_key(&k) {
            return Err(format!("size {k} missing from the manifest"));
        }
    }
    let bound = query_size(ucq).pow(2);
    for cq in plan.queries() {
        if cq.cq.atoms().len() > bound {
            return Err(format!(
                "{} has {} atoms, above the square of the input size {}",
                cq.cq,
                cq.cq.atoms().len(),
                query_size(ucq)
            ));
        }
    }
    Ok(())
}

/// Rewriting evaluated on every sub-ABox against certain answers in the
/// canonical model. Inconsistent sub-ABoxes are skipped.
pub fn rewriting_suite(seed: u64, count: usize) -> (SuiteReport, ScoreChecks) {
    let mut r = rng(seed);
    let mut rep = SuiteReport::new("rewriting soundness");
    let mut checks = ScoreChecks::new();
    for i in 0..count {
        let (abox, omq) = random_dl_instance(&mut r, 5);
        let q = &omq.query.disjuncts()[0];
        let tag = format!("instance {i} ({q} under {} axioms)", omq.tbox.len());
        let start = Instant::now();
        rep.instances += 1;
        if let Err(e) = check_rewriting(&abox, &omq) {
            rep.fail(format!("{tag}: {e}"));
        }
        rep.elapsed += start.elapsed();
        let reasoner = Reasoner::new(&omq.tbox).expect("generated TBox is DL-Lite_R");
        if reasoner.is_consistent(&abox.atoms()) {
            checks.check(&tag, &abox, &omq, Method::Partition);
        }
    }
    (rep, checks)
}

fn check_rewriting(abox: &ABox, omq: &OMQ) -> Result<(), String> {
    let rw = rewrite(omq).map_err(|e| e.to_string())?;
    let reasoner = Reasoner::new(&omq.tbox).map_err(|e| e.to_string())?;
    let db = Structure::from_atoms(abox.atoms());
    let cq = &omq.query.disjuncts()[0];
    let n = abox.len();
    for bits in 0u32..(1 << n) {
        let mask: Vec<bool> = (0..n).map(|j| bits >> j & 1 == 1).collect();
        let atoms: Vec<&GroundAtom> = abox.atoms().into_iter().zip(&mask).filter(|(_, &m)| m).map(|(a, _)| a).collect();
        if !reasoner.is_consistent(&atoms) {
            continue;
        }
        let opts = Options {
            domain: None,
            tags: Some(&mask),
        };
        let by_rewriting = rw.result.disjuncts().iter().any(|d| homomorphism::exists(d, &db, opts));
        let certain = reasoner.entails_cq(&atoms, cq).map_err(|e| e.to_string())?;
        if by_rewriting != certain {
            let shown: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
            return Err(format!(
                "on {{{}}} the rewriting says {by_rewriting}, certain answers say {certain}",
                shown.join(", ")
            ));
        }
    }
    Ok(())
}

/// The anonymous-witness case: `A <= exists r`, `exists r- <= B`, query
/// `B(?x)`, ABox `{A(c)}`, one minimal support.
pub fn anonymous_witness_instance() -> (ABox, OMQ) {
    let t = TBox::new([
        Axiom::concept(BasicConcept::name("A"), BasicConcept::exists(Role::named("r"))),
        Axiom::concept(BasicConcept::exists(Role::inverse_of("r")), BasicConcept::name("B")),
    ])
    .expect("valid TBox");
    let q = CQ::new([Atom::concept("B", Term::var("x"))]).expect("valid CQ");
    let abox = ABox::from_atoms([GroundAtom::unary("A", "c")]).expect("valid ABox");
    (abox, OMQ::cq(t, q).expect("valid OMQ"))
}

/// The interaction-free pipeline against subset enumeration.
pub fn interaction_free_suite(seed: u64, count: usize) -> (SuiteReport, ScoreChecks) {
    let mut r = rng(seed);
    let mut rep = SuiteReport::new("interaction-free = brute");
    let mut checks = ScoreChecks::new();
    let mut instances = vec![anonymous_witness_instance()];
    while instances.len() < count.max(1) {
        instances.push(random_if_instance(&mut r, 8));
    }
    for (i, (abox, omq)) in instances.iter().enumerate() {
        let tag = format!("instance {i} ({} under {} axioms)", omq.query.disjuncts()[0], omq.tbox.len());
        let start = Instant::now();
        rep.instances += 1;
        match (brute_histogram(abox, omq), count_ms_interaction_free(omq, abox)) {
            (Ok(b), Ok(f)) if same_counts(&b, &f) && b.total() == f.total() => {}
            (Ok(b), Ok(f)) => rep.fail(format!("{tag}: brute {b}, interaction-free {f}")),
            (b, f) => rep.fail(format!("{tag}: {:?} / {:?}", b.err(), f.err())),
        }
        if i == 0 && !matches!(count_ms_interaction_free(omq, abox), Ok(ref h) if h.total() == 1) {
            rep.fail("anonymous-witness instance does not have exactly one minimal support");
        }
        rep.elapsed += start.elapsed();
        checks.check(&tag, abox, omq, Method::InteractionFree);
    }
    (rep, checks)
}

fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64, directed: bool, max_edges: usize) -> (Vec<Name>, Vec<(Name, Name)>) {
    let vs: Vec<Name> = (0..n).map(|i| Name::new(&format!("v{i}"))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if r.gen_bool(p) {
                edges.push((vs[i].clone(), vs[j].clone()));
            }
        }
    }
    edges.shuffle(r);
    edges.truncate(max_edges);
    (vs, edges)
}

fn named_edges(edges: &[(&str, &str)]) -> Vec<(Name, Name)> {
    edges.iter().map(|(a, b)| (Name::new(a), Name::new(b))).collect()
}

/// Vertex-cover instances: minimal supports against cover enumeration.
pub fn mvc_suite(seed: u64, count: usize) -> (SuiteReport, ScoreChecks) {
    let mut r = rng(seed);
    let mut rep = SuiteReport::new("generator mvc");
    let mut checks = ScoreChecks::new();
    let mut graphs = vec![
        named_edges(&[("a", "b"), ("b", "c"), ("a", "c")]),
        named_edges(&[("u", "v")]),
        named_edges(&[("a", "b"), ("b", "c")]),
    ]
    .into_iter()
    .map(|e| (Graph::vertices_of(&e), e))
    .collect::<Vec<_>>();
    while graphs.len() < count.max(3) {
        let n = r.gen_range(2..=8);
        let (vs, es) = random_graph(&mut r, n, 0.35, false, usize::MAX);
        if !es.is_empty() {
            graphs.push((vs, es));
        }
    }
    let start = Instant::now();
    for (i, (vs, es)) in graphs.iter().enumerate() {
        rep.instances += 1;
        let tag = format!("graph {i} ({} vertices, {} edges)", vs.len(), es.len());
        let res = Graph::undirected(vs.clone(), es).and_then(|g| {
            let inst = gen_mvc(&g)?;
            let got = brute_supports(&inst.abox, &inst.omq)?.len() as u128;
            Ok((inst, got, oracle_mvc(&g)?))
        });
        match res {
            Ok((inst, got, want)) => {
                if got != want {
                    rep.fail(format!("{tag}: {got} minimal supports, {want} minimal covers"));
                }
                checks.check(&tag, &inst.abox, &inst.omq, Method::Brute);
            }
            Err(e) => rep.fail(format!("{tag}: {e}")),
        }
    }
    rep.elapsed = start.elapsed();
    (rep, checks)
}

/// Vertices, edges, source, target.
type ReachCase = (Vec<Name>, Vec<(Name, Name)>, Name, Name);

/// Reachability instances: support histogram against simple paths shifted
/// by one for the `A(d)` fact.
pub fn reachability_suite(seed: u64, count: usize) -> (SuiteReport, ScoreChecks) {
    let mut r = rng(seed);
    let mut rep = SuiteReport::new("generator reachability");
    let mut checks = ScoreChecks::new();
    let mut cases: Vec<ReachCase> = Vec::new();
    let e = named_edges(&[("c", "x"), ("x", "d"), ("c", "d")]);
    cases.push((Graph::vertices_of(&e), e, Name::new("c"), Name::new("d")));
    let e = named_edges(&[("d", "c")]);
    cases.push((Graph::vertices_of(&e), e, Name::new("c"), Name::new("d")));
    let e = named_edges(&[("c", "x")]);
    cases.push((Graph::vertices_of(&e), e, Name::new("c"), Name::new("c")));
    while cases.len() < count.max(3) {
        let n = r.gen_range(2..=7);
        let (vs, es) = random_graph(&mut r, n, 0.3, true, 14);
        let c = vs[0].clone();
        let d = pick(&mut r, &vs).clone();
        cases.push((vs, es, c, d));
    }
    let start = Instant::now();
    for (i, (vs, es, c, d)) in cases.iter().enumerate() {
        rep.instances += 1;
        let tag = format!("digraph {i} ({} vertices, {} edges, {c} to {d})", vs.len(), es.len());
        let res = Graph::directed(vs.clone(), es).and_then(|g| {
            let inst = gen_reachability(&g, c, d)?;
            let got = histogram_of(&brute_supports(&inst.abox, &inst.omq)?);
            Ok((inst, got, oracle_simple_paths(&g, c, d)?))
        });
        match res {
            Ok((inst, got, paths)) => {
                let want = SupportHistogram::from_counts(paths.iter().map(|(k, n)| (k + 1, n)));
                if !same_counts(&got, &want) {
                    rep.fail(format!("{tag}: supports {got}, paths shifted {want}"));
                }
                checks.check(&tag, &inst.abox, &inst.omq, Method::Brute);
            }
            Err(e) => rep.fail(format!("{tag}: {e}")),
        }
    }
    rep.elapsed = start.elapsed();
    (rep, checks)
}

/// Matching instances: the support-count difference against perfect
/// matchings, plus the structural shape of both queries.
pub fn matching_suite(seed: u64, count: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut rep = SuiteReport::new("generator matching");
    let side = |p: &str, n: usize| (0..n).map(|i| Name::new(&format!("{p}{i}"))).collect::<Vec<_>>();
    let mut cases: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (1, vec![(0, 0)]),
        (2, vec![(0, 0), (0, 1), (1, 0), (1, 1)]),
        (2, vec![(0, 0), (1, 0)]),
    ];
    while cases.len() < count.max(3) {
        let n = r.gen_range(1..=4);
        let edges = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|_| r.gen_bool(0.55))
            .collect();
        cases.push((n, edges));
    }
    let start = Instant::now();
    for (i, (n, edges)) in cases.iter().enumerate() {
        rep.instances += 1;
        let tag = format!("bipartite graph {i} (n = {n}, {} edges)", edges.len());
        let (left, right) = (side("a", *n), side("b", *n));
        let named: Vec<(Name, Name)> = edges.iter().map(|&(a, b)| (left[a].clone(), right[b].clone())).collect();
        let res = Graph::bipartite(left, right, &named).and_then(|g| {
            let mi = gen_perfect_matching(&g)?;
            let db = Structure::from_atoms(mi.db.atoms());
            let all = vec![true; mi.db.len()];
            let c1 = images::count_fms(&UCQ::single(mi.q1.clone()), &db, &all).total();
            let c2 = images::count_fms(&mi.q2, &db, &all).total();
            Ok((mi, c1 as i128 - c2 as i128, oracle_matchings(&g)?))
        });
        match res {
            Ok((mi, diff, want)) => {
                if diff != want as i128 {
                    rep.fail(format!("{tag}: countMS difference {diff}, {want} perfect matchings"));
                }
                let shaped = |q: &CQ| is_self_join_free(q) && is_acyclic(q);
                if !shaped(&mi.q1) || !mi.q2.disjuncts().iter().all(shaped) {
                    rep.fail(format!("{tag}: a query is not self-join free and acyclic"));
                }
            }
            Err(e) => rep.fail(format!("{tag}: {e}")),
        }
    }
    rep.elapsed = start.elapsed();
    rep
}

/// Every counting path that applies to one instance, against subset
/// enumeration, plus the score checks.
pub fn cross_check(abox: &ABox, omq: &OMQ) -> respo_core::Result<(Vec<SuiteReport>, ScoreChecks)> {
    let brute = brute_histogram(abox, omq)?;
    let mut reports = Vec::new();
    let mut methods = vec![Method::Brute];
    for m in [Method::Partition, Method::Images, Method::InteractionFree] {
        let start = Instant::now();
        let mut rep = SuiteReport::new(&format!("{m} = brute"));
        match respo_core::shapley::Scorer::new(abox, omq, m) {
            Ok(s) => {
                rep.instances = 1;
                match s.histogram(&vec![true; abox.len()]) {
                    Ok(h) if same_counts(&h, &brute) => methods.push(m),
                    Ok(h) => rep.fail(format!("{m} counts {h}, brute {brute}")),
                    Err(e) => rep.fail(e.to_string()),
                }
            }
            Err(respo_core::Error::Unsupported(_) | respo_core::Error::NotInteractionFree) => {}
            Err(e) => return Err(e),
        }
        rep.elapsed = start.elapsed();
        if rep.instances > 0 {
            reports.push(rep);
        }
    }
    let mut checks = ScoreChecks::new();
    for m in methods {
        checks.check(&format!("{m}"), abox, omq, m);
    }
    Ok((reports, checks))
}
