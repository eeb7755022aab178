//! Responsibility scores: weighted sums of minimal supports and brute-force
//! Shapley values.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{invalid, unsupported, Error, Result};
use crate::homomorphism::Structure;
use crate::interaction_free::{check_interaction_free, InteractionFreePipeline};
use crate::model::{ABox, Name, Rational, SupportHistogram, WeightFunction, OMQ, UCQ};
use crate::reasoner::{require_consistent, Reasoner};
use crate::rewriter::rewrite;
use crate::support::brute::{self, histogram_of};
use crate::support::partition::PartitionPlan;
use crate::support::{images, per_fact_histograms, OmqOracle};

/// Largest player count for brute-force Shapley values.
pub const SHAPLEY_LIMIT: usize = 20;

/// Shapley value of every player for a wealth function over player masks.
/// The wealth of the empty coalition must be 0.
pub fn shapley_brute(
    n: usize,
    mut wealth: impl FnMut(&[bool]) -> Result<Rational>,
) -> Result<Vec<Rational>> {
    if n > SHAPLEY_LIMIT {
        return Err(Error::TooLarge {
            what: "fact count for brute-force Shapley values",
            actual: n,
            limit: SHAPLEY_LIMIT,
        });
    }
    let size = 1usize << n;
    let mut table = Vec::with_capacity(size);
    let mut mask = vec![false; n];
    for s in 0..size {
        for (i, m) in mask.iter_mut().enumerate() {
            *m = s >> i & 1 == 1;
        }
        table.push(wealth(&mask)?);
    }
    if !table[0].is_zero() {
        return Err(invalid("wealth of the empty set must be 0"));
    }
    // coefficient |S|! (n-|S|-1)! / n! for each coalition size
    let fact = |k: usize| -> BigInt { (1..=k).fold(BigInt::from(1), |a, i| a * BigInt::from(i)) };
    let coeff: Vec<Rational> = (0..n)
        .map(|s| Rational::from_big(fact(s) * fact(n - s - 1), fact(n)))
        .collect();
    let ints: Option<Vec<i128>> = if table.iter().all(Rational::is_integer) {
        table.iter().map(|r| r.numer().to_i128()).collect()
    } else {
        None
    };
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let bit = 1usize << a;
        let mut value = Rational::zero();
        match &ints {
            Some(t) => {
                let mut by_size = vec![0i128; n];
                for s in (0..size).filter(|s| s & bit == 0) {
                    let d = t[s | bit] - t[s];
                    by_size[s.count_ones() as usize] += d;
                }
                for (k, d) in by_size.into_iter().enumerate() {
                    if d != 0 {
                        value += Rational::integer(d) * coeff[k].clone();
                    }
                }
            }
            None => {
                let mut by_size = vec![Rational::zero(); n];
                for s in (0..size).filter(|s| s & bit == 0) {
                    by_size[s.count_ones() as usize] += table[s | bit].clone() - table[s].clone();
                }
                for (k, d) in by_size.into_iter().enumerate() {
                    value += d * coeff[k].clone();
                }
            }
        }
        out.push(value);
    }
    Ok(out)
}

fn contains_support(supports: &[Vec<usize>], mask: &[bool]) -> usize {
    supports
        .iter()
        .filter(|s| s.iter().all(|&i| mask[i]))
        .count()
}

/// The drastic wealth function: 1 on coalitions entailing the query.
pub fn drastic_wealth(supports: &[Vec<usize>]) -> impl Fn(&[bool]) -> Result<Rational> + '_ {
    move |mask| {
        Ok(if contains_support(supports, mask) > 0 {
            Rational::one()
        } else {
            Rational::zero()
        })
    }
}

/// The ms wealth function: the number of minimal supports inside the
/// coalition.
pub fn ms_wealth(supports: &[Vec<usize>]) -> impl Fn(&[bool]) -> Result<Rational> + '_ {
    move |mask| Ok(Rational::from_u128(contains_support(supports, mask) as u128))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wealth {
    Drastic,
    Ms,
}

impl Wealth {
    pub fn name(self) -> &'static str {
        match self {
            Wealth::Drastic => "drastic",
            Wealth::Ms => "ms",
        }
    }
}

/// Minimal supports of an OMQ over an ABox by subset enumeration.
pub fn brute_supports(abox: &ABox, omq: &OMQ) -> Result<Vec<Vec<usize>>> {
    let oracle = OmqOracle::new(&omq.tbox, abox, &omq.query)?;
    brute::minimal_supports(&vec![true; abox.len()], |m| oracle.eval(m), None)
}

/// Brute-force Shapley values of every fact.
pub fn shapley_scores(abox: &ABox, omq: &OMQ, wealth: Wealth) -> Result<Vec<Rational>> {
    if abox.len() > SHAPLEY_LIMIT {
        return Err(Error::TooLarge {
            what: "fact count for brute-force Shapley values",
            actual: abox.len(),
            limit: SHAPLEY_LIMIT,
        });
    }
    let supports = brute_supports(abox, omq)?;
    match wealth {
        Wealth::Drastic => shapley_brute(abox.len(), drastic_wealth(&supports)),
        Wealth::Ms => shapley_brute(abox.len(), ms_wealth(&supports)),
    }
}

/// `sum of w(|S|, n)` over the listed supports containing `fact`.
pub fn wsms_direct(
    supports: &[Vec<usize>],
    n: usize,
    fact: usize,
    w: &WeightFunction,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for s in supports.iter().filter(|s| s.contains(&fact)) {
        total += w.eval(s.len(), n)?;
    }
    Ok(total)
}

/// `sum over k of w(k, n) * hist[k]` for the histogram of supports
/// containing a fact.
pub fn wsms_via_histogram(containing: &SupportHistogram, n: usize, w: &WeightFunction) -> Result<Rational> {
    let mut total = Rational::zero();
    for (k, c) in containing.iter() {
        total += w.eval(k, n)? * Rational::from_u128(c);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Auto,
    Brute,
    Partition,
    InteractionFree,
    Images,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Brute => "brute",
            Method::Partition => "partition",
            Method::InteractionFree => "if",
            Method::Images => "images",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Method::Auto,
            "brute" => Method::Brute,
            "partition" => Method::Partition,
            "if" | "interaction-free" => Method::InteractionFree,
            "images" => Method::Images,
            _ => return Err(invalid(format!("unknown method `{s}`"))),
        })
    }
}

#[derive(Clone, Debug)]
enum Counter {
    Brute(Vec<Vec<usize>>),
    Partition { plan: PartitionPlan, db: Structure },
    Images { query: UCQ, db: Structure },
    InteractionFree(InteractionFreePipeline),
}

/// A minimal-support counter bound to one ABox; histograms of sub-ABoxes
/// are requested by fact masks.
#[derive(Clone, Debug)]
pub struct Scorer {
    pub method: Method,
    abox: ABox,
    counter: Counter,
}

fn rewritten(omq: &OMQ) -> Result<UCQ> {
    if omq.tbox.is_empty() {
        Ok(omq.query.clone())
    } else {
        Ok(rewrite(omq)?.result)
    }
}

impl Scorer {
    pub fn new(abox: &ABox, omq: &OMQ, method: Method) -> Result<Self> {
        let reasoner = Reasoner::new(&omq.tbox)?;
        require_consistent(&reasoner, &abox.atoms())?;
        let horn = omq.tbox.is_horn_extended();
        let method = match method {
            Method::Auto if horn => Method::Brute,
            Method::Auto => {
                if !omq.query.has_neq() && check_interaction_free(omq)?.is_none() {
                    Method::InteractionFree
                } else {
                    match Scorer::new(abox, omq, Method::Partition) {
                        Ok(s) => return Ok(s),
                        Err(Error::Unsupported(_) | Error::RewriteDiverged(_)) => Method::Brute,
                        Err(e) => return Err(e),
                    }
                }
            }
            m if horn && m != Method::Brute => {
                return Err(unsupported(format!(
                    "method `{m}` needs a DL-Lite_R TBox; use brute"
                )))
            }
            m => m,
        };
        let counter = match method {
            Method::Brute => Counter::Brute(brute_supports(abox, omq)?),
            Method::Partition => Counter::Partition {
                plan: PartitionPlan::new(&rewritten(omq)?)?,
                db: Structure::from_atoms(abox.atoms()),
            },
            Method::Images => Counter::Images {
                query: rewritten(omq)?,
                db: Structure::from_atoms(abox.atoms()),
            },
            Method::InteractionFree => Counter::InteractionFree(InteractionFreePipeline::new(omq)?),
            Method::Auto => unreachable!("auto is resolved above"),
        };
        Ok(Scorer {
            method,
            abox: abox.clone(),
            counter,
        })
    }

    pub fn len(&self) -> usize {
        self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abox.is_empty()
    }

    pub fn abox(&self) -> &ABox {
        &self.abox
    }

    /// Minimal supports by size among the facts selected by `mask`.
    pub fn histogram(&self, mask: &[bool]) -> Result<SupportHistogram> {
        match &self.counter {
            Counter::Brute(supports) => {
                let kept: Vec<Vec<usize>> = supports
                    .iter()
                    .filter(|s| s.iter().all(|&i| mask[i]))
                    .cloned()
                    .collect();
                Ok(histogram_of(&kept))
            }
            Counter::Partition { plan, db } => plan.histogram(db, Some(mask)),
            Counter::Images { query, db } => Ok(images::count_fms(query, db, mask)),
            Counter::InteractionFree(p) => p.histogram(&self.abox.filter(|i| mask[i])),
        }
    }

    /// Supports containing `fact`, by size.
    pub fn containing(&self, full: &SupportHistogram, fact: usize) -> Result<SupportHistogram> {
        if let Counter::Brute(supports) = &self.counter {
            let kept: Vec<Vec<usize>> = supports.iter().filter(|s| s.contains(&fact)).cloned().collect();
            return Ok(histogram_of(&kept));
        }
        let mut mask = vec![true; self.len()];
        mask[fact] = false;
        crate::support::containing(full, &self.histogram(&mask)?)
    }

    /// Minimal supports themselves, when the method enumerates them.
    pub fn supports(&self) -> Option<&[Vec<usize>]> {
        match &self.counter {
            Counter::Brute(s) => Some(s),
            _ => None,
        }
    }
}

/// Scores of every fact in ABox order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreReport {
    pub method: Method,
    pub weight: String,
    pub scores: Vec<(Name, Rational)>,
    pub histogram: SupportHistogram,
    pub per_fact: Vec<SupportHistogram>,
}

impl ScoreReport {
    pub fn score(&self, label: &str) -> Option<&Rational> {
        self.scores.iter().find(|(l, _)| l.as_str() == label).map(|(_, s)| s)
    }

    /// Assembles a report from per-fact histograms.
    pub fn from_histograms(
        abox: &ABox,
        method: Method,
        w: &WeightFunction,
        histogram: SupportHistogram,
        per_fact: Vec<SupportHistogram>,
    ) -> Result<Self> {
        let n = abox.len();
        let mut scores = Vec::with_capacity(n);
        for (f, h) in abox.facts().iter().zip(&per_fact) {
            scores.push((f.label.clone(), wsms_via_histogram(h, n, w)?));
        }
        Ok(ScoreReport {
            method,
            weight: String::from(w.name()),
            scores,
            histogram,
            per_fact,
        })
    }
}

pub fn score_all(abox: &ABox, omq: &OMQ, w: &WeightFunction, method: Method) -> Result<ScoreReport> {
    let scorer = Scorer::new(abox, omq, method)?;
    let n = abox.len();
    let (histogram, per_fact) = if scorer.supports().is_some() {
        let full = scorer.histogram(&vec![true; n])?;
        let per = (0..n)
            .map(|i| scorer.containing(&full, i))
            .collect::<Result<Vec<_>>>()?;
        (full, per)
    } else {
        per_fact_histograms(n, |m| scorer.histogram(m))?
    };
    ScoreReport::from_histograms(abox, scorer.method, w, histogram, per_fact)
}

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: String,
    pub holds: bool,
    pub detail: String,
}

/// Symmetry (facts in exactly the same minimal supports score equally),
/// nullity (a score is 0 exactly for facts in no minimal support), and the
/// listed strict orderings `score(a) > score(b)` between labels.
pub fn check_score_properties(
    scores: &[(Name, Rational)],
    supports: &[Vec<usize>],
    orderings: &[(&str, &str)],
) -> Vec<Verdict> {
    let membership: Vec<Vec<usize>> = (0..scores.len())
        .map(|i| (0..supports.len()).filter(|&s| supports[s].contains(&i)).collect())
        .collect();
    let mut groups: BTreeMap<&Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, m) in membership.iter().enumerate() {
        groups.entry(m).or_default().push(i);
    }
    let mut sym_fail = Vec::new();
    for members in groups.values() {
        for &j in &members[1..] {
            if scores[j].1 != scores[members[0]].1 {
                sym_fail.push(format!("{} and {}", scores[members[0]].0, scores[j].0));
            }
        }
    }
    let mut null_fail = Vec::new();
    for (i, (label, s)) in scores.iter().enumerate() {
        let relevant = !membership[i].is_empty();
        if relevant != s.is_positive() || (!relevant && !s.is_zero()) {
            null_fail.push(format!("{label} scores {s}"));
        }
    }
    let mut out = vec![
        Verdict {
            property: String::from("Sym"),
            holds: sym_fail.is_empty(),
            detail: sym_fail.join("; "),
        },
        Verdict {
            property: String::from("Null"),
            holds: null_fail.is_empty(),
            detail: null_fail.join("; "),
        },
    ];
    let find = |l: &str| scores.iter().find(|(x, _)| x.as_str() == l).map(|(_, s)| s);
    for &(a, b) in orderings {
        let (holds, detail) = match (find(a), find(b)) {
            (Some(x), Some(y)) => (x > y, format!("{a} = {x}, {b} = {y}")),
            _ => (false, format!("unknown label {a} or {b}")),
        };
        out.push(Verdict {
            property: format!("{a} > {b}"),
            holds,
            detail,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Axiom, BasicConcept as B, GroundAtom, Role, TBox, Term, CQ};

    fn fig1() -> (ABox, OMQ) {
        let t = TBox::new([
            Axiom::QualifiedExists {
                role: Role::named("hasIng"),
                filler: "FishBased".into(),
                rhs: "FishBased".into(),
            },
            Axiom::role(Role::named("hasGrnsh"), Role::named("hasIng")),
            Axiom::concept(B::name("Seafood"), B::name("FishBased")),
            Axiom::concept(B::name("Fish"), B::name("FishBased")),
        ])
        .unwrap();
        let abox = ABox::from_atoms([
            GroundAtom::binary("hasIng", "cancalaiseSole", "butter"),
            GroundAtom::binary("hasIng", "cancalaiseSole", "sole"),
            GroundAtom::unary("Fish", "sole"),
            GroundAtom::binary("hasIng", "cancalaiseSole", "normandeSauce"),
            GroundAtom::binary("hasIng", "normandeSauce", "oysters"),
            GroundAtom::unary("Seafood", "oysters"),
            GroundAtom::binary("hasGrnsh", "normandeSauce", "shrimps"),
            GroundAtom::unary("Seafood", "shrimps"),
        ])
        .unwrap();
        let q = CQ::new([Atom::concept("FishBased", Term::constant("cancalaiseSole"))]).unwrap();
        (abox, OMQ::cq(t, q).unwrap())
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn drastic_shapley_on_the_dish_example() {
        let (abox, omq) = fig1();
        let s = shapley_scores(&abox, &omq, Wealth::Drastic).unwrap();
        let expect = [0, 1224, 1224, 1056, 384, 384, 384, 384];
        for (got, e) in s.iter().zip(expect) {
            assert_eq!(*got, r(e, 5040));
        }
        let total: Rational = s.iter().cloned().sum();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn ms_scores_on_the_dish_example() {
        let (abox, omq) = fig1();
        let report = score_all(&abox, &omq, &WeightFunction::Ms, Method::Auto).unwrap();
        assert_eq!(report.method, Method::Brute);
        let expect = [r(0, 1), r(1, 2), r(1, 2), r(2, 3), r(1, 3), r(1, 3), r(1, 3), r(1, 3)];
        for ((_, got), e) in report.scores.iter().zip(expect) {
            assert_eq!(*got, e);
        }
        assert_eq!(report.histogram, SupportHistogram::from_counts([(2, 1), (3, 2)]));
        let supports = brute_supports(&abox, &omq).unwrap();
        for i in 0..abox.len() {
            assert_eq!(
                wsms_direct(&supports, abox.len(), i, &WeightFunction::Ms).unwrap(),
                report.scores[i].1
            );
        }
        let verdicts = check_score_properties(&report.scores, &supports, &[("f1", "f4"), ("f3", "f4")]);
        assert!(verdicts.iter().all(|v| v.holds), "{verdicts:?}");

        let mut broken = report.scores.clone();
        broken[1].1 = Rational::zero();
        let verdicts = check_score_properties(&broken, &supports, &[]);
        assert!(!verdicts.iter().find(|v| v.property == "Null").unwrap().holds);
    }

    #[test]
    fn single_player_takes_all() {
        let s = shapley_brute(1, |m| Ok(if m[0] { Rational::one() } else { Rational::zero() })).unwrap();
        assert_eq!(s, [Rational::one()]);
        assert!(shapley_brute(2, |_| Ok(Rational::one())).is_err());
        assert!(shapley_brute(SHAPLEY_LIMIT + 1, |_| Ok(Rational::zero())).is_err());
    }

    #[test]
    fn rational_wealth_path() {
        // glove game with rational payoffs
        let s = shapley_brute(3, |m| {
            Ok(if m[0] && (m[1] || m[2]) {
                Rational::new(1, 3)
            } else {
                Rational::zero()
            })
        })
        .unwrap();
        assert_eq!(s[0], Rational::new(2, 9));
        assert_eq!(s[1], Rational::new(1, 18));
        assert_eq!(s[2], Rational::new(1, 18));
    }

    #[test]
    fn methods_agree_on_plain_queries() {
        let abox = ABox::from_atoms([GroundAtom::unary("A", "c"), GroundAtom::unary("A", "d")]).unwrap();
        let omq = OMQ::cq(TBox::empty(), CQ::new([Atom::concept("A", Term::var("x"))]).unwrap()).unwrap();
        for m in [Method::Auto, Method::Brute, Method::Partition, Method::Images, Method::InteractionFree] {
            let rep = score_all(&abox, &omq, &WeightFunction::Ms, m).unwrap();
            assert!(rep.scores.iter().all(|(_, s)| *s == Rational::one()), "{m}");
        }
        let empty = OMQ::cq(TBox::empty(), CQ::new([Atom::concept("B", Term::var("x"))]).unwrap()).unwrap();
        let rep = score_all(&abox, &empty, &WeightFunction::Ms, Method::Auto).unwrap();
        assert!(rep.scores.iter().all(|(_, s)| s.is_zero()));
    }

    #[test]
    fn horn_needs_brute() {
        let (abox, omq) = fig1();
        assert!(matches!(
            score_all(&abox, &omq, &WeightFunction::Ms, Method::Partition),
            Err(Error::Unsupported(_))
        ));
    }
}
