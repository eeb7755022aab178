//! Per-fact scoring fanned out over a rayon pool.

use rayon::prelude::*;
use respo_core::shapley::{Method, ScoreReport, Scorer};
use respo_core::{ABox, WeightFunction, OMQ};

use crate::error::{Error, Result};

pub const THREADS_VAR: &str = "RESPO_THREADS";

/// Worker count from `RESPO_THREADS`; `None` lets rayon decide.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

/// Same result as [`respo_core::shapley::score_all`] for any thread count.
pub fn score_parallel(
    abox: &ABox,
    omq: &OMQ,
    w: &WeightFunction,
    method: Method,
    threads: Option<usize>,
) -> Result<ScoreReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let scorer = Scorer::new(abox, omq, method)?;
        let full = scorer.histogram(&vec![true; abox.len()])?;
        let per_fact = (0..abox.len())
            .into_par_iter()
            .map(|i| scorer.containing(&full, i))
            .collect::<respo_core::Result<Vec<_>>>()?;
        Ok(ScoreReport::from_histograms(abox, scorer.method, w, full, per_fact)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use respo_core::shapley::score_all;
    use respo_core::Rational;

    #[test]
    fn matches_sequential_on_fixtures() {
        for (abox, omq) in [fixtures::fig1(), fixtures::variant()] {
            let seq = score_all(&abox, &omq, &WeightFunction::Ms, Method::Auto).unwrap();
            for t in [Some(1), Some(3), None] {
                let par = score_parallel(&abox, &omq, &WeightFunction::Ms, Method::Auto, t).unwrap();
                assert_eq!(par, seq);
            }
        }
    }

    #[test]
    fn variant_takes_interaction_free_path() {
        let (abox, omq) = fixtures::variant();
        let r = score_parallel(&abox, &omq, &WeightFunction::Ms, Method::Auto, Some(2)).unwrap();
        assert_eq!(r.method, Method::InteractionFree);
        let want = [(0, 0), (1, 2), (1, 2), (2, 3), (1, 3), (1, 3), (1, 3), (1, 3)];
        for ((_, s), (p, q)) in r.scores.iter().zip(want) {
            assert_eq!(*s, if p == 0 { Rational::zero() } else { Rational::new(p, q) });
        }
    }
}
