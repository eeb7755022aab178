use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::homomorphism::{images, Options, Structure};
use crate::model::{SupportHistogram, UCQ};

/// Minimal supports of a UCQ± over a database: the inclusion-minimal sets
/// among the images of its homomorphisms. Only tuples whose tag is active
/// are used; supports are lists of tags.
pub fn minimal_supports(q: &UCQ, db: &Structure, active: &[bool]) -> Vec<Vec<usize>> {
    let opts = Options {
        domain: None,
        tags: Some(active),
    };
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for d in q.disjuncts() {
        all.extend(images(d, db, opts));
    }
    let mut by_size: Vec<Vec<usize>> = all.into_iter().collect();
    by_size.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in by_size {
        let dominated = kept.iter().any(|k| k.iter().all(|x| s.binary_search(x).is_ok()));
        if !dominated {
            kept.push(s);
        }
    }
    kept
}

pub fn count_fms(q: &UCQ, db: &Structure, active: &[bool]) -> SupportHistogram {
    super::brute::histogram_of(&minimal_supports(q, db, active))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, GroundAtom, Term, CQ};

    #[test]
    fn drops_non_minimal_images() {
        let atoms = [
            GroundAtom::binary("r", "c", "d"),
            GroundAtom::binary("r", "d", "c"),
            GroundAtom::binary("r", "e", "e"),
        ];
        let db = Structure::from_atoms(atoms.iter());
        let q = UCQ::new(vec![
            CQ::new([
                Atom::role("r", Term::var("x"), Term::var("y")),
                Atom::role("r", Term::var("y"), Term::var("x")),
            ])
            .unwrap(),
        ])
        .unwrap();
        let s = minimal_supports(&q, &db, &[true; 3]);
        assert_eq!(s, vec![vec![2], vec![0, 1]]);
        let s = minimal_supports(&q, &db, &[true, true, false]);
        assert_eq!(s, vec![vec![0, 1]]);
    }
}
