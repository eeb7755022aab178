use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::SupportHistogram;

/// Largest number of facts the subset enumeration accepts.
pub const BRUTE_LIMIT: usize = 22;

/// Inclusion-minimal subsets of the `active` facts on which `eval` holds.
/// `eval` must be monotone; it receives a mask over all facts. Supports are
/// returned as sorted fact indices, smallest first. With `size_cap`, only
/// supports of at most that many facts are produced.
pub fn minimal_supports(
    active: &[bool],
    mut eval: impl FnMut(&[bool]) -> Result<bool>,
    size_cap: Option<usize>,
) -> Result<Vec<Vec<usize>>> {
    let idx: Vec<usize> = (0..active.len()).filter(|&i| active[i]).collect();
    let m = idx.len();
    if m > BRUTE_LIMIT {
        return Err(Error::TooLarge {
            what: "fact count for subset enumeration",
            actual: m,
            limit: BRUTE_LIMIT,
        });
    }
    let cap = size_cap.unwrap_or(m);
    // 0 unknown (above the cap), 1 false, 2 true
    let mut sat = vec![0u8; 1usize << m];
    let mut mask = vec![false; active.len()];
    let mut out = Vec::new();
    for s in 0usize..(1 << m) {
        let size = s.count_ones() as usize;
        if size > cap {
            continue;
        }
        let mut sub_sat = false;
        let mut bits = s;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            bits ^= b;
            if sat[s ^ b] == 2 {
                sub_sat = true;
                break;
            }
        }
        if sub_sat {
            sat[s] = 2;
            continue;
        }
        for (j, &i) in idx.iter().enumerate() {
            mask[i] = s >> j & 1 == 1;
        }
        if eval(&mask)? {
            sat[s] = 2;
            out.push((0..m).filter(|j| s >> j & 1 == 1).map(|j| idx[j]).collect::<Vec<_>>());
        } else {
            sat[s] = 1;
        }
    }
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

pub fn histogram_of(supports: &[Vec<usize>]) -> SupportHistogram {
    let mut h = SupportHistogram::new();
    for s in supports {
        h.add(s.len(), 1);
    }
    h
}

/// Number of minimal supports per size among the `active` facts.
pub fn count_fms(active: &[bool], eval: impl FnMut(&[bool]) -> Result<bool>) -> Result<SupportHistogram> {
    Ok(histogram_of(&minimal_supports(active, eval, None)?))
}

/// The definitional check: `eval` holds on `support` and fails once any
/// single fact is dropped.
pub fn is_minimal_support(
    n: usize,
    support: &[usize],
    mut eval: impl FnMut(&[bool]) -> Result<bool>,
) -> Result<bool> {
    let mut mask = vec![false; n];
    for &i in support {
        mask[i] = true;
    }
    if !eval(&mask)? {
        return Ok(false);
    }
    for &i in support {
        mask[i] = false;
        let holds = eval(&mask)?;
        mask[i] = true;
        if holds {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports_of_a_threshold_function() {
        // holds when facts {0,1} or {2} are present
        let eval = |m: &[bool]| Ok((m[0] && m[1]) || m[2]);
        let s = minimal_supports(&[true; 4], eval, None).unwrap();
        assert_eq!(s, vec![vec![2], vec![0, 1]]);
        let h = count_fms(&[true; 4], eval).unwrap();
        assert_eq!(h, SupportHistogram::from_counts([(1, 1), (2, 1)]));
        let capped = minimal_supports(&[true; 4], eval, Some(1)).unwrap();
        assert_eq!(capped, vec![vec![2]]);
        let without2 = minimal_supports(&[true, true, false, true], eval, None).unwrap();
        assert_eq!(without2, vec![vec![0, 1]]);
        assert!(is_minimal_support(4, &[0, 1], eval).unwrap());
        assert!(!is_minimal_support(4, &[0, 1, 2], eval).unwrap());
    }

    #[test]
    fn unsatisfied_gives_nothing() {
        let s = minimal_supports(&[true; 3], |_| Ok(false), None).unwrap();
        assert!(s.is_empty());
    }
}
