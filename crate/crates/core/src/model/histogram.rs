use alloc::collections::BTreeMap;
use core::fmt;

/// Number of minimal supports per support size. Zero counts are never
/// stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SupportHistogram {
    counts: BTreeMap<usize, u128>,
}

impl SupportHistogram {
    pub fn new() -> Self {
        SupportHistogram::default()
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (usize, u128)>) -> Self {
        let mut h = SupportHistogram::new();
        for (k, c) in counts {
            h.add(k, c);
        }
        h
    }

    pub fn add(&mut self, size: usize, count: u128) {
        if count > 0 {
            *self.counts.entry(size).or_insert(0) += count;
        }
    }

    pub fn get(&self, size: usize) -> u128 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u128)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn max_size(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    pub fn merge(&mut self, other: &SupportHistogram) {
        for (k, c) in other.iter() {
            self.add(k, c);
        }
    }

    /// Entry-wise `self - other`; `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &SupportHistogram) -> Option<SupportHistogram> {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            let cur = out.get(k).checked_sub(c)?;
            if cur == 0 {
                out.counts.remove(&k);
            } else {
                out.counts.insert(k, cur);
            }
        }
        Some(out)
    }
}

impl fmt::Display for SupportHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {c}")?;
        }
        f.write_str("}")
    }
}
