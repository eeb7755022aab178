use alloc::collections::BTreeMap;
use alloc::format;

use super::{GroundAtom, Rational};
use crate::error::{invalid, Result};

/// `w(n, k)`: the weight of a minimal support of size `n` in a database of
/// `k` facts.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub enum WeightFunction {
    /// `1/n`.
    #[default]
    Ms,
    /// Constant 1.
    Uniform,
    /// `1/n^2`.
    InverseSquare,
    /// Explicit values. An entry keyed `(n, None)` applies to every `k`.
    Table(BTreeMap<(usize, Option<usize>), Rational>),
}

impl WeightFunction {
    pub fn name(&self) -> &'static str {
        match self {
            WeightFunction::Ms => "ms",
            WeightFunction::Uniform => "uniform",
            WeightFunction::InverseSquare => "invsq",
            WeightFunction::Table(_) => "table",
        }
    }

    pub fn eval(&self, n: usize, k: usize) -> Result<Rational> {
        if n == 0 {
            return Err(invalid("weight of an empty support"));
        }
        let n_i = n as i64;
        Ok(match self {
            WeightFunction::Ms => Rational::new(1, n_i),
            WeightFunction::Uniform => Rational::one(),
            WeightFunction::InverseSquare => Rational::new(1, n_i * n_i),
            WeightFunction::Table(t) => t
                .get(&(n, Some(k)))
                .or_else(|| t.get(&(n, None)))
                .cloned()
                .ok_or_else(|| invalid(format!("weight table has no entry for n={n}, k={k}")))?,
        })
    }
}

/// Facts annotated with natural-number weights. Facts of weight 0 are
/// dropped, so every stored fact carries a positive weight.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeightedDatabase {
    weights: BTreeMap<GroundAtom, u128>,
}

impl WeightedDatabase {
    pub fn new() -> Self {
        WeightedDatabase::default()
    }

    /// Adds `weight` to the fact's current weight.
    pub fn add(&mut self, atom: GroundAtom, weight: u128) {
        if weight > 0 {
            *self.weights.entry(atom).or_insert(0) += weight;
        }
    }

    pub fn weight(&self, atom: &GroundAtom) -> u128 {
        self.weights.get(atom).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundAtom, u128)> {
        self.weights.iter().map(|(a, &w)| (a, w))
    }
}

impl FromIterator<(GroundAtom, u128)> for WeightedDatabase {
    fn from_iter<I: IntoIterator<Item = (GroundAtom, u128)>>(iter: I) -> Self {
        let mut db = WeightedDatabase::new();
        for (a, w) in iter {
            db.add(a, w);
        }
        db
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(WeightFunction::Ms.eval(3, 8).unwrap(), Rational::new(1, 3));
        assert_eq!(WeightFunction::InverseSquare.eval(2, 8).unwrap(), Rational::new(1, 4));
        assert_eq!(WeightFunction::Uniform.eval(5, 1).unwrap(), Rational::one());
        assert!(WeightFunction::Ms.eval(0, 1).is_err());
    }

    #[test]
    fn table_falls_back_to_wildcard() {
        let mut t = BTreeMap::new();
        t.insert((2, None), Rational::new(1, 7));
        t.insert((2, Some(8)), Rational::new(1, 9));
        let w = WeightFunction::Table(t);
        assert_eq!(w.eval(2, 8).unwrap(), Rational::new(1, 9));
        assert_eq!(w.eval(2, 3).unwrap(), Rational::new(1, 7));
        assert!(w.eval(1, 3).is_err());
    }
}
