//! Finite formula universes: ordered, indexed carriers for every
//! bounded-exhaustive sweep in the workbench.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Formula, FormulaSet, Signature};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("universe too large: {size} formulas exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
}

/// A finite, duplicate-free, canonically ordered set of formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    formulas: Arc<Vec<Formula>>,
    index: Arc<HashMap<Formula, usize>>,
}

impl Universe {
    pub fn from_formulas<I: IntoIterator<Item = Formula>>(formulas: I) -> Universe {
        let set: FormulaSet = formulas.into_iter().collect();
        let formulas: Vec<Formula> = set.into_iter().collect();
        let index = formulas
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Universe {
            formulas: Arc::new(formulas),
            index: Arc::new(index),
        }
    }

    /// All formulas over `vars` with connective depth at most `depth`.
    /// Fails once the universe would exceed `cap` formulas.
    pub fn generate(
        sig: &Signature,
        vars: &[&str],
        depth: usize,
        cap: usize,
    ) -> Result<Universe, UniverseError> {
        let mut all: Vec<Formula> = vars.iter().map(|v| Formula::var(v)).collect();
        // a round may push duplicates of shallower formulas before dedup,
        // at most doubling the true count
        let scratch_cap = cap.saturating_mul(2).saturating_add(16);
        for _ in 0..depth {
            let prev = all.clone();
            for (sym, arity) in sig.connectives() {
                let mut args = vec![0usize; arity];
                // mixed-radix enumeration of arity-fold argument tuples
                loop {
                    all.push(Formula::app(
                        sym,
                        args.iter().map(|&i| prev[i].clone()).collect(),
                    ));
                    if all.len() > scratch_cap {
                        return Err(UniverseError::TooLarge {
                            size: all.len(),
                            cap,
                        });
                    }
                    if !bump(&mut args, prev.len()) {
                        break;
                    }
                }
            }
            all.sort();
            all.dedup();
            if all.len() > cap {
                return Err(UniverseError::TooLarge {
                    size: all.len(),
                    cap,
                });
            }
            if all.len() == prev.len() {
                break;
            }
        }
        Ok(Universe::from_formulas(all))
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.formulas
    }

    /// All subsets of the universe with at most `max_size` elements, as
    /// sorted index vectors, ordered by size then lexicographically.
    pub fn subsets_up_to(&self, max_size: usize) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = vec![vec![]];
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max_size.min(n) {
            let mut next = Vec::new();
            for s in &layer {
                let start = s.last().map_or(0, |&l| l + 1);
                for i in start..n {
                    let mut t = s.clone();
                    t.push(i);
                    next.push(t);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn formula_set(&self, indices: &[usize]) -> FormulaSet {
        indices.iter().map(|&i| self.formulas[i].clone()).collect()
    }
}

fn bump(args: &mut [usize], radix: usize) -> bool {
    for slot in args.iter_mut() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.formulas.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new([("&", 2), ("|", 2)]).unwrap()
    }

    #[test]
    fn depth_counts() {
        let u = Universe::generate(&sig(), &["p", "q"], 1, 1000).unwrap();
        // 2 atoms + 2 connectives × 2×2 argument pairs
        assert_eq!(u.len(), 10);
        let u2 = Universe::generate(&sig(), &["p", "q"], 2, 1000).unwrap();
        // 2 atoms + 2 × 10×10 applications
        assert_eq!(u2.len(), 202);
    }

    #[test]
    fn depth_zero_is_atoms() {
        let u = Universe::generate(&sig(), &["p", "q", "r"], 0, 10).unwrap();
        assert_eq!(u.len(), 3);
    }

    #[test]
    fn cap_enforced() {
        let err = Universe::generate(&sig(), &["p", "q"], 2, 50).unwrap_err();
        assert!(matches!(err, UniverseError::TooLarge { .. }));
    }

    #[test]
    fn constants_have_depth_one() {
        let s = Signature::new([("T", 0), ("~", 1)]).unwrap();
        let u = Universe::generate(&s, &["p"], 2, 100).unwrap();
        // depth 0: p; depth 1: T, ~p; depth 2: ~T, ~~p
        assert_eq!(u.len(), 5);
    }

    #[test]
    fn subsets_ordering() {
        let u = Universe::from_formulas([Formula::var("p"), Formula::var("q")]);
        let subs = u.subsets_up_to(2);
        assert_eq!(subs, vec![vec![], vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn nested_universes_monotone() {
        let small = Universe::generate(&sig(), &["p", "q"], 1, 1000).unwrap();
        let big = Universe::generate(&sig(), &["p", "q"], 2, 1000).unwrap();
        for f in small.iter() {
            assert!(big.contains(f));
        }
    }
}
