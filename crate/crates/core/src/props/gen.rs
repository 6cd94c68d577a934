//! Deterministic instance generators: random finite structures, random
//! relations with hypothesis-shaped variants, and Hilbert rule samples.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hilbert::{HilbertStructure, RuleSchema};
use crate::syntax::{parse_pattern, Formula, FormulaSet, Signature};
use crate::universe::Universe;

/// Entailment or relation table at the formula level; premise sets stay
/// within the configured cap by construction.
pub type FPairs = BTreeSet<(FormulaSet, Formula)>;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Split a run seed into an independent per-instance stream.
pub fn instance_rng(seed: u64, name: &str, index: usize) -> ChaCha8Rng {
    let mut h = seed;
    for b in name.bytes() {
        h = splitmix(h ^ u64::from(b));
    }
    ChaCha8Rng::seed_from_u64(splitmix(h ^ index as u64))
}

/// The formula pool instances draw their universes from: three variables,
/// conjunction, disjunction, negation, depth ≤ 2.
pub fn formula_pool() -> Vec<Formula> {
    let sig = Signature::new([("&", 2), ("|", 2), ("~", 1)]).unwrap();
    Universe::generate(&sig, &["p", "q", "r"], 2, 5000)
        .unwrap()
        .as_slice()
        .to_vec()
}

/// A random universe: `size` distinct pool formulas, variables preferred so
/// small universes still exhibit variable-inclusion structure.
pub fn sample_universe(rng: &mut ChaCha8Rng, pool: &[Formula], size: usize) -> Vec<Formula> {
    let mut picked: BTreeSet<Formula> = BTreeSet::new();
    // always include at least one variable when the pool has one
    if let Some(v) = pool.iter().find(|f| matches!(f, Formula::Var(_))) {
        picked.insert(v.clone());
    }
    while picked.len() < size.min(pool.len()) {
        let f = pool[rng.gen_range(0..pool.len())].clone();
        picked.insert(f);
    }
    picked.into_iter().collect()
}

fn subsets_up_to(universe: &[Formula], cap: usize) -> Vec<FormulaSet> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..cap.min(universe.len()) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..universe.len() {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter()
        .map(|idx| idx.into_iter().map(|i| universe[i].clone()).collect())
        .collect()
}

/// A random table over the universe: each (Δ,α) with |Δ| ≤ cap included
/// with probability `density`.
pub fn sample_table(
    rng: &mut ChaCha8Rng,
    universe: &[Formula],
    cap: usize,
    density: f64,
) -> FPairs {
    let mut out = FPairs::new();
    for delta in subsets_up_to(universe, cap) {
        for alpha in universe {
            if rng.gen_bool(density) {
                out.insert((delta.clone(), alpha.clone()));
            }
        }
    }
    out
}

/// Close a table under premise supersets within the cap.
pub fn monotone_close(universe: &[Formula], cap: usize, table: &FPairs) -> FPairs {
    let mut out = table.clone();
    let mut frontier: Vec<(FormulaSet, Formula)> = table.iter().cloned().collect();
    while let Some((delta, alpha)) = frontier.pop() {
        if delta.len() >= cap {
            continue;
        }
        for extra in universe {
            if delta.contains(extra) {
                continue;
            }
            let mut bigger = delta.clone();
            bigger.insert(extra.clone());
            if out.insert((bigger.clone(), alpha.clone())) {
                frontier.push((bigger, alpha.clone()));
            }
        }
    }
    out
}

/// Close a relation table downward: membership of (Δ,α) spreads to every
/// subset of Δ.
pub fn downward_close(table: &FPairs) -> FPairs {
    let mut out = FPairs::new();
    for (delta, alpha) in table {
        let elems: Vec<&Formula> = delta.iter().collect();
        for mask in 0..(1usize << elems.len()) {
            let sub: FormulaSet = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, f)| (*f).clone())
                .collect();
            out.insert((sub, alpha.clone()));
        }
    }
    out
}

/// Add the row (∅,α) for every α in the universe.
pub fn add_empty_rows(universe: &[Formula], table: &FPairs) -> FPairs {
    let mut out = table.clone();
    for alpha in universe {
        out.insert((FormulaSet::new(), alpha.clone()));
    }
    out
}

/// Keep each pair with probability `keep`; the result is a subset of the
/// input, which is how ρ ⊆ σ hypotheses are manufactured.
pub fn subsample(rng: &mut ChaCha8Rng, table: &FPairs, keep: f64) -> FPairs {
    table
        .iter()
        .filter(|_| rng.gen_bool(keep))
        .cloned()
        .collect()
}

/// A relation in which every premise set reaches at most one conclusion.
pub fn sparse_reach_relation(
    rng: &mut ChaCha8Rng,
    universe: &[Formula],
    cap: usize,
    density: f64,
) -> FPairs {
    let mut out = FPairs::new();
    for delta in subsets_up_to(universe, cap) {
        if rng.gen_bool(density) {
            let alpha = universe[rng.gen_range(0..universe.len())].clone();
            out.insert((delta, alpha));
        }
    }
    out
}

/// Is the relation table downward directed (over the charted premise sets)?
pub fn is_downward_directed(table: &FPairs) -> bool {
    for (delta, alpha) in table {
        for gamma in delta {
            let mut smaller = delta.clone();
            smaller.remove(gamma);
            if !table.contains(&(smaller, alpha.clone())) {
                return false;
            }
        }
    }
    true
}

/// Is the table monotone within the cap (premise supersets preserved)?
pub fn is_monotone_within(universe: &[Formula], cap: usize, table: &FPairs) -> bool {
    for (delta, alpha) in table {
        if delta.len() >= cap {
            continue;
        }
        for extra in universe {
            if delta.contains(extra) {
                continue;
            }
            let mut bigger = delta.clone();
            bigger.insert(extra.clone());
            if !table.contains(&(bigger, alpha.clone())) {
                return false;
            }
        }
    }
    true
}

/// The signature the Hilbert samples live in.
pub fn hilbert_signature() -> Signature {
    Signature::new([("&", 2), ("|", 2)]).unwrap()
}

/// The fixed universe for Hilbert-sample properties: depth ≤ 1 over {p,q}.
pub fn hilbert_universe() -> Universe {
    Universe::generate(&hilbert_signature(), &["p", "q"], 1, 100).unwrap()
}

/// A pool of rule schemata that mixes projection, introduction, adjunction,
/// an axiom, and deliberately odd rules, so restricted companions sometimes
/// coincide with left companions and sometimes do not.
pub fn schema_pool() -> Vec<RuleSchema> {
    let sig = hilbert_signature();
    let pat = |t: &str| parse_pattern(t, &sig).unwrap();
    vec![
        RuleSchema::new("conj_left", vec![pat("(?A & ?B)")], pat("?A")),
        RuleSchema::new("conj_right", vec![pat("(?A & ?B)")], pat("?B")),
        RuleSchema::new("disj_intro", vec![pat("?A")], pat("(?A | ?B)")),
        RuleSchema::new("conj_to_disj", vec![pat("(?A & ?B)")], pat("(?A | ?B)")),
        RuleSchema::new("duplicate", vec![pat("?A")], pat("(?A & ?A)")),
        RuleSchema::new("adjunction", vec![pat("?A"), pat("?B")], pat("(?A & ?B)")),
        RuleSchema::new("disj_project", vec![pat("(?A | ?B)")], pat("?A")),
        RuleSchema::new("excluded_axiom", vec![], pat("(?A | ?A)")),
    ]
}

/// A random subset of the schema pool as a Hilbert structure.
pub fn sample_hilbert(rng: &mut ChaCha8Rng, name: &str) -> HilbertStructure {
    let pool = schema_pool();
    let mut schemata = Vec::new();
    for schema in pool {
        if rng.gen_bool(0.5) {
            schemata.push(schema);
        }
    }
    HilbertStructure::new(name, hilbert_signature(), schemata)
}

/// The two rule systems from the restricted-rules counterexample:
/// conjunction elimination + disjunction introduction, and the same plus
/// the direct conjunction-to-disjunction rule.
pub fn remark_pair() -> (HilbertStructure, HilbertStructure) {
    let sig = hilbert_signature();
    let pat = |t: &str| parse_pattern(t, &sig).unwrap();
    let r1 = RuleSchema::new("r1", vec![pat("(?A & ?B)")], pat("?A"));
    let r2 = RuleSchema::new("r2", vec![pat("?A")], pat("(?A | ?B)"));
    let r3 = RuleSchema::new("r3", vec![pat("(?A & ?B)")], pat("(?A | ?B)"));
    let s1 = HilbertStructure::new("s1", sig.clone(), vec![r1.clone(), r2.clone()]);
    let s2 = HilbertStructure::new("s2", sig, vec![r1, r2, r3]);
    (s1, s2)
}
