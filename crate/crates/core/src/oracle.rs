//! Independent brute-force ground truth: exhaustive entailment table dumps,
//! literal subset-quantifier evaluation of companions, and table equality
//! with witnesses.
//!
//! Nothing here calls the sweep machinery in `companions`; the oracle is the
//! unoptimized referee that differential tests compare against.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::companions::Relation;
use crate::structures::{Budget, LogicalStructure, StructureError};
use crate::syntax::{Formula, FormulaSet, Signature};
use crate::universe::Universe;

/// Upper bound on the number of queries a single dump may issue.
const MAX_SWEEP: usize = 5_000_000;

pub const TABLE_FORMAT_HEADER: &str = "relatio-table v1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("dump of {queries} queries exceeds the oracle limit of {cap}")]
    SweepTooLarge { queries: usize, cap: usize },
    #[error("table dumps have different premise caps ({a} vs {b})")]
    CapMismatch { a: usize, b: usize },
    #[error("table dumps are over different universes")]
    UniverseMismatch,
    #[error("malformed table file at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// An exhaustive entailment table: every proved pair (Δ,α) with |Δ| ≤ cap
/// over the universe. `complete` is false when any query exhausted its
/// budget, which taints downstream equality checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDump {
    universe: Universe,
    premise_cap: usize,
    pairs: BTreeSet<(Vec<usize>, usize)>,
    complete: bool,
}

impl TableDump {
    pub fn from_parts(
        universe: Universe,
        premise_cap: usize,
        pairs: BTreeSet<(Vec<usize>, usize)>,
        complete: bool,
    ) -> TableDump {
        TableDump {
            universe,
            premise_cap,
            pairs,
            complete,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn premise_cap(&self) -> usize {
        self.premise_cap
    }

    pub fn pairs(&self) -> &BTreeSet<(Vec<usize>, usize)> {
        &self.pairs
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, delta: &FormulaSet, alpha: &Formula) -> bool {
        let Some(alpha_idx) = self.universe.index_of(alpha) else {
            return false;
        };
        let mut idx = Vec::with_capacity(delta.len());
        for formula in delta {
            let Some(i) = self.universe.index_of(formula) else {
                return false;
            };
            idx.push(i);
        }
        idx.sort_unstable();
        self.pairs.contains(&(idx, alpha_idx))
    }

    pub fn pair_formulas(&self, pair: &(Vec<usize>, usize)) -> (FormulaSet, Formula) {
        (
            self.universe.formula_set(&pair.0),
            self.universe.formula(pair.1).clone(),
        )
    }

    /// Reinterpret the table as an extensional structure.
    pub fn to_extensional(&self) -> crate::structures::ExtensionalStructure {
        crate::structures::ExtensionalStructure::from_index_pairs(
            self.universe.clone(),
            self.pairs.clone(),
        )
    }
}

fn sweep_size(universe: usize, cap: usize) -> usize {
    let mut subsets = 1usize; // the empty set
    let mut choose = 1usize;
    for i in 0..cap.min(universe) {
        choose = choose.saturating_mul(universe - i) / (i + 1);
        subsets = subsets.saturating_add(choose);
    }
    subsets.saturating_mul(universe)
}

/// Exhaustively query `structure` on every (Δ,α) with Δ ⊆ U, |Δ| ≤ cap,
/// α ∈ U, recording the proved pairs.
pub fn dump(
    structure: &dyn LogicalStructure,
    universe: &Universe,
    premise_cap: usize,
    budget: &Budget,
) -> Result<TableDump, OracleError> {
    let queries = sweep_size(universe.len(), premise_cap);
    if queries > MAX_SWEEP {
        return Err(OracleError::SweepTooLarge {
            queries,
            cap: MAX_SWEEP,
        });
    }
    let mut pairs = BTreeSet::new();
    let mut complete = true;
    for delta_idx in universe.subsets_up_to(premise_cap) {
        let delta = universe.formula_set(&delta_idx);
        for (alpha_idx, alpha) in universe.iter().enumerate() {
            let verdict = structure.entails(&delta, alpha, budget)?;
            if verdict.is_proved() {
                pairs.insert((delta_idx.clone(), alpha_idx));
            } else if verdict.is_exhausted() {
                complete = false;
            }
        }
    }
    Ok(TableDump {
        universe: universe.clone(),
        premise_cap,
        pairs,
        complete,
    })
}

/// The companion table computed by literal evaluation of the defining
/// quantifier against a base dump: (Γ,α) is listed iff some Δ ⊆ Γ
/// (nonempty, for pure companions) has (Δ,α) ∈ ρ and (Δ,α) in the base
/// table. No shortcut is ever taken.
pub fn brute_companion(base: &TableDump, rho: &Relation, pure: bool) -> TableDump {
    let universe = &base.universe;
    let mut pairs = BTreeSet::new();
    for gamma_idx in universe.subsets_up_to(base.premise_cap) {
        let n = gamma_idx.len();
        for (alpha_idx, alpha) in universe.iter().enumerate() {
            let mut witnessed = false;
            'masks: for mask in 0..(1usize << n) {
                if pure && mask == 0 {
                    continue;
                }
                let delta_idx: Vec<usize> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| gamma_idx[i])
                    .collect();
                if !base.pairs.contains(&(delta_idx.clone(), alpha_idx)) {
                    continue;
                }
                let delta = universe.formula_set(&delta_idx);
                if rho.holds(&delta, alpha) {
                    witnessed = true;
                    break 'masks;
                }
            }
            if witnessed {
                pairs.insert((gamma_idx.clone(), alpha_idx));
            }
        }
    }
    TableDump {
        universe: universe.clone(),
        premise_cap: base.premise_cap,
        pairs,
        complete: base.complete,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    LeftOnly,
    RightOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableComparison {
    Equal,
    Unequal {
        witness: (FormulaSet, Formula),
        side: Side,
    },
    /// One of the dumps was budget-tainted; the comparison proves nothing.
    Inconclusive,
}

fn require_comparable(a: &TableDump, b: &TableDump) -> Result<(), OracleError> {
    if a.universe.as_slice() != b.universe.as_slice() {
        return Err(OracleError::UniverseMismatch);
    }
    if a.premise_cap != b.premise_cap {
        return Err(OracleError::CapMismatch {
            a: a.premise_cap,
            b: b.premise_cap,
        });
    }
    Ok(())
}

/// Set equality of two dumps over the same universe and cap, reporting the
/// first differing pair (in canonical order) as a witness.
pub fn equal_tables(a: &TableDump, b: &TableDump) -> Result<TableComparison, OracleError> {
    require_comparable(a, b)?;
    if !a.complete || !b.complete {
        return Ok(TableComparison::Inconclusive);
    }
    let mut left = a.pairs.iter();
    let mut right = b.pairs.iter();
    let (mut l, mut r) = (left.next(), right.next());
    loop {
        match (l, r) {
            (None, None) => return Ok(TableComparison::Equal),
            (Some(x), None) => {
                return Ok(TableComparison::Unequal {
                    witness: a.pair_formulas(x),
                    side: Side::LeftOnly,
                });
            }
            (None, Some(y)) => {
                return Ok(TableComparison::Unequal {
                    witness: b.pair_formulas(y),
                    side: Side::RightOnly,
                });
            }
            (Some(x), Some(y)) => {
                if x == y {
                    l = left.next();
                    r = right.next();
                } else if x < y {
                    return Ok(TableComparison::Unequal {
                        witness: a.pair_formulas(x),
                        side: Side::LeftOnly,
                    });
                } else {
                    return Ok(TableComparison::Unequal {
                        witness: b.pair_formulas(y),
                        side: Side::RightOnly,
                    });
                }
            }
        }
    }
}

/// Inclusion check: `None` when every pair of `a` is in `b`, otherwise the
/// first missing pair.
pub fn subset_of(
    a: &TableDump,
    b: &TableDump,
) -> Result<Option<(FormulaSet, Formula)>, OracleError> {
    require_comparable(a, b)?;
    for pair in &a.pairs {
        if !b.pairs.contains(pair) {
            return Ok(Some(a.pair_formulas(pair)));
        }
    }
    Ok(None)
}

/// Serialize a dump in the `relatio-table v1` text format. The connective
/// declarations are reconstructed from the universe formulas.
pub fn write_table(dump: &TableDump) -> String {
    let mut out = String::new();
    out.push_str(TABLE_FORMAT_HEADER);
    out.push('\n');
    let mut conns: BTreeSet<(String, usize)> = BTreeSet::new();
    for f in dump.universe.iter() {
        collect_connectives(f, &mut conns);
    }
    for (sym, arity) in &conns {
        out.push_str(&format!("conn {sym} {arity}\n"));
    }
    for (i, f) in dump.universe.iter().enumerate() {
        out.push_str(&format!("formula {i} {f}\n"));
    }
    out.push_str(&format!("cap {}\n", dump.premise_cap));
    out.push_str(&format!("complete {}\n", dump.complete));
    for (delta, alpha) in &dump.pairs {
        out.push_str("pair");
        for i in delta {
            out.push_str(&format!(" {i}"));
        }
        out.push_str(&format!(" |- {alpha}\n"));
    }
    out
}

fn collect_connectives(f: &Formula, out: &mut BTreeSet<(String, usize)>) {
    if let Formula::App(sym, args) = f {
        out.insert((sym.to_string(), args.len()));
        for a in args.iter() {
            collect_connectives(a, out);
        }
    }
}

/// Parse the `relatio-table v1` format back into a dump plus the signature
/// reconstructed from its header.
pub fn read_table(text: &str) -> Result<(TableDump, Signature), OracleError> {
    let mut lines = text.lines().enumerate();
    let bad = |line: usize, message: &str| OracleError::Format {
        line: line + 1,
        message: message.to_string(),
    };
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| bad(0, "empty file"))?;
    if first.trim() != TABLE_FORMAT_HEADER {
        return Err(bad(first_no, "missing `relatio-table v1` header"));
    }

    let mut conns: Vec<(String, usize)> = Vec::new();
    let mut formulas: Vec<Formula> = Vec::new();
    let mut cap: Option<usize> = None;
    let mut complete: Option<bool> = None;
    let mut raw_pairs: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let mut sig: Option<Signature> = None;

    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("conn") => {
                let sym = words.next().ok_or_else(|| bad(no, "conn needs a symbol"))?;
                let arity: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| bad(no, "conn needs a numeric arity"))?;
                conns.push((sym.to_string(), arity));
            }
            Some("formula") => {
                let sig = sig.get_or_insert_with(|| {
                    Signature::new(conns.iter().map(|(s, a)| (s.clone(), *a)))
                        .unwrap_or_else(|_| Signature::new::<_, String>([]).unwrap())
                });
                let idx: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| bad(no, "formula needs an index"))?;
                if idx != formulas.len() {
                    return Err(bad(no, "formula indices must be consecutive from 0"));
                }
                let rest = words.collect::<Vec<_>>().join(" ");
                let f = crate::syntax::parse(&rest, sig)
                    .map_err(|e| bad(no, &format!("bad formula: {e}")))?;
                formulas.push(f);
            }
            Some("cap") => {
                cap = Some(
                    words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| bad(no, "cap needs a number"))?,
                );
            }
            Some("complete") => {
                complete = Some(match words.next() {
                    Some("true") => true,
                    Some("false") => false,
                    _ => return Err(bad(no, "complete needs true or false")),
                });
            }
            Some("pair") => {
                let mut premises = Vec::new();
                let mut conclusion: Option<usize> = None;
                let mut seen_turnstile = false;
                for w in words {
                    if w == "|-" {
                        seen_turnstile = true;
                    } else {
                        let i: usize = w
                            .parse()
                            .map_err(|_| bad(no, "pair indices must be numbers"))?;
                        if seen_turnstile {
                            if conclusion.replace(i).is_some() {
                                return Err(bad(no, "pair has more than one conclusion"));
                            }
                        } else {
                            premises.push(i);
                        }
                    }
                }
                let conclusion =
                    conclusion.ok_or_else(|| bad(no, "pair needs `|- <conclusion>`"))?;
                raw_pairs.push((no, premises, conclusion));
            }
            Some(other) => return Err(bad(no, &format!("unknown directive `{other}`"))),
            None => {}
        }
    }

    let sig = sig.unwrap_or_else(|| {
        Signature::new(conns.iter().map(|(s, a)| (s.clone(), *a)))
            .unwrap_or_else(|_| Signature::new::<_, String>([]).unwrap())
    });
    let universe = Universe::from_formulas(formulas.clone());
    for (i, f) in formulas.iter().enumerate() {
        if universe.index_of(f) != Some(i) {
            return Err(bad(0, "universe formulas are not in canonical order"));
        }
    }
    let cap = cap.ok_or_else(|| bad(0, "missing cap line"))?;
    let complete = complete.ok_or_else(|| bad(0, "missing complete line"))?;
    let mut pairs = BTreeSet::new();
    for (no, mut premises, conclusion) in raw_pairs {
        if conclusion >= universe.len() || premises.iter().any(|&i| i >= universe.len()) {
            return Err(bad(no, "pair index out of range"));
        }
        premises.sort_unstable();
        premises.dedup();
        pairs.insert((premises, conclusion));
    }
    Ok((
        TableDump {
            universe,
            premise_cap: cap,
            pairs,
            complete,
        },
        sig,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{HilbertBackend, HilbertStructure, RuleSchema};
    use crate::structures::ExtensionalStructure;
    use crate::syntax::{parse, parse_pattern};

    fn sig() -> Signature {
        Signature::new([("&", 2), ("|", 2)]).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse(text, &sig()).unwrap()
    }

    fn fs(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| f(t)).collect()
    }

    fn pat(text: &str) -> Formula {
        parse_pattern(text, &sig()).unwrap()
    }

    fn s1() -> HilbertStructure {
        HilbertStructure::new(
            "s1",
            sig(),
            vec![
                RuleSchema::new("r1", vec![pat("(?A & ?B)")], pat("?A")),
                RuleSchema::new("r2", vec![pat("?A")], pat("(?A | ?B)")),
            ],
        )
    }

    fn s2() -> HilbertStructure {
        let mut schemata = s1().schemata().to_vec();
        schemata.push(RuleSchema::new("r3", vec![pat("(?A & ?B)")], pat("(?A | ?B)")));
        HilbertStructure::new("s2", sig(), schemata)
    }

    fn depth2() -> Universe {
        Universe::generate(&sig(), &["p", "q"], 2, 1000).unwrap()
    }

    #[test]
    fn self_dump_reproduces_table() {
        let u = Universe::from_formulas([f("p"), f("q")]);
        let s = ExtensionalStructure::new(
            u.clone(),
            [(fs(&["p"]), f("q")), (fs(&["p", "q"]), f("p"))],
        )
        .unwrap();
        let d = dump(&s, &u, 2, &Budget::default()).unwrap();
        assert!(d.is_complete());
        assert!(d.contains(&fs(&["p"]), &f("q")));
        assert!(d.contains(&fs(&["p", "q"]), &f("p")));
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn s1_dump_contains_disjunction_before_restriction() {
        let u = depth2();
        let base = HilbertBackend::new(s1(), u.clone());
        let d = dump(&base, &u, 1, &Budget::default()).unwrap();
        assert!(d.contains(&fs(&["(p & q)"]), &f("(p | q)")));
        assert!(d.contains(&fs(&["(p & q)"]), &f("p")));

        let restricted = HilbertBackend::new(s1().restrict_rules(), u.clone());
        let dr = dump(&restricted, &u, 1, &Budget::default()).unwrap();
        assert!(!dr.contains(&fs(&["(p & q)"]), &f("(p | q)")));
    }

    #[test]
    fn brute_companion_left_example() {
        let u = Universe::from_formulas([f("p"), f("q")]);
        let base = ExtensionalStructure::new(u.clone(), [(fs(&["p"]), f("p"))]).unwrap();
        let d = dump(&base, &u, 2, &Budget::default()).unwrap();
        let companion = brute_companion(&d, &Relation::left(), false);
        assert!(companion.contains(&fs(&["p"]), &f("p")));
        // Δ = {p} has var ⊆ var(p) and the base proves it
        assert!(companion.contains(&fs(&["p", "q"]), &f("p")));
    }

    #[test]
    fn brute_companion_empty_relation() {
        let u = Universe::from_formulas([f("p"), f("q")]);
        let base = ExtensionalStructure::new(u.clone(), [(fs(&["p"]), f("p"))]).unwrap();
        let d = dump(&base, &u, 2, &Budget::default()).unwrap();
        assert!(brute_companion(&d, &Relation::empty(), false).is_empty());
    }

    #[test]
    fn pure_removes_empty_witness_entries() {
        let u = Universe::from_formulas([f("p"), f("q")]);
        let base = ExtensionalStructure::new(u.clone(), [(FormulaSet::new(), f("p"))]).unwrap();
        let d = dump(&base, &u, 2, &Budget::default()).unwrap();
        let plain = brute_companion(&d, &Relation::total(), false);
        let pure = brute_companion(&d, &Relation::total(), true);
        assert!(plain.contains(&FormulaSet::new(), &f("p")));
        assert!(plain.contains(&fs(&["q"]), &f("p")));
        assert!(pure.is_empty());
    }

    #[test]
    fn equal_tables_reflexive_and_witnessed() {
        let u = depth2();
        let d1 = dump(
            &HilbertBackend::new(s1().restrict_rules(), u.clone()),
            &u,
            1,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(equal_tables(&d1, &d1).unwrap(), TableComparison::Equal);

        let d2 = dump(
            &HilbertBackend::new(s2().restrict_rules(), u.clone()),
            &u,
            1,
            &Budget::default(),
        )
        .unwrap();
        match equal_tables(&d1, &d2).unwrap() {
            TableComparison::Unequal { witness, side } => {
                assert_eq!(side, Side::RightOnly);
                assert_eq!(witness.0, fs(&["(p & q)"]));
                assert_eq!(witness.1, f("(p | q)"));
            }
            other => panic!("expected inequality, got {other:?}"),
        }
    }

    #[test]
    fn cap_mismatch_is_an_error() {
        let u = Universe::from_formulas([f("p")]);
        let s = ExtensionalStructure::new(u.clone(), []).unwrap();
        let d1 = dump(&s, &u, 1, &Budget::default()).unwrap();
        let d2 = dump(&s, &u, 0, &Budget::default()).unwrap();
        assert!(matches!(
            equal_tables(&d1, &d2),
            Err(OracleError::CapMismatch { .. })
        ));
    }

    #[test]
    fn incomplete_dump_is_inconclusive() {
        let u = depth2();
        let backend = HilbertBackend::new(s1(), u.clone());
        let d = dump(&backend, &u, 1, &Budget::with_steps(0)).unwrap();
        assert!(!d.is_complete());
        assert_eq!(
            equal_tables(&d, &d).unwrap(),
            TableComparison::Inconclusive
        );
    }

    #[test]
    fn dump_round_trips_through_text() {
        let u = depth2();
        let backend = HilbertBackend::new(s1().restrict_rules(), u.clone());
        let d = dump(&backend, &u, 1, &Budget::default()).unwrap();
        let text = write_table(&d);
        let (back, _sig) = read_table(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn read_table_rejects_garbage() {
        assert!(matches!(
            read_table("not a table"),
            Err(OracleError::Format { line: 1, .. })
        ));
        let text = format!("{TABLE_FORMAT_HEADER}\nformula 0 p\nwhat 1 2\n");
        assert!(matches!(
            read_table(&text),
            Err(OracleError::Format { line: 3, .. })
        ));
    }

    #[test]
    fn listed_pairs_requery_as_proved() {
        let u = depth2();
        let backend = HilbertBackend::new(s2().restrict_rules(), u.clone());
        let d = dump(&backend, &u, 1, &Budget::default()).unwrap();
        for pair in d.pairs().iter().take(50) {
            let (delta, alpha) = d.pair_formulas(pair);
            assert!(backend
                .entails(&delta, &alpha, &Budget::default())
                .unwrap()
                .is_proved());
        }
    }
}
