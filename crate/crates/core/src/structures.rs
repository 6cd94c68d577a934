//! Logical structures ⟨L,⊢⟩: the entailment interface, extensional tables,
//! finite matrix semantics, and Tarski-property checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::hilbert::Derivation;
use crate::syntax::{vars_set, Formula, FormulaSet, Token};
use crate::universe::Universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trilean {
    Yes,
    No,
    Unknown,
}

impl Trilean {
    pub fn is_yes(self) -> bool {
        self == Trilean::Yes
    }
}

/// Resource bounds for an entailment query. Only forward-chaining backends
/// consume steps; finite sweeps ignore the budget.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub step_cap: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { step_cap: 100_000 }
    }
}

impl Budget {
    pub fn with_steps(step_cap: usize) -> Budget {
        Budget { step_cap }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("formula `{formula}` is outside the structure's universe")]
    OutOfUniverse { formula: String },
    #[error("no truth table for connective `{connective}`")]
    MissingTable { connective: String },
    #[error("premise set of size {size} exceeds the sweep limit of {limit}")]
    PremiseSetTooLarge { size: usize, limit: usize },
    #[error("universe of {size} formulas exceeds the lattice-sweep cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
}

/// An assignment of matrix values to variables; the refutation witness
/// produced by matrix backends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub assignment: BTreeMap<Token, Token>,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (var, val) in &self.assignment {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{var}={val}")?;
            first = false;
        }
        Ok(())
    }
}

/// How definitive a refutation is: `Full` settles the query outright,
/// `WithinUniverse` only rules out derivations confined to the universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefutationScope {
    Full,
    WithinUniverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub scope: RefutationScope,
    pub witness: Option<Valuation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetReport {
    pub steps_used: usize,
    pub step_cap: usize,
}

/// A checkable justification attached to every `Proved` verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The queried pair is listed in an extensional table.
    Listed,
    /// Every valuation designating the premises designates the conclusion.
    TruthTable { valuations_checked: usize },
    /// A replayable Hilbert derivation.
    Derivation(Derivation),
    /// Companion witness: the premise subset used, plus the base certificate.
    Witness {
        delta: FormulaSet,
        base: Box<Certificate>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(Certificate),
    Refuted(Refutation),
    Exhausted(BudgetReport),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, Verdict::Exhausted(_))
    }

    pub fn refuted_full() -> Verdict {
        Verdict::Refuted(Refutation {
            scope: RefutationScope::Full,
            witness: None,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proved(_) => write!(f, "Proved"),
            Verdict::Refuted(r) => match r.scope {
                RefutationScope::Full => write!(f, "Refuted (definitive)"),
                RefutationScope::WithinUniverse => write!(f, "Refuted (within universe)"),
            },
            Verdict::Exhausted(b) => {
                write!(f, "Exhausted (step cap {})", b.step_cap)
            }
        }
    }
}

/// A logical structure ⟨L,⊢⟩ answering finite entailment queries.
/// Implementations must be deterministic for fixed inputs and budget.
pub trait LogicalStructure: Send + Sync {
    fn entails(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        budget: &Budget,
    ) -> Result<Verdict, StructureError>;

    /// Whether the structure is known to be monotonic in its premises.
    fn is_monotonic(&self) -> Trilean {
        Trilean::Unknown
    }

    fn name(&self) -> String {
        "structure".to_string()
    }
}

impl<T: LogicalStructure + ?Sized> LogicalStructure for Arc<T> {
    fn entails(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        (**self).entails(premises, conclusion, budget)
    }

    fn is_monotonic(&self) -> Trilean {
        (**self).is_monotonic()
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// An explicit finite entailment table over a finite formula universe.
/// No closure condition is assumed on the listed pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionalStructure {
    name: String,
    universe: Universe,
    pairs: BTreeSet<(Vec<usize>, usize)>,
    monotonic: Trilean,
}

impl ExtensionalStructure {
    pub fn new<I>(universe: Universe, pairs: I) -> Result<ExtensionalStructure, StructureError>
    where
        I: IntoIterator<Item = (FormulaSet, Formula)>,
    {
        let mut index_pairs = BTreeSet::new();
        for (delta, alpha) in pairs {
            let mut idx = Vec::with_capacity(delta.len());
            for f in &delta {
                idx.push(lookup(&universe, f)?);
            }
            idx.sort_unstable();
            idx.dedup();
            index_pairs.insert((idx, lookup(&universe, &alpha)?));
        }
        Ok(ExtensionalStructure {
            name: "extensional".to_string(),
            universe,
            pairs: index_pairs,
            monotonic: Trilean::Unknown,
        })
    }

    pub fn from_index_pairs(
        universe: Universe,
        pairs: BTreeSet<(Vec<usize>, usize)>,
    ) -> ExtensionalStructure {
        let pairs = pairs
            .into_iter()
            .map(|(mut idx, a)| {
                idx.sort_unstable();
                idx.dedup();
                (idx, a)
            })
            .collect();
        ExtensionalStructure {
            name: "extensional".to_string(),
            universe,
            pairs,
            monotonic: Trilean::Unknown,
        }
    }

    pub fn with_name(mut self, name: &str) -> ExtensionalStructure {
        self.name = name.to_string();
        self
    }

    /// Declare the table monotonic. The declaration is trusted by sweep
    /// shortcuts, so callers should only set it for closure-built tables.
    pub fn declared_monotonic(mut self) -> ExtensionalStructure {
        self.monotonic = Trilean::Yes;
        self
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn index_pairs(&self) -> &BTreeSet<(Vec<usize>, usize)> {
        &self.pairs
    }

    pub fn contains_indices(&self, delta: &[usize], alpha: usize) -> bool {
        debug_assert!(delta.windows(2).all(|w| w[0] < w[1]));
        self.pairs.contains(&(delta.to_vec(), alpha))
    }

    pub fn contains_pair(&self, delta: &FormulaSet, alpha: &Formula) -> Option<bool> {
        let mut idx = Vec::with_capacity(delta.len());
        for f in delta {
            idx.push(self.universe.index_of(f)?);
        }
        idx.sort_unstable();
        let a = self.universe.index_of(alpha)?;
        Some(self.pairs.contains(&(idx, a)))
    }

    /// Exhaustively verify monotonicity over premise sets of size ≤ `cap`.
    pub fn verify_monotonic_within(&self, cap: usize) -> bool {
        let n = self.universe.len();
        for (delta, alpha) in &self.pairs {
            if delta.len() >= cap {
                continue;
            }
            for j in 0..n {
                if delta.binary_search(&j).is_ok() {
                    continue;
                }
                let mut bigger = delta.clone();
                bigger.push(j);
                bigger.sort_unstable();
                if !self.pairs.contains(&(bigger, *alpha)) {
                    return false;
                }
            }
        }
        true
    }
}

fn lookup(universe: &Universe, f: &Formula) -> Result<usize, StructureError> {
    universe.index_of(f).ok_or_else(|| StructureError::OutOfUniverse {
        formula: f.to_string(),
    })
}

impl LogicalStructure for ExtensionalStructure {
    /// `Proved` iff the pair is listed; refutations are definitive and the
    /// verdict is never `Exhausted`.
    fn entails(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        _budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        let mut idx = Vec::with_capacity(premises.len());
        for f in premises {
            idx.push(lookup(&self.universe, f)?);
        }
        idx.sort_unstable();
        let a = lookup(&self.universe, conclusion)?;
        if self.pairs.contains(&(idx, a)) {
            Ok(Verdict::Proved(Certificate::Listed))
        } else {
            Ok(Verdict::refuted_full())
        }
    }

    fn is_monotonic(&self) -> Trilean {
        self.monotonic
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("duplicate value name `{0}`")]
    DuplicateValue(String),
    #[error("unknown value name `{0}`")]
    UnknownValue(String),
    #[error("designated set must be nonempty and a proper subset of the values")]
    BadDesignated,
    #[error("table for `{symbol}` expects {expected} argument(s), got {got}")]
    TableArity {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("table for `{symbol}` is missing an entry for inputs ({inputs})")]
    IncompleteTable { symbol: String, inputs: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct MatrixTable {
    arity: usize,
    // row-major over little-endian argument digits; usize::MAX marks a hole
    entries: Vec<usize>,
}

/// A finite logical matrix: truth values, a designated subset, and one total
/// table per connective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    name: String,
    values: Vec<Token>,
    value_index: HashMap<Token, usize>,
    designated: BTreeSet<usize>,
    tables: HashMap<Token, MatrixTable>,
}

impl Matrix {
    pub fn new(
        name: &str,
        values: &[&str],
        designated: &[&str],
    ) -> Result<Matrix, MatrixError> {
        let mut value_index = HashMap::new();
        let mut vals = Vec::new();
        for v in values {
            let tok: Token = Arc::from(*v);
            if value_index.insert(tok.clone(), vals.len()).is_some() {
                return Err(MatrixError::DuplicateValue(v.to_string()));
            }
            vals.push(tok);
        }
        let mut des = BTreeSet::new();
        for d in designated {
            let i = value_index
                .get(*d)
                .copied()
                .ok_or_else(|| MatrixError::UnknownValue(d.to_string()))?;
            des.insert(i);
        }
        if des.is_empty() || des.len() == vals.len() {
            return Err(MatrixError::BadDesignated);
        }
        Ok(Matrix {
            name: name.to_string(),
            values: vals,
            value_index,
            designated: des,
            tables: HashMap::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[Token] {
        &self.values
    }

    pub fn declare_table(&mut self, symbol: &str, arity: usize) {
        let size = self.values.len().pow(arity as u32);
        self.tables.insert(
            Arc::from(symbol),
            MatrixTable {
                arity,
                entries: vec![usize::MAX; size],
            },
        );
    }

    pub fn set_entry(
        &mut self,
        symbol: &str,
        inputs: &[&str],
        output: &str,
    ) -> Result<(), MatrixError> {
        let radix = self.values.len();
        let out = self
            .value_index
            .get(output)
            .copied()
            .ok_or_else(|| MatrixError::UnknownValue(output.to_string()))?;
        let mut digits = Vec::with_capacity(inputs.len());
        for v in inputs {
            digits.push(
                self.value_index
                    .get(*v)
                    .copied()
                    .ok_or_else(|| MatrixError::UnknownValue(v.to_string()))?,
            );
        }
        let table = self
            .tables
            .get_mut(symbol)
            .ok_or_else(|| MatrixError::IncompleteTable {
                symbol: symbol.to_string(),
                inputs: inputs.join(","),
            })?;
        if table.arity != inputs.len() {
            return Err(MatrixError::TableArity {
                symbol: symbol.to_string(),
                expected: table.arity,
                got: inputs.len(),
            });
        }
        let mut idx = 0;
        for &d in digits.iter().rev() {
            idx = idx * radix + d;
        }
        table.entries[idx] = out;
        Ok(())
    }

    /// Verify every declared table is total.
    pub fn validate(&self) -> Result<(), MatrixError> {
        for (sym, table) in &self.tables {
            if let Some(pos) = table.entries.iter().position(|&e| e == usize::MAX) {
                let radix = self.values.len();
                let mut digits = Vec::new();
                let mut rest = pos;
                for _ in 0..table.arity {
                    digits.push(self.values[rest % radix].to_string());
                    rest /= radix;
                }
                return Err(MatrixError::IncompleteTable {
                    symbol: sym.to_string(),
                    inputs: digits.join(","),
                });
            }
        }
        Ok(())
    }

    /// Two-valued Boolean matrix over `&`, `|`, `~`, `>`; designated `{1}`.
    pub fn cpc() -> Matrix {
        let mut m = Matrix::new("cpc", &["0", "1"], &["1"]).unwrap();
        m.declare_table("&", 2);
        m.declare_table("|", 2);
        m.declare_table("~", 1);
        m.declare_table(">", 2);
        for a in 0..2usize {
            for b in 0..2usize {
                let names = ["0", "1"];
                m.set_entry("&", &[names[a], names[b]], names[a & b]).unwrap();
                m.set_entry("|", &[names[a], names[b]], names[a | b]).unwrap();
                m.set_entry(">", &[names[a], names[b]], names[(1 - a) | b]).unwrap();
            }
            m.set_entry("~", &[["0", "1"][a]], ["1", "0"][a]).unwrap();
        }
        m
    }

    /// Three-valued weak Kleene matrix over `&`, `|`, `~`, `>` with the
    /// infectious middle value `e`; designated `{1, e}`.
    pub fn pwk() -> Matrix {
        let mut m = Matrix::new("pwk", &["0", "e", "1"], &["1", "e"]).unwrap();
        m.declare_table("&", 2);
        m.declare_table("|", 2);
        m.declare_table("~", 1);
        m.declare_table(">", 2);
        let names = ["0", "e", "1"];
        let classical = |v: usize| v / 2; // 0 → 0, 1 → 1 on {0,2}
        for a in 0..3usize {
            for b in 0..3usize {
                let (and_v, or_v, imp_v);
                if a == 1 || b == 1 {
                    and_v = 1;
                    or_v = 1;
                    imp_v = 1;
                } else {
                    let (ca, cb) = (classical(a), classical(b));
                    and_v = (ca & cb) * 2;
                    or_v = (ca | cb) * 2;
                    imp_v = ((1 - ca) | cb) * 2;
                }
                m.set_entry("&", &[names[a], names[b]], names[and_v]).unwrap();
                m.set_entry("|", &[names[a], names[b]], names[or_v]).unwrap();
                m.set_entry(">", &[names[a], names[b]], names[imp_v]).unwrap();
            }
            let neg = if a == 1 { 1 } else { 2 - a };
            m.set_entry("~", &[names[a]], names[neg]).unwrap();
        }
        m
    }

    fn eval(
        &self,
        f: &Formula,
        assignment: &HashMap<Token, usize>,
    ) -> Result<usize, StructureError> {
        match f {
            Formula::Var(v) => Ok(*assignment.get(v).expect("variable swept")),
            Formula::Meta(_) => Err(StructureError::OutOfUniverse {
                formula: f.to_string(),
            }),
            Formula::App(sym, args) => {
                let table =
                    self.tables
                        .get(sym)
                        .ok_or_else(|| StructureError::MissingTable {
                            connective: sym.to_string(),
                        })?;
                let radix = self.values.len();
                let mut idx = 0;
                for a in args.iter().rev() {
                    idx = idx * radix + self.eval(a, assignment)?;
                }
                Ok(table.entries[idx])
            }
        }
    }

    fn check_tables(&self, f: &Formula) -> Result<(), StructureError> {
        if let Formula::App(sym, args) = f {
            if !self.tables.contains_key(sym) {
                return Err(StructureError::MissingTable {
                    connective: sym.to_string(),
                });
            }
            for a in args.iter() {
                self.check_tables(a)?;
            }
        }
        Ok(())
    }
}

impl LogicalStructure for Matrix {
    /// Local matrix consequence: exhaustive sweep over all valuations of the
    /// variables occurring in the query. `Proved` iff every valuation
    /// designating all premises designates the conclusion; otherwise
    /// `Refuted` with the first witness valuation. Never `Exhausted`.
    fn entails(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        _budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        for f in premises {
            self.check_tables(f)?;
        }
        self.check_tables(conclusion)?;

        let vars: Vec<Token> = vars_set(premises.iter().chain([conclusion]))
            .into_iter()
            .collect();
        let radix = self.values.len();
        let mut digits = vec![0usize; vars.len()];
        let mut checked = 0usize;
        loop {
            let assignment: HashMap<Token, usize> = vars
                .iter()
                .cloned()
                .zip(digits.iter().copied())
                .collect();
            checked += 1;
            let mut all_designated = true;
            for p in premises {
                if !self.designated.contains(&self.eval(p, &assignment)?) {
                    all_designated = false;
                    break;
                }
            }
            if all_designated {
                let v = self.eval(conclusion, &assignment)?;
                if !self.designated.contains(&v) {
                    let witness = Valuation {
                        assignment: vars
                            .iter()
                            .cloned()
                            .zip(digits.iter().map(|&d| self.values[d].clone()))
                            .collect(),
                    };
                    return Ok(Verdict::Refuted(Refutation {
                        scope: RefutationScope::Full,
                        witness: Some(witness),
                    }));
                }
            }
            if !bump_digits(&mut digits, radix) {
                break;
            }
        }
        Ok(Verdict::Proved(Certificate::TruthTable {
            valuations_checked: checked,
        }))
    }

    fn is_monotonic(&self) -> Trilean {
        Trilean::Yes
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

fn bump_digits(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TarskiReport {
    pub reflexive: bool,
    pub monotonic: bool,
    pub transitive: bool,
    pub finitary: bool,
}

/// Decide reflexivity, monotonicity, and transitivity (cut) of an extensional
/// table by exhaustive sweep over the subset lattice of its universe.
///
/// Transitivity here is: whenever Γ entails every member of Δ and Δ entails β,
/// Γ entails β. Finitarity is trivially true on finite tables and reported as
/// such.
pub fn check_tarski(
    structure: &ExtensionalStructure,
    cap: usize,
) -> Result<TarskiReport, StructureError> {
    let n = structure.universe().len();
    if n > cap || n > 20 {
        return Err(StructureError::UniverseTooLarge {
            size: n,
            cap: cap.min(20),
        });
    }
    let subsets = 1usize << n;
    let mut consequences = vec![0u32; subsets];
    for (delta, alpha) in structure.index_pairs() {
        let mut mask = 0usize;
        for &i in delta {
            mask |= 1 << i;
        }
        consequences[mask] |= 1 << alpha;
    }

    let mut reflexive = true;
    for mask in 0..subsets {
        if consequences[mask] & (mask as u32) != mask as u32 {
            reflexive = false;
            break;
        }
    }

    let mut monotonic = true;
    'mono: for mask in 0..subsets {
        for j in 0..n {
            if mask & (1 << j) == 0
                && consequences[mask] & !consequences[mask | (1 << j)] != 0
            {
                monotonic = false;
                break 'mono;
            }
        }
    }

    let mut transitive = true;
    'trans: for gamma in 0..subsets {
        let closed = consequences[gamma];
        for delta in 0..subsets {
            if (delta as u32) & !closed == 0 && consequences[delta] & !closed != 0 {
                transitive = false;
                break 'trans;
            }
        }
    }

    Ok(TarskiReport {
        reflexive,
        monotonic,
        transitive,
        finitary: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn sig() -> Signature {
        Signature::new([("&", 2), ("|", 2), ("~", 1), (">", 2)]).unwrap()
    }

    fn fs(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| parse(t, &sig()).unwrap()).collect()
    }

    fn f(text: &str) -> Formula {
        parse(text, &sig()).unwrap()
    }

    // Hand-rolled classical evaluation, independent of Matrix::eval.
    fn cpc_eval(formula: &Formula, val: &BTreeMap<&str, bool>) -> bool {
        match formula {
            Formula::Var(v) => val[v.as_ref()],
            Formula::Meta(_) => unreachable!(),
            Formula::App(sym, args) => match sym.as_ref() {
                "&" => cpc_eval(&args[0], val) && cpc_eval(&args[1], val),
                "|" => cpc_eval(&args[0], val) || cpc_eval(&args[1], val),
                ">" => !cpc_eval(&args[0], val) || cpc_eval(&args[1], val),
                "~" => !cpc_eval(&args[0], val),
                _ => unreachable!(),
            },
        }
    }

    // Hand-rolled weak Kleene evaluation with infectious None.
    fn pwk_eval(formula: &Formula, val: &BTreeMap<&str, Option<bool>>) -> Option<bool> {
        match formula {
            Formula::Var(v) => val[v.as_ref()],
            Formula::Meta(_) => unreachable!(),
            Formula::App(sym, args) => {
                let xs: Vec<Option<bool>> =
                    args.iter().map(|a| pwk_eval(a, val)).collect();
                if xs.iter().any(Option::is_none) {
                    return None;
                }
                let b: Vec<bool> = xs.into_iter().map(Option::unwrap).collect();
                Some(match sym.as_ref() {
                    "&" => b[0] && b[1],
                    "|" => b[0] || b[1],
                    ">" => !b[0] || b[1],
                    "~" => !b[0],
                    _ => unreachable!(),
                })
            }
        }
    }

    #[test]
    fn cpc_modus_ponens_proved() {
        // oracle: enumerate the 4 classical valuations first
        let prem = [f("p"), f("(p > q)")];
        let goal = f("q");
        for p in [false, true] {
            for q in [false, true] {
                let val = BTreeMap::from([("p", p), ("q", q)]);
                if prem.iter().all(|x| cpc_eval(x, &val)) {
                    assert!(cpc_eval(&goal, &val));
                }
            }
        }
        let m = Matrix::cpc();
        let v = m
            .entails(&fs(&["p", "(p > q)"]), &goal, &Budget::default())
            .unwrap();
        assert!(v.is_proved());
    }

    #[test]
    fn pwk_explosion_refuted_with_witness() {
        // oracle: sweep the 9 weak Kleene valuations; the only valuations
        // designating both p and ~p set p to the middle value, and q=0
        // refutes
        let mut witnesses = Vec::new();
        for p in [Some(false), None, Some(true)] {
            for q in [Some(false), None, Some(true)] {
                let val = BTreeMap::from([("p", p), ("q", q)]);
                let designated = |x: Option<bool>| x != Some(false);
                if designated(pwk_eval(&f("p"), &val))
                    && designated(pwk_eval(&f("~p"), &val))
                    && !designated(pwk_eval(&f("q"), &val))
                {
                    witnesses.push((p, q));
                }
            }
        }
        assert_eq!(witnesses, vec![(None, Some(false))]);

        let m = Matrix::pwk();
        let v = m
            .entails(&fs(&["p", "~p"]), &f("q"), &Budget::default())
            .unwrap();
        match v {
            Verdict::Refuted(r) => {
                assert_eq!(r.scope, RefutationScope::Full);
                assert_eq!(r.witness.unwrap().to_string(), "p=e, q=0");
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn pwk_reflexive() {
        let m = Matrix::pwk();
        let v = m.entails(&fs(&["p"]), &f("p"), &Budget::default()).unwrap();
        assert!(v.is_proved());
    }

    #[test]
    fn matrix_missing_table() {
        let mut m = Matrix::new("partial", &["0", "1"], &["1"]).unwrap();
        m.declare_table("&", 2);
        m.set_entry("&", &["0", "0"], "0").unwrap();
        m.set_entry("&", &["0", "1"], "0").unwrap();
        m.set_entry("&", &["1", "0"], "0").unwrap();
        m.set_entry("&", &["1", "1"], "1").unwrap();
        let err = m
            .entails(&fs(&["(p | q)"]), &f("p"), &Budget::default())
            .unwrap_err();
        assert_eq!(
            err,
            StructureError::MissingTable {
                connective: "|".to_string()
            }
        );
    }

    #[test]
    fn matrix_agrees_with_hand_oracle() {
        let m = Matrix::cpc();
        let cases = ["(p & (q | ~p))", "((p > q) > (~q > ~p))", "~(p & ~p)"];
        for c in cases {
            let formula = f(c);
            let v = m
                .entails(&FormulaSet::new(), &formula, &Budget::default())
                .unwrap();
            let mut tautology = true;
            for p in [false, true] {
                for q in [false, true] {
                    let val = BTreeMap::from([("p", p), ("q", q)]);
                    tautology &= cpc_eval(&formula, &val);
                }
            }
            assert_eq!(v.is_proved(), tautology, "mismatch on {c}");
        }
    }

    fn universe_pq() -> Universe {
        Universe::from_formulas([f("p"), f("q")])
    }

    #[test]
    fn ext_entails_listed() {
        let u = universe_pq();
        let s = ExtensionalStructure::new(u, [(fs(&["p"]), f("p"))]).unwrap();
        assert!(s
            .entails(&fs(&["p"]), &f("p"), &Budget::default())
            .unwrap()
            .is_proved());
        assert!(s
            .entails(&fs(&["p"]), &f("q"), &Budget::default())
            .unwrap()
            .is_refuted());
    }

    #[test]
    fn ext_entails_out_of_universe() {
        let u = universe_pq();
        let s = ExtensionalStructure::new(u, [(fs(&["p"]), f("p"))]).unwrap();
        let err = s
            .entails(&fs(&["r"]), &f("p"), &Budget::default())
            .unwrap_err();
        assert_eq!(
            err,
            StructureError::OutOfUniverse {
                formula: "r".to_string()
            }
        );
    }

    #[test]
    fn tarski_full_relation() {
        let u = universe_pq();
        let mut pairs = Vec::new();
        for delta in u.subsets_up_to(2) {
            for a in u.iter() {
                pairs.push((u.formula_set(&delta), a.clone()));
            }
        }
        let s = ExtensionalStructure::new(u, pairs).unwrap();
        let r = check_tarski(&s, 12).unwrap();
        assert!(r.reflexive && r.monotonic && r.transitive && r.finitary);
    }

    #[test]
    fn tarski_empty_relation() {
        let s = ExtensionalStructure::new(universe_pq(), []).unwrap();
        let r = check_tarski(&s, 12).unwrap();
        assert!(!r.reflexive);
        assert!(r.monotonic);
        assert!(r.transitive);
    }

    #[test]
    fn tarski_monotone_not_reflexive() {
        let u = universe_pq();
        let s = ExtensionalStructure::new(
            u,
            [(fs(&["p"]), f("p")), (fs(&["p", "q"]), f("p"))],
        )
        .unwrap();
        let r = check_tarski(&s, 12).unwrap();
        assert!(r.monotonic);
        assert!(!r.reflexive); // ({q},q) missing
    }

    #[test]
    fn tarski_universe_cap() {
        let formulas: Vec<Formula> = (0..13).map(|i| Formula::var(&format!("v{i}"))).collect();
        let s = ExtensionalStructure::new(Universe::from_formulas(formulas), []).unwrap();
        assert!(matches!(
            check_tarski(&s, 12),
            Err(StructureError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn verify_monotonic_within_cap() {
        let u = universe_pq();
        let s = ExtensionalStructure::new(
            u.clone(),
            [(fs(&["p"]), f("p")), (fs(&["p", "q"]), f("p"))],
        )
        .unwrap();
        assert!(s.verify_monotonic_within(2));
        let t = ExtensionalStructure::new(u, [(fs(&["p"]), f("p"))]).unwrap();
        assert!(!t.verify_monotonic_within(2));
    }
}
