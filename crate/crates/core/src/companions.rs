//! Relational companions: the ρ-companion and pure ρ-companion of any
//! logical structure, the concrete inclusion relations, relation
//! combinators, and exhaustive relation classifiers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::structures::{
    Budget, BudgetReport, Certificate, LogicalStructure, Matrix, Refutation, RefutationScope,
    StructureError, Trilean, Verdict,
};
use crate::syntax::{vars_set, Formula, FormulaSet, Substitution};
use crate::universe::Universe;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompanionError {
    #[error("universe of {size} formulas exceeds the subset-sweep cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("nontriviality indeterminate: some probes exhausted the budget and none refuted")]
    IndeterminateNontriviality,
    #[error("nontriviality check requires at least one probe")]
    NoProbes,
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Declared properties of a relation. `Yes`/`No` flags are promises that
/// must agree with exhaustive checks on finite universes; `Unknown` makes
/// no claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationFlags {
    pub downward_directed: Trilean,
    pub contains_empty: Trilean,
    pub finite_reach: Trilean,
}

impl RelationFlags {
    pub fn unknown() -> RelationFlags {
        RelationFlags {
            downward_directed: Trilean::Unknown,
            contains_empty: Trilean::Unknown,
            finite_reach: Trilean::Unknown,
        }
    }
}

type MembershipFn = dyn Fn(&FormulaSet, &Formula) -> bool + Send + Sync;

/// A relation ρ ⊆ P(L)×L given by a total, deterministic membership test.
#[derive(Clone)]
pub struct Relation {
    name: String,
    flags: RelationFlags,
    /// Membership of (Δ,α) is equivalent to membership of ({γ},α) for every
    /// γ∈Δ. Together with a monotonic base this licenses the single-query
    /// sweep shortcut; downward-directedness alone does not.
    singleton_determined: bool,
    /// Membership may under-approximate because it consults budgeted base
    /// queries.
    conservative: bool,
    test: Arc<MembershipFn>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("name", &self.name)
            .field("flags", &self.flags)
            .finish()
    }
}

impl Relation {
    pub fn new<F>(name: &str, flags: RelationFlags, test: F) -> Relation
    where
        F: Fn(&FormulaSet, &Formula) -> bool + Send + Sync + 'static,
    {
        Relation {
            name: name.to_string(),
            flags,
            singleton_determined: false,
            conservative: false,
            test: Arc::new(test),
        }
    }

    pub fn holds(&self, delta: &FormulaSet, alpha: &Formula) -> bool {
        (self.test)(delta, alpha)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> RelationFlags {
        self.flags
    }

    pub fn is_singleton_determined(&self) -> bool {
        self.singleton_determined
    }

    pub fn is_conservative(&self) -> bool {
        self.conservative
    }

    /// Left variable inclusion: (Δ,α) ∈ L iff var(Δ) ⊆ var(α).
    pub fn left() -> Relation {
        let mut r = Relation::new(
            "L",
            RelationFlags {
                downward_directed: Trilean::Yes,
                contains_empty: Trilean::Yes,
                finite_reach: Trilean::No,
            },
            rel_l,
        );
        r.singleton_determined = true;
        r
    }

    /// Right variable inclusion without the antitheorem escape:
    /// (Δ,α) ∈ PR iff var(α) ⊆ var(Δ).
    pub fn pure_right() -> Relation {
        Relation::new(
            "PR",
            RelationFlags {
                downward_directed: Trilean::No,
                contains_empty: Trilean::No,
                finite_reach: Trilean::No,
            },
            rel_pr,
        )
    }

    /// Right variable inclusion: (Δ,α) ∈ R iff Δ is confirmed an
    /// antitheorem or var(α) ⊆ var(Δ).
    pub fn right(anti: AntitheoremOracle) -> Relation {
        Relation::new(
            &format!("R({})", anti.describe()),
            RelationFlags {
                downward_directed: Trilean::No,
                contains_empty: Trilean::Unknown,
                finite_reach: Trilean::No,
            },
            move |delta, alpha| rel_r(delta, alpha, &anti),
        )
    }

    /// Paraconsistentization relation: (Δ,α) ∈ ℙ iff Δ is nontrivial in the
    /// base, probed over a finite set. Membership is conservative: an
    /// indeterminate probe sweep counts as trivial.
    pub fn nontrivial(
        base: Arc<dyn LogicalStructure>,
        probes: Vec<Formula>,
        budget: Budget,
    ) -> Relation {
        let dd = match base.is_monotonic() {
            // removing premises cannot create consequences in a monotonic
            // base, so nontriviality is downward closed
            Trilean::Yes => Trilean::Yes,
            _ => Trilean::Unknown,
        };
        let mut r = Relation::new(
            &format!("P({})", base.name()),
            RelationFlags {
                downward_directed: dd,
                contains_empty: Trilean::Unknown,
                finite_reach: Trilean::Unknown,
            },
            move |delta, _alpha| {
                matches!(nontriviality(&base, delta, &probes, &budget), Ok(true))
            },
        );
        r.conservative = true;
        r
    }

    /// Any structure read as a relation: (Δ,α) holds iff the structure
    /// proves Δ ⊢ α under the budget. Exhausted queries count as
    /// non-membership, so membership is conservative.
    pub fn from_structure(structure: Arc<dyn LogicalStructure>, budget: Budget) -> Relation {
        let mut r = Relation::new(
            &format!("struct({})", structure.name()),
            RelationFlags::unknown(),
            move |delta, alpha| {
                matches!(structure.entails(delta, alpha, &budget), Ok(v) if v.is_proved())
            },
        );
        r.conservative = true;
        r
    }

    /// Finite extensional relation: membership by table lookup.
    pub fn extensional(name: &str, table: std::collections::BTreeSet<(FormulaSet, Formula)>) -> Relation {
        Relation::new(
            name,
            RelationFlags {
                downward_directed: Trilean::Unknown,
                contains_empty: Trilean::Unknown,
                finite_reach: Trilean::Yes,
            },
            move |delta, alpha| table.contains(&(delta.clone(), alpha.clone())),
        )
    }

    pub fn with_flags(mut self, flags: RelationFlags) -> Relation {
        self.flags = flags;
        self
    }

    pub fn total() -> Relation {
        let mut r = Relation::new(
            "total",
            RelationFlags {
                downward_directed: Trilean::Yes,
                contains_empty: Trilean::Yes,
                finite_reach: Trilean::No,
            },
            |_, _| true,
        );
        r.singleton_determined = true;
        r
    }

    pub fn empty() -> Relation {
        Relation::new(
            "empty",
            RelationFlags {
                downward_directed: Trilean::Yes,
                contains_empty: Trilean::No,
                finite_reach: Trilean::Yes,
            },
            |_, _| false,
        )
    }

    /// Pointwise union ρ∪σ.
    pub fn union(&self, other: &Relation) -> Relation {
        let a = self.clone();
        let b = other.clone();
        let both = |x: Trilean, y: Trilean| if x.is_yes() && y.is_yes() {
            Trilean::Yes
        } else {
            Trilean::Unknown
        };
        let mut r = Relation::new(
            &format!("union({},{})", self.name, other.name),
            RelationFlags {
                downward_directed: both(a.flags.downward_directed, b.flags.downward_directed),
                contains_empty: if a.flags.contains_empty.is_yes() || b.flags.contains_empty.is_yes()
                {
                    Trilean::Yes
                } else {
                    Trilean::Unknown
                },
                finite_reach: both(a.flags.finite_reach, b.flags.finite_reach),
            },
            move |delta, alpha| a.holds(delta, alpha) || b.holds(delta, alpha),
        );
        r.conservative = self.conservative || other.conservative;
        r
    }

    /// Pointwise intersection ρ∩σ.
    pub fn intersect(&self, other: &Relation) -> Relation {
        let a = self.clone();
        let b = other.clone();
        let sd = self.singleton_determined && other.singleton_determined;
        let mut r = Relation::new(
            &format!("intersect({},{})", self.name, other.name),
            RelationFlags {
                downward_directed: if a.flags.downward_directed.is_yes()
                    && b.flags.downward_directed.is_yes()
                {
                    Trilean::Yes
                } else {
                    Trilean::Unknown
                },
                contains_empty: if a.flags.contains_empty.is_yes()
                    && b.flags.contains_empty.is_yes()
                {
                    Trilean::Yes
                } else {
                    Trilean::Unknown
                },
                finite_reach: if a.flags.finite_reach.is_yes() || b.flags.finite_reach.is_yes() {
                    Trilean::Yes
                } else {
                    Trilean::Unknown
                },
            },
            move |delta, alpha| a.holds(delta, alpha) && b.holds(delta, alpha),
        );
        r.singleton_determined = sd;
        r.conservative = self.conservative || other.conservative;
        r
    }
}

/// var(Δ) ⊆ var(α).
pub fn rel_l(delta: &FormulaSet, alpha: &Formula) -> bool {
    vars_set(delta).is_subset(&alpha.vars())
}

/// var(α) ⊆ var(Δ).
pub fn rel_pr(delta: &FormulaSet, alpha: &Formula) -> bool {
    alpha.vars().is_subset(&vars_set(delta))
}

/// Δ is a confirmed antitheorem, or var(α) ⊆ var(Δ).
pub fn rel_r(delta: &FormulaSet, alpha: &Formula, anti: &AntitheoremOracle) -> bool {
    anti.check(delta) == Trilean::Yes || rel_pr(delta, alpha)
}

/// Decides (or declines to decide) whether a premise set is an antitheorem:
/// a set whose every substitution instance entails every formula.
#[derive(Clone)]
pub enum AntitheoremOracle {
    /// Confirms nothing.
    Never,
    /// A user-supplied certificate list; exact matches are confirmed.
    Declared(std::collections::BTreeSet<FormulaSet>),
    /// For matrix consequence: Δ unsatisfiable in the matrix is an
    /// antitheorem (a designating valuation of any substitution instance
    /// would induce one of Δ itself), and a satisfiable Δ never is (extend
    /// the valuation with an undesignated fresh variable).
    MatrixUnsat(Matrix),
    /// Explosion probed under finitely many substitutions. Can refute
    /// antitheorem-hood with a witness but never asserts it from the sample
    /// alone.
    Bounded {
        base: Arc<dyn LogicalStructure>,
        substitutions: Vec<Substitution>,
        probes: Vec<Formula>,
        budget: Budget,
    },
}

impl AntitheoremOracle {
    pub fn check(&self, delta: &FormulaSet) -> Trilean {
        match self {
            AntitheoremOracle::Never => Trilean::No,
            AntitheoremOracle::Declared(list) => {
                if list.contains(delta) {
                    Trilean::Yes
                } else {
                    Trilean::Unknown
                }
            }
            AntitheoremOracle::MatrixUnsat(matrix) => {
                let fresh = fresh_variable(delta);
                match matrix.entails(delta, &fresh, &Budget::default()) {
                    Ok(v) if v.is_proved() => Trilean::Yes,
                    Ok(_) => Trilean::No,
                    Err(_) => Trilean::Unknown,
                }
            }
            AntitheoremOracle::Bounded {
                base,
                substitutions,
                probes,
                budget,
            } => {
                let identity = Substitution::new();
                for sub in std::iter::once(&identity).chain(substitutions.iter()) {
                    let image: FormulaSet = delta.iter().map(|f| sub.apply(f)).collect();
                    for probe in probes {
                        if let Ok(v) = base.entails(&image, probe, budget) {
                            if v.is_refuted() {
                                return Trilean::No;
                            }
                        }
                    }
                }
                Trilean::Unknown
            }
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            AntitheoremOracle::Never => "never",
            AntitheoremOracle::Declared(_) => "declared",
            AntitheoremOracle::MatrixUnsat(_) => "matrix",
            AntitheoremOracle::Bounded { .. } => "bounded",
        }
    }
}

fn fresh_variable(delta: &FormulaSet) -> Formula {
    let used = vars_set(delta);
    let mut name = "z".to_string();
    while used.contains(name.as_str()) {
        name.push('z');
    }
    Formula::var(&name)
}

/// Δ is nontrivial in `base` iff some probe is refuted from Δ.
/// Indeterminate when no probe refutes but some exhaust the budget.
pub fn nontriviality(
    base: &dyn LogicalStructure,
    delta: &FormulaSet,
    probes: &[Formula],
    budget: &Budget,
) -> Result<bool, CompanionError> {
    if probes.is_empty() {
        return Err(CompanionError::NoProbes);
    }
    let mut exhausted = false;
    for probe in probes {
        match base.entails(delta, probe, budget)? {
            Verdict::Refuted(_) => return Ok(true),
            Verdict::Exhausted(_) => exhausted = true,
            Verdict::Proved(_) => {}
        }
    }
    if exhausted {
        Err(CompanionError::IndeterminateNontriviality)
    } else {
        Ok(false)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompanionLimits {
    pub max_premises: usize,
}

impl Default for CompanionLimits {
    fn default() -> CompanionLimits {
        CompanionLimits { max_premises: 12 }
    }
}

/// The ρ-companion S^ρ of a base structure: Γ ⊢^ρ α iff some Δ ⊆ Γ has
/// (Δ,α) ∈ ρ and Δ ⊢ α in the base. The pure variant additionally requires
/// Δ ≠ ∅.
pub struct CompanionStructure {
    base: Arc<dyn LogicalStructure>,
    rho: Relation,
    pure: bool,
    limits: CompanionLimits,
}

impl CompanionStructure {
    pub fn new(base: Arc<dyn LogicalStructure>, rho: Relation, pure: bool) -> CompanionStructure {
        CompanionStructure {
            base,
            rho,
            pure,
            limits: CompanionLimits::default(),
        }
    }

    pub fn with_limits(mut self, limits: CompanionLimits) -> CompanionStructure {
        self.limits = limits;
        self
    }

    pub fn base(&self) -> &Arc<dyn LogicalStructure> {
        &self.base
    }

    pub fn rho(&self) -> &Relation {
        &self.rho
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    fn shortcut_applies(&self) -> bool {
        self.rho.singleton_determined && self.base.is_monotonic().is_yes()
    }

    fn entail_shortcut(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        // the single maximal candidate: every γ whose singleton is ρ-related
        let delta_star: FormulaSet = premises
            .iter()
            .filter(|gamma| {
                let singleton: FormulaSet = [(*gamma).clone()].into_iter().collect();
                self.rho.holds(&singleton, conclusion)
            })
            .cloned()
            .collect();
        if self.pure && delta_star.is_empty() {
            return Ok(Verdict::refuted_full());
        }
        match self.base.entails(&delta_star, conclusion, budget)? {
            Verdict::Proved(cert) => Ok(Verdict::Proved(Certificate::Witness {
                delta: delta_star,
                base: Box::new(cert),
            })),
            other => Ok(other),
        }
    }

    fn entail_sweep(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        let elements: Vec<&Formula> = premises.iter().collect();
        let min_size = usize::from(self.pure);
        let mut saw_exhausted: Option<BudgetReport> = None;
        let mut scope = RefutationScope::Full;
        for size in min_size..=elements.len() {
            for combo in elements.iter().combinations(size) {
                let delta: FormulaSet = combo.into_iter().map(|f| (**f).clone()).collect();
                if !self.rho.holds(&delta, conclusion) {
                    continue;
                }
                match self.base.entails(&delta, conclusion, budget)? {
                    Verdict::Proved(cert) => {
                        return Ok(Verdict::Proved(Certificate::Witness {
                            delta,
                            base: Box::new(cert),
                        }));
                    }
                    Verdict::Exhausted(report) => saw_exhausted = Some(report),
                    Verdict::Refuted(r) => {
                        if r.scope == RefutationScope::WithinUniverse {
                            scope = RefutationScope::WithinUniverse;
                        }
                    }
                }
            }
        }
        // Proved beats Exhausted beats Refuted
        if let Some(report) = saw_exhausted {
            Ok(Verdict::Exhausted(report))
        } else {
            Ok(Verdict::Refuted(Refutation {
                scope,
                witness: None,
            }))
        }
    }
}

impl LogicalStructure for CompanionStructure {
    fn entails(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        if premises.len() > self.limits.max_premises {
            return Err(StructureError::PremiseSetTooLarge {
                size: premises.len(),
                limit: self.limits.max_premises,
            });
        }
        if self.shortcut_applies() {
            self.entail_shortcut(premises, conclusion, budget)
        } else {
            self.entail_sweep(premises, conclusion, budget)
        }
    }

    /// Companions of arbitrary structures are monotonic.
    fn is_monotonic(&self) -> Trilean {
        Trilean::Yes
    }

    fn name(&self) -> String {
        let op = if self.pure { "p" } else { "" };
        format!("{}^{}{}", self.base.name(), op, self.rho.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyReport {
    pub downward_directed: bool,
    pub contains_empty: bool,
    /// reach size → number of premise subsets with that reach
    pub reach_sizes: BTreeMap<usize, usize>,
    pub max_reach: usize,
}

/// Exhaustively classify a relation over the full subset lattice of a
/// finite universe.
pub fn classify(
    rho: &Relation,
    universe: &Universe,
    cap: usize,
) -> Result<ClassifyReport, CompanionError> {
    let n = universe.len();
    if n > cap || n > 20 {
        return Err(CompanionError::UniverseTooLarge {
            size: n,
            cap: cap.min(20),
        });
    }
    let mut downward_directed = true;
    let mut reach_sizes = BTreeMap::new();
    let mut max_reach = 0;
    for mask in 0..(1usize << n) {
        let delta: FormulaSet = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| universe.formula(i).clone())
            .collect();
        let mut reach = 0;
        for alpha in universe.iter() {
            if rho.holds(&delta, alpha) {
                reach += 1;
                // a violation along any chain shows first at a one-element
                // removal, so checking those suffices
                if downward_directed {
                    for gamma in &delta {
                        let mut smaller = delta.clone();
                        smaller.remove(gamma);
                        if !rho.holds(&smaller, alpha) {
                            downward_directed = false;
                            break;
                        }
                    }
                }
            }
        }
        *reach_sizes.entry(reach).or_insert(0) += 1;
        max_reach = max_reach.max(reach);
    }
    let contains_empty = universe
        .iter()
        .all(|alpha| rho.holds(&FormulaSet::new(), alpha));
    Ok(ClassifyReport {
        downward_directed,
        contains_empty,
        reach_sizes,
        max_reach,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::ExtensionalStructure;
    use crate::syntax::{parse, Signature};

    fn sig() -> Signature {
        Signature::new([("&", 2), ("|", 2), ("~", 1), (">", 2)]).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse(text, &sig()).unwrap()
    }

    fn fs(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| f(t)).collect()
    }

    #[test]
    fn rel_l_examples() {
        assert!(rel_l(&fs(&["(p & q)"]), &f("(p | q)")));
        assert!(!rel_l(&fs(&["r"]), &f("p")));
        assert!(rel_l(&FormulaSet::new(), &f("(p > q)")));
    }

    #[test]
    fn rel_pr_examples() {
        assert!(rel_pr(&fs(&["p", "q"]), &f("(p & q)")));
        assert!(!rel_pr(&fs(&["p"]), &f("(p & q)")));
        let t = Signature::new([("T", 0)]).unwrap();
        let c = parse("T", &t).unwrap();
        assert!(rel_pr(&fs(&["p"]), &c));
    }

    #[test]
    fn rel_r_examples() {
        let declared =
            AntitheoremOracle::Declared([fs(&["p", "~p"])].into_iter().collect());
        assert!(rel_r(&fs(&["p", "~p"]), &f("q"), &declared));
        let never = AntitheoremOracle::Never;
        assert!(rel_r(&fs(&["p", "q"]), &f("(p | q)"), &never));
        assert!(!rel_r(&fs(&["p"]), &f("q"), &never));
    }

    #[test]
    fn matrix_antitheorem_oracle() {
        let oracle = AntitheoremOracle::MatrixUnsat(Matrix::cpc());
        assert_eq!(oracle.check(&fs(&["p", "~p"])), Trilean::Yes);
        assert_eq!(oracle.check(&fs(&["p"])), Trilean::No);
        assert_eq!(oracle.check(&FormulaSet::new()), Trilean::No);
    }

    #[test]
    fn bounded_oracle_never_confirms() {
        let base: Arc<dyn LogicalStructure> = Arc::new(Matrix::cpc());
        let oracle = AntitheoremOracle::Bounded {
            base,
            substitutions: vec![Substitution::from_pairs([("p", f("(p & ~p)"))])],
            probes: vec![f("q")],
            budget: Budget::default(),
        };
        assert_eq!(oracle.check(&fs(&["p"])), Trilean::No);
        assert_eq!(oracle.check(&fs(&["p", "~p"])), Trilean::Unknown);
    }

    #[test]
    fn nontriviality_examples() {
        let m = Matrix::cpc();
        let q = [f("q")];
        assert_eq!(
            nontriviality(&m, &fs(&["p", "~p"]), &q, &Budget::default()).unwrap(),
            false
        );
        assert_eq!(
            nontriviality(&m, &fs(&["p"]), &q, &Budget::default()).unwrap(),
            true
        );
        assert_eq!(
            nontriviality(&m, &FormulaSet::new(), &q, &Budget::default()).unwrap(),
            true
        );
        assert_eq!(
            nontriviality(&m, &fs(&["p"]), &[], &Budget::default()),
            Err(CompanionError::NoProbes)
        );
    }

    #[test]
    fn companion_cpc_left_refutes_detached_goal() {
        let c = CompanionStructure::new(Arc::new(Matrix::cpc()), Relation::left(), false);
        let v = c
            .entails(&fs(&["p", "(p > q)"]), &f("q"), &Budget::default())
            .unwrap();
        assert!(v.is_refuted());
    }

    #[test]
    fn companion_cpc_left_proves_conjunction() {
        let c = CompanionStructure::new(Arc::new(Matrix::cpc()), Relation::left(), false);
        let v = c
            .entails(&fs(&["p", "q"]), &f("(p & q)"), &Budget::default())
            .unwrap();
        match v {
            Verdict::Proved(Certificate::Witness { delta, .. }) => {
                assert_eq!(delta, fs(&["p", "q"]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pure_companion_blocks_empty_witness() {
        let u = Universe::from_formulas([f("t")]);
        let base = ExtensionalStructure::new(u, [(FormulaSet::new(), f("t"))]).unwrap();
        let base: Arc<dyn LogicalStructure> = Arc::new(base);
        let pure = CompanionStructure::new(base.clone(), Relation::total(), true);
        assert!(pure
            .entails(&FormulaSet::new(), &f("t"), &Budget::default())
            .unwrap()
            .is_refuted());
        let plain = CompanionStructure::new(base, Relation::total(), false);
        assert!(plain
            .entails(&FormulaSet::new(), &f("t"), &Budget::default())
            .unwrap()
            .is_proved());
    }

    #[test]
    fn premise_cap_enforced() {
        let c = CompanionStructure::new(Arc::new(Matrix::cpc()), Relation::left(), false)
            .with_limits(CompanionLimits { max_premises: 1 });
        let err = c
            .entails(&fs(&["p", "q"]), &f("p"), &Budget::default())
            .unwrap_err();
        assert_eq!(
            err,
            StructureError::PremiseSetTooLarge { size: 2, limit: 1 }
        );
    }

    #[test]
    fn classify_left_is_downward_directed() {
        let u = Universe::from_formulas([f("p"), f("q"), f("(p & q)")]);
        let report = classify(&Relation::left(), &u, 12).unwrap();
        assert!(report.downward_directed);
        assert!(report.contains_empty);
    }

    #[test]
    fn classify_pure_right_not_downward_directed() {
        let u = Universe::from_formulas([f("p"), f("q"), f("(p & q)")]);
        // ({p,q}, p∧q) ∈ PR but ({p}, p∧q) ∉ PR
        assert!(rel_pr(&fs(&["p", "q"]), &f("(p & q)")));
        assert!(!rel_pr(&fs(&["p"]), &f("(p & q)")));
        let report = classify(&Relation::pure_right(), &u, 12).unwrap();
        assert!(!report.downward_directed);
    }

    #[test]
    fn classify_empty_relation_vacuously_dd() {
        let u = Universe::from_formulas([f("p"), f("q")]);
        let report = classify(&Relation::empty(), &u, 12).unwrap();
        assert!(report.downward_directed);
        assert!(!report.contains_empty);
        assert_eq!(report.max_reach, 0);
    }

    #[test]
    fn classify_universe_cap() {
        let formulas: Vec<Formula> = (0..13).map(|i| Formula::var(&format!("v{i}"))).collect();
        let u = Universe::from_formulas(formulas);
        assert!(matches!(
            classify(&Relation::left(), &u, 12),
            Err(CompanionError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn combinator_examples() {
        let l = Relation::left();
        let pr = Relation::pure_right();
        let union = l.union(&pr);
        assert!(union.holds(&fs(&["p"]), &f("p")));
        let inter = l.intersect(&pr);
        assert!(!inter.holds(&fs(&["p"]), &f("(p | q)")));
        // same-variables membership
        assert!(inter.holds(&fs(&["(p & q)"]), &f("(p | q)")));
    }

    #[test]
    fn from_structure_relation() {
        let u = Universe::from_formulas([f("p"), f("q")]);
        let t = ExtensionalStructure::new(u, [(fs(&["p"]), f("q"))]).unwrap();
        let rel = Relation::from_structure(Arc::new(t), Budget::default());
        assert!(rel.holds(&fs(&["p"]), &f("q")));
        assert!(!rel.holds(&fs(&["q"]), &f("p")));
        assert!(rel.is_conservative());
    }

    #[test]
    fn from_structure_with_zero_budget_is_false() {
        use crate::hilbert::{HilbertBackend, HilbertStructure, RuleSchema};
        use crate::syntax::parse_pattern;
        let h = HilbertStructure::new(
            "s",
            sig(),
            vec![RuleSchema::new(
                "r2",
                vec![parse_pattern("?A", &sig()).unwrap()],
                parse_pattern("(?A | ?B)", &sig()).unwrap(),
            )],
        );
        let u = Universe::from_formulas([f("p"), f("q"), f("(p | q)")]);
        let backend = HilbertBackend::new(h, u);
        let rel = Relation::from_structure(Arc::new(backend), Budget::with_steps(0));
        assert!(!rel.holds(&fs(&["p"]), &f("(p | q)")));
    }

    /// Downward-directedness alone does not license the single-candidate
    /// shortcut: the downward closure of {({a,b},c)} ∪ {({a},c)} … here, a
    /// relation holding only singletons is downward directed, yet the union
    /// of eligible singletons can be base-provable while no eligible subset
    /// is.
    #[test]
    fn bare_downward_directedness_cannot_use_shortcut() {
        let u = Universe::from_formulas([f("p"), f("q"), f("r")]);
        // base: only {p,q} ⊢ r (not monotonic, but the point is the sweep)
        let base =
            ExtensionalStructure::new(u.clone(), [(fs(&["p", "q"]), f("r"))]).unwrap();
        let only_small = Relation::new(
            "card≤1",
            RelationFlags {
                downward_directed: Trilean::Yes,
                contains_empty: Trilean::Yes,
                finite_reach: Trilean::Unknown,
            },
            |delta, _| delta.len() <= 1,
        );
        assert!(classify(&only_small, &u, 12).unwrap().downward_directed);
        let c = CompanionStructure::new(Arc::new(base), only_small, false);
        // correct answer: no subset of size ≤1 is base-entailed, so Refuted;
        // a Δ* = {p,q} probe would wrongly prove it
        let v = c
            .entails(&fs(&["p", "q"]), &f("r"), &Budget::default())
            .unwrap();
        assert!(v.is_refuted());
    }
}
