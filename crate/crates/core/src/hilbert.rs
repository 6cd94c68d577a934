//! Hilbert-type logical structures induced by a rule set: schemata and their
//! ground instances over a finite universe, bounded forward-chaining
//! derivation search, and the restricted-rules / Π-restricted companions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::companions::Relation;
use crate::structures::{
    Budget, BudgetReport, Certificate, LogicalStructure, Refutation, RefutationScope,
    StructureError, Trilean, Verdict,
};
use crate::syntax::{Formula, FormulaSet, Signature, Token};
use crate::universe::Universe;

/// A rule of inference with metavariable patterns; axioms are rules with an
/// empty premise set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: Token,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl RuleSchema {
    pub fn new(name: &str, premises: Vec<Formula>, conclusion: Formula) -> RuleSchema {
        let mut premises = premises;
        premises.sort();
        premises.dedup();
        RuleSchema {
            name: name.into(),
            premises,
            conclusion,
        }
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }
}

/// A ground instantiation of a schema: the element Γ/α of the rule set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RuleInstance {
    pub schema: Token,
    pub premises: FormulaSet,
    pub conclusion: Formula,
}

type MetaBinding = BTreeMap<Token, Formula>;

fn try_match(pattern: &Formula, target: &Formula, binding: &mut MetaBinding) -> bool {
    match (pattern, target) {
        (Formula::Var(a), Formula::Var(b)) => a == b,
        (Formula::Meta(m), t) => {
            if let Some(bound) = binding.get(m) {
                bound == t
            } else {
                binding.insert(m.clone(), t.clone());
                true
            }
        }
        (Formula::App(ps, pargs), Formula::App(ts, targs)) => {
            ps == ts
                && pargs.len() == targs.len()
                && pargs
                    .iter()
                    .zip(targs.iter())
                    .all(|(p, t)| try_match(p, t, binding))
        }
        _ => false,
    }
}

fn apply_binding(pattern: &Formula, binding: &MetaBinding) -> Formula {
    match pattern {
        Formula::Var(_) => pattern.clone(),
        Formula::Meta(m) => binding
            .get(m)
            .cloned()
            .expect("all metavariables bound before instantiation"),
        Formula::App(sym, args) => {
            let new_args: Vec<Formula> = args.iter().map(|a| apply_binding(a, binding)).collect();
            Formula::App(sym.clone(), new_args.into())
        }
    }
}

fn connective_count(f: &Formula) -> usize {
    match f {
        Formula::Var(_) | Formula::Meta(_) => 0,
        Formula::App(_, args) => 1 + args.iter().map(connective_count).sum::<usize>(),
    }
}

/// All ground instances of `schema` whose premises and conclusion lie in
/// `universe`: the metavariable assignments are enumerated by matching the
/// schema's patterns against universe formulas, most-structured pattern
/// first, rather than by a blind product over assignments.
pub fn instances(schema: &RuleSchema, universe: &Universe) -> BTreeSet<RuleInstance> {
    let mut patterns: Vec<&Formula> = schema.premises.iter().collect();
    patterns.push(&schema.conclusion);
    patterns.sort_by_key(|p| std::cmp::Reverse(connective_count(p)));

    let mut out = BTreeSet::new();
    let mut binding = MetaBinding::new();
    enumerate(schema, &patterns, 0, &mut binding, universe, &mut out);
    out
}

fn enumerate(
    schema: &RuleSchema,
    patterns: &[&Formula],
    at: usize,
    binding: &mut MetaBinding,
    universe: &Universe,
    out: &mut BTreeSet<RuleInstance>,
) {
    if at == patterns.len() {
        let premises: FormulaSet = schema
            .premises
            .iter()
            .map(|p| apply_binding(p, binding))
            .collect();
        let conclusion = apply_binding(&schema.conclusion, binding);
        out.insert(RuleInstance {
            schema: schema.name.clone(),
            premises,
            conclusion,
        });
        return;
    }
    let pattern = patterns[at];
    if pattern.metavars().iter().all(|m| binding.contains_key(m)) {
        // fully determined: a membership check, not a search
        if universe.contains(&apply_binding(pattern, binding)) {
            enumerate(schema, patterns, at + 1, binding, universe, out);
        }
        return;
    }
    for candidate in universe.iter() {
        let mut local = binding.clone();
        if try_match(pattern, candidate, &mut local) {
            enumerate(schema, patterns, at + 1, &mut local, universe, out);
        }
    }
}

/// A Hilbert-type structure: a signature, rule schemata, and a (possibly
/// empty) stack of instance filters. Filters only ever remove instances.
#[derive(Clone)]
pub struct HilbertStructure {
    name: String,
    signature: Signature,
    schemata: Vec<RuleSchema>,
    filters: Vec<Vec<Relation>>,
}

impl HilbertStructure {
    pub fn new(name: &str, signature: Signature, schemata: Vec<RuleSchema>) -> HilbertStructure {
        HilbertStructure {
            name: name.to_string(),
            signature,
            schemata,
            filters: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn schemata(&self) -> &[RuleSchema] {
        &self.schemata
    }

    /// The restricted-rules companion: keep instance Γ/α iff
    /// var(Γ) ⊆ var(α). Axioms always survive, since var(∅) = ∅.
    pub fn restrict_rules(&self) -> HilbertStructure {
        self.restrict_by(vec![Relation::left()])
    }

    /// The Π-restricted companion: an instance survives iff it belongs to
    /// some relation in Π. `restrict_by` with `{L}` coincides with
    /// `restrict_rules`.
    pub fn restrict_by(&self, pi: Vec<Relation>) -> HilbertStructure {
        let mut next = self.clone();
        next.name = format!("{}^Π", self.name);
        next.filters.push(pi);
        next
    }

    pub fn instance_survives(&self, premises: &FormulaSet, conclusion: &Formula) -> bool {
        self.filters
            .iter()
            .all(|pi| pi.iter().any(|rel| rel.holds(premises, conclusion)))
    }

    /// All surviving ground instances over `universe`, across all schemata.
    pub fn ground_instances(&self, universe: &Universe) -> BTreeSet<RuleInstance> {
        let mut out = BTreeSet::new();
        for schema in &self.schemata {
            for inst in instances(schema, universe) {
                if self.instance_survives(&inst.premises, &inst.conclusion) {
                    out.insert(inst);
                }
            }
        }
        out
    }
}

impl fmt::Debug for HilbertStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HilbertStructure")
            .field("name", &self.name)
            .field("schemata", &self.schemata.len())
            .field("filters", &self.filters.len())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hypothesis,
    Rule {
        schema: Token,
        premise_steps: Vec<usize>,
    },
}

/// A finite derivation: each step is a hypothesis or follows from earlier
/// steps by a surviving rule instance; the last step is the goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<(Formula, Justification)>,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (formula, just)) in self.steps.iter().enumerate() {
            match just {
                Justification::Hypothesis => {
                    writeln!(f, "{}. {formula}  [hypothesis]", i + 1)?;
                }
                Justification::Rule {
                    schema,
                    premise_steps,
                } => {
                    let refs: Vec<String> =
                        premise_steps.iter().map(|s| (s + 1).to_string()).collect();
                    if refs.is_empty() {
                        writeln!(f, "{}. {formula}  [{schema}]", i + 1)?;
                    } else {
                        writeln!(f, "{}. {formula}  [{schema} on {}]", i + 1, refs.join(","))?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum ReplayError {
    GoalMismatch,
    HypothesisNotGiven(usize),
    ForwardReference(usize),
    UnknownInstance(usize),
    Empty,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::GoalMismatch => write!(f, "last step is not the goal"),
            ReplayError::HypothesisNotGiven(i) => {
                write!(f, "step {} claims a hypothesis not in the premise set", i + 1)
            }
            ReplayError::ForwardReference(i) => {
                write!(f, "step {} references a non-earlier step", i + 1)
            }
            ReplayError::UnknownInstance(i) => {
                write!(f, "step {} is not a surviving rule instance", i + 1)
            }
            ReplayError::Empty => write!(f, "empty derivation"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Provenance {
    Hypothesis,
    Rule(usize),
}

struct ClosureData {
    derived: Vec<Option<Provenance>>,
    order: Vec<usize>,
    steps_used: usize,
    capped: bool,
}

struct GroundIndexed {
    schema: Token,
    premises: Vec<usize>,
    conclusion: usize,
}

/// A Hilbert structure grounded over a fixed finite universe, answering
/// entailment queries by forward chaining to the least fixpoint within the
/// universe.
pub struct HilbertBackend {
    structure: HilbertStructure,
    universe: Universe,
    insts: Vec<GroundIndexed>,
    by_premise: Vec<Vec<usize>>,
    axioms: Vec<usize>,
    instance_set: BTreeSet<(Token, Vec<usize>, usize)>,
    cache: Mutex<HashMap<(Vec<usize>, usize), std::sync::Arc<ClosureData>>>,
}

impl HilbertBackend {
    pub fn new(structure: HilbertStructure, universe: Universe) -> HilbertBackend {
        let ground = structure.ground_instances(&universe);
        let mut insts = Vec::with_capacity(ground.len());
        let mut by_premise = vec![Vec::new(); universe.len()];
        let mut axioms = Vec::new();
        let mut instance_set = BTreeSet::new();
        for inst in ground {
            let premises: Vec<usize> = inst
                .premises
                .iter()
                .map(|p| universe.index_of(p).expect("instance inside universe"))
                .collect();
            let conclusion = universe
                .index_of(&inst.conclusion)
                .expect("instance inside universe");
            let id = insts.len();
            if premises.is_empty() {
                axioms.push(id);
            }
            for &p in &premises {
                by_premise[p].push(id);
            }
            instance_set.insert((inst.schema.clone(), premises.clone(), conclusion));
            insts.push(GroundIndexed {
                schema: inst.schema,
                premises,
                conclusion,
            });
        }
        HilbertBackend {
            structure,
            universe,
            insts,
            by_premise,
            axioms,
            instance_set,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn structure(&self) -> &HilbertStructure {
        &self.structure
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn instance_count(&self) -> usize {
        self.insts.len()
    }

    fn closure_indices(&self, gamma: &[usize], step_cap: usize) -> std::sync::Arc<ClosureData> {
        let key = (gamma.to_vec(), step_cap);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let data = std::sync::Arc::new(self.compute_closure(gamma, step_cap));
        self.cache.lock().unwrap().insert(key, data.clone());
        data
    }

    fn compute_closure(&self, gamma: &[usize], step_cap: usize) -> ClosureData {
        let n = self.universe.len();
        let mut derived: Vec<Option<Provenance>> = vec![None; n];
        let mut order = Vec::new();
        let mut missing: Vec<usize> = self.insts.iter().map(|i| i.premises.len()).collect();
        let mut queue: Vec<usize> = Vec::new();
        let mut applicable: Vec<usize> = self.axioms.clone();
        let mut steps_used = 0usize;
        let mut capped = false;

        for &g in gamma {
            if derived[g].is_none() {
                derived[g] = Some(Provenance::Hypothesis);
                order.push(g);
                queue.push(g);
            }
        }

        let mut qi = 0;
        loop {
            // fire every instance whose premises are all available
            let mut ai = 0;
            while ai < applicable.len() {
                let inst_id = applicable[ai];
                ai += 1;
                let c = self.insts[inst_id].conclusion;
                if derived[c].is_some() {
                    continue;
                }
                if steps_used >= step_cap {
                    capped = true;
                    break;
                }
                steps_used += 1;
                derived[c] = Some(Provenance::Rule(inst_id));
                order.push(c);
                queue.push(c);
            }
            applicable.drain(..ai.min(applicable.len()));
            if capped {
                break;
            }
            if qi >= queue.len() {
                break;
            }
            let f = queue[qi];
            qi += 1;
            for &inst_id in &self.by_premise[f] {
                missing[inst_id] -= 1;
                if missing[inst_id] == 0 {
                    applicable.push(inst_id);
                }
            }
        }

        ClosureData {
            derived,
            order,
            steps_used,
            capped,
        }
    }

    /// The least fixpoint of `gamma` within the universe under all surviving
    /// rule instances, plus a flag telling whether the step cap cut the
    /// computation short.
    pub fn closure(
        &self,
        gamma: &FormulaSet,
        budget: &Budget,
    ) -> Result<(FormulaSet, bool), StructureError> {
        let idx = self.gamma_indices(gamma)?;
        let data = self.closure_indices(&idx, budget.step_cap);
        let set = data
            .order
            .iter()
            .map(|&i| self.universe.formula(i).clone())
            .collect();
        Ok((set, data.capped))
    }

    fn gamma_indices(&self, gamma: &FormulaSet) -> Result<Vec<usize>, StructureError> {
        let mut idx = Vec::with_capacity(gamma.len());
        for f in gamma {
            idx.push(self.universe.index_of(f).ok_or_else(|| {
                StructureError::OutOfUniverse {
                    formula: f.to_string(),
                }
            })?);
        }
        idx.sort_unstable();
        Ok(idx)
    }

    fn extract_derivation(&self, data: &ClosureData, goal: usize) -> Derivation {
        // post-order walk of the provenance DAG rooted at the goal
        let mut step_of: HashMap<usize, usize> = HashMap::new();
        let mut steps: Vec<(Formula, Justification)> = Vec::new();
        let mut stack = vec![(goal, false)];
        while let Some((node, expanded)) = stack.pop() {
            if step_of.contains_key(&node) {
                continue;
            }
            let prov = data.derived[node].expect("goal in closure");
            if expanded {
                let just = match prov {
                    Provenance::Hypothesis => Justification::Hypothesis,
                    Provenance::Rule(inst_id) => {
                        let inst = &self.insts[inst_id];
                        Justification::Rule {
                            schema: inst.schema.clone(),
                            premise_steps: inst.premises.iter().map(|p| step_of[p]).collect(),
                        }
                    }
                };
                step_of.insert(node, steps.len());
                steps.push((self.universe.formula(node).clone(), just));
            } else {
                stack.push((node, true));
                if let Provenance::Rule(inst_id) = prov {
                    for &p in self.insts[inst_id].premises.iter().rev() {
                        stack.push((p, false));
                    }
                }
            }
        }
        Derivation { steps }
    }

    /// Check a derivation independently of the chaining engine: every step
    /// must be a hypothesis or a surviving instance with earlier premises,
    /// and the last step must equal the goal.
    pub fn replay(
        &self,
        derivation: &Derivation,
        premises: &FormulaSet,
        goal: &Formula,
    ) -> Result<(), ReplayError> {
        let last = derivation.steps.last().ok_or(ReplayError::Empty)?;
        if &last.0 != goal {
            return Err(ReplayError::GoalMismatch);
        }
        for (i, (formula, just)) in derivation.steps.iter().enumerate() {
            match just {
                Justification::Hypothesis => {
                    if !premises.contains(formula) {
                        return Err(ReplayError::HypothesisNotGiven(i));
                    }
                }
                Justification::Rule {
                    schema,
                    premise_steps,
                } => {
                    let mut prem_idx = Vec::with_capacity(premise_steps.len());
                    for &s in premise_steps {
                        if s >= i {
                            return Err(ReplayError::ForwardReference(i));
                        }
                        let f = &derivation.steps[s].0;
                        prem_idx.push(
                            self.universe
                                .index_of(f)
                                .ok_or(ReplayError::UnknownInstance(i))?,
                        );
                    }
                    prem_idx.sort_unstable();
                    prem_idx.dedup();
                    let c = self
                        .universe
                        .index_of(formula)
                        .ok_or(ReplayError::UnknownInstance(i))?;
                    if !self
                        .instance_set
                        .contains(&(schema.clone(), prem_idx, c))
                    {
                        return Err(ReplayError::UnknownInstance(i));
                    }
                }
            }
        }
        Ok(())
    }
}

impl LogicalStructure for HilbertBackend {
    /// `Proved` with a replayable derivation when the goal enters the
    /// closure; `Refuted` within-universe when the fixpoint is reached
    /// without it; `Exhausted` when the step cap bites first.
    fn entails(
        &self,
        premises: &FormulaSet,
        conclusion: &Formula,
        budget: &Budget,
    ) -> Result<Verdict, StructureError> {
        let goal = self.universe.index_of(conclusion).ok_or_else(|| {
            StructureError::OutOfUniverse {
                formula: conclusion.to_string(),
            }
        })?;
        let idx = self.gamma_indices(premises)?;
        let data = self.closure_indices(&idx, budget.step_cap);
        if data.derived[goal].is_some() {
            let derivation = self.extract_derivation(&data, goal);
            debug_assert!(self.replay(&derivation, premises, conclusion).is_ok());
            Ok(Verdict::Proved(Certificate::Derivation(derivation)))
        } else if data.capped {
            Ok(Verdict::Exhausted(BudgetReport {
                steps_used: data.steps_used,
                step_cap: budget.step_cap,
            }))
        } else {
            Ok(Verdict::Refuted(Refutation {
                scope: RefutationScope::WithinUniverse,
                witness: None,
            }))
        }
    }

    fn is_monotonic(&self) -> Trilean {
        Trilean::Yes
    }

    fn name(&self) -> String {
        self.structure.name.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, parse_pattern, Signature};

    fn sig() -> Signature {
        Signature::new([("&", 2), ("|", 2)]).unwrap()
    }

    fn pat(text: &str) -> Formula {
        parse_pattern(text, &sig()).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse(text, &sig()).unwrap()
    }

    fn fs(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| f(t)).collect()
    }

    /// R₁: ?A∧?B / ?A and R₂: ?A / ?A∨?B.
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

    /// S₁ plus R₃: ?A∧?B / ?A∨?B.
    fn s2() -> HilbertStructure {
        HilbertStructure::new(
            "s2",
            sig(),
            vec![
                RuleSchema::new("r1", vec![pat("(?A & ?B)")], pat("?A")),
                RuleSchema::new("r2", vec![pat("?A")], pat("(?A | ?B)")),
                RuleSchema::new("r3", vec![pat("(?A & ?B)")], pat("(?A | ?B)")),
            ],
        )
    }

    fn depth2() -> Universe {
        Universe::generate(&sig(), &["p", "q"], 2, 1000).unwrap()
    }

    #[test]
    fn instances_r2_over_small_universe() {
        let u = Universe::from_formulas([f("p"), f("q"), f("(p | q)")]);
        let r2 = RuleSchema::new("r2", vec![pat("?A")], pat("(?A | ?B)"));
        let got = instances(&r2, &u);
        assert!(got.contains(&RuleInstance {
            schema: "r2".into(),
            premises: fs(&["p"]),
            conclusion: f("(p | q)"),
        }));
    }

    #[test]
    fn instances_ground_schema() {
        let ground = RuleSchema::new("g", vec![pat("p")], pat("q"));
        let u = Universe::from_formulas([f("p"), f("q")]);
        let got = instances(&ground, &u);
        assert_eq!(got.len(), 1);
        let small = Universe::from_formulas([f("p")]);
        assert!(instances(&ground, &small).is_empty());
    }

    #[test]
    fn instances_empty_when_conclusion_unrepresentable() {
        let u = Universe::from_formulas([f("p"), f("q"), f("(p & q)")]);
        let r2 = RuleSchema::new("r2", vec![pat("?A")], pat("(?A | ?B)"));
        assert!(instances(&r2, &u).is_empty());
    }

    #[test]
    fn closure_s1_reaches_disjunction() {
        let backend = HilbertBackend::new(s1(), depth2());
        let (set, capped) = backend.closure(&fs(&["(p & q)"]), &Budget::default()).unwrap();
        assert!(!capped);
        assert!(set.contains(&f("p")));
        assert!(set.contains(&f("(p | q)")));
    }

    #[test]
    fn closure_s1_restricted_omits_disjunction() {
        let backend = HilbertBackend::new(s1().restrict_rules(), depth2());
        let (set, capped) = backend.closure(&fs(&["(p & q)"]), &Budget::default()).unwrap();
        assert!(!capped);
        assert!(!set.contains(&f("(p | q)")));
        assert!(!set.contains(&f("p")));
    }

    #[test]
    fn closure_no_rules_is_gamma() {
        let h = HilbertStructure::new("empty", sig(), vec![]);
        let backend = HilbertBackend::new(h, depth2());
        let (set, capped) = backend.closure(&fs(&["p", "(p & q)"]), &Budget::default()).unwrap();
        assert!(!capped);
        assert_eq!(set, fs(&["p", "(p & q)"]));
    }

    #[test]
    fn derive_s2_restricted_two_steps() {
        let backend = HilbertBackend::new(s2().restrict_rules(), depth2());
        let v = backend
            .entails(&fs(&["(p & q)"]), &f("(p | q)"), &Budget::default())
            .unwrap();
        match v {
            Verdict::Proved(Certificate::Derivation(d)) => {
                assert_eq!(d.steps.len(), 2);
                assert_eq!(d.steps[0].0, f("(p & q)"));
                assert_eq!(d.steps[0].1, Justification::Hypothesis);
                assert_eq!(d.steps[1].0, f("(p | q)"));
                assert!(matches!(
                    &d.steps[1].1,
                    Justification::Rule { schema, .. } if schema.as_ref() == "r3"
                ));
                backend.replay(&d, &fs(&["(p & q)"]), &f("(p | q)")).unwrap();
            }
            other => panic!("expected proved with derivation, got {other:?}"),
        }
    }

    #[test]
    fn derive_hypothesis_is_one_step() {
        let backend = HilbertBackend::new(s1(), depth2());
        let v = backend
            .entails(&fs(&["p"]), &f("p"), &Budget::default())
            .unwrap();
        match v {
            Verdict::Proved(Certificate::Derivation(d)) => {
                assert_eq!(d.steps.len(), 1);
                assert_eq!(d.steps[0].1, Justification::Hypothesis);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn derive_zero_cap_exhausts() {
        let backend = HilbertBackend::new(s1(), depth2());
        let v = backend
            .entails(&fs(&["(p & q)"]), &f("p"), &Budget::with_steps(0))
            .unwrap();
        assert!(v.is_exhausted());
    }

    #[test]
    fn derive_out_of_universe() {
        let backend = HilbertBackend::new(s1(), depth2());
        let r = parse("r", &sig()).unwrap();
        assert!(matches!(
            backend.entails(&fs(&["p"]), &r, &Budget::default()),
            Err(StructureError::OutOfUniverse { .. })
        ));
    }

    #[test]
    fn restrict_drops_and_keeps_instances() {
        let u = depth2();
        let restricted = s1().restrict_rules();
        let ground = restricted.ground_instances(&u);
        // (p∧q)/p dropped: var(q) ⊄ var(p)
        assert!(!ground.contains(&RuleInstance {
            schema: "r1".into(),
            premises: fs(&["(p & q)"]),
            conclusion: f("p"),
        }));
        // (p∧p)/p kept
        assert!(ground.contains(&RuleInstance {
            schema: "r1".into(),
            premises: fs(&["(p & p)"]),
            conclusion: f("p"),
        }));
        // every R₂ instance kept: var(α) ⊆ var(α∨β)
        let r2 = RuleSchema::new("r2", vec![pat("?A")], pat("(?A | ?B)"));
        for inst in instances(&r2, &u) {
            assert!(ground.contains(&inst), "lost {inst:?}");
        }
    }

    #[test]
    fn restrict_rules_idempotent_on_instances() {
        let u = depth2();
        let once = s1().restrict_rules();
        let twice = once.restrict_rules();
        assert_eq!(once.ground_instances(&u), twice.ground_instances(&u));
    }

    #[test]
    fn restrict_by_left_matches_restrict_rules() {
        let u = depth2();
        let a = s1().restrict_rules().ground_instances(&u);
        let b = s1().restrict_by(vec![Relation::left()]).ground_instances(&u);
        assert_eq!(a, b);
    }

    #[test]
    fn restrict_by_empty_pi_drops_everything() {
        let u = depth2();
        let h = s1().restrict_by(vec![]);
        assert!(h.ground_instances(&u).is_empty());
        let backend = HilbertBackend::new(h, u);
        let (set, _) = backend.closure(&fs(&["(p & q)"]), &Budget::default()).unwrap();
        assert_eq!(set, fs(&["(p & q)"]));
    }

    #[test]
    fn restrict_by_total_is_noop() {
        let u = depth2();
        let a = s1().ground_instances(&u);
        let b = s1().restrict_by(vec![Relation::total()]).ground_instances(&u);
        assert_eq!(a, b);
    }

    #[test]
    fn restricted_instances_are_filter_intersection() {
        let u = depth2();
        let unfiltered = s1().ground_instances(&u);
        let filtered = s1().restrict_by(vec![Relation::left()]).ground_instances(&u);
        let l = Relation::left();
        let expect: BTreeSet<RuleInstance> = unfiltered
            .iter()
            .filter(|i| l.holds(&i.premises, &i.conclusion))
            .cloned()
            .collect();
        assert_eq!(filtered, expect);
    }

    #[test]
    fn closure_monotone_in_premises_and_universe() {
        let small = Universe::generate(&sig(), &["p", "q"], 1, 1000).unwrap();
        let big = depth2();
        let b_small = HilbertBackend::new(s1(), small);
        let b_big = HilbertBackend::new(s1(), big);
        let g1 = fs(&["(p & q)"]);
        let g2 = fs(&["(p & q)", "q"]);
        let (c1, _) = b_small.closure(&g1, &Budget::default()).unwrap();
        let (c2, _) = b_small.closure(&g2, &Budget::default()).unwrap();
        assert!(c1.is_subset(&c2));
        let (c3, _) = b_big.closure(&g1, &Budget::default()).unwrap();
        assert!(c1.is_subset(&c3));
    }

    #[test]
    fn axioms_survive_restriction_and_fire() {
        let ax = RuleSchema::new("ax", vec![], pat("(?A | ?A)"));
        let h = HilbertStructure::new("axiomatic", sig(), vec![ax]).restrict_rules();
        let u = Universe::from_formulas([f("p"), f("(p | p)")]);
        let backend = HilbertBackend::new(h, u);
        let (set, _) = backend.closure(&FormulaSet::new(), &Budget::default()).unwrap();
        assert!(set.contains(&f("(p | p)")));
    }
}
