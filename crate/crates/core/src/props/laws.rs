//! The laws themselves: each property builds finite instances, computes the
//! relevant companion tables through both the brute-force referee and the
//! sweep implementation, and asserts the law on the results.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::companions::{CompanionStructure, Relation};
use crate::hilbert::{HilbertBackend, HilbertStructure, RuleSchema};
use crate::oracle::{brute_companion, dump, equal_tables, subset_of, TableComparison, TableDump};
use crate::structures::{check_tarski, Budget, LogicalStructure};
use crate::syntax::{Formula, FormulaSet};
use crate::universe::Universe;

use super::gen::{self, FPairs};
use super::{
    run_over_instances, CheckOutcome, Counterexample, HypothesisMode, PropertyConfig,
    PropertyReport, PropertyResult,
};

fn show_pair(delta: &FormulaSet, alpha: &Formula) -> String {
    let premises: Vec<String> = delta.iter().map(|f| f.to_string()).collect();
    format!("{{{}}} |- {}", premises.join(", "), alpha)
}

fn show_pairs(label: &str, pairs: &FPairs) -> String {
    let mut out = format!("{label} ({} pairs):", pairs.len());
    for (delta, alpha) in pairs {
        let _ = write!(out, "\n    {}", show_pair(delta, alpha));
    }
    out
}

fn fpairs_to_dump(universe: &[Formula], cap: usize, pairs: &FPairs) -> TableDump {
    let u = Universe::from_formulas(universe.iter().cloned());
    let idx_pairs = pairs
        .iter()
        .filter(|(delta, _)| delta.len() <= cap)
        .map(|(delta, alpha)| {
            let di: Vec<usize> = delta
                .iter()
                .map(|f| u.index_of(f).expect("pair formula in universe"))
                .collect();
            (di, u.index_of(alpha).expect("pair formula in universe"))
        })
        .collect();
    TableDump::from_parts(u, cap, idx_pairs, true)
}

fn dump_to_fpairs(d: &TableDump) -> FPairs {
    d.pairs().iter().map(|p| d.pair_formulas(p)).collect()
}

/// First pair of `a` missing from `b`, if any.
fn not_subset_witness<'a>(a: &'a FPairs, b: &FPairs) -> Option<&'a (FormulaSet, Formula)> {
    a.iter().find(|pair| !b.contains(pair))
}

/// Compute a companion table twice — by literal quantifier evaluation
/// against the base table, and by sweeping the companion structure — and
/// insist the two agree before handing the table to a law.
fn companion_checked(
    universe: &[Formula],
    cap: usize,
    base: &FPairs,
    declare_monotone: bool,
    rho: &Relation,
    pure: bool,
) -> Result<FPairs, CheckOutcome> {
    let base_dump = fpairs_to_dump(universe, cap, base);
    let referee = brute_companion(&base_dump, rho, pure);

    let mut ext = base_dump.to_extensional();
    if declare_monotone {
        ext = ext.declared_monotonic();
    }
    let companion = CompanionStructure::new(Arc::new(ext), rho.clone(), pure);
    let via_impl = match dump(&companion, base_dump.universe(), cap, &Budget::default()) {
        Ok(d) => d,
        Err(e) => return Err(CheckOutcome::Fail(format!("implementation dump failed: {e}"))),
    };
    match equal_tables(&referee, &via_impl) {
        Ok(TableComparison::Equal) => Ok(dump_to_fpairs(&referee)),
        Ok(TableComparison::Unequal { witness, side }) => Err(CheckOutcome::Fail(format!(
            "companion sweep disagrees with the brute-force oracle at {} ({side:?})",
            show_pair(&witness.0, &witness.1)
        ))),
        Ok(TableComparison::Inconclusive) => {
            Err(CheckOutcome::Inconclusive("budget-tainted dump".to_string()))
        }
        Err(e) => Err(CheckOutcome::Fail(format!("table comparison failed: {e}"))),
    }
}

// ---------------------------------------------------------------------------
// relational instances
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub(crate) struct RelInstance {
    universe: Vec<Formula>,
    cap: usize,
    tables: Vec<FPairs>,
    rels: Vec<FPairs>,
    /// optional premise sets a law focuses on (e.g. the Γ of the
    /// finite-reach theorem)
    focus: Vec<FormulaSet>,
}

impl RelInstance {
    fn new(universe: Vec<Formula>, cap: usize) -> RelInstance {
        RelInstance {
            universe,
            cap,
            tables: Vec::new(),
            rels: Vec::new(),
            focus: Vec::new(),
        }
    }

    fn relation(&self, i: usize, name: &str) -> Relation {
        Relation::extensional(name, self.rels[i].clone())
    }

    fn checked(&self, table: usize, rho: &Relation, pure: bool) -> Result<FPairs, CheckOutcome> {
        companion_checked(&self.universe, self.cap, &self.tables[table], false, rho, pure)
    }

    fn checked_monotone_base(
        &self,
        table: usize,
        rho: &Relation,
        pure: bool,
    ) -> Result<FPairs, CheckOutcome> {
        companion_checked(&self.universe, self.cap, &self.tables[table], true, rho, pure)
    }

    fn checked_over(&self, base: &FPairs, rho: &Relation, pure: bool) -> Result<FPairs, CheckOutcome> {
        companion_checked(&self.universe, self.cap, base, false, rho, pure)
    }

    fn shrink_candidates(&self) -> Vec<RelInstance> {
        let mut out = Vec::new();
        for (ti, table) in self.tables.iter().enumerate() {
            for pair in table {
                let mut smaller = self.clone();
                smaller.tables[ti].remove(pair);
                out.push(smaller);
            }
        }
        for (ri, rel) in self.rels.iter().enumerate() {
            for pair in rel {
                let mut smaller = self.clone();
                smaller.rels[ri].remove(pair);
                out.push(smaller);
            }
        }
        if self.universe.len() > 1 {
            for drop in &self.universe {
                let mut smaller = self.clone();
                smaller.universe.retain(|f| f != drop);
                let mentions = |pair: &(FormulaSet, Formula)| {
                    pair.0.contains(drop) || &pair.1 == drop
                };
                for table in &mut smaller.tables {
                    table.retain(|pair| !mentions(pair));
                }
                for rel in &mut smaller.rels {
                    rel.retain(|pair| !mentions(pair));
                }
                for focus in &mut smaller.focus {
                    focus.remove(drop);
                }
                out.push(smaller);
            }
        }
        out
    }

    fn describe(&self) -> String {
        let names: Vec<String> = self.universe.iter().map(|f| f.to_string()).collect();
        let mut out = format!("  universe: {{{}}}, premise cap {}", names.join(", "), self.cap);
        for (i, t) in self.tables.iter().enumerate() {
            let _ = write!(out, "\n  {}", show_pairs(&format!("table {i}"), t));
        }
        for (i, r) in self.rels.iter().enumerate() {
            let _ = write!(out, "\n  {}", show_pairs(&format!("relation {i}"), r));
        }
        for focus in &self.focus {
            let names: Vec<String> = focus.iter().map(|f| f.to_string()).collect();
            let _ = write!(out, "\n  focus premise set: {{{}}}", names.join(", "));
        }
        out
    }
}

fn rel_law(
    name: &'static str,
    cfg: &PropertyConfig,
    generate: impl FnMut(usize, &mut ChaCha8Rng) -> Option<RelInstance>,
    hypothesis: impl Fn(&RelInstance) -> bool,
    check: impl Fn(&RelInstance) -> CheckOutcome,
) -> PropertyReport {
    run_over_instances(
        name,
        cfg,
        generate,
        hypothesis,
        check,
        RelInstance::shrink_candidates,
        RelInstance::describe,
    )
}

// ---------------------------------------------------------------------------
// §2 laws: the left variable inclusion companion
// ---------------------------------------------------------------------------

pub(crate) fn l_monotone(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "l_monotone",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size);
            let arbitrary = gen::sample_table(rng, &universe, cfg.premise_cap, 0.12);
            let seed_table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.05);
            let monotone = gen::monotone_close(&universe, cfg.premise_cap, &seed_table);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![arbitrary, monotone];
            Some(inst)
        },
        |inst| gen::is_monotone_within(&inst.universe, inst.cap, &inst.tables[1]),
        |inst| {
            let left = Relation::left();
            let a = match inst.checked(0, &left, false) {
                Ok(a) => a,
                Err(out) => return out,
            };
            if !gen::is_monotone_within(&inst.universe, inst.cap, &a) {
                return CheckOutcome::Fail("left companion table is not monotone".to_string());
            }
            let b = match inst.checked_monotone_base(1, &left, false) {
                Ok(b) => b,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&b, &inst.tables[1]) {
                return CheckOutcome::Fail(format!(
                    "left companion exceeds a monotonic base at {}",
                    show_pair(delta, alpha)
                ));
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn l_idempotent(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "l_idempotent",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size);
            let table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.12);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![table];
            Some(inst)
        },
        |_| true,
        |inst| {
            let left = Relation::left();
            let once = match inst.checked(0, &left, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let twice = match inst.checked_over(&once, &left, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if once != twice {
                return CheckOutcome::Fail("(⊦ˡ)ˡ differs from ⊦ˡ".to_string());
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn l_pair_monotone(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "l_pair_monotone",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size);
            let bigger = gen::sample_table(rng, &universe, cfg.premise_cap, 0.15);
            let smaller = gen::subsample(rng, &bigger, 0.6);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![smaller, bigger];
            Some(inst)
        },
        |inst| inst.tables[0].is_subset(&inst.tables[1]),
        |inst| {
            let left = Relation::left();
            let a1 = match inst.checked(0, &left, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let a2 = match inst.checked(1, &left, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&a1, &a2) {
                return CheckOutcome::Fail(format!(
                    "⊦₁ˡ ⊄ ⊦₂ˡ despite ⊦₁ ⊆ ⊦₂, at {}",
                    show_pair(delta, alpha)
                ));
            }
            CheckOutcome::Pass
        },
    )
}

// ---------------------------------------------------------------------------
// Hilbert-sample instances
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub(crate) struct HilbertInstance {
    schemata: Vec<RuleSchema>,
    variant: usize,
}

impl HilbertInstance {
    fn structure(&self) -> HilbertStructure {
        HilbertStructure::new("sample", gen::hilbert_signature(), self.schemata.clone())
    }

    fn shrink_candidates(&self) -> Vec<HilbertInstance> {
        (0..self.schemata.len())
            .map(|i| {
                let mut smaller = self.clone();
                smaller.schemata.remove(i);
                smaller
            })
            .collect()
    }

    fn describe(&self) -> String {
        let mut out = String::from("  rule schemata:");
        for schema in &self.schemata {
            let premises: Vec<String> =
                schema.premises.iter().map(|p| p.to_string()).collect();
            let _ = write!(
                out,
                "\n    {}: {} |- {}",
                schema.name,
                premises.join("; "),
                schema.conclusion
            );
        }
        if self.schemata.is_empty() {
            out.push_str(" (none)");
        }
        out
    }
}

fn hilbert_dump(
    structure: &HilbertStructure,
    universe: &Universe,
    cap: usize,
) -> Result<TableDump, CheckOutcome> {
    let backend = HilbertBackend::new(structure.clone(), universe.clone());
    match dump(&backend, universe, cap, &Budget::default()) {
        Ok(d) if d.is_complete() => Ok(d),
        Ok(_) => Err(CheckOutcome::Inconclusive(
            "hilbert dump exhausted its budget".to_string(),
        )),
        Err(e) => Err(CheckOutcome::Fail(format!("dump failed: {e}"))),
    }
}

pub(crate) fn re_subset_base(cfg: &PropertyConfig) -> PropertyReport {
    let universe = gen::hilbert_universe();
    run_over_instances(
        "re_subset_base",
        cfg,
        |index, rng| {
            Some(HilbertInstance {
                schemata: gen::sample_hilbert(rng, "sample").schemata().to_vec(),
                variant: index,
            })
        },
        |_| true,
        |inst| {
            let h = inst.structure();
            let base = match hilbert_dump(&h, &universe, cfg.premise_cap) {
                Ok(d) => d,
                Err(out) => return out,
            };
            let restricted = match hilbert_dump(&h.restrict_rules(), &universe, cfg.premise_cap) {
                Ok(d) => d,
                Err(out) => return out,
            };
            match subset_of(&restricted, &base) {
                Ok(None) => CheckOutcome::Pass,
                Ok(Some((delta, alpha))) => CheckOutcome::Fail(format!(
                    "⊦ʳᵉ ⊄ ⊦ at {}",
                    show_pair(&delta, &alpha)
                )),
                Err(e) => CheckOutcome::Fail(format!("comparison failed: {e}")),
            }
        },
        HilbertInstance::shrink_candidates,
        HilbertInstance::describe,
    )
}

pub(crate) fn re_idempotent(cfg: &PropertyConfig) -> PropertyReport {
    let universe = gen::hilbert_universe();
    run_over_instances(
        "re_idempotent",
        cfg,
        |index, rng| {
            Some(HilbertInstance {
                schemata: gen::sample_hilbert(rng, "sample").schemata().to_vec(),
                variant: index,
            })
        },
        |_| true,
        |inst| {
            let once = inst.structure().restrict_rules();
            let twice = once.restrict_rules();
            if once.ground_instances(&universe) != twice.ground_instances(&universe) {
                return CheckOutcome::Fail(
                    "restricting twice changed the surviving instances".to_string(),
                );
            }
            let d_once = match hilbert_dump(&once, &universe, cfg.premise_cap) {
                Ok(d) => d,
                Err(out) => return out,
            };
            let d_twice = match hilbert_dump(&twice, &universe, cfg.premise_cap) {
                Ok(d) => d,
                Err(out) => return out,
            };
            match equal_tables(&d_once, &d_twice) {
                Ok(TableComparison::Equal) => CheckOutcome::Pass,
                Ok(TableComparison::Unequal { witness, .. }) => CheckOutcome::Fail(format!(
                    "(⊦ʳᵉ)ʳᵉ differs from ⊦ʳᵉ at {}",
                    show_pair(&witness.0, &witness.1)
                )),
                Ok(TableComparison::Inconclusive) => {
                    CheckOutcome::Inconclusive("tainted dump".to_string())
                }
                Err(e) => CheckOutcome::Fail(format!("comparison failed: {e}")),
            }
        },
        HilbertInstance::shrink_candidates,
        HilbertInstance::describe,
    )
}

pub(crate) fn re_translation(cfg: &PropertyConfig) -> PropertyReport {
    let fail = |description: String| PropertyReport {
        name: "re_translation".to_string(),
        instances_run: 1,
        asserted: 1,
        result: PropertyResult::Fail(Counterexample {
            instance_index: 0,
            seed: cfg.seed,
            description,
        }),
        notes: None,
    };
    let universe = gen::hilbert_universe();
    let (s1, s2) = gen::remark_pair();
    let s1_re = s1.restrict_rules();
    let s2_re = s2.restrict_rules();
    let backend2 = HilbertBackend::new(s2_re.clone(), universe.clone());
    // hypothesis: every surviving rule of the first restricted system is
    // derivable in the second
    for inst in s1_re.ground_instances(&universe) {
        match backend2.entails(&inst.premises, &inst.conclusion, &Budget::default()) {
            Ok(v) if v.is_proved() => {}
            Ok(_) => {
                return fail(format!(
                    "rule {} not derivable in the extended restricted system",
                    show_pair(&inst.premises, &inst.conclusion)
                ));
            }
            Err(e) => return fail(format!("query failed: {e}")),
        }
    }
    let d1 = match hilbert_dump(&s1_re, &universe, cfg.premise_cap) {
        Ok(d) => d,
        Err(out) => return outcome_report("re_translation", cfg, out),
    };
    let d2 = match hilbert_dump(&s2_re, &universe, cfg.premise_cap) {
        Ok(d) => d,
        Err(out) => return outcome_report("re_translation", cfg, out),
    };
    match subset_of(&d1, &d2) {
        Ok(None) => PropertyReport {
            name: "re_translation".to_string(),
            instances_run: 1,
            asserted: 1,
            result: PropertyResult::Pass,
            notes: None,
        },
        Ok(Some((delta, alpha))) => fail(format!(
            "⊦₁ʳᵉ ⊄ ⊦₂ʳᵉ at {}",
            show_pair(&delta, &alpha)
        )),
        Err(e) => fail(format!("comparison failed: {e}")),
    }
}

fn outcome_report(name: &str, cfg: &PropertyConfig, outcome: CheckOutcome) -> PropertyReport {
    let result = match outcome {
        CheckOutcome::Pass => PropertyResult::Pass,
        CheckOutcome::Fail(d) => PropertyResult::Fail(Counterexample {
            instance_index: 0,
            seed: cfg.seed,
            description: d,
        }),
        CheckOutcome::Inconclusive(why) => PropertyResult::Inconclusive(why),
    };
    PropertyReport {
        name: name.to_string(),
        instances_run: 1,
        asserted: 1,
        result,
        notes: None,
    }
}

/// The counterexample replayed verbatim: over the depth-2 universe the base
/// tables satisfy table(S₂) ⊆ table(S₁), yet the restricted companion of
/// the extended system proves a pair the restricted companion of the
/// original cannot.
pub(crate) fn re_not_monotone_in_base(cfg: &PropertyConfig) -> PropertyReport {
    let sig = gen::hilbert_signature();
    let universe = match Universe::generate(&sig, &["p", "q"], 2, 1000) {
        Ok(u) => u,
        Err(e) => return outcome_report(
            "re_not_monotone_in_base",
            cfg,
            CheckOutcome::Fail(format!("universe generation failed: {e}")),
        ),
    };
    let (s1, s2) = gen::remark_pair();
    let run = || -> CheckOutcome {
        let d1 = match hilbert_dump(&s1, &universe, 1) {
            Ok(d) => d,
            Err(out) => return out,
        };
        let d2 = match hilbert_dump(&s2, &universe, 1) {
            Ok(d) => d,
            Err(out) => return out,
        };
        match subset_of(&d2, &d1) {
            Ok(None) => {}
            Ok(Some((delta, alpha))) => {
                return CheckOutcome::Fail(format!(
                    "base tables: ⊦₂ ⊄ ⊦₁ at {}",
                    show_pair(&delta, &alpha)
                ));
            }
            Err(e) => return CheckOutcome::Fail(format!("comparison failed: {e}")),
        }
        let d1re = match hilbert_dump(&s1.restrict_rules(), &universe, 1) {
            Ok(d) => d,
            Err(out) => return out,
        };
        let d2re = match hilbert_dump(&s2.restrict_rules(), &universe, 1) {
            Ok(d) => d,
            Err(out) => return out,
        };
        let conj: FormulaSet = [crate::syntax::parse("(p & q)", &sig).unwrap()]
            .into_iter()
            .collect();
        let disj = crate::syntax::parse("(p | q)", &sig).unwrap();
        if !d2re.contains(&conj, &disj) {
            return CheckOutcome::Fail(
                "extended restricted system is missing the witness pair".to_string(),
            );
        }
        if d1re.contains(&conj, &disj) {
            return CheckOutcome::Fail(
                "original restricted system unexpectedly proves the witness pair".to_string(),
            );
        }
        CheckOutcome::Pass
    };
    outcome_report("re_not_monotone_in_base", cfg, run())
}

pub(crate) fn l_eq_re_iff(cfg: &PropertyConfig) -> PropertyReport {
    let universe = gen::hilbert_universe();
    let universe_vec: Vec<Formula> = universe.as_slice().to_vec();
    let left = Relation::left();
    let mut equal_branch = 0usize;
    let mut unequal_branch = 0usize;
    let instances = cfg.instances.max(10);

    let check = |inst: &HilbertInstance| -> Result<bool, CheckOutcome> {
        let h = inst.structure();
        let base = match hilbert_dump(&h, &universe, cfg.premise_cap) {
            Ok(d) => d,
            Err(out) => return Err(out),
        };
        let restricted = match hilbert_dump(&h.restrict_rules(), &universe, cfg.premise_cap) {
            Ok(d) => d,
            Err(out) => return Err(out),
        };
        let a = match companion_checked(
            &universe_vec,
            cfg.premise_cap,
            &dump_to_fpairs(&base),
            true,
            &left,
            false,
        ) {
            Ok(t) => t,
            Err(out) => return Err(out),
        };
        let b = dump_to_fpairs(&restricted);
        let c = match companion_checked(&universe_vec, cfg.premise_cap, &b, true, &left, false) {
            Ok(t) => t,
            Err(out) => return Err(out),
        };
        let companions_coincide = a == b;
        let re_left_fixpoint = c == a;
        if companions_coincide != re_left_fixpoint {
            return Err(CheckOutcome::Fail(format!(
                "⊦ˡ=⊦ʳᵉ is {companions_coincide} but (⊦ʳᵉ)ˡ=⊦ˡ is {re_left_fixpoint}"
            )));
        }
        Ok(companions_coincide)
    };

    for index in 0..instances {
        let mut rng = gen::instance_rng(cfg.seed, "l_eq_re_iff", index);
        let schemata = match index {
            // one sample known to separate the companions, one known to not
            0 => gen::remark_pair().0.schemata().to_vec(),
            1 => Vec::new(),
            _ => gen::sample_hilbert(&mut rng, "sample").schemata().to_vec(),
        };
        let inst = HilbertInstance {
            schemata,
            variant: index,
        };
        match check(&inst) {
            Ok(true) => equal_branch += 1,
            Ok(false) => unequal_branch += 1,
            Err(CheckOutcome::Inconclusive(why)) => {
                return PropertyReport {
                    name: "l_eq_re_iff".to_string(),
                    instances_run: index + 1,
                    asserted: index + 1,
                    result: PropertyResult::Inconclusive(why),
                    notes: None,
                };
            }
            Err(CheckOutcome::Fail(first)) => {
                let (min_inst, min_failure) = super::shrink(
                    inst,
                    first,
                    &|_| true,
                    &|i| match check(i) {
                        Err(out) => out,
                        Ok(_) => CheckOutcome::Pass,
                    },
                    &HilbertInstance::shrink_candidates,
                );
                return PropertyReport {
                    name: "l_eq_re_iff".to_string(),
                    instances_run: index + 1,
                    asserted: index + 1,
                    result: PropertyResult::Fail(Counterexample {
                        instance_index: index,
                        seed: cfg.seed,
                        description: format!("{min_failure}\n{}", min_inst.describe()),
                    }),
                    notes: None,
                };
            }
            Err(CheckOutcome::Pass) => unreachable!(),
        }
    }
    PropertyReport {
        name: "l_eq_re_iff".to_string(),
        instances_run: instances,
        asserted: instances,
        result: PropertyResult::Pass,
        notes: Some(format!(
            "coinciding companions: {equal_branch}, separated companions: {unequal_branch}"
        )),
    }
}

// ---------------------------------------------------------------------------
// §3 laws: relational companions of arbitrary structures
// ---------------------------------------------------------------------------

fn base_and_relation(
    cfg: &PropertyConfig,
    pool: &[Formula],
    rng: &mut ChaCha8Rng,
) -> RelInstance {
    let universe = gen::sample_universe(rng, pool, cfg.universe_size);
    let table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.12);
    let rel = gen::sample_table(rng, &universe, cfg.premise_cap, 0.18);
    let mut inst = RelInstance::new(universe, cfg.premise_cap);
    inst.tables = vec![table];
    inst.rels = vec![rel];
    inst
}

fn monotone_check(name: &'static str, cfg: &PropertyConfig, pure: bool) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        name,
        cfg,
        |_, rng| Some(base_and_relation(cfg, &pool, rng)),
        |_| true,
        move |inst| {
            let rho = inst.relation(0, "rho");
            let table = match inst.checked(0, &rho, pure) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if !gen::is_monotone_within(&inst.universe, inst.cap, &table) {
                return CheckOutcome::Fail("companion table is not monotone".to_string());
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn rho_monotone(cfg: &PropertyConfig) -> PropertyReport {
    monotone_check("rho_monotone", cfg, false)
}

pub(crate) fn prho_monotone(cfg: &PropertyConfig) -> PropertyReport {
    monotone_check("prho_monotone", cfg, true)
}

fn subset_base_check(name: &'static str, cfg: &PropertyConfig, pure: bool) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        name,
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size);
            let seed_table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.06);
            let monotone = gen::monotone_close(&universe, cfg.premise_cap, &seed_table);
            let rel = gen::sample_table(rng, &universe, cfg.premise_cap, 0.18);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![monotone];
            inst.rels = vec![rel];
            Some(inst)
        },
        |inst| gen::is_monotone_within(&inst.universe, inst.cap, &inst.tables[0]),
        move |inst| {
            let rho = inst.relation(0, "rho");
            let table = match inst.checked_monotone_base(0, &rho, pure) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&table, &inst.tables[0]) {
                return CheckOutcome::Fail(format!(
                    "companion exceeds its monotonic base at {}",
                    show_pair(delta, alpha)
                ));
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn rho_subset_base(cfg: &PropertyConfig) -> PropertyReport {
    subset_base_check("rho_subset_base", cfg, false)
}

pub(crate) fn prho_subset_base(cfg: &PropertyConfig) -> PropertyReport {
    subset_base_check("prho_subset_base", cfg, true)
}

fn idempotent_check(name: &'static str, cfg: &PropertyConfig, pure: bool) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        name,
        cfg,
        |_, rng| Some(base_and_relation(cfg, &pool, rng)),
        |_| true,
        move |inst| {
            let rho = inst.relation(0, "rho");
            let once = match inst.checked(0, &rho, pure) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let twice = match inst.checked_over(&once, &rho, pure) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if once != twice {
                return CheckOutcome::Fail("companion is not idempotent".to_string());
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn rho_idempotent(cfg: &PropertyConfig) -> PropertyReport {
    idempotent_check("rho_idempotent", cfg, false)
}

pub(crate) fn prho_idempotent(cfg: &PropertyConfig) -> PropertyReport {
    idempotent_check("prho_idempotent", cfg, true)
}

pub(crate) fn pair_monotone(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "pair_monotone",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size);
            let big_table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.15);
            let small_table = gen::subsample(rng, &big_table, 0.6);
            let sigma = gen::sample_table(rng, &universe, cfg.premise_cap, 0.2);
            let rho = gen::subsample(rng, &sigma, 0.6);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![small_table, big_table];
            inst.rels = vec![rho, sigma];
            Some(inst)
        },
        |inst| {
            inst.tables[0].is_subset(&inst.tables[1]) && inst.rels[0].is_subset(&inst.rels[1])
        },
        |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            for pure in [false, true] {
                let small = match inst.checked(0, &rho, pure) {
                    Ok(t) => t,
                    Err(out) => return out,
                };
                let big = match inst.checked(1, &sigma, pure) {
                    Ok(t) => t,
                    Err(out) => return out,
                };
                if let Some((delta, alpha)) = not_subset_witness(&small, &big) {
                    return CheckOutcome::Fail(format!(
                        "⊦₁^ρ ⊄ ⊦₂^σ (pure={pure}) at {}",
                        show_pair(delta, alpha)
                    ));
                }
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn union_intersect(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "union_intersect",
        cfg,
        |_, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            let sigma = gen::sample_table(rng, &inst.universe, cfg.premise_cap, 0.18);
            inst.rels.push(sigma);
            Some(inst)
        },
        |_| true,
        |inst| {
            let union_table: FPairs = inst.rels[0].union(&inst.rels[1]).cloned().collect();
            let inter_table: FPairs =
                inst.rels[0].intersection(&inst.rels[1]).cloned().collect();
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let union_rel = Relation::extensional("union", union_table);
            let inter_rel = Relation::extensional("inter", inter_table);
            let a_rho = match inst.checked(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let a_sigma = match inst.checked(0, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let a_union = match inst.checked(0, &union_rel, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let a_inter = match inst.checked(0, &inter_rel, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            for (label, smaller, bigger) in [
                ("⊦^ρ ⊆ ⊦^{ρ∪σ}", &a_rho, &a_union),
                ("⊦^σ ⊆ ⊦^{ρ∪σ}", &a_sigma, &a_union),
                ("⊦^{ρ∩σ} ⊆ ⊦^ρ", &a_inter, &a_rho),
                ("⊦^{ρ∩σ} ⊆ ⊦^σ", &a_inter, &a_sigma),
            ] {
                if let Some((delta, alpha)) = not_subset_witness(smaller, bigger) {
                    return CheckOutcome::Fail(format!(
                        "{label} fails at {}",
                        show_pair(delta, alpha)
                    ));
                }
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn comp_i(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "comp_i",
        cfg,
        |_, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            let sigma = gen::sample_table(rng, &inst.universe, cfg.premise_cap, 0.18);
            let nested_rho = gen::subsample(rng, &sigma, 0.6);
            inst.rels.push(sigma);
            inst.rels.push(nested_rho);
            Some(inst)
        },
        |inst| inst.rels[2].is_subset(&inst.rels[1]),
        |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let inner = match inst.checked(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let composed = match inst.checked_over(&inner, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&composed, &inner) {
                return CheckOutcome::Fail(format!(
                    "(⊦^ρ)^σ ⊄ ⊦^ρ at {}",
                    show_pair(delta, alpha)
                ));
            }
            // equality under ρ ⊆ σ
            let nested = inst.relation(2, "rho_sub");
            let inner2 = match inst.checked(0, &nested, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let composed2 = match inst.checked_over(&inner2, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if inner2 != composed2 {
                return CheckOutcome::Fail(
                    "(⊦^ρ)^σ ≠ ⊦^ρ despite ρ ⊆ σ".to_string(),
                );
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn comp_ii(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "comp_ii",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size);
            let seed_table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.06);
            let monotone = gen::monotone_close(&universe, cfg.premise_cap, &seed_table);
            let rho = gen::sample_table(rng, &universe, cfg.premise_cap, 0.18);
            let sigma = gen::sample_table(rng, &universe, cfg.premise_cap, 0.18);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![monotone];
            inst.rels = vec![rho, sigma];
            Some(inst)
        },
        |inst| gen::is_monotone_within(&inst.universe, inst.cap, &inst.tables[0]),
        |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let inner = match inst.checked_monotone_base(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let composed = match inst.checked_over(&inner, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let direct = match inst.checked_monotone_base(0, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&composed, &direct) {
                return CheckOutcome::Fail(format!(
                    "(⊦^ρ)^σ ⊄ ⊦^σ on monotonic base at {}",
                    show_pair(delta, alpha)
                ));
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn comp_iii(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "comp_iii",
        cfg,
        |_, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            let sigma = inst.rels[0].clone();
            let rho = gen::subsample(rng, &sigma, 0.6);
            inst.rels = vec![rho, sigma];
            Some(inst)
        },
        |inst| inst.rels[0].is_subset(&inst.rels[1]),
        |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let inner = match inst.checked(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let composed = match inst.checked_over(&inner, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let direct = match inst.checked(0, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&composed, &direct) {
                return CheckOutcome::Fail(format!(
                    "(⊦^ρ)^σ ⊄ ⊦^σ despite ρ ⊆ σ at {}",
                    show_pair(delta, alpha)
                ));
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn comp_iv(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "comp_iv",
        cfg,
        |_, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            let rho = inst.rels[0].clone();
            let sigma = gen::subsample(rng, &rho, 0.6);
            inst.rels = vec![rho, sigma];
            Some(inst)
        },
        |inst| inst.rels[1].is_subset(&inst.rels[0]),
        |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let a_sigma = match inst.checked(0, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let a_rho = match inst.checked(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            // σ ⊆ ρ gives ⊦^σ ⊆ ⊦^ρ, the theorem's hypothesis
            if not_subset_witness(&a_sigma, &a_rho).is_some() {
                return CheckOutcome::Fail("generator invariant broken: ⊦^σ ⊄ ⊦^ρ".to_string());
            }
            let composed = match inst.checked_over(&a_rho, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&a_sigma, &composed) {
                return CheckOutcome::Fail(format!(
                    "⊦^σ ⊄ (⊦^ρ)^σ at {}",
                    show_pair(delta, alpha)
                ));
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn comp_v(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "comp_v",
        cfg,
        |index, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            let sigma = inst.rels[0].clone();
            // exercise the coinciding branch on a fixed cadence
            let rho = if index % 4 == 0 {
                sigma.clone()
            } else {
                gen::subsample(rng, &sigma, 0.6)
            };
            inst.rels = vec![rho, sigma];
            Some(inst)
        },
        |inst| inst.rels[0].is_subset(&inst.rels[1]),
        |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let a_rho = match inst.checked(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let a_sigma = match inst.checked(0, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let composed = match inst.checked_over(&a_rho, &sigma, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let lhs = a_rho == a_sigma;
            let rhs = composed == a_sigma;
            if lhs != rhs {
                return CheckOutcome::Fail(format!(
                    "⊦^ρ=⊦^σ is {lhs} but (⊦^ρ)^σ=⊦^σ is {rhs}"
                ));
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn dd_commute(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    let mode = cfg.hypothesis_mode;
    rel_law(
        "dd_commute",
        cfg,
        |_, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            let raw = gen::sample_table(rng, &inst.universe, cfg.premise_cap, 0.18);
            let sigma = match mode {
                HypothesisMode::Enforce => gen::downward_close(&raw),
                HypothesisMode::Violate => {
                    // hunt for a genuinely non-downward-directed sample
                    let mut candidate = raw;
                    let mut tries = 0;
                    while gen::is_downward_directed(&candidate) {
                        if tries > 30 {
                            return None;
                        }
                        candidate =
                            gen::sample_table(rng, &inst.universe, cfg.premise_cap, 0.18);
                        tries += 1;
                    }
                    candidate
                }
            };
            let rho_dd = gen::downward_close(&inst.rels[0]);
            inst.rels.push(sigma);
            inst.rels.push(rho_dd);
            Some(inst)
        },
        move |inst| match mode {
            HypothesisMode::Enforce => {
                gen::is_downward_directed(&inst.rels[1])
                    && gen::is_downward_directed(&inst.rels[2])
            }
            HypothesisMode::Violate => !gen::is_downward_directed(&inst.rels[1]),
        },
        move |inst| {
            let rho = inst.relation(0, "rho");
            let sigma = inst.relation(1, "sigma");
            let lhs = match inst
                .checked(0, &rho, false)
                .and_then(|inner| inst.checked_over(&inner, &sigma, false))
            {
                Ok(t) => t,
                Err(out) => return out,
            };
            let rhs = match inst
                .checked(0, &sigma, false)
                .and_then(|inner| inst.checked_over(&inner, &rho, false))
            {
                Ok(t) => t,
                Err(out) => return out,
            };
            if let Some((delta, alpha)) = not_subset_witness(&lhs, &rhs) {
                return CheckOutcome::Fail(format!(
                    "(⊦^ρ)^σ ⊄ (⊦^σ)^ρ at {}",
                    show_pair(delta, alpha)
                ));
            }
            if mode == HypothesisMode::Violate {
                return CheckOutcome::Pass;
            }
            // both downward directed: the composites coincide
            let rho_dd = inst.relation(2, "rho_dd");
            let lhs2 = match inst
                .checked(0, &rho_dd, false)
                .and_then(|inner| inst.checked_over(&inner, &sigma, false))
            {
                Ok(t) => t,
                Err(out) => return out,
            };
            let rhs2 = match inst
                .checked(0, &sigma, false)
                .and_then(|inner| inst.checked_over(&inner, &rho_dd, false))
            {
                Ok(t) => t,
                Err(out) => return out,
            };
            if lhs2 != rhs2 {
                return CheckOutcome::Fail(
                    "composites differ although both relations are downward directed".to_string(),
                );
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn theoremhood(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "theoremhood",
        cfg,
        |_, rng| {
            let mut inst = base_and_relation(cfg, &pool, rng);
            inst.rels[0] = gen::add_empty_rows(&inst.universe, &inst.rels[0]);
            Some(inst)
        },
        |inst| {
            inst.universe
                .iter()
                .all(|alpha| inst.rels[0].contains(&(FormulaSet::new(), alpha.clone())))
        },
        |inst| {
            let rho = inst.relation(0, "rho");
            let table = match inst.checked(0, &rho, false) {
                Ok(t) => t,
                Err(out) => return out,
            };
            for alpha in &inst.universe {
                let key = (FormulaSet::new(), alpha.clone());
                if table.contains(&key) != inst.tables[0].contains(&key) {
                    return CheckOutcome::Fail(format!(
                        "theoremhood differs on {alpha}"
                    ));
                }
            }
            CheckOutcome::Pass
        },
    )
}

fn reach_union(rel: &FPairs, gamma: &FormulaSet) -> FormulaSet {
    let elems: Vec<&Formula> = gamma.iter().collect();
    let mut out = FormulaSet::new();
    for mask in 0..(1usize << elems.len()) {
        let delta: FormulaSet = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| (*f).clone())
            .collect();
        for (d, alpha) in rel {
            if d == &delta {
                out.insert(alpha.clone());
            }
        }
    }
    out
}

pub(crate) fn finite_reach_nontrivial(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "finite_reach_nontrivial",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size.max(5));
            let table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.15);
            let rel = gen::sparse_reach_relation(rng, &universe, cfg.premise_cap, 0.5);
            let mut gamma = FormulaSet::new();
            for _ in 0..2 {
                gamma.insert(universe[rng.gen_range(0..universe.len())].clone());
            }
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![table];
            inst.rels = vec![rel];
            inst.focus = vec![gamma];
            Some(inst)
        },
        |inst| {
            // the cardinality surplus replacing "L is infinite"
            reach_union(&inst.rels[0], &inst.focus[0]).len() < inst.universe.len()
        },
        |inst| {
            let rho = inst.relation(0, "rho");
            let gamma = &inst.focus[0];
            let reached = reach_union(&inst.rels[0], gamma);
            for pure in [false, true] {
                let table = match inst.checked(0, &rho, pure) {
                    Ok(t) => t,
                    Err(out) => return out,
                };
                for beta in &inst.universe {
                    if reached.contains(beta) {
                        continue;
                    }
                    if table.contains(&(gamma.clone(), beta.clone())) {
                        return CheckOutcome::Fail(format!(
                            "Γ proves an out-of-reach formula (pure={pure}): {}",
                            show_pair(gamma, beta)
                        ));
                    }
                }
            }
            CheckOutcome::Pass
        },
    )
}

pub(crate) fn ecq_failures(cfg: &PropertyConfig) -> PropertyReport {
    let pool = gen::formula_pool();
    rel_law(
        "ecq_failures",
        cfg,
        |_, rng| {
            let universe = gen::sample_universe(rng, &pool, cfg.universe_size.max(5));
            let table = gen::sample_table(rng, &universe, cfg.premise_cap, 0.15);
            let rel = gen::sparse_reach_relation(rng, &universe, 2, 0.5);
            let mut inst = RelInstance::new(universe, cfg.premise_cap);
            inst.tables = vec![table];
            inst.rels = vec![rel];
            Some(inst)
        },
        |inst| {
            // every two-element premise set must leave some conclusion
            // unreached
            inst.universe.iter().all(|a| {
                inst.universe.iter().all(|b| {
                    let gamma: FormulaSet = [a.clone(), b.clone()].into_iter().collect();
                    reach_union(&inst.rels[0], &gamma).len() < inst.universe.len()
                })
            })
        },
        |inst| {
            let rho = inst.relation(0, "rho");
            for pure in [false, true] {
                let table = match inst.checked(0, &rho, pure) {
                    Ok(t) => t,
                    Err(out) => return out,
                };
                // gECQ fails: every {α,β} leaves some γ unproved
                for a in &inst.universe {
                    for b in &inst.universe {
                        let gamma: FormulaSet = [a.clone(), b.clone()].into_iter().collect();
                        let exploded = inst
                            .universe
                            .iter()
                            .all(|g| table.contains(&(gamma.clone(), g.clone())));
                        if exploded {
                            return CheckOutcome::Fail(format!(
                                "gECQ holds (pure={pure}): {{{a}, {b}}} proves everything"
                            ));
                        }
                    }
                }
                // spECQ fails via the empty set: every {α} leaves a gap
                for a in &inst.universe {
                    let gamma: FormulaSet = [a.clone()].into_iter().collect();
                    let exploded = inst
                        .universe
                        .iter()
                        .all(|g| table.contains(&(gamma.clone(), g.clone())));
                    if exploded {
                        return CheckOutcome::Fail(format!(
                            "spECQ holds (pure={pure}): {{{a}}} proves everything"
                        ));
                    }
                }
            }
            CheckOutcome::Pass
        },
    )
}

// ---------------------------------------------------------------------------
// §3.1 laws: Hilbert-type structures and Π-restriction
// ---------------------------------------------------------------------------

fn pi_for_variant(variant: usize) -> Vec<Relation> {
    match variant % 3 {
        0 => vec![Relation::left()],
        1 => vec![Relation::pure_right()],
        _ => vec![Relation::left(), Relation::pure_right()],
    }
}

fn pi_name(variant: usize) -> &'static str {
    match variant % 3 {
        0 => "{L}",
        1 => "{PR}",
        _ => "{L, PR}",
    }
}

pub(crate) fn pi_eq_rho(cfg: &PropertyConfig) -> PropertyReport {
    let universe = gen::hilbert_universe();
    run_over_instances(
        "pi_eq_rho",
        cfg,
        |index, rng| {
            Some(HilbertInstance {
                schemata: gen::sample_hilbert(rng, "sample").schemata().to_vec(),
                variant: index,
            })
        },
        |_| true,
        |inst| {
            let h = inst.structure();
            let restricted = h.restrict_by(pi_for_variant(inst.variant));
            let pi_backend = Arc::new(HilbertBackend::new(restricted, universe.clone()));
            let lhs = match dump(&*pi_backend, &universe, cfg.premise_cap, &Budget::default()) {
                Ok(d) if d.is_complete() => d,
                Ok(_) => return CheckOutcome::Inconclusive("tainted dump".to_string()),
                Err(e) => return CheckOutcome::Fail(format!("dump failed: {e}")),
            };
            let base = match hilbert_dump(&h, &universe, cfg.premise_cap) {
                Ok(d) => d,
                Err(out) => return out,
            };
            let rho = Relation::from_structure(pi_backend.clone(), Budget::default());
            let rhs = brute_companion(&base, &rho, false);
            // implementation path over the live Hilbert backend
            let base_backend = Arc::new(HilbertBackend::new(h, universe.clone()));
            let companion = CompanionStructure::new(base_backend, rho, false);
            let via_impl =
                match dump(&companion, &universe, cfg.premise_cap, &Budget::default()) {
                    Ok(d) => d,
                    Err(e) => return CheckOutcome::Fail(format!("companion dump failed: {e}")),
                };
            match equal_tables(&rhs, &via_impl) {
                Ok(TableComparison::Equal) => {}
                Ok(TableComparison::Unequal { witness, .. }) => {
                    return CheckOutcome::Fail(format!(
                        "companion sweep disagrees with the oracle at {}",
                        show_pair(&witness.0, &witness.1)
                    ));
                }
                Ok(TableComparison::Inconclusive) => {
                    return CheckOutcome::Inconclusive("tainted dump".to_string());
                }
                Err(e) => return CheckOutcome::Fail(format!("comparison failed: {e}")),
            }
            match equal_tables(&lhs, &rhs) {
                Ok(TableComparison::Equal) => CheckOutcome::Pass,
                Ok(TableComparison::Unequal { witness, side }) => CheckOutcome::Fail(format!(
                    "⊦^Π (Π={}) differs from the ρ-companion at {} ({side:?})",
                    pi_name(inst.variant),
                    show_pair(&witness.0, &witness.1)
                )),
                Ok(TableComparison::Inconclusive) => {
                    CheckOutcome::Inconclusive("tainted dump".to_string())
                }
                Err(e) => CheckOutcome::Fail(format!("comparison failed: {e}")),
            }
        },
        HilbertInstance::shrink_candidates,
        HilbertInstance::describe,
    )
}

pub(crate) fn hilbert_tarski(cfg: &PropertyConfig) -> PropertyReport {
    let universe = gen::hilbert_universe();
    run_over_instances(
        "hilbert_tarski",
        cfg,
        |index, rng| {
            Some(HilbertInstance {
                schemata: gen::sample_hilbert(rng, "sample").schemata().to_vec(),
                variant: index,
            })
        },
        |_| true,
        |inst| {
            let h = inst.structure();
            let structure = match inst.variant % 3 {
                0 => h,
                1 => h.restrict_rules(),
                _ => h.restrict_by(pi_for_variant(inst.variant)),
            };
            // the full premise lattice, so the Tarski sweep sees everything
            let full = match hilbert_dump(&structure, &universe, universe.len()) {
                Ok(d) => d,
                Err(out) => return out,
            };
            let report = match check_tarski(&full.to_extensional(), 12) {
                Ok(r) => r,
                Err(e) => return CheckOutcome::Fail(format!("tarski sweep failed: {e}")),
            };
            if !(report.reflexive && report.monotonic && report.transitive && report.finitary) {
                return CheckOutcome::Fail(format!(
                    "dumped Hilbert structure is not Tarski-type: {report:?}"
                ));
            }
            CheckOutcome::Pass
        },
        HilbertInstance::shrink_candidates,
        HilbertInstance::describe,
    )
}
