//! Every law of the companion calculus as a named, runnable property over
//! generated finite instances, with deterministic replay and counterexample
//! shrinking.

mod gen;
mod laws;

use std::fmt;

use thiserror::Error;

pub use gen::FPairs;

use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisMode {
    /// Generators shape instances so the law's hypotheses hold.
    Enforce,
    /// Generators deliberately break the hypothesis and the precondition
    /// check is skipped; used to confirm a hypothesis is necessary.
    Violate,
}

#[derive(Clone, Debug)]
pub struct PropertyConfig {
    pub seed: u64,
    pub universe_size: usize,
    pub premise_cap: usize,
    pub instances: usize,
    pub hypothesis_mode: HypothesisMode,
}

impl Default for PropertyConfig {
    fn default() -> PropertyConfig {
        PropertyConfig {
            seed: 1,
            universe_size: 5,
            premise_cap: 3,
            instances: 100,
            hypothesis_mode: HypothesisMode::Enforce,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub instance_index: usize,
    pub seed: u64,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyResult {
    Pass,
    Fail(Counterexample),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: String,
    pub instances_run: usize,
    /// Instances whose hypotheses held, on which the law was asserted.
    pub asserted: usize,
    pub result: PropertyResult,
    pub notes: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        matches!(self.result, PropertyResult::Pass)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.result {
            PropertyResult::Pass => write!(
                f,
                "{}: PASS ({} instances, {} asserted)",
                self.name, self.instances_run, self.asserted
            )?,
            PropertyResult::Fail(ce) => write!(
                f,
                "{}: FAIL at instance {} (seed {})\n{}",
                self.name, ce.instance_index, ce.seed, ce.description
            )?,
            PropertyResult::Inconclusive(why) => {
                write!(f, "{}: INCONCLUSIVE ({why})", self.name)?
            }
        }
        if let Some(notes) = &self.notes {
            write!(f, "\n  {notes}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PropsError {
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
}

pub(crate) enum CheckOutcome {
    Pass,
    Fail(String),
    Inconclusive(String),
}

/// Run `check` over generated instances; on failure, greedily shrink the
/// instance while the hypothesis still holds and the failure persists.
pub(crate) fn run_over_instances<I: Clone>(
    name: &str,
    cfg: &PropertyConfig,
    mut generate: impl FnMut(usize, &mut ChaCha8Rng) -> Option<I>,
    hypothesis: impl Fn(&I) -> bool,
    check: impl Fn(&I) -> CheckOutcome,
    candidates: impl Fn(&I) -> Vec<I>,
    describe: impl Fn(&I) -> String,
) -> PropertyReport {
    let mut asserted = 0;
    for index in 0..cfg.instances {
        let mut rng = gen::instance_rng(cfg.seed, name, index);
        let Some(instance) = generate(index, &mut rng) else {
            continue;
        };
        if !hypothesis(&instance) {
            continue;
        }
        asserted += 1;
        match check(&instance) {
            CheckOutcome::Pass => {}
            CheckOutcome::Inconclusive(why) => {
                return PropertyReport {
                    name: name.to_string(),
                    instances_run: index + 1,
                    asserted,
                    result: PropertyResult::Inconclusive(why),
                    notes: None,
                };
            }
            CheckOutcome::Fail(first) => {
                let (min_instance, min_failure) =
                    shrink(instance, first, &hypothesis, &check, &candidates);
                return PropertyReport {
                    name: name.to_string(),
                    instances_run: index + 1,
                    asserted,
                    result: PropertyResult::Fail(Counterexample {
                        instance_index: index,
                        seed: cfg.seed,
                        description: format!("{min_failure}\n{}", describe(&min_instance)),
                    }),
                    notes: None,
                };
            }
        }
    }
    PropertyReport {
        name: name.to_string(),
        instances_run: cfg.instances,
        asserted,
        result: PropertyResult::Pass,
        notes: None,
    }
}

pub(crate) fn shrink<I: Clone>(
    start: I,
    first_failure: String,
    hypothesis: &impl Fn(&I) -> bool,
    check: &impl Fn(&I) -> CheckOutcome,
    candidates: &impl Fn(&I) -> Vec<I>,
) -> (I, String) {
    let mut current = start;
    let mut failure = first_failure;
    loop {
        let mut progressed = false;
        for candidate in candidates(&current) {
            if !hypothesis(&candidate) {
                continue;
            }
            if let CheckOutcome::Fail(why) = check(&candidate) {
                current = candidate;
                failure = why;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return (current, failure);
        }
    }
}

type LawFn = fn(&PropertyConfig) -> PropertyReport;

const REGISTRY: &[(&str, LawFn)] = &[
    ("l_monotone", laws::l_monotone),
    ("l_idempotent", laws::l_idempotent),
    ("re_subset_base", laws::re_subset_base),
    ("re_idempotent", laws::re_idempotent),
    ("l_pair_monotone", laws::l_pair_monotone),
    ("re_translation", laws::re_translation),
    ("re_not_monotone_in_base", laws::re_not_monotone_in_base),
    ("l_eq_re_iff", laws::l_eq_re_iff),
    ("rho_monotone", laws::rho_monotone),
    ("prho_monotone", laws::prho_monotone),
    ("rho_subset_base", laws::rho_subset_base),
    ("prho_subset_base", laws::prho_subset_base),
    ("rho_idempotent", laws::rho_idempotent),
    ("prho_idempotent", laws::prho_idempotent),
    ("pair_monotone", laws::pair_monotone),
    ("union_intersect", laws::union_intersect),
    ("comp_i", laws::comp_i),
    ("comp_ii", laws::comp_ii),
    ("comp_iii", laws::comp_iii),
    ("comp_iv", laws::comp_iv),
    ("comp_v", laws::comp_v),
    ("dd_commute", laws::dd_commute),
    ("theoremhood", laws::theoremhood),
    ("finite_reach_nontrivial", laws::finite_reach_nontrivial),
    ("ecq_failures", laws::ecq_failures),
    ("pi_eq_rho", laws::pi_eq_rho),
    ("hilbert_tarski", laws::hilbert_tarski),
];

/// The names of every registered property, in suite order.
pub fn list_properties() -> Vec<&'static str> {
    REGISTRY.iter().map(|(name, _)| *name).collect()
}

/// Evaluate a named law on deterministic generated instances.
pub fn run_property(name: &str, cfg: &PropertyConfig) -> Result<PropertyReport, PropsError> {
    for (registered, law) in REGISTRY {
        if *registered == name {
            return Ok(law(cfg));
        }
    }
    Err(PropsError::UnknownProperty(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_contains_expected_names() {
        let names = list_properties();
        assert!(names.contains(&"l_eq_re_iff"));
        assert!(names.contains(&"dd_commute"));
        assert!(names.contains(&"pi_eq_rho"));
        assert_eq!(names.len(), 27);
    }

    #[test]
    fn unknown_property_is_an_error() {
        assert_eq!(
            run_property("nosuchlaw", &PropertyConfig::default()).unwrap_err(),
            PropsError::UnknownProperty("nosuchlaw".to_string())
        );
    }

    #[test]
    fn rho_idempotent_passes_on_spec_config() {
        let cfg = PropertyConfig {
            seed: 7,
            universe_size: 5,
            premise_cap: 3,
            instances: 50,
            hypothesis_mode: HypothesisMode::Enforce,
        };
        let report = run_property("rho_idempotent", &cfg).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.asserted, 50);
    }

    #[test]
    fn theoremhood_passes() {
        let cfg = PropertyConfig {
            instances: 50,
            ..PropertyConfig::default()
        };
        let report = run_property("theoremhood", &cfg).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn dd_commute_fails_without_hypothesis() {
        let cfg = PropertyConfig {
            seed: 11,
            instances: 60,
            hypothesis_mode: HypothesisMode::Violate,
            ..PropertyConfig::default()
        };
        let report = run_property("dd_commute", &cfg).unwrap();
        match report.result {
            PropertyResult::Fail(ce) => {
                assert!(!ce.description.is_empty());
            }
            other => panic!("expected a violation witness, got {other:?}"),
        }
    }

    #[test]
    fn reports_replay_deterministically() {
        let cfg = PropertyConfig {
            instances: 20,
            ..PropertyConfig::default()
        };
        let a = run_property("rho_monotone", &cfg).unwrap();
        let b = run_property("rho_monotone", &cfg).unwrap();
        assert_eq!(a.instances_run, b.instances_run);
        assert_eq!(a.asserted, b.asserted);
        assert_eq!(format!("{a}"), format!("{b}"));
    }
}
