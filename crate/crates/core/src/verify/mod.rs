//! Executable checks relating the analysis to the semantics: subject
//! reduction, soundness of the containment facts, invariance under
//! congruence, and transfer of static verdicts to explored behaviour.

mod rearrange;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rearrange::{rearrange, rearrange_process};

use crate::cfa::{judge, validate, Estimate, Item, Mode, Slot};
use crate::properties::{check_dynamic, check_static, Depth, PropertyQuery};
use crate::semantics::{dynamic_containments, explore_with, ExploreConfig, ExploreError, MiRegistry, TransitionSystem};
use crate::syntax::SystemTerm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub suite: &'static str,
    pub passed: bool,
    /// Number of individual cases examined.
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl Obligation {
    fn new(suite: &'static str) -> Self {
        Obligation {
            suite,
            passed: true,
            checked: 0,
            counterexample: None,
        }
    }

    fn fail(&mut self, what: String) {
        if self.passed {
            self.passed = false;
            self.counterexample = Some(what);
        }
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checked)", self.suite, self.checked)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub explore: ExploreConfig,
    pub mode: Mode,
    pub rearrangements: usize,
    pub seed: u64,
    pub depth: Depth,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            explore: ExploreConfig::default(),
            mode: Mode::Sound,
            rearrangements: 100,
            seed: 0,
            depth: Depth::Direct,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub obligations: Vec<Obligation>,
    /// The exploration was cut short by depth or unfolding budget.
    pub truncated: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.obligations.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&Obligation> {
        self.obligations.iter().find(|o| !o.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.obligations {
            writeln!(f, "{o}")?;
        }
        if self.truncated {
            writeln!(f, "note: exploration truncated")?;
        }
        Ok(())
    }
}

/// The estimate is acceptable for `term` and closed under every rule.
pub fn acceptable(est: &Estimate, term: &SystemTerm, mode: Mode) -> Obligation {
    let mut o = Obligation::new("acceptability");
    let v = validate(est, term, mode);
    o.checked = 1;
    if let Some(first) = v.first() {
        o.fail(format!("{first} ({} violations)", v.len()));
    }
    o
}

/// Every explored state is acceptable under the estimate of the initial term.
/// The closure obligations do not depend on the state and are covered by
/// [`acceptable`].
pub fn subject_reduction(est: &Estimate, ts: &TransitionSystem) -> Obligation {
    let mut o = Obligation::new("subject reduction");
    for state in &ts.states {
        o.checked += 1;
        if let Some(v) = judge(est, &state.to_term(), &Slot::top()).first() {
            o.fail(format!("state {}: {v}", crate::syntax::pretty(&state.to_term())));
        }
    }
    o
}

/// Every containment observed in an explored state is predicted by `I`.
pub fn soundness(est: &Estimate, ts: &TransitionSystem) -> Obligation {
    let mut o = Obligation::new("soundness containment");
    for (slot, item) in dynamic_containments(ts) {
        o.checked += 1;
        if !est.contains(&slot, &item) {
            let what = match &item {
                Item::Membrane(id) => id.to_string(),
                Item::Action(a) => a.to_string(),
            };
            o.fail(format!("{what} observed in {slot} but absent from I{slot}"));
        }
    }
    o
}

/// Randomly rearranged congruent terms stay acceptable.
pub fn congruence(est: &Estimate, term: &SystemTerm, count: usize, seed: u64) -> Obligation {
    let mut o = Obligation::new("congruence invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let t = rearrange(term, &mut rng);
        o.checked += 1;
        if let Some(v) = judge(est, &t, &Slot::top()).first() {
            o.fail(format!("{}: {v}", crate::syntax::pretty(&t)));
        }
    }
    o
}

/// A statically true query is never contradicted by an explored state. A
/// contradiction is a real counterexample even on a truncated exploration.
pub fn theorem_transfer(est: &Estimate, ts: &TransitionSystem, queries: &[PropertyQuery], depth: Depth) -> Obligation {
    let mut o = Obligation::new("theorem transfer");
    for q in queries {
        o.checked += 1;
        if check_static(est, q, depth).holds && !check_dynamic(ts, q, depth).holds {
            o.fail(format!("{q}: statically true, violated by an explored state"));
        }
    }
    o
}

/// Explores `term` and runs every suite against `est`.
pub fn verify(
    term: &SystemTerm,
    est: &Estimate,
    queries: &[PropertyQuery],
    cfg: &VerifyConfig,
) -> Result<VerifyReport, ExploreError> {
    let ts = explore_with(term, &cfg.explore, MiRegistry::new())?;
    Ok(VerifyReport {
        obligations: vec![
            acceptable(est, term, cfg.mode),
            subject_reduction(est, &ts),
            soundness(est, &ts),
            congruence(est, term, cfg.rearrangements, cfg.seed),
            theorem_transfer(est, &ts, queries, cfg.depth),
        ],
        truncated: ts.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfa::solve;
    use crate::syntax::{parse, MembraneId};

    #[test]
    fn solved_estimate_passes_everything() {
        let t = parse("(mate(n) | drip(mate(s)))<>@P || comate(n)<>@Q").unwrap();
        let est = solve(&t).unwrap();
        let r = verify(&t, &est, &[], &VerifyConfig::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(!r.truncated);
    }

    #[test]
    fn missing_entry_is_a_counterexample() {
        let t = parse("mate(n).drip(0)<>@P || comate(n)<>@Q").unwrap();
        let mut est = solve(&t).unwrap();
        let pq = MembraneId::new("mate:n(P,Q)@(*,*,*)");
        est.i.get_mut(&Slot::top()).unwrap().remove(&Item::Membrane(pq));
        let r = verify(&t, &est, &[], &VerifyConfig::default()).unwrap();
        assert!(!r.passed());
        let f = r.first_failure().unwrap();
        assert_eq!(f.suite, "acceptability");
        assert!(f.counterexample.as_ref().unwrap().contains("(mate)"));
        assert!(!r.obligations[1].passed);
        assert!(!r.obligations[2].passed);
    }
}
