use std::fmt;

use crate::machine::{MachineKind, Rule, RunRecord};

/// `|ρ|_{π, •sea1, •sea3} ≤ |ρ|_{◦sea1, ◦sea2, ◦sea3}` for the Source TAM;
/// the other machines add `•sea7` on the left and `•βv` on the right.
pub fn check_transition_match(r: &RunRecord, machine: MachineKind) -> bool {
    let c = |rules: &[Rule]| rules.iter().map(|&x| r.count(x)).sum::<u64>();
    match machine {
        MachineKind::Source => c(&[Rule::EPi, Rule::ESea1, Rule::ESea3]) <= c(&[Rule::USea1, Rule::USea2, Rule::USea3]),
        MachineKind::Int | MachineKind::Target => {
            c(&[Rule::EPi, Rule::ESea1, Rule::ESea3, Rule::ESea7])
                <= c(&[Rule::USea1, Rule::USea2, Rule::USea3, Rule::EBeta])
        }
    }
}

/// `|ρ| / ((|ρ|_β + 1) · |t0|)` and whether it is at most `c`. Sizes of 0
/// (the term `⟨⟩`) count as 1.
pub fn check_bilinear(r: &RunRecord, t0_size: u64, c: f64) -> (bool, f64) {
    let ratio = r.total() as f64 / ((r.beta() + 1) as f64 * t0_size.max(1) as f64);
    (ratio <= c, ratio)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditFailure {
    /// Index of the offending transition in the run.
    pub index: usize,
    pub rule: Rule,
    pub before: u64,
    pub after: u64,
    pub expected: &'static str,
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "transition {} ({}) took the measure from {} to {}, expected {}",
            self.index, self.rule, self.before, self.after, self.expected
        )
    }
}

enum Clause {
    Beta,
    Decrease,
    Unchanged,
}

fn clause(machine: MachineKind, rule: Rule) -> Option<Clause> {
    use Rule::*;
    match (machine, rule) {
        (_, EBeta) => Some(Clause::Beta),
        (MachineKind::Source, USub | USea1 | USea2 | USea3 | USea4 | USea5 | ESea6) => Some(Clause::Decrease),
        (MachineKind::Source, ESea1 | ESea3 | EPi) => Some(Clause::Unchanged),
        (MachineKind::Int | MachineKind::Target, USubW | USubV | USea1 | USea2 | USea3 | USea4 | ESea6) => {
            Some(Clause::Decrease)
        }
        (MachineKind::Int | MachineKind::Target, ESea1 | ESea3 | ESea7 | EPi) => Some(Clause::Unchanged),
        _ => None,
    }
}

/// Checks every adjacent pair of the measure trace against the clause for
/// its transition. Returns all violations.
pub fn audit_measure(r: &RunRecord, machine: MachineKind, t0_size: u64) -> Result<(), Vec<AuditFailure>> {
    let trace = r.measure_trace.as_ref().expect("audit_measure needs a recorded measure trace");
    let mut failures = Vec::new();
    for (k, &rule) in r.transitions.iter().enumerate() {
        let (before, after) = (trace[k], trace[k + 1]);
        let (ok, expected) = match clause(machine, rule) {
            Some(Clause::Beta) => (after <= before + t0_size, "an increase of at most |t0|"),
            Some(Clause::Decrease) => (after < before, "a strict decrease"),
            Some(Clause::Unchanged) => (after == before, "no change"),
            None => (false, "a transition of this machine"),
        };
        if !ok {
            failures.push(AuditFailure { index: k, rule, before, after, expected });
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::run_instance;
    use crate::surface::parse;
    use std::collections::BTreeSet;

    fn run(text: &str, m: MachineKind) -> (RunRecord, u64) {
        let r = run_instance(&parse(text).unwrap(), m, 10_000, true).unwrap();
        (r.record, r.input_size)
    }

    /// Uses every transition except `◦sea4`, which needs `⟨⟩`.
    const ALL_KINDS: &str = "pi1 <(fun(x, y) -> <y, pi1 <x>>) <fun(a) -> a, fun(b) -> fun(c) -> b>, fun(d) -> d>";

    #[test]
    fn audits_pass_on_a_run_with_every_kind() {
        for m in MachineKind::ALL {
            let (r, size) = run(ALL_KINDS, m);
            let used: BTreeSet<Rule> = r.transitions.iter().copied().collect();
            let expected: BTreeSet<Rule> = Rule::ALL
                .into_iter()
                .filter(|&x| x != Rule::USea4 && clause(m, x).is_some())
                .filter(|&x| !(m != MachineKind::Source && x == Rule::USea5))
                .collect();
            assert_eq!(used, expected, "{m}");
            assert_eq!(audit_measure(&r, m, size), Ok(()), "{m}");
            assert!(check_transition_match(&r, m));
        }
    }

    #[test]
    fn empty_tuple_does_not_decrease_the_measure() {
        for m in MachineKind::ALL {
            let (r, size) = run("<>", m);
            assert_eq!(r.transitions, vec![Rule::USea4]);
            let failures = audit_measure(&r, m, size).unwrap_err();
            assert_eq!((failures[0].before, failures[0].after), (0, 0));
        }
    }

    #[test]
    fn bilinear_ratio_of_a_value_is_small() {
        let (r, size) = run("fun(x) -> x", MachineKind::Source);
        let (holds, ratio) = check_bilinear(&r, size, 1.0);
        assert!(holds);
        assert!(ratio > 0.0 && ratio <= 1.0);
    }

    #[test]
    fn clash_runs_satisfy_transition_match() {
        for text in ["pi2 <fun(y) -> y>", "(fun(x, y) -> x) <fun(z) -> z>", "<> <>"] {
            for m in MachineKind::ALL {
                assert!(check_transition_match(&run(text, m).0, m), "{text} {m}");
            }
        }
    }
}
