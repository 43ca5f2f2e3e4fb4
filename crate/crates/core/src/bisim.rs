//! Differential check of the three calculi and the three machines on one term.

use std::fmt;

use crate::calculi::{normalize_with, step_int, step_source, step_target, StepLabel, Terminal, TerminalClass};
use crate::machine::int::{init_itam, IntFlavor};
use crate::machine::source::{self as stam, init_stam, SState};
use crate::machine::target::{init_ttam, TargetFlavor};
use crate::machine::{self, Halt, Machine, MachineKind, State, Step};
use crate::syntax::{alpha_eq, alpha_eq_source, IntTerm, SourceTerm, TargetTerm};
use crate::transforms::{closure_convert, eliminate_names, naming, unwrap, wrap, FreshSupply};

/// Cap on machine transitions per run, far above the bilinear overhead of
/// any run the calculi finish within their fuel.
const MACHINE_CAP: u64 = 50_000_000;

/// Principal transition counts of one execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Principal {
    pub execution: String,
    pub beta: u64,
    pub pi: u64,
}

#[derive(Clone, Debug)]
pub struct BisimReport {
    pub labels: Vec<StepLabel>,
    pub terminal: TerminalClass,
    /// Total transitions of the source, intermediate and target machines.
    pub machine_transitions: [u64; 3],
    /// Calculi first, then machines.
    pub principal: Vec<Principal>,
}

/// First failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub check: String,
    pub step: usize,
    pub detail: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at step {}: {}", self.check, self.step, self.detail)
    }
}

impl std::error::Error for Divergence {}

fn diverge(check: impl Into<String>, step: usize, detail: impl Into<String>) -> Divergence {
    Divergence { check: check.into(), step, detail: detail.into() }
}

fn trajectory<T: Clone>(
    t: &T,
    fuel: u64,
    step: impl Fn(&T) -> crate::calculi::StepOutcome<T>,
) -> (Vec<T>, Vec<StepLabel>, Terminal) {
    let mut terms = Vec::new();
    let n = normalize_with(t, fuel, step, |u| terms.push(u.clone()));
    (terms, n.labels, n.terminal)
}

fn count(labels: &[StepLabel], l: StepLabel) -> u64 {
    labels.iter().filter(|&&x| x == l).count() as u64
}

fn halt_matches(halt: Halt, terminal: TerminalClass) -> bool {
    match (halt, terminal) {
        (Halt::Successful, TerminalClass::Value) => true,
        (Halt::Clash(k), TerminalClass::Clash(j)) => k == j,
        _ => false,
    }
}

struct Trajectory<'a, T> {
    terms: &'a [T],
    labels: &'a [StepLabel],
    terminal: TerminalClass,
}

struct MachineRun {
    transitions: u64,
    labels: Vec<StepLabel>,
}

/// Steps a machine, reading back every state against the calculus trajectory.
fn follow<M: Machine, T: fmt::Debug>(
    kind: MachineKind,
    init: M,
    traj: &Trajectory<'_, T>,
    readback: impl Fn(&M) -> T,
    same: impl Fn(&T, &T) -> bool,
    invariants: impl Fn(&M) -> Result<(), String>,
) -> Result<MachineRun, Divergence> {
    let check = |what: &str| format!("{kind} machine: {what}");
    let mut state = init;
    let mut k = 0usize;
    let mut labels = Vec::new();
    let mut transitions = 0u64;
    invariants(&state).map_err(|e| diverge(check("invariant"), 0, e))?;
    let rb = readback(&state);
    if !same(&rb, &traj.terms[0]) {
        return Err(diverge(check("initial readback"), 0, format!("{rb:?} vs {:?}", traj.terms[0])));
    }
    loop {
        if transitions >= MACHINE_CAP {
            return Err(diverge(check("transition cap"), k, format!("{transitions} transitions")));
        }
        let step = state.step().map_err(|e| diverge(check("step error"), k, e.to_string()))?;
        match step {
            Step::Transition { rule, next, .. } => {
                transitions += 1;
                state = next;
                if let Some(l) = rule.label() {
                    if k + 1 >= traj.terms.len() {
                        // The calculus ran out of fuel here.
                        if traj.terminal != TerminalClass::FuelExhausted {
                            return Err(diverge(check("extra principal transition"), k, rule.name()));
                        }
                        return Ok(MachineRun { transitions, labels });
                    }
                    if traj.labels[k] != l {
                        return Err(diverge(check("label"), k, format!("{} vs {}", l, traj.labels[k])));
                    }
                    labels.push(l);
                    k += 1;
                }
                invariants(&state).map_err(|e| diverge(check("invariant"), k, format!("after {}: {e}", rule.name())))?;
                let rb = readback(&state);
                if !same(&rb, &traj.terms[k]) {
                    return Err(diverge(
                        check("readback"),
                        k,
                        format!("after {}: {rb:?} vs {:?}", rule.name(), traj.terms[k]),
                    ));
                }
            }
            Step::Final { halt, state } => {
                let rb = readback(&state);
                if k + 1 != traj.terms.len() || !same(&rb, &traj.terms[k]) {
                    return Err(diverge(check("final state"), k, format!("{rb:?} vs {:?}", traj.terms.last())));
                }
                if !halt_matches(halt, traj.terminal) {
                    return Err(diverge(check("halt"), k, format!("{halt:?} vs {}", traj.terminal)));
                }
                return Ok(MachineRun { transitions, labels });
            }
        }
    }
}

/// Runs the three calculi and the three machines on `u` and checks that they agree.
pub fn bisim_check(u: &SourceTerm, fuel: u64) -> Result<BisimReport, Divergence> {
    if !u.is_closed() {
        return Err(diverge("precondition", 0, format!("{u} is not closed")));
    }
    let i0 = wrap(u);
    let t0 = closure_convert(u).map_err(|e| diverge("closure conversion", 0, e.to_string()))?;

    let (ss, sl, st) = trajectory(u, fuel, step_source);
    let (is, il, it) = trajectory(&i0, fuel, step_int);
    let (ts, tl, tt) = trajectory(&t0, fuel, step_target);

    for (name, term) in [("source", &st), ("intermediate", &it), ("target", &tt)] {
        if term.class() == TerminalClass::OpenStuck {
            return Err(diverge(format!("{name} calculus open-stuck"), 0, format!("{term:?}")));
        }
    }
    if sl != il || sl != tl {
        let k = sl.iter().zip(&il).zip(&tl).take_while(|((a, b), c)| a == b && b == c).count();
        return Err(diverge("label sequences", k, format!("{sl:?} / {il:?} / {tl:?}")));
    }
    if st.class() != it.class() || st.class() != tt.class() {
        return Err(diverge("terminal class", sl.len(), format!("{} / {} / {}", st.class(), it.class(), tt.class())));
    }

    for k in 0..ss.len() {
        let back = unwrap(&is[k]).map_err(|e| diverge("unwrap", k, e.to_string()))?;
        if back != ss[k] {
            return Err(diverge("unwrap commutes", k, format!("{back} vs {}", ss[k])));
        }
        let elim = eliminate_names(&is[k], &[], &[]).map_err(|e| diverge("name elimination", k, e.to_string()))?;
        if elim != ts[k] {
            return Err(diverge("name elimination commutes", k, format!("{elim} vs {}", ts[k])));
        }
        let named = naming(&ts[k], &[], &[], &mut FreshSupply::new()).map_err(|e| diverge("naming", k, e.to_string()))?;
        if !alpha_eq(&named, &is[k]) {
            return Err(diverge("naming commutes", k, format!("{named} vs {}", is[k])));
        }
    }

    let terminal = st.class();
    let s_run = {
        let init = init_stam(u).map_err(|e| diverge("source machine: init", 0, e.to_string()))?;
        let subterms = stam::subterm_set(u);
        let traj = Trajectory { terms: &ss, labels: &sl, terminal };
        follow(
            MachineKind::Source,
            init,
            &traj,
            |s: &SState| stam::readback_stam(s),
            |a: &SourceTerm, b: &SourceTerm| a == b || alpha_eq_source(a, b),
            |s: &SState| stam::check_invariants(s, &subterms),
        )?
    };
    let i_run = {
        let init = init_itam(&i0).map_err(|e| diverge("int machine: init", 0, e.to_string()))?;
        let subterms = machine::subterm_set::<IntFlavor>(&i0);
        let traj = Trajectory { terms: &is, labels: &il, terminal };
        follow(
            MachineKind::Int,
            init,
            &traj,
            |s: &State<IntFlavor>| machine::readback(s),
            |a: &IntTerm, b: &IntTerm| a == b || alpha_eq(a, b),
            |s: &State<IntFlavor>| machine::check_invariants(s, &subterms),
        )?
    };
    let t_run = {
        let init = init_ttam(&t0).map_err(|e| diverge("target machine: init", 0, e.to_string()))?;
        let subterms = machine::subterm_set::<TargetFlavor>(&t0);
        let traj = Trajectory { terms: &ts, labels: &tl, terminal };
        follow(
            MachineKind::Target,
            init,
            &traj,
            |s: &State<TargetFlavor>| machine::readback(s),
            |a: &TargetTerm, b: &TargetTerm| a == b,
            |s: &State<TargetFlavor>| machine::check_invariants(s, &subterms),
        )?
    };

    let mut principal = Vec::new();
    for (name, labels) in [("source calculus", &sl), ("intermediate calculus", &il), ("target calculus", &tl)] {
        principal.push(Principal {
            execution: name.to_string(),
            beta: count(labels, StepLabel::BetaV),
            pi: count(labels, StepLabel::Pi),
        });
    }
    for (kind, run) in [(MachineKind::Source, &s_run), (MachineKind::Int, &i_run), (MachineKind::Target, &t_run)] {
        principal.push(Principal {
            execution: format!("{kind} machine"),
            beta: count(&run.labels, StepLabel::BetaV),
            pi: count(&run.labels, StepLabel::Pi),
        });
    }
    if let Some(p) = principal.iter().find(|p| p.beta != principal[0].beta || p.pi != principal[0].pi) {
        return Err(diverge("principal matching", sl.len(), format!("{p:?} vs {:?}", principal[0])));
    }

    Ok(BisimReport {
        labels: sl,
        terminal,
        machine_transitions: [s_run.transitions, i_run.transitions, t_run.transitions],
        principal,
    })
}
