//! The three tupled abstract machines.

pub mod int;
pub mod source;
mod stackable;
pub mod target;

use std::collections::BTreeMap;
use std::fmt;

use crate::calculi::{ClashKind, StepLabel, TerminalClass};
use crate::error::Result;

pub use stackable::{check_invariants, readback, subterm_set, Entry, Focus, Partial, Readback, Slot, State, Value};

/// Transition names across the three machines. `U` rules fire on an
/// unevaluated focus (◦), `E` rules on an evaluated one (•).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    USea1,
    USea2,
    USea3,
    USea4,
    USea5,
    USub,
    USubW,
    USubV,
    ESea1,
    ESea3,
    ESea6,
    ESea7,
    EBeta,
    EPi,
}

impl Rule {
    pub const ALL: [Rule; 14] = [
        Rule::USea1,
        Rule::USea2,
        Rule::USea3,
        Rule::USea4,
        Rule::USea5,
        Rule::USub,
        Rule::USubW,
        Rule::USubV,
        Rule::ESea1,
        Rule::ESea3,
        Rule::ESea6,
        Rule::ESea7,
        Rule::EBeta,
        Rule::EPi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::USea1 => "◦sea1",
            Rule::USea2 => "◦sea2",
            Rule::USea3 => "◦sea3",
            Rule::USea4 => "◦sea4",
            Rule::USea5 => "◦sea5",
            Rule::USub => "◦sub",
            Rule::USubW => "◦subw",
            Rule::USubV => "◦subv",
            Rule::ESea1 => "•sea1",
            Rule::ESea3 => "•sea3",
            Rule::ESea6 => "•sea6",
            Rule::ESea7 => "•sea7",
            Rule::EBeta => "•βv",
            Rule::EPi => "•π",
        }
    }

    /// Principal transitions carry the label of the calculus step they implement.
    pub fn label(self) -> Option<StepLabel> {
        match self {
            Rule::EBeta => Some(StepLabel::BetaV),
            Rule::EPi => Some(StepLabel::Pi),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Instrumented cost of one transition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cost {
    pub elem_ops: u64,
    /// Bindings copied when an environment is duplicated.
    pub env_copy_ops: u64,
    /// Bindings inspected by variable lookups.
    pub lookup_ops: u64,
}

impl Cost {
    pub fn unit() -> Cost {
        Cost { elem_ops: 1, env_copy_ops: 0, lookup_ops: 0 }
    }

    fn add(&mut self, other: Cost) {
        self.elem_ops += other.elem_ops;
        self.env_copy_ops += other.env_copy_ops;
        self.lookup_ops += other.lookup_ops;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MachineKind {
    Source,
    Int,
    Target,
}

impl MachineKind {
    pub const ALL: [MachineKind; 3] = [MachineKind::Source, MachineKind::Int, MachineKind::Target];

    pub fn name(self) -> &'static str {
        match self {
            MachineKind::Source => "source",
            MachineKind::Int => "int",
            MachineKind::Target => "target",
        }
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MachineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<MachineKind, String> {
        MachineKind::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown machine {s}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Halt {
    Successful,
    Clash(ClashKind),
}

#[derive(Clone, Debug)]
pub enum Step<S> {
    Transition { rule: Rule, cost: Cost, next: S },
    Final { halt: Halt, state: S },
}

pub trait Machine: Clone {
    fn step(self) -> Result<Step<Self>>;
    fn measure(&self) -> u64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunFinal {
    Successful,
    Clash(ClashKind),
    FuelExhausted,
}

impl RunFinal {
    pub fn class(self) -> TerminalClass {
        match self {
            RunFinal::Successful => TerminalClass::Value,
            RunFinal::Clash(k) => TerminalClass::Clash(k),
            RunFinal::FuelExhausted => TerminalClass::FuelExhausted,
        }
    }
}

/// A complete machine run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub transitions: Vec<Rule>,
    pub counts: BTreeMap<Rule, u64>,
    pub costs: BTreeMap<Rule, Cost>,
    /// Measure of every state, initial state included.
    pub measure_trace: Option<Vec<u64>>,
    pub final_: RunFinal,
}

impl RunRecord {
    pub fn count(&self, r: Rule) -> u64 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.transitions.len() as u64
    }

    pub fn labels(&self) -> Vec<StepLabel> {
        self.transitions.iter().filter_map(|r| r.label()).collect()
    }

    pub fn beta(&self) -> u64 {
        self.count(Rule::EBeta)
    }

    pub fn pi(&self) -> u64 {
        self.count(Rule::EPi)
    }

    pub fn cost(&self) -> Cost {
        let mut c = Cost::default();
        self.costs.values().for_each(|x| c.add(*x));
        c
    }

    pub fn cost_of(&self, r: Rule) -> Cost {
        self.costs.get(&r).copied().unwrap_or_default()
    }
}

/// Runs a machine for at most `fuel` transitions.
pub fn run<M: Machine>(init: M, fuel: u64, record_measure: bool) -> Result<(RunRecord, M)> {
    let mut rec = RunRecord {
        transitions: Vec::new(),
        counts: BTreeMap::new(),
        costs: BTreeMap::new(),
        measure_trace: record_measure.then(Vec::new),
        final_: RunFinal::FuelExhausted,
    };
    let mut state = init;
    if let Some(tr) = rec.measure_trace.as_mut() {
        tr.push(state.measure());
    }
    loop {
        if rec.transitions.len() as u64 >= fuel {
            // Out of fuel, unless the state is already final.
            if let Step::Final { halt, state } = state.clone().step()? {
                rec.final_ = halt.into();
                return Ok((rec, state));
            }
            return Ok((rec, state));
        }
        match state.step()? {
            Step::Transition { rule, cost, next } => {
                rec.transitions.push(rule);
                *rec.counts.entry(rule).or_insert(0) += 1;
                rec.costs.entry(rule).or_default().add(cost);
                if let Some(tr) = rec.measure_trace.as_mut() {
                    tr.push(next.measure());
                }
                state = next;
            }
            Step::Final { halt, state } => {
                rec.final_ = halt.into();
                return Ok((rec, state));
            }
        }
    }
}

impl From<Halt> for RunFinal {
    fn from(h: Halt) -> RunFinal {
        match h {
            Halt::Successful => RunFinal::Successful,
            Halt::Clash(k) => RunFinal::Clash(k),
        }
    }
}
