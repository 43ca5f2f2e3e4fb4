//! Small-step reference interpreters for the three calculi.

mod context;
mod int;
mod source;
mod target;

use std::fmt;

pub use context::{decompose, Context, Decomposition, Frame};
pub use int::{step_int, subst_int, subst_int_map};
pub use source::{step_source, subst_source, subst_source_map};
pub use target::{psubst_target, step_target};
pub(crate) use target::psubst_unchecked;

use crate::syntax::{Blocker, IntTerm, SourceTerm, TargetTerm, TermOps};

pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepLabel {
    BetaV,
    Pi,
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepLabel::BetaV => "betav",
            StepLabel::Pi => "pi",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClashKind {
    Projection,
    AbstractionOrClosure,
    Tuple,
}

impl fmt::Display for ClashKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClashKind::Projection => "projection",
            ClashKind::AbstractionOrClosure => "abstraction",
            ClashKind::Tuple => "tuple",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome<T> {
    Stepped { label: StepLabel, result: T },
    Value,
    /// `path` lists child indices from the root to the clashing redex.
    Clash { kind: ClashKind, path: Vec<usize> },
    OpenStuck { blocker: Blocker, path: Vec<usize> },
}

/// Why a redex at the root does not contract.
pub(crate) enum Irreducible {
    Clash(ClashKind),
    Open(Blocker),
}

pub(crate) fn step_with<T: TermOps>(
    t: &T,
    contract: impl Fn(&T) -> Result<(StepLabel, T), Irreducible>,
) -> StepOutcome<T> {
    match decompose(t) {
        Decomposition::Value => StepOutcome::Value,
        Decomposition::Stuck(ctx, blocker) => StepOutcome::OpenStuck { blocker, path: ctx.path() },
        Decomposition::Redex(ctx, r) => match contract(&r) {
            Ok((label, r2)) => StepOutcome::Stepped { label, result: ctx.plug(r2) },
            Err(Irreducible::Clash(kind)) => StepOutcome::Clash { kind, path: ctx.path() },
            Err(Irreducible::Open(blocker)) => StepOutcome::OpenStuck { blocker, path: ctx.path() },
        },
    }
}

/// How a normalization run ended.
#[derive(Clone, Debug, PartialEq)]
pub enum Terminal {
    Value,
    Clash { kind: ClashKind, path: Vec<usize> },
    OpenStuck { blocker: Blocker, path: Vec<usize> },
    FuelExhausted,
}

/// Coarse classification used to compare runs across calculi and machines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TerminalClass {
    Value,
    Clash(ClashKind),
    OpenStuck,
    FuelExhausted,
}

impl Terminal {
    pub fn class(&self) -> TerminalClass {
        match self {
            Terminal::Value => TerminalClass::Value,
            Terminal::Clash { kind, .. } => TerminalClass::Clash(*kind),
            Terminal::OpenStuck { .. } => TerminalClass::OpenStuck,
            Terminal::FuelExhausted => TerminalClass::FuelExhausted,
        }
    }
}

impl fmt::Display for TerminalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalClass::Value => f.write_str("value"),
            TerminalClass::Clash(k) => write!(f, "clash({k})"),
            TerminalClass::OpenStuck => f.write_str("open-stuck"),
            TerminalClass::FuelExhausted => f.write_str("fuel-exhausted"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Normalization<T> {
    pub labels: Vec<StepLabel>,
    pub terminal: Terminal,
    /// The last term reached.
    pub term: T,
}

/// Iterates `step` at most `fuel` times. With `trace`, every intermediate
/// term (including the first) is passed to it.
pub fn normalize_with<T: Clone>(
    t: &T,
    fuel: u64,
    step: impl Fn(&T) -> StepOutcome<T>,
    mut trace: impl FnMut(&T),
) -> Normalization<T> {
    let mut cur = t.clone();
    let mut labels = Vec::new();
    trace(&cur);
    loop {
        if labels.len() as u64 >= fuel {
            // Fuel counts steps; check whether the term is already terminal.
            let terminal = match step(&cur) {
                StepOutcome::Stepped { .. } => Terminal::FuelExhausted,
                StepOutcome::Value => Terminal::Value,
                StepOutcome::Clash { kind, path } => Terminal::Clash { kind, path },
                StepOutcome::OpenStuck { blocker, path } => Terminal::OpenStuck { blocker, path },
            };
            return Normalization { labels, terminal, term: cur };
        }
        match step(&cur) {
            StepOutcome::Stepped { label, result } => {
                labels.push(label);
                cur = result;
                trace(&cur);
            }
            StepOutcome::Value => return Normalization { labels, terminal: Terminal::Value, term: cur },
            StepOutcome::Clash { kind, path } => {
                return Normalization { labels, terminal: Terminal::Clash { kind, path }, term: cur }
            }
            StepOutcome::OpenStuck { blocker, path } => {
                return Normalization { labels, terminal: Terminal::OpenStuck { blocker, path }, term: cur }
            }
        }
    }
}

pub fn normalize_source(t: &SourceTerm, fuel: u64) -> Normalization<SourceTerm> {
    normalize_with(t, fuel, step_source, |_| {})
}

pub fn normalize_int(t: &IntTerm, fuel: u64) -> Normalization<IntTerm> {
    normalize_with(t, fuel, step_int, |_| {})
}

pub fn normalize_target(t: &TargetTerm, fuel: u64) -> Normalization<TargetTerm> {
    normalize_with(t, fuel, step_target, |_| {})
}
