//! Source TAM: m-closures with flat local environments.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{run, Cost, Halt, Machine, Rule, RunRecord, Step};
use crate::calculi::{subst_source_map, ClashKind, Context, Frame};
use crate::error::{Error, Result};
use crate::syntax::{free_vars, size_source as size, SourceNode, SourceTerm, Var};

/// An evaluated m-closure: `•(t, E)` with `t` an abstraction or `⟨⟩`, or a
/// tuple of evaluated m-closures.
#[derive(Clone, Debug)]
pub enum MClosure {
    Plain { term: SourceTerm, env: LocalEnv },
    Tuple(Vec<Clo>),
}

pub type Clo = Arc<MClosure>;

impl MClosure {
    /// Items if this is an evaluated tuple; `•(⟨⟩, ε)` counts as the empty one.
    fn as_tuple(&self) -> Option<&[Clo]> {
        match self {
            MClosure::Tuple(items) => Some(items),
            MClosure::Plain { term, .. } => match term.node() {
                SourceNode::Tuple(items) if items.is_empty() => Some(&[]),
                _ => None,
            },
        }
    }
}

/// Flat environment. Stored innermost-last; lookup scans innermost-out.
#[derive(Clone, Debug, Default)]
pub struct LocalEnv(Vec<(Var, Clo)>);

impl LocalEnv {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The binding and the number of entries inspected.
    pub fn lookup(&self, x: &Var) -> Option<(Clo, u64)> {
        self.0.iter().rev().enumerate().find(|(_, (y, _))| y == x).map(|(i, (_, c))| (c.clone(), i as u64 + 1))
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.iter().any(|(y, _)| y == x)
    }

    /// Bindings innermost first.
    pub fn bindings(&self) -> impl Iterator<Item = &(Var, Clo)> {
        self.0.iter().rev()
    }
}

#[derive(Clone, Debug)]
pub enum SFocus {
    /// `◦(t, E)`
    Unev(SourceTerm, LocalEnv),
    /// `c`
    Ev(Clo),
}

#[derive(Clone, Debug)]
pub enum SSlot {
    Unev(SourceTerm),
    Ev(Clo),
    Hole,
}

#[derive(Clone, Debug)]
pub enum SEntry {
    Unev(SourceTerm, LocalEnv),
    Ev(Clo),
    Proj(usize),
    /// `⟨t̄, ↓, c̄⟩E`: slots before `hole` are pending, slots after it are done.
    Partial { items: Vec<SSlot>, hole: usize, env: LocalEnv },
}

/// `(focus | stack)`, stack top last.
#[derive(Clone, Debug)]
pub struct SState {
    pub focus: SFocus,
    pub stack: Vec<SEntry>,
}

pub fn init_stam(t: &SourceTerm) -> Result<SState> {
    if let Some(x) = free_vars(t).into_iter().next() {
        return Err(Error::Open(x));
    }
    Ok(SState { focus: SFocus::Unev(t.clone(), LocalEnv::default()), stack: Vec::new() })
}

fn ev(c: MClosure) -> SFocus {
    SFocus::Ev(Arc::new(c))
}

fn copy_cost(env: &LocalEnv, extra: u64) -> Cost {
    let n = env.len() as u64;
    Cost { elem_ops: 1 + n + extra, env_copy_ops: n, lookup_ops: 0 }
}

pub fn step_stam(s: SState) -> Result<Step<SState>> {
    let SState { focus, mut stack } = s;
    let (rule, cost, focus) = match focus {
        SFocus::Unev(t, env) => match t.node() {
            SourceNode::App(f, a) => {
                let cost = copy_cost(&env, 0);
                stack.push(SEntry::Unev(f.clone(), env.clone()));
                (Rule::USea1, cost, SFocus::Unev(a.clone(), env))
            }
            SourceNode::Proj(i, u) => {
                stack.push(SEntry::Proj(*i));
                (Rule::USea2, Cost::unit(), SFocus::Unev(u.clone(), env))
            }
            SourceNode::Tuple(items) if items.is_empty() => {
                (Rule::USea4, Cost::unit(), ev(MClosure::Plain { term: t.clone(), env: LocalEnv::default() }))
            }
            SourceNode::Tuple(items) => {
                let n = items.len();
                let cost = copy_cost(&env, n as u64);
                let mut slots: Vec<SSlot> = items.iter().map(|u| SSlot::Unev(u.clone())).collect();
                slots[n - 1] = SSlot::Hole;
                stack.push(SEntry::Partial { items: slots, hole: n - 1, env: env.clone() });
                (Rule::USea3, cost, SFocus::Unev(items[n - 1].clone(), env))
            }
            SourceNode::Abs(..) => (Rule::USea5, Cost::unit(), ev(MClosure::Plain { term: t.clone(), env })),
            SourceNode::Var(x) => {
                let (c, scanned) =
                    env.lookup(x).ok_or_else(|| Error::Invariant(format!("◦sub on {x} outside the environment")))?;
                (Rule::USub, Cost { elem_ops: 1 + scanned, env_copy_ops: 0, lookup_ops: scanned }, SFocus::Ev(c))
            }
        },
        SFocus::Ev(c) => {
            let Some(top) = stack.pop() else {
                return Ok(Step::Final { halt: Halt::Successful, state: SState { focus: SFocus::Ev(c), stack } });
            };
            match top {
                SEntry::Unev(t, env) => {
                    stack.push(SEntry::Ev(c));
                    (Rule::ESea1, Cost::unit(), SFocus::Unev(t, env))
                }
                SEntry::Partial { mut items, hole, env } => {
                    items[hole] = SSlot::Ev(c);
                    if hole == 0 {
                        let done = items
                            .into_iter()
                            .map(|s| match s {
                                SSlot::Ev(c) => Ok(c),
                                _ => Err(Error::Invariant("partial tuple completed with pending items".into())),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        (Rule::ESea3, Cost::unit(), ev(MClosure::Tuple(done)))
                    } else {
                        let next = std::mem::replace(&mut items[hole - 1], SSlot::Hole);
                        let SSlot::Unev(t) = next else {
                            return Err(Error::Invariant("partial tuple slot not pending".into()));
                        };
                        let cost = copy_cost(&env, 0);
                        let focus = SFocus::Unev(t, env.clone());
                        stack.push(SEntry::Partial { items, hole: hole - 1, env });
                        (Rule::ESea6, cost, focus)
                    }
                }
                SEntry::Proj(i) => match c.as_tuple() {
                    Some(items) if i >= 1 && i <= items.len() => (Rule::EPi, Cost::unit(), SFocus::Ev(items[i - 1].clone())),
                    _ => {
                        stack.push(SEntry::Proj(i));
                        let state = SState { focus: SFocus::Ev(c), stack };
                        return Ok(Step::Final { halt: Halt::Clash(ClashKind::Projection), state });
                    }
                },
                SEntry::Ev(arg) => {
                    let beta = match &*c {
                        MClosure::Plain { term, env } => match term.node() {
                            SourceNode::Abs(params, body) => match arg.as_tuple() {
                                Some(vals) if vals.len() == params.len() => {
                                    let mut env2 = env.clone();
                                    env2.0.extend(params.iter().cloned().zip(vals.iter().cloned()));
                                    let k = params.len() as u64;
                                    let cost = Cost { elem_ops: 1 + env.len() as u64 + k, ..Cost::default() };
                                    Ok((cost, SFocus::Unev(body.clone(), env2)))
                                }
                                _ => Err(ClashKind::AbstractionOrClosure),
                            },
                            _ => Err(ClashKind::Tuple),
                        },
                        MClosure::Tuple(_) => Err(ClashKind::Tuple),
                    };
                    match beta {
                        Ok((cost, focus)) => (Rule::EBeta, cost, focus),
                        Err(kind) => {
                            stack.push(SEntry::Ev(arg));
                            let state = SState { focus: SFocus::Ev(c), stack };
                            return Ok(Step::Final { halt: Halt::Clash(kind), state });
                        }
                    }
                }
            }
        }
    };
    Ok(Step::Transition { rule, cost, next: SState { focus, stack } })
}

impl Machine for SState {
    fn step(self) -> Result<Step<SState>> {
        step_stam(self)
    }

    fn measure(&self) -> u64 {
        measure_stam(self)
    }
}

/// Overhead measure: unevaluated code counts its size, evaluated data counts 0.
pub fn measure_stam(s: &SState) -> u64 {
    let focus = match &s.focus {
        SFocus::Unev(t, _) => size(t),
        SFocus::Ev(_) => 0,
    };
    focus
        + s.stack
            .iter()
            .map(|e| match e {
                SEntry::Unev(t, _) => size(t),
                SEntry::Ev(_) | SEntry::Proj(_) => 0,
                SEntry::Partial { items, hole, .. } => {
                    items[..*hole].iter().map(|s| if let SSlot::Unev(t) = s { 1 + size(t) } else { 0 }).sum()
                }
            })
            .sum::<u64>()
}

pub fn run_stam(t: &SourceTerm, fuel: u64, record_measure: bool) -> Result<RunRecord> {
    Ok(run(init_stam(t)?, fuel, record_measure)?.0)
}

/// Read-back with memoization on shared m-closures.
#[derive(Default)]
pub struct Readback {
    memo: HashMap<*const MClosure, SourceTerm>,
}

impl Readback {
    pub fn new() -> Readback {
        Readback::default()
    }

    pub fn closure(&mut self, c: &Clo) -> SourceTerm {
        if let Some(t) = self.memo.get(&Arc::as_ptr(c)) {
            return t.clone();
        }
        let t = match &**c {
            MClosure::Plain { term, env } => self.code(term, env),
            MClosure::Tuple(items) => SourceTerm::tuple(items.iter().map(|c| self.closure(c)).collect()),
        };
        self.memo.insert(Arc::as_ptr(c), t.clone());
        t
    }

    /// `⌊(t, E)⌋`: substitutes the environment, innermost binding first.
    pub fn code(&mut self, t: &SourceTerm, env: &LocalEnv) -> SourceTerm {
        if env.is_empty() {
            return t.clone();
        }
        let fv = free_vars(t);
        let mut map: Vec<(Var, SourceTerm)> = Vec::new();
        for (x, c) in env.bindings() {
            if fv.contains(x) && !map.iter().any(|(y, _)| y == x) {
                map.push((x.clone(), self.closure(c)));
            }
        }
        subst_source_map(t, &map)
    }

    pub fn stack(&mut self, stack: &[SEntry]) -> Context<SourceTerm> {
        let frames = stack
            .iter()
            .map(|e| match e {
                SEntry::Unev(t, env) => Frame::Arg(self.code(t, env)),
                SEntry::Ev(c) => Frame::Fun(self.closure(c)),
                SEntry::Proj(i) => Frame::Proj(*i),
                SEntry::Partial { items, hole, env } => {
                    let before = items[..*hole]
                        .iter()
                        .map(|s| match s {
                            SSlot::Unev(t) => self.code(t, env),
                            _ => unreachable!("pending slots are unevaluated"),
                        })
                        .collect();
                    let after = items[hole + 1..]
                        .iter()
                        .map(|s| match s {
                            SSlot::Ev(c) => self.closure(c),
                            _ => unreachable!("done slots are evaluated"),
                        })
                        .collect();
                    Frame::Tuple { before, after }
                }
            })
            .collect();
        Context { frames }
    }

    pub fn state(&mut self, s: &SState) -> SourceTerm {
        let focus = match &s.focus {
            SFocus::Unev(t, env) => self.code(t, env),
            SFocus::Ev(c) => self.closure(c),
        };
        self.stack(&s.stack).plug(focus)
    }
}

pub fn readback_stam(s: &SState) -> SourceTerm {
    Readback::new().state(s)
}

/// All subterm nodes of `t`, by identity.
pub fn subterm_set(t: &SourceTerm) -> HashSet<*const SourceNode> {
    let mut out = HashSet::new();
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        if !out.insert(u.as_ptr()) {
            continue;
        }
        match u.node() {
            SourceNode::Var(_) => {}
            SourceNode::Abs(_, b) => todo.push(b.clone()),
            SourceNode::App(f, a) => {
                todo.push(f.clone());
                todo.push(a.clone());
            }
            SourceNode::Proj(_, b) => todo.push(b.clone()),
            SourceNode::Tuple(items) => todo.extend(items.iter().cloned()),
        }
    }
    out
}

/// m-closure and sub-term invariants.
pub fn check_invariants(s: &SState, subterms: &HashSet<*const SourceNode>) -> std::result::Result<(), String> {
    let mut seen = HashSet::new();
    let code = |t: &SourceTerm, env: &LocalEnv| -> std::result::Result<(), String> {
        if !subterms.contains(&t.as_ptr()) {
            return Err(format!("{t} is not a subterm of the initial term"));
        }
        match free_vars(t).into_iter().find(|x| !env.contains(x)) {
            Some(x) => Err(format!("free {x} of {t} not bound by its environment")),
            None => Ok(()),
        }
    };
    fn clo(
        c: &Clo,
        seen: &mut HashSet<*const MClosure>,
        code: &dyn Fn(&SourceTerm, &LocalEnv) -> std::result::Result<(), String>,
    ) -> std::result::Result<(), String> {
        if !seen.insert(Arc::as_ptr(c)) {
            return Ok(());
        }
        match &**c {
            MClosure::Plain { term, env } => {
                match term.node() {
                    SourceNode::Abs(..) => {}
                    SourceNode::Tuple(items) if items.is_empty() => {}
                    _ => return Err(format!("evaluated m-closure holds {term}")),
                }
                code(term, env)?;
                env.0.iter().try_for_each(|(_, c)| clo(c, seen, code))
            }
            MClosure::Tuple(items) => items.iter().try_for_each(|c| clo(c, seen, code)),
        }
    }
    let env_ok = |env: &LocalEnv, seen: &mut HashSet<*const MClosure>| env.0.iter().try_for_each(|(_, c)| clo(c, seen, &code));
    match &s.focus {
        SFocus::Unev(t, env) => {
            code(t, env)?;
            env_ok(env, &mut seen)?;
        }
        SFocus::Ev(c) => clo(c, &mut seen, &code)?,
    }
    for e in &s.stack {
        match e {
            SEntry::Unev(t, env) => {
                code(t, env)?;
                env_ok(env, &mut seen)?;
            }
            SEntry::Ev(c) => clo(c, &mut seen, &code)?,
            SEntry::Proj(_) => {}
            SEntry::Partial { items, hole, env } => {
                for (k, slot) in items.iter().enumerate() {
                    match (slot, k.cmp(hole)) {
                        (SSlot::Unev(t), std::cmp::Ordering::Less) => code(t, env)?,
                        (SSlot::Hole, std::cmp::Ordering::Equal) => {}
                        (SSlot::Ev(c), std::cmp::Ordering::Greater) => clo(c, &mut seen, &code)?,
                        _ => return Err("partial tuple slots out of order".into()),
                    }
                }
                env_ok(env, &mut seen)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::RunFinal;
    use crate::surface::parse;

    fn s(text: &str) -> SourceTerm {
        parse(text).unwrap()
    }

    fn transition(st: SState) -> (Rule, SState) {
        match step_stam(st).unwrap() {
            Step::Transition { rule, next, .. } => (rule, next),
            Step::Final { .. } => panic!("final"),
        }
    }

    fn id_clo() -> Clo {
        Arc::new(MClosure::Plain { term: SourceTerm::identity(), env: LocalEnv::default() })
    }

    #[test]
    fn initial_state() {
        let t = s("(fun(x) -> x) <fun(y) -> y>");
        let st = init_stam(&t).unwrap();
        assert!(st.stack.is_empty());
        assert_eq!(readback_stam(&st), t);
        assert_eq!(measure_stam(&st), size(&t));
        assert!(init_stam(&s("x")).is_err());
    }

    #[test]
    fn application_pushes_the_function() {
        let env = LocalEnv(vec![(Var::from("z"), id_clo())]);
        let t = s("(fun(x) -> x) z");
        let st = SState { focus: SFocus::Unev(t.clone(), env), stack: vec![] };
        let before = measure_stam(&st);
        let (rule, next) = transition(st);
        assert_eq!(rule, Rule::USea1);
        assert!(matches!(&next.focus, SFocus::Unev(a, e) if *a == s("z") && e.len() == 1));
        assert!(matches!(&next.stack[..], [SEntry::Unev(f, _)] if *f == s("fun(x) -> x")));
        assert!(measure_stam(&next) < before);
    }

    #[test]
    fn empty_tuple_drops_the_environment() {
        let env = LocalEnv(vec![(Var::from("z"), id_clo())]);
        let st = SState { focus: SFocus::Unev(s("<>"), env), stack: vec![] };
        let (rule, next) = transition(st);
        assert_eq!(rule, Rule::USea4);
        assert!(matches!(&next.focus, SFocus::Ev(c) if matches!(&**c, MClosure::Plain { env, .. } if env.is_empty())));
    }

    #[test]
    fn read_back() {
        let st = SState { focus: SFocus::Ev(id_clo()), stack: vec![] };
        assert_eq!(readback_stam(&st), SourceTerm::identity());
        assert_eq!(measure_stam(&st), 0);
        let pair = Arc::new(MClosure::Tuple(vec![id_clo(), id_clo()]));
        assert_eq!(Readback::new().closure(&pair), s("<fun(z) -> z, fun(z) -> z>"));
        let env = LocalEnv(vec![(Var::from("x"), Arc::new(MClosure::Plain { term: s("fun(y) -> y"), env: LocalEnv::default() }))]);
        let st = SState { focus: SFocus::Unev(s("x"), env), stack: vec![] };
        assert_eq!(readback_stam(&st), s("fun(y) -> y"));
    }

    #[test]
    fn complete_runs() {
        let (r, st) = run(init_stam(&s("(fun(x) -> x) <fun(y) -> y>")).unwrap(), 100, false).unwrap();
        assert_eq!(r.count(Rule::EBeta), 1);
        assert_eq!(r.final_, RunFinal::Successful);
        assert_eq!(readback_stam(&st), s("fun(y) -> y"));

        let r = run_stam(&s("fun(x) -> x"), 100, false).unwrap();
        assert_eq!(r.transitions, vec![Rule::USea5]);
        assert_eq!(r.final_, RunFinal::Successful);

        let r = run_stam(&s("pi2 <fun(y) -> y>"), 100, false).unwrap();
        assert_eq!(r.final_, RunFinal::Clash(ClashKind::Projection));
    }

    #[test]
    fn lookups_scan_innermost_first() {
        let env = LocalEnv(vec![(Var::from("a"), id_clo()), (Var::from("b"), id_clo())]);
        assert_eq!(env.lookup(&Var::from("b")).unwrap().1, 1);
        assert_eq!(env.lookup(&Var::from("a")).unwrap().1, 2);
        assert!(env.lookup(&Var::from("c")).is_none());
    }
}
