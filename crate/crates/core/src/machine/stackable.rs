//! Machinery shared by the Int and Target TAMs: a single stackable
//! environment, a constructor stack, and an activation stack.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::{Cost, Halt, Machine, Rule, Step};
use crate::calculi::{ClashKind, Context, Frame};
use crate::error::{Error, Result};
use crate::syntax::TermOps;

/// What the focus code looks like to the machine.
pub enum Code<'a, F: Flavor> {
    App(&'a F::Term, &'a F::Term),
    Proj(usize, &'a F::Term),
    Tuple(&'a [F::Term]),
    Var(F::Key),
    /// A closure whose bag lists variables.
    VarClosure(Vec<F::Key>),
    NotPrime,
}

/// The per-calculus part of a stackable-environment machine.
pub trait Flavor: Sized + Clone + fmt::Debug + 'static {
    type Term: TermOps;
    type Key: Clone + fmt::Debug;
    type Env: Clone + fmt::Debug + Default;
    /// Read-back of an environment, ready to substitute.
    type EnvTerms;

    fn classify(t: &Self::Term) -> Code<'_, Self>;
    /// Value bound to `k` and the number of elementary lookup steps.
    fn lookup(env: &Self::Env, k: &Self::Key) -> Option<(Val<Self>, u64)>;
    /// Body and new environment if the arities fit, plus construction cost.
    fn enter(closure: &Self::Term, bag: &Arc<[Val<Self>]>, args: &Arc<[Val<Self>]>) -> Option<(Self::Term, Self::Env, u64)>;
    /// Read-back of an evaluated closure given its bag's read-back.
    fn close(closure: &Self::Term, bag: Vec<Self::Term>) -> Self::Term;
    fn read_env(env: &Self::Env, rb: &mut dyn FnMut(&Val<Self>) -> Self::Term) -> Self::EnvTerms;
    fn apply(t: &Self::Term, env: &Self::EnvTerms) -> Self::Term;
    fn size(t: &Self::Term) -> u64;
    fn ptr(t: &Self::Term) -> usize;
    fn is_prime(t: &Self::Term) -> bool;
    fn is_closed(t: &Self::Term) -> bool;
    fn covered(t: &Self::Term, env: &Self::Env) -> bool;
    fn env_values(env: &Self::Env) -> Vec<Val<Self>>;
    fn subterms(t: &Self::Term) -> Vec<Self::Term>;
}

/// Evaluated value `•v`. Closures keep the original closure code.
#[derive(Clone, Debug)]
pub enum Value<F: Flavor> {
    Closure { code: F::Term, bag: Arc<[Val<F>]> },
    Tuple(Arc<[Val<F>]>),
}

pub type Val<F> = Arc<Value<F>>;

#[derive(Clone, Debug)]
pub enum Focus<F: Flavor> {
    Unev(F::Term),
    Ev(Val<F>),
}

#[derive(Clone, Debug)]
pub enum Slot<F: Flavor> {
    Unev(F::Term),
    Ev(Val<F>),
    Hole,
}

/// `⟨◦t̄, ↓, •v̄⟩` as the full item sequence with a hole index.
#[derive(Clone, Debug)]
pub struct Partial<F: Flavor> {
    pub slots: Vec<Slot<F>>,
    pub hole: usize,
}

#[derive(Clone, Debug)]
pub enum Entry<F: Flavor> {
    Unev(F::Term),
    Ev(Val<F>),
    Proj(usize),
    Partial(Partial<F>),
}

/// `(focus | S | E | A)`; stack tops are last.
#[derive(Clone, Debug)]
pub struct State<F: Flavor> {
    pub focus: Focus<F>,
    pub cstack: Vec<Entry<F>>,
    pub env: F::Env,
    pub astack: Vec<(Vec<Entry<F>>, F::Env)>,
}

impl<F: Flavor> State<F> {
    pub fn initial(t: &F::Term) -> State<F> {
        State { focus: Focus::Unev(t.clone()), cstack: Vec::new(), env: F::Env::default(), astack: Vec::new() }
    }
}

fn halt<F: Flavor>(h: Halt, focus: Focus<F>, mut cstack: Vec<Entry<F>>, top: Entry<F>, env: F::Env, astack: Vec<(Vec<Entry<F>>, F::Env)>) -> Step<State<F>> {
    cstack.push(top);
    Step::Final { halt: h, state: State { focus, cstack, env, astack } }
}

pub fn step<F: Flavor>(s: State<F>) -> Result<Step<State<F>>> {
    let State { focus, mut cstack, mut env, mut astack } = s;
    let (rule, cost, focus) = match focus {
        Focus::Unev(t) => match F::classify(&t) {
            Code::App(f, a) => {
                cstack.push(Entry::Unev(f.clone()));
                (Rule::USea1, Cost::unit(), Focus::Unev(a.clone()))
            }
            Code::Proj(i, u) => {
                cstack.push(Entry::Proj(i));
                (Rule::USea2, Cost::unit(), Focus::Unev(u.clone()))
            }
            Code::Tuple([]) => (Rule::USea4, Cost::unit(), Focus::Ev(Arc::new(Value::Tuple(Arc::from(Vec::new()))))),
            Code::Tuple(items) => {
                let n = items.len();
                let mut slots: Vec<Slot<F>> = items.iter().map(|u| Slot::Unev(u.clone())).collect();
                slots[n - 1] = Slot::Hole;
                cstack.push(Entry::Partial(Partial { slots, hole: n - 1 }));
                let cost = Cost { elem_ops: 1 + n as u64, ..Cost::default() };
                (Rule::USea3, cost, Focus::Unev(items[n - 1].clone()))
            }
            Code::Var(k) => {
                let (v, scanned) =
                    F::lookup(&env, &k).ok_or_else(|| Error::Invariant(format!("◦subv on {k:?} outside the environment")))?;
                (Rule::USubV, Cost { elem_ops: 1 + scanned, env_copy_ops: 0, lookup_ops: scanned }, Focus::Ev(v))
            }
            Code::VarClosure(keys) => {
                let mut scanned = 0;
                let mut bag = Vec::with_capacity(keys.len());
                for k in &keys {
                    let (v, c) = F::lookup(&env, k)
                        .ok_or_else(|| Error::Invariant(format!("◦subw on {k:?} outside the environment")))?;
                    scanned += c;
                    bag.push(v);
                }
                let v = Value::Closure { code: t.clone(), bag: Arc::from(bag) };
                (Rule::USubW, Cost { elem_ops: 1 + scanned, env_copy_ops: 0, lookup_ops: scanned }, Focus::Ev(Arc::new(v)))
            }
            Code::NotPrime => return Err(Error::Invariant(format!("unevaluated closure is not prime: {t:?}"))),
        },
        Focus::Ev(v) => {
            let Some(top) = cstack.pop() else {
                return match astack.pop() {
                    None => Ok(Step::Final { halt: Halt::Successful, state: State { focus: Focus::Ev(v), cstack, env, astack } }),
                    Some((s2, e2)) => Ok(Step::Transition {
                        rule: Rule::ESea7,
                        cost: Cost::unit(),
                        next: State { focus: Focus::Ev(v), cstack: s2, env: e2, astack },
                    }),
                };
            };
            match top {
                Entry::Unev(t) => {
                    cstack.push(Entry::Ev(v));
                    (Rule::ESea1, Cost::unit(), Focus::Unev(t))
                }
                Entry::Partial(Partial { mut slots, hole }) => {
                    slots[hole] = Slot::Ev(v);
                    if hole == 0 {
                        let items = slots
                            .into_iter()
                            .map(|s| match s {
                                Slot::Ev(v) => Ok(v),
                                _ => Err(Error::Invariant("partial tuple completed with pending items".into())),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        (Rule::ESea3, Cost::unit(), Focus::Ev(Arc::new(Value::Tuple(Arc::from(items)))))
                    } else {
                        let Slot::Unev(t) = std::mem::replace(&mut slots[hole - 1], Slot::Hole) else {
                            return Err(Error::Invariant("partial tuple slot not pending".into()));
                        };
                        cstack.push(Entry::Partial(Partial { slots, hole: hole - 1 }));
                        (Rule::ESea6, Cost::unit(), Focus::Unev(t))
                    }
                }
                Entry::Proj(i) => match &*v {
                    Value::Tuple(items) if i >= 1 && i <= items.len() => {
                        (Rule::EPi, Cost::unit(), Focus::Ev(items[i - 1].clone()))
                    }
                    _ => return Ok(halt(Halt::Clash(ClashKind::Projection), Focus::Ev(v), cstack, Entry::Proj(i), env, astack)),
                },
                Entry::Ev(arg) => {
                    let entered = match (&*v, &*arg) {
                        (Value::Closure { code, bag }, Value::Tuple(args)) => F::enter(code, bag, args),
                        _ => None,
                    };
                    match entered {
                        Some((body, new_env, ops)) => {
                            let old_env = std::mem::replace(&mut env, new_env);
                            astack.push((std::mem::take(&mut cstack), old_env));
                            (Rule::EBeta, Cost { elem_ops: 1 + ops, ..Cost::default() }, Focus::Unev(body))
                        }
                        None => {
                            let kind = match &*v {
                                Value::Closure { .. } => ClashKind::AbstractionOrClosure,
                                Value::Tuple(_) => ClashKind::Tuple,
                            };
                            return Ok(halt(Halt::Clash(kind), Focus::Ev(v), cstack, Entry::Ev(arg), env, astack));
                        }
                    }
                }
            }
        }
    };
    Ok(Step::Transition { rule, cost, next: State { focus, cstack, env, astack } })
}

fn stack_measure<F: Flavor>(s: &[Entry<F>]) -> u64 {
    s.iter()
        .map(|e| match e {
            Entry::Unev(t) => F::size(t),
            Entry::Ev(_) | Entry::Proj(_) => 0,
            Entry::Partial(p) => p.slots[..p.hole]
                .iter()
                .map(|s| if let Slot::Unev(t) = s { 1 + F::size(t) } else { 0 })
                .sum(),
        })
        .sum()
}

pub fn measure<F: Flavor>(s: &State<F>) -> u64 {
    let focus = match &s.focus {
        Focus::Unev(t) => F::size(t),
        Focus::Ev(_) => 0,
    };
    focus + stack_measure(&s.cstack) + s.astack.iter().map(|(st, _)| stack_measure(st)).sum::<u64>()
}

impl<F: Flavor> Machine for State<F> {
    fn step(self) -> Result<Step<State<F>>> {
        step(self)
    }

    fn measure(&self) -> u64 {
        measure(self)
    }
}

/// Read-back with memoization on shared values.
pub struct Readback<F: Flavor> {
    memo: HashMap<*const Value<F>, F::Term>,
}

impl<F: Flavor> Default for Readback<F> {
    fn default() -> Self {
        Readback { memo: HashMap::new() }
    }
}

impl<F: Flavor> Readback<F> {
    pub fn value(&mut self, v: &Val<F>) -> F::Term {
        if let Some(t) = self.memo.get(&Arc::as_ptr(v)) {
            return t.clone();
        }
        let t = match &**v {
            Value::Closure { code, bag } => {
                let bag = bag.iter().map(|u| self.value(u)).collect();
                F::close(code, bag)
            }
            Value::Tuple(items) => F::Term::mk_tuple(items.iter().map(|u| self.value(u)).collect()),
        };
        self.memo.insert(Arc::as_ptr(v), t.clone());
        t
    }

    fn env(&mut self, env: &F::Env) -> F::EnvTerms {
        F::read_env(env, &mut |v| self.value(v))
    }

    /// `⌊S⌋σ_E`.
    pub fn stack(&mut self, s: &[Entry<F>], env: &F::Env) -> Context<F::Term> {
        let sigma = self.env(env);
        let frames = s
            .iter()
            .map(|e| match e {
                Entry::Unev(t) => Frame::Arg(F::apply(t, &sigma)),
                Entry::Ev(v) => Frame::Fun(self.value(v)),
                Entry::Proj(i) => Frame::Proj(*i),
                Entry::Partial(p) => Frame::Tuple {
                    before: p.slots[..p.hole]
                        .iter()
                        .map(|s| match s {
                            Slot::Unev(t) => F::apply(t, &sigma),
                            _ => unreachable!("pending slots are unevaluated"),
                        })
                        .collect(),
                    after: p.slots[p.hole + 1..]
                        .iter()
                        .map(|s| match s {
                            Slot::Ev(v) => self.value(v),
                            _ => unreachable!("done slots are evaluated"),
                        })
                        .collect(),
                },
            })
            .collect();
        Context { frames }
    }

    pub fn focus(&mut self, f: &Focus<F>, env: &F::Env) -> F::Term {
        match f {
            Focus::Unev(t) => {
                let sigma = self.env(env);
                F::apply(t, &sigma)
            }
            Focus::Ev(v) => self.value(v),
        }
    }

    /// `⌊A⌋⟨⌊S⌋σ_E⟨⌊focus⌋σ_E⟩⟩`.
    pub fn state(&mut self, s: &State<F>) -> F::Term {
        let mut t = self.stack(&s.cstack, &s.env).plug(self.focus(&s.focus, &s.env));
        for (st, e) in s.astack.iter().rev() {
            t = self.stack(st, e).plug(t);
        }
        t
    }
}

pub fn readback<F: Flavor>(s: &State<F>) -> F::Term {
    Readback::<F>::default().state(s)
}

/// Identities of all subterms of `t`.
pub fn subterm_set<F: Flavor>(t: &F::Term) -> HashSet<usize> {
    let mut out = HashSet::new();
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        if out.insert(F::ptr(&u)) {
            todo.extend(F::subterms(&u));
        }
    }
    out
}

/// Well-formedness, closed values, closure, primality and sub-term invariants.
pub fn check_invariants<F: Flavor>(s: &State<F>, subterms: &HashSet<usize>) -> std::result::Result<(), String> {
    let mut rb = Readback::<F>::default();
    let mut seen: HashSet<*const Value<F>> = HashSet::new();
    let mut value = |v: &Val<F>, rb: &mut Readback<F>| -> std::result::Result<(), String> {
        if !seen.insert(Arc::as_ptr(v)) {
            return Ok(());
        }
        if let Value::Closure { code, .. } = &**v {
            if !subterms.contains(&F::ptr(code)) {
                return Err(format!("closure code {code:?} is not a subterm of the initial term"));
            }
        }
        let t = rb.value(v);
        if !F::is_closed(&t) {
            return Err(format!("evaluated value {t:?} is not closed"));
        }
        Ok(())
    };
    let code = |t: &F::Term, env: &F::Env| -> std::result::Result<(), String> {
        if !subterms.contains(&F::ptr(t)) {
            return Err(format!("{t:?} is not a subterm of the initial term"));
        }
        if !F::is_prime(t) {
            return Err(format!("{t:?} is not prime"));
        }
        if !F::covered(t, env) {
            return Err(format!("{t:?} is not covered by its environment"));
        }
        Ok(())
    };
    let mut stack = |st: &[Entry<F>], env: &F::Env, rb: &mut Readback<F>| -> std::result::Result<(), String> {
        for v in F::env_values(env) {
            value(&v, rb)?;
        }
        for e in st {
            match e {
                Entry::Unev(t) => code(t, env)?,
                Entry::Ev(v) => value(v, rb)?,
                Entry::Proj(_) => {}
                Entry::Partial(p) => {
                    for (k, slot) in p.slots.iter().enumerate() {
                        match (slot, k.cmp(&p.hole)) {
                            (Slot::Unev(t), std::cmp::Ordering::Less) => code(t, env)?,
                            (Slot::Hole, std::cmp::Ordering::Equal) => {}
                            (Slot::Ev(v), std::cmp::Ordering::Greater) => value(v, rb)?,
                            _ => return Err("partial tuple slots out of order".into()),
                        }
                    }
                }
            }
        }
        Ok(())
    };
    stack(&s.cstack, &s.env, &mut rb)?;
    for (st, e) in &s.astack {
        stack(st, e, &mut rb)?;
    }
    match &s.focus {
        Focus::Unev(t) => code(t, &s.env),
        Focus::Ev(v) => {
            let t = rb.value(v);
            if F::is_closed(&t) {
                Ok(())
            } else {
                Err(format!("focus value {t:?} is not closed"))
            }
        }
    }
}
