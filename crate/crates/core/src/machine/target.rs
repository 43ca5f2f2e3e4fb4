//! Target TAM: tupled environments with positional lookup.

use std::sync::Arc;

use super::stackable::{self, Code, Flavor, Val};
use super::{run, RunRecord};
use crate::calculi::psubst_unchecked;
use crate::error::{Error, Result};
use crate::syntax::{norms_target, size_target, well_formed_target, Base, PVar, SourceTerm, TargetBag, TargetNode, TargetTerm};
use crate::transforms::reverse_convert;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetFlavor;

/// `v̄_l; v̄_s`: the bag and argument tuples, shared as they are.
#[derive(Clone, Debug)]
pub struct TupledEnv {
    pub lvals: Arc<[Val<TargetFlavor>]>,
    pub svals: Arc<[Val<TargetFlavor>]>,
}

impl Default for TupledEnv {
    fn default() -> Self {
        TupledEnv { lvals: Arc::from(Vec::new()), svals: Arc::from(Vec::new()) }
    }
}

pub type TState = stackable::State<TargetFlavor>;
pub type TValue = stackable::Value<TargetFlavor>;

impl Flavor for TargetFlavor {
    type Term = TargetTerm;
    type Key = PVar;
    type Env = TupledEnv;
    type EnvTerms = (Vec<TargetTerm>, Vec<TargetTerm>);

    fn classify(t: &TargetTerm) -> Code<'_, Self> {
        match t.node() {
            TargetNode::PVar(p) => Code::Var(*p),
            TargetNode::App(f, a) => Code::App(f, a),
            TargetNode::Proj(i, u) => Code::Proj(*i, u),
            TargetNode::Tuple(items) => Code::Tuple(items),
            TargetNode::Closure { bag, .. } => match bag.as_pvars() {
                Some(ps) => Code::VarClosure(ps.to_vec()),
                None => Code::NotPrime,
            },
        }
    }

    fn lookup(env: &TupledEnv, p: &PVar) -> Option<(Val<Self>, u64)> {
        let vals = match p.base {
            Base::L => &env.lvals,
            Base::S => &env.svals,
        };
        vals.get(p.index.checked_sub(1)?).map(|v| (v.clone(), 1))
    }

    fn enter(closure: &TargetTerm, bag: &Arc<[Val<Self>]>, args: &Arc<[Val<Self>]>) -> Option<(TargetTerm, TupledEnv, u64)> {
        let TargetNode::Closure { n, m, body, .. } = closure.node() else {
            return None;
        };
        if *n != bag.len() || *m != args.len() {
            return None;
        }
        Some((body.clone(), TupledEnv { lvals: bag.clone(), svals: args.clone() }, 0))
    }

    fn close(closure: &TargetTerm, bag: Vec<TargetTerm>) -> TargetTerm {
        let TargetNode::Closure { n, m, body, .. } = closure.node() else {
            unreachable!("closure values carry closure code");
        };
        TargetTerm::closure(*n, *m, body.clone(), TargetBag::Vals(bag))
    }

    fn read_env(env: &TupledEnv, rb: &mut dyn FnMut(&Val<Self>) -> TargetTerm) -> (Vec<TargetTerm>, Vec<TargetTerm>) {
        (env.lvals.iter().map(&mut *rb).collect(), env.svals.iter().map(&mut *rb).collect())
    }

    fn apply(t: &TargetTerm, env: &(Vec<TargetTerm>, Vec<TargetTerm>)) -> TargetTerm {
        psubst_unchecked(t, &env.0, &env.1)
    }

    fn size(t: &TargetTerm) -> u64 {
        size_target(t)
    }

    fn ptr(t: &TargetTerm) -> usize {
        t.as_ptr() as usize
    }

    fn is_prime(t: &TargetTerm) -> bool {
        prime_target(t)
    }

    fn is_closed(t: &TargetTerm) -> bool {
        norms_target(t) == (0, 0) && well_formed_target(t)
    }

    fn covered(t: &TargetTerm, env: &TupledEnv) -> bool {
        let (l, s) = norms_target(t);
        l <= env.lvals.len() && s <= env.svals.len()
    }

    fn env_values(env: &TupledEnv) -> Vec<Val<Self>> {
        env.lvals.iter().chain(env.svals.iter()).cloned().collect()
    }

    fn subterms(t: &TargetTerm) -> Vec<TargetTerm> {
        match t.node() {
            TargetNode::PVar(_) => vec![],
            TargetNode::App(f, a) => vec![f.clone(), a.clone()],
            TargetNode::Proj(_, u) => vec![u.clone()],
            TargetNode::Tuple(items) => items.clone(),
            TargetNode::Closure { body, bag, .. } => {
                let mut v = vec![body.clone()];
                if let TargetBag::Vals(vs) = bag {
                    v.extend(vs.iter().cloned());
                }
                v
            }
        }
    }
}

/// Well-formed with variable bags only.
pub fn prime_target(t: &TargetTerm) -> bool {
    fn go(t: &TargetTerm) -> bool {
        match t.node() {
            TargetNode::PVar(_) => true,
            TargetNode::App(f, a) => go(f) && go(a),
            TargetNode::Proj(_, u) => go(u),
            TargetNode::Tuple(items) => items.iter().all(go),
            TargetNode::Closure { body, bag, .. } => bag.as_pvars().is_some() && go(body),
        }
    }
    well_formed_target(t) && go(t)
}

pub fn init_ttam(t: &TargetTerm) -> Result<TState> {
    if !well_formed_target(t) {
        return Err(Error::IllFormed(format!("{t}")));
    }
    if !prime_target(t) {
        return Err(Error::NotPrime);
    }
    if norms_target(t) != (0, 0) {
        return Err(Error::NormOutOfRange(format!("{t} is not closed")));
    }
    Ok(TState::initial(t))
}

pub fn step_ttam(s: TState) -> Result<super::Step<TState>> {
    stackable::step(s)
}

pub fn readback_ttam(s: &TState) -> TargetTerm {
    stackable::readback(s)
}

pub fn measure_ttam(s: &TState) -> u64 {
    stackable::measure(s)
}

pub fn run_ttam(t: &TargetTerm, fuel: u64, record_measure: bool) -> Result<RunRecord> {
    Ok(run(init_ttam(t)?, fuel, record_measure)?.0)
}

/// The source term the whole pipeline denotes at this state.
pub fn source_view(s: &TState) -> Result<SourceTerm> {
    reverse_convert(&readback_ttam(s))
}
