//! Int TAM: named stackable environments over the intermediate calculus.

use std::sync::Arc;

use super::stackable::{self, Code, Flavor, Val};
use super::{run, RunRecord};
use crate::calculi::subst_int_map;
use crate::error::{Error, Result};
use crate::syntax::{free_vars_int, prime_int, size_int, well_formed_int, IntBag, IntNode, IntTerm, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntFlavor;

/// `[ȳ←•v̄1][x̄←•v̄2]`, scanned front to back.
#[derive(Clone, Debug, Default)]
pub struct StackableEnv(pub Vec<(Var, Val<IntFlavor>)>);

pub type IState = stackable::State<IntFlavor>;
pub type IValue = stackable::Value<IntFlavor>;

impl Flavor for IntFlavor {
    type Term = IntTerm;
    type Key = Var;
    type Env = StackableEnv;
    type EnvTerms = Vec<(Var, IntTerm)>;

    fn classify(t: &IntTerm) -> Code<'_, Self> {
        match t.node() {
            IntNode::Var(x) => Code::Var(x.clone()),
            IntNode::App(f, a) => Code::App(f, a),
            IntNode::Proj(i, u) => Code::Proj(*i, u),
            IntNode::Tuple(items) => Code::Tuple(items),
            IntNode::Closure { wrapped, bag, .. } => match bag.as_vars() {
                Some(vs) if vs == &wrapped[..] => Code::VarClosure(vs.to_vec()),
                _ => Code::NotPrime,
            },
        }
    }

    fn lookup(env: &StackableEnv, k: &Var) -> Option<(Val<Self>, u64)> {
        env.0.iter().enumerate().find(|(_, (y, _))| y == k).map(|(i, (_, v))| (v.clone(), i as u64 + 1))
    }

    fn enter(closure: &IntTerm, bag: &Arc<[Val<Self>]>, args: &Arc<[Val<Self>]>) -> Option<(IntTerm, StackableEnv, u64)> {
        let IntNode::Closure { wrapped, params, body, .. } = closure.node() else {
            return None;
        };
        if wrapped.len() != bag.len() || params.len() != args.len() {
            return None;
        }
        let env: Vec<_> = wrapped
            .iter()
            .cloned()
            .zip(bag.iter().cloned())
            .chain(params.iter().cloned().zip(args.iter().cloned()))
            .collect();
        let ops = env.len() as u64;
        Some((body.clone(), StackableEnv(env), ops))
    }

    fn close(closure: &IntTerm, bag: Vec<IntTerm>) -> IntTerm {
        let IntNode::Closure { wrapped, params, body, .. } = closure.node() else {
            unreachable!("closure values carry closure code");
        };
        IntTerm::closure(wrapped.clone(), params.clone(), body.clone(), IntBag::Vals(bag))
    }

    fn read_env(env: &StackableEnv, rb: &mut dyn FnMut(&Val<Self>) -> IntTerm) -> Vec<(Var, IntTerm)> {
        env.0.iter().map(|(x, v)| (x.clone(), rb(v))).collect()
    }

    fn apply(t: &IntTerm, env: &Vec<(Var, IntTerm)>) -> IntTerm {
        subst_int_map(t, env)
    }

    fn size(t: &IntTerm) -> u64 {
        size_int(t)
    }

    fn ptr(t: &IntTerm) -> usize {
        t.as_ptr() as usize
    }

    fn is_prime(t: &IntTerm) -> bool {
        prime_int(t)
    }

    fn is_closed(t: &IntTerm) -> bool {
        free_vars_int(t).is_empty() && well_formed_int(t)
    }

    fn covered(t: &IntTerm, env: &StackableEnv) -> bool {
        free_vars_int(t).iter().all(|x| env.0.iter().any(|(y, _)| y == x))
    }

    fn env_values(env: &StackableEnv) -> Vec<Val<Self>> {
        env.0.iter().map(|(_, v)| v.clone()).collect()
    }

    fn subterms(t: &IntTerm) -> Vec<IntTerm> {
        match t.node() {
            IntNode::Var(_) => vec![],
            IntNode::App(f, a) => vec![f.clone(), a.clone()],
            IntNode::Proj(_, u) => vec![u.clone()],
            IntNode::Tuple(items) => items.clone(),
            IntNode::Closure { body, bag, .. } => {
                let mut v = vec![body.clone()];
                if let IntBag::Vals(vs) = bag {
                    v.extend(vs.iter().cloned());
                }
                v
            }
        }
    }
}

pub fn init_itam(t: &IntTerm) -> Result<IState> {
    if !well_formed_int(t) {
        return Err(Error::IllFormed(format!("{t}")));
    }
    if !prime_int(t) {
        return Err(Error::NotPrime);
    }
    if let Some(x) = free_vars_int(t).into_iter().next() {
        return Err(Error::Open(x));
    }
    Ok(IState::initial(t))
}

pub fn step_itam(s: IState) -> Result<super::Step<IState>> {
    stackable::step(s)
}

pub fn readback_itam(s: &IState) -> IntTerm {
    stackable::readback(s)
}

pub fn measure_itam(s: &IState) -> u64 {
    stackable::measure(s)
}

pub fn run_itam(t: &IntTerm, fuel: u64, record_measure: bool) -> Result<RunRecord> {
    Ok(run(init_itam(t)?, fuel, record_measure)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::ClashKind;
    use crate::machine::{Entry, Focus, Rule, RunFinal, Step, Value};
    use crate::surface::parse;
    use crate::syntax::IntBag;
    use crate::transforms::wrap;
    use std::sync::Arc;

    fn w(text: &str) -> IntTerm {
        wrap(&parse(text).unwrap())
    }

    fn id_val() -> Val<IntFlavor> {
        Arc::new(Value::Closure { code: w("fun(z) -> z"), bag: Arc::from(Vec::new()) })
    }

    fn transition(s: IState) -> (Rule, IState) {
        match step_itam(s).unwrap() {
            Step::Transition { rule, next, .. } => (rule, next),
            Step::Final { .. } => panic!("final"),
        }
    }

    #[test]
    fn initial_state() {
        let t = w("(fun(x) -> x) <fun(y) -> y>");
        let s = init_itam(&t).unwrap();
        assert_eq!(readback_itam(&s), t);
        assert_eq!(measure_itam(&s), crate::syntax::size_int(&t));
        let not_prime = IntTerm::closure(vec![], vec![Var::from("x")], IntTerm::var("x"), IntBag::Vals(vec![w("fun(z) -> z")]));
        assert!(init_itam(&not_prime).is_err());
    }

    #[test]
    fn variable_closure_captures_its_bag() {
        let c = w("fun(x) -> fun(y) -> y x");
        let IntNode::Closure { body: inner, .. } = c.node() else { unreachable!() };
        let env = StackableEnv(vec![(Var::from("x"), id_val())]);
        let s = IState { focus: Focus::Unev(inner.clone()), cstack: vec![], env, astack: vec![] };
        let (rule, next) = transition(s);
        assert_eq!(rule, Rule::USubW);
        let Focus::Ev(v) = &next.focus else { panic!() };
        let Value::Closure { bag, .. } = &**v else { panic!() };
        assert_eq!(bag.len(), 1);
        assert!(Arc::ptr_eq(&bag[0], &next.env.0[0].1));
    }

    #[test]
    fn returning_pops_the_activation_stack() {
        let outer = StackableEnv(vec![(Var::from("q"), id_val())]);
        let s = IState {
            focus: Focus::Ev(id_val()),
            cstack: vec![],
            env: StackableEnv(vec![]),
            astack: vec![(vec![Entry::Proj(1)], outer)],
        };
        let before = measure_itam(&s);
        let (rule, next) = transition(s);
        assert_eq!(rule, Rule::ESea7);
        assert_eq!(next.env.0.len(), 1);
        assert!(next.astack.is_empty());
        assert!(matches!(next.cstack[..], [Entry::Proj(1)]));
        assert_eq!(measure_itam(&next), before);
    }

    #[test]
    fn complete_runs() {
        let r = run_itam(&w("(fun(x) -> x) <fun(y) -> y>"), 100, false).unwrap();
        assert_eq!((r.beta(), r.final_), (1, RunFinal::Successful));
        assert_eq!(r.cost().env_copy_ops, 0);
        let r = run_itam(&w("pi1 <fun(y) -> y>"), 100, false).unwrap();
        assert_eq!((r.pi(), r.final_), (1, RunFinal::Successful));
        let r = run_itam(&w("(fun(x, y) -> x) <fun(y) -> y>"), 100, false).unwrap();
        assert_eq!(r.final_, RunFinal::Clash(ClashKind::AbstractionOrClosure));
    }

    #[test]
    fn readback_of_an_evaluated_closure() {
        let s = IState { focus: Focus::Ev(id_val()), cstack: vec![], env: StackableEnv(vec![]), astack: vec![] };
        assert_eq!(readback_itam(&s), w("fun(z) -> z"));
    }
}
