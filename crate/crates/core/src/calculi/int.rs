use super::{step_with, ClashKind, Irreducible, StepLabel, StepOutcome};
use crate::error::{Error, Result};
use crate::syntax::{free_vars_int, Blocker, IntBag, IntNode, IntTerm, TermOps, Var};

/// `t{ȳ←v̄1; x̄←v̄2}`. Inside nested closures only the bag is rewritten.
pub fn subst_int(
    t: &IntTerm,
    wrapped: &[Var],
    bagvals: &[IntTerm],
    params: &[Var],
    argvals: &[IntTerm],
) -> Result<IntTerm> {
    if wrapped.len() != bagvals.len() {
        return Err(Error::LengthMismatch { expected: wrapped.len(), found: bagvals.len() });
    }
    if params.len() != argvals.len() {
        return Err(Error::LengthMismatch { expected: params.len(), found: argvals.len() });
    }
    if wrapped.iter().any(|y| params.contains(y)) {
        return Err(Error::IllFormed("wrapped and parameter lists overlap".into()));
    }
    if let Some(x) = free_vars_int(t).into_iter().find(|x| !wrapped.contains(x) && !params.contains(x)) {
        return Err(Error::Unbound(x));
    }
    if !bagvals.iter().chain(argvals).all(|v| v.is_value()) {
        return Err(Error::NotAValue);
    }
    let map: Vec<_> = wrapped
        .iter()
        .cloned()
        .zip(bagvals.iter().cloned())
        .chain(params.iter().cloned().zip(argvals.iter().cloned()))
        .collect();
    Ok(subst_int_map(t, &map))
}

/// Simultaneous substitution; variables outside the map are left alone.
pub fn subst_int_map(t: &IntTerm, map: &[(Var, IntTerm)]) -> IntTerm {
    sub(t, map).unwrap_or_else(|| t.clone())
}

fn lookup<'a>(map: &'a [(Var, IntTerm)], x: &Var) -> Option<&'a IntTerm> {
    map.iter().find(|(y, _)| y == x).map(|(_, v)| v)
}

fn sub(t: &IntTerm, map: &[(Var, IntTerm)]) -> Option<IntTerm> {
    match t.node() {
        IntNode::Var(x) => lookup(map, x).cloned(),
        IntNode::App(f, a) => {
            let f2 = sub(f, map);
            let a2 = sub(a, map);
            if f2.is_none() && a2.is_none() {
                return None;
            }
            Some(IntTerm::app(f2.unwrap_or_else(|| f.clone()), a2.unwrap_or_else(|| a.clone())))
        }
        IntNode::Proj(i, u) => sub(u, map).map(|u2| IntTerm::proj(*i, u2)),
        IntNode::Tuple(items) => {
            let new: Vec<Option<IntTerm>> = items.iter().map(|u| sub(u, map)).collect();
            if new.iter().all(Option::is_none) {
                return None;
            }
            Some(IntTerm::tuple(new.into_iter().zip(items).map(|(n, u)| n.unwrap_or_else(|| u.clone())).collect()))
        }
        IntNode::Closure { wrapped, params, body, bag } => {
            let bag2 = match bag {
                IntBag::Vars(vs) => {
                    if !vs.iter().any(|y| lookup(map, y).is_some()) {
                        return None;
                    }
                    IntBag::Vals(
                        vs.iter()
                            .map(|y| lookup(map, y).cloned().unwrap_or_else(|| IntTerm::new(IntNode::Var(y.clone()))))
                            .collect(),
                    )
                }
                IntBag::Vals(vs) => {
                    let new: Vec<Option<IntTerm>> = vs.iter().map(|u| sub(u, map)).collect();
                    if new.iter().all(Option::is_none) {
                        return None;
                    }
                    IntBag::Vals(new.into_iter().zip(vs).map(|(n, u)| n.unwrap_or_else(|| u.clone())).collect())
                }
            };
            Some(IntTerm::closure(wrapped.clone(), params.clone(), body.clone(), bag2))
        }
    }
}

fn contract(r: &IntTerm) -> Result<(StepLabel, IntTerm), Irreducible> {
    match r.node() {
        IntNode::Proj(i, v) => match v.node() {
            IntNode::Tuple(items) if *i <= items.len() => Ok((StepLabel::Pi, items[i - 1].clone())),
            _ => Err(Irreducible::Clash(ClashKind::Projection)),
        },
        IntNode::App(f, a) => match f.node() {
            IntNode::Closure { wrapped, params, body, bag } => {
                let bagvals = match bag.as_vals() {
                    Some(vs) => vs,
                    None => {
                        let y = bag.as_vars().and_then(|v| v.first()).expect("nonempty variable bag");
                        return Err(Irreducible::Open(Blocker::Named(y.clone())));
                    }
                };
                match a.node() {
                    IntNode::Tuple(args) if args.len() == params.len() && bagvals.len() == wrapped.len() => {
                        let map: Vec<_> = wrapped
                            .iter()
                            .cloned()
                            .zip(bagvals.iter().cloned())
                            .chain(params.iter().cloned().zip(args.iter().cloned()))
                            .collect();
                        Ok((StepLabel::BetaV, subst_int_map(body, &map)))
                    }
                    _ => Err(Irreducible::Clash(ClashKind::AbstractionOrClosure)),
                }
            }
            _ => Err(Irreducible::Clash(ClashKind::Tuple)),
        },
        _ => unreachable!("decompose only yields projections and applications as redexes"),
    }
}

pub fn step_int(t: &IntTerm) -> StepOutcome<IntTerm> {
    step_with(t, contract)
}
