use super::{step_with, ClashKind, Irreducible, StepLabel, StepOutcome};
use crate::error::{Error, Result};
use crate::syntax::{norms_target, Base, Blocker, PVar, TargetBag, TargetNode, TargetTerm};

/// Projecting substitution `t{l←v̄1; s←v̄2}`: closure bodies are left alone,
/// bags are rewritten.
pub fn psubst_target(t: &TargetTerm, lvals: &[TargetTerm], svals: &[TargetTerm]) -> Result<TargetTerm> {
    let (l, s) = norms_target(t);
    if l > lvals.len() {
        return Err(Error::NormOutOfRange(format!("l-norm {l} exceeds {}", lvals.len())));
    }
    if s > svals.len() {
        return Err(Error::NormOutOfRange(format!("s-norm {s} exceeds {}", svals.len())));
    }
    Ok(psubst_unchecked(t, lvals, svals))
}

pub(crate) fn psubst_unchecked(t: &TargetTerm, lvals: &[TargetTerm], svals: &[TargetTerm]) -> TargetTerm {
    sub(t, lvals, svals).unwrap_or_else(|| t.clone())
}

fn get(p: &PVar, lvals: &[TargetTerm], svals: &[TargetTerm]) -> TargetTerm {
    match p.base {
        Base::L => lvals[p.index - 1].clone(),
        Base::S => svals[p.index - 1].clone(),
    }
}

fn sub(t: &TargetTerm, lv: &[TargetTerm], sv: &[TargetTerm]) -> Option<TargetTerm> {
    match t.node() {
        TargetNode::PVar(p) => Some(get(p, lv, sv)),
        TargetNode::App(f, a) => {
            let f2 = sub(f, lv, sv);
            let a2 = sub(a, lv, sv);
            if f2.is_none() && a2.is_none() {
                return None;
            }
            Some(TargetTerm::app(f2.unwrap_or_else(|| f.clone()), a2.unwrap_or_else(|| a.clone())))
        }
        TargetNode::Proj(i, u) => sub(u, lv, sv).map(|u2| TargetTerm::proj(*i, u2)),
        TargetNode::Tuple(items) => {
            let new: Vec<Option<TargetTerm>> = items.iter().map(|u| sub(u, lv, sv)).collect();
            if new.iter().all(Option::is_none) {
                return None;
            }
            Some(TargetTerm::tuple(new.into_iter().zip(items).map(|(n, u)| n.unwrap_or_else(|| u.clone())).collect()))
        }
        TargetNode::Closure { n, m, body, bag } => {
            let bag2 = match bag {
                TargetBag::PVars(ps) => {
                    if ps.is_empty() {
                        return None;
                    }
                    TargetBag::Vals(ps.iter().map(|p| get(p, lv, sv)).collect())
                }
                TargetBag::Vals(vs) => {
                    let new: Vec<Option<TargetTerm>> = vs.iter().map(|u| sub(u, lv, sv)).collect();
                    if new.iter().all(Option::is_none) {
                        return None;
                    }
                    TargetBag::Vals(new.into_iter().zip(vs).map(|(n, u)| n.unwrap_or_else(|| u.clone())).collect())
                }
            };
            Some(TargetTerm::closure(*n, *m, body.clone(), bag2))
        }
    }
}

fn contract(r: &TargetTerm) -> Result<(StepLabel, TargetTerm), Irreducible> {
    match r.node() {
        TargetNode::Proj(i, v) => match v.node() {
            TargetNode::Tuple(items) if *i <= items.len() => Ok((StepLabel::Pi, items[i - 1].clone())),
            _ => Err(Irreducible::Clash(ClashKind::Projection)),
        },
        TargetNode::App(f, a) => match f.node() {
            TargetNode::Closure { n, m, body, bag } => {
                let bagvals = match bag.as_vals() {
                    Some(vs) => vs,
                    None => {
                        let p = bag.as_pvars().and_then(|v| v.first()).expect("nonempty variable bag");
                        return Err(Irreducible::Open(Blocker::Projected(*p)));
                    }
                };
                match a.node() {
                    TargetNode::Tuple(args) if args.len() == *m && bagvals.len() == *n => {
                        Ok((StepLabel::BetaV, psubst_unchecked(body, bagvals, args)))
                    }
                    _ => Err(Irreducible::Clash(ClashKind::AbstractionOrClosure)),
                }
            }
            _ => Err(Irreducible::Clash(ClashKind::Tuple)),
        },
        _ => unreachable!("decompose only yields projections and applications as redexes"),
    }
}

pub fn step_target(t: &TargetTerm) -> StepOutcome<TargetTerm> {
    step_with(t, contract)
}

