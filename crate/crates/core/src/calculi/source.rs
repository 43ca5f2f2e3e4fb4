use super::{step_with, ClashKind, Irreducible, StepLabel, StepOutcome};
use crate::error::{Error, Result};
use crate::syntax::{free_vars, SourceNode, SourceTerm, TermOps, Var};

/// `t{x̄←v̄}`, capture-avoiding.
pub fn subst_source(t: &SourceTerm, params: &[Var], vals: &[SourceTerm]) -> Result<SourceTerm> {
    if params.len() != vals.len() {
        return Err(Error::LengthMismatch { expected: params.len(), found: vals.len() });
    }
    if !vals.iter().all(|v| v.is_value()) {
        return Err(Error::NotAValue);
    }
    let map: Vec<_> = params.iter().cloned().zip(vals.iter().cloned()).collect();
    Ok(subst_source_map(t, &map))
}

/// Simultaneous substitution over arbitrary replacement terms. The first
/// binding of a variable wins.
pub fn subst_source_map(t: &SourceTerm, map: &[(Var, SourceTerm)]) -> SourceTerm {
    let fvs: Vec<Vec<Var>> = map.iter().map(|(_, v)| free_vars(v)).collect();
    let entries: Vec<Entry<'_>> = map.iter().zip(&fvs).map(|((x, v), fv)| Entry { x, v, fv }).collect();
    sub(t, &entries).unwrap_or_else(|| t.clone())
}

#[derive(Clone, Copy)]
struct Entry<'a> {
    x: &'a Var,
    v: &'a SourceTerm,
    fv: &'a [Var],
}

// `None` means unchanged, which keeps untouched subterms shared.
fn sub(t: &SourceTerm, map: &[Entry<'_>]) -> Option<SourceTerm> {
    if map.is_empty() {
        return None;
    }
    match t.node() {
        SourceNode::Var(x) => map.iter().find(|e| e.x == x).map(|e| e.v.clone()),
        SourceNode::Abs(params, body) => {
            let inner: Vec<Entry<'_>> = map.iter().copied().filter(|e| !params.contains(e.x)).collect();
            if inner.is_empty() {
                return None;
            }
            let capturing = params.iter().any(|p| inner.iter().any(|e| e.fv.contains(p)));
            if !capturing {
                return sub(body, &inner).map(|b| SourceTerm::abs(params.clone(), b));
            }
            // Rename every parameter that a replacement would capture.
            let mut avoid: Vec<Var> = free_vars(body);
            for e in &inner {
                avoid.extend(e.fv.iter().cloned());
            }
            avoid.extend(params.iter().cloned());
            let mut renaming = Vec::new();
            let mut new_params = Vec::new();
            for p in params {
                if inner.iter().any(|e| e.fv.contains(p)) {
                    let q = fresh_like(p, &avoid);
                    avoid.push(q.clone());
                    renaming.push((p.clone(), SourceTerm::new(SourceNode::Var(q.clone()))));
                    new_params.push(q);
                } else {
                    new_params.push(p.clone());
                }
            }
            let renamed = subst_source_map(body, &renaming);
            let b = sub(&renamed, &inner).unwrap_or(renamed);
            Some(SourceTerm::abs(new_params, b))
        }
        SourceNode::App(f, a) => {
            let f2 = sub(f, map);
            let a2 = sub(a, map);
            if f2.is_none() && a2.is_none() {
                return None;
            }
            Some(SourceTerm::app(f2.unwrap_or_else(|| f.clone()), a2.unwrap_or_else(|| a.clone())))
        }
        SourceNode::Proj(i, u) => sub(u, map).map(|u2| SourceTerm::proj(*i, u2)),
        SourceNode::Tuple(items) => {
            let new: Vec<Option<SourceTerm>> = items.iter().map(|u| sub(u, map)).collect();
            if new.iter().all(Option::is_none) {
                return None;
            }
            Some(SourceTerm::tuple(
                new.into_iter().zip(items).map(|(n, u)| n.unwrap_or_else(|| u.clone())).collect(),
            ))
        }
    }
}

fn fresh_like(p: &Var, avoid: &[Var]) -> Var {
    (1..)
        .map(|k| Var::new(&format!("{}#{}", p.name(), k)))
        .find(|q| !avoid.contains(q))
        .expect("unbounded supply")
}

fn contract(r: &SourceTerm) -> Result<(StepLabel, SourceTerm), Irreducible> {
    match r.node() {
        SourceNode::Proj(i, v) => match v.node() {
            SourceNode::Tuple(items) if *i <= items.len() => Ok((StepLabel::Pi, items[i - 1].clone())),
            _ => Err(Irreducible::Clash(ClashKind::Projection)),
        },
        SourceNode::App(f, a) => match (f.node(), a.node()) {
            (SourceNode::Abs(params, body), SourceNode::Tuple(vals)) if vals.len() == params.len() => {
                let map: Vec<_> = params.iter().cloned().zip(vals.iter().cloned()).collect();
                Ok((StepLabel::BetaV, subst_source_map(body, &map)))
            }
            (SourceNode::Abs(..), _) => Err(Irreducible::Clash(ClashKind::AbstractionOrClosure)),
            _ => Err(Irreducible::Clash(ClashKind::Tuple)),
        },
        _ => unreachable!("decompose only yields projections and applications as redexes"),
    }
}

pub fn step_source(t: &SourceTerm) -> StepOutcome<SourceTerm> {
    step_with(t, contract)
}
