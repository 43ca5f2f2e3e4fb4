//! Wrapping, name elimination, and their reverse translations.

use crate::calculi::subst_source_map;
use crate::error::{Error, Result};
use crate::syntax::{
    free_vars, norms_target, Base, well_formed_int, well_formed_target, IntBag, IntNode, IntTerm, PVar, SourceNode,
    SourceTerm, TargetBag, TargetNode, TargetTerm, Var,
};

/// Source of fresh binder names `y#k` / `x#k`. `#` cannot appear in parsed
/// identifiers, so these never collide with user names.
#[derive(Clone, Debug, Default)]
pub struct FreshSupply {
    counter: u64,
}

impl FreshSupply {
    pub fn new() -> FreshSupply {
        FreshSupply::default()
    }

    fn next(&mut self, prefix: &str) -> Var {
        self.counter += 1;
        Var::new(&format!("{prefix}#{}", self.counter))
    }
}

/// Turns every abstraction into a variable closure over its free variables.
pub fn wrap(t: &SourceTerm) -> IntTerm {
    match t.node() {
        SourceNode::Var(x) => IntTerm::new(IntNode::Var(x.clone())),
        SourceNode::Abs(params, body) => IntTerm::var_closure(free_vars(t), params.clone(), wrap(body)),
        SourceNode::App(f, a) => IntTerm::app(wrap(f), wrap(a)),
        SourceNode::Proj(i, u) => IntTerm::proj(*i, wrap(u)),
        SourceNode::Tuple(items) => IntTerm::tuple(items.iter().map(wrap).collect()),
    }
}

pub fn unwrap(t: &IntTerm) -> Result<SourceTerm> {
    if !well_formed_int(t) {
        return Err(Error::IllFormed(format!("{t}")));
    }
    Ok(unwrap_unchecked(t))
}

pub(crate) fn unwrap_unchecked(t: &IntTerm) -> SourceTerm {
    match t.node() {
        IntNode::Var(x) => SourceTerm::new(SourceNode::Var(x.clone())),
        IntNode::App(f, a) => SourceTerm::app(unwrap_unchecked(f), unwrap_unchecked(a)),
        IntNode::Proj(i, u) => SourceTerm::proj(*i, unwrap_unchecked(u)),
        IntNode::Tuple(items) => SourceTerm::tuple(items.iter().map(unwrap_unchecked).collect()),
        IntNode::Closure { wrapped, params, body, bag } => {
            let body = unwrap_unchecked(body);
            let body = match bag {
                IntBag::Vars(vs) if vs == wrapped => body,
                IntBag::Vars(vs) => {
                    let map: Vec<_> = wrapped
                        .iter()
                        .cloned()
                        .zip(vs.iter().map(|v| SourceTerm::new(SourceNode::Var(v.clone()))))
                        .collect();
                    subst_source_map(&body, &map)
                }
                IntBag::Vals(vs) => {
                    let map: Vec<_> = wrapped.iter().cloned().zip(vs.iter().map(unwrap_unchecked)).collect();
                    subst_source_map(&body, &map)
                }
            };
            SourceTerm::abs(params.clone(), body)
        }
    }
}

/// Replaces names by positions in `wrapped` (`π_i l`) and `params` (`π_i s`).
pub fn eliminate_names(t: &IntTerm, wrapped: &[Var], params: &[Var]) -> Result<TargetTerm> {
    if !well_formed_int(t) {
        return Err(Error::IllFormed(format!("{t}")));
    }
    elim(t, wrapped, params)
}

fn position(x: &Var, wrapped: &[Var], params: &[Var]) -> Result<PVar> {
    // Parameters shadow wrapped names; well-formed inputs keep them disjoint.
    if let Some(i) = params.iter().position(|y| y == x) {
        return Ok(PVar::s(i + 1));
    }
    if let Some(i) = wrapped.iter().position(|y| y == x) {
        return Ok(PVar::l(i + 1));
    }
    Err(Error::Unbound(x.clone()))
}

fn elim(t: &IntTerm, ys: &[Var], xs: &[Var]) -> Result<TargetTerm> {
    Ok(match t.node() {
        IntNode::Var(x) => TargetTerm::pvar(position(x, ys, xs)?),
        IntNode::App(f, a) => TargetTerm::app(elim(f, ys, xs)?, elim(a, ys, xs)?),
        IntNode::Proj(i, u) => TargetTerm::proj(*i, elim(u, ys, xs)?),
        IntNode::Tuple(items) => TargetTerm::tuple(items.iter().map(|u| elim(u, ys, xs)).collect::<Result<_>>()?),
        IntNode::Closure { wrapped, params, body, bag } => {
            let body = elim(body, wrapped, params)?;
            let bag = match bag {
                IntBag::Vars(vs) => {
                    TargetBag::PVars(vs.iter().map(|v| position(v, ys, xs)).collect::<Result<_>>()?)
                }
                IntBag::Vals(vs) => TargetBag::Vals(vs.iter().map(|u| elim(u, ys, xs)).collect::<Result<_>>()?),
            };
            TargetTerm::closure(wrapped.len(), params.len(), body, bag)
        }
    })
}

/// Reverse of name elimination. Closures get fresh parameter names; a
/// variable bag naming distinct variables reuses those names as the wrapped
/// binders, so the result is well-formed. Other bags get fresh wrapped names.
pub fn naming(t: &TargetTerm, wrapped: &[Var], params: &[Var], supply: &mut FreshSupply) -> Result<IntTerm> {
    if !well_formed_target(t) {
        return Err(Error::IllFormed(format!("{t}")));
    }
    let (l, s) = norms_target(t);
    if l > wrapped.len() || s > params.len() {
        return Err(Error::NormOutOfRange(format!("norms ({l}, {s}) exceed ({}, {})", wrapped.len(), params.len())));
    }
    Ok(name(t, wrapped, params, supply))
}

fn lookup(p: &PVar, ys: &[Var], xs: &[Var]) -> Var {
    match p.base {
        Base::L => ys[p.index - 1].clone(),
        Base::S => xs[p.index - 1].clone(),
    }
}

fn name(t: &TargetTerm, ys: &[Var], xs: &[Var], supply: &mut FreshSupply) -> IntTerm {
    match t.node() {
        TargetNode::PVar(p) => IntTerm::new(IntNode::Var(lookup(p, ys, xs))),
        TargetNode::App(f, a) => IntTerm::app(name(f, ys, xs, supply), name(a, ys, xs, supply)),
        TargetNode::Proj(i, u) => IntTerm::proj(*i, name(u, ys, xs, supply)),
        TargetNode::Tuple(items) => IntTerm::tuple(items.iter().map(|u| name(u, ys, xs, supply)).collect()),
        TargetNode::Closure { n, m, body, bag } => {
            let (zs, bag) = match bag {
                TargetBag::PVars(ps) => {
                    let vs: Vec<Var> = ps.iter().map(|p| lookup(p, ys, xs)).collect();
                    let distinct = vs.iter().enumerate().all(|(i, v)| !vs[..i].contains(v));
                    if distinct {
                        (vs.clone(), IntBag::Vars(vs))
                    } else {
                        let zs: Vec<Var> = (0..*n).map(|_| supply.next("y")).collect();
                        (zs, IntBag::Vars(vs))
                    }
                }
                TargetBag::Vals(vs) => {
                    let zs: Vec<Var> = (0..*n).map(|_| supply.next("y")).collect();
                    (zs, IntBag::Vals(vs.iter().map(|u| name(u, ys, xs, supply)).collect()))
                }
            };
            let ws: Vec<Var> = (0..*m).map(|_| supply.next("x")).collect();
            let body = name(body, &zs, &ws, supply);
            IntTerm::closure(zs, ws, body, bag)
        }
    }
}

/// `eliminate_names(wrap(t), (), ())` on closed terms.
pub fn closure_convert(t: &SourceTerm) -> Result<TargetTerm> {
    if let Some(x) = free_vars(t).into_iter().next() {
        return Err(Error::Open(x));
    }
    elim(&wrap(t), &[], &[])
}

/// `unwrap(naming(t, (), ()))` on closed well-formed terms.
pub fn reverse_convert(t: &TargetTerm) -> Result<SourceTerm> {
    let named = naming(t, &[], &[], &mut FreshSupply::new())?;
    Ok(unwrap_unchecked(&named))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::{step_target, StepOutcome};
    use crate::surface::parse;
    use crate::syntax::{alpha_eq, alpha_eq_source};

    fn s(text: &str) -> SourceTerm {
        parse(text).unwrap()
    }

    fn v(x: &str) -> Var {
        Var::from(x)
    }

    fn yx() -> IntTerm {
        IntTerm::app(IntTerm::var("y"), IntTerm::var("x"))
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap(&s("fun(y) -> y x")), IntTerm::var_closure(vec![v("x")], vec![v("y")], yx()));
        assert_eq!(wrap(&s("fun(x) -> x")), IntTerm::closure(vec![], vec![v("x")], IntTerm::var("x"), IntBag::Vars(vec![])));
        let u = s("(fun(x) -> fun(y) -> y x) <fun(z) -> z>");
        let inner = IntTerm::var_closure(vec![v("x")], vec![v("y")], yx());
        let expected = IntTerm::app(
            IntTerm::var_closure(vec![], vec![v("x")], inner),
            IntTerm::tuple(vec![wrap(&SourceTerm::identity())]),
        );
        assert_eq!(wrap(&u), expected);
    }

    #[test]
    fn unwrapping() {
        assert_eq!(unwrap(&IntTerm::var_closure(vec![v("x")], vec![v("y")], yx())).unwrap(), s("fun(y) -> y x"));
        let u = s("(fun(x) -> x) <fun(y) -> y y>");
        assert_eq!(unwrap(&wrap(&u)).unwrap(), u);
        let with_value = IntTerm::closure(vec![v("x")], vec![v("y")], yx(), IntBag::Vals(vec![wrap(&s("fun(z) -> z"))]));
        assert_eq!(unwrap(&with_value).unwrap(), s("fun(y) -> y (fun(z) -> z)"));
        let ill = IntTerm::closure(vec![v("x")], vec![v("y")], yx(), IntBag::Vars(vec![]));
        assert!(unwrap(&ill).is_err());
    }

    #[test]
    fn name_elimination() {
        assert_eq!(eliminate_names(&IntTerm::var("y1"), &[v("y1")], &[v("x1")]).unwrap(), TargetTerm::pvar(PVar::l(1)));
        let body = TargetTerm::app(TargetTerm::pvar(PVar::s(1)), TargetTerm::pvar(PVar::l(1)));
        let expected = TargetTerm::closure(1, 1, body, TargetBag::PVars(vec![PVar::s(1)]));
        let c = IntTerm::var_closure(vec![v("x")], vec![v("y")], yx());
        assert_eq!(eliminate_names(&c, &[], &[v("x")]).unwrap(), expected);
        let unit = IntTerm::tuple(vec![]);
        assert_eq!(eliminate_names(&unit, &[], &[]).unwrap(), TargetTerm::tuple(vec![]));
        assert!(matches!(eliminate_names(&IntTerm::var("q"), &[], &[]), Err(Error::Unbound(_))));
    }

    #[test]
    fn naming_inverts_elimination() {
        let mut supply = FreshSupply::new();
        assert_eq!(
            naming(&TargetTerm::pvar(PVar::l(1)), &[v("y1")], &[v("x1")], &mut supply).unwrap(),
            IntTerm::var("y1")
        );
        let c = IntTerm::var_closure(vec![v("x")], vec![v("y")], yx());
        let back = naming(&eliminate_names(&c, &[], &[v("x")]).unwrap(), &[], &[v("x")], &mut supply).unwrap();
        assert!(alpha_eq(&back, &c));
        let id = wrap(&s("fun(y) -> y"));
        let back = naming(&eliminate_names(&id, &[], &[]).unwrap(), &[], &[], &mut supply).unwrap();
        assert!(alpha_eq(&back, &id));
        let unit = TargetTerm::tuple(vec![]);
        assert_eq!(naming(&unit, &[], &[], &mut supply).unwrap(), IntTerm::tuple(vec![]));
    }

    #[test]
    fn closure_conversion() {
        let id = TargetTerm::closure(0, 1, TargetTerm::pvar(PVar::s(1)), TargetBag::PVars(vec![]));
        assert_eq!(closure_convert(&s("fun(x) -> x")).unwrap(), id);
        assert_eq!(closure_convert(&s("<>")).unwrap(), TargetTerm::tuple(vec![]));
        assert!(closure_convert(&s("fun(x) -> y")).is_err());
        let u = s("(fun(x) -> x) <fun(y) -> y>");
        let named = naming(&closure_convert(&u).unwrap(), &[], &[], &mut FreshSupply::new()).unwrap();
        assert!(alpha_eq_source(&unwrap(&named).unwrap(), &u));
        assert_eq!(reverse_convert(&TargetTerm::tuple(vec![])).unwrap(), s("<>"));
    }

    #[test]
    fn reverse_conversion_tracks_a_step() {
        let t = closure_convert(&s("(fun(x) -> x) <fun(z) -> z>")).unwrap();
        let StepOutcome::Stepped { result, .. } = step_target(&t) else { panic!("no step") };
        assert!(alpha_eq_source(&reverse_convert(&result).unwrap(), &SourceTerm::identity()));
    }
}
