use std::fmt;
use std::sync::Arc;

use super::source::distinct;
use super::{Blocker, TermOps, Var, View};

/// A term of the intermediate calculus.
#[derive(Clone)]
pub struct IntTerm(Arc<IntNode>);

#[derive(Clone, PartialEq)]
pub enum IntNode {
    Var(Var),
    App(IntTerm, IntTerm),
    Proj(usize, IntTerm),
    Tuple(Vec<IntTerm>),
    /// `[ȳ; x̄. t]b`. The binders scope over the body only.
    Closure { wrapped: Vec<Var>, params: Vec<Var>, body: IntTerm, bag: IntBag },
}

/// The bag of a closure. An empty bag counts as both kinds.
#[derive(Clone, Debug)]
pub enum IntBag {
    Vars(Vec<Var>),
    Vals(Vec<IntTerm>),
}

impl IntBag {
    pub fn len(&self) -> usize {
        match self {
            IntBag::Vars(v) => v.len(),
            IntBag::Vals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Variables of a variable bag; `Some(&[])` for any empty bag.
    pub fn as_vars(&self) -> Option<&[Var]> {
        match self {
            IntBag::Vars(v) => Some(v),
            IntBag::Vals(v) if v.is_empty() => Some(&[]),
            IntBag::Vals(_) => None,
        }
    }

    pub fn as_vals(&self) -> Option<&[IntTerm]> {
        match self {
            IntBag::Vals(v) => Some(v),
            IntBag::Vars(v) if v.is_empty() => Some(&[]),
            IntBag::Vars(_) => None,
        }
    }
}

impl PartialEq for IntBag {
    fn eq(&self, other: &IntBag) -> bool {
        match (self, other) {
            (IntBag::Vars(a), IntBag::Vars(b)) => a == b,
            (IntBag::Vals(a), IntBag::Vals(b)) => a == b,
            _ => self.is_empty() && other.is_empty(),
        }
    }
}

impl IntTerm {
    pub fn new(node: IntNode) -> IntTerm {
        IntTerm(Arc::new(node))
    }

    pub fn node(&self) -> &IntNode {
        &self.0
    }

    pub fn var(name: &str) -> IntTerm {
        IntTerm::new(IntNode::Var(Var::new(name)))
    }

    pub fn app(f: IntTerm, a: IntTerm) -> IntTerm {
        IntTerm::new(IntNode::App(f, a))
    }

    pub fn proj(i: usize, t: IntTerm) -> IntTerm {
        assert!(i >= 1, "projection indices start at 1");
        IntTerm::new(IntNode::Proj(i, t))
    }

    pub fn tuple(items: Vec<IntTerm>) -> IntTerm {
        IntTerm::new(IntNode::Tuple(items))
    }

    pub fn closure(wrapped: Vec<Var>, params: Vec<Var>, body: IntTerm, bag: IntBag) -> IntTerm {
        IntTerm::new(IntNode::Closure { wrapped, params, body, bag })
    }

    /// Variable closure `[ȳ; x̄. t]⟨ȳ⟩`.
    pub fn var_closure(wrapped: Vec<Var>, params: Vec<Var>, body: IntTerm) -> IntTerm {
        let bag = IntBag::Vars(wrapped.clone());
        IntTerm::closure(wrapped, params, body, bag)
    }

    pub fn ptr_eq(&self, other: &IntTerm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_ptr(&self) -> *const IntNode {
        Arc::as_ptr(&self.0)
    }
}

impl PartialEq for IntTerm {
    fn eq(&self, other: &IntTerm) -> bool {
        self.ptr_eq(other) || self.0 == other.0
    }
}

impl Eq for IntTerm {}

impl fmt::Debug for IntTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_int(self))
    }
}

impl fmt::Display for IntTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_int(self))
    }
}

impl TermOps for IntTerm {
    fn mk_app(f: Self, a: Self) -> Self {
        IntTerm::app(f, a)
    }
    fn mk_proj(i: usize, t: Self) -> Self {
        IntTerm::proj(i, t)
    }
    fn mk_tuple(items: Vec<Self>) -> Self {
        IntTerm::tuple(items)
    }
    fn view(&self) -> View<'_, Self> {
        match self.node() {
            IntNode::Var(x) => View::Stuck(Blocker::Named(x.clone())),
            IntNode::Closure { .. } => View::Leaf,
            IntNode::App(f, a) => View::App(f, a),
            IntNode::Proj(i, t) => View::Proj(*i, t),
            IntNode::Tuple(items) => View::Tuple(items),
        }
    }
}

/// Free variables in first-occurrence order. Closure binders scope over the
/// body only, so bag variables are free.
pub fn free_vars_int(t: &IntTerm) -> Vec<Var> {
    let mut out = Vec::new();
    collect(t, &mut out);
    out
}

fn push(out: &mut Vec<Var>, x: &Var) {
    if !out.contains(x) {
        out.push(x.clone());
    }
}

fn collect(t: &IntTerm, out: &mut Vec<Var>) {
    match t.node() {
        IntNode::Var(x) => push(out, x),
        IntNode::App(f, a) => {
            collect(f, out);
            collect(a, out);
        }
        IntNode::Proj(_, u) => collect(u, out),
        IntNode::Tuple(items) => items.iter().for_each(|u| collect(u, out)),
        IntNode::Closure { wrapped, params, body, bag } => {
            for x in free_vars_int(body) {
                if !wrapped.contains(&x) && !params.contains(&x) {
                    push(out, &x);
                }
            }
            match bag {
                IntBag::Vars(vs) => vs.iter().for_each(|x| push(out, x)),
                IntBag::Vals(vs) => vs.iter().for_each(|u| collect(u, out)),
            }
        }
    }
}

pub fn well_formed_int(t: &IntTerm) -> bool {
    check(t, false)
}

pub fn prime_int(t: &IntTerm) -> bool {
    check(t, true)
}

fn check(t: &IntTerm, prime: bool) -> bool {
    match t.node() {
        IntNode::Var(_) => true,
        IntNode::App(f, a) => check(f, prime) && check(a, prime),
        IntNode::Proj(i, u) => *i >= 1 && check(u, prime),
        IntNode::Tuple(items) => items.iter().all(|u| check(u, prime)),
        IntNode::Closure { wrapped, params, body, bag } => {
            let mut binders = wrapped.clone();
            binders.extend(params.iter().cloned());
            if !distinct(&binders) || bag.len() != wrapped.len() {
                return false;
            }
            if !free_vars_int(body).iter().all(|x| binders.contains(x)) {
                return false;
            }
            let bag_ok = match bag {
                IntBag::Vars(vs) => vs == wrapped,
                IntBag::Vals(vs) => {
                    (!prime || vs.is_empty()) && vs.iter().all(|v| v.is_value() && check(v, prime))
                }
            };
            bag_ok && check(body, prime)
        }
    }
}
