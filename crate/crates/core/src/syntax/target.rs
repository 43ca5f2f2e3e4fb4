use std::fmt;
use std::sync::Arc;

use super::{Blocker, TermOps, View};

/// The two composite binders: `l` for wrapped variables, `s` for parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    L,
    S,
}

/// A projected variable `π_i l` or `π_i s`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PVar {
    pub base: Base,
    pub index: usize,
}

impl PVar {
    pub fn l(index: usize) -> PVar {
        assert!(index >= 1, "projection indices start at 1");
        PVar { base: Base::L, index }
    }

    pub fn s(index: usize) -> PVar {
        assert!(index >= 1, "projection indices start at 1");
        PVar { base: Base::S, index }
    }
}

impl fmt::Display for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.base {
            Base::L => "l",
            Base::S => "s",
        };
        write!(f, "pi{} {}", self.index, b)
    }
}

/// A term of the target calculus.
#[derive(Clone)]
pub struct TargetTerm(Arc<TargetNode>);

#[derive(Clone, PartialEq)]
pub enum TargetNode {
    PVar(PVar),
    App(TargetTerm, TargetTerm),
    Proj(usize, TargetTerm),
    Tuple(Vec<TargetTerm>),
    /// `[t, b]^{n,m}`.
    Closure { n: usize, m: usize, body: TargetTerm, bag: TargetBag },
}

/// An empty bag counts as both kinds.
#[derive(Clone, Debug)]
pub enum TargetBag {
    PVars(Vec<PVar>),
    Vals(Vec<TargetTerm>),
}

impl TargetBag {
    pub fn len(&self) -> usize {
        match self {
            TargetBag::PVars(v) => v.len(),
            TargetBag::Vals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_pvars(&self) -> Option<&[PVar]> {
        match self {
            TargetBag::PVars(v) => Some(v),
            TargetBag::Vals(v) if v.is_empty() => Some(&[]),
            TargetBag::Vals(_) => None,
        }
    }

    pub fn as_vals(&self) -> Option<&[TargetTerm]> {
        match self {
            TargetBag::Vals(v) => Some(v),
            TargetBag::PVars(v) if v.is_empty() => Some(&[]),
            TargetBag::PVars(_) => None,
        }
    }
}

impl PartialEq for TargetBag {
    fn eq(&self, other: &TargetBag) -> bool {
        match (self, other) {
            (TargetBag::PVars(a), TargetBag::PVars(b)) => a == b,
            (TargetBag::Vals(a), TargetBag::Vals(b)) => a == b,
            _ => self.is_empty() && other.is_empty(),
        }
    }
}

impl TargetTerm {
    pub fn new(node: TargetNode) -> TargetTerm {
        TargetTerm(Arc::new(node))
    }

    pub fn node(&self) -> &TargetNode {
        &self.0
    }

    pub fn pvar(p: PVar) -> TargetTerm {
        TargetTerm::new(TargetNode::PVar(p))
    }

    pub fn app(f: TargetTerm, a: TargetTerm) -> TargetTerm {
        TargetTerm::new(TargetNode::App(f, a))
    }

    pub fn proj(i: usize, t: TargetTerm) -> TargetTerm {
        assert!(i >= 1, "projection indices start at 1");
        TargetTerm::new(TargetNode::Proj(i, t))
    }

    pub fn tuple(items: Vec<TargetTerm>) -> TargetTerm {
        TargetTerm::new(TargetNode::Tuple(items))
    }

    pub fn closure(n: usize, m: usize, body: TargetTerm, bag: TargetBag) -> TargetTerm {
        TargetTerm::new(TargetNode::Closure { n, m, body, bag })
    }

    pub fn ptr_eq(&self, other: &TargetTerm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_ptr(&self) -> *const TargetNode {
        Arc::as_ptr(&self.0)
    }

    pub fn is_closed(&self) -> bool {
        norms_target(self) == (0, 0)
    }
}

impl PartialEq for TargetTerm {
    fn eq(&self, other: &TargetTerm) -> bool {
        self.ptr_eq(other) || self.0 == other.0
    }
}

impl Eq for TargetTerm {}

impl fmt::Debug for TargetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_target(self))
    }
}

impl fmt::Display for TargetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_target(self))
    }
}

impl TermOps for TargetTerm {
    fn mk_app(f: Self, a: Self) -> Self {
        TargetTerm::app(f, a)
    }
    fn mk_proj(i: usize, t: Self) -> Self {
        TargetTerm::proj(i, t)
    }
    fn mk_tuple(items: Vec<Self>) -> Self {
        TargetTerm::tuple(items)
    }
    fn view(&self) -> View<'_, Self> {
        match self.node() {
            TargetNode::PVar(p) => View::Stuck(Blocker::Projected(*p)),
            TargetNode::Closure { .. } => View::Leaf,
            TargetNode::App(f, a) => View::App(f, a),
            TargetNode::Proj(i, t) => View::Proj(*i, t),
            TargetNode::Tuple(items) => View::Tuple(items),
        }
    }
}

/// `(‖t‖_l, ‖t‖_s)`: the largest index of each base outside closure bodies.
pub fn norms_target(t: &TargetTerm) -> (usize, usize) {
    let mut acc = (0, 0);
    norms_into(t, &mut acc);
    acc
}

fn note(p: &PVar, acc: &mut (usize, usize)) {
    match p.base {
        Base::L => acc.0 = acc.0.max(p.index),
        Base::S => acc.1 = acc.1.max(p.index),
    }
}

fn norms_into(t: &TargetTerm, acc: &mut (usize, usize)) {
    match t.node() {
        TargetNode::PVar(p) => note(p, acc),
        TargetNode::App(f, a) => {
            norms_into(f, acc);
            norms_into(a, acc);
        }
        TargetNode::Proj(_, u) => norms_into(u, acc),
        TargetNode::Tuple(items) => items.iter().for_each(|u| norms_into(u, acc)),
        TargetNode::Closure { bag, .. } => match bag {
            TargetBag::PVars(ps) => ps.iter().for_each(|p| note(p, acc)),
            TargetBag::Vals(vs) => vs.iter().for_each(|u| norms_into(u, acc)),
        },
    }
}

pub fn well_formed_target(t: &TargetTerm) -> bool {
    match t.node() {
        TargetNode::PVar(p) => p.index >= 1,
        TargetNode::App(f, a) => well_formed_target(f) && well_formed_target(a),
        TargetNode::Proj(i, u) => *i >= 1 && well_formed_target(u),
        TargetNode::Tuple(items) => items.iter().all(well_formed_target),
        TargetNode::Closure { n, m, body, bag } => {
            let (l, s) = norms_target(body);
            let bag_ok = match bag {
                TargetBag::PVars(ps) => ps.iter().all(|p| p.index >= 1),
                TargetBag::Vals(vs) => vs.iter().all(|v| v.is_value() && well_formed_target(v)),
            };
            l <= *n && s <= *m && bag.len() == *n && bag_ok && well_formed_target(body)
        }
    }
}
