use std::fmt;
use std::sync::Arc;

use super::{Blocker, TermOps, Var, View};

/// A term of the source calculus. Cloning is cheap; subterms are shared.
#[derive(Clone)]
pub struct SourceTerm(Arc<SourceNode>);

#[derive(Clone, PartialEq)]
pub enum SourceNode {
    Var(Var),
    Abs(Vec<Var>, SourceTerm),
    App(SourceTerm, SourceTerm),
    /// 1-based projection.
    Proj(usize, SourceTerm),
    Tuple(Vec<SourceTerm>),
}

impl SourceTerm {
    pub fn new(node: SourceNode) -> SourceTerm {
        SourceTerm(Arc::new(node))
    }

    pub fn node(&self) -> &SourceNode {
        &self.0
    }

    pub fn var(name: &str) -> SourceTerm {
        SourceTerm::new(SourceNode::Var(Var::new(name)))
    }

    pub fn abs(params: Vec<Var>, body: SourceTerm) -> SourceTerm {
        debug_assert!(distinct(&params), "parameters must be pairwise distinct");
        SourceTerm::new(SourceNode::Abs(params, body))
    }

    pub fn lam(params: &[&str], body: SourceTerm) -> SourceTerm {
        SourceTerm::abs(params.iter().map(|p| Var::new(p)).collect(), body)
    }

    pub fn app(f: SourceTerm, a: SourceTerm) -> SourceTerm {
        SourceTerm::new(SourceNode::App(f, a))
    }

    pub fn proj(i: usize, t: SourceTerm) -> SourceTerm {
        assert!(i >= 1, "projection indices start at 1");
        SourceTerm::new(SourceNode::Proj(i, t))
    }

    pub fn tuple(items: Vec<SourceTerm>) -> SourceTerm {
        SourceTerm::new(SourceNode::Tuple(items))
    }

    /// λ(z).z
    pub fn identity() -> SourceTerm {
        SourceTerm::lam(&["z"], SourceTerm::var("z"))
    }

    pub fn ptr_eq(&self, other: &SourceTerm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_ptr(&self) -> *const SourceNode {
        Arc::as_ptr(&self.0)
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }
}

pub(crate) fn distinct(vs: &[Var]) -> bool {
    vs.iter().enumerate().all(|(i, v)| !vs[..i].contains(v))
}

impl PartialEq for SourceTerm {
    fn eq(&self, other: &SourceTerm) -> bool {
        self.ptr_eq(other) || self.0 == other.0
    }
}

impl Eq for SourceTerm {}

impl fmt::Debug for SourceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_source(self))
    }
}

impl fmt::Display for SourceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_source(self))
    }
}

impl TermOps for SourceTerm {
    fn mk_app(f: Self, a: Self) -> Self {
        SourceTerm::app(f, a)
    }
    fn mk_proj(i: usize, t: Self) -> Self {
        SourceTerm::proj(i, t)
    }
    fn mk_tuple(items: Vec<Self>) -> Self {
        SourceTerm::tuple(items)
    }
    fn view(&self) -> View<'_, Self> {
        match self.node() {
            SourceNode::Var(x) => View::Stuck(Blocker::Named(x.clone())),
            SourceNode::Abs(..) => View::Leaf,
            SourceNode::App(f, a) => View::App(f, a),
            SourceNode::Proj(i, t) => View::Proj(*i, t),
            SourceNode::Tuple(items) => View::Tuple(items),
        }
    }
}

/// Free variables in first-occurrence order.
pub fn free_vars(t: &SourceTerm) -> Vec<Var> {
    let mut out = Vec::new();
    let mut bound = Vec::new();
    collect(t, &mut bound, &mut out);
    out
}

fn collect(t: &SourceTerm, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
    match t.node() {
        SourceNode::Var(x) => {
            if !bound.contains(x) && !out.contains(x) {
                out.push(x.clone());
            }
        }
        SourceNode::Abs(params, body) => {
            let mark = bound.len();
            bound.extend(params.iter().cloned());
            collect(body, bound, out);
            bound.truncate(mark);
        }
        SourceNode::App(f, a) => {
            collect(f, bound, out);
            collect(a, bound, out);
        }
        SourceNode::Proj(_, u) => collect(u, bound, out),
        SourceNode::Tuple(items) => items.iter().for_each(|u| collect(u, bound, out)),
    }
}
