//! Abstract syntax of the three calculi.

mod alpha;
mod int;
mod metrics;
mod source;
mod target;

use std::fmt;
use std::sync::Arc;

pub use alpha::{alpha_eq, alpha_eq_source};
pub use int::{free_vars_int, prime_int, well_formed_int, IntBag, IntNode, IntTerm};
pub use metrics::{metrics, size_int, size_source, size_target, unfolded_size, TermMetrics};
pub use source::{free_vars, SourceNode, SourceTerm};
pub use target::{norms_target, well_formed_target, Base, PVar, TargetBag, TargetNode, TargetTerm};

/// A variable name, compared by content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Panics on the empty string.
    pub fn new(name: &str) -> Var {
        assert!(!name.is_empty(), "variable names are nonempty");
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// What blocks evaluation of an open term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocker {
    Named(Var),
    Projected(PVar),
}

impl fmt::Display for Blocker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Blocker::Named(v) => write!(f, "{v}"),
            Blocker::Projected(p) => write!(f, "{p}"),
        }
    }
}

/// Shape of a term as seen by the shared evaluation-context machinery.
pub enum View<'a, T> {
    App(&'a T, &'a T),
    Proj(usize, &'a T),
    Tuple(&'a [T]),
    /// Abstractions and closures.
    Leaf,
    Stuck(Blocker),
}

/// Constructors and views shared by the three term types.
pub trait TermOps: Clone + PartialEq + fmt::Debug {
    fn mk_app(f: Self, a: Self) -> Self;
    fn mk_proj(i: usize, t: Self) -> Self;
    fn mk_tuple(items: Vec<Self>) -> Self;
    fn view(&self) -> View<'_, Self>;

    fn is_value(&self) -> bool {
        match self.view() {
            View::Leaf => true,
            View::Tuple(items) => items.iter().all(|t| t.is_value()),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse;

    fn v(x: &str) -> Var {
        Var::from(x)
    }

    fn s(text: &str) -> SourceTerm {
        parse(text).unwrap()
    }

    /// `[(x);(y). y x]<bag>`
    fn yx_closure(bag: IntBag) -> IntTerm {
        IntTerm::closure(vec![v("x")], vec![v("y")], IntTerm::app(IntTerm::var("y"), IntTerm::var("x")), bag)
    }

    fn id_closure(x: &str) -> IntTerm {
        IntTerm::closure(vec![], vec![v(x)], IntTerm::var(x), IntBag::Vals(vec![]))
    }

    #[test]
    fn free_variables() {
        assert_eq!(free_vars(&s("fun(y) -> y x")), vec![v("x")]);
        assert!(free_vars(&s("fun(x) -> x")).is_empty());
        assert_eq!(free_vars_int(&yx_closure(IntBag::Vars(vec![v("x")]))), vec![v("x")]);
    }

    #[test]
    fn sizes_and_heights() {
        assert_eq!(metrics(&s("x")).size, 1);
        assert_eq!(metrics(&s("<>")).size, 0);
        assert_eq!(metrics(&s("fun(x1) -> fun(x2) -> x1 x2")).height, 2);
        assert_eq!(metrics(&s("fun(x, y) -> <x, y>")).size, 7);
    }

    #[test]
    fn values() {
        assert!(s("<fun(y) -> y, <>>").is_value());
        assert!(!s("<x>").is_value());
        assert!(yx_closure(IntBag::Vars(vec![v("x")])).is_value());
    }

    #[test]
    fn intermediate_well_formedness() {
        assert!(well_formed_int(&yx_closure(IntBag::Vars(vec![v("x")]))));
        assert!(!well_formed_int(&yx_closure(IntBag::Vars(vec![v("z")]))));
        let with_value = yx_closure(IntBag::Vals(vec![id_closure("z")]));
        assert!(well_formed_int(&with_value));
        assert!(!prime_int(&with_value));
    }

    #[test]
    fn target_norms() {
        let sl = TargetTerm::app(TargetTerm::pvar(PVar::s(1)), TargetTerm::pvar(PVar::l(1)));
        assert_eq!(norms_target(&sl), (1, 1));
        assert_eq!(norms_target(&TargetTerm::tuple(vec![])), (0, 0));
        let body = TargetTerm::app(TargetTerm::pvar(PVar::s(1)), TargetTerm::pvar(PVar::l(2)));
        let bad = TargetTerm::closure(1, 1, body, TargetBag::PVars(vec![PVar::s(1)]));
        assert!(!well_formed_target(&bad));
        let good = TargetTerm::closure(1, 1, sl, TargetBag::PVars(vec![PVar::s(1)]));
        assert!(well_formed_target(&good));
        assert_eq!(norms_target(&good), (0, 1));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&id_closure("x"), &id_closure("z")));
        assert!(!alpha_eq(&IntTerm::var("x"), &IntTerm::var("y")));
        assert!(alpha_eq_source(&s("fun(a, b) -> b a"), &s("fun(c, d) -> d c")));
        assert!(!alpha_eq_source(&s("fun(a, b) -> b a"), &s("fun(c, d) -> c d")));
        // Wrapped binders scope over the body only.
        let a = IntTerm::closure(vec![v("y")], vec![], IntTerm::var("y"), IntBag::Vars(vec![v("y")]));
        let b = IntTerm::closure(vec![v("w")], vec![], IntTerm::var("w"), IntBag::Vars(vec![v("y")]));
        assert!(alpha_eq(&a, &b));
    }
}
