use std::fmt;
use std::str::FromStr;

use crate::syntax::{SourceTerm, Var};

fn i() -> SourceTerm {
    SourceTerm::identity()
}

fn unary(t: SourceTerm) -> SourceTerm {
    SourceTerm::tuple(vec![t])
}

/// `s_0 = I`, `s_{n+1} = τ⟨s_n⟩` with `τ = λ(x).⟨x, x⟩`.
pub fn family_tuple_explosion(n: usize) -> SourceTerm {
    let tau = SourceTerm::lam(&["x"], SourceTerm::tuple(vec![SourceTerm::var("x"), SourceTerm::var("x")]));
    (0..n).fold(i(), |s, _| SourceTerm::app(tau.clone(), unary(s)))
}

/// `t_0 = I`, `t_{n+1} = π⟨t_n⟩` with `π = λ(x).λ(y). y ⟨x⟩ ⟨x⟩`: the
/// duplicating family with every argument in a unary tuple.
pub fn family_fun_explosion(n: usize) -> SourceTerm {
    let x = || SourceTerm::var("x");
    let body = SourceTerm::app(SourceTerm::app(SourceTerm::var("y"), unary(x())), unary(x()));
    let pi = SourceTerm::lam(&["x"], SourceTerm::lam(&["y"], body));
    (0..n).fold(i(), |t, _| SourceTerm::app(pi.clone(), unary(t)))
}

/// `λ(x1). … λ(xn). x1 x2 … xn`.
pub fn family_quadratic_wrap(n: usize) -> SourceTerm {
    assert!(n >= 1, "the quadratic family starts at n = 1");
    let xs: Vec<Var> = (1..=n).map(|k| Var::new(&format!("x{k}"))).collect();
    let var = |v: &Var| SourceTerm::new(crate::syntax::SourceNode::Var(v.clone()));
    let spine = xs[1..].iter().fold(var(&xs[0]), |acc, x| SourceTerm::app(acc, var(x)));
    xs.iter().rev().fold(spine, |body, x| SourceTerm::abs(vec![x.clone()], body))
}

/// A clash-free closed run over the quadratic family: `x1` is bound to
/// `F_{n-1}` (with `F_0 = I`, `F_{k+1} = λ(z).F_k`) and every other `x_i`
/// to `⟨I⟩`, so the spine performs `n - 1` β-steps after the `n` bindings.
pub fn quadratic_wrap_driver(n: usize) -> SourceTerm {
    let f = (1..n).fold(i(), |f, _| SourceTerm::lam(&["z"], f));
    let mut t = SourceTerm::app(family_quadratic_wrap(n), unary(f));
    for _ in 1..n {
        t = SourceTerm::app(t, unary(unary(i())));
    }
    t
}

/// Size of the normal form `r_n`: `|r_0| = 3`, `|r_{n+1}| = 2|r_n| + 2`.
pub fn tuple_explosion_nf_size(n: u32) -> u128 {
    5 * (1u128 << n) - 2
}

/// Size of the normal form `u_n`: `|u_0| = 3`, `|u_{n+1}| = 2|u_n| + 7`.
pub fn fun_explosion_nf_size(n: u32) -> u128 {
    10 * (1u128 << n) - 7
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    TupleExplosion,
    FunExplosion,
    QuadraticWrap,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::TupleExplosion, Family::FunExplosion, Family::QuadraticWrap];

    pub fn name(self) -> &'static str {
        match self {
            Family::TupleExplosion => "tuple-explosion",
            Family::FunExplosion => "fun-explosion",
            Family::QuadraticWrap => "quadratic-wrap",
        }
    }

    /// The term that is run for instance `n`.
    pub fn instance(self, n: usize) -> SourceTerm {
        match self {
            Family::TupleExplosion => family_tuple_explosion(n),
            Family::FunExplosion => family_fun_explosion(n),
            Family::QuadraticWrap => quadratic_wrap_driver(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown family {s}"))
    }
}
