use std::collections::HashMap;

use super::{IntNode, IntTerm, SourceNode, SourceTerm, TargetNode, TargetTerm};

/// Size, width and height of a source term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct TermMetrics {
    pub size: u64,
    /// Longest tuple or parameter list.
    pub width: u64,
    /// Most bound variables in scope at any subterm.
    pub height: u64,
}

pub fn metrics(t: &SourceTerm) -> TermMetrics {
    let mut memo = HashMap::new();
    let size = unfolded_size(t, &mut memo);
    let (width, height) = width_height(t);
    TermMetrics { size: size as u64, width, height }
}

/// Tree size of a term stored as a DAG, memoized on shared nodes.
pub fn unfolded_size(t: &SourceTerm, memo: &mut HashMap<*const SourceNode, u128>) -> u128 {
    if let Some(&n) = memo.get(&t.as_ptr()) {
        return n;
    }
    let n = match t.node() {
        SourceNode::Var(_) => 1,
        SourceNode::Abs(params, body) => unfolded_size(body, memo) + params.len() as u128 + 1,
        SourceNode::App(f, a) => unfolded_size(f, memo) + unfolded_size(a, memo) + 1,
        SourceNode::Proj(_, u) => unfolded_size(u, memo) + 1,
        SourceNode::Tuple(items) => {
            items.len() as u128 + items.iter().map(|u| unfolded_size(u, memo)).sum::<u128>()
        }
    };
    memo.insert(t.as_ptr(), n);
    n
}

fn width_height(t: &SourceTerm) -> (u64, u64) {
    let mut memo: HashMap<(*const SourceNode, u64), (u64, u64)> = HashMap::new();
    wh(t, 0, &mut memo)
}

fn wh(t: &SourceTerm, depth: u64, memo: &mut HashMap<(*const SourceNode, u64), (u64, u64)>) -> (u64, u64) {
    if let Some(&r) = memo.get(&(t.as_ptr(), depth)) {
        return r;
    }
    let join = |a: (u64, u64), b: (u64, u64)| (a.0.max(b.0), a.1.max(b.1));
    let r = match t.node() {
        SourceNode::Var(_) => (0, depth),
        SourceNode::Abs(params, body) => {
            let k = params.len() as u64;
            join((k, depth), wh(body, depth + k, memo))
        }
        SourceNode::App(f, a) => join(wh(f, depth, memo), wh(a, depth, memo)),
        SourceNode::Proj(_, u) => wh(u, depth, memo),
        SourceNode::Tuple(items) => {
            items.iter().fold((items.len() as u64, depth), |acc, u| join(acc, wh(u, depth, memo)))
        }
    };
    memo.insert((t.as_ptr(), depth), r);
    r
}

/// Size of an intermediate term; a closure counts its body plus both binder
/// lists, its bag is not counted.
pub fn size_int(t: &IntTerm) -> u64 {
    match t.node() {
        IntNode::Var(_) => 1,
        IntNode::App(f, a) => size_int(f) + size_int(a) + 1,
        IntNode::Proj(_, u) => size_int(u) + 1,
        IntNode::Tuple(items) => items.len() as u64 + items.iter().map(size_int).sum::<u64>(),
        IntNode::Closure { wrapped, params, body, .. } => {
            size_int(body) + wrapped.len() as u64 + params.len() as u64
        }
    }
}

/// Size of a target term: `|π_i l| = |π_i s| = 1`, `|[t,b]^{n,m}| = |t| + n + m`.
pub fn size_target(t: &TargetTerm) -> u64 {
    match t.node() {
        TargetNode::PVar(_) => 1,
        TargetNode::App(f, a) => size_target(f) + size_target(a) + 1,
        TargetNode::Proj(_, u) => size_target(u) + 1,
        TargetNode::Tuple(items) => items.len() as u64 + items.iter().map(size_target).sum::<u64>(),
        TargetNode::Closure { n, m, body, .. } => size_target(body) + (*n + *m) as u64,
    }
}

/// Plain tree size of a source term.
pub fn size_source(t: &SourceTerm) -> u64 {
    match t.node() {
        SourceNode::Var(_) => 1,
        SourceNode::Abs(params, body) => size_source(body) + params.len() as u64 + 1,
        SourceNode::App(f, a) => size_source(f) + size_source(a) + 1,
        SourceNode::Proj(_, u) => size_source(u) + 1,
        SourceNode::Tuple(items) => items.len() as u64 + items.iter().map(size_source).sum::<u64>(),
    }
}
