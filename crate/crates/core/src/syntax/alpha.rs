//! α-equivalence by on-the-fly de Bruijn numbering.

use super::{IntBag, IntNode, IntTerm, SourceNode, SourceTerm, Var};

#[derive(PartialEq)]
enum Resolved<'a> {
    Bound(usize, usize),
    Free(&'a Var),
}

/// A variable resolves to (frame distance, position) or stays free.
fn resolve<'a>(frames: &[Vec<Var>], x: &'a Var) -> Resolved<'a> {
    for (d, frame) in frames.iter().rev().enumerate() {
        if let Some(i) = frame.iter().rposition(|y| y == x) {
            return Resolved::Bound(d, i);
        }
    }
    Resolved::Free(x)
}

pub fn alpha_eq_source(t: &SourceTerm, u: &SourceTerm) -> bool {
    src(t, u, &mut Vec::new(), &mut Vec::new())
}

fn src(t: &SourceTerm, u: &SourceTerm, ft: &mut Vec<Vec<Var>>, fu: &mut Vec<Vec<Var>>) -> bool {
    if t.ptr_eq(u) && ft == fu {
        return true;
    }
    match (t.node(), u.node()) {
        (SourceNode::Var(x), SourceNode::Var(y)) => resolve(ft, x) == resolve(fu, y),
        (SourceNode::Abs(px, bx), SourceNode::Abs(py, by)) => {
            if px.len() != py.len() {
                return false;
            }
            ft.push(px.clone());
            fu.push(py.clone());
            let r = src(bx, by, ft, fu);
            ft.pop();
            fu.pop();
            r
        }
        (SourceNode::App(f1, a1), SourceNode::App(f2, a2)) => src(f1, f2, ft, fu) && src(a1, a2, ft, fu),
        (SourceNode::Proj(i, a), SourceNode::Proj(j, b)) => i == j && src(a, b, ft, fu),
        (SourceNode::Tuple(xs), SourceNode::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| src(a, b, ft, fu))
        }
        _ => false,
    }
}

/// α-equivalence of intermediate terms. Closure binders bind in the body
/// only; bags are compared in the enclosing scope.
pub fn alpha_eq(t: &IntTerm, u: &IntTerm) -> bool {
    int(t, u, &mut Vec::new(), &mut Vec::new())
}

fn int(t: &IntTerm, u: &IntTerm, ft: &mut Vec<Vec<Var>>, fu: &mut Vec<Vec<Var>>) -> bool {
    if t.ptr_eq(u) && ft == fu {
        return true;
    }
    match (t.node(), u.node()) {
        (IntNode::Var(x), IntNode::Var(y)) => resolve(ft, x) == resolve(fu, y),
        (IntNode::App(f1, a1), IntNode::App(f2, a2)) => int(f1, f2, ft, fu) && int(a1, a2, ft, fu),
        (IntNode::Proj(i, a), IntNode::Proj(j, b)) => i == j && int(a, b, ft, fu),
        (IntNode::Tuple(xs), IntNode::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| int(a, b, ft, fu))
        }
        (
            IntNode::Closure { wrapped: w1, params: p1, body: b1, bag: g1 },
            IntNode::Closure { wrapped: w2, params: p2, body: b2, bag: g2 },
        ) => {
            if w1.len() != w2.len() || p1.len() != p2.len() || g1.len() != g2.len() {
                return false;
            }
            let bags = match (g1, g2) {
                (IntBag::Vars(a), IntBag::Vars(b)) => {
                    a.iter().zip(b).all(|(x, y)| resolve(ft, x) == resolve(fu, y))
                }
                (IntBag::Vals(a), IntBag::Vals(b)) => a.iter().zip(b).all(|(x, y)| int(x, y, ft, fu)),
                _ => g1.is_empty(),
            };
            if !bags {
                return false;
            }
            // The body sees only its own binders.
            let mut bt = vec![w1.iter().chain(p1).cloned().collect::<Vec<_>>()];
            let mut bu = vec![w2.iter().chain(p2).cloned().collect::<Vec<_>>()];
            int(b1, b2, &mut bt, &mut bu)
        }
        _ => false,
    }
}
