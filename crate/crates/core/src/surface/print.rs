use crate::syntax::{Base, IntBag, IntNode, IntTerm, SourceNode, SourceTerm, TargetBag, TargetNode, TargetTerm, Var};

// Printing contexts: anything, function position, argument position.
const TOP: u8 = 0;
const FUN: u8 = 1;
const ARG: u8 = 2;

fn vars(vs: &[Var]) -> String {
    vs.iter().map(|v| v.name()).collect::<Vec<_>>().join(", ")
}

fn paren(s: String, yes: bool) -> String {
    if yes {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_source(t: &SourceTerm) -> String {
    src(t, TOP)
}

fn src(t: &SourceTerm, ctx: u8) -> String {
    match t.node() {
        SourceNode::Var(x) => x.name().to_string(),
        SourceNode::Abs(ps, b) => paren(format!("fun({}) -> {}", vars(ps), src(b, TOP)), ctx >= FUN),
        SourceNode::App(f, a) => paren(format!("{} {}", src(f, FUN), src(a, ARG)), ctx >= ARG),
        SourceNode::Proj(i, u) => format!("pi{i} {}", src(u, ARG)),
        SourceNode::Tuple(items) => format!("<{}>", items.iter().map(|u| src(u, TOP)).collect::<Vec<_>>().join(", ")),
    }
}

pub fn print_int(t: &IntTerm) -> String {
    int(t, TOP)
}

fn int(t: &IntTerm, ctx: u8) -> String {
    match t.node() {
        IntNode::Var(x) => x.name().to_string(),
        IntNode::App(f, a) => paren(format!("{} {}", int(f, FUN), int(a, ARG)), ctx >= ARG),
        IntNode::Proj(i, u) => format!("pi{i} {}", int(u, ARG)),
        IntNode::Tuple(items) => format!("<{}>", items.iter().map(|u| int(u, TOP)).collect::<Vec<_>>().join(", ")),
        IntNode::Closure { wrapped, params, body, bag } => {
            let bag = match bag {
                IntBag::Vars(vs) => vars(vs),
                IntBag::Vals(vs) => vs.iter().map(|u| int(u, TOP)).collect::<Vec<_>>().join(", "),
            };
            format!("[({}); ({}). {}]<{}>", vars(wrapped), vars(params), int(body, TOP), bag)
        }
    }
}

pub fn print_target(t: &TargetTerm) -> String {
    tgt(t, TOP)
}

fn tgt(t: &TargetTerm, ctx: u8) -> String {
    match t.node() {
        TargetNode::PVar(p) => {
            let b = if p.base == Base::L { "l" } else { "s" };
            format!("pi{} {b}", p.index)
        }
        TargetNode::App(f, a) => paren(format!("{} {}", tgt(f, FUN), tgt(a, ARG)), ctx >= ARG),
        TargetNode::Proj(i, u) => format!("pi{i} {}", tgt(u, ARG)),
        TargetNode::Tuple(items) => format!("<{}>", items.iter().map(|u| tgt(u, TOP)).collect::<Vec<_>>().join(", ")),
        TargetNode::Closure { n, m, body, bag } => {
            let bag = match bag {
                TargetBag::PVars(ps) => ps.iter().map(|p| tgt(&TargetTerm::pvar(*p), TOP)).collect::<Vec<_>>(),
                TargetBag::Vals(vs) => vs.iter().map(|u| tgt(u, TOP)).collect(),
            };
            format!("[^{{{n},{m}}} {}]<{}>", tgt(body, TOP), bag.join(", "))
        }
    }
}
