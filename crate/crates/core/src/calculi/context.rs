use crate::syntax::{Blocker, TermOps, View};

/// One layer of a right-to-left evaluation context.
#[derive(Clone, Debug, PartialEq)]
pub enum Frame<T> {
    /// `t C`: the function is pending, the hole is the argument.
    Arg(T),
    /// `C v`: the hole is the function, the argument is a value.
    Fun(T),
    Proj(usize),
    /// `⟨t̄, C, v̄⟩`.
    Tuple { before: Vec<T>, after: Vec<T> },
}

/// An evaluation context, outermost frame first.
#[derive(Clone, Debug, PartialEq)]
pub struct Context<T> {
    pub frames: Vec<Frame<T>>,
}

impl<T> Default for Context<T> {
    fn default() -> Self {
        Context { frames: Vec::new() }
    }
}

impl<T: TermOps> Context<T> {
    pub fn hole() -> Self {
        Context::default()
    }

    pub fn plug(&self, t: T) -> T {
        self.frames.iter().rev().fold(t, |acc, fr| match fr {
            Frame::Arg(f) => T::mk_app(f.clone(), acc),
            Frame::Fun(a) => T::mk_app(acc, a.clone()),
            Frame::Proj(i) => T::mk_proj(*i, acc),
            Frame::Tuple { before, after } => {
                let mut items = before.clone();
                items.push(acc);
                items.extend(after.iter().cloned());
                T::mk_tuple(items)
            }
        })
    }

    /// `self⟨inner⟩`.
    pub fn compose(mut self, inner: Context<T>) -> Self {
        self.frames.extend(inner.frames);
        self
    }

    /// Child indices from the root to the hole.
    pub fn path(&self) -> Vec<usize> {
        self.frames
            .iter()
            .map(|fr| match fr {
                Frame::Arg(_) => 1,
                Frame::Fun(_) => 0,
                Frame::Proj(_) => 0,
                Frame::Tuple { before, .. } => before.len(),
            })
            .collect()
    }

    pub fn try_map<U, E>(&self, mut f: impl FnMut(&T) -> Result<U, E>) -> Result<Context<U>, E> {
        let mut frames = Vec::with_capacity(self.frames.len());
        for fr in &self.frames {
            frames.push(match fr {
                Frame::Arg(t) => Frame::Arg(f(t)?),
                Frame::Fun(t) => Frame::Fun(f(t)?),
                Frame::Proj(i) => Frame::Proj(*i),
                Frame::Tuple { before, after } => Frame::Tuple {
                    before: before.iter().map(&mut f).collect::<Result<_, _>>()?,
                    after: after.iter().map(&mut f).collect::<Result<_, _>>()?,
                },
            });
        }
        Ok(Context { frames })
    }

    /// Whether every frame fits the context grammar (argument frames hold
    /// values, tuple suffixes are values).
    pub fn is_evaluation_context(&self) -> bool {
        self.frames.iter().all(|fr| match fr {
            Frame::Arg(_) | Frame::Proj(_) => true,
            Frame::Fun(a) => a.is_value(),
            Frame::Tuple { after, .. } => after.iter().all(|v| v.is_value()),
        })
    }
}

/// Result of splitting a term at its next redex.
#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition<T> {
    Value,
    /// The redex has value subterms in all evaluated positions; it may still clash.
    Redex(Context<T>, T),
    Stuck(Context<T>, Blocker),
}

/// Right-to-left weak decomposition.
pub fn decompose<T: TermOps>(t: &T) -> Decomposition<T> {
    let mut rev_frames = Vec::new();
    let r = go(t, &mut rev_frames);
    let frames = rev_frames.into_iter().rev().collect();
    match r {
        Inner::Value => Decomposition::Value,
        Inner::Redex(r) => Decomposition::Redex(Context { frames }, r),
        Inner::Stuck(b) => Decomposition::Stuck(Context { frames }, b),
    }
}

enum Inner<T> {
    Value,
    Redex(T),
    Stuck(Blocker),
}

// Frames are pushed innermost first while unwinding.
fn go<T: TermOps>(t: &T, frames: &mut Vec<Frame<T>>) -> Inner<T> {
    match t.view() {
        View::Leaf => Inner::Value,
        View::Stuck(b) => Inner::Stuck(b),
        View::Tuple(items) => {
            for j in (0..items.len()).rev() {
                match go(&items[j], frames) {
                    Inner::Value => continue,
                    other => {
                        frames.push(Frame::Tuple { before: items[..j].to_vec(), after: items[j + 1..].to_vec() });
                        return other;
                    }
                }
            }
            Inner::Value
        }
        View::Proj(i, u) => match go(u, frames) {
            Inner::Value => Inner::Redex(t.clone()),
            other => {
                frames.push(Frame::Proj(i));
                other
            }
        },
        View::App(f, a) => match go(a, frames) {
            Inner::Value => match go(f, frames) {
                Inner::Value => Inner::Redex(t.clone()),
                other => {
                    frames.push(Frame::Fun(a.clone()));
                    other
                }
            },
            other => {
                frames.push(Frame::Arg(f.clone()));
                other
            }
        },
    }
}
