//! Seeded generation of closed source terms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculi::{normalize_source, Terminal};
use crate::syntax::{SourceNode, SourceTerm, Var};

/// Variable names drawn for binders. A small pool makes shadowing common.
const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_depth: u32,
    pub max_width: usize,
    pub seed: u64,
    /// Fuel of the source run used to filter candidates. Zero disables the filter.
    pub fuel: u64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { max_depth: 5, max_width: 3, seed: 0, fuel: 2_000 }
    }
}

/// A deterministic stream of closed terms.
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Generator {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator { cfg, rng }
    }

    /// Next closed term that evaluates to a value within the configured fuel.
    /// After a bounded number of rejected candidates, falls back to a fresh
    /// depth-1 term, which is always a value.
    pub fn next_term(&mut self) -> SourceTerm {
        for _ in 0..200 {
            let t = self.term(self.cfg.max_depth, &mut Vec::new());
            if self.cfg.fuel == 0 || normalize_source(&t, self.cfg.fuel).terminal == Terminal::Value {
                return t;
            }
        }
        self.term(1, &mut Vec::new())
    }

    /// Next candidate without the evaluation filter.
    pub fn next_raw(&mut self) -> SourceTerm {
        self.term(self.cfg.max_depth, &mut Vec::new())
    }

    fn width(&mut self, min: usize) -> usize {
        self.rng.gen_range(min..=self.cfg.max_width.max(min))
    }

    fn params(&mut self, k: usize) -> Vec<Var> {
        let mut pool: Vec<&str> = NAMES.to_vec();
        pool.shuffle(&mut self.rng);
        pool.into_iter().take(k.min(NAMES.len())).map(Var::from).collect()
    }

    fn abs(&mut self, depth: u32, arity: usize, scope: &mut Vec<Var>) -> SourceTerm {
        let params = self.params(arity);
        let mark = scope.len();
        scope.extend(params.iter().cloned());
        let body = self.term(depth.saturating_sub(1), scope);
        scope.truncate(mark);
        SourceTerm::abs(params, body)
    }

    fn items(&mut self, depth: u32, k: usize, scope: &mut Vec<Var>) -> Vec<SourceTerm> {
        (0..k).map(|_| self.term(depth.saturating_sub(1), scope)).collect()
    }

    fn leaf(&mut self, scope: &mut Vec<Var>) -> SourceTerm {
        if !scope.is_empty() && self.rng.gen_bool(0.7) {
            return SourceTerm::new(SourceNode::Var(scope.choose(&mut self.rng).unwrap().clone()));
        }
        if self.rng.gen_bool(0.5) {
            SourceTerm::tuple(Vec::new())
        } else {
            let k = self.width(0);
            self.abs(0, k, scope)
        }
    }

    fn term(&mut self, depth: u32, scope: &mut Vec<Var>) -> SourceTerm {
        if depth <= 1 {
            return self.leaf(scope);
        }
        match self.rng.gen_range(0..10) {
            0 | 1 => self.leaf(scope),
            2 => {
                let k = self.width(0);
                self.abs(depth, k, scope)
            }
            3 => {
                let k = self.width(0);
                SourceTerm::tuple(self.items(depth, k, scope))
            }
            4..=6 => {
                // β-redex with matching arity.
                let k = self.width(0);
                let f = self.abs(depth, k, scope);
                let args = self.items(depth, k, scope);
                SourceTerm::app(f, SourceTerm::tuple(args))
            }
            7 if !scope.is_empty() => {
                // Application of a bound variable; clashes are filtered later.
                let f = SourceTerm::new(SourceNode::Var(scope.choose(&mut self.rng).unwrap().clone()));
                let k = self.width(0);
                let args = self.items(depth, k, scope);
                SourceTerm::app(f, SourceTerm::tuple(args))
            }
            _ => {
                // Projection out of a visible tuple.
                let k = self.width(1);
                let i = self.rng.gen_range(1..=k);
                SourceTerm::proj(i, SourceTerm::tuple(self.items(depth, k, scope)))
            }
        }
    }
}

pub fn gen_term(cfg: GenConfig) -> SourceTerm {
    Generator::new(cfg).next_term()
}

/// `count` filtered terms from one seeded stream.
pub fn gen_terms(cfg: GenConfig, count: usize) -> Vec<SourceTerm> {
    let mut g = Generator::new(cfg);
    (0..count).map(|_| g.next_term()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_is_a_closed_value() {
        for seed in 0..50 {
            let t = gen_term(GenConfig { max_depth: 1, seed, ..GenConfig::default() });
            assert!(t.is_closed());
            assert!(crate::syntax::TermOps::is_value(&t), "{t}");
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = GenConfig { seed: 7, ..GenConfig::default() };
        assert_eq!(gen_terms(cfg.clone(), 50), gen_terms(cfg, 50));
    }

    #[test]
    fn raw_candidates_are_closed() {
        let mut g = Generator::new(GenConfig { seed: 3, ..GenConfig::default() });
        for _ in 0..300 {
            assert!(g.next_raw().is_closed());
        }
    }

    #[test]
    fn filtered_terms_reach_a_value() {
        let cfg = GenConfig { seed: 11, ..GenConfig::default() };
        let ts = gen_terms(cfg.clone(), 1000);
        let ok = ts
            .iter()
            .filter(|t| normalize_source(t, cfg.fuel).terminal == Terminal::Value)
            .count();
        assert!(ok * 100 >= 80 * ts.len(), "{ok}/1000");
    }
}
