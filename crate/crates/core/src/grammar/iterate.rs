use super::search::{find_grammars, FindOptions};
use super::table::{fill_delta_table, TableOptions};
use super::{fresh_var, Level, TreeGrammar};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct IterateOptions {
    pub max_levels: usize,
    /// Subset budget for the unrestricted Δ-table at each step.
    pub budget: usize,
    /// Prefix of the final nonterminal names.
    pub var_prefix: String,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions { max_levels: 1, budget: 1 << 13, var_prefix: "α".into() }
    }
}

/// A chain found below some term set: base plus levels, innermost first.
#[derive(Clone, Debug)]
struct Chain {
    base: BTreeSet<Term>,
    /// Levels as they appear in the final grammar.
    levels: Vec<Level>,
    /// Symbol count of each compression step, in the order the steps were taken.
    step_symbols: Vec<usize>,
}

impl Chain {
    fn grammar(&self) -> TreeGrammar {
        TreeGrammar::new(self.base.clone(), self.levels.clone())
    }

    fn size(&self) -> usize {
        self.grammar().size()
    }

    /// Smaller is better: size, then more levels, then fewer symbols in the
    /// earliest steps.
    fn key(&self) -> (usize, std::cmp::Reverse<usize>, Vec<usize>, usize, String) {
        let g = self.grammar();
        (g.size(), std::cmp::Reverse(g.levels.len()), self.step_symbols.clone(), g.symbols(), g.to_string())
    }
}

struct Search<'a> {
    opts: &'a IterateOptions,
    temp_prefix: String,
    memo: BTreeMap<(BTreeSet<Term>, usize), Vec<Chain>>,
}

impl Search<'_> {
    /// Single-level compressions of `current` worth trying.
    fn steps(&self, current: &BTreeSet<Term>, var: &str) -> Vec<TreeGrammar> {
        let ts: Vec<Term> = current.iter().cloned().collect();
        let find = |opts: &TableOptions| {
            let table = fill_delta_table(&ts, var, opts);
            if table.overflow {
                return Vec::new();
            }
            find_grammars(current, &table, &FindOptions::default())
        };
        let mut out: Vec<TreeGrammar> = find(&TableOptions::pairs()).into_iter().take(1).collect();
        out.extend(find(&TableOptions { budget: self.opts.budget, ..TableOptions::default() }));
        out.retain(|g| !g.is_trivial() && g.size() <= current.len() && g.base.len() < current.len());
        out.sort_by_key(TreeGrammar::cmp_key);
        out.dedup();
        out
    }

    /// All best chains for `current` with at most `left` further levels,
    /// tied on (size, level count).
    fn best(&mut self, current: &BTreeSet<Term>, depth: usize, left: usize) -> Vec<Chain> {
        let memo_key = (current.clone(), left);
        if let Some(r) = self.memo.get(&memo_key) {
            return r.clone();
        }
        let mut cands = vec![Chain { base: current.clone(), levels: Vec::new(), step_symbols: Vec::new() }];
        if left > 0 {
            let var = format!("{}{depth}", self.temp_prefix);
            for g in self.steps(current, &var) {
                let level = g.levels[0].clone();
                for sub in self.best(&g.base, depth + 1, left - 1) {
                    let mut levels = sub.levels.clone();
                    levels.push(level.clone());
                    let mut step_symbols = vec![g.symbols()];
                    step_symbols.extend(sub.step_symbols);
                    cands.push(Chain { base: sub.base, levels, step_symbols });
                }
            }
        }
        cands.sort_by_key(Chain::key);
        let top = (cands[0].size(), cands[0].levels.len());
        cands.retain(|c| (c.size(), c.levels.len()) == top);
        self.memo.insert(memo_key, cands.clone());
        cands
    }
}

/// Every best multi-level grammar for `terms`, compressing the base of each
/// found level again until no step helps or `max_levels` is reached.
pub fn iterate_grammars_all(terms: &BTreeSet<Term>, opts: &IterateOptions) -> Vec<TreeGrammar> {
    let temp_prefix = fresh_var("_β", terms);
    let mut s = Search { opts, temp_prefix, memo: BTreeMap::new() };
    let chains = s.best(terms, 0, opts.max_levels);
    let mut out: Vec<TreeGrammar> = chains
        .iter()
        .filter(|c| !c.levels.is_empty())
        .map(|c| c.grammar().canonical_names(&opts.var_prefix))
        .collect();
    if out.is_empty() {
        return vec![TreeGrammar::trivial(terms, &format!("{}1", opts.var_prefix))];
    }
    let mut seen = BTreeSet::new();
    out.retain(|g| seen.insert(g.to_string()));
    out
}

pub fn iterate_grammars(terms: &BTreeSet<Term>, opts: &IterateOptions) -> TreeGrammar {
    iterate_grammars_all(terms, opts).swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fa(n: usize) -> Term {
        Term::iterate("f", n, Term::cnst("a"))
    }

    #[test]
    fn eight_terms_two_levels() {
        let ts: BTreeSet<Term> = (0..8).map(fa).collect();
        let g = iterate_grammars(&ts, &IterateOptions { max_levels: 2, ..Default::default() });
        assert_eq!(g.to_string(), "{α1, f(α1)} ∘_α1 {α2, f(f(α2))} ∘_α2 {a, f(f(f(f(a))))}");
        assert_eq!(g.language(), ts);
    }

    #[test]
    fn incompressible_is_trivial() {
        let ts: BTreeSet<Term> = [Term::cnst("a"), Term::cnst("b")].into();
        let g = iterate_grammars(&ts, &IterateOptions { max_levels: 3, ..Default::default() });
        assert!(g.is_trivial());
        assert_eq!(g.language(), ts);
    }
}
