//! Totally rigid acyclic tree grammars over term sets.

mod brute;
mod delta;
mod derivation;
mod iterate;
mod search;
mod table;

pub use brute::brute_force_grammars;
pub use delta::{delta_vector, Delta};
pub use derivation::{derive_rigid, language_by_derivation};
pub use iterate::{iterate_grammars, iterate_grammars_all, IterateOptions};
pub use search::{find_grammars, FindOptions};
pub use table::{fill_delta_table, DeltaTable, TableEntry, TableOptions};

use crate::error::{Error, Result};
use crate::parse::parse_term;
use crate::term::Term;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    pub var: String,
    pub productions: BTreeSet<Term>,
}

/// `base ∘_{α1} S1 ∘ … ∘_{αn} Sn`; productions of level `i` may only mention
/// the variables of later levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeGrammar {
    pub base: BTreeSet<Term>,
    pub levels: Vec<Level>,
}

impl TreeGrammar {
    pub fn new(base: BTreeSet<Term>, levels: Vec<Level>) -> TreeGrammar {
        TreeGrammar { base, levels }
    }

    pub fn single(base: BTreeSet<Term>, var: impl Into<String>, productions: BTreeSet<Term>) -> TreeGrammar {
        TreeGrammar { base, levels: vec![Level { var: var.into(), productions }] }
    }

    /// `{α} ∘_α T`.
    pub fn trivial(terms: &BTreeSet<Term>, var: &str) -> TreeGrammar {
        TreeGrammar::single(BTreeSet::from([Term::var(var)]), var, terms.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
            || (self.levels.len() == 1 && self.base.len() == 1 && self.base.contains(&Term::var(self.levels[0].var.clone())))
    }

    pub fn size(&self) -> usize {
        self.base.len() + self.levels.iter().map(|l| l.productions.len()).sum::<usize>()
    }

    /// Total number of symbol occurrences in all productions.
    pub fn symbols(&self) -> usize {
        self.base_symbols() + self.levels.iter().flat_map(|l| &l.productions).map(Term::size).sum::<usize>()
    }

    pub fn base_symbols(&self) -> usize {
        self.base.iter().map(Term::size).sum()
    }

    pub fn vars(&self) -> Vec<String> {
        self.levels.iter().map(|l| l.var.clone()).collect()
    }

    /// Deterministic preference among grammars of equal size.
    pub fn cmp_key(&self) -> (usize, usize, usize, String) {
        (self.size(), self.symbols(), self.base_symbols(), self.to_string())
    }

    pub fn check_invariants(&self) -> Result<()> {
        let vars: Vec<String> = self.vars();
        let all: BTreeSet<&String> = vars.iter().collect();
        if all.len() != vars.len() {
            return Err(Error::Input(format!("repeated nonterminal in {self}")));
        }
        for u in &self.base {
            if let Some(v) = u.variables().into_iter().find(|v| !all.contains(v)) {
                return Err(Error::Input(format!("base term {u} mentions unknown variable {v}")));
            }
        }
        for (i, l) in self.levels.iter().enumerate() {
            let later: BTreeSet<&String> = vars[i + 1..].iter().collect();
            for s in &l.productions {
                if let Some(v) = s.variables().into_iter().find(|v| !later.contains(v)) {
                    return Err(Error::Input(format!("production {s} of {} mentions {v}", l.var)));
                }
            }
        }
        Ok(())
    }

    /// `{u[α1\t1]⋯[αn\tn]}`, substituting level by level.
    pub fn language(&self) -> BTreeSet<Term> {
        let mut cur = self.base.clone();
        for l in &self.levels {
            let mut next = BTreeSet::new();
            for u in &cur {
                if u.contains_var(&l.var) {
                    for s in &l.productions {
                        next.insert(u.subst1(&l.var, s));
                    }
                } else if !l.productions.is_empty() {
                    next.insert(u.clone());
                }
            }
            cur = next;
        }
        cur
    }

    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> TreeGrammar {
        let r = |ts: &BTreeSet<Term>| ts.iter().map(|t| t.rename_vars(map)).collect();
        TreeGrammar {
            base: r(&self.base),
            levels: self
                .levels
                .iter()
                .map(|l| Level { var: map.get(&l.var).cloned().unwrap_or_else(|| l.var.clone()), productions: r(&l.productions) })
                .collect(),
        }
    }

    /// Renames the nonterminals to `prefix1..prefixn` in level order.
    pub fn canonical_names(&self, prefix: &str) -> TreeGrammar {
        let map = self.levels.iter().enumerate().map(|(i, l)| (l.var.clone(), format!("{prefix}{}", i + 1))).collect();
        self.rename_vars(&map)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = GrammarJson {
            base: render_sorted(&self.base),
            levels: self.levels.iter().map(|l| LevelJson { var: l.var.clone(), productions: render_sorted(&l.productions) }).collect(),
        };
        serde_json::to_value(j).expect("grammar JSON is always serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TreeGrammar> {
        let j: GrammarJson = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("grammar JSON: {e}")))?;
        let vars: BTreeSet<String> = j.levels.iter().map(|l| l.var.clone()).collect();
        let p = |ts: &[String]| ts.iter().map(|t| parse_term(t, &vars)).collect::<Result<BTreeSet<Term>>>();
        let g = TreeGrammar {
            base: p(&j.base)?,
            levels: j.levels.iter().map(|l| Ok(Level { var: l.var.clone(), productions: p(&l.productions)? })).collect::<Result<_>>()?,
        };
        g.check_invariants()?;
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct LevelJson {
    var: String,
    productions: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GrammarJson {
    base: Vec<String>,
    #[serde(default)]
    levels: Vec<LevelJson>,
}

/// Terms rendered and ordered by (size, text).
pub fn render_sorted(ts: &BTreeSet<Term>) -> Vec<String> {
    let mut v: Vec<&Term> = ts.iter().collect();
    v.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.to_string().cmp(&b.to_string())));
    v.into_iter().map(ToString::to_string).collect()
}

pub fn render_set(ts: &BTreeSet<Term>) -> String {
    format!("{{{}}}", render_sorted(ts).join(", "))
}

impl fmt::Display for TreeGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_set(&self.base))?;
        for l in &self.levels {
            write!(f, " ∘_{} {}", l.var, render_set(&l.productions))?;
        }
        Ok(())
    }
}

pub fn cmp_grammars(a: &TreeGrammar, b: &TreeGrammar) -> Ordering {
    a.cmp_key().cmp(&b.cmp_key())
}

/// A variable name not occurring in any of the terms.
pub fn fresh_var(prefix: &str, terms: &BTreeSet<Term>) -> String {
    let used: BTreeSet<String> = terms.iter().flat_map(|t| t.variables()).collect();
    let syms: BTreeSet<String> = terms.iter().flat_map(|t| t.subterms()).map(|t| t.head().to_string()).collect();
    (0..).map(|i| if i == 0 { prefix.to_string() } else { format!("{prefix}{i}") })
        .find(|v| !used.contains(v) && !syms.contains(v))
        .expect("unbounded name supply")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, t: Term) -> Term {
        Term::iterate("f", n, t)
    }

    fn a() -> Term {
        Term::cnst("a")
    }

    #[test]
    fn language_of_single_level() {
        let al = Term::var("α");
        let g = TreeGrammar::single(
            [al.clone(), f(1, al.clone()), f(2, al)].into(),
            "α",
            [a(), f(3, a()), f(6, a())].into(),
        );
        let expected: BTreeSet<Term> = (0..9).map(|k| f(k, a())).collect();
        assert_eq!(g.language(), expected);
        assert_eq!(g.size(), 6);
    }

    #[test]
    fn language_of_two_levels() {
        let (a1, a2) = (Term::var("α1"), Term::var("α2"));
        let g = TreeGrammar::new(
            [a1.clone(), f(1, a1)].into(),
            vec![
                Level { var: "α1".into(), productions: [a2.clone(), f(2, a2)].into() },
                Level { var: "α2".into(), productions: [a(), f(4, a())].into() },
            ],
        );
        g.check_invariants().unwrap();
        assert_eq!(g.language(), (0..8).map(|k| f(k, a())).collect());
        let json = g.to_json();
        assert_eq!(TreeGrammar::from_json(&json).unwrap(), g);
    }

    #[test]
    fn base_only_and_trivial() {
        let t: BTreeSet<Term> = [a(), Term::cnst("b")].into();
        assert_eq!(TreeGrammar::new(t.clone(), vec![]).language(), t);
        let tr = TreeGrammar::trivial(&t, "α");
        assert!(tr.is_trivial());
        assert_eq!(tr.language(), t);
    }

    #[test]
    fn variable_condition_is_checked() {
        let g = TreeGrammar::new(
            [Term::var("α1")].into(),
            vec![
                Level { var: "α1".into(), productions: [a()].into() },
                Level { var: "α2".into(), productions: [Term::var("α1")].into() },
            ],
        );
        assert!(g.check_invariants().is_err());
    }
}
