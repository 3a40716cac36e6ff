use super::TreeGrammar;
use crate::term::{Position, Term};
use std::collections::BTreeSet;

type Derived = (Term, Vec<(String, Position)>);

struct Deriver<'a> {
    productions: &'a [(String, Term)],
    nonterminals: BTreeSet<&'a str>,
    rigid: &'a BTreeSet<String>,
    max_depth: usize,
}

impl Deriver<'_> {
    /// Terminal terms derivable from `t`, with the positions at which rigid
    /// nonterminals were rewritten.
    fn expand(&self, t: &Term, depth: usize) -> Vec<Derived> {
        match t {
            Term::Var(v) if self.nonterminals.contains(v.as_str()) => {
                if depth == self.max_depth {
                    return Vec::new();
                }
                let mut out = Vec::new();
                for (lhs, rhs) in self.productions.iter().filter(|(l, _)| l == v) {
                    for (r, mut recs) in self.expand(rhs, depth + 1) {
                        if self.rigid.contains(lhs) {
                            recs.push((lhs.clone(), Vec::new()));
                        }
                        out.push((r, recs));
                    }
                }
                out
            }
            Term::Var(_) => vec![(t.clone(), Vec::new())],
            Term::App(f, args) => {
                let mut acc: Vec<(Vec<Term>, Vec<(String, Position)>)> = vec![(Vec::new(), Vec::new())];
                for (i, a) in args.iter().enumerate() {
                    let options = self.expand(a, depth);
                    let mut next = Vec::with_capacity(acc.len() * options.len());
                    for (done, recs) in &acc {
                        for (r, rrecs) in &options {
                            let mut d = done.clone();
                            d.push(r.clone());
                            let mut rs = recs.clone();
                            rs.extend(rrecs.iter().map(|(n, p)| {
                                let mut q = vec![i + 1];
                                q.extend(p);
                                (n.clone(), q)
                            }));
                            next.push((d, rs));
                        }
                    }
                    acc = next;
                }
                acc.into_iter().map(|(a, r)| (Term::App(f.clone(), a), r)).collect()
            }
        }
    }
}

/// Language of a regular tree grammar restricted to derivations where every
/// rigid nonterminal's occurrences end up as equal subterms. Nonterminals are
/// variables named on a left-hand side; rewriting nests at most `max_depth` deep.
pub fn derive_rigid(
    axioms: &[Term],
    productions: &[(String, Term)],
    rigid: &BTreeSet<String>,
    max_depth: usize,
) -> BTreeSet<Term> {
    let d = Deriver {
        productions,
        nonterminals: productions.iter().map(|(l, _)| l.as_str()).collect(),
        rigid,
        max_depth,
    };
    let mut out = BTreeSet::new();
    for ax in axioms {
        for (t, recs) in d.expand(ax, 0) {
            let consistent = rigid.iter().all(|nt| {
                let mut subs = recs.iter().filter(|(n, _)| n == nt).map(|(_, p)| t.subterm_at(p));
                match subs.next() {
                    None => true,
                    Some(first) => subs.all(|s| s == first),
                }
            });
            if consistent {
                out.insert(t);
            }
        }
    }
    out
}

/// Language from derivations and the rigidity condition, independent of
/// level-by-level substitution.
pub fn language_by_derivation(g: &TreeGrammar) -> BTreeSet<Term> {
    let productions: Vec<(String, Term)> =
        g.levels.iter().flat_map(|l| l.productions.iter().map(|s| (l.var.clone(), s.clone()))).collect();
    let axioms: Vec<Term> = g.base.iter().cloned().collect();
    let rigid = g.vars().into_iter().collect();
    derive_rigid(&axioms, &productions, &rigid, g.levels.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigid_pairs() {
        let s = |n| Term::iterate("s", n, Term::cnst("0"));
        let (a, b) = (Term::var("α"), Term::var("β"));
        let prods = vec![
            ("α".to_string(), s(0)),
            ("α".to_string(), Term::app("s", vec![b.clone()])),
            ("β".to_string(), s(0)),
            ("β".to_string(), Term::app("s", vec![b])),
        ];
        let axiom = Term::app("f", vec![a.clone(), a]);
        let lang = derive_rigid(&[axiom], &prods, &BTreeSet::from(["α".to_string()]), 3);
        let pair = |n| Term::app("f", vec![s(n), s(n)]);
        assert_eq!(lang, BTreeSet::from([pair(0), pair(1), pair(2)]));
    }

    #[test]
    fn trivial_grammar() {
        let ts: BTreeSet<Term> = [Term::cnst("a"), Term::app("g", vec![Term::cnst("b")])].into();
        assert_eq!(language_by_derivation(&TreeGrammar::trivial(&ts, "α")), ts);
    }
}
