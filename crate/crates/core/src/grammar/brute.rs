use super::{fresh_var, TreeGrammar};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

/// Terms obtained from `t` by replacing a nonempty set of occurrences of one
/// of its subterms with `alpha`.
fn abstractions(t: &Term, alpha: &Term, out: &mut BTreeSet<Term>) {
    let positions = t.positions();
    let mut by_sub: BTreeMap<&Term, Vec<&Vec<usize>>> = BTreeMap::new();
    for p in &positions {
        by_sub.entry(t.subterm_at(p).expect("own position")).or_default().push(p);
    }
    for occ in by_sub.values() {
        for mask in 1u32..(1 << occ.len()) {
            let mut u = t.clone();
            for (i, p) in occ.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    u = u.replace_at(p, alpha).expect("occurrences do not overlap");
                }
            }
            out.insert(u);
        }
    }
}

struct Enum<'a> {
    full: u64,
    masks: &'a [(usize, u64)],
    limit: usize,
    covers: Vec<Vec<usize>>,
}

impl Enum<'_> {
    fn run(&mut self, from: usize, chosen: &mut Vec<usize>, covered: u64) {
        if covered == self.full {
            self.covers.push(chosen.clone());
        }
        if chosen.len() == self.limit {
            return;
        }
        for i in from..self.masks.len() {
            chosen.push(self.masks[i].0);
            self.run(i + 1, chosen, covered | self.masks[i].1);
            chosen.pop();
        }
    }
}

/// Every single-level grammar of size at most `bound` whose language is
/// exactly `terms`, with productions drawn from the subterms of `terms` and
/// base terms that are members of `terms` or abstractions of them. The
/// base-only grammar is included when `bound ≥ |terms|`.
pub fn brute_force_grammars(terms: &BTreeSet<Term>, bound: usize) -> Vec<TreeGrammar> {
    assert!(terms.len() <= 64, "brute force is limited to 64 terms");
    let alpha = fresh_var("α", terms);
    let av = Term::var(alpha.clone());
    let n = terms.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let index: BTreeMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let subterms: Vec<Term> = terms.iter().flat_map(Term::subterms).collect::<BTreeSet<_>>().into_iter().collect();
    let mut cands = BTreeSet::new();
    terms.iter().for_each(|t| abstractions(t, &av, &mut cands));
    // For each abstraction: which subterms it maps into `terms`, and to which element.
    let abs: Vec<(Term, BTreeMap<usize, usize>)> = cands
        .into_iter()
        .filter(|u| u.contains_var(&alpha))
        .map(|u| {
            let hits = subterms
                .iter()
                .enumerate()
                .filter_map(|(k, s)| index.get(&u.subst1(&alpha, s)).map(|&e| (k, e)))
                .collect();
            (u, hits)
        })
        .collect();

    let mut out = Vec::new();
    if bound >= n {
        out.push(TreeGrammar::new(terms.clone(), Vec::new()));
    }
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..abs.len()).collect())];
    while let Some((s, usable)) = stack.pop() {
        if !s.is_empty() {
            let limit = bound.saturating_sub(s.len());
            if limit > 0 && s.len() + n.div_ceil(s.len()) <= bound {
                let mut masks: Vec<(usize, u64)> = usable
                    .iter()
                    .map(|&i| (i, s.iter().fold(0u64, |m, k| m | 1 << abs[i].1[k])))
                    .collect();
                masks.extend(terms.iter().enumerate().map(|(e, _)| (abs.len() + e, 1u64 << e)));
                let mut en = Enum { full, masks: &masks, limit, covers: Vec::new() };
                en.run(0, &mut Vec::new(), 0);
                let key: BTreeSet<Term> = s.iter().map(|&k| subterms[k].clone()).collect();
                for cover in en.covers {
                    if cover.iter().all(|&i| i >= abs.len()) {
                        continue;
                    }
                    let base = cover
                        .iter()
                        .map(|&i| if i < abs.len() { abs[i].0.clone() } else { terms.iter().nth(i - abs.len()).expect("index").clone() })
                        .collect();
                    out.push(TreeGrammar::single(base, alpha.clone(), key.clone()));
                }
            }
        }
        if s.len() + 1 >= bound {
            continue;
        }
        let next = s.last().map_or(0, |&k| k + 1);
        for k in next..subterms.len() {
            let still: Vec<usize> = usable.iter().copied().filter(|&i| abs[i].1.contains_key(&k)).collect();
            if still.is_empty() {
                continue;
            }
            let mut s2 = s.clone();
            s2.push(k);
            stack.push((s2, still));
        }
    }
    out.sort_by_key(TreeGrammar::cmp_key);
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fa(n: usize) -> Term {
        Term::iterate("f", n, Term::cnst("a"))
    }

    #[test]
    fn chain_of_four() {
        let ts: BTreeSet<Term> = (0..4).map(fa).collect();
        let gs = brute_force_grammars(&ts, 4);
        let al = Term::var("α");
        let target = TreeGrammar::single([al.clone(), Term::app("f", vec![al])].into(), "α", [fa(0), fa(2)].into());
        assert!(gs.contains(&target));
        assert!(gs.iter().all(|g| g.size() <= 4 && g.language() == ts));
    }

    #[test]
    fn singleton() {
        let ts: BTreeSet<Term> = [Term::cnst("a")].into();
        let gs = brute_force_grammars(&ts, 1);
        assert_eq!(gs, vec![TreeGrammar::new(ts, vec![])]);
    }
}
