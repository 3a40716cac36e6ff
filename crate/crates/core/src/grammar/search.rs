use super::table::DeltaTable;
use super::TreeGrammar;
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Default)]
pub struct FindOptions {
    /// Also return grammars up to this much larger than the minimum.
    pub slack: usize,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn union(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Cover<'a> {
    key_len: usize,
    n: usize,
    entries: &'a [(Term, Bits, usize)],
    by_elem: Vec<Vec<usize>>,
    max_cov: usize,
    bound: &'a mut usize,
    slack: usize,
    found: &'a mut Vec<(usize, Vec<usize>)>,
}

impl Cover<'_> {
    fn limit(&self) -> usize {
        *self.bound
    }

    fn search(&mut self, chosen: &mut Vec<usize>, covered: &Bits) {
        let have = covered.count();
        let uncovered = self.n - have;
        let size = self.key_len + chosen.len();
        if uncovered == 0 {
            if size <= self.limit() {
                self.found.push((size, chosen.clone()));
                *self.bound = (*self.bound).min(size + self.slack);
            }
            return;
        }
        if size + uncovered.div_ceil(self.max_cov) > self.limit() {
            return;
        }
        let e = (0..self.n).find(|&i| !covered.get(i)).expect("uncovered element exists");
        for k in 0..self.by_elem[e].len() {
            let idx = self.by_elem[e][k];
            chosen.push(idx);
            let next = covered.union(&self.entries[idx].1);
            self.search(chosen, &next);
            chosen.pop();
        }
    }
}

/// Single-level grammars `U ∘_α S` with language exactly `terms`, built by
/// covering `terms` with the entries of one table row. Returns the grammars
/// within `slack` of the minimum, smallest first. Grammars larger than
/// `terms` itself are never returned; when none is left, the result is only
/// the trivial grammar.
pub fn find_grammars(terms: &BTreeSet<Term>, table: &DeltaTable, opts: &FindOptions) -> Vec<TreeGrammar> {
    let alpha = table.alpha.clone();
    let index: BTreeMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let n = terms.len();
    let mask = |ts: &BTreeSet<Term>| -> Option<Bits> {
        let mut b = Bits::new(n);
        for t in ts {
            b.set(*index.get(t)?);
        }
        Some(b)
    };
    let mut keys: Vec<&BTreeSet<Term>> = table.rows.keys().collect();
    keys.sort_by_key(|k| k.len());
    let mut bound = n;
    let mut results: Vec<TreeGrammar> = Vec::new();
    for key in keys {
        if key.len() + 1 > bound {
            continue;
        }
        let mut entries: BTreeMap<Term, (Bits, usize)> = BTreeMap::new();
        for e in &table.rows[key] {
            if let Some(b) = mask(&e.covered) {
                entries.insert(e.u.clone(), (b, e.covered.len()));
            }
        }
        if let Some(b) = mask(key) {
            entries.insert(Term::var(alpha.clone()), (b, key.len()));
        }
        for t in terms {
            entries.entry(t.clone()).or_insert_with(|| (mask(&BTreeSet::from([t.clone()])).expect("member"), 1));
        }
        let mut entries: Vec<(Term, Bits, usize)> = entries.into_iter().map(|(u, (b, c))| (u, b, c)).collect();
        entries.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
        let mut by_elem = vec![Vec::new(); n];
        for (i, (_, b, _)) in entries.iter().enumerate() {
            for (e, list) in by_elem.iter_mut().enumerate() {
                if b.get(e) {
                    list.push(i);
                }
            }
        }
        let max_cov = entries.iter().map(|e| e.2).max().unwrap_or(1);
        let mut found = Vec::new();
        Cover { key_len: key.len(), n, entries: &entries, by_elem, max_cov, bound: &mut bound, slack: opts.slack, found: &mut found }
            .search(&mut Vec::new(), &Bits::new(n));
        for (_, chosen) in found {
            let base: BTreeSet<Term> = chosen.iter().map(|&i| entries[i].0.clone()).collect();
            results.push(TreeGrammar::single(base, alpha.clone(), key.clone()));
        }
    }
    let best = results.iter().map(TreeGrammar::size).min();
    let mut out: Vec<TreeGrammar> = match best {
        Some(b) => results.into_iter().filter(|g| g.size() <= b + opts.slack).collect(),
        None => return vec![TreeGrammar::trivial(terms, &alpha)],
    };
    out.sort_by_key(TreeGrammar::cmp_key);
    out.dedup();
    out
}
