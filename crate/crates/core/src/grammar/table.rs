use super::delta::delta_vector;
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableEntry {
    pub u: Term,
    pub covered: BTreeSet<Term>,
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    /// Stop extending subsets whose Δ-vector is trivial.
    pub prune: bool,
    /// Largest subset size considered; `None` means unbounded.
    pub max_subset: Option<usize>,
    /// Maximum number of subsets examined before giving up.
    pub budget: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { prune: true, max_subset: None, budget: 1 << 17 }
    }
}

impl TableOptions {
    pub fn pairs() -> Self {
        TableOptions { max_subset: Some(2), ..Self::default() }
    }
}

/// Rows keyed by the set of values of the abstraction variable.
#[derive(Clone, Debug, Default)]
pub struct DeltaTable {
    pub alpha: String,
    pub rows: BTreeMap<BTreeSet<Term>, Vec<TableEntry>>,
    pub subsets_visited: usize,
    /// The budget ran out before the table was complete.
    pub overflow: bool,
}

impl DeltaTable {
    pub fn entries(&self) -> usize {
        self.rows.values().map(Vec::len).sum()
    }
}

/// Grows subsets of `ts` one later element at a time, storing every
/// non-trivial Δ-vector under its key.
pub fn fill_delta_table(ts: &[Term], alpha: &str, opts: &TableOptions) -> DeltaTable {
    let mut table = DeltaTable { alpha: alpha.to_string(), ..Default::default() };
    let mut frontier: Vec<Vec<usize>> = (0..ts.len()).map(|i| vec![i]).collect();
    let mut size = 1;
    while !frontier.is_empty() && opts.max_subset.map_or(true, |m| size < m) {
        let mut next = Vec::new();
        for subset in &frontier {
            let last = *subset.last().expect("subsets are nonempty");
            for j in last + 1..ts.len() {
                if table.subsets_visited >= opts.budget {
                    table.overflow = true;
                    log::debug!("delta table budget of {} subsets exhausted", opts.budget);
                    return table;
                }
                table.subsets_visited += 1;
                let mut ext = subset.clone();
                ext.push(j);
                let terms: Vec<Term> = ext.iter().map(|&i| ts[i].clone()).collect();
                let d = delta_vector(&terms, alpha);
                match d.s {
                    Some(s) if !d.is_trivial(alpha) => {
                        let key: BTreeSet<Term> = s.into_iter().collect();
                        table
                            .rows
                            .entry(key)
                            .or_default()
                            .push(TableEntry { u: d.u, covered: terms.into_iter().collect() });
                        next.push(ext);
                    }
                    _ if !opts.prune => next.push(ext),
                    _ => {}
                }
            }
        }
        frontier = next;
        size += 1;
    }
    table
}
