use crate::term::Term;

/// Common structure `u` of a term sequence and the per-term values of its
/// single abstraction variable; `None` when the terms are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub u: Term,
    pub s: Option<Vec<Term>>,
}

impl Delta {
    /// No common structure: `u` is the abstraction variable itself.
    pub fn is_trivial(&self, alpha: &str) -> bool {
        self.u == Term::var(alpha)
    }
}

pub fn delta_vector(ts: &[Term], alpha: &str) -> Delta {
    assert!(!ts.is_empty(), "delta of an empty sequence");
    let whole = || Delta { u: Term::var(alpha), s: Some(ts.to_vec()) };
    if ts.iter().all(|t| *t == ts[0]) {
        return Delta { u: ts[0].clone(), s: None };
    }
    let Term::App(head, args0) = &ts[0] else { return whole() };
    let same_head = ts.iter().all(|t| matches!(t, Term::App(h, a) if h == head && a.len() == args0.len()));
    if !same_head {
        return whole();
    }
    let mut us = Vec::with_capacity(args0.len());
    let mut merged: Option<Vec<Term>> = None;
    for k in 0..args0.len() {
        let column: Vec<Term> = ts.iter().map(|t| t.args()[k].clone()).collect();
        let d = delta_vector(&column, alpha);
        if let Some(s) = d.s {
            match &merged {
                Some(m) if *m != s => return whole(),
                _ => merged = Some(s),
            }
        }
        us.push(d.u);
    }
    Delta { u: Term::App(head.clone(), us), s: merged }
}
