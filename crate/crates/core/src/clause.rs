//! Clauses, CNF conversion, resolution and deductive closure.

use crate::formula::{Atom, Formula};
use crate::term::Substitution;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

pub type Clause = BTreeSet<Literal>;
pub type ClauseSet = BTreeSet<Clause>;

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { atom, positive: false }
    }

    pub fn negate(&self) -> Literal {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    pub fn size(&self) -> usize {
        self.atom.size() + usize::from(!self.positive)
    }

    pub fn substitute(&self, sigma: &Substitution) -> Literal {
        Literal { atom: self.atom.substitute(sigma), positive: self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "¬{}", self.atom)
        }
    }
}

fn nnf_cnf(f: &Formula, positive: bool) -> Vec<Clause> {
    match (f, positive) {
        (Formula::Top, true) | (Formula::Bottom, false) => Vec::new(),
        (Formula::Top, false) | (Formula::Bottom, true) => vec![Clause::new()],
        (Formula::Atom(a), _) => vec![Clause::from([Literal { atom: a.clone(), positive }])],
        (Formula::Not(a), _) => nnf_cnf(a, !positive),
        (Formula::And(a, b), true) => conjoin(nnf_cnf(a, true), nnf_cnf(b, true)),
        (Formula::Or(a, b), false) => conjoin(nnf_cnf(a, false), nnf_cnf(b, false)),
        (Formula::Imp(a, b), false) => conjoin(nnf_cnf(a, true), nnf_cnf(b, false)),
        (Formula::Or(a, b), true) => distribute(&nnf_cnf(a, true), &nnf_cnf(b, true)),
        (Formula::And(a, b), false) => distribute(&nnf_cnf(a, false), &nnf_cnf(b, false)),
        (Formula::Imp(a, b), true) => distribute(&nnf_cnf(a, false), &nnf_cnf(b, true)),
        (Formula::Forall(..) | Formula::Exists(..), _) => panic!("to_cnf on a quantified formula"),
    }
}

fn conjoin(mut a: Vec<Clause>, b: Vec<Clause>) -> Vec<Clause> {
    a.extend(b);
    a
}

fn distribute(a: &[Clause], b: &[Clause]) -> Vec<Clause> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for c in a {
        for d in b {
            let u: Clause = c.union(d).cloned().collect();
            if !is_tautological(&u) {
                out.push(u);
            }
        }
    }
    out
}

/// Equivalent clause set with tautological and subsumed clauses removed.
pub fn to_cnf(f: &Formula) -> ClauseSet {
    let clauses = nnf_cnf(f, true).into_iter().filter(|c| !is_tautological(c)).collect();
    reduce_subsumed(&clauses)
}

pub fn is_tautological(c: &Clause) -> bool {
    c.iter().any(|l| l.positive && c.contains(&l.negate()))
}

/// Drops every clause that has a proper subset in the set.
pub fn reduce_subsumed(cs: &ClauseSet) -> ClauseSet {
    let mut by_len: Vec<&Clause> = cs.iter().collect();
    by_len.sort_by_key(|c| c.len());
    let mut kept: Vec<&Clause> = Vec::new();
    for c in by_len {
        if !kept.iter().any(|k| k.is_subset(c)) {
            kept.push(c);
        }
    }
    kept.into_iter().cloned().collect()
}

/// Resolvent on the unique complementary pair, if there is exactly one.
pub fn resolvent(c: &Clause, d: &Clause) -> Option<Clause> {
    let mut pairs = c.iter().filter(|l| d.contains(&l.negate()));
    let lit = pairs.next()?;
    if pairs.next().is_some() {
        return None;
    }
    let neg = lit.negate();
    Some(c.iter().filter(|l| *l != lit).chain(d.iter().filter(|l| **l != neg)).cloned().collect())
}

/// Saturates under resolution up to subsumption, then removes derived
/// clauses that became strictly subsumed.
pub fn deductive_closure(a: &ClauseSet) -> ClauseSet {
    let mut all: Vec<Clause> = a.iter().cloned().collect();
    let mut seen: ClauseSet = a.clone();
    let mut i = 0;
    while i < all.len() {
        for j in 0..i {
            let Some(r) = resolvent(&all[i], &all[j]) else { continue };
            if is_tautological(&r) || all.iter().any(|c| c.is_subset(&r)) || !seen.insert(r.clone()) {
                continue;
            }
            all.push(r);
        }
        i += 1;
    }
    let derived: Vec<&Clause> = all.iter().filter(|c| !a.contains(*c)).collect();
    let mut out = a.clone();
    for c in &derived {
        if !all.iter().any(|d| d.len() < c.len() && d.is_subset(c)) {
            out.insert((*c).clone());
        }
    }
    out
}

pub fn clause_size(c: &Clause) -> usize {
    c.iter().map(Literal::size).sum()
}

/// Total symbol count, the measure minimized during solution improvement.
pub fn clause_set_size(cs: &ClauseSet) -> usize {
    cs.iter().map(clause_size).sum()
}

pub fn substitute_clause_set(cs: &ClauseSet, sigma: &Substitution) -> ClauseSet {
    cs.iter().map(|c| c.iter().map(|l| l.substitute(sigma)).collect()).collect()
}

pub fn clause_contains_var(c: &Clause, v: &str) -> bool {
    c.iter().any(|l| l.atom.contains_var(v))
}

fn sorted_literals(lits: impl Iterator<Item = Literal>) -> Vec<Literal> {
    let mut v: Vec<Literal> = lits.collect();
    v.sort_by_cached_key(|l| l.to_string());
    v
}

/// `⋀negatives ⊃ ⋁positives` when both are present, a plain disjunction otherwise.
pub fn clause_to_formula(c: &Clause) -> Formula {
    let negs = sorted_literals(c.iter().filter(|l| !l.positive).cloned());
    let poss = sorted_literals(c.iter().filter(|l| l.positive).cloned());
    if !negs.is_empty() && !poss.is_empty() {
        Formula::imp(
            Formula::conj(negs.iter().map(|l| Formula::Atom(l.atom.clone()))),
            Formula::disj(poss.iter().map(Literal::to_formula)),
        )
    } else {
        Formula::disj(negs.iter().chain(&poss).map(Literal::to_formula))
    }
}

pub fn sorted_clauses(cs: &ClauseSet) -> Vec<&Clause> {
    let mut v: Vec<&Clause> = cs.iter().collect();
    v.sort_by_cached_key(|c| render_clause(c));
    v
}

pub fn clause_set_to_formula(cs: &ClauseSet) -> Formula {
    Formula::conj(sorted_clauses(cs).into_iter().map(clause_to_formula))
}

pub fn render_clause(c: &Clause) -> String {
    if c.is_empty() {
        return "⊥".into();
    }
    let lits = sorted_literals(c.iter().cloned());
    lits.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ∨ ")
}

pub fn render_clause_set(cs: &ClauseSet) -> String {
    let parts: Vec<String> = sorted_clauses(cs).into_iter().map(render_clause).collect();
    format!("{{{}}}", parts.iter().map(|p| format!("{{{p}}}")).collect::<Vec<_>>().join(", "))
}

pub fn clause_set_atoms(cs: &ClauseSet) -> BTreeSet<Atom> {
    cs.iter().flat_map(|c| c.iter().map(|l| l.atom.clone())).collect()
}

pub fn eval_clause_set(cs: &ClauseSet, val: &dyn Fn(&Atom) -> bool) -> bool {
    cs.iter().all(|c| c.iter().any(|l| val(&l.atom) == l.positive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, var_set};

    fn f(s: &str) -> Formula {
        parse_formula(s, &var_set(["α", "x0", "x1", "x2"])).unwrap()
    }

    fn lit(s: &str) -> Literal {
        match f(s) {
            Formula::Atom(a) => Literal::pos(a),
            Formula::Not(a) => match *a {
                Formula::Atom(a) => Literal::neg(a),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    }

    fn clause(ls: &[&str]) -> Clause {
        ls.iter().map(|s| lit(s)).collect()
    }

    #[test]
    fn cnf_of_canonical_solution() {
        let cs = to_cnf(&f("P(a) ∧ ((P(α) ⊃ P(f(α))) ∧ (P(f(α)) ⊃ P(f(f(α))))) ∧ ¬P(f(f(f(f(a)))))"));
        let expected: ClauseSet = [
            clause(&["P(a)"]),
            clause(&["¬P(α)", "P(f(α))"]),
            clause(&["¬P(f(α))", "P(f(f(α)))"]),
            clause(&["¬P(f(f(f(f(a)))))"]),
        ]
        .into();
        assert_eq!(cs, expected);
        assert_eq!(to_cnf(&f("P")), ClauseSet::from([clause(&["P"])]));
        assert!(to_cnf(&f("P ∨ ¬P")).is_empty());
    }

    #[test]
    fn resolvent_requires_exactly_one_pair() {
        let r = resolvent(&clause(&["¬P(α)", "P(f(α))"]), &clause(&["¬P(f(α))", "P(f(f(α)))"]));
        assert_eq!(r, Some(clause(&["¬P(α)", "P(f(f(α)))"])));
        assert_eq!(resolvent(&clause(&["P"]), &clause(&["Q"])), None);
        assert_eq!(resolvent(&clause(&["P", "¬Q"]), &clause(&["¬P", "Q"])), None);
    }

    #[test]
    fn closure_examples() {
        let a: ClauseSet = [clause(&["¬X0", "X1"]), clause(&["¬X1", "X2"])].into();
        let c = deductive_closure(&a);
        assert!(c.contains(&clause(&["¬X0", "X2"])));
        assert_eq!(c.len(), 3);
        assert!(deductive_closure(&ClauseSet::new()).is_empty());
        let r: ClauseSet = [clause(&["P"]), clause(&["¬P"])].into();
        assert!(deductive_closure(&r).contains(&Clause::new()));
    }

    #[test]
    fn clause_formula_forms() {
        assert_eq!(clause_to_formula(&clause(&["¬P(α)", "P(s(α))"])).to_string(), "P(α) ⊃ P(s(α))");
        assert_eq!(clause_to_formula(&clause(&["¬P", "¬Q"])).to_string(), "¬P ∨ ¬Q");
        assert_eq!(clause_to_formula(&Clause::new()), Formula::Bottom);
        assert_eq!(clause_set_to_formula(&ClauseSet::new()), Formula::Top);
        assert_eq!(clause_set_size(&[clause(&["¬P(α)", "P(s(α))"])].into()), 6);
    }
}
