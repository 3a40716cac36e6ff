//! Propositional validity through a definitional encoding and a small DPLL solver.

use crate::clause::ClauseSet;
use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use std::collections::{BTreeSet, HashMap};

/// Literal encoding: `2 * var + (negated as usize)`.
type Lit = u32;

fn neg(l: Lit) -> Lit {
    l ^ 1
}

type Enc = std::result::Result<Lit, bool>;

fn negate(e: Enc) -> Enc {
    e.map(neg).map_err(|b| !b)
}

#[derive(Clone, Default)]
pub struct Encoder {
    atoms: HashMap<Atom, u32>,
    nvars: u32,
    clauses: Vec<Vec<Lit>>,
    unsat: bool,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self) -> u32 {
        self.nvars += 1;
        self.nvars - 1
    }

    fn atom_lit(&mut self, a: &Atom) -> Lit {
        if let Some(&v) = self.atoms.get(a) {
            return 2 * v;
        }
        let v = self.fresh();
        self.atoms.insert(a.clone(), v);
        2 * v
    }

    fn add(&mut self, mut c: Vec<Lit>) {
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        if c.is_empty() {
            self.unsat = true;
        }
        self.clauses.push(c);
    }

    /// Literal equivalent to `f`, or `Err(value)` when `f` is constant.
    fn encode(&mut self, f: &Formula) -> Enc {
        match f {
            Formula::Top => Err(true),
            Formula::Bottom => Err(false),
            Formula::Atom(a) => Ok(self.atom_lit(a)),
            Formula::Not(a) => negate(self.encode(a)),
            Formula::And(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                self.conj(x, y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                negate(self.conj(negate(x), negate(y)))
            }
            Formula::Imp(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                negate(self.conj(x, negate(y)))
            }
            Formula::Forall(..) | Formula::Exists(..) => panic!("encoding a quantified formula"),
        }
    }

    fn conj(&mut self, x: Enc, y: Enc) -> Enc {
        match (x, y) {
            (Err(false), _) | (_, Err(false)) => Err(false),
            (Err(true), z) | (z, Err(true)) => z,
            (Ok(x), Ok(y)) => Ok(self.and_gate(x, y)),
        }
    }

    fn and_gate(&mut self, x: Lit, y: Lit) -> Lit {
        let g = 2 * self.fresh();
        self.add(vec![neg(g), x]);
        self.add(vec![neg(g), y]);
        self.add(vec![g, neg(x), neg(y)]);
        g
    }

    /// Constrains `f` to have truth value `value`.
    pub fn assert_formula(&mut self, f: &Formula, value: bool) {
        match (f, value) {
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                self.assert_formula(a, value);
                self.assert_formula(b, value);
            }
            (Formula::Imp(a, b), false) => {
                self.assert_formula(a, true);
                self.assert_formula(b, false);
            }
            (Formula::Not(a), _) => self.assert_formula(a, !value),
            _ => match self.encode(f) {
                Ok(l) => self.add(vec![if value { l } else { neg(l) }]),
                Err(b) if b != value => self.unsat = true,
                Err(_) => {}
            },
        }
    }

    pub fn assert_clauses(&mut self, cs: &ClauseSet) {
        for c in cs {
            let lits = c
                .iter()
                .map(|l| {
                    let a = self.atom_lit(&l.atom);
                    if l.positive {
                        a
                    } else {
                        neg(a)
                    }
                })
                .collect();
            self.add(lits);
        }
    }

    /// Solver literal for an atom with the given sign; `literal(a, true) ^ 1`
    /// is its negation.
    pub fn literal(&mut self, a: &Atom, positive: bool) -> u32 {
        let l = self.atom_lit(a);
        if positive {
            l
        } else {
            neg(l)
        }
    }

    /// Adds a clause over literals obtained from [`Encoder::literal`].
    pub fn add_clause(&mut self, lits: Vec<u32>) {
        self.add(lits);
    }

    pub fn satisfiable(&self) -> bool {
        !self.unsat && Solver::new(self.nvars as usize, self.clauses.iter()).solve()
    }

    /// Satisfiability together with extra clauses over literals from
    /// [`Encoder::literal`], leaving the encoder unchanged.
    pub fn satisfiable_with(&self, extra: &[Vec<u32>]) -> bool {
        if self.unsat {
            return false;
        }
        let mut more = Vec::with_capacity(extra.len());
        for c in extra {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
                continue;
            }
            if c.is_empty() {
                return false;
            }
            more.push(c);
        }
        Solver::new(self.nvars as usize, self.clauses.iter().chain(&more)).solve()
    }
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<Lit>,
    qhead: usize,
    units: Vec<Lit>,
    order: Vec<u32>,
}

impl Solver {
    fn new<'a>(nvars: usize, src: impl Iterator<Item = &'a Vec<Lit>>) -> Self {
        let mut s = Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            value: vec![0; nvars],
            trail: Vec::new(),
            qhead: 0,
            units: Vec::new(),
            order: Vec::new(),
        };
        let mut occ = vec![0usize; nvars];
        for c in src {
            c.iter().for_each(|&l| occ[(l >> 1) as usize] += 1);
            if c.len() == 1 {
                s.units.push(c[0]);
            } else if c.len() >= 2 {
                let idx = s.clauses.len();
                s.watches[c[0] as usize].push(idx);
                s.watches[c[1] as usize].push(idx);
                s.clauses.push(c.clone());
            }
        }
        s.order = (0..nvars as u32).collect();
        s.order.sort_by_key(|&v| std::cmp::Reverse(occ[v as usize]));
        s
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[(l >> 1) as usize];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            1 => true,
            -1 => false,
            _ => {
                self.value[(l >> 1) as usize] = if l & 1 == 1 { -1 } else { 1 };
                self.trail.push(l);
                true
            }
        }
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let l = self.clauses[ci][k];
                    if self.lit_value(l) != -1 {
                        self.clauses[ci].swap(1, k);
                        self.watches[l as usize].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                i += 1;
                if !self.assign(first) {
                    ok = false;
                    break;
                }
            }
            self.watches[false_lit as usize] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            self.value[(l >> 1) as usize] = 0;
        }
        self.qhead = len;
    }

    fn solve(&mut self) -> bool {
        for u in std::mem::take(&mut self.units) {
            if !self.assign(u) {
                return false;
            }
        }
        // (decision literal, trail length before it, already flipped)
        let mut decisions: Vec<(Lit, usize, bool)> = Vec::new();
        loop {
            if !self.propagate() {
                loop {
                    let Some((lit, len, flipped)) = decisions.pop() else { return false };
                    self.undo_to(len);
                    if !flipped {
                        decisions.push((neg(lit), len, true));
                        self.assign(neg(lit));
                        break;
                    }
                }
                continue;
            }
            let Some(&v) = self.order.iter().find(|&&v| self.value[v as usize] == 0) else { return true };
            let lit = 2 * v;
            decisions.push((lit, self.trail.len(), false));
            self.assign(lit);
        }
    }
}

/// Validity of `⋀ante ⊃ ⋁succ`, treating every variable as an opaque constant.
pub fn valid(ante: &[Formula], succ: &[Formula]) -> bool {
    let mut e = Encoder::new();
    ante.iter().for_each(|f| e.assert_formula(f, true));
    succ.iter().for_each(|f| e.assert_formula(f, false));
    !e.satisfiable()
}

/// Validity check that rejects free variables not declared as constants.
pub fn is_tautology(ante: &[Formula], succ: &[Formula], constants: &BTreeSet<String>) -> Result<bool> {
    for f in ante.iter().chain(succ) {
        if !f.is_quantifier_free() {
            return Err(Error::Input(format!("quantified formula {f} in a propositional sequent")));
        }
        if let Some(v) = f.free_vars().into_iter().find(|v| !constants.contains(v)) {
            return Err(Error::FreeVariable(v));
        }
    }
    Ok(valid(ante, succ))
}

/// Whether the clause set is unsatisfiable together with the given formulas.
pub fn clauses_unsat_with(cs: &ClauseSet, extra: &[Formula]) -> bool {
    let mut e = Encoder::new();
    e.assert_clauses(cs);
    extra.iter().for_each(|f| e.assert_formula(f, true));
    !e.satisfiable()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::term::Term;

    fn f(s: &str) -> Formula {
        parse_formula(s, &BTreeSet::new()).unwrap()
    }

    #[test]
    fn modus_ponens() {
        assert!(valid(&[f("P(a)"), f("P(a) ⊃ P(f(a))")], &[f("P(f(a))")]));
        assert!(!valid(&[f("P(a)")], &[f("P(f(a))")]));
        assert!(valid(&[], &[f("P ∨ ¬P")]));
        assert!(valid(&[f("⊥")], &[]));
        assert!(!valid(&[], &[]));
        assert!(valid(&[], &[f("⊤")]));
    }

    #[test]
    fn linear_herbrand_sequent_is_valid() {
        let s = |n| Term::iterate("s", n, Term::cnst("0"));
        let p = |t: Term| Formula::atom("P", vec![t]);
        let mut ante = vec![p(s(0))];
        for k in 0..9 {
            ante.push(Formula::imp(p(s(k)), p(s(k + 1))));
        }
        assert!(valid(&ante, &[p(s(9))]));
        ante.remove(5);
        assert!(!valid(&ante, &[p(s(9))]));
    }

    #[test]
    fn undeclared_variables_are_rejected() {
        let g = Formula::atom("P", vec![Term::var("α")]);
        assert!(matches!(is_tautology(&[g.clone()], &[], &BTreeSet::new()), Err(Error::FreeVariable(_))));
        let cs = BTreeSet::from(["α".to_string()]);
        assert_eq!(is_tautology(&[g.clone()], &[g], &cs), Ok(true));
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        let p = |i: usize, j: usize| f(&format!("P{i}{j}"));
        let mut ante = Vec::new();
        for i in 0..3 {
            ante.push(Formula::or(p(i, 0), p(i, 1)));
        }
        for j in 0..2 {
            for i in 0..3 {
                for k in i + 1..3 {
                    ante.push(Formula::not(Formula::and(p(i, j), p(k, j))));
                }
            }
        }
        assert!(valid(&ante, &[]));
    }
}
