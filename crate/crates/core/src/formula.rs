//! First-order formulas; the quantifier-free fragment is the propositional layer.

use crate::term::{Substitution, Term};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom { pred: pred.into(), args }
    }

    pub fn substitute(&self, sigma: &Substitution) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.substitute(sigma)).collect() }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.args.iter().for_each(|t| t.collect_variables(&mut out));
        out
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.args.iter().any(|t| t.contains_var(v))
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Term::App(self.pred.clone(), self.args.clone()))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(pred, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn quantify(q: Quantifier, vars: &[String], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |b, v| match q {
            Quantifier::Forall => Formula::forall(v.clone(), b),
            Quantifier::Exists => Formula::exists(v.clone(), b),
        })
    }

    /// Right-nested conjunction; empty is ⊤.
    pub fn conj<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        let v: Vec<Formula> = fs.into_iter().collect();
        v.into_iter().rev().reduce(|acc, f| Formula::and(f, acc)).unwrap_or(Formula::Top)
    }

    /// Right-nested disjunction; empty is ⊥.
    pub fn disj<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        let v: Vec<Formula> = fs.into_iter().collect();
        v.into_iter().rev().reduce(|acc, f| Formula::or(f, acc)).unwrap_or(Formula::Bottom)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Top | Formula::Bottom | Formula::Atom(_))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => {
                for v in a.variables() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Symbol count: atoms by their term size, one per connective or quantifier.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom => 1,
            Formula::Atom(a) => a.size(),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Capture-avoiding substitution of free variables.
    pub fn instantiate(&self, sigma: &Substitution) -> Formula {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Top | Formula::Bottom => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.substitute(sigma)),
            Formula::Not(a) => Formula::not(a.instantiate(sigma)),
            Formula::And(a, b) => Formula::and(a.instantiate(sigma), b.instantiate(sigma)),
            Formula::Or(a, b) => Formula::or(a.instantiate(sigma), b.instantiate(sigma)),
            Formula::Imp(a, b) => Formula::imp(a.instantiate(sigma), b.instantiate(sigma)),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let inner = sigma.without(v);
                let (v2, body) = if inner.range_vars().contains(v) {
                    let mut avoid = inner.range_vars();
                    avoid.extend(a.free_vars());
                    let mut fresh = format!("{v}'");
                    while avoid.contains(&fresh) {
                        fresh.push('\'');
                    }
                    let renamed = a.instantiate(&Substitution::single(v.clone(), Term::var(fresh.clone())));
                    (fresh, renamed.instantiate(&inner))
                } else {
                    (v.clone(), a.instantiate(&inner))
                };
                match self {
                    Formula::Forall(..) => Formula::forall(v2, body),
                    _ => Formula::exists(v2, body),
                }
            }
        }
    }

    pub fn subst1(&self, var: &str, by: &Term) -> Formula {
        self.instantiate(&Substitution::single(var, by.clone()))
    }

    /// Leading quantifiers of kind `q` and the remaining body.
    pub fn prefix(&self, q: Quantifier) -> (Vec<String>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        loop {
            match (q, cur) {
                (Quantifier::Forall, Formula::Forall(v, b)) | (Quantifier::Exists, Formula::Exists(v, b)) => {
                    vars.push(v.clone());
                    cur = b;
                }
                _ => return (vars, cur),
            }
        }
    }

    /// Strips `terms.len()` leading `q`-quantifiers and instantiates them.
    pub fn instantiate_block(&self, q: Quantifier, terms: &[Term]) -> Option<Formula> {
        let mut vars = Vec::new();
        let mut cur = self;
        for _ in terms {
            match (q, cur) {
                (Quantifier::Forall, Formula::Forall(v, b)) | (Quantifier::Exists, Formula::Exists(v, b)) => {
                    vars.push(v.clone());
                    cur = b;
                }
                _ => return None,
            }
        }
        let sigma = Substitution::from_pairs(vars.into_iter().zip(terms.iter().cloned()));
        Some(cur.instantiate(&sigma))
    }

    /// ⊤/⊥ absorption, bottom-up; nothing else is rewritten.
    pub fn simplify(&self) -> Formula {
        use Formula::*;
        match self {
            Top | Bottom | Atom(_) => self.clone(),
            Not(a) => match a.simplify() {
                Top => Bottom,
                Bottom => Top,
                a => Formula::not(a),
            },
            And(a, b) => match (a.simplify(), b.simplify()) {
                (Bottom, _) | (_, Bottom) => Bottom,
                (Top, x) | (x, Top) => x,
                (x, y) => Formula::and(x, y),
            },
            Or(a, b) => match (a.simplify(), b.simplify()) {
                (Top, _) | (_, Top) => Top,
                (Bottom, x) | (x, Bottom) => x,
                (x, y) => Formula::or(x, y),
            },
            Imp(a, b) => match (a.simplify(), b.simplify()) {
                (Bottom, _) | (_, Top) => Top,
                (Top, x) => x,
                (x, Bottom) => Formula::not(x),
                (x, y) => Formula::imp(x, y),
            },
            Forall(v, a) => match a.simplify() {
                x @ (Top | Bottom) => x,
                x => Formula::forall(v.clone(), x),
            },
            Exists(v, a) => match a.simplify() {
                x @ (Top | Bottom) => x,
                x => Formula::exists(v.clone(), x),
            },
        }
    }

    /// Truth value of a quantifier-free formula under an atom valuation.
    pub fn eval(&self, val: &dyn Fn(&Atom) -> bool) -> bool {
        match self {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(a) => val(a),
            Formula::Not(a) => !a.eval(val),
            Formula::And(a, b) => a.eval(val) && b.eval(val),
            Formula::Or(a, b) => a.eval(val) || b.eval(val),
            Formula::Imp(a, b) => !a.eval(val) || b.eval(val),
            Formula::Forall(..) | Formula::Exists(..) => panic!("eval on a quantified formula"),
        }
    }

    pub fn rename_vars(&self, map: &std::collections::BTreeMap<String, String>) -> Formula {
        let sigma = Substitution::from_pairs(map.iter().map(|(k, v)| (k.clone(), Term::var(v.clone()))));
        self.instantiate(&sigma)
    }

    fn is_binary(&self) -> bool {
        matches!(self, Formula::And(..) | Formula::Or(..) | Formula::Imp(..))
    }

    fn is_quantified(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }
}

fn fmt_operand(f: &mut fmt::Formatter<'_>, child: &Formula, bare: bool) -> fmt::Result {
    if !bare && (child.is_binary() || child.is_quantified()) {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "⊤"),
            Formula::Bottom => write!(f, "⊥"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(a) => {
                write!(f, "¬")?;
                fmt_operand(f, a, false)
            }
            Formula::And(a, b) => {
                fmt_operand(f, a, false)?;
                write!(f, " ∧ ")?;
                fmt_operand(f, b, matches!(**b, Formula::And(..)))
            }
            Formula::Or(a, b) => {
                fmt_operand(f, a, false)?;
                write!(f, " ∨ ")?;
                fmt_operand(f, b, matches!(**b, Formula::Or(..)))
            }
            Formula::Imp(a, b) => {
                fmt_operand(f, a, false)?;
                write!(f, " ⊃ ")?;
                fmt_operand(f, b, false)
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let q = if matches!(self, Formula::Forall(..)) { "∀" } else { "∃" };
                write!(f, "{q}{v}.")?;
                fmt_operand(f, a, a.is_quantified())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: Term) -> Formula {
        Formula::atom("P", vec![t])
    }

    #[test]
    fn instantiate_matrix() {
        let x = Term::var("x");
        let f = Formula::imp(p(x.clone()), p(Term::app("f", vec![x])));
        assert_eq!(f.subst1("x", &Term::cnst("a")).to_string(), "P(a) ⊃ P(f(a))");
        assert_eq!(f.instantiate(&Substitution::new()), f);
    }

    #[test]
    fn instantiate_avoids_capture() {
        let g = Formula::forall("y", Formula::atom("R", vec![Term::var("x"), Term::var("y")]));
        let h = g.subst1("x", &Term::var("y"));
        assert_eq!(h.free_vars().into_iter().collect::<Vec<_>>(), ["y"]);
        assert_eq!(h.to_string(), "∀y'.R(y,y')");
    }

    #[test]
    fn rendering_parenthesises_nested_binaries() {
        let a = p(Term::cnst("a"));
        let b = p(Term::cnst("b"));
        let c = p(Term::cnst("c"));
        let f = Formula::and(a.clone(), Formula::and(b.clone(), Formula::or(c.clone(), Formula::not(a.clone()))));
        assert_eq!(f.to_string(), "P(a) ∧ P(b) ∧ (P(c) ∨ ¬P(a))");
        let q = Formula::forall("x", Formula::forall("y", Formula::imp(a, b)));
        assert_eq!(q.to_string(), "∀x.∀y.(P(a) ⊃ P(b))");
    }

    #[test]
    fn simplify_absorbs_constants() {
        let a = p(Term::cnst("a"));
        assert_eq!(Formula::and(Formula::Top, a.clone()).simplify(), a);
        assert_eq!(Formula::or(Formula::Top, a.clone()).simplify(), Formula::Top);
        assert_eq!(Formula::imp(a.clone(), Formula::Bottom).simplify(), Formula::not(a.clone()));
        assert_eq!(Formula::conj(vec![]), Formula::Top);
        assert_eq!(Formula::disj(vec![]), Formula::Bottom);
    }

    #[test]
    fn block_instantiation() {
        let f = Formula::forall("x", Formula::forall("y", Formula::atom("P", vec![Term::var("x"), Term::var("y")])));
        let i = f.instantiate_block(Quantifier::Forall, &[Term::cnst("a"), Term::cnst("b")]).unwrap();
        assert_eq!(i.to_string(), "P(a,b)");
        let partial = f.instantiate_block(Quantifier::Forall, &[Term::cnst("a")]).unwrap();
        assert_eq!(partial.to_string(), "∀y.P(a,y)");
        assert!(f.instantiate_block(Quantifier::Exists, &[Term::cnst("a")]).is_none());
    }
}
