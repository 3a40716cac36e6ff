//! First-order terms and simultaneous substitution.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(String),
    /// Constants are applications with no arguments.
    App(String, Vec<Term>),
}

/// A position is a path of 1-based argument indices; the empty path is the root.
pub type Position = Vec<usize>;

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn cnst(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(head: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(head.into(), args)
    }

    /// `f` applied `n` times to `base`.
    pub fn iterate(f: &str, n: usize, base: Term) -> Term {
        (0..n).fold(base, |t, _| Term::app(f, vec![t]))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn head(&self) -> &str {
        match self {
            Term::Var(v) => v,
            Term::App(f, _) => f,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn substitute(&self, sigma: &Substitution) -> Term {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(sigma)).collect()),
        }
    }

    pub fn subst1(&self, var: &str, by: &Term) -> Term {
        self.substitute(&Substitution::single(var, by.clone()))
    }

    pub fn subterm_at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => {
                if i == 0 {
                    return None;
                }
                self.args().get(i - 1)?.subterm_at(rest)
            }
        }
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(&mut path, &mut out);
        out
    }

    fn walk_positions(&self, path: &mut Position, out: &mut Vec<Position>) {
        out.push(path.clone());
        for (i, a) in self.args().iter().enumerate() {
            path.push(i + 1);
            a.walk_positions(path, out);
            path.pop();
        }
    }

    pub fn replace_at(&self, pos: &[usize], by: &Term) -> Option<Term> {
        match pos.split_first() {
            None => Some(by.clone()),
            Some((&i, rest)) => match self {
                Term::App(f, args) if i >= 1 && i <= args.len() => {
                    let mut args = args.clone();
                    args[i - 1] = args[i - 1].replace_at(rest, by)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            },
        }
    }

    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut BTreeSet<Term>) {
        if out.insert(self.clone()) {
            self.args().iter().for_each(|a| a.collect_subterms(out));
        }
    }

    /// Records the arity of every function symbol, failing on the first clash.
    pub fn check_signature(&self, sig: &mut BTreeMap<String, usize>) -> Result<(), String> {
        if let Term::App(f, args) = self {
            match sig.get(f) {
                Some(&n) if n != args.len() => {
                    return Err(format!("symbol {f} used with arity {} and {n}", args.len()))
                }
                None => {
                    sig.insert(f.clone(), args.len());
                }
                _ => {}
            }
            for a in args {
                a.check_signature(sig)?;
            }
        }
        Ok(())
    }

    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename_vars(map)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(h, args) if args.is_empty() => write!(f, "{h}"),
            Term::App(h, args) => {
                write!(f, "{h}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Deserializes with every identifier read as a function symbol; callers that
/// know their variables go through [`crate::parse`] instead.
impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let s = String::deserialize(d)?;
        crate::parse::parse_term(&s, &BTreeSet::new()).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Substitution(BTreeMap<String, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(var: impl Into<String>, t: Term) -> Self {
        let mut s = Self::new();
        s.insert(var, t);
        s
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: Into<String>,
    {
        let mut s = Self::new();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    pub fn insert(&mut self, var: impl Into<String>, t: Term) {
        self.0.insert(var.into(), t);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.0.iter()
    }

    pub fn without(&self, var: &str) -> Substitution {
        let mut m = self.0.clone();
        m.remove(var);
        Substitution(m)
    }

    /// The substitution that applies `self` and then `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut m: BTreeMap<String, Term> =
            self.0.iter().map(|(v, t)| (v.clone(), t.substitute(then))).collect();
        for (v, t) in &then.0 {
            m.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution(m)
    }

    /// Variables occurring in the range.
    pub fn range_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.0.values().for_each(|t| t.collect_variables(&mut out));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::cnst("a")
    }

    #[test]
    fn substitution_is_simultaneous() {
        let t = Term::app("f", vec![Term::var("x1"), Term::var("x2")]);
        let s = Substitution::from_pairs([("x1", Term::var("x2")), ("x2", a())]);
        assert_eq!(t.substitute(&s).to_string(), "f(x2,a)");
        assert_eq!(t.substitute(&Substitution::new()), t);
        assert_eq!(Term::app("f", vec![Term::var("x")]).subst1("x", &a()).to_string(), "f(a)");
    }

    #[test]
    fn variables_and_positions() {
        let t = Term::app("f", vec![Term::app("g", vec![Term::var("x1")]), Term::var("x2")]);
        assert_eq!(t.variables().into_iter().collect::<Vec<_>>(), ["x1", "x2"]);
        assert!(a().variables().is_empty());
        let fab = Term::app("f", vec![a(), Term::cnst("b")]);
        assert_eq!(fab.subterm_at(&[1]), Some(&a()));
        assert_eq!(fab.subterm_at(&[]), Some(&fab));
        assert_eq!(fab.subterm_at(&[3]), None);
        assert_eq!(fab.subterm_at(&[0]), None);
        let fga = Term::app("f", vec![Term::app("g", vec![a()])]);
        assert_eq!(fga.subterm_at(&[1, 1]), Some(&a()));
        assert_eq!(fga.positions(), vec![vec![], vec![1], vec![1, 1]]);
    }

    #[test]
    fn signature_clash() {
        let mut sig = BTreeMap::new();
        let t = Term::app("f", vec![Term::app("f", vec![a(), a()])]);
        assert!(t.check_signature(&mut sig).is_err());
    }

    #[test]
    fn compose_applies_left_then_right() {
        let s1 = Substitution::single("x", Term::app("f", vec![Term::var("y")]));
        let s2 = Substitution::single("y", a());
        let t = Term::app("g", vec![Term::var("x"), Term::var("y")]);
        assert_eq!(t.substitute(&s1).substitute(&s2), t.substitute(&s1.compose(&s2)));
    }
}
