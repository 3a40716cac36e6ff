//! Shrinking cut matrices: consequence generators, the single-cut search and
//! its level-by-level iteration for several cuts.

use crate::clause::{
    clause_contains_var, clause_set_size, clause_set_to_formula, deductive_closure, render_clause_set, resolvent,
    substitute_clause_set, to_cnf, ClauseSet,
};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::grammar::TreeGrammar;
use crate::herbrand::{cut_implication, SigmaOneSequent};
use crate::sat::{self, Encoder};
use crate::term::{Substitution, Term};
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Generator {
    /// Replace two clauses by their resolvent.
    #[default]
    Forgetful,
    /// Drop one clause at a time from the deductive closure.
    Closure,
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forgetful" => Ok(Generator::Forgetful),
            "closure" => Ok(Generator::Closure),
            _ => Err(Error::Input(format!("unknown generator {s:?}; expected forgetful or closure"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Forgetful => "forgetful",
            Generator::Closure => "closure",
        })
    }
}

/// A single cut `∀x A(x)` with eigenvariable `eigenvar`, used at `terms`, in
/// front of the quantifier-free sequent `antecedent ⊢ succedent`.
#[derive(Clone, Debug)]
pub struct SingleCutContext {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
    pub eigenvar: String,
    pub terms: Vec<Term>,
}

impl SingleCutContext {
    /// `⋀Γ ∧ ⋀¬Δ` in clause form.
    pub fn canonical(&self) -> ClauseSet {
        let c = Formula::conj(
            self.antecedent.iter().cloned().chain(self.succedent.iter().cloned().map(Formula::not)),
        );
        to_cnf(&c)
    }

    fn base_encoder(&self) -> Encoder {
        let mut e = Encoder::new();
        self.antecedent.iter().for_each(|f| e.assert_formula(f, true));
        self.succedent.iter().for_each(|f| e.assert_formula(f, false));
        e
    }

    fn instances(&self, b: &ClauseSet) -> ClauseSet {
        self.terms
            .iter()
            .flat_map(|s| substitute_clause_set(b, &Substitution::single(self.eigenvar.clone(), s.clone())))
            .collect()
    }

    /// `B[α\s₁], …, B[α\s_k], Γ ⊢ Δ` is valid; sufficient for solutionhood
    /// whenever `B` is implied by a known solution.
    pub fn instances_valid(&self, b: &ClauseSet) -> bool {
        let mut e = self.base_encoder();
        e.assert_clauses(&self.instances(b));
        !e.satisfiable()
    }

    /// `Γ, B ⊃ ⋀B[α\s_j] ⊢ Δ` is valid.
    pub fn is_solution(&self, b: &ClauseSet) -> bool {
        let f = clause_set_to_formula(b);
        let set: BTreeSet<Term> = self.terms.iter().cloned().collect();
        let mut ante = self.antecedent.clone();
        ante.push(cut_implication(&f, &self.eigenvar, &set));
        sat::valid(&ante, &self.succedent)
    }
}

/// Drops clauses without `alpha`; keeps the input when nothing would remain.
pub fn remove_alpha_free(a: &ClauseSet, alpha: &str) -> ClauseSet {
    let kept: ClauseSet = a.iter().filter(|c| clause_contains_var(c, alpha)).cloned().collect();
    if kept.is_empty() {
        a.clone()
    } else {
        kept
    }
}

pub fn forgetful_successors(a: &ClauseSet) -> BTreeSet<ClauseSet> {
    let cs: Vec<_> = a.iter().collect();
    let mut out = BTreeSet::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if let Some(r) = resolvent(cs[i], cs[j]) {
                let mut b = a.clone();
                b.remove(cs[i]);
                b.remove(cs[j]);
                b.insert(r);
                debug_assert!(clause_set_size(&b) < clause_set_size(a));
                out.insert(b);
            }
        }
    }
    out
}

pub fn subset_successors(a: &ClauseSet) -> BTreeSet<ClauseSet> {
    a.iter()
        .map(|c| {
            let mut b = a.clone();
            b.remove(c);
            b
        })
        .collect()
}

fn minimal_key(a: &ClauseSet) -> (usize, usize, String) {
    (clause_set_size(a), a.len(), render_clause_set(a))
}

fn keep_minimal(found: impl IntoIterator<Item = ClauseSet>) -> Vec<ClauseSet> {
    let mut all: Vec<ClauseSet> = found.into_iter().collect();
    let Some(best) = all.iter().map(clause_set_size).min() else { return all };
    all.retain(|a| clause_set_size(a) == best);
    all.sort_by_cached_key(minimal_key);
    all.dedup();
    all
}

/// All symbol-minimal solutions reachable from the solution `a`, ordered by
/// clause count and then rendering.
pub fn sf(gen: Generator, a: &ClauseSet, ctx: &SingleCutContext) -> Vec<ClauseSet> {
    let start = match gen {
        Generator::Forgetful => remove_alpha_free(a, &ctx.eigenvar),
        Generator::Closure => remove_alpha_free(&deductive_closure(a), &ctx.eigenvar),
    };
    let mut search = Interned::new(ctx);
    let start_ids = search.intern_set(&start);
    let found = match gen {
        Generator::Forgetful => search.forgetful(start_ids),
        Generator::Closure => search.subsets(start_ids),
    };
    keep_minimal(found.iter().map(|a| search.extern_set(a)))
}

/// Literal `2 * atom + negated`.
type ILit = u32;
type IClause = Vec<ILit>;
type ISet = BTreeSet<IClause>;

/// Clause sets over interned atoms, with a pre-encoded `Γ ⊢ Δ` for the
/// instance check.
struct Interned<'a> {
    ctx: &'a SingleCutContext,
    atoms: Vec<crate::formula::Atom>,
    index: std::collections::HashMap<crate::formula::Atom, u32>,
    /// Per atom: symbol size, whether it mentions the eigenvariable, and its
    /// encoder literal under each instance term.
    size: Vec<usize>,
    has_alpha: Vec<bool>,
    inst: Vec<Vec<u32>>,
    template: Encoder,
}

impl<'a> Interned<'a> {
    fn new(ctx: &'a SingleCutContext) -> Self {
        Interned {
            ctx,
            atoms: vec![],
            index: Default::default(),
            size: vec![],
            has_alpha: vec![],
            inst: vec![],
            template: ctx.base_encoder(),
        }
    }

    fn atom(&mut self, a: &crate::formula::Atom) -> u32 {
        if let Some(&i) = self.index.get(a) {
            return i;
        }
        let i = self.atoms.len() as u32;
        let inst = self
            .ctx
            .terms
            .iter()
            .map(|s| self.template.literal(&a.substitute(&Substitution::single(self.ctx.eigenvar.clone(), s.clone())), true))
            .collect();
        self.atoms.push(a.clone());
        self.index.insert(a.clone(), i);
        self.size.push(a.size());
        self.has_alpha.push(a.contains_var(&self.ctx.eigenvar));
        self.inst.push(inst);
        i
    }

    fn intern_set(&mut self, cs: &ClauseSet) -> ISet {
        cs.iter()
            .map(|c| {
                let mut v: IClause = c.iter().map(|l| 2 * self.atom(&l.atom) + u32::from(!l.positive)).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    fn extern_set(&self, s: &ISet) -> ClauseSet {
        s.iter()
            .map(|c| {
                c.iter()
                    .map(|&l| {
                        let a = self.atoms[(l / 2) as usize].clone();
                        if l % 2 == 0 {
                            crate::clause::Literal::pos(a)
                        } else {
                            crate::clause::Literal::neg(a)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn clause_size(&self, c: &IClause) -> usize {
        c.iter().map(|&l| self.size[(l / 2) as usize] + (l % 2) as usize).sum()
    }

    fn set_size(&self, s: &ISet) -> usize {
        s.iter().map(|c| self.clause_size(c)).sum()
    }

    fn remove_alpha_free(&self, s: ISet) -> ISet {
        let alpha = |c: &IClause| c.iter().any(|&l| self.has_alpha[(l / 2) as usize]);
        if s.iter().all(alpha) || !s.iter().any(alpha) {
            return s;
        }
        s.into_iter().filter(alpha).collect()
    }

    fn instances_valid(&self, s: &ISet) -> bool {
        let extra: Vec<Vec<u32>> = (0..self.ctx.terms.len())
            .flat_map(|j| s.iter().map(move |c| c.iter().map(|&l| self.inst[(l / 2) as usize][j] ^ (l % 2)).collect()))
            .collect();
        !self.template.satisfiable_with(&extra)
    }

    fn resolvent(c: &IClause, d: &IClause) -> Option<IClause> {
        let mut pair = None;
        for &l in c {
            if d.binary_search(&(l ^ 1)).is_ok() {
                if pair.is_some() {
                    return None;
                }
                pair = Some(l);
            }
        }
        let l = pair?;
        let mut r: IClause = c.iter().chain(d).copied().filter(|&x| x != l && x != l ^ 1).collect();
        r.sort_unstable();
        r.dedup();
        Some(r)
    }

    fn forgetful(&self, start: ISet) -> Vec<ISet> {
        let mut seen = HashSet::new();
        let mut stack = vec![start.clone()];
        seen.insert(start);
        let mut found = Vec::new();
        while let Some(a) = stack.pop() {
            let cs: Vec<&IClause> = a.iter().collect();
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    let Some(r) = Self::resolvent(cs[i], cs[j]) else { continue };
                    let mut b = a.clone();
                    b.remove(cs[i]);
                    b.remove(cs[j]);
                    b.insert(r);
                    debug_assert!(self.set_size(&b) < self.set_size(&a));
                    let b = self.remove_alpha_free(b);
                    if seen.insert(b.clone()) && self.instances_valid(&b) {
                        stack.push(b);
                    }
                }
            }
            found.push(a);
        }
        log::debug!("forgetful search visited {} clause sets", seen.len());
        found
    }

    /// Every subset reachable by valid single-clause deletions is itself
    /// valid, so this finds all lightest valid subsets directly.
    fn subsets(&self, start: ISet) -> Vec<ISet> {
        let mut clauses: Vec<IClause> = start.iter().cloned().collect();
        clauses.sort_by_key(|c| std::cmp::Reverse(self.clause_size(c)));
        let mut best = self.set_size(&start);
        let mut found = vec![start];
        self.subsets_from(&clauses, 0, ISet::new(), 0, &mut best, &mut found);
        found
    }

    fn subsets_from(
        &self,
        clauses: &[IClause],
        i: usize,
        chosen: ISet,
        weight: usize,
        best: &mut usize,
        found: &mut Vec<ISet>,
    ) {
        if weight > *best {
            return;
        }
        let mut full = chosen.clone();
        full.extend(clauses[i..].iter().cloned());
        if !self.instances_valid(&full) {
            return;
        }
        if i == clauses.len() {
            *best = weight;
            found.push(chosen);
            return;
        }
        let w = self.clause_size(&clauses[i]);
        self.subsets_from(clauses, i + 1, chosen.clone(), weight, best, found);
        let mut with = chosen;
        with.insert(clauses[i].clone());
        self.subsets_from(clauses, i + 1, with, weight + w, best, found);
    }
}

/// Canonical and minimized clause sets per level, plus the resulting matrices.
#[derive(Clone, Debug)]
pub struct LevelSolutions {
    pub canonical: Vec<ClauseSet>,
    pub minimized: Vec<ClauseSet>,
    pub solution: Vec<Formula>,
}

/// Solves the cut matrices from the last level down to the first, each time
/// as a single-cut problem whose context contains the levels already solved.
pub fn sfn(gen: Generator, s: &SigmaOneSequent, g: &TreeGrammar) -> Result<LevelSolutions> {
    sfn_cached(gen, s, g, &mut SolveCache::default())
}

/// Single-cut results keyed by the rendered problem, shared between grammars
/// that reach the same level problem.
#[derive(Default)]
pub struct SolveCache(std::collections::HashMap<String, ClauseSet>);

impl SolveCache {
    fn key(gen: Generator, ctx: &SingleCutContext) -> String {
        let join = |fs: &[Formula]| fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        let terms = ctx.terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        format!("{gen}|{}|{}|{}|{terms}", join(&ctx.antecedent), join(&ctx.succedent), ctx.eigenvar)
    }
}

pub fn sfn_cached(gen: Generator, s: &SigmaOneSequent, g: &TreeGrammar, cache: &mut SolveCache) -> Result<LevelSolutions> {
    let n = g.levels.len();
    let mut canonical = vec![ClauseSet::new(); n];
    let mut minimized = vec![ClauseSet::new(); n];
    let mut solution = vec![Formula::Top; n];
    for i in (0..n).rev() {
        let prefix = TreeGrammar::new(g.base.clone(), g.levels[..i].to_vec());
        let (mut ante, succ) = s.instances_of(&prefix.language())?;
        for j in i + 1..n {
            ante.push(cut_implication(&solution[j], &g.levels[j].var, &g.levels[j].productions));
        }
        let level = &g.levels[i];
        let ctx = SingleCutContext {
            antecedent: ante,
            succedent: succ,
            eigenvar: level.var.clone(),
            terms: level.productions.iter().cloned().collect(),
        };
        let c = ctx.canonical();
        let key = SolveCache::key(gen, &ctx);
        let best = match cache.0.get(&key) {
            Some(b) => b.clone(),
            None => {
                let b = sf(gen, &c, &ctx).into_iter().next().unwrap_or_else(|| c.clone());
                cache.0.insert(key, b.clone());
                b
            }
        };
        log::info!("level {}: {} -> {} symbols", i + 1, clause_set_size(&c), clause_set_size(&best));
        solution[i] = clause_set_to_formula(&best);
        canonical[i] = c;
        minimized[i] = best;
    }
    Ok(LevelSolutions { canonical, minimized, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::Literal;
    use crate::formula::Atom;
    use crate::herbrand::{build_shs, check_solution, QuantEntry, SolutionVerdict};
    use crate::parse::{parse_formula, var_set};

    fn fa(n: usize, base: Term) -> Term {
        Term::iterate("f", n, base)
    }

    fn p(t: Term) -> Atom {
        Atom::new("P", vec![t])
    }

    fn imp_clause(a: Term, b: Term) -> crate::clause::Clause {
        [Literal::neg(p(a)), Literal::pos(p(b))].into()
    }

    fn chain(n: usize) -> SigmaOneSequent {
        let vs = var_set(["x"]);
        SigmaOneSequent {
            antecedent: vec![
                QuantEntry::new(&[], parse_formula("P(a)", &vs).unwrap()),
                QuantEntry::new(&["x"], parse_formula("P(x) ⊃ P(f(x))", &vs).unwrap()),
            ],
            succedent: vec![QuantEntry::new(&[], Formula::Atom(p(fa(n, Term::cnst("a")))))],
        }
    }

    fn two_step_context() -> SingleCutContext {
        let al = Term::var("α");
        let a = Term::cnst("a");
        SingleCutContext {
            antecedent: vec![
                Formula::Atom(p(a.clone())),
                Formula::imp(Formula::Atom(p(al.clone())), Formula::Atom(p(fa(1, al.clone())))),
                Formula::imp(Formula::Atom(p(fa(1, al.clone()))), Formula::Atom(p(fa(2, al.clone())))),
            ],
            succedent: vec![Formula::Atom(p(fa(4, a.clone())))],
            eigenvar: "α".into(),
            terms: vec![a.clone(), fa(2, a)],
        }
    }

    #[test]
    fn alpha_free_clauses_are_dropped() {
        let ctx = two_step_context();
        let al = Term::var("α");
        let c = remove_alpha_free(&ctx.canonical(), "α");
        let expected: ClauseSet =
            [imp_clause(al.clone(), fa(1, al.clone())), imp_clause(fa(1, al.clone()), fa(2, al.clone()))].into();
        assert_eq!(c, expected);
        let only_ground: ClauseSet = [[Literal::pos(p(Term::cnst("a")))].into()].into();
        assert_eq!(remove_alpha_free(&only_ground, "α"), only_ground);
    }

    #[test]
    fn forgetful_step() {
        let al = Term::var("α");
        let c: ClauseSet =
            [imp_clause(al.clone(), fa(1, al.clone())), imp_clause(fa(1, al.clone()), fa(2, al.clone()))].into();
        let succ = forgetful_successors(&c);
        assert_eq!(succ, [[imp_clause(al.clone(), fa(2, al.clone()))].into()].into());
        let pn: ClauseSet = [[Literal::pos(p(al.clone()))].into(), [Literal::neg(p(al.clone()))].into()].into();
        assert_eq!(forgetful_successors(&pn), [[crate::clause::Clause::new()].into()].into());
        assert!(forgetful_successors(&[imp_clause(al.clone(), al)].into()).is_empty());
    }

    #[test]
    fn subset_step() {
        let a: ClauseSet = [[Literal::pos(p(Term::cnst("a")))].into(), [Literal::pos(p(Term::cnst("b")))].into()].into();
        assert_eq!(subset_successors(&a).len(), 2);
        assert!(subset_successors(&ClauseSet::new()).is_empty());
    }

    #[test]
    fn sf_finds_the_two_step_matrix() {
        let ctx = two_step_context();
        let al = Term::var("α");
        let expected: ClauseSet = [imp_clause(al.clone(), fa(2, al))].into();
        for gen in [Generator::Forgetful, Generator::Closure] {
            let got = sf(gen, &ctx.canonical(), &ctx);
            assert_eq!(got[0], expected, "{gen}");
            assert!(got.iter().all(|b| ctx.is_solution(b)));
        }
        assert_eq!(sf(Generator::Forgetful, &expected, &ctx), vec![expected]);
    }

    #[test]
    fn sfn_two_levels() {
        let s = chain(8);
        let a1 = Term::var("α1");
        let a2 = Term::var("α2");
        let g = TreeGrammar::new(
            [Term::app("f_2", vec![a1.clone()]), Term::app("f_2", vec![fa(1, a1.clone())])].into(),
            vec![
                crate::grammar::Level { var: "α1".into(), productions: [a2.clone(), fa(2, a2.clone())].into() },
                crate::grammar::Level {
                    var: "α2".into(),
                    productions: [Term::cnst("a"), fa(4, Term::cnst("a"))].into(),
                },
            ],
        );
        let h = build_shs(&s, &g).unwrap();
        let r = sfn(Generator::Forgetful, &s, &g).unwrap();
        assert_eq!(r.minimized[0], [imp_clause(a1.clone(), fa(2, a1))].into());
        assert_eq!(r.minimized[1], [imp_clause(a2.clone(), fa(4, a2))].into());
        assert_eq!(check_solution(&h, &r.solution), SolutionVerdict::Valid);
    }
}
