//! Proofs with one Π₁-cut per grammar level, built in linear form from a
//! solved extended Herbrand sequent.

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier};
use crate::grammar::TreeGrammar;
use crate::herbrand::{cut_implication, Side, SigmaOneSequent};
use crate::interpolate::{interpolate, PartitionedSequent};
use crate::proof::{prove_propositional, Payload, Proof, Rule, Sequent};
use crate::sat;
use crate::term::Term;
use std::collections::BTreeSet;

/// A base instance: the tagged term, its entry, side and instantiated matrix.
#[derive(Clone, Debug)]
struct Inst {
    term: Term,
    entry: usize,
    side: Side,
    tuple: Vec<Term>,
    formula: Formula,
}

#[derive(Clone, Debug)]
pub struct LinearFormPlan {
    /// `A′_1..A′_n`.
    pub matrices: Vec<Formula>,
    /// Levels whose matrix had to be strengthened by an interpolant.
    pub repaired: Vec<usize>,
    /// `L_1`.
    pub left_leaf: Sequent,
    /// `R_1..R_n`.
    pub right_leaves: Vec<Sequent>,
}

struct Builder<'a> {
    s: &'a SigmaOneSequent,
    g: &'a TreeGrammar,
    base: Vec<Inst>,
}

fn push(fs: &mut Vec<Formula>, f: Formula) {
    if !fs.contains(&f) {
        fs.push(f);
    }
}

impl<'a> Builder<'a> {
    fn new(s: &'a SigmaOneSequent, g: &'a TreeGrammar) -> Result<Builder<'a>> {
        let mut base = Vec::new();
        for u in &g.base {
            let (entry, tuple) = s.decode(u)?;
            let (side, e) = s.entry(entry).expect("decoded entry exists");
            base.push(Inst { term: u.clone(), entry, side, formula: e.instance(&tuple), tuple });
        }
        Ok(Builder { s, g, base })
    }

    fn n(&self) -> usize {
        self.g.levels.len()
    }

    /// Whether every variable of the instance lies in `α_{i+1}..α_n` (0-based level `i`).
    fn in_level(&self, u: &Inst, i: usize) -> bool {
        let later: BTreeSet<String> = self.g.levels[i.min(self.n())..].iter().map(|l| l.var.clone()).collect();
        u.term.variables().iter().all(|v| later.contains(v))
    }

    /// Instances usable below the cut of 0-based level `i`, i.e. `U_{i+1}`;
    /// `i = n` gives the ground ones.
    fn partition(&self, i: usize) -> impl Iterator<Item = &Inst> {
        self.base.iter().filter(move |u| self.in_level(u, i))
    }

    fn qf(&self, side: Side) -> Vec<Formula> {
        self.s.entries().filter(|(_, sd, e)| *sd == side && e.vars.is_empty()).map(|(_, _, e)| e.matrix.clone()).collect()
    }

    /// Antecedent and succedent instances of a set of base instances, plus
    /// the quantifier-free entries.
    fn inst_sides<'b>(&self, us: impl Iterator<Item = &'b Inst>) -> (Vec<Formula>, Vec<Formula>) {
        let mut a = self.qf(Side::Antecedent);
        let mut s = self.qf(Side::Succedent);
        for u in us {
            match u.side {
                Side::Antecedent => push(&mut a, u.formula.clone()),
                Side::Succedent => push(&mut s, u.formula.clone()),
            }
        }
        (a, s)
    }

    fn instances_at(&self, a: &Formula, i: usize) -> Vec<Formula> {
        let l = &self.g.levels[i];
        l.productions.iter().map(|s| a.subst1(&l.var, s)).collect()
    }

    fn right_leaf(&self, matrices: &[Formula], i: usize) -> Sequent {
        let (mut a, mut s) = self.inst_sides(self.partition(i + 1));
        for f in self.instances_at(&matrices[i], i) {
            push(&mut a, f);
        }
        for f in &matrices[i + 1..] {
            push(&mut s, f.clone());
        }
        Sequent::new(a, s)
    }

    fn left_leaf(&self, matrices: &[Formula]) -> Sequent {
        let (a, mut s) = self.inst_sides(self.base.iter());
        for f in matrices {
            push(&mut s, f.clone());
        }
        Sequent::new(a, s)
    }

    fn plan(&self, solution: &[Formula]) -> Result<LinearFormPlan> {
        let n = self.n();
        let mut matrices = solution.to_vec();
        let mut repaired = Vec::new();
        for i in (0..n).rev() {
            let r = self.right_leaf(&matrices, i);
            if sat::valid(&r.antecedent, &r.succedent) {
                continue;
            }
            let outer: Vec<&Inst> = self.base.iter().filter(|u| !self.in_level(u, i + 1)).collect();
            let (mut left1, right1) = self.inst_sides(outer.into_iter());
            for j in 0..i {
                left1.push(cut_implication(&solution[j], &self.g.levels[j].var, &self.g.levels[j].productions));
            }
            let (mut left2, mut right2) = self.inst_sides(self.partition(i + 1));
            left2.push(Formula::conj(self.instances_at(&solution[i], i)));
            right2.extend(matrices[i + 1..].iter().cloned());
            let itp = interpolate(&PartitionedSequent { left1, left2, right1, right2 })?;
            log::info!("level {}: strengthening cut matrix by interpolant {itp}", i + 1);
            matrices[i] = Formula::and(solution[i].clone(), itp).simplify();
            repaired.push(i + 1);
        }
        let left_leaf = self.left_leaf(&matrices);
        let right_leaves = (0..n).map(|i| self.right_leaf(&matrices, i)).collect();
        Ok(LinearFormPlan { matrices, repaired, left_leaf, right_leaves })
    }
}

fn fresh_bound(f: &Formula) -> String {
    let mut used = BTreeSet::new();
    for a in f.atoms() {
        for t in &a.args {
            for s in t.subterms() {
                used.insert(s.head().to_string());
            }
        }
    }
    std::iter::once("x".to_string()).chain((1..).map(|k| format!("x{k}"))).find(|x| !used.contains(x)).expect("infinite supply")
}

/// Cut formula `∀x A[α\x]`.
pub fn cut_formula(a: &Formula, alpha: &str) -> Formula {
    let x = fresh_bound(a);
    Formula::forall(x.clone(), a.subst1(alpha, &Term::var(x)))
}

/// Applies weak quantifier blocks for `insts` on top of `s`, closing with `inner`.
fn blocks(b: &Builder, s: Sequent, insts: &[&Inst], inner: impl FnOnce(Sequent) -> Result<Proof>) -> Result<Proof> {
    let Some((first, rest)) = insts.split_first() else { return inner(s) };
    let principal = b.s.quantified(first.entry).expect("entry exists");
    let mut next = s.clone();
    let rule = match first.side {
        Side::Antecedent => {
            push(&mut next.antecedent, first.formula.clone());
            Rule::ForallBlockL
        }
        Side::Succedent => {
            push(&mut next.succedent, first.formula.clone());
            Rule::ExistsBlockR
        }
    };
    let premise = blocks(b, next, rest, inner)?;
    Ok(Proof::new(rule, s, Payload::Block { principal, terms: first.tuple.clone() }, vec![premise]))
}

fn leaf(s: Sequent) -> Result<Proof> {
    prove_propositional(&s).ok_or_else(|| Error::Internal(format!("leaf sequent is not a tautology: {s}")))
}

/// Builds the linear-form plan, repairing matrices where needed.
pub fn plan_linear_form(s: &SigmaOneSequent, g: &TreeGrammar, solution: &[Formula]) -> Result<LinearFormPlan> {
    if solution.len() != g.levels.len() {
        return Err(Error::Input(format!("{} cut matrices for {} grammar levels", solution.len(), g.levels.len())));
    }
    let b = Builder::new(s, g)?;
    let h = {
        let (mut a, succ) = b.inst_sides(b.base.iter());
        for (l, f) in g.levels.iter().zip(solution) {
            a.push(cut_implication(f, &l.var, &l.productions));
        }
        Sequent::new(a, succ)
    };
    if !sat::valid(&h.antecedent, &h.succedent) {
        return Err(Error::NotTautology(format!("extended Herbrand sequent {h}")));
    }
    b.plan(solution)
}

/// A proof of the end-sequent with one cut `∀x A′_i[α_i\x]` per grammar level.
pub fn build_proof_with_cut(s: &SigmaOneSequent, g: &TreeGrammar, solution: &[Formula]) -> Result<Proof> {
    let plan = plan_linear_form(s, g, solution)?;
    let b = Builder::new(s, g)?;
    let n = g.levels.len();
    let cuts: Vec<Formula> = plan.matrices.iter().zip(&g.levels).map(|(a, l)| cut_formula(a, &l.var)).collect();

    // Stage `i` (counting down from n) works below the blocks for U_i.
    fn stage(b: &Builder, plan: &LinearFormPlan, cuts: &[Formula], i: usize, s: Sequent) -> Result<Proof> {
        if i == 0 {
            return leaf(s);
        }
        let lvl = i - 1;
        let level = &b.g.levels[lvl];
        let cf = cuts[lvl].clone();

        let mut right = s.clone();
        push(&mut right.antecedent, cf.clone());
        let terms: Vec<&Term> = level.productions.iter().collect();
        let right_proof = instantiate_cut(right, &cf, &terms, leaf)?;

        let mut left = s.clone();
        push(&mut left.succedent, cf.clone());
        let mut opened = s.clone();
        push(&mut opened.succedent, plan.matrices[lvl].clone());
        let newly: Vec<&Inst> = b.base.iter().filter(|u| b.in_level(u, lvl) && !b.in_level(u, lvl + 1)).collect();
        let inner = blocks(b, opened.clone(), &newly, |q| stage(b, plan, cuts, i - 1, q))?;
        let left_proof = Proof::new(
            Rule::ForallR,
            left.clone(),
            Payload::Eigen { principal: cf.clone(), var: level.var.clone() },
            vec![inner],
        );
        Ok(Proof::new(Rule::Cut, s, Payload::Cut(cf), vec![left_proof, right_proof]))
    }

    let root = s.end_sequent();
    let ground: Vec<&Inst> = b.partition(n).collect();
    let p = blocks(&b, root, &ground, |q| stage(&b, &plan, &cuts, n, q))?;
    debug_assert_eq!(p.stats().cuts, n);
    Ok(p)
}

fn instantiate_cut(
    s: Sequent,
    cf: &Formula,
    terms: &[&Term],
    inner: impl FnOnce(Sequent) -> Result<Proof>,
) -> Result<Proof> {
    let Some((t, rest)) = terms.split_first() else { return inner(s) };
    let inst = cf.instantiate_block(Quantifier::Forall, &[(*t).clone()]).expect("cut formula is universal");
    let mut next = s.clone();
    push(&mut next.antecedent, inst);
    let premise = instantiate_cut(next, cf, rest, inner)?;
    Ok(Proof::new(Rule::ForallBlockL, s, Payload::Block { principal: cf.clone(), terms: vec![(*t).clone()] }, vec![premise]))
}

/// The cut-free proof witnessed by the instances `terms`.
pub fn build_cut_free(s: &SigmaOneSequent, terms: &BTreeSet<Term>) -> Result<Proof> {
    build_proof_with_cut(s, &TreeGrammar::new(terms.clone(), vec![]), &[])
}
