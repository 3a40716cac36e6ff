use super::{Payload, Proof, Rule, Sequent};
use crate::formula::Formula;
use crate::sat;

/// Cut-free proof of the quantifier-free part of `s`, decomposing only
/// formulas of a minimal valid core. Quantified formulas are carried along as
/// context. `None` when that part is not a tautology.
pub fn prove_propositional(s: &Sequent) -> Option<Proof> {
    let (a, b) = qf_parts(s);
    if !sat::valid(&a, &b) {
        return None;
    }
    Some(build(s.clone()))
}

fn qf_parts(s: &Sequent) -> (Vec<Formula>, Vec<Formula>) {
    let a = s.antecedent.iter().filter(|f| f.is_quantifier_free()).cloned().collect();
    let b = s.succedent.iter().filter(|f| f.is_quantifier_free()).cloned().collect();
    (a, b)
}

/// Greedy deletion: drop each formula whose removal keeps the sequent valid.
fn core(s: &Sequent) -> (Vec<Formula>, Vec<Formula>) {
    let (mut a, mut b) = qf_parts(s);
    let mut i = 0;
    while i < a.len() {
        let f = a.remove(i);
        if !sat::valid(&a, &b) {
            a.insert(i, f);
            i += 1;
        }
    }
    let mut i = 0;
    while i < b.len() {
        let f = b.remove(i);
        if !sat::valid(&a, &b) {
            b.insert(i, f);
            i += 1;
        }
    }
    (a, b)
}

fn without(fs: &[Formula], f: &Formula) -> Vec<Formula> {
    fs.iter().filter(|g| *g != f).cloned().collect()
}

fn extend(mut fs: Vec<Formula>, add: &[&Formula]) -> Vec<Formula> {
    for f in add {
        if !fs.contains(f) {
            fs.push((*f).clone());
        }
    }
    fs
}

/// Rule and premise sequents for decomposing `f` on the given side.
fn decompose(s: &Sequent, f: &Formula, left: bool) -> Option<(Rule, Vec<Sequent>)> {
    let ga = || without(&s.antecedent, f);
    let gs = || without(&s.succedent, f);
    let ante = |add: &[&Formula]| Sequent::new(extend(ga(), add), s.succedent.clone());
    let succ = |add: &[&Formula]| Sequent::new(s.antecedent.clone(), extend(gs(), add));
    Some(match (left, f) {
        (true, Formula::And(a, b)) => (Rule::AndL, vec![ante(&[a, b])]),
        (true, Formula::Or(a, b)) => (Rule::OrL, vec![ante(&[a]), ante(&[b])]),
        (true, Formula::Imp(a, b)) => {
            (Rule::ImpL, vec![Sequent::new(ga(), extend(s.succedent.clone(), &[a])), ante(&[b])])
        }
        (true, Formula::Not(a)) => (Rule::NotL, vec![Sequent::new(ga(), extend(s.succedent.clone(), &[a]))]),
        (false, Formula::And(a, b)) => (Rule::AndR, vec![succ(&[a]), succ(&[b])]),
        (false, Formula::Or(a, b)) => (Rule::OrR, vec![succ(&[a, b])]),
        (false, Formula::Imp(a, b)) => {
            (Rule::ImpR, vec![Sequent::new(extend(s.antecedent.clone(), &[a]), extend(gs(), &[b]))])
        }
        (false, Formula::Not(a)) => (Rule::NotR, vec![Sequent::new(extend(s.antecedent.clone(), &[a]), gs())]),
        _ => return None,
    })
}

fn build(s: Sequent) -> Proof {
    if s.is_axiom() {
        return Proof::new(Rule::Axiom, s, Payload::None, Vec::new());
    }
    let (a, b) = core(&s);
    let candidates: Vec<(&Formula, bool)> = a.iter().map(|f| (f, true)).chain(b.iter().map(|f| (f, false))).collect();
    let mut branching = None;
    let mut chosen = None;
    for &(f, left) in &candidates {
        let Some((rule, premises)) = decompose(&s, f, left) else { continue };
        if premises.len() == 1 {
            chosen = Some((f, rule, premises));
            break;
        }
        let closes = premises.iter().any(Sequent::is_axiom);
        match &branching {
            Some((_, _, _, true)) => {}
            Some(_) if !closes => {}
            _ => branching = Some((f, rule, premises, closes)),
        }
    }
    let (f, rule, premises) = chosen
        .or_else(|| branching.map(|(f, r, p, _)| (f, r, p)))
        .expect("a valid non-axiom sequent has a compound core formula");
    let f = f.clone();
    let premises = premises.into_iter().map(build).collect();
    Proof::new(rule, s, Payload::Principal(f), premises)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::proof::check_proof;
    use std::collections::BTreeSet;

    fn f(s: &str) -> Formula {
        parse_formula(s, &BTreeSet::new()).unwrap()
    }

    #[test]
    fn modus_ponens_uses_one_implication_left() {
        let s = Sequent::new(vec![f("P(a)"), f("P(a) ⊃ P(f(a))")], vec![f("P(f(a))")]);
        let p = prove_propositional(&s).unwrap();
        assert_eq!(p.rule, Rule::ImpL);
        assert_eq!(p.nodes(), 3);
        assert!(check_proof(&p).is_empty());
        assert!(prove_propositional(&Sequent::new(vec![f("P(a)")], vec![f("P(f(a))")])).is_none());
    }

    #[test]
    fn irrelevant_formulas_are_not_decomposed() {
        let s = Sequent::new(vec![f("Q ∧ R"), f("P"), f("∀x.S(x)")], vec![f("P ∨ T")]);
        let p = prove_propositional(&s).unwrap();
        assert_eq!(p.rule, Rule::OrR);
        assert_eq!(p.nodes(), 2);
        assert!(check_proof(&p).is_empty());
    }
}
