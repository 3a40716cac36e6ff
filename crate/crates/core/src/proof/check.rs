use super::{Payload, Proof, Rule, Sequent};
use crate::formula::{Formula, Quantifier};
use crate::term::Term;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Premise indices from the root (0-based).
    pub path: Vec<usize>,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.iter().map(ToString::to_string).collect::<Vec<_>>().join(".");
        let path = if path.is_empty() { "root".to_string() } else { format!("root.{path}") };
        write!(f, "{path} ({}): {}", self.rule.name(), self.message)
    }
}

/// Every violation in the tree; empty means the proof is correct.
pub fn check_proof(p: &Proof) -> Vec<Violation> {
    let mut out = Vec::new();
    check_node(p, &mut Vec::new(), &mut out);
    out
}

fn check_node(p: &Proof, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    if let Err(message) = check_local(p) {
        out.push(Violation { path: path.clone(), rule: p.rule, message });
    }
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        check_node(q, path, out);
        path.pop();
    }
}

type Side<'a> = BTreeSet<&'a Formula>;

/// The premise side must equal `side ∪ added`, with `principal` either kept or dropped.
fn side_matches(premise: &[Formula], side: &[Formula], principal: Option<&Formula>, added: &[&Formula]) -> bool {
    let got: Side = premise.iter().collect();
    let mut keep: Side = side.iter().collect();
    keep.extend(added.iter().copied());
    if got == keep {
        return true;
    }
    if let Some(p) = principal {
        let mut drop: Side = side.iter().filter(|f| *f != p).collect();
        drop.extend(added.iter().copied());
        return got == drop;
    }
    false
}

fn arity(p: &Proof, n: usize) -> Result<(), String> {
    if p.premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premises, found {}", p.premises.len()))
    }
}

fn principal(p: &Proof) -> Result<&Formula, String> {
    match &p.payload {
        Payload::Principal(f) | Payload::Block { principal: f, .. } | Payload::Eigen { principal: f, .. } => Ok(f),
        _ => Err("missing principal formula".into()),
    }
}

fn left_principal(p: &Proof) -> Result<&Formula, String> {
    let f = principal(p)?;
    if p.conclusion.antecedent.contains(f) {
        Ok(f)
    } else {
        Err(format!("principal formula {f} not in antecedent"))
    }
}

fn right_principal(p: &Proof) -> Result<&Formula, String> {
    let f = principal(p)?;
    if p.conclusion.succedent.contains(f) {
        Ok(f)
    } else {
        Err(format!("principal formula {f} not in succedent"))
    }
}

/// Premise `i` is the conclusion with `ante_add`/`succ_add` added and the
/// principal optionally removed from its side.
fn premise_is(
    p: &Proof,
    i: usize,
    left: Option<&Formula>,
    right: Option<&Formula>,
    ante_add: &[&Formula],
    succ_add: &[&Formula],
) -> Result<(), String> {
    let c = &p.conclusion;
    let q = &p.premises[i].conclusion;
    if side_matches(&q.antecedent, &c.antecedent, left, ante_add) && side_matches(&q.succedent, &c.succedent, right, succ_add) {
        Ok(())
    } else {
        Err(format!("premise {} does not match the rule schema: {q}", i + 1))
    }
}

fn check_local(p: &Proof) -> Result<(), String> {
    let c: &Sequent = &p.conclusion;
    match p.rule {
        Rule::Axiom => {
            arity(p, 0)?;
            if c.is_axiom() {
                Ok(())
            } else {
                Err("not an axiom: no shared atom, no ⊥ on the left, no ⊤ on the right".into())
            }
        }
        Rule::AndL => {
            arity(p, 1)?;
            let Formula::And(a, b) = left_principal(p)? else { return Err("principal is not a conjunction".into()) };
            premise_is(p, 0, Some(principal(p)?), None, &[a, b], &[])
        }
        Rule::AndR => {
            arity(p, 2)?;
            let f = right_principal(p)?;
            let Formula::And(a, b) = f else { return Err("principal is not a conjunction".into()) };
            premise_is(p, 0, None, Some(f), &[], &[a])?;
            premise_is(p, 1, None, Some(f), &[], &[b])
        }
        Rule::OrL => {
            arity(p, 2)?;
            let f = left_principal(p)?;
            let Formula::Or(a, b) = f else { return Err("principal is not a disjunction".into()) };
            premise_is(p, 0, Some(f), None, &[a], &[])?;
            premise_is(p, 1, Some(f), None, &[b], &[])
        }
        Rule::OrR => {
            arity(p, 1)?;
            let f = right_principal(p)?;
            let Formula::Or(a, b) = f else { return Err("principal is not a disjunction".into()) };
            premise_is(p, 0, None, Some(f), &[], &[a, b])
        }
        Rule::ImpL => {
            arity(p, 2)?;
            let f = left_principal(p)?;
            let Formula::Imp(a, b) = f else { return Err("principal is not an implication".into()) };
            premise_is(p, 0, Some(f), None, &[], &[a])?;
            premise_is(p, 1, Some(f), None, &[b], &[])
        }
        Rule::ImpR => {
            arity(p, 1)?;
            let f = right_principal(p)?;
            let Formula::Imp(a, b) = f else { return Err("principal is not an implication".into()) };
            premise_is(p, 0, None, Some(f), &[a], &[b])
        }
        Rule::NotL => {
            arity(p, 1)?;
            let f = left_principal(p)?;
            let Formula::Not(a) = f else { return Err("principal is not a negation".into()) };
            premise_is(p, 0, Some(f), None, &[], &[a])
        }
        Rule::NotR => {
            arity(p, 1)?;
            let f = right_principal(p)?;
            let Formula::Not(a) = f else { return Err("principal is not a negation".into()) };
            premise_is(p, 0, None, Some(f), &[a], &[])
        }
        Rule::ForallBlockL | Rule::ExistsBlockR => {
            arity(p, 1)?;
            let Payload::Block { terms, .. } = &p.payload else { return Err("missing instantiation terms".into()) };
            let left = p.rule == Rule::ForallBlockL;
            let f = if left { left_principal(p)? } else { right_principal(p)? };
            let q = if left { Quantifier::Forall } else { Quantifier::Exists };
            if terms.is_empty() {
                return Err("empty instantiation block".into());
            }
            let inst = f
                .instantiate_block(q, terms)
                .ok_or_else(|| format!("{f} has fewer than {} leading quantifiers", terms.len()))?;
            if left {
                premise_is(p, 0, Some(f), None, &[&inst], &[]).map_err(|e| format!("block instantiation: {e}"))
            } else {
                premise_is(p, 0, None, Some(f), &[], &[&inst]).map_err(|e| format!("block instantiation: {e}"))
            }
        }
        Rule::ForallR | Rule::ExistsL => {
            arity(p, 1)?;
            let Payload::Eigen { var, .. } = &p.payload else { return Err("missing eigenvariable".into()) };
            let left = p.rule == Rule::ExistsL;
            let f = if left { left_principal(p)? } else { right_principal(p)? };
            let (x, body) = match (left, f) {
                (false, Formula::Forall(x, b)) | (true, Formula::Exists(x, b)) => (x, b),
                _ => return Err("principal has the wrong quantifier".into()),
            };
            if c.free_vars().contains(var) {
                return Err(format!("eigenvariable condition: {var} occurs free in the conclusion"));
            }
            let inst = body.subst1(x, &Term::var(var.clone()));
            if left {
                premise_is(p, 0, Some(f), None, &[&inst], &[])
            } else {
                premise_is(p, 0, None, Some(f), &[], &[&inst])
            }
        }
        Rule::Cut => {
            arity(p, 2)?;
            let Payload::Cut(cf) = &p.payload else { return Err("missing cut formula".into()) };
            premise_is(p, 0, None, None, &[], &[cf])?;
            premise_is(p, 1, None, None, &[cf], &[])
        }
        Rule::Weakening => {
            arity(p, 1)?;
            let q = &p.premises[0].conclusion;
            if q.ante_set().is_subset(&c.ante_set()) && q.succ_set().is_subset(&c.succ_set()) {
                Ok(())
            } else {
                Err("premise is not a subsequent of the conclusion".into())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s, &BTreeSet::new()).unwrap()
    }

    #[test]
    fn single_axiom() {
        let p = Proof::new(Rule::Axiom, Sequent::new(vec![f("P(a)")], vec![f("P(a)")]), Payload::None, vec![]);
        assert!(check_proof(&p).is_empty());
        let bad = Proof::new(Rule::Axiom, Sequent::new(vec![f("P(a)")], vec![f("P(b)")]), Payload::None, vec![]);
        assert_eq!(check_proof(&bad).len(), 1);
    }

    #[test]
    fn eigenvariable_condition() {
        let alpha = crate::parse::var_set(["α"]);
        let pa = parse_formula("P(α)", &alpha).unwrap();
        let all = f("∀x.P(x)");
        let premise = Proof::new(Rule::Axiom, Sequent::new(vec![pa.clone()], vec![pa.clone()]), Payload::None, vec![]);
        let node = Proof::new(
            Rule::ForallR,
            Sequent::new(vec![pa], vec![all.clone()]),
            Payload::Eigen { principal: all, var: "α".into() },
            vec![premise],
        );
        let v = check_proof(&node);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("eigenvariable condition"), "{}", v[0]);
        assert!(v[0].to_string().starts_with("root (∀_r)"));
    }
}
