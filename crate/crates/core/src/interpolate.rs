//! Propositional Craig interpolation by Boolean quantifier elimination.

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::sat;
use std::collections::BTreeSet;

/// `left1, left2 ⊢ right1, right2` split into the two halves `left1 ⊢ right1`
/// and `left2 ⊢ right2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionedSequent {
    pub left1: Vec<Formula>,
    pub left2: Vec<Formula>,
    pub right1: Vec<Formula>,
    pub right2: Vec<Formula>,
}

fn atoms_of(fs: &[&[Formula]]) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    fs.iter().flat_map(|s| s.iter()).for_each(|f| f.collect_atoms(&mut out));
    out
}

/// Replaces every occurrence of `atom` by a truth constant.
pub fn assign_atom(f: &Formula, atom: &Atom, value: bool) -> Formula {
    match f {
        Formula::Atom(a) if a == atom => {
            if value {
                Formula::Top
            } else {
                Formula::Bottom
            }
        }
        Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(assign_atom(a, atom, value)),
        Formula::And(a, b) => Formula::and(assign_atom(a, atom, value), assign_atom(b, atom, value)),
        Formula::Or(a, b) => Formula::or(assign_atom(a, atom, value), assign_atom(b, atom, value)),
        Formula::Imp(a, b) => Formula::imp(assign_atom(a, atom, value), assign_atom(b, atom, value)),
        Formula::Forall(v, a) => Formula::forall(v.clone(), assign_atom(a, atom, value)),
        Formula::Exists(v, a) => Formula::exists(v.clone(), assign_atom(a, atom, value)),
    }
}

/// `∃atom. f` as `f[⊤] ∨ f[⊥]`.
pub fn eliminate(f: &Formula, atom: &Atom) -> Formula {
    let hi = assign_atom(f, atom, true).simplify();
    let lo = assign_atom(f, atom, false).simplify();
    if hi == lo {
        hi
    } else {
        Formula::or(hi, lo).simplify()
    }
}

/// An interpolant `I` with `left1 ⊢ right1, I` and `I, left2 ⊢ right2` valid,
/// over the atoms shared by both halves.
pub fn interpolate(s: &PartitionedSequent) -> Result<Formula> {
    let ante: Vec<Formula> = s.left1.iter().chain(&s.left2).cloned().collect();
    let succ: Vec<Formula> = s.right1.iter().chain(&s.right2).cloned().collect();
    if !sat::valid(&ante, &succ) {
        return Err(Error::NotTautology("interpolation input".into()));
    }
    let shared = atoms_of(&[&s.left2, &s.right2]);
    let mut f = Formula::and(Formula::conj(s.left1.iter().cloned()), Formula::not(Formula::disj(s.right1.iter().cloned())))
        .simplify();
    for a in atoms_of(&[&s.left1, &s.right1]) {
        if !shared.contains(&a) {
            f = eliminate(&f, &a);
        }
    }
    Ok(f)
}
