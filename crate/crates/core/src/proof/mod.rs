//! Sequent-calculus proofs with quantifier-block rules and cut.

mod check;
mod json;
mod prover;

pub use check::{check_proof, Violation};
pub use json::{proof_from_json, proof_to_json};
pub use prover::prove_propositional;

use crate::formula::Formula;
use crate::term::Term;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> Sequent {
        Sequent { antecedent, succedent }
    }

    pub fn ante_set(&self) -> BTreeSet<&Formula> {
        self.antecedent.iter().collect()
    }

    pub fn succ_set(&self) -> BTreeSet<&Formula> {
        self.succedent.iter().collect()
    }

    /// Same sets on both sides.
    pub fn set_eq(&self, other: &Sequent) -> bool {
        self.ante_set() == other.ante_set() && self.succ_set() == other.succ_set()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.antecedent.iter().chain(&self.succedent).flat_map(|f| f.free_vars()).collect()
    }

    pub fn with_ante(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        if !s.antecedent.contains(&f) {
            s.antecedent.push(f);
        }
        s
    }

    pub fn with_succ(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        if !s.succedent.contains(&f) {
            s.succedent.push(f);
        }
        s
    }

    pub fn is_axiom(&self) -> bool {
        self.antecedent.iter().any(|f| match f {
            Formula::Bottom => true,
            Formula::Atom(_) => self.succedent.contains(f),
            _ => false,
        }) || self.succedent.contains(&Formula::Top)
    }
}

fn join(fs: &[Formula]) -> String {
    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = join(&self.antecedent);
        let s = join(&self.succedent);
        match (a.is_empty(), s.is_empty()) {
            (true, true) => write!(f, "⊢"),
            (true, false) => write!(f, "⊢ {s}"),
            (false, true) => write!(f, "{a} ⊢"),
            (false, false) => write!(f, "{a} ⊢ {s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Axiom,
    AndL,
    AndR,
    OrL,
    OrR,
    ImpL,
    ImpR,
    NotL,
    NotR,
    ForallBlockL,
    ExistsBlockR,
    ForallR,
    ExistsL,
    Cut,
    Weakening,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::AndL => "∧_l",
            Rule::AndR => "∧_r",
            Rule::OrL => "∨_l",
            Rule::OrR => "∨_r",
            Rule::ImpL => "⊃_l",
            Rule::ImpR => "⊃_r",
            Rule::NotL => "¬_l",
            Rule::NotR => "¬_r",
            Rule::ForallBlockL => "∀*_l",
            Rule::ExistsBlockR => "∃*_r",
            Rule::ForallR => "∀_r",
            Rule::ExistsL => "∃_l",
            Rule::Cut => "cut",
            Rule::Weakening => "w",
        }
    }

    pub fn is_quantifier_rule(self) -> bool {
        matches!(self, Rule::ForallBlockL | Rule::ExistsBlockR | Rule::ForallR | Rule::ExistsL)
    }

    /// Rules measured by quantifier complexity.
    pub fn is_weak_quantifier_rule(self) -> bool {
        matches!(self, Rule::ForallBlockL | Rule::ExistsBlockR)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    None,
    /// The conclusion formula the rule acts on.
    Principal(Formula),
    Block { principal: Formula, terms: Vec<Term> },
    Eigen { principal: Formula, var: String },
    Cut(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Proof {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub payload: Payload,
    pub premises: Vec<Proof>,
}

impl Proof {
    pub fn new(rule: Rule, conclusion: Sequent, payload: Payload, premises: Vec<Proof>) -> Proof {
        Proof { rule, conclusion, payload, premises }
    }

    pub fn nodes(&self) -> usize {
        1 + self.premises.iter().map(Proof::nodes).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Proof::depth).max().unwrap_or(0)
    }

    pub fn stats(&self) -> ProofStats {
        let mut s = ProofStats::default();
        self.accumulate(&mut s);
        s
    }

    fn accumulate(&self, s: &mut ProofStats) {
        s.total_rules += 1;
        s.cuts += usize::from(self.rule == Rule::Cut);
        s.quantifier_rules += usize::from(self.rule.is_quantifier_rule());
        s.quantifier_complexity += usize::from(self.rule.is_weak_quantifier_rule());
        self.premises.iter().for_each(|p| p.accumulate(s));
    }

    /// Cut formulas in pre-order.
    pub fn cut_formulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.walk(&mut |p| {
            if let Payload::Cut(c) = &p.payload {
                out.push(c);
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Proof)) {
        f(self);
        self.premises.iter().for_each(|p| p.walk(f));
    }

    /// Indented tree, one node per line, root first.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let extra = match &self.payload {
            Payload::None | Payload::Principal(_) => String::new(),
            Payload::Block { terms, .. } => {
                format!("  [{}]", terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            }
            Payload::Eigen { var, .. } => format!("  [eigenvariable {var}]"),
            Payload::Cut(c) => format!("  [cut formula {c}]"),
        };
        out.push_str(&format!("{}{}: {}{}\n", "  ".repeat(depth), self.rule.name(), self.conclusion, extra));
        self.premises.iter().for_each(|p| p.render_into(depth + 1, out));
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStats {
    pub cuts: usize,
    pub quantifier_rules: usize,
    pub total_rules: usize,
    pub quantifier_complexity: usize,
}

impl ProofStats {
    pub fn render_block(&self) -> String {
        format!(
            "------------- Statistics ---------------\n\
             Cuts: {}\n\
             Number of quantifier rules: {}\n\
             Number of rules: {}\n\
             Quantifier complexity: {}\n\
             ----------------------------------------\n",
            self.cuts, self.quantifier_rules, self.total_rules, self.quantifier_complexity
        )
    }
}
