//! Σ₁ end-sequents, Herbrand instances and extended Herbrand sequents.

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier};
use crate::grammar::TreeGrammar;
use crate::parse::{parse_formula, parse_term};
use crate::proof::Sequent;
use crate::sat;
use crate::term::{Substitution, Term};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// `∀x̄ F` in the antecedent or `∃x̄ F` in the succedent; `vars` may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantEntry {
    pub vars: Vec<String>,
    pub matrix: Formula,
}

impl QuantEntry {
    pub fn new(vars: &[&str], matrix: Formula) -> QuantEntry {
        QuantEntry { vars: vars.iter().map(|v| v.to_string()).collect(), matrix }
    }

    pub fn instance(&self, tuple: &[Term]) -> Formula {
        let sigma = Substitution::from_pairs(self.vars.iter().cloned().zip(tuple.iter().cloned()));
        self.matrix.instantiate(&sigma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Antecedent,
    Succedent,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SigmaOneSequent {
    pub antecedent: Vec<QuantEntry>,
    pub succedent: Vec<QuantEntry>,
}

/// Instance tuples per entry index (1-based over antecedent, then succedent).
pub type Instances = BTreeMap<usize, Vec<Vec<Term>>>;

pub fn tag(i: usize) -> String {
    format!("f_{i}")
}

fn tag_index(head: &str) -> Option<usize> {
    head.strip_prefix("f_")?.parse().ok()
}

impl SigmaOneSequent {
    pub fn len(&self) -> usize {
        self.antecedent.len() + self.succedent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entry(&self, i: usize) -> Option<(Side, &QuantEntry)> {
        let p = self.antecedent.len();
        if i == 0 {
            None
        } else if i <= p {
            Some((Side::Antecedent, &self.antecedent[i - 1]))
        } else {
            self.succedent.get(i - p - 1).map(|e| (Side::Succedent, e))
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Side, &QuantEntry)> {
        (1..=self.len()).map(move |i| {
            let (side, e) = self.entry(i).expect("index in range");
            (i, side, e)
        })
    }

    pub fn quantified(&self, i: usize) -> Option<Formula> {
        let (side, e) = self.entry(i)?;
        let q = if side == Side::Antecedent { Quantifier::Forall } else { Quantifier::Exists };
        Some(Formula::quantify(q, &e.vars, e.matrix.clone()))
    }

    /// The end-sequent with its quantifier prefixes.
    pub fn end_sequent(&self) -> Sequent {
        let n = self.antecedent.len();
        Sequent::new(
            (1..=n).map(|i| self.quantified(i).expect("in range")).collect(),
            (n + 1..=self.len()).map(|i| self.quantified(i).expect("in range")).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let mut sig = BTreeMap::new();
        for (i, _, e) in self.entries() {
            if !e.matrix.is_quantifier_free() {
                return Err(Error::Input(format!("matrix of entry {i} is not quantifier-free")));
            }
            let bound: BTreeSet<String> = e.vars.iter().cloned().collect();
            if let Some(v) = e.matrix.free_vars().into_iter().find(|v| !bound.contains(v)) {
                return Err(Error::Input(format!("entry {i} has free variable {v}")));
            }
            for a in e.matrix.atoms() {
                for t in &a.args {
                    t.check_signature(&mut sig).map_err(Error::Arity)?;
                }
            }
        }
        if sig.keys().any(|f| tag_index(f).is_some()) {
            return Err(Error::Input("symbols of the form f_<n> are reserved for instance tags".into()));
        }
        Ok(())
    }

    pub fn tag_term(&self, i: usize, tuple: &[Term]) -> Term {
        Term::app(tag(i), tuple.to_vec())
    }

    /// Entry index and tuple of a tagged term.
    pub fn decode(&self, t: &Term) -> Result<(usize, Vec<Term>)> {
        let i = tag_index(t.head()).filter(|_| !t.is_var()).ok_or_else(|| Error::Input(format!("{t} is not a tagged instance term")))?;
        let (_, e) = self.entry(i).ok_or_else(|| Error::Input(format!("{t} refers to a missing entry {i}")))?;
        if e.vars.is_empty() || e.vars.len() != t.args().len() {
            return Err(Error::Arity(format!("{t} does not match the {} quantifiers of entry {i}", e.vars.len())));
        }
        Ok((i, t.args().to_vec()))
    }

    /// Instances of the tagged terms plus every quantifier-free entry.
    pub fn instances_of(&self, terms: &BTreeSet<Term>) -> Result<(Vec<Formula>, Vec<Formula>)> {
        let mut ante = Vec::new();
        let mut succ = Vec::new();
        for (_, side, e) in self.entries() {
            if e.vars.is_empty() {
                match side {
                    Side::Antecedent => ante.push(e.matrix.clone()),
                    Side::Succedent => succ.push(e.matrix.clone()),
                }
            }
        }
        for t in terms {
            let (i, tuple) = self.decode(t)?;
            let (side, e) = self.entry(i).expect("decoded index exists");
            let f = e.instance(&tuple);
            let target = if side == Side::Antecedent { &mut ante } else { &mut succ };
            if !target.contains(&f) {
                target.push(f);
            }
        }
        Ok((ante, succ))
    }

    /// Instances of the terms as a sequent, and whether it is a tautology.
    pub fn herbrand_sequent(&self, terms: &BTreeSet<Term>) -> Result<(Sequent, bool)> {
        let (a, s) = self.instances_of(terms)?;
        let valid = sat::valid(&a, &s);
        Ok((Sequent::new(a, s), valid))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermExtraction {
    pub terms: BTreeSet<Term>,
    /// Number of tuples before deduplication.
    pub raw: usize,
}

pub fn extract_terms(instances: &Instances, s: &SigmaOneSequent) -> Result<TermExtraction> {
    let mut terms = BTreeSet::new();
    let mut raw = 0;
    for (&i, tuples) in instances {
        let (_, e) = s.entry(i).ok_or_else(|| Error::Input(format!("instance for missing entry {i}")))?;
        for t in tuples {
            if t.len() != e.vars.len() {
                return Err(Error::Arity(format!(
                    "entry {i} binds {} variables but a tuple has {} terms",
                    e.vars.len(),
                    t.len()
                )));
            }
            if e.vars.is_empty() {
                continue;
            }
            raw += 1;
            terms.insert(s.tag_term(i, t));
        }
    }
    Ok(TermExtraction { terms, raw })
}

/// A Σ₁ end-sequent, a grammar for its instance terms, and unknown cut matrices
/// `X_i(α_i)` to be solved.
#[derive(Clone, Debug)]
pub struct SchematicEhs {
    pub sequent: SigmaOneSequent,
    pub grammar: TreeGrammar,
}

pub fn build_shs(s: &SigmaOneSequent, g: &TreeGrammar) -> Result<SchematicEhs> {
    g.check_invariants().map_err(|e| Error::GrammarRejected(e.to_string()))?;
    for u in &g.base {
        s.decode(u).map_err(|e| Error::GrammarRejected(e.to_string()))?;
    }
    let vars: BTreeSet<String> = g.vars().into_iter().collect();
    let clash = s.entries().flat_map(|(_, _, e)| e.matrix.atoms()).flat_map(|a| a.args).flat_map(|t| t.subterms());
    for t in clash {
        if vars.contains(t.head()) {
            return Err(Error::GrammarRejected(format!("nonterminal {} is also a symbol of the end-sequent", t.head())));
        }
    }
    for l in &g.levels {
        for p in &l.productions {
            if p.subterms().iter().any(|t| tag_index(t.head()).is_some() && !t.is_var()) {
                return Err(Error::GrammarRejected(format!("production {p} contains an instance tag")));
            }
        }
    }
    let (_, valid) = s.herbrand_sequent(&g.language())?;
    if !valid {
        return Err(Error::GrammarRejected("the instances of the grammar's language are not a tautology".into()));
    }
    Ok(SchematicEhs { sequent: s.clone(), grammar: g.clone() })
}

impl SchematicEhs {
    pub fn eigenvariables(&self) -> Vec<String> {
        self.grammar.vars()
    }

    /// Number of instances plus number of cut instances.
    pub fn size(&self) -> usize {
        self.grammar.size()
    }

    pub fn base_instances(&self) -> (Vec<Formula>, Vec<Formula>) {
        self.sequent.instances_of(&self.grammar.base).expect("base terms were validated")
    }

    /// The quantifier-free sequent with the cut implications
    /// `A_i ⊃ ⋀_j A_i[α_i\s_ij]` added to the antecedent.
    pub fn solved_sequent(&self, solution: &[Formula]) -> Sequent {
        let (mut ante, succ) = self.base_instances();
        for (l, a) in self.grammar.levels.iter().zip(solution) {
            ante.push(cut_implication(a, &l.var, &l.productions));
        }
        Sequent::new(ante, succ)
    }
}

pub fn cut_implication(a: &Formula, var: &str, terms: &BTreeSet<Term>) -> Formula {
    Formula::imp(a.clone(), Formula::conj(terms.iter().map(|s| a.subst1(var, s))))
}

/// `C_1 = ⋀ antecedent instances ∧ ⋀ ¬succedent instances` and
/// `C_{i+1} = ⋀_j C_i[α_i\s_ij]`; returns `C_1..C_n`.
pub fn canonical_solution(h: &SchematicEhs) -> Vec<Formula> {
    let (ante, succ) = h.base_instances();
    let mut c = Formula::conj(ante.into_iter().chain(succ.into_iter().map(Formula::not)));
    let mut out = Vec::new();
    for l in &h.grammar.levels {
        let next = Formula::conj(l.productions.iter().map(|s| c.subst1(&l.var, s)));
        out.push(c);
        c = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionVerdict {
    Valid,
    NotTautology,
    VariableCondition(String),
}

pub fn check_solution(h: &SchematicEhs, solution: &[Formula]) -> SolutionVerdict {
    let vars = h.eigenvariables();
    if solution.len() != vars.len() {
        return SolutionVerdict::VariableCondition(format!("expected {} cut matrices, got {}", vars.len(), solution.len()));
    }
    for (i, a) in solution.iter().enumerate() {
        let allowed: BTreeSet<&String> = vars[i..].iter().collect();
        if let Some(v) = a.free_vars().iter().find(|v| !allowed.contains(v)) {
            return SolutionVerdict::VariableCondition(format!("matrix {} mentions {v}", i + 1));
        }
        if !a.is_quantifier_free() {
            return SolutionVerdict::VariableCondition(format!("matrix {} is not quantifier-free", i + 1));
        }
    }
    let s = h.solved_sequent(solution);
    if sat::valid(&s.antecedent, &s.succedent) {
        SolutionVerdict::Valid
    } else {
        SolutionVerdict::NotTautology
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(default)]
    vars: Vec<String>,
    matrix: String,
}

#[derive(Serialize, Deserialize)]
struct SequentJson {
    #[serde(default)]
    antecedent: Vec<EntryJson>,
    #[serde(default)]
    succedent: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    formula: usize,
    tuples: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct InputJson {
    sequent: SequentJson,
    #[serde(default)]
    instances: Vec<InstanceJson>,
}

/// An end-sequent together with the instances of a cut-free proof of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandInput {
    pub sequent: SigmaOneSequent,
    pub instances: Instances,
}

impl HerbrandInput {
    pub fn from_json(v: &serde_json::Value) -> Result<HerbrandInput> {
        let j: InputJson = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("instance file: {e}")))?;
        let entry = |e: &EntryJson| -> Result<QuantEntry> {
            let vars: BTreeSet<String> = e.vars.iter().cloned().collect();
            Ok(QuantEntry { vars: e.vars.clone(), matrix: parse_formula(&e.matrix, &vars)? })
        };
        let sequent = SigmaOneSequent {
            antecedent: j.sequent.antecedent.iter().map(entry).collect::<Result<_>>()?,
            succedent: j.sequent.succedent.iter().map(entry).collect::<Result<_>>()?,
        };
        sequent.validate()?;
        let mut instances = Instances::new();
        for inst in &j.instances {
            let tuples = inst
                .tuples
                .iter()
                .map(|t| t.iter().map(|s| parse_term(s, &BTreeSet::new())).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            instances.entry(inst.formula).or_default().extend(tuples);
        }
        Ok(HerbrandInput { sequent, instances })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entry = |e: &QuantEntry| EntryJson { vars: e.vars.clone(), matrix: e.matrix.to_string() };
        let j = InputJson {
            sequent: SequentJson {
                antecedent: self.sequent.antecedent.iter().map(entry).collect(),
                succedent: self.sequent.succedent.iter().map(entry).collect(),
            },
            instances: self
                .instances
                .iter()
                .map(|(&i, ts)| InstanceJson {
                    formula: i,
                    tuples: ts.iter().map(|t| t.iter().map(ToString::to_string).collect()).collect(),
                })
                .collect(),
        };
        serde_json::to_value(j).expect("instance JSON is always serializable")
    }

    pub fn extract_terms(&self) -> Result<TermExtraction> {
        extract_terms(&self.instances, &self.sequent)
    }
}
