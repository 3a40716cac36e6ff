//! End-to-end cut introduction with a summary report.

use crate::clause::render_clause_set;
use crate::construct::{build_cut_free, build_proof_with_cut};
use crate::error::{Error, Result};
use crate::grammar::{
    fill_delta_table, find_grammars, fresh_var, iterate_grammars_all, FindOptions, IterateOptions, TableOptions,
    TreeGrammar,
};
use crate::herbrand::{build_shs, HerbrandInput};
use crate::improve::{sfn_cached, Generator, LevelSolutions, SolveCache};
use crate::proof::{check_proof, Proof, ProofStats};
use crate::term::Term;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct CutIntroOptions {
    pub max_cuts: usize,
    pub generator: Generator,
    /// Use only this grammar (0-based) from the minimal list.
    pub grammar_index: Option<usize>,
}

impl Default for CutIntroOptions {
    fn default() -> Self {
        CutIntroOptions { max_cuts: 1, generator: Generator::Forgetful, grammar_index: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CIReport {
    pub input: ProofStats,
    pub output: ProofStats,
    pub terms_raw: usize,
    pub terms: usize,
    pub grammars_found: usize,
    pub min_grammar_size: Option<usize>,
    pub grammar: Option<String>,
    pub canonical: Vec<String>,
    pub minimized: Vec<String>,
    pub cut_formulas: Vec<String>,
    pub compression_ratio: f64,
    pub compressed: bool,
}

impl CIReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "terms: {} ({} before deduplication)", self.terms, self.terms_raw);
        match &self.grammar {
            Some(g) => {
                let _ = writeln!(
                    s,
                    "grammars: {} of minimal size {}",
                    self.grammars_found,
                    self.min_grammar_size.unwrap_or_default()
                );
                let _ = writeln!(s, "grammar: {g}");
                for (i, (c, m)) in self.canonical.iter().zip(&self.minimized).enumerate() {
                    let _ = writeln!(s, "level {}: canonical {c}", i + 1);
                    let _ = writeln!(s, "level {}: minimized {m}", i + 1);
                }
                for c in &self.cut_formulas {
                    let _ = writeln!(s, "cut formula: {c}");
                }
            }
            None => {
                let _ = writeln!(s, "no compression: no nontrivial grammar is smaller than the term set");
            }
        }
        let _ = writeln!(s, "input:\n{}", self.input.render_block());
        let _ = writeln!(s, "output:\n{}", self.output.render_block());
        let _ = writeln!(s, "compression ratio: {:.3}", self.compression_ratio);
        s
    }
}

/// Minimal nontrivial grammars for `terms` with fewer productions than terms.
pub fn candidate_grammars(terms: &BTreeSet<Term>, max_cuts: usize) -> Vec<TreeGrammar> {
    if max_cuts == 0 || terms.is_empty() {
        return vec![];
    }
    let found = if max_cuts == 1 {
        let alpha = fresh_var("α", terms);
        let ts: Vec<Term> = terms.iter().cloned().collect();
        let table = fill_delta_table(&ts, &alpha, &TableOptions::default());
        find_grammars(terms, &table, &FindOptions::default())
            .into_iter()
            .map(|g| g.canonical_names(&alpha))
            .collect::<Vec<_>>()
    } else {
        let prefix = fresh_var("α", terms);
        iterate_grammars_all(terms, &IterateOptions { max_levels: max_cuts, var_prefix: prefix, ..Default::default() })
    };
    found.into_iter().filter(|g| !g.is_trivial() && g.size() < terms.len()).collect()
}

struct Attempt {
    grammar: TreeGrammar,
    levels: LevelSolutions,
    proof: Proof,
}

fn attempt(input: &HerbrandInput, g: &TreeGrammar, gen: Generator, cache: &mut SolveCache) -> Result<Attempt> {
    build_shs(&input.sequent, g)?;
    let levels = sfn_cached(gen, &input.sequent, g, cache)?;
    let proof = build_proof_with_cut(&input.sequent, g, &levels.solution)?;
    let v = check_proof(&proof);
    if let Some(first) = v.first() {
        return Err(Error::Internal(format!("constructed proof fails to check: {first}")));
    }
    Ok(Attempt { grammar: g.clone(), levels, proof })
}

fn ratio(output: &ProofStats, input: &ProofStats) -> f64 {
    if input.total_rules == 0 {
        1.0
    } else {
        output.total_rules as f64 / input.total_rules as f64
    }
}

/// Extract terms, find grammars, solve and minimize cut matrices and rebuild the
/// proof; among several minimal grammars the smallest resulting proof wins.
pub fn cut_intro(input: &HerbrandInput, opts: &CutIntroOptions) -> Result<(Proof, CIReport)> {
    let ex = input.extract_terms()?;
    let (_, valid) = input.sequent.herbrand_sequent(&ex.terms)?;
    if !valid {
        return Err(Error::NotTautology("the instances do not form a Herbrand sequent".into()));
    }
    let original = build_cut_free(&input.sequent, &ex.terms)?;
    let input_stats = original.stats();
    let mut grammars = candidate_grammars(&ex.terms, opts.max_cuts);
    log::info!("{} terms, {} candidate grammars", ex.terms.len(), grammars.len());
    let grammars_found = grammars.len();
    let min_grammar_size = grammars.iter().map(TreeGrammar::size).min();
    if let Some(k) = opts.grammar_index {
        if k >= grammars.len() {
            return Err(Error::Input(format!("grammar index {k} out of range (found {})", grammars.len())));
        }
        grammars = vec![grammars.swap_remove(k)];
    }
    let mut best: Option<Attempt> = None;
    let mut cache = SolveCache::default();
    for g in &grammars {
        let a = attempt(input, g, opts.generator, &mut cache)?;
        log::debug!("grammar {g}: {} rules", a.proof.stats().total_rules);
        if best.as_ref().is_none_or(|b| a.proof.stats().total_rules < b.proof.stats().total_rules) {
            best = Some(a);
        }
    }
    let Some(best) = best else {
        let report = CIReport {
            input: input_stats,
            output: input_stats,
            terms_raw: ex.raw,
            terms: ex.terms.len(),
            grammars_found: 0,
            min_grammar_size: None,
            grammar: None,
            canonical: vec![],
            minimized: vec![],
            cut_formulas: vec![],
            compression_ratio: 1.0,
            compressed: false,
        };
        return Ok((original, report));
    };
    let output = best.proof.stats();
    let report = CIReport {
        input: input_stats,
        output,
        terms_raw: ex.raw,
        terms: ex.terms.len(),
        grammars_found,
        min_grammar_size,
        grammar: Some(best.grammar.to_string()),
        canonical: best.levels.canonical.iter().map(render_clause_set).collect(),
        minimized: best.levels.minimized.iter().map(render_clause_set).collect(),
        cut_formulas: best.proof.cut_formulas().iter().map(ToString::to_string).collect(),
        compression_ratio: ratio(&output, &input_stats),
        compressed: true,
    };
    Ok((best.proof, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::generate_example;
    use crate::herbrand::{QuantEntry, SigmaOneSequent};
    use crate::parse::{parse_formula, var_set};

    #[test]
    fn linear_nine_one_cut() {
        let (input, _) = generate_example("linear", 9).unwrap();
        let (p, r) = cut_intro(&input, &CutIntroOptions::default()).unwrap();
        assert!(check_proof(&p).is_empty());
        assert_eq!(r.min_grammar_size, Some(6));
        assert_eq!((r.output.cuts, r.output.quantifier_complexity), (1, 6));
        assert!(r.output.total_rules < r.input.total_rules, "{}", r.render_text());
    }

    #[test]
    fn incompressible_input() {
        let vs = var_set(["x"]);
        let input = HerbrandInput {
            sequent: SigmaOneSequent {
                antecedent: vec![QuantEntry::new(&["x"], parse_formula("P(x)", &vs).unwrap())],
                succedent: vec![QuantEntry::new(&[], parse_formula("P(a) ∧ P(b)", &vs).unwrap())],
            },
            instances: [(1, vec![vec![Term::cnst("a")], vec![Term::cnst("b")]])].into(),
        };
        let (p, r) = cut_intro(&input, &CutIntroOptions::default()).unwrap();
        assert!(!r.compressed);
        assert_eq!(p.stats().cuts, 0);
        assert!(r.render_text().contains("no compression"));
    }
}
