//! Values computed once by independent means and frozen here.

use cutforge::families::{exp, linear, square_diagonal};
use cutforge::grammar::{fill_delta_table, find_grammars, FindOptions, TableOptions};
use cutforge::pipeline::{cut_intro, CutIntroOptions};
use cutforge::proof::ProofStats;
use cutforge::Term;

fn minimal_grammars(input: &cutforge::herbrand::HerbrandInput) -> Vec<String> {
    let terms = input.extract_terms().unwrap().terms;
    let ts: Vec<Term> = terms.iter().cloned().collect();
    let table = fill_delta_table(&ts, "α", &TableOptions::default());
    find_grammars(&terms, &table, &FindOptions::default()).iter().map(|g| g.canonical_names("α").to_string()).collect()
}

#[test]
fn square_diagonal_four_grammars() {
    assert_eq!(
        minimal_grammars(&square_diagonal(4)),
        [
            "{f_2(α1,α1), f_1(s(α1),α1)} ∘_α1 {0, s(0), s(s(0)), s(s(s(0)))}",
            "{f_2(α1,α1), f_1(s(α1),α1), f_2(s(α1),s(α1)), f_1(s(s(α1)),s(α1))} ∘_α1 {0, s(s(0))}",
            "{f_2(α1,α1), f_1(s(α1),α1), f_2(s(s(α1)),s(s(α1))), f_1(s(s(s(α1))),s(s(α1)))} ∘_α1 {0, s(0)}",
        ]
    );
}

#[test]
fn linear_nine_grammars() {
    // The two factorizations 9 = 3·3 with the instance tag on either side.
    assert_eq!(
        minimal_grammars(&linear(9)),
        [
            "{f_2(α1), f_2(s(α1)), f_2(s(s(α1)))} ∘_α1 {0, s(s(s(0))), s(s(s(s(s(s(0))))))}",
            "{f_2(α1), f_2(s(s(s(α1)))), f_2(s(s(s(s(s(s(α1)))))))} ∘_α1 {0, s(0), s(s(0))}",
        ]
    );
}

#[test]
fn linear_nine_statistics() {
    let (_, r) = cut_intro(&linear(9), &CutIntroOptions::default()).unwrap();
    assert_eq!(r.input, ProofStats { cuts: 0, quantifier_rules: 9, total_rules: 28, quantifier_complexity: 9 });
    assert_eq!(r.output, ProofStats { cuts: 1, quantifier_rules: 7, total_rules: 23, quantifier_complexity: 6 });
    assert_eq!(r.minimized, ["{{P(s(s(s(α1)))) ∨ ¬P(α1)}}"]);
}

#[test]
fn exp_output_sizes() {
    let rules: Vec<usize> = (2..=3)
        .map(|n| cut_intro(&exp(n), &CutIntroOptions { max_cuts: n + 1, ..Default::default() }).unwrap().1.output.total_rules)
        .collect();
    assert_eq!(rules, [27, 37]);
}

#[test]
fn square_diagonal_eight_cut() {
    let (p, r) = cut_intro(&square_diagonal(8), &CutIntroOptions::default()).unwrap();
    assert_eq!(p.cut_formulas()[0].to_string(), "∀x.(P(x,x) ⊃ P(s(s(x)),s(s(x))))");
    // One block rule, one implication rule and one axiom per instance, plus the final axiom.
    assert_eq!(r.input.total_rules, 3 * 16 + 1);
}
