//! Truth-table oracles, generators and property bodies shared by the
//! property suite and the acceptance target.
#![allow(dead_code)]

use cutforge::clause::{clause_set_to_formula, deductive_closure, to_cnf, Clause, ClauseSet, Literal};
use cutforge::grammar::{fill_delta_table, find_grammars, FindOptions, TableOptions};
use cutforge::herbrand::{build_shs, canonical_solution, check_solution, cut_implication, SolutionVerdict};
use cutforge::herbrand::{HerbrandInput, QuantEntry, SigmaOneSequent};
use cutforge::improve::{remove_alpha_free, sf, Generator, SingleCutContext};
use cutforge::interpolate::{interpolate, PartitionedSequent};
use cutforge::pipeline::{cut_intro, CutIntroOptions};
use cutforge::proof::check_proof;
use cutforge::{Atom, Formula, Term};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use std::collections::BTreeSet;

// ---------------------------------------------------------------- oracles

pub fn atoms_of(fs: &[&Formula]) -> Vec<Atom> {
    let mut out = BTreeSet::new();
    for f in fs {
        out.extend(f.atoms());
    }
    out.into_iter().collect()
}

/// Every assignment of the given atoms, as a lookup closure argument.
fn assignments(atoms: &[Atom]) -> impl Iterator<Item = Vec<(Atom, bool)>> + '_ {
    assert!(atoms.len() <= 16, "truth table over {} atoms", atoms.len());
    (0u32..1 << atoms.len()).map(move |bits| atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect())
}

fn lookup(row: &[(Atom, bool)]) -> impl Fn(&Atom) -> bool + '_ {
    move |a| row.iter().find(|(b, _)| b == a).map(|(_, v)| *v).expect("atom in table")
}

pub fn tt_valid(ante: &[Formula], succ: &[Formula]) -> bool {
    let all: Vec<&Formula> = ante.iter().chain(succ).collect();
    let atoms = atoms_of(&all);
    let ok = assignments(&atoms).all(|row| {
        let v = lookup(&row);
        !ante.iter().all(|f| f.eval(&v)) || succ.iter().any(|f| f.eval(&v))
    });
    ok
}

pub fn tt_equiv(f: &Formula, g: &Formula) -> bool {
    tt_valid(&[f.clone()], &[g.clone()]) && tt_valid(&[g.clone()], &[f.clone()])
}

pub fn cs(c: &ClauseSet) -> Formula {
    clause_set_to_formula(c)
}

/// The full solution condition `Γ, A ⊃ ⋀A[α\s] ⊢ Δ`, by truth table.
pub fn tt_is_solution(ctx: &SingleCutContext, a: &ClauseSet) -> bool {
    let terms: BTreeSet<Term> = ctx.terms.iter().cloned().collect();
    let mut ante = ctx.antecedent.clone();
    ante.push(cut_implication(&cs(a), &ctx.eigenvar, &terms));
    tt_valid(&ante, &ctx.succedent)
}

// ------------------------------------------------------------- generators

pub fn atom(p: &str, t: Term) -> Atom {
    Atom::new(p, vec![t])
}

pub fn c(name: &str) -> Term {
    Term::cnst(name)
}

pub fn alpha() -> Term {
    Term::var("α")
}

/// Six ground atoms.
pub fn ground_pool() -> Vec<Atom> {
    ["a", "b", "c"].iter().flat_map(|k| [atom("P", c(k)), atom("Q", c(k))]).collect()
}

pub fn arb_formula(pool: Vec<Atom>, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        10 => proptest::sample::select(pool).prop_map(Formula::Atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
    .boxed()
}

pub fn arb_clause_set(pool: Vec<Atom>, max_clauses: usize) -> BoxedStrategy<ClauseSet> {
    let n = pool.len();
    proptest::collection::vec(proptest::collection::vec((0..n, any::<bool>()), 1..4), 0..max_clauses)
        .prop_map(move |cls| {
            cls.into_iter()
                .map(|lits| {
                    lits.into_iter()
                        .map(|(i, pos)| if pos { Literal::pos(pool[i].clone()) } else { Literal::neg(pool[i].clone()) })
                        .collect::<Clause>()
                })
                .collect()
        })
        .boxed()
}

/// Every clause over the given atoms (each atom absent, positive or negative).
pub fn all_clauses(atoms: &[Atom]) -> Vec<Clause> {
    let mut out = vec![Clause::new()];
    for a in atoms {
        let mut next = Vec::new();
        for cl in &out {
            next.push(cl.clone());
            let mut p = cl.clone();
            p.insert(Literal::pos(a.clone()));
            next.push(p);
            let mut n = cl.clone();
            n.insert(Literal::neg(a.clone()));
            next.push(n);
        }
        out = next;
    }
    out
}

/// Interpolation inputs over left-only, shared and right-only atoms; made
/// valid when the random draw is not.
pub fn arb_partition() -> BoxedStrategy<PartitionedSequent> {
    let left: Vec<Atom> = vec![atom("L", c("a")), atom("L", c("b")), atom("S", c("a")), atom("S", c("b"))];
    let right: Vec<Atom> = vec![atom("R", c("a")), atom("R", c("b")), atom("S", c("a")), atom("S", c("b"))];
    let side = |pool: Vec<Atom>| proptest::collection::vec(arb_formula(pool, 3), 0..3);
    (side(left.clone()), side(right.clone()), side(left), side(right), any::<bool>())
        .prop_map(|(left1, left2, right1, right2, force)| {
            let mut s = PartitionedSequent { left1, left2, right1, right2 };
            let ante: Vec<Formula> = s.left1.iter().chain(&s.left2).cloned().collect();
            let succ: Vec<Formula> = s.right1.iter().chain(&s.right2).cloned().collect();
            if force && !tt_valid(&ante, &succ) {
                s.right2.push(Formula::not(shared_projection(&s.left1, &s.right1)));
            }
            s
        })
        .boxed()
}

/// `∃L (⋀left ∧ ¬⋁right)` over the shared atoms, as a disjunction of minterms.
fn shared_projection(left: &[Formula], right: &[Formula]) -> Formula {
    let shared = [atom("S", c("a")), atom("S", c("b"))];
    let f = Formula::and(Formula::conj(left.iter().cloned()), Formula::not(Formula::disj(right.iter().cloned())));
    let own: Vec<Atom> = atoms_of(&[&f]).into_iter().filter(|a| !shared.contains(a)).collect();
    let mut minterms = Vec::new();
    for row in assignments(&shared) {
        let sat = assignments(&own).any(|own_row| {
            let all: Vec<(Atom, bool)> = row.iter().cloned().chain(own_row).collect();
            f.eval(&|a: &Atom| all.iter().find(|(b, _)| b == a).map(|(_, v)| *v).unwrap_or(false))
        });
        if sat {
            minterms.push(Formula::conj(
                row.iter().map(|(a, v)| if *v { Formula::Atom(a.clone()) } else { Formula::not(Formula::Atom(a.clone())) }),
            ));
        }
    }
    Formula::disj(minterms)
}

/// Single-cut problems `F(α), (F(a) ∧ F(b)) ⊃ D ⊢ D` with terms `a, b`;
/// the canonical solution is always a solution.
pub fn arb_single_cut() -> BoxedStrategy<SingleCutContext> {
    let open = vec![atom("P", alpha()), atom("Q", alpha()), atom("P", c("a")), atom("Q", c("b"))];
    let ground: Vec<Atom> = vec![atom("P", c("a")), atom("Q", c("a")), atom("P", c("b")), atom("Q", c("b"))];
    (arb_formula(open, 3), arb_formula(ground, 2))
        .prop_map(|(f, d)| {
            let at = |t: &str| f.subst1("α", &c(t));
            let k = Formula::imp(Formula::and(at("a"), at("b")), d.clone());
            SingleCutContext { antecedent: vec![f, k], succedent: vec![d], eigenvar: "α".into(), terms: vec![c("a"), c("b")] }
        })
        .boxed()
}

/// A Σ₁ sequent `∀x F(x) ⊢ ⋀F[T]` with chain-like instances `T`.
pub fn arb_sigma_input() -> BoxedStrategy<HerbrandInput> {
    let x = Term::var("x");
    let fx = Term::app("f", vec![x.clone()]);
    let pool = vec![atom("P", x.clone()), atom("Q", x.clone()), atom("P", fx)];
    let universe: Vec<Term> = vec![
        c("a"),
        Term::iterate("f", 1, c("a")),
        Term::iterate("f", 2, c("a")),
        Term::iterate("f", 3, c("a")),
        c("b"),
        Term::iterate("f", 1, c("b")),
    ];
    (arb_formula(pool, 3), proptest::sample::subsequence(universe, 1..=4))
        .prop_map(|(f, ts)| {
            let inst = Formula::conj(ts.iter().map(|t| f.subst1("x", t)));
            HerbrandInput {
                sequent: SigmaOneSequent {
                    antecedent: vec![QuantEntry::new(&["x"], f)],
                    succedent: vec![QuantEntry::new(&[], inst)],
                },
                instances: [(1, ts.into_iter().map(|t| vec![t]).collect())].into(),
            }
        })
        .boxed()
}

// ------------------------------------------------------------ properties

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn prop_cnf(f: &Formula) -> Result<(), TestCaseError> {
    let cnf = to_cnf(f);
    ensure(tt_equiv(f, &cs(&cnf)), || format!("to_cnf({f}) is not equivalent"))
}

pub fn prop_closure(a: &ClauseSet, pool: &[Atom]) -> Result<(), TestCaseError> {
    let d = deductive_closure(a);
    ensure(tt_equiv(&cs(a), &cs(&d)), || "closure changes the models".into())?;
    let af = cs(a);
    for cl in all_clauses(pool) {
        let taut = cl.iter().any(|l| cl.contains(&l.negate()));
        if taut || !tt_valid(&[af.clone()], &[cutforge::clause::clause_to_formula(&cl)]) {
            continue;
        }
        ensure(d.iter().any(|e| e.is_subset(&cl)), || format!("no closure clause subsumes an implied clause of size {}", cl.len()))?;
    }
    Ok(())
}

pub fn prop_interpolation(s: &PartitionedSequent) -> Result<(), TestCaseError> {
    let ante: Vec<Formula> = s.left1.iter().chain(&s.left2).cloned().collect();
    let succ: Vec<Formula> = s.right1.iter().chain(&s.right2).cloned().collect();
    let valid = tt_valid(&ante, &succ);
    let Ok(i) = interpolate(s) else {
        return ensure(!valid, || "interpolation failed on a valid sequent".into());
    };
    ensure(valid, || "interpolant returned for an invalid sequent".into())?;
    let mut r1 = s.right1.clone();
    r1.push(i.clone());
    ensure(tt_valid(&s.left1, &r1), || format!("first half fails with {i}"))?;
    let mut l2 = s.left2.clone();
    l2.push(i.clone());
    ensure(tt_valid(&l2, &s.right2), || format!("second half fails with {i}"))?;
    let a: Vec<&Formula> = s.left1.iter().chain(&s.right1).collect();
    let b: Vec<&Formula> = s.left2.iter().chain(&s.right2).collect();
    let (a, b) = (atoms_of(&a), atoms_of(&b));
    ensure(i.atoms().iter().all(|x| a.contains(x) && b.contains(x)), || format!("{i} uses a non-shared atom"))
}

pub fn prop_sandwich(ctx: &SingleCutContext, extra: &[(usize, usize, bool)]) -> Result<(), TestCaseError> {
    let a = ctx.canonical();
    ensure(tt_is_solution(ctx, &a), || "canonical is not a solution".into())?;
    let b = sf(Generator::Forgetful, &a, ctx).into_iter().next().expect("sf returns its input at least");
    ensure(tt_is_solution(ctx, &b), || "sf output is not a solution".into())?;
    // D = B plus weakened clauses of A, so A ⊨ D ⊨ B.
    let lits: Vec<Literal> = cutforge::clause::clause_set_atoms(&a)
        .into_iter()
        .flat_map(|x| [Literal::pos(x.clone()), Literal::neg(x)])
        .collect();
    let ac: Vec<&Clause> = a.iter().collect();
    let mut d = b.clone();
    if !ac.is_empty() && !lits.is_empty() {
        for &(ci, li, weaken) in extra {
            let mut cl = ac[ci % ac.len()].clone();
            if weaken {
                cl.insert(lits[li % lits.len()].clone());
            }
            d.insert(cl);
        }
    }
    ensure(tt_valid(&[cs(&a)], &[cs(&d)]) && tt_valid(&[cs(&d)], &[cs(&b)]), || "D not between A and B".into())?;
    ensure(tt_is_solution(ctx, &d), || "sandwiched set is not a solution".into())
}

pub fn prop_remove_alpha_free(ctx: &SingleCutContext) -> Result<(), TestCaseError> {
    let a = ctx.canonical();
    let r = remove_alpha_free(&a, &ctx.eigenvar);
    ensure(tt_is_solution(ctx, &r), || "α-free removal broke the canonical solution".into())
}

fn nontrivial_grammars(input: &HerbrandInput) -> Vec<cutforge::grammar::TreeGrammar> {
    let terms = input.extract_terms().expect("generated instances are well-formed").terms;
    let ts: Vec<Term> = terms.iter().cloned().collect();
    let table = fill_delta_table(&ts, "α", &TableOptions::default());
    find_grammars(&terms, &table, &FindOptions::default()).into_iter().filter(|g| !g.is_trivial()).collect()
}

pub fn prop_canonical(input: &HerbrandInput) -> Result<(), TestCaseError> {
    for g in nontrivial_grammars(input) {
        let h = build_shs(&input.sequent, &g).map_err(|e| TestCaseError::fail(format!("{g}: {e}")))?;
        let sol = canonical_solution(&h);
        ensure(check_solution(&h, &sol) == SolutionVerdict::Valid, || format!("canonical solution of {g} rejected"))?;
        // Independent check of the extended Herbrand sequent.
        let s = h.solved_sequent(&sol);
        ensure(tt_valid(&s.antecedent, &s.succedent), || format!("truth table rejects canonical solution of {g}"))?;
    }
    Ok(())
}

pub fn prop_pipeline(input: &HerbrandInput, max_cuts: usize) -> Result<(), TestCaseError> {
    let opts = CutIntroOptions { max_cuts, ..Default::default() };
    let (p, r) = cut_intro(input, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let v = check_proof(&p);
    ensure(v.is_empty(), || format!("{} violations, first: {}", v.len(), v[0]))?;
    ensure(p.conclusion.set_eq(&input.sequent.end_sequent()), || "wrong end-sequent".into())?;
    ensure(r.output.quantifier_complexity <= r.input.quantifier_complexity, || "quantifier complexity grew".into())?;
    ensure(r.output.cuts <= max_cuts, || "too many cuts".into())
}

/// Runs a property outside the `proptest!` macro; used by the acceptance target.
pub fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
