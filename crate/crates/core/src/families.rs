//! Built-in end-sequents with cut-free proofs, indexed by a size parameter.

use crate::construct::build_cut_free;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::herbrand::{HerbrandInput, Instances, QuantEntry, SigmaOneSequent};
use crate::parse::{parse_formula, var_set};
use crate::proof::Proof;
use crate::term::Term;

pub const EXAMPLE_NAMES: [&str; 3] = ["linear", "square-diagonal", "exp"];

fn matrix(s: &str, vars: &[&str]) -> Formula {
    parse_formula(s, &var_set(vars.iter().copied())).expect("built-in formula parses")
}

fn num(k: usize) -> Term {
    Term::iterate("s", k, Term::cnst("0"))
}

/// `P(0), ∀x(P(x) ⊃ P(s(x))) ⊢ P(sⁿ(0))` with instances `0..s^{n-1}(0)`.
pub fn linear(n: usize) -> HerbrandInput {
    let sequent = SigmaOneSequent {
        antecedent: vec![QuantEntry::new(&[], matrix("P(0)", &[])), QuantEntry::new(&["x"], matrix("P(x) ⊃ P(s(x))", &["x"]))],
        succedent: vec![QuantEntry::new(&[], Formula::atom("P", vec![num(n)]))],
    };
    let instances: Instances = [(2, (0..n).map(|k| vec![num(k)]).collect())].into();
    HerbrandInput { sequent, instances }
}

/// Walks from `P(0,0)` to `P(sⁿ0,sⁿ0)` alternating steps in each coordinate.
pub fn square_diagonal(n: usize) -> HerbrandInput {
    let sequent = SigmaOneSequent {
        antecedent: vec![
            QuantEntry::new(&["x", "y"], matrix("P(x,y) ⊃ P(x,s(y))", &["x", "y"])),
            QuantEntry::new(&["x", "y"], matrix("P(x,y) ⊃ P(s(x),y)", &["x", "y"])),
            QuantEntry::new(&[], matrix("P(0,0)", &[])),
        ],
        succedent: vec![QuantEntry::new(&[], Formula::atom("P", vec![num(n), num(n)]))],
    };
    let instances: Instances = [
        (1, (0..n).map(|k| vec![num(k + 1), num(k)]).collect()),
        (2, (0..n).map(|k| vec![num(k), num(k)]).collect()),
    ]
    .into();
    HerbrandInput { sequent, instances }
}

/// `P(a), ∀x(P(x) ⊃ P(f(x))) ⊢ P(f^{2^{n+1}}(a))` with all `2^{n+1}` instances.
pub fn exp(n: usize) -> HerbrandInput {
    let len = 1usize << (n + 1);
    let a = Term::cnst("a");
    let sequent = SigmaOneSequent {
        antecedent: vec![QuantEntry::new(&[], matrix("P(a)", &[])), QuantEntry::new(&["x"], matrix("P(x) ⊃ P(f(x))", &["x"]))],
        succedent: vec![QuantEntry::new(&[], Formula::atom("P", vec![Term::iterate("f", len, a.clone())]))],
    };
    let instances: Instances = [(2, (0..len).map(|k| vec![Term::iterate("f", k, a.clone())]).collect())].into();
    HerbrandInput { sequent, instances }
}

/// Parses `name:n`.
pub fn parse_example_spec(spec: &str) -> Result<(String, usize)> {
    let (name, n) = spec.split_once(':').ok_or_else(|| Error::Input(format!("expected name:n, got {spec:?}")))?;
    let n: usize = n.parse().map_err(|_| Error::Input(format!("bad size in {spec:?}")))?;
    Ok((name.to_string(), n))
}

/// The example's input and a cut-free proof built from its instances.
pub fn generate_example(name: &str, n: usize) -> Result<(HerbrandInput, Proof)> {
    if n == 0 {
        return Err(Error::Input("example size must be positive".into()));
    }
    let input = match name {
        "linear" => linear(n),
        "square-diagonal" => square_diagonal(n),
        "exp" => {
            if n > 16 {
                return Err(Error::Input("exp is limited to n ≤ 16".into()));
            }
            exp(n)
        }
        _ => return Err(Error::UnknownExample(name.to_string())),
    };
    let terms = input.extract_terms()?.terms;
    let proof = build_cut_free(&input.sequent, &terms)?;
    Ok((input, proof))
}
