use super::{Payload, Proof, Rule, Sequent};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::parse::{parse_formula, parse_term};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Serialize, Deserialize)]
struct SequentJson {
    antecedent: Vec<String>,
    succedent: Vec<String>,
}

#[derive(Serialize, Deserialize, Default)]
struct PayloadJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    principal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvariable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cut_formula: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    rule: Rule,
    sequent: SequentJson,
    #[serde(default)]
    payload: PayloadJson,
    #[serde(default)]
    premises: Vec<NodeJson>,
}

fn strings(fs: &[Formula]) -> Vec<String> {
    fs.iter().map(ToString::to_string).collect()
}

fn encode(p: &Proof) -> NodeJson {
    let payload = match &p.payload {
        Payload::None => PayloadJson::default(),
        Payload::Principal(f) => PayloadJson { principal: Some(f.to_string()), ..Default::default() },
        Payload::Block { principal, terms } => PayloadJson {
            principal: Some(principal.to_string()),
            terms: Some(terms.iter().map(ToString::to_string).collect()),
            ..Default::default()
        },
        Payload::Eigen { principal, var } => PayloadJson {
            principal: Some(principal.to_string()),
            eigenvariable: Some(var.clone()),
            ..Default::default()
        },
        Payload::Cut(c) => PayloadJson { cut_formula: Some(c.to_string()), ..Default::default() },
    };
    NodeJson {
        rule: p.rule,
        sequent: SequentJson {
            antecedent: strings(&p.conclusion.antecedent),
            succedent: strings(&p.conclusion.succedent),
        },
        payload,
        premises: p.premises.iter().map(encode).collect(),
    }
}

pub fn proof_to_json(p: &Proof) -> serde_json::Value {
    serde_json::to_value(encode(p)).expect("proof JSON is always serializable")
}

fn collect_eigenvariables(n: &NodeJson, out: &mut BTreeSet<String>) {
    if let Some(v) = &n.payload.eigenvariable {
        out.insert(v.clone());
    }
    n.premises.iter().for_each(|q| collect_eigenvariables(q, out));
}

fn decode(n: &NodeJson, vars: &BTreeSet<String>, path: &str) -> Result<Proof> {
    let loc = |e: Error| Error::Input(format!("at {path}: {e}"));
    let f = |s: &String| parse_formula(s, vars).map_err(loc);
    let conclusion = Sequent::new(
        n.sequent.antecedent.iter().map(f).collect::<Result<_>>()?,
        n.sequent.succedent.iter().map(f).collect::<Result<_>>()?,
    );
    let missing = |what: &str| Error::Input(format!("at {path}: {} node lacks {what}", n.rule.name()));
    let principal = n.payload.principal.as_ref().map(f).transpose()?;
    let payload = match n.rule {
        Rule::ForallBlockL | Rule::ExistsBlockR => Payload::Block {
            principal: principal.ok_or_else(|| missing("a principal formula"))?,
            terms: n
                .payload
                .terms
                .as_ref()
                .ok_or_else(|| missing("instantiation terms"))?
                .iter()
                .map(|t| parse_term(t, vars).map_err(loc))
                .collect::<Result<_>>()?,
        },
        Rule::ForallR | Rule::ExistsL => Payload::Eigen {
            principal: principal.ok_or_else(|| missing("a principal formula"))?,
            var: n.payload.eigenvariable.clone().ok_or_else(|| missing("an eigenvariable"))?,
        },
        Rule::Cut => Payload::Cut(f(n.payload.cut_formula.as_ref().ok_or_else(|| missing("a cut formula"))?)?),
        _ => principal.map(Payload::Principal).unwrap_or(Payload::None),
    };
    let premises = n
        .premises
        .iter()
        .enumerate()
        .map(|(i, q)| decode(q, vars, &format!("{path}.{i}")))
        .collect::<Result<_>>()?;
    Ok(Proof::new(n.rule, conclusion, payload, premises))
}

/// Identifiers named as eigenvariables anywhere in the tree are read as variables.
pub fn proof_from_json(v: &serde_json::Value) -> Result<Proof> {
    let node: NodeJson = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("proof JSON: {e}")))?;
    let mut vars = BTreeSet::new();
    collect_eigenvariables(&node, &mut vars);
    decode(&node, &vars, "root")
}
