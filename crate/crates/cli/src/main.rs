use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cutforge::clause::render_clause_set;
use cutforge::construct::build_proof_with_cut;
use cutforge::families::{generate_example, parse_example_spec};
use cutforge::grammar::TreeGrammar;
use cutforge::herbrand::{build_shs, canonical_solution, HerbrandInput};
use cutforge::improve::{sfn, Generator};
use cutforge::pipeline::{candidate_grammars, cut_intro, CutIntroOptions};
use cutforge::proof::{check_proof, proof_from_json, proof_to_json, Proof};
use cutforge::Error;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cutforge", version, about = "Compress cut-free first-order proofs by introducing Π₁-cuts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the instance file of a built-in example.
    Generate(Common),
    /// Print the tagged Herbrand terms.
    ExtractTerms(Common),
    /// Print every minimal grammar for the terms.
    Grammars(Common),
    /// Print the first K minimal grammars.
    ShowGrammars {
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print the schematic extended Herbrand sequent of the chosen grammar.
    Shs(Common),
    /// Print the canonical solution of the chosen grammar.
    Canonical(Common),
    /// Print the minimized cut matrices, level by level.
    Minimize(Common),
    /// Build a proof with cuts from the chosen grammar.
    Build(Common),
    /// Print proof statistics.
    Stats(ProofArgs),
    /// Check a proof file; exits nonzero on violations.
    Check(ProofArgs),
    /// Run the whole pipeline.
    CutIntro(Common),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Built-in example as name:n (linear, square-diagonal, exp).
    #[arg(long, conflicts_with = "input")]
    example: Option<String>,
    /// Instance file in JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    max_cuts: usize,
    /// forgetful or closure.
    #[arg(long, default_value = "forgetful")]
    generator: String,
    /// Which minimal grammar to use (0-based).
    #[arg(long)]
    grammar_index: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ProofArgs {
    /// Proof file in JSON.
    #[arg(long, conflicts_with = "example")]
    proof: Option<PathBuf>,
    /// Use the cut-free proof of a built-in example.
    #[arg(long)]
    example: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!(Error::Input(format!("{}: {e}", path.display()))))
}

impl Common {
    fn load(&self) -> anyhow::Result<HerbrandInput> {
        match (&self.example, &self.input) {
            (Some(spec), _) => {
                let (name, n) = parse_example_spec(spec)?;
                Ok(generate_example(&name, n)?.0)
            }
            (None, Some(path)) => {
                let v = read_json(path)?;
                HerbrandInput::from_json(&v).map_err(|e| anyhow!(e).context(format!("in {}", path.display())))
            }
            (None, None) => bail!(Error::Input("one of --example or --input is required".into())),
        }
    }

    fn generator(&self) -> anyhow::Result<Generator> {
        Ok(self.generator.parse()?)
    }

    fn grammar(&self, input: &HerbrandInput) -> anyhow::Result<TreeGrammar> {
        let terms = input.extract_terms()?.terms;
        let mut gs = candidate_grammars(&terms, self.max_cuts);
        let k = self.grammar_index.unwrap_or(0);
        if gs.is_empty() {
            bail!(Error::Input("no nontrivial grammar is smaller than the term set".into()));
        }
        if k >= gs.len() {
            bail!(Error::Input(format!("grammar index {k} out of range (found {})", gs.len())));
        }
        Ok(gs.swap_remove(k))
    }

    fn emit(&self, text: String, json: Value) -> anyhow::Result<()> {
        let body = match self.format {
            Format::Text => text,
            Format::Json => serde_json::to_string_pretty(&json)? + "\n",
        };
        emit(self.out.as_deref(), &body)
    }
}

fn emit(out: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn grammar_list(c: &Common, limit: Option<usize>) -> anyhow::Result<()> {
    let input = c.load()?;
    let terms = input.extract_terms()?.terms;
    let mut gs = candidate_grammars(&terms, c.max_cuts);
    if let Some(k) = limit {
        gs.truncate(k);
    }
    let mut text = String::new();
    for (i, g) in gs.iter().enumerate() {
        text.push_str(&format!("{i}: size {}: {g}\n", g.size()));
    }
    if gs.is_empty() {
        text.push_str("no nontrivial grammar is smaller than the term set\n");
    }
    c.emit(text, Value::Array(gs.iter().map(TreeGrammar::to_json).collect()))
}

fn load_proof(a: &ProofArgs) -> anyhow::Result<Proof> {
    match (&a.proof, &a.example) {
        (Some(path), _) => {
            let v = read_json(path)?;
            proof_from_json(&v).map_err(|e| anyhow!(e).context(format!("in {}", path.display())))
        }
        (None, Some(spec)) => {
            let (name, n) = parse_example_spec(spec)?;
            Ok(generate_example(&name, n)?.1)
        }
        (None, None) => bail!(Error::Input("one of --proof or --example is required".into())),
    }
}

fn proof_output(c: &Common, p: &Proof) -> anyhow::Result<()> {
    let text = format!("{}{}", p.render_text(), p.stats().render_block());
    c.emit(text, proof_to_json(p))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate(c) => {
            let input = c.load()?;
            let v = input.to_json();
            emit(c.out.as_deref(), &(serde_json::to_string_pretty(&v)? + "\n"))?;
        }
        Command::ExtractTerms(c) => {
            let ex = c.load()?.extract_terms()?;
            let terms: Vec<String> = ex.terms.iter().map(ToString::to_string).collect();
            let text = format!("{} terms ({} before deduplication)\n{}\n", terms.len(), ex.raw, terms.join("\n"));
            c.emit(text, json!({ "raw": ex.raw, "terms": terms }))?;
        }
        Command::Grammars(c) => grammar_list(&c, None)?,
        Command::ShowGrammars { k, common } => grammar_list(&common, Some(k))?,
        Command::Shs(c) => {
            let input = c.load()?;
            let g = c.grammar(&input)?;
            let h = build_shs(&input.sequent, &g)?;
            let (ante, succ) = h.base_instances();
            let cuts: Vec<String> = g
                .levels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let x = format!("X{}", i + 1);
                    let rhs: Vec<String> = l.productions.iter().map(|s| format!("{x}({s})")).collect();
                    format!("{x}({}) ⊃ {}", l.var, rhs.join(" ∧ "))
                })
                .collect();
            let ante: Vec<String> = ante.iter().map(ToString::to_string).collect();
            let succ: Vec<String> = succ.iter().map(ToString::to_string).collect();
            let text = format!(
                "grammar: {g}\n{}\n⊢ {}\n",
                ante.iter().chain(&cuts).cloned().collect::<Vec<_>>().join(",\n"),
                succ.join(", ")
            );
            c.emit(
                text,
                json!({ "grammar": g.to_json(), "antecedent": ante, "cut_implications": cuts, "succedent": succ }),
            )?;
        }
        Command::Canonical(c) => {
            let input = c.load()?;
            let g = c.grammar(&input)?;
            let h = build_shs(&input.sequent, &g)?;
            let sol: Vec<String> = canonical_solution(&h).iter().map(ToString::to_string).collect();
            let text = sol.iter().enumerate().map(|(i, f)| format!("C{}: {f}\n", i + 1)).collect();
            c.emit(text, json!({ "grammar": g.to_json(), "canonical": sol }))?;
        }
        Command::Minimize(c) => {
            let input = c.load()?;
            let g = c.grammar(&input)?;
            build_shs(&input.sequent, &g)?;
            let r = sfn(c.generator()?, &input.sequent, &g)?;
            let min: Vec<String> = r.minimized.iter().map(render_clause_set).collect();
            let sol: Vec<String> = r.solution.iter().map(ToString::to_string).collect();
            let text = sol.iter().enumerate().map(|(i, f)| format!("A{}: {f}\n", i + 1)).collect();
            c.emit(text, json!({ "grammar": g.to_json(), "clauses": min, "solution": sol }))?;
        }
        Command::Build(c) => {
            let input = c.load()?;
            let g = c.grammar(&input)?;
            build_shs(&input.sequent, &g)?;
            let r = sfn(c.generator()?, &input.sequent, &g)?;
            let p = build_proof_with_cut(&input.sequent, &g, &r.solution)?;
            proof_output(&c, &p)?;
        }
        Command::Stats(a) => {
            let p = load_proof(&a)?;
            let st = p.stats();
            match a.format {
                Format::Text => print!("{}", st.render_block()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&st)?),
            }
        }
        Command::Check(a) => {
            let p = load_proof(&a)?;
            let v = check_proof(&p);
            if v.is_empty() {
                println!("ok");
            } else {
                for x in &v {
                    println!("{x}");
                }
                return Ok(ExitCode::from(1));
            }
        }
        Command::CutIntro(c) => {
            let input = c.load()?;
            let opts = CutIntroOptions {
                max_cuts: c.max_cuts,
                generator: c.generator()?,
                grammar_index: c.grammar_index,
            };
            let (p, report) = cut_intro(&input, &opts)?;
            match c.format {
                Format::Text => {
                    print!("{}", report.render_text());
                    if let Some(out) = &c.out {
                        emit(Some(out), &(serde_json::to_string_pretty(&proof_to_json(&p))? + "\n"))?;
                    }
                }
                Format::Json => {
                    let v = json!({ "report": report, "proof": proof_to_json(&p) });
                    emit(c.out.as_deref(), &(serde_json::to_string_pretty(&v)? + "\n"))?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CUTFORGE_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Internal(_))));
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}
