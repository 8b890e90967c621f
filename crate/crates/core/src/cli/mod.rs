//! Command-line frontend over a workspace directory of JSON documents.
//!
//! Exit codes: 0 success, 1 a checked formula is false (or a sound axiom
//! scheme failed), 2 any error.

mod commands;
mod dot;
mod workspace;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::bisim::BisimError;
use crate::formula::ParseError;
use crate::lab::LabError;
use crate::models::ModelError;
use crate::semantics::SemanticsError;
use crate::transforms::TransformError;

pub use commands::{
    cmd_axioms, cmd_bisim, cmd_check, cmd_compose, cmd_contract, cmd_dot, cmd_exec, cmd_one, cmd_synth, cmd_tf,
    AxiomsOutcome, BisimOutcome, CheckOutcome, ContractOutcome, ExecOutcome, OneOutcome, UpdateOutcome,
};
pub use dot::{model_dot, update_dot};
pub use workspace::{read_doc, update_doc, write_json, Doc, UpdateDoc, Workspace};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{}: {source}", path.display())]
    Model { path: PathBuf, source: ModelError },
    #[error("{context}: {source}")]
    Formula { context: String, source: ParseError },
    #[error("{}: neither a model (\"states\") nor an update (\"events\")", .0.display())]
    UnknownDocument(PathBuf),
    #[error("{}: agent set differs from the rest of the workspace", path.display())]
    AgentMismatch { path: PathBuf },
    #[error("update {0:?} is defined twice with different contents")]
    NameClash(String),
    #[error("updates refer to each other in a cycle through {0:?}")]
    Cycle(String),
    #[error("no model named {0:?}")]
    UnknownModel(String),
    #[error("no update named {0:?}")]
    UnknownUpdate(String),
    #[error("no model or update named {0:?}")]
    UnknownName(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown event {0:?}")]
    UnknownEvent(String),
    #[error("{0:?} needs an explicit point")]
    NeedPoint(String),
    #[error("{0:?} is not a valid name")]
    InvalidName(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Bisim(#[from] BisimError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

#[derive(Debug, Parser)]
#[command(name = "ontic", version, about = "Epistemic models with factual change")]
pub struct Cli {
    /// Directory holding the model and update documents.
    #[arg(long, global = true, default_value = ".")]
    pub workspace: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print results as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Model-check a formula.
    Check {
        model: String,
        formula: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Execute an update; writes the product and its DOT.
    Exec {
        model: String,
        update: String,
        /// Events to point at, comma separated; defaults to the update's points.
        event: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Compose two pointed updates.
    Compose {
        u1: String,
        e1: String,
        u2: String,
        e2: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Largest bisimulation and the verdict for two pointed models.
    Bisim {
        m1: String,
        s1: String,
        m2: String,
        s2: String,
        #[arg(long, value_delimiter = ',')]
        atoms: Option<Vec<String>>,
    },
    /// Bisimulation contraction.
    Contract {
        model: String,
        #[arg(long, value_delimiter = ',')]
        atoms: Option<Vec<String>>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Build an update taking one pointed model to another.
    Synth {
        src: String,
        s: String,
        dst: String,
        t: String,
        /// Exact variant; needs a contracted source with reflexive point.
        #[arg(long)]
        isomorphic: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Rewrite an update so that every assignment is `true` or `false`.
    Tf {
        update: String,
        #[arg(long, value_delimiter = ',')]
        events: Vec<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Split an update into steps assigning one atom per event.
    One {
        update: String,
        #[arg(long, value_delimiter = ',')]
        events: Vec<String>,
        /// Guard the final steps on stored preconditions instead of markers.
        #[arg(long = "paper-literal")]
        literal: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Randomized soundness check of the axiom schemes.
    Axioms {
        #[arg(long, default_value_t = 300)]
        trials: u64,
        /// Restrict to these schemes.
        #[arg(long = "axiom")]
        axioms: Vec<String>,
        /// Report file; defaults to `<workspace>/reports/axioms.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print Graphviz source for a model or update.
    Dot { name: String },
}

fn split(events: &Option<String>) -> Vec<String> {
    events.as_deref().map(split_str).unwrap_or_default()
}

fn split_str(s: &str) -> Vec<String> {
    s.split(',').map(|e| e.trim().to_string()).filter(|e| !e.is_empty()).collect()
}

/// What a command prints and its exit code.
pub struct Output {
    pub code: i32,
    pub text: String,
    pub json: serde_json::Value,
}

impl Output {
    fn new(code: i32, text: String, value: &impl Serialize) -> Self {
        Output { code, text, json: serde_json::to_value(value).expect("outcomes serialize") }
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    if let Command::Axioms { trials, axioms, out } = &cli.command {
        let path = out.clone().unwrap_or_else(|| cli.workspace.join("reports").join("axioms.json"));
        let o = cmd_axioms(*trials, cli.seed, axioms, Some(&path))?;
        let mut text = String::new();
        for r in &o.reports {
            text.push_str(&format!(
                "{:<32} instances {:>6}  failures {:>5}\n",
                r.axiom, r.instances_checked, r.failure_count
            ));
        }
        text.push_str(&format!("report: {}", path.display()));
        return Ok(Output::new(i32::from(!o.unsound.is_empty()), text, &o));
    }

    let mut ws = Workspace::load(&cli.workspace)?;
    let out = |o: &Option<String>| o.clone();
    Ok(match &cli.command {
        Command::Check { model, formula, state } => {
            let o = cmd_check(&ws, model, formula, state.as_deref())?;
            let mut text = o.holds.to_string();
            if !o.counterexamples.is_empty() {
                text.push_str(&format!("\nfalse at: {}", o.counterexamples.join(", ")));
            }
            Output::new(i32::from(!o.holds), text, &o)
        }
        Command::Exec { model, update, event, out: o } => {
            let r = cmd_exec(&mut ws, model, update, &split(event), out(o).as_deref())?;
            let text = format!(
                "{}: {} states, points [{}]\nwrote {} and {}",
                r.model,
                r.states.len(),
                r.points.join(", "),
                r.file.display(),
                r.dot.display()
            );
            Output::new(0, text, &r)
        }
        Command::Compose { u1, e1, u2, e2, out: o } => {
            let r = cmd_compose(&mut ws, (u1, &split_str(e1)), (u2, &split_str(e2)), out(o).as_deref())?;
            Output::new(0, update_text(&r), &r)
        }
        Command::Bisim { m1, s1, m2, s2, atoms } => {
            let r = cmd_bisim(&ws, (m1, s1), (m2, s2), atoms.as_deref())?;
            let pairs: Vec<String> = r.relation.iter().map(|(a, b)| format!("({a}, {b})")).collect();
            let verdict = if r.bisimilar { "bisimilar" } else { "not bisimilar" };
            Output::new(0, format!("{verdict}\nrelation: {}", pairs.join(" ")), &r)
        }
        Command::Contract { model, atoms, out: o } => {
            let r = cmd_contract(&mut ws, model, atoms.as_deref(), out(o).as_deref())?;
            let proj: Vec<String> = r.projection.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
            let text = format!(
                "{}: {} -> {} states\n{}\nwrote {}",
                r.model,
                r.states_before,
                r.states_after,
                proj.join("\n"),
                r.file.display()
            );
            Output::new(0, text, &r)
        }
        Command::Synth { src, s, dst, t, isomorphic, out: o } => {
            let r = cmd_synth(&mut ws, (src, s), (dst, t), *isomorphic, out(o).as_deref())?;
            Output::new(0, update_text(&r), &r)
        }
        Command::Tf { update, events, out: o } => {
            let r = cmd_tf(&mut ws, update, events, out(o).as_deref())?;
            Output::new(0, update_text(&r), &r)
        }
        Command::One { update, events, literal, out: o } => {
            let r = cmd_one(&mut ws, update, events, *literal, out(o).as_deref())?;
            let text = format!(
                "{} steps (at most {} assignment per event), fresh atoms: {}\n{}",
                r.steps.len(),
                r.max_assignments_per_event,
                r.fresh_atoms.join(", "),
                update_text(&r.composed)
            );
            Output::new(0, text, &r)
        }
        Command::Dot { name } => {
            let text = cmd_dot(&ws, name)?;
            Output::new(0, text.trim_end().to_string(), &text)
        }
        Command::Axioms { .. } => unreachable!("handled above"),
    })
}

fn update_text(r: &UpdateOutcome) -> String {
    format!(
        "{}: events [{}], points [{}]\nwrote {}",
        r.update,
        r.events.join(", "),
        r.points.join(", "),
        r.file.display()
    )
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("json"))
            } else {
                writeln!(stdout, "{}", out.text)
            };
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests;
