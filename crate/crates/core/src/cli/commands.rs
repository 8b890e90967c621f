use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use super::dot::{model_dot, update_dot};
use super::workspace::{write_json, Workspace};
use super::CliError;
use crate::bisim::{contract_over, max_bisim};
use crate::ids::{is_ident, Atom};
use crate::lab::{check_axiom, AxiomId, AxiomReport, GenParams};
use crate::models::PointedUpdate;
use crate::semantics::{compose, extension, product, SemanticsError};
use crate::transforms::{decompose_single, normalize_tf, synth_arbitrary, synth_isomorphic, OneVariant};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub formula: String,
    pub holds: bool,
    pub checked: Vec<String>,
    /// Checked states where the formula is false.
    pub counterexamples: Vec<String>,
}

/// Evaluates at `state`, else at the declared points, else at every state.
pub fn cmd_check(ws: &Workspace, model: &str, formula: &str, state: Option<&str>) -> Result<CheckOutcome, CliError> {
    let (m, points) = ws.model(model)?;
    let f = ws.parse_formula(formula)?;
    let states: Vec<usize> = match state {
        Some(s) => vec![m.state_index(s).ok_or_else(|| CliError::UnknownState(s.to_string()))?],
        None if !points.is_empty() => points.to_vec(),
        None => (0..m.len()).collect(),
    };
    let values = extension(m, &f)?;
    let name = |s: usize| m.state_name(s).to_string();
    Ok(CheckOutcome {
        formula: f.to_string(),
        holds: states.iter().all(|&s| values[s]),
        checked: states.iter().copied().map(name).collect(),
        counterexamples: states.iter().copied().filter(|&s| !values[s]).map(name).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExecOutcome {
    pub model: String,
    pub states: Vec<String>,
    pub points: Vec<String>,
    pub file: PathBuf,
    pub dot: PathBuf,
}

/// `M ⊗ U`, pointed at `(s, e)` for each declared point `s` of the model
/// and each chosen event `e` that is executable there.
pub fn cmd_exec(
    ws: &mut Workspace,
    model: &str,
    update: &str,
    events: &[String],
    out: Option<&str>,
) -> Result<ExecOutcome, CliError> {
    let (m, points) = ws.model(model)?;
    let pu = ws.pointed_update(update, events)?;
    let prod = product(m, &pu.model)?;
    let mut new_points = Vec::new();
    for &s in points {
        for &e in &pu.points {
            if let Some(t) = prod.state_of(s, e) {
                new_points.push(t);
            }
        }
    }
    if !points.is_empty() && new_points.is_empty() {
        let e = *pu.points.iter().next().expect("non-empty");
        return Err(SemanticsError::PreconditionFailure {
            event: pu.model.event_name(e).to_string(),
            state: m.state_name(points[0]).to_string(),
        }
        .into());
    }
    let name = output_name(out, format!("{model}+{update}"))?;
    let file = ws.save_model(&name, &prod.model, &new_points)?;
    let dot = ws.dir().join(format!("{name}.dot"));
    write_text(&dot, &model_dot(&name, &prod.model, &new_points))?;
    Ok(ExecOutcome {
        model: name,
        states: prod.model.states().to_vec(),
        points: new_points.iter().map(|&s| prod.model.state_name(s).to_string()).collect(),
        file,
        dot,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpdateOutcome {
    pub update: String,
    pub events: Vec<String>,
    pub points: Vec<String>,
    pub file: PathBuf,
}

fn save_update(ws: &mut Workspace, pu: PointedUpdate, out: Option<&str>) -> Result<UpdateOutcome, CliError> {
    let name = output_name(out, pu.model.name().to_string())?;
    let model = Arc::new(Arc::unwrap_or_clone(pu.model).with_name(name.clone()));
    let pu = PointedUpdate { model, points: pu.points };
    let file = ws.save_update(&name, &pu)?;
    Ok(UpdateOutcome {
        update: name,
        events: pu.model.events().to_vec(),
        points: pu.point_names().iter().map(ToString::to_string).collect(),
        file,
    })
}

pub fn cmd_compose(
    ws: &mut Workspace,
    first: (&str, &[String]),
    second: (&str, &[String]),
    out: Option<&str>,
) -> Result<UpdateOutcome, CliError> {
    let a = ws.pointed_update(first.0, first.1)?;
    let b = ws.pointed_update(second.0, second.1)?;
    let joined = compose(&a, &b)?;
    save_update(ws, joined, out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisimOutcome {
    pub bisimilar: bool,
    pub atoms: Vec<String>,
    /// The largest bisimulation between the two models.
    pub relation: Vec<(String, String)>,
}

pub fn cmd_bisim(
    ws: &Workspace,
    left: (&str, &str),
    right: (&str, &str),
    atoms: Option<&[String]>,
) -> Result<BisimOutcome, CliError> {
    let p = ws.pointed_model(left.0, Some(left.1))?;
    let q = ws.pointed_model(right.0, Some(right.1))?;
    let atoms: Option<BTreeSet<Atom>> = atoms.map(|a| a.iter().map(Atom::new).collect());
    let vocabulary = atoms.clone().unwrap_or_else(|| {
        p.model.mapped_atoms().into_iter().chain(q.model.mapped_atoms()).collect()
    });
    let relation = max_bisim(&p.model, &q.model, atoms.as_ref())?;
    Ok(BisimOutcome {
        bisimilar: relation.as_ref().is_some_and(|r| r.contains(p.point, q.point)),
        atoms: vocabulary.iter().map(ToString::to_string).collect(),
        relation: relation.map(|r| r.named(&p.model, &q.model)).unwrap_or_default(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractOutcome {
    pub model: String,
    pub states_before: usize,
    pub states_after: usize,
    /// Original state to its class representative.
    pub projection: Vec<(String, String)>,
    pub file: PathBuf,
}

pub fn cmd_contract(
    ws: &mut Workspace,
    model: &str,
    atoms: Option<&[String]>,
    out: Option<&str>,
) -> Result<ContractOutcome, CliError> {
    let (m, points) = ws.model(model)?;
    let atoms: Option<BTreeSet<Atom>> = atoms.map(|a| a.iter().map(Atom::new).collect());
    let c = contract_over(m, atoms.as_ref());
    let mut new_points: Vec<usize> = points.iter().map(|&s| c.projection[s]).collect();
    new_points.sort_unstable();
    new_points.dedup();
    let projection =
        c.projection_names(m).into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let before = m.len();
    let name = output_name(out, format!("{model}.contracted"))?;
    let file = ws.save_model(&name, &c.model, &new_points)?;
    Ok(ContractOutcome { model: name, states_before: before, states_after: c.model.len(), projection, file })
}

pub fn cmd_synth(
    ws: &mut Workspace,
    src: (&str, &str),
    dst: (&str, &str),
    isomorphic: bool,
    out: Option<&str>,
) -> Result<UpdateOutcome, CliError> {
    let p = ws.pointed_model(src.0, Some(src.1))?;
    let q = ws.pointed_model(dst.0, Some(dst.1))?;
    let pu = if isomorphic { synth_isomorphic(&p, &q)? } else { synth_arbitrary(&p, &q)? };
    save_update(ws, pu, out)
}

pub fn cmd_tf(ws: &mut Workspace, update: &str, events: &[String], out: Option<&str>) -> Result<UpdateOutcome, CliError> {
    let pu = ws.pointed_update(update, events)?;
    save_update(ws, normalize_tf(&pu), out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneOutcome {
    pub steps: Vec<PathBuf>,
    pub fresh_atoms: Vec<String>,
    pub max_assignments_per_event: usize,
    pub composed: UpdateOutcome,
}

/// Writes each step to `<out>.steps/NN.json` and the composed update to
/// `<out>.json`.
pub fn cmd_one(
    ws: &mut Workspace,
    update: &str,
    events: &[String],
    literal: bool,
    out: Option<&str>,
) -> Result<OneOutcome, CliError> {
    let pu = ws.pointed_update(update, events)?;
    let variant = if literal { OneVariant::Literal } else { OneVariant::Marker };
    let seq = decompose_single(&pu, variant)?;
    let name = output_name(out, format!("{update}.one"))?;
    let dir = ws.dir().join(format!("{name}.steps"));
    let mut steps = Vec::new();
    for (i, step) in seq.steps.iter().enumerate() {
        let path = dir.join(format!("{i:02}.json"));
        write_json(&path, &super::workspace::update_doc(step)?)?;
        steps.push(path);
    }
    let composed = save_update(ws, seq.composed()?, Some(&name))?;
    Ok(OneOutcome {
        steps,
        fresh_atoms: seq.fresh_atoms.iter().map(ToString::to_string).collect(),
        max_assignments_per_event: seq.max_assignments_per_event(),
        composed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomsOutcome {
    pub seed: u64,
    pub trials: u64,
    pub reports: Vec<AxiomReport>,
    /// Sound schemes with failures; should be empty.
    pub unsound: Vec<String>,
    /// Mutants that no trial refuted.
    pub mutants_survived: Vec<String>,
}

/// Runs the selected schemes (all of them when `which` is empty) and
/// writes the report to `out` when given.
pub fn cmd_axioms(trials: u64, seed: u64, which: &[String], out: Option<&Path>) -> Result<AxiomsOutcome, CliError> {
    let ids: Vec<AxiomId> = if which.is_empty() {
        AxiomId::all().collect()
    } else {
        which.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let params = GenParams::default().with_seed(seed);
    let reports: Vec<AxiomReport> = ids.iter().map(|&id| check_axiom(id, trials, &params)).collect();
    let outcome = AxiomsOutcome {
        seed,
        trials,
        unsound: ids
            .iter()
            .zip(&reports)
            .filter(|(id, r)| id.is_sound() && r.failure_count > 0)
            .map(|(id, _)| id.to_string())
            .collect(),
        mutants_survived: ids
            .iter()
            .zip(&reports)
            .filter(|(id, r)| !id.is_sound() && r.failure_count == 0)
            .map(|(id, _)| id.to_string())
            .collect(),
        reports,
    };
    if let Some(path) = out {
        write_json(path, &outcome)?;
    }
    Ok(outcome)
}

/// DOT for a model or an update of the workspace.
pub fn cmd_dot(ws: &Workspace, name: &str) -> Result<String, CliError> {
    if let Ok((m, points)) = ws.model(name) {
        return Ok(model_dot(name, m, points));
    }
    let (u, points) = ws.update(name).map_err(|_| CliError::UnknownName(name.to_string()))?;
    Ok(update_dot(u, points))
}

fn output_name(out: Option<&str>, default: String) -> Result<String, CliError> {
    let name = out.map(str::to_string).unwrap_or(default);
    if is_ident(&name) {
        Ok(name)
    } else {
        Err(CliError::InvalidName(name))
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
