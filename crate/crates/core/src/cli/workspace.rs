use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::formula::{parse, Formula};
use crate::ids::Agent;
use crate::models::{EpistemicModel, ModelDoc, PointedModel, PointedUpdate, RawUpdate, UpdateModel};

/// On-disk update model. Formulas are strings in the formula syntax; updates
/// they mention are looked up in `updates` first, then in the workspace.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub agents: Vec<String>,
    pub events: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default)]
    pub pre: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub post: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub updates: BTreeMap<String, UpdateDoc>,
}

/// Either kind of document, told apart by `states` vs `events`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Doc {
    Model(ModelDoc),
    Update(UpdateDoc),
}

/// Update docs for `pu` and everything its formulas mention, flattened into
/// the top-level `updates` table.
pub fn update_doc(pu: &PointedUpdate) -> Result<UpdateDoc, CliError> {
    let points: Vec<usize> = pu.points.iter().copied().collect();
    let mut doc = plain_update_doc(&pu.model, &points);
    let mut refs = Vec::new();
    let mut seen = Default::default();
    for e in 0..pu.model.len() {
        pu.model.pre(e).collect_updates(&mut refs, &mut seen);
        for v in pu.model.post(e).values() {
            v.collect_updates(&mut refs, &mut seen);
        }
    }
    for u in refs {
        let entry = plain_update_doc(&u, &[]);
        match doc.updates.get(u.name()) {
            Some(existing) if *existing != entry => return Err(CliError::NameClash(u.name().to_string())),
            _ => {
                doc.updates.insert(u.name().to_string(), entry);
            }
        }
    }
    if doc.updates.contains_key(pu.model.name()) {
        return Err(CliError::NameClash(pu.model.name().to_string()));
    }
    Ok(doc)
}

fn plain_update_doc(u: &UpdateModel, points: &[usize]) -> UpdateDoc {
    let raw = u.to_raw(points);
    UpdateDoc {
        name: Some(raw.name),
        agents: raw.agents,
        events: raw.events,
        relations: raw.relations,
        pre: raw.pre.into_iter().map(|(e, f)| (e, f.to_string())).collect(),
        post: raw
            .post
            .into_iter()
            .map(|(e, m)| (e, m.into_iter().map(|(p, f)| (p, f.to_string())).collect()))
            .collect(),
        points: raw.points,
        updates: BTreeMap::new(),
    }
}

/// A directory of `<name>.json` documents sharing one agent set.
#[derive(Clone, Debug)]
pub struct Workspace {
    dir: PathBuf,
    agents: Vec<Agent>,
    models: BTreeMap<String, (EpistemicModel, Vec<usize>)>,
    updates: BTreeMap<String, (Arc<UpdateModel>, Vec<usize>)>,
}

impl Workspace {
    /// Loads every `*.json` file directly inside `dir`. Subdirectories are
    /// not read.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, CliError> {
        let dir = dir.as_ref().to_path_buf();
        let entries = fs::read_dir(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();

        let mut model_docs = BTreeMap::new();
        let mut update_docs = BTreeMap::new();
        for path in paths {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            match read_doc(&path)? {
                Doc::Model(doc) => {
                    model_docs.insert(stem, (path, doc));
                }
                Doc::Update(doc) => {
                    let name = doc.name.clone().unwrap_or(stem);
                    if update_docs.contains_key(&name) {
                        return Err(CliError::NameClash(name));
                    }
                    update_docs.insert(name, (path, doc));
                }
            }
        }

        let mut ws = Workspace { dir, agents: Vec::new(), models: BTreeMap::new(), updates: BTreeMap::new() };
        for (name, (path, doc)) in &model_docs {
            let (m, points) = EpistemicModel::from_doc_pointed(doc)
                .map_err(|source| CliError::Model { path: path.clone(), source })?;
            ws.admit_agents(m.agents(), path)?;
            ws.models.insert(name.clone(), (m, points));
        }
        let mut builder = UpdateBuilder { docs: &update_docs, built: BTreeMap::new(), active: BTreeSet::new() };
        for name in update_docs.keys() {
            builder.active.insert(name.clone());
            builder.build(name)?;
            builder.active.clear();
        }
        for (name, (u, points)) in builder.built {
            let path = &update_docs[&name].0;
            ws.admit_agents(u.agents(), path)?;
            ws.updates.insert(name, (u, points));
        }
        Ok(ws)
    }

    /// An empty workspace rooted at `dir`.
    pub fn empty(dir: impl AsRef<Path>) -> Self {
        Workspace {
            dir: dir.as_ref().to_path_buf(),
            agents: Vec::new(),
            models: BTreeMap::new(),
            updates: BTreeMap::new(),
        }
    }

    fn admit_agents(&mut self, agents: &[Agent], path: &Path) -> Result<(), CliError> {
        if self.agents.is_empty() {
            self.agents = agents.to_vec();
        } else if self.agents != agents {
            return Err(CliError::AgentMismatch { path: path.to_path_buf() });
        }
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn model_names(&self) -> impl Iterator<Item = &str> {
        self.models.keys().map(String::as_str)
    }

    pub fn update_names(&self) -> impl Iterator<Item = &str> {
        self.updates.keys().map(String::as_str)
    }

    /// The model and its declared points.
    pub fn model(&self, name: &str) -> Result<(&EpistemicModel, &[usize]), CliError> {
        self.models
            .get(name)
            .map(|(m, p)| (m, p.as_slice()))
            .ok_or_else(|| CliError::UnknownModel(name.to_string()))
    }

    /// The model pointed at `state`, or at its single declared point.
    pub fn pointed_model(&self, name: &str, state: Option<&str>) -> Result<PointedModel, CliError> {
        let (m, points) = self.model(name)?;
        let point = match state {
            Some(s) => m.state_index(s).ok_or_else(|| CliError::UnknownState(s.to_string()))?,
            None => match points {
                [p] => *p,
                _ => return Err(CliError::NeedPoint(name.to_string())),
            },
        };
        Ok(PointedModel::new(m.clone(), point))
    }

    pub fn update(&self, name: &str) -> Result<(&Arc<UpdateModel>, &[usize]), CliError> {
        self.updates
            .get(name)
            .map(|(u, p)| (u, p.as_slice()))
            .ok_or_else(|| CliError::UnknownUpdate(name.to_string()))
    }

    /// The update pointed at `events`, or at its declared points.
    pub fn pointed_update(&self, name: &str, events: &[String]) -> Result<PointedUpdate, CliError> {
        let (u, declared) = self.update(name)?;
        let points: BTreeSet<usize> = if events.is_empty() {
            declared.iter().copied().collect()
        } else {
            events
                .iter()
                .map(|e| u.event_index(e).ok_or_else(|| CliError::UnknownEvent(e.clone())))
                .collect::<Result<_, _>>()?
        };
        PointedUpdate::new(u.clone(), points).map_err(|_| CliError::NeedPoint(name.to_string()))
    }

    pub fn parse_formula(&self, text: &str) -> Result<Formula, CliError> {
        let resolve = |n: &str| self.updates.get(n).map(|(u, _)| u.clone());
        parse(text, &resolve).map_err(|source| CliError::Formula { context: "formula".into(), source })
    }

    /// Adds the model and writes `<name>.json`.
    pub fn save_model(&mut self, name: &str, m: &EpistemicModel, points: &[usize]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(format!("{name}.json"));
        write_json(&path, &m.to_doc(points))?;
        self.admit_agents(m.agents(), &path)?;
        self.models.insert(name.to_string(), (m.clone(), points.to_vec()));
        Ok(path)
    }

    /// Adds the update under its own name and writes `<file>.json`.
    pub fn save_update(&mut self, file: &str, pu: &PointedUpdate) -> Result<PathBuf, CliError> {
        let path = self.dir.join(format!("{file}.json"));
        write_json(&path, &update_doc(pu)?)?;
        self.admit_agents(pu.model.agents(), &path)?;
        let points = pu.points.iter().copied().collect();
        self.updates.insert(pu.model.name().to_string(), (pu.model.clone(), points));
        Ok(path)
    }

    /// Rewrites every model and update file from the loaded structures.
    pub fn save_all(&self) -> Result<(), CliError> {
        for (name, (m, points)) in &self.models {
            write_json(&self.dir.join(format!("{name}.json")), &m.to_doc(points))?;
        }
        for (name, (u, points)) in &self.updates {
            let pu = PointedUpdate { model: u.clone(), points: points.iter().copied().collect() };
            write_json(&self.dir.join(format!("{name}.json")), &update_doc(&pu)?)?;
        }
        Ok(())
    }

    /// Structural equality of the loaded contents, ignoring the directory.
    pub fn same_contents(&self, other: &Workspace) -> bool {
        self.agents == other.agents && self.models == other.models && self.updates == other.updates
    }
}

pub fn read_doc(path: &Path) -> Result<Doc, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })?;
    let kind = if value.get("states").is_some() {
        serde_json::from_value(value).map(Doc::Model)
    } else if value.get("events").is_some() {
        serde_json::from_value(value).map(Doc::Update)
    } else {
        return Err(CliError::UnknownDocument(path.to_path_buf()));
    };
    kind.map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| CliError::Io { path: parent.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Builds update docs on demand so that references resolve in any order.
struct UpdateBuilder<'a> {
    docs: &'a BTreeMap<String, (PathBuf, UpdateDoc)>,
    built: BTreeMap<String, (Arc<UpdateModel>, Vec<usize>)>,
    active: BTreeSet<String>,
}

impl UpdateBuilder<'_> {
    /// Names in formulas resolve to the doc's embedded table first, then to
    /// other workspace updates.
    fn build(&mut self, name: &str) -> Result<Arc<UpdateModel>, CliError> {
        if let Some((u, _)) = self.built.get(name) {
            return Ok(u.clone());
        }
        let docs = self.docs;
        let (path, doc) = &docs[name];
        let mut cache = BTreeMap::new();
        let mut table = BTreeMap::new();
        for n in doc_mentions(doc) {
            if let Some(u) = resolve_embedded(&n, &doc.updates, path, &mut cache, &mut BTreeSet::new())? {
                table.insert(n, u);
            } else if docs.contains_key(&n) {
                if !self.active.insert(n.clone()) {
                    return Err(CliError::Cycle(n));
                }
                let u = self.build(&n);
                self.active.remove(&n);
                table.insert(n, u?);
            }
        }
        let raw = raw_update(name, doc, path, &table)?;
        let (u, points) =
            UpdateModel::from_raw(&raw).map_err(|source| CliError::Model { path: path.clone(), source })?;
        let u = Arc::new(u);
        self.built.insert(name.to_string(), (u.clone(), points));
        Ok(u)
    }
}

fn doc_mentions(doc: &UpdateDoc) -> BTreeSet<String> {
    doc.pre
        .values()
        .chain(doc.post.values().flat_map(|m| m.values()))
        .flat_map(|text| mentioned_updates(text))
        .collect()
}

/// Embedded docs only refer to each other.
fn resolve_embedded(
    name: &str,
    embedded: &BTreeMap<String, UpdateDoc>,
    path: &Path,
    cache: &mut BTreeMap<String, Arc<UpdateModel>>,
    active: &mut BTreeSet<String>,
) -> Result<Option<Arc<UpdateModel>>, CliError> {
    if let Some(u) = cache.get(name) {
        return Ok(Some(u.clone()));
    }
    let Some(doc) = embedded.get(name) else { return Ok(None) };
    if !active.insert(name.to_string()) {
        return Err(CliError::Cycle(name.to_string()));
    }
    let mut table = BTreeMap::new();
    for n in doc_mentions(doc) {
        if let Some(u) = resolve_embedded(&n, embedded, path, cache, active)? {
            table.insert(n, u);
        }
    }
    active.remove(name);
    let raw = raw_update(name, doc, path, &table)?;
    let (u, _) = UpdateModel::from_raw(&raw).map_err(|source| CliError::Model { path: path.to_path_buf(), source })?;
    let u = Arc::new(u);
    cache.insert(name.to_string(), u.clone());
    Ok(Some(u))
}

fn raw_update(
    name: &str,
    doc: &UpdateDoc,
    path: &Path,
    table: &BTreeMap<String, Arc<UpdateModel>>,
) -> Result<RawUpdate, CliError> {
    let parse_at = |context: String, text: &str| {
        parse(text, table).map_err(|source| CliError::Formula {
            context: format!("{}: {context}", path.display()),
            source,
        })
    };
    let mut pre = BTreeMap::new();
    for (e, text) in &doc.pre {
        pre.insert(e.clone(), parse_at(format!("update {name}, pre of {e}"), text)?);
    }
    let mut post = BTreeMap::new();
    for (e, sigma) in &doc.post {
        let mut parsed = BTreeMap::new();
        for (p, text) in sigma {
            parsed.insert(p.clone(), parse_at(format!("update {name}, post of {e} for {p}"), text)?);
        }
        post.insert(e.clone(), parsed);
    }
    Ok(RawUpdate {
        name: name.to_string(),
        agents: doc.agents.clone(),
        events: doc.events.clone(),
        relations: doc.relations.clone(),
        pre,
        post,
        points: doc.points.clone(),
    })
}

/// Names in update position: an identifier followed by `@` inside brackets.
fn mentioned_updates(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (i, _) in text.match_indices('@') {
        let head = text[..i].trim_end();
        let start = head
            .char_indices()
            .rev()
            .take_while(|&(_, c)| crate::ids::is_ident_continue(c))
            .last()
            .map(|(j, _)| j);
        if let Some(j) = start {
            out.push(head[j..].to_string());
        }
    }
    out
}
