//! HTTP/JSON service over datasets, tours and sessions. Everything is kept in
//! memory and mirrored as flat JSON files under a data directory.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path as FsPath, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{FromRequest, Multipart, Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::detour::Recommender;
use crate::facts::{FactError, FactRegistry};
use crate::graph::{load_csv, Capabilities, DatasetDoc, Graph, GraphError, LoadOptions, Terminology, TerminologyDoc};
use crate::render::RenderedSlideDoc;
use crate::session::{Action, Env, Event, Outcome, OutlineSection, PivotSuggestion, Session, SessionError};
use crate::subject::{Subject, SubjectError};
use crate::tours::{applicable_fact_count, export_tour, parse_tour_template, TourCatalog, TourError, TourScope};

/// Runtime settings, usually read from `DATA_DIR`, `BIND_ADDR` and `DEFAULT_SEED`.
#[derive(Debug, Clone)]
pub struct Config {
    pub data_dir: PathBuf,
    pub bind_addr: String,
    /// Seed for sessions that do not bring one; clock-derived when unset.
    pub default_seed: Option<u64>,
}

impl Config {
    pub fn from_env() -> Config {
        Config {
            data_dir: std::env::var("DATA_DIR").unwrap_or_else(|_| "data".into()).into(),
            bind_addr: std::env::var("BIND_ADDR").unwrap_or_else(|_| "127.0.0.1:8080".into()),
            default_seed: std::env::var("DEFAULT_SEED").ok().and_then(|s| s.parse().ok()),
        }
    }
}

/// An error carried to the client as `{"error": {"code", "message"}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
}

/// HTTP status for a module error code.
pub fn status_for(code: &str) -> StatusCode {
    match code {
        "UnknownDataset" | "UnknownSession" | "UnknownTour" | "UnknownSlide" | "UnknownSection" | "UnknownFactId"
        | "UnknownSuggestion" => StatusCode::NOT_FOUND,
        "DuplicateTourId" | "HiddenSlide" | "NoEdit" | "NotStarted" | "ScopeMismatch" => StatusCode::CONFLICT,
        "SubjectMissing" | "SubjectMismatch" | "UnknownNode" | "SameNode" | "OverlappingSubgraphs" | "EmptySelection"
        | "DisconnectedPath" | "MalformedSubject" => StatusCode::UNPROCESSABLE_ENTITY,
        "Io" => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

impl ApiError {
    pub fn new(code: &str, message: impl Into<String>) -> ApiError {
        ApiError { status: status_for(code), code: code.to_string(), message: message.into() }
    }

    fn io(e: std::io::Error) -> ApiError {
        ApiError::new("Io", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": {"code": self.code, "message": self.message}}))).into_response()
    }
}

macro_rules! from_coded {
    ($($t:ty),*) => {$(
        impl From<$t> for ApiError {
            fn from(e: $t) -> ApiError {
                ApiError::new(e.code(), e.to_string())
            }
        }
    )*};
}

from_coded!(SessionError, TourError, GraphError, FactError, SubjectError);

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetRecord {
    pub dataset_id: String,
    pub name: String,
    pub uploaded_at: i64,
    pub dataset: DatasetDoc,
}

struct DatasetEntry {
    record: DatasetRecord,
    graph: Arc<Graph>,
}

struct Tours {
    catalog: TourCatalog,
    recommender: Recommender,
}

impl Tours {
    fn new(catalog: TourCatalog) -> Tours {
        let recommender = Recommender::new(catalog.iter(), FactRegistry::builtin());
        Tours { catalog, recommender }
    }
}

struct SessionEntry {
    dataset_id: String,
    graph: Arc<Graph>,
    session: Session,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SessionFile {
    session_id: String,
    dataset_id: String,
    events: Vec<Event>,
}

/// Shared state behind the router.
pub struct AppState {
    config: Config,
    datasets: RwLock<BTreeMap<String, Arc<DatasetEntry>>>,
    tours: RwLock<Tours>,
    sessions: Mutex<BTreeMap<String, Arc<Mutex<SessionEntry>>>>,
    next_dataset: AtomicU64,
    next_session: AtomicU64,
}

fn write_json(dir: &FsPath, id: &str, value: &impl Serialize) -> ApiResult<()> {
    std::fs::create_dir_all(dir).map_err(ApiError::io)?;
    let tmp = dir.join(format!(".{id}.json.tmp"));
    let text = serde_json::to_string_pretty(value).expect("state serializes");
    std::fs::write(&tmp, text).map_err(ApiError::io)?;
    std::fs::rename(&tmp, dir.join(format!("{id}.json"))).map_err(ApiError::io)
}

fn read_dir_json(dir: &FsPath) -> Vec<(PathBuf, String)> {
    let Ok(entries) = std::fs::read_dir(dir) else { return Vec::new() };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
        .collect();
    files.sort();
    files
        .into_iter()
        .filter_map(|p| match std::fs::read_to_string(&p) {
            Ok(text) => Some((p, text)),
            Err(e) => {
                log::warn!("skipping {}: {e}", p.display());
                None
            }
        })
        .collect()
}

/// Numeric suffix of ids like `session-12`.
fn id_number(id: &str) -> u64 {
    id.rsplit('-').next().and_then(|n| n.parse().ok()).unwrap_or(0)
}

fn since_epoch() -> std::time::Duration {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap_or_default()
}

/// Seconds since the epoch.
fn now() -> i64 {
    since_epoch().as_secs() as i64
}

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl AppState {
    /// Builds the state, loading whatever the data directory already holds.
    pub fn open(config: Config) -> AppState {
        let state = AppState {
            config,
            datasets: RwLock::new(BTreeMap::new()),
            tours: RwLock::new(Tours::new(TourCatalog::with_builtins())),
            sessions: Mutex::new(BTreeMap::new()),
            next_dataset: AtomicU64::new(1),
            next_session: AtomicU64::new(1),
        };
        state.load();
        state
    }

    fn dir(&self, kind: &str) -> PathBuf {
        self.config.data_dir.join(kind)
    }

    fn load(&self) {
        let reg = FactRegistry::builtin();
        for (p, text) in read_dir_json(&self.dir("datasets")) {
            let loaded = serde_json::from_str::<DatasetRecord>(&text)
                .map_err(|e| e.to_string())
                .and_then(|r| r.dataset.clone().into_graph().map(|g| (r, g)).map_err(|e| e.to_string()));
            match loaded {
                Ok((record, graph)) => {
                    self.next_dataset.fetch_max(id_number(&record.dataset_id) + 1, Ordering::SeqCst);
                    let entry = DatasetEntry { record, graph: Arc::new(graph) };
                    self.datasets.write().unwrap().insert(entry.record.dataset_id.clone(), Arc::new(entry));
                }
                Err(e) => log::warn!("skipping dataset {}: {e}", p.display()),
            }
        }
        let mut catalog = TourCatalog::with_builtins();
        for (p, text) in read_dir_json(&self.dir("tours")) {
            if let Err(e) = parse_tour_template(&text, reg).and_then(|t| catalog.register(t, reg)) {
                log::warn!("skipping tour {}: {e}", p.display());
            }
        }
        *self.tours.write().unwrap() = Tours::new(catalog);
        for (p, text) in read_dir_json(&self.dir("sessions")) {
            let restored = serde_json::from_str::<SessionFile>(&text).map_err(|e| e.to_string()).and_then(|f| {
                let graph = self.graph(&f.dataset_id).map_err(|e| e.message)?;
                let tours = self.tours.read().unwrap();
                let session = Session::replay(env(&graph, &tours), f.session_id.clone(), &f.events)
                    .map_err(|e| e.to_string())?;
                Ok(SessionEntry { dataset_id: f.dataset_id, graph, session })
            });
            match restored {
                Ok(entry) => {
                    self.next_session.fetch_max(id_number(&entry.session.id) + 1, Ordering::SeqCst);
                    lock(&self.sessions).insert(entry.session.id.clone(), Arc::new(Mutex::new(entry)));
                }
                Err(e) => log::warn!("skipping session {}: {e}", p.display()),
            }
        }
    }

    fn dataset(&self, id: &str) -> ApiResult<Arc<DatasetEntry>> {
        self.datasets
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new("UnknownDataset", format!("unknown dataset {id:?}")))
    }

    fn graph(&self, id: &str) -> ApiResult<Arc<Graph>> {
        Ok(self.dataset(id)?.graph.clone())
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<SessionEntry>>> {
        lock(&self.sessions)
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new("UnknownSession", format!("unknown session {id:?}")))
    }

    fn add_dataset(&self, name: Option<String>, graph: Graph) -> ApiResult<String> {
        let id = format!("dataset-{}", self.next_dataset.fetch_add(1, Ordering::SeqCst));
        let mut dataset = graph.to_dataset();
        let name = name.or(dataset.name.clone()).unwrap_or_else(|| id.clone());
        dataset.name = Some(name.clone());
        let record = DatasetRecord { dataset_id: id.clone(), name, uploaded_at: now(), dataset };
        write_json(&self.dir("datasets"), &id, &record)?;
        let entry = DatasetEntry { record, graph: Arc::new(graph) };
        self.datasets.write().unwrap().insert(id.clone(), Arc::new(entry));
        Ok(id)
    }

    fn register_tour(&self, text: &str) -> ApiResult<String> {
        let reg = FactRegistry::builtin();
        let t = parse_tour_template(text, reg)?;
        let mut tours = self.tours.write().unwrap();
        if tours.catalog.contains(&t.id) {
            return Err(TourError::DuplicateTourId(t.id).into());
        }
        write_json(&self.dir("tours"), &t.id, &t)?;
        let id = t.id.clone();
        let mut catalog = tours.catalog.clone();
        catalog.register(t, reg)?;
        *tours = Tours::new(catalog);
        Ok(id)
    }

    fn persist_session(&self, entry: &SessionEntry) -> ApiResult<()> {
        let file = SessionFile {
            session_id: entry.session.id.clone(),
            dataset_id: entry.dataset_id.clone(),
            events: entry.session.events.clone(),
        };
        write_json(&self.dir("sessions"), &entry.session.id, &file)
    }

    fn default_seed(&self) -> u64 {
        self.config.default_seed.unwrap_or_else(|| since_epoch().as_nanos() as u64)
    }
}

fn env<'a>(graph: &'a Graph, tours: &'a Tours) -> Env<'a> {
    Env { graph, registry: FactRegistry::builtin(), catalog: &tours.catalog, recommender: &tours.recommender }
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ApiError::new("SchemaViolation", format!("{path}: {}", e.inner()))
    })
}

type Shared = State<Arc<AppState>>;

/// Runs `f` on the blocking pool; metrics on large graphs can take a while.
async fn blocking<T, F>(state: Arc<AppState>, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&AppState) -> ApiResult<T> + Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&state))
        .await
        .map_err(|e| ApiError::new("Io", e.to_string()))?
}

async fn post_dataset(State(state): Shared, req: Request) -> ApiResult<(StatusCode, Json<Value>)> {
    let is_multipart = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    let (name, graph) = if is_multipart {
        let mp = Multipart::from_request(req, &()).await.map_err(|e| ApiError::new("MalformedFile", e.body_text()))?;
        read_multipart(mp).await?
    } else {
        let body = Bytes::from_request(req, &()).await.map_err(|e| ApiError::new("MalformedFile", e.body_text()))?;
        let doc: DatasetDoc =
            serde_json::from_slice(&body).map_err(|e| ApiError::from(GraphError::MalformedFile(e.to_string())))?;
        let name = doc.name.clone();
        (name, blocking_graph(doc).await?)
    };
    let id = blocking(state, move |s| s.add_dataset(name, graph)).await?;
    Ok((StatusCode::CREATED, Json(json!({"datasetId": id}))))
}

async fn blocking_graph(doc: DatasetDoc) -> ApiResult<Graph> {
    tokio::task::spawn_blocking(move || doc.into_graph().map_err(ApiError::from))
        .await
        .map_err(|e| ApiError::new("Io", e.to_string()))?
}

/// Multipart upload: either a `dataset` JSON part, or `nodes` and `links`
/// CSV parts with optional `directed`, `name` and `terminology` parts.
async fn read_multipart(mut mp: Multipart) -> ApiResult<(Option<String>, Graph)> {
    let mut parts: BTreeMap<String, Bytes> = BTreeMap::new();
    while let Some(field) = mp.next_field().await.map_err(|e| ApiError::new("MalformedFile", e.body_text()))? {
        let name = field.name().unwrap_or_default().to_string();
        let data = field.bytes().await.map_err(|e| ApiError::new("MalformedFile", e.body_text()))?;
        parts.insert(name, data);
    }
    let text = |k: &str| parts.get(k).map(|b| String::from_utf8_lossy(b).trim().to_string());
    let name = text("name");
    if let Some(doc) = parts.get("dataset") {
        let doc: DatasetDoc =
            serde_json::from_slice(doc).map_err(|e| ApiError::from(GraphError::MalformedFile(e.to_string())))?;
        let name = name.or(doc.name.clone());
        return Ok((name, blocking_graph(doc).await?));
    }
    let (Some(nodes), Some(links)) = (parts.get("nodes"), parts.get("links")) else {
        return Err(GraphError::MalformedFile("expected a dataset part or nodes and links parts".into()).into());
    };
    let options = LoadOptions { directed: text("directed").is_some_and(|d| d == "true"), ..LoadOptions::default() };
    let mut graph = load_csv(nodes.as_ref(), links.as_ref(), &options)?;
    if let Some(t) = parts.get("terminology") {
        let t: Terminology =
            serde_json::from_slice(t).map_err(|e| ApiError::from(GraphError::MalformedFile(e.to_string())))?;
        graph = graph.with_terminology(t)?;
    }
    Ok((name, graph))
}

async fn list_datasets(State(state): Shared) -> Json<Value> {
    let datasets = state.datasets.read().unwrap();
    let list: Vec<Value> = datasets
        .values()
        .map(|d| {
            json!({
                "datasetId": d.record.dataset_id,
                "name": d.record.name,
                "uploadedAt": d.record.uploaded_at,
                "nodeCount": d.graph.nodes().len(),
                "linkCount": d.graph.links().len(),
                "capabilities": d.graph.capabilities(),
            })
        })
        .collect();
    Json(Value::Array(list))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GraphView {
    dataset_id: String,
    name: String,
    directed: bool,
    nodes: Vec<crate::graph::NodeDoc>,
    links: Vec<crate::graph::LinkDoc>,
    capabilities: Capabilities,
    terminology: Terminology,
}

async fn get_graph(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<GraphView>> {
    let d = state.dataset(&id)?;
    let doc = d.graph.to_dataset();
    Ok(Json(GraphView {
        dataset_id: id,
        name: d.record.name.clone(),
        directed: doc.directed,
        nodes: doc.nodes,
        links: doc.links,
        capabilities: d.graph.capabilities(),
        terminology: d.graph.terminology().clone(),
    }))
}

async fn put_terminology(State(state): Shared, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Terminology>> {
    let patch: TerminologyDoc = parse_body(&body)?;
    let d = state.dataset(&id)?;
    let current = TerminologyDoc::from(d.graph.terminology().clone());
    let pick = |noun: Option<String>, plural: Option<String>, cur_noun: Option<String>, cur_plural: Option<String>| {
        if noun.is_some() {
            (noun, plural)
        } else {
            (cur_noun, plural.or(cur_plural))
        }
    };
    let (node_noun, node_plural) = pick(patch.node_noun, patch.node_plural, current.node_noun, current.node_plural);
    let (link_noun, link_plural) = pick(patch.link_noun, patch.link_plural, current.link_noun, current.link_plural);
    let (weight_noun, weight_plural) =
        pick(patch.weight_noun, patch.weight_plural, current.weight_noun, current.weight_plural);
    let (subgraph_noun, subgraph_plural) =
        pick(patch.subgraph_noun, patch.subgraph_plural, current.subgraph_noun, current.subgraph_plural);
    let merged = TerminologyDoc {
        node_noun,
        node_plural,
        link_noun,
        link_plural,
        weight_noun,
        weight_plural,
        subgraph_noun,
        subgraph_plural,
    };
    let terminology = Terminology::try_from(merged)?;
    let graph = d.graph.with_terminology(terminology.clone())?;
    let mut record = d.record.clone();
    record.dataset.terminology = Some(terminology.clone());
    write_json(&state.dir("datasets"), &id, &record)?;
    let entry = DatasetEntry { record, graph: Arc::new(graph) };
    state.datasets.write().unwrap().insert(id, Arc::new(entry));
    Ok(Json(terminology))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct TourQuery {
    dataset_id: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TourSummary {
    id: String,
    name: String,
    description: String,
    scope: TourScope,
    fact_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    applicable_facts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    applicable: Option<bool>,
}

async fn list_tours(State(state): Shared, Query(q): Query<TourQuery>) -> ApiResult<Json<Vec<TourSummary>>> {
    let graph = q.dataset_id.as_deref().map(|id| state.graph(id)).transpose()?;
    let tours = state.tours.read().unwrap();
    let list = tours
        .catalog
        .iter()
        .map(|t| {
            let applicable_facts = graph.as_ref().map(|g| applicable_fact_count(t, FactRegistry::builtin(), g));
            let small = graph.as_ref().is_some_and(|g| match t.scope.subject_kind() {
                crate::subject::SubjectKind::NodePair | crate::subject::SubjectKind::SubgraphPair => g.nodes().len() < 2,
                crate::subject::SubjectKind::Path => g.links().is_empty(),
                _ => g.nodes().is_empty(),
            });
            TourSummary {
                id: t.id.clone(),
                name: t.name.clone(),
                description: t.description.clone(),
                scope: t.scope,
                fact_count: t.fact_count(),
                applicable: applicable_facts.map(|n| n > 0 && !small),
                applicable_facts,
            }
        })
        .collect();
    Ok(Json(list))
}

async fn post_tour(State(state): Shared, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let text = String::from_utf8_lossy(&body).into_owned();
    let id = state.register_tour(&text)?;
    Ok((StatusCode::CREATED, Json(json!({"tourId": id}))))
}

async fn export(State(state): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    let tours = state.tours.read().unwrap();
    let t = tours.catalog.get(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], export_tour(t)).into_response())
}

/// What the viewer needs after every session call.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub session_id: String,
    pub tour_id: String,
    pub tour_name: String,
    pub depth: usize,
    pub slide: Option<RenderedSlideDoc>,
    pub position: Option<usize>,
    pub visible_count: usize,
    pub hidden_count: usize,
    pub outline: Vec<OutlineSection>,
    pub pivot_suggestions: Vec<PivotSuggestion>,
}

fn view(entry: &SessionEntry, tours: &Tours) -> SessionView {
    let s = &entry.session;
    let starred: BTreeSet<String> =
        s.starred.iter().filter(|x| x.tour_id == s.frame().tour_id).map(|x| x.slide.key()).collect();
    let slide = s.current().map(|c| {
        let mut doc = RenderedSlideDoc::new(&c.slide, &entry.graph);
        doc.slide.starred = starred.contains(&doc.key);
        doc
    });
    SessionView {
        session_id: s.id.clone(),
        tour_id: s.frame().tour_id.clone(),
        tour_name: s.frame().tour_name.clone(),
        depth: s.tour_stack.len(),
        slide,
        position: s.position(),
        visible_count: s.visible().len(),
        hidden_count: s.hidden_count(),
        outline: s.outline(),
        pivot_suggestions: s.pivot_suggestions(env(&entry.graph, tours)),
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct StartRequest {
    dataset_id: String,
    tour_id: String,
    #[serde(default)]
    subject: Option<Subject>,
    #[serde(default)]
    seed: Option<u64>,
}

async fn post_session(State(state): Shared, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: StartRequest = parse_body(&body)?;
    let out = blocking(state, move |s| {
        let graph = s.graph(&req.dataset_id)?;
        let seed = req.seed.unwrap_or_else(|| s.default_seed());
        let tours = s.tours.read().unwrap();
        let id = format!("session-{}", s.next_session.fetch_add(1, Ordering::SeqCst));
        let session = Session::start(
            env(&graph, &tours),
            id.clone(),
            &req.tour_id,
            req.subject.unwrap_or_default(),
            seed,
            now(),
        )?;
        let entry = SessionEntry { dataset_id: req.dataset_id, graph, session };
        s.persist_session(&entry)?;
        let v = view(&entry, &tours);
        let skipped = entry.session.frame().skipped.clone();
        lock(&s.sessions).insert(id.clone(), Arc::new(Mutex::new(entry)));
        Ok(json!({
            "sessionId": id,
            "seed": seed,
            "firstSlide": v.slide,
            "outline": v.outline,
            "pivotSuggestions": v.pivot_suggestions,
            "skipped": skipped,
        }))
    })
    .await?;
    Ok((StatusCode::CREATED, Json(out)))
}

async fn get_session(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let entry = state.session(&id)?;
    let entry = lock(&entry);
    let tours = state.tours.read().unwrap();
    Ok(Json(view(&entry, &tours)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionRequest {
    action: String,
    #[serde(default)]
    params: Option<Value>,
}

/// Response to one action: the view plus the action's side results.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct ActionResponse {
    #[serde(flatten)]
    pub view: SessionView,
    pub section_boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detour: Option<crate::detour::DetourResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edited: Option<crate::tours::TourTemplate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saved_tour_id: Option<String>,
}

fn parse_action(req: ActionRequest) -> ApiResult<Action> {
    let bare = json!({"event": req.action});
    let parsed = match req.params.filter(|p| !p.is_null()) {
        Some(p) => {
            let empty = p.as_object().is_some_and(|o| o.is_empty());
            let mut doc = bare.clone();
            doc["params"] = p;
            serde_json::from_value(doc).or_else(|e| if empty { serde_json::from_value(bare.clone()) } else { Err(e) })
        }
        None => serde_json::from_value(bare.clone()),
    };
    let action: Action = parsed.map_err(|e| {
        if e.to_string().contains("unknown variant") {
            ApiError::new("UnknownAction", format!("unknown action {:?}", bare["event"]))
        } else {
            ApiError::new("SchemaViolation", e.to_string())
        }
    })?;
    if matches!(action, Action::Start { .. }) {
        return Err(ApiError::new("UnknownAction", "sessions are started with POST /sessions"));
    }
    Ok(action)
}

async fn post_action(State(state): Shared, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<ActionResponse>> {
    let req: ActionRequest = parse_body(&body)?;
    let action = parse_action(req)?;
    let out = blocking(state, move |s| {
        let entry = s.session(&id)?;
        let mut entry = lock(&entry);
        if let Action::SaveTour { id: Some(tid), .. } = &action {
            if s.tours.read().unwrap().catalog.contains(tid) {
                return Err(TourError::DuplicateTourId(tid.clone()).into());
            }
        }
        let outcome: Outcome = {
            let tours = s.tours.read().unwrap();
            let graph = entry.graph.clone();
            entry.session.act(env(&graph, &tours), action, now())?
        };
        let mut saved_tour_id = None;
        if let Some(t) = &outcome.saved {
            saved_tour_id = Some(s.register_tour(&export_tour(t))?);
        }
        s.persist_session(&entry)?;
        let tours = s.tours.read().unwrap();
        Ok(ActionResponse {
            view: view(&entry, &tours),
            section_boundary: outcome.section_boundary,
            detour: outcome.detour,
            edited: outcome.edited,
            saved_tour_id,
        })
    })
    .await?;
    Ok(Json(out))
}

async fn get_starred(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let entry = state.session(&id)?;
    let entry = lock(&entry);
    Ok(Json(serde_json::to_value(&entry.session.starred).expect("snapshots serialize")))
}

async fn get_events(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<Vec<Event>>> {
    let entry = state.session(&id)?;
    let entry = lock(&entry);
    Ok(Json(entry.session.events.clone()))
}

async fn not_found() -> ApiError {
    ApiError::new("UnknownRoute", "no such endpoint").with_status(StatusCode::NOT_FOUND)
}

impl ApiError {
    fn with_status(mut self, status: StatusCode) -> ApiError {
        self.status = status;
        self
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/datasets", post(post_dataset).get(list_datasets))
        .route("/datasets/{id}/graph", get(get_graph))
        .route("/datasets/{id}/terminology", put(put_terminology))
        .route("/tours", get(list_tours).post(post_tour))
        .route("/tours/{id}/export", get(export))
        .route("/sessions", post(post_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/actions", post(post_action))
        .route("/sessions/{id}/starred", get(get_starred))
        .route("/sessions/{id}/events", get(get_events))
        .fallback(not_found)
        .with_state(state)
}

/// Serves until interrupted.
pub async fn serve(config: Config) -> std::io::Result<()> {
    let addr = config.bind_addr.clone();
    let state = Arc::new(tokio::task::spawn_blocking(move || AppState::open(config)).await.map_err(std::io::Error::other)?);
    let listener = tokio::net::TcpListener::bind(&addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
