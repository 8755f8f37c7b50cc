//! C ABI for datatours.
//!
//! Graphs and sessions are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a `DtStatus`; on
//! failure `dt_last_error_code` and `dt_last_error_message` describe the error
//! on the calling thread until its next call. Strings returned through `out`
//! parameters are UTF-8, NUL-terminated and released with `dt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use datatours::detour::{DetourResult, Recommender};
use datatours::facts::FactRegistry;
use datatours::graph::{load_json_str, load_path, Graph, GraphError, LoadOptions};
use datatours::render::{RenderedSlideDoc, RenderedTour};
use datatours::session::{Action, Env, Event, OutlineSection, PivotSuggestion, Session, SessionError};
use datatours::subject::{Subject, SubjectError};
use datatours::tours::{builtin_tours, import_tour, instantiate, TourCatalog, TourError, TourTemplate};
use serde::Serialize;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was malformed, such as unparseable action JSON.
    InvalidArgument = 3,
    /// The dataset could not be loaded.
    InvalidDataset = 4,
    UnknownTour = 5,
    /// The subject is missing, malformed or does not fit the tour.
    InvalidSubject = 6,
    /// The session refused the action and is unchanged.
    Rejected = 7,
    /// An internal error was caught at the boundary.
    Panic = 8,
}

/// Output format for `dt_tour_render`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtFormat {
    Json = 0,
    Markdown = 1,
    Html = 2,
}

/// A loaded network dataset.
pub struct DtGraph {
    graph: Arc<Graph>,
}

/// An interactive tour session over one graph.
pub struct DtSession {
    graph: Arc<Graph>,
    catalog: TourCatalog,
    recommender: Recommender,
    session: Session,
    clock: i64,
}

struct Failure {
    status: DtStatus,
    code: String,
    message: String,
}

impl Failure {
    fn new(status: DtStatus, code: &str, message: impl std::fmt::Display) -> Failure {
        Failure { status, code: code.to_string(), message: message.to_string() }
    }
}

const SUBJECT_CODES: [&str; 8] = [
    "SubjectMissing",
    "SubjectMismatch",
    "UnknownNode",
    "SameNode",
    "OverlappingSubgraphs",
    "EmptySelection",
    "DisconnectedPath",
    "MalformedSubject",
];

fn classify(code: &str, fallback: DtStatus) -> DtStatus {
    match code {
        "UnknownTour" => DtStatus::UnknownTour,
        c if SUBJECT_CODES.contains(&c) => DtStatus::InvalidSubject,
        _ => fallback,
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        Failure::new(DtStatus::InvalidDataset, e.code(), e)
    }
}

impl From<TourError> for Failure {
    fn from(e: TourError) -> Failure {
        Failure::new(classify(e.code(), DtStatus::InvalidArgument), e.code(), e)
    }
}

impl From<SubjectError> for Failure {
    fn from(e: SubjectError) -> Failure {
        Failure::new(DtStatus::InvalidSubject, e.code(), e)
    }
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Failure {
        Failure::new(classify(e.code(), DtStatus::Rejected), e.code(), e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(CString, CString)>> = const { RefCell::new(None) };
}

fn c_string(s: impl Into<String>) -> CString {
    CString::new(s.into().replace('\0', " ")).expect("NUL bytes replaced")
}

fn set_error(f: &Failure) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some((c_string(f.code.as_str()), c_string(f.message.as_str()))));
}

/// Runs `f`, recording its error or panic for `dt_last_error_*`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(Failure::new(DtStatus::Panic, "Panic", msg))
    });
    match result {
        Ok(()) => DtStatus::Ok,
        Err(f) => {
            set_error(&f);
            f.status
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::new(DtStatus::NullPointer, "NullPointer", format!("{what} is NULL"))
}

/// # Safety
/// `p` is NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(DtStatus::InvalidUtf8, "InvalidUtf8", format!("{what}: {e}")))
}

/// # Safety
/// `p` is NULL or a valid NUL-terminated string.
unsafe fn read_opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        read_str(p, what).map(Some)
    }
}

/// # Safety
/// `out` is NULL or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `out` is NULL or valid for writes.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    write_out(out, c_string(s).into_raw())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// # Safety
/// `p` is NULL or a live handle.
unsafe fn graph_ref<'a>(p: *const DtGraph) -> Result<&'a DtGraph, Failure> {
    p.as_ref().ok_or_else(|| null("graph"))
}

/// # Safety
/// `p` is NULL or a live handle.
unsafe fn session_mut<'a>(p: *mut DtSession) -> Result<&'a mut DtSession, Failure> {
    p.as_mut().ok_or_else(|| null("session"))
}

fn parse_subject(text: Option<&str>) -> Result<Subject, Failure> {
    Ok(match text {
        None => Subject::None,
        Some(t) => t.parse()?,
    })
}

/// A built-in tour id, or a whole tour template as JSON.
fn resolve_tour(arg: &str, catalog: &TourCatalog) -> Result<TourTemplate, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(import_tour(arg, FactRegistry::builtin())?);
    }
    Ok(catalog.get(arg)?.clone())
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn dt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Short code of the last error on this thread, such as "HiddenSlide", or
/// NULL after a successful call. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn dt_last_error_code() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(c, _)| c.as_ptr()))
}

/// Human-readable message of the last error on this thread, or NULL.
#[no_mangle]
pub extern "C" fn dt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(_, m)| m.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a dataset from a JSON document.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_from_json(json: *const c_char, out: *mut *mut DtGraph) -> DtStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let graph = load_json_str(text)?;
        write_out(out, Box::into_raw(Box::new(DtGraph { graph: Arc::new(graph) })))
    })
}

/// Loads a dataset from a JSON file or a directory holding nodes.csv and
/// links.csv. `directed` applies to CSV links.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_from_path(path: *const c_char, directed: bool, out: *mut *mut DtGraph) -> DtStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        let graph = load_path(Path::new(path), &LoadOptions { directed, ..LoadOptions::default() })?;
        write_out(out, Box::into_raw(Box::new(DtGraph { graph: Arc::new(graph) })))
    })
}

/// Node and link counts. Either output may be NULL.
///
/// # Safety
/// `graph` is a live handle; non-NULL outputs are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_counts(graph: *const DtGraph, nodes: *mut usize, links: *mut usize) -> DtStatus {
    guard(|| {
        let g = &graph_ref(graph)?.graph;
        if !nodes.is_null() {
            nodes.write(g.nodes().len());
        }
        if !links.is_null() {
            links.write(g.links().len());
        }
        Ok(())
    })
}

/// The dataset as a JSON document, with capabilities and terminology.
///
/// # Safety
/// `graph` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_to_json(graph: *const DtGraph, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let g = &graph_ref(graph)?.graph;
        write_string(out, g.to_json())
    })
}

/// Releases a graph. Sessions started on it stay valid. NULL is ignored.
///
/// # Safety
/// `graph` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_free(graph: *mut DtGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// JSON array of the built-in tour ids.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_tour_ids(out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let ids: Vec<&str> = builtin_tours().iter().map(|t| t.id.as_str()).collect();
        write_string(out, to_json(&ids))
    })
}

/// Renders a whole tour as a static slideshow in `format`, one of `DtFormat`.
///
/// `tour` is a built-in id or a tour template as JSON. `subject` is NULL for
/// whole-network tours, or text such as "node:ID", "pair:A,B",
/// "subgraph:A,B,C", "subgraphs:A,B|C,D", "path:A,B,C" or subject JSON.
///
/// # Safety
/// `graph` is a live handle; `tour` and non-NULL `subject` are NUL-terminated
/// strings; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_tour_render(
    graph: *const DtGraph,
    tour: *const c_char,
    subject: *const c_char,
    seed: u64,
    format: u32,
    out: *mut *mut c_char,
) -> DtStatus {
    guard(|| {
        let g = &graph_ref(graph)?.graph;
        let t = resolve_tour(read_str(tour, "tour")?, &TourCatalog::with_builtins())?;
        let subject = parse_subject(read_opt_str(subject, "subject")?)?;
        let inst = instantiate(&t, FactRegistry::builtin(), g, &subject)?;
        let doc = RenderedTour::new(&inst, g, seed);
        let text = match format {
            f if f == DtFormat::Json as u32 => doc.to_json(),
            f if f == DtFormat::Markdown as u32 => doc.to_markdown(),
            f if f == DtFormat::Html as u32 => doc.to_html(),
            f => return Err(Failure::new(DtStatus::InvalidArgument, "UnknownFormat", format!("format {f}"))),
        };
        write_string(out, text)
    })
}

impl DtSession {
    /// Starts a session from a start event with a fresh built-in catalog.
    fn start(graph: Arc<Graph>, first: &Event) -> Result<DtSession, Failure> {
        let Action::Start { tour_id, subject, seed } = &first.action else {
            return Err(SessionError::NotStarted.into());
        };
        let catalog = TourCatalog::with_builtins();
        let recommender = Recommender::new(catalog.iter(), FactRegistry::builtin());
        let env = Env { graph: &graph, registry: FactRegistry::builtin(), catalog: &catalog, recommender: &recommender };
        let session = Session::start(env, "ffi", tour_id, subject.clone(), *seed, first.timestamp)?;
        Ok(DtSession { graph, catalog, recommender, session, clock: first.timestamp })
    }

    /// Applies an action, registering any tour it saves.
    fn apply(&mut self, action: Action, timestamp: i64) -> Result<datatours::session::Outcome, Failure> {
        if let Action::SaveTour { id: Some(id), .. } = &action {
            if self.catalog.contains(id) {
                return Err(Failure::new(DtStatus::Rejected, "DuplicateTourId", format!("tour {id} already exists")));
            }
        }
        let mut session = self.session.clone();
        let outcome = session.act(self.env(), action, timestamp)?;
        if let Some(t) = &outcome.saved {
            self.catalog.register(t.clone(), FactRegistry::builtin())?;
        }
        self.session = session;
        self.clock = self.clock.max(timestamp);
        Ok(outcome)
    }

    fn env(&self) -> Env<'_> {
        Env { graph: &self.graph, registry: FactRegistry::builtin(), catalog: &self.catalog, recommender: &self.recommender }
    }

    fn state(&self, outcome: Option<ActionOutcome>) -> SessionState {
        let s = &self.session;
        SessionState {
            tour_id: s.frame().tour_id.clone(),
            tour_name: s.frame().tour_name.clone(),
            depth: s.tour_stack.len(),
            slide: s.current().map(|c| RenderedSlideDoc::new(&c.slide, &self.graph)),
            position: s.position(),
            visible_count: s.visible().len(),
            hidden_count: s.hidden_count(),
            outline: s.outline(),
            pivot_suggestions: s.pivot_suggestions(self.env()),
            outcome,
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ActionOutcome {
    section_boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detour: Option<DetourResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saved_tour_id: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SessionState {
    tour_id: String,
    tour_name: String,
    depth: usize,
    slide: Option<RenderedSlideDoc>,
    position: Option<usize>,
    visible_count: usize,
    hidden_count: usize,
    outline: Vec<OutlineSection>,
    pivot_suggestions: Vec<PivotSuggestion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<ActionOutcome>,
}

/// Starts a session on a built-in tour. `subject` follows `dt_tour_render`.
///
/// # Safety
/// `graph` is a live handle; `tour` and non-NULL `subject` are NUL-terminated
/// strings; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_session_start(
    graph: *const DtGraph,
    tour: *const c_char,
    subject: *const c_char,
    seed: u64,
    out: *mut *mut DtSession,
) -> DtStatus {
    guard(|| {
        let g = &graph_ref(graph)?.graph;
        let tour = read_str(tour, "tour")?;
        let subject = parse_subject(read_opt_str(subject, "subject")?)?;
        let first = Event { action: Action::Start { tour_id: tour.to_string(), subject, seed }, timestamp: 0 };
        let s = DtSession::start(g.clone(), &first)?;
        write_out(out, Box::into_raw(Box::new(s)))
    })
}

/// Rebuilds a session from the JSON event log of `dt_session_events`.
///
/// # Safety
/// `graph` is a live handle; `events` is a NUL-terminated string; `out` is
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_session_replay(
    graph: *const DtGraph,
    events: *const c_char,
    out: *mut *mut DtSession,
) -> DtStatus {
    guard(|| {
        let g = &graph_ref(graph)?.graph;
        let events: Vec<Event> = serde_json::from_str(read_str(events, "events")?)
            .map_err(|e| Failure::new(DtStatus::InvalidArgument, "SchemaViolation", e))?;
        let (first, rest) = events.split_first().ok_or_else(|| Failure::from(SessionError::NotStarted))?;
        let mut s = DtSession::start(g.clone(), first)?;
        for e in rest {
            s.apply(e.action.clone(), e.timestamp)?;
        }
        write_out(out, Box::into_raw(Box::new(s)))
    })
}

/// Applies one action given as JSON, for example `{"event": "next"}` or
/// `{"event": "jumpTo", "params": {"slide": "overall.density#1"}}`. A rejected
/// action leaves the session unchanged. When `out` is not NULL it receives
/// the session state with an `outcome` member.
///
/// # Safety
/// `session` is a live handle; `action` is a NUL-terminated string; `out` is
/// NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_session_act(
    session: *mut DtSession,
    action: *const c_char,
    out: *mut *mut c_char,
) -> DtStatus {
    guard(|| {
        let s = session_mut(session)?;
        let action: Action = serde_json::from_str(read_str(action, "action")?)
            .map_err(|e| Failure::new(DtStatus::InvalidArgument, "SchemaViolation", e))?;
        if matches!(action, Action::Start { .. }) {
            return Err(Failure::new(DtStatus::InvalidArgument, "UnknownAction", "use dt_session_start"));
        }
        let now = s.clock + 1;
        let outcome = s.apply(action, now)?;
        if !out.is_null() {
            let outcome = ActionOutcome {
                section_boundary: outcome.section_boundary,
                detour: outcome.detour,
                saved_tour_id: outcome.saved.map(|t| t.id),
            };
            write_string(out, to_json(&s.state(Some(outcome))))?;
        }
        Ok(())
    })
}

/// The current session state as JSON.
///
/// # Safety
/// `session` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_session_state(session: *mut DtSession, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let s = session_mut(session)?;
        write_string(out, to_json(&s.state(None)))
    })
}

/// The session's event log as a JSON array.
///
/// # Safety
/// `session` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dt_session_events(session: *mut DtSession, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let s = session_mut(session)?;
        write_string(out, to_json(&s.session.events))
    })
}

/// Releases a session. NULL is ignored.
///
/// # Safety
/// `session` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_session_free(session: *mut DtSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}
