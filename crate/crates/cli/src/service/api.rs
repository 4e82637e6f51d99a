//! Request handlers and response bodies.

use axum::body::Bytes;
use axum::extract::rejection::{BytesRejection, QueryRejection};
use axum::extract::{FromRequest, Multipart, Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::Json;
use planadv_core::dialogue::{DialogueSession, PlannerMove, Status, TranscriptEntry, UserMove};
use planadv_core::export::{to_json, GraphJson};
use planadv_core::fixtures;
use planadv_core::framework::FullFramework;
use planadv_core::pddl::{self, decode};
use planadv_core::planning::{validate_trace, Plan, PlanningProblem};
use planadv_core::schemes::{Argument, CqView};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::error::{ApiError, ErrorCode, SourcePosition};
use super::store::{unix_seconds, SessionRecord};
use super::AppState;

pub const SCHEMA: &str = include_str!("../../schemas/planadv.schema.json");

#[derive(Debug, Serialize)]
pub struct PlanSummary {
    pub problem: String,
    pub steps: Vec<String>,
    pub goals: Vec<String>,
    pub valid: bool,
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub created_at: u64,
    pub last_activity: u64,
    pub plan: PlanSummary,
    pub status: Status,
    pub legal_moves: Vec<CqView>,
    pub transcript: Vec<TranscriptEntry>,
}

#[derive(Debug, Serialize)]
pub struct MovesView {
    pub prior: Option<String>,
    pub moves: Vec<CqView>,
}

#[derive(Debug, Serialize)]
pub struct MoveResponse {
    #[serde(rename = "move")]
    pub mv: String,
    /// The planner's reply; `null` after `none` or when no argument exists.
    pub argument: Option<Argument>,
    pub status: Status,
    pub legal_moves: Vec<CqView>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    domain: Option<String>,
    problem: Option<String>,
    plan: Option<String>,
    fixture: Option<String>,
}

/// Either a bare move (`"CQ1"`, `"none"`, `{"kind":..,"target":..}`) or one
/// wrapped with the argument it responds to.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MoveRequest {
    Wrapped {
        #[serde(rename = "move")]
        mv: UserMove,
        #[serde(default)]
        prior: Option<String>,
    },
    Bare(UserMove),
}

#[derive(Debug, Deserialize)]
pub struct PriorQuery {
    prior: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct GraphQuery {
    #[serde(default)]
    full: bool,
}

fn legal_views(session: &DialogueSession, prior: Option<&str>) -> Vec<CqView> {
    if session.outcome().is_some() {
        return Vec::new();
    }
    let moves = session.find_user_moves(prior).unwrap_or_else(|_| session.legal_moves());
    moves
        .iter()
        .map(|cq| CqView::new(cq, session.problem(), session.trace()))
        .collect()
}

fn summary(session: &DialogueSession) -> PlanSummary {
    PlanSummary {
        problem: session.problem().name.to_string(),
        steps: session.plan().steps().iter().map(|s| s.to_string()).collect(),
        goals: session.problem().goals.iter().map(|g| g.to_string()).collect(),
        valid: validate_trace(session.problem(), session.trace()).valid,
    }
}

fn session_view(record: &SessionRecord, session: &DialogueSession) -> SessionView {
    SessionView {
        id: record.id.clone(),
        created_at: unix_seconds(record.created_at),
        last_activity: unix_seconds(record.last_activity()),
        plan: summary(session),
        status: session.status(),
        legal_moves: legal_views(session, None),
        transcript: session.transcript(),
    }
}

fn lookup(state: &AppState, id: &str) -> Result<std::sync::Arc<SessionRecord>, ApiError> {
    state
        .store
        .get(id)
        .ok_or_else(|| ApiError::not_found(format!("session `{id}`")))
}

fn busy() -> ApiError {
    ApiError::new(ErrorCode::IllegalMove, "another move on this session is in progress")
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: Result<Bytes, BytesRejection>) -> Result<T, ApiError> {
    let body = body.map_err(|e| ApiError::parse(e.body_text(), None))?;
    serde_json::from_slice(&body).map_err(|e| ApiError::json(&e))
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    q.map(|Query(v)| v).map_err(|e| ApiError::parse(e.body_text(), None))
}

fn load(domain: &str, problem: &str, plan: &str) -> Result<(PlanningProblem, Plan), ApiError> {
    pddl::load(domain, problem, plan).map_err(|e| {
        ApiError::parse(
            e.to_string(),
            Some(SourcePosition {
                file: Some(e.file.to_string()),
                line: e.error.pos.line,
                col: e.error.pos.col,
            }),
        )
    })
}

fn fixture(state: &AppState, name: &str) -> Result<(PlanningProblem, Plan), ApiError> {
    let well_formed = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if !well_formed {
        return Err(ApiError::not_found(format!("fixture `{name}`")));
    }
    if let Some(dir) = &state.config.fixture_dir {
        let base = dir.join(name);
        let read = |file: &str| std::fs::read_to_string(base.join(file));
        if let (Ok(d), Ok(p), Ok(pl)) = (read("domain.pddl"), read("problem.pddl"), read("plan.plan")) {
            return load(&d, &p, &pl);
        }
    }
    match name {
        "blocks" => load(fixtures::BLOCKS_DOMAIN, fixtures::BLOCKS_PROBLEM, fixtures::BLOCKS_PLAN),
        "blocks-truncated" => load(
            fixtures::BLOCKS_DOMAIN,
            fixtures::BLOCKS_PROBLEM,
            fixtures::BLOCKS_TRUNCATED_PLAN,
        ),
        _ => Err(ApiError::not_found(format!("fixture `{name}`"))),
    }
}

fn from_request(state: &AppState, req: CreateRequest) -> Result<(PlanningProblem, Plan), ApiError> {
    match req {
        CreateRequest {
            fixture: Some(name),
            domain: None,
            problem: None,
            plan: None,
        } => fixture(state, &name),
        CreateRequest {
            fixture: None,
            domain: Some(d),
            problem: Some(p),
            plan: Some(pl),
        } => load(&d, &p, &pl),
        _ => Err(ApiError::parse(
            "expected either `domain`, `problem` and `plan`, or `fixture` alone",
            None,
        )),
    }
}

async fn read_multipart(mut form: Multipart) -> Result<CreateRequest, ApiError> {
    let mut req = CreateRequest {
        domain: None,
        problem: None,
        plan: None,
        fixture: None,
    };
    while let Some(field) = form
        .next_field()
        .await
        .map_err(|e| ApiError::parse(e.body_text(), None))?
    {
        let name = field.name().unwrap_or_default().to_string();
        let bytes = field.bytes().await.map_err(|e| ApiError::parse(e.body_text(), None))?;
        let text = decode(&bytes)
            .map_err(|e| {
                ApiError::parse(
                    format!("{name}: {e}"),
                    Some(SourcePosition {
                        file: Some(name.clone()),
                        line: e.pos.line,
                        col: e.pos.col,
                    }),
                )
            })?
            .to_string();
        let slot = match name.as_str() {
            "domain" => &mut req.domain,
            "problem" => &mut req.problem,
            "plan" => &mut req.plan,
            "fixture" => &mut req.fixture,
            _ => return Err(ApiError::parse(format!("unexpected form field `{name}`"), None)),
        };
        *slot = Some(text);
    }
    Ok(req)
}

pub async fn create_session(State(state): State<AppState>, req: Request) -> Result<impl IntoResponse, ApiError> {
    let multipart = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    let body = if multipart {
        let form = Multipart::from_request(req, &state)
            .await
            .map_err(|e| ApiError::parse(e.body_text(), None))?;
        read_multipart(form).await?
    } else {
        parse_body(Bytes::from_request(req, &state).await)?
    };
    let (problem, plan) = from_request(&state, body)?;
    let record = state.store.insert(DialogueSession::new(problem, plan));
    let session = record.session.lock().await;
    state.log(
        &record.id,
        "created",
        json!({ "problem": session.problem().name.to_string() }),
    );
    Ok((StatusCode::CREATED, Json(session_view(&record, &session))))
}

pub async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let record = lookup(&state, &id)?;
    let session = record.session.lock().await;
    Ok(Json(session_view(&record, &session)))
}

pub async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if !state.store.remove(&id) {
        return Err(ApiError::not_found(format!("session `{id}`")));
    }
    state.log(&id, "deleted", json!({}));
    Ok(StatusCode::NO_CONTENT)
}

pub async fn get_moves(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<PriorQuery>, QueryRejection>,
) -> Result<Json<MovesView>, ApiError> {
    let prior = query(q)?.prior;
    let record = lookup(&state, &id)?;
    let session = record.session.lock().await;
    let moves = if session.outcome().is_some() {
        Vec::new()
    } else {
        session
            .find_user_moves(prior.as_deref())
            .map_err(|_| ApiError::not_found(format!("argument `{}`", prior.as_deref().unwrap_or(""))))?
            .iter()
            .map(|cq| CqView::new(cq, session.problem(), session.trace()))
            .collect()
    };
    Ok(Json(MovesView { prior, moves }))
}

pub async fn play_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<PriorQuery>, QueryRejection>,
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<MoveResponse>, ApiError> {
    let query_prior = query(q)?.prior;
    let (mv, prior) = match parse_body::<MoveRequest>(body)? {
        MoveRequest::Wrapped { mv, prior } => (mv, prior.or(query_prior)),
        MoveRequest::Bare(mv) => (mv, query_prior),
    };
    let record = lookup(&state, &id)?;
    let mut session = record.session.try_lock().map_err(|_| busy())?;
    let before = session.history().len();
    let reply = session
        .advance(mv, prior.as_deref())
        .map_err(|e| ApiError::dialogue(&e, legal_views(&session, prior.as_deref())))?;
    let argument = match reply {
        Some(PlannerMove::Argue(arg)) => Some(*arg),
        _ => None,
    };
    let status = session.status();
    let entries: Vec<TranscriptEntry> = session.transcript().split_off(before);
    state.log(
        &id,
        "move",
        json!({ "move": mv.to_string(), "entries": entries, "status": status }),
    );
    Ok(Json(MoveResponse {
        mv: mv.to_string(),
        argument,
        status,
        legal_moves: legal_views(&session, None),
    }))
}

pub async fn get_graph(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<GraphQuery>, QueryRejection>,
) -> Result<Json<GraphJson>, ApiError> {
    let full = query(q)?.full;
    let record = lookup(&state, &id)?;
    let session = record.session.lock().await;
    let graph = if full {
        FullFramework::new(session.problem(), session.plan()).graph
    } else {
        session.session_aaf()
    };
    Ok(Json(to_json(&graph)))
}

pub async fn schema() -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/schema+json")], SCHEMA)
}

pub async fn no_route() -> ApiError {
    ApiError::not_found("route")
}

pub async fn bad_method() -> impl IntoResponse {
    let err = ApiError::new(ErrorCode::NotFound, "method not allowed on this route");
    (StatusCode::METHOD_NOT_ALLOWED, Json(err))
}
