use crate::error::ApiError;
use crate::runs::{RunSession, RunStatus};
use crate::store::{is_valid_id, Collection};
use crate::AppState;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::Json;
use ecoloom::compiler::{compile, emit_netlogo};
use ecoloom::engine::EngineConfig;
use ecoloom::exemplars::{load_exemplar, ExemplarId};
use ecoloom::export::to_csv;
use ecoloom::model::{generate_id, parse_model, serialize_model, validate_model, ConceptualModel, Format, ParamValue};
use ecoloom_eol::traits_to_parameters;
use futures_util::Stream;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::VecDeque;
use std::convert::Infallible;
use std::sync::Arc;
use tokio::sync::watch;

type ApiResult<T> = Result<T, ApiError>;

// ---- projects

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Project {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub model_ids: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct ProjectInput {
    name: String,
    #[serde(default)]
    model_ids: Vec<String>,
}

fn read_project(state: &AppState, id: &str) -> ApiResult<Project> {
    let doc = state
        .store()
        .get(Collection::Projects, id)?
        .ok_or_else(|| ApiError::not_found("project", id))?;
    serde_json::from_str(&doc).map_err(|e| ApiError::internal(format!("stored project `{id}` unreadable: {e}")))
}

fn write_project(state: &AppState, project: &Project) -> ApiResult<()> {
    let doc = serde_json::to_string_pretty(project).map_err(ApiError::internal)?;
    state.store().put(Collection::Projects, &project.id, &doc)?;
    Ok(())
}

fn check_model_ids(state: &AppState, ids: &[String]) -> ApiResult<()> {
    for id in ids {
        if state.store().get(Collection::Models, id)?.is_none() {
            return Err(ApiError::unprocessable(format!("project lists unknown model `{id}`")));
        }
    }
    Ok(())
}

pub async fn create_project(State(state): State<AppState>, Json(input): Json<ProjectInput>) -> ApiResult<Response> {
    let _guard = state.project_lock();
    check_model_ids(&state, &input.model_ids)?;
    let project = Project {
        id: generate_id(),
        name: input.name,
        model_ids: input.model_ids,
    };
    write_project(&state, &project)?;
    Ok((StatusCode::CREATED, Json(project)).into_response())
}

pub async fn list_projects(State(state): State<AppState>) -> ApiResult<Json<Vec<Project>>> {
    let ids = state.store().list(Collection::Projects)?;
    ids.iter()
        .map(|id| read_project(&state, id))
        .collect::<ApiResult<_>>()
        .map(Json)
}

pub async fn get_project(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Project>> {
    read_project(&state, &id).map(Json)
}

pub async fn update_project(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(input): Json<ProjectInput>,
) -> ApiResult<Json<Project>> {
    let _guard = state.project_lock();
    read_project(&state, &id)?;
    check_model_ids(&state, &input.model_ids)?;
    let project = Project {
        id,
        name: input.name,
        model_ids: input.model_ids,
    };
    write_project(&state, &project)?;
    Ok(Json(project))
}

pub async fn delete_project(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    let _guard = state.project_lock();
    if state.store().delete(Collection::Projects, &id)? {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found("project", &id))
    }
}

// ---- models

fn body_format(headers: &HeaderMap) -> Format {
    let xml = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains("xml"));
    if xml {
        Format::Xml
    } else {
        Format::Json
    }
}

fn model_value(model: &ConceptualModel) -> Value {
    serde_json::from_str(&serialize_model(model, Format::Json)).expect("serializer emits JSON")
}

pub(crate) fn read_model(state: &AppState, id: &str) -> ApiResult<ConceptualModel> {
    let doc = state
        .store()
        .get(Collection::Models, id)?
        .ok_or_else(|| ApiError::not_found("model", id))?;
    parse_model(&doc, Format::Json).map_err(|e| ApiError::internal(format!("stored model `{id}` unreadable: {e}")))
}

/// The only path by which models reach the store.
fn write_model(state: &AppState, model: &ConceptualModel) -> ApiResult<()> {
    if !is_valid_id(&model.id) {
        return Err(ApiError::bad_request(format!(
            "`{}` is not a usable model id",
            model.id
        )));
    }
    let report = validate_model(model);
    if !report.is_empty() {
        return Err(ApiError::invalid_model(&report));
    }
    let _guard = state.project_lock();
    let project =
        if model.project_id.is_empty() {
            None
        } else {
            Some(read_project(state, &model.project_id).map_err(|_| {
                ApiError::unprocessable(format!("model refers to unknown project `{}`", model.project_id))
            })?)
        };
    state
        .store()
        .put(Collection::Models, &model.id, &serialize_model(model, Format::Json))?;
    if let Some(mut project) = project {
        if !project.model_ids.contains(&model.id) {
            project.model_ids.push(model.id.clone());
            write_project(state, &project)?;
        }
    }
    Ok(())
}

pub async fn list_models(State(state): State<AppState>) -> ApiResult<Json<Vec<Value>>> {
    let mut out = Vec::new();
    for id in state.store().list(Collection::Models)? {
        let model = read_model(&state, &id)?;
        out.push(json!({ "id": model.id, "name": model.name, "project_id": model.project_id }));
    }
    Ok(Json(out))
}

pub async fn create_model(State(state): State<AppState>, headers: HeaderMap, body: String) -> ApiResult<Response> {
    let model = parse_model(&body, body_format(&headers))?;
    if state.store().get(Collection::Models, &model.id)?.is_some() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            format!("model `{}` already exists", model.id),
        ));
    }
    write_model(&state, &model)?;
    Ok((StatusCode::CREATED, Json(model_value(&model))).into_response())
}

pub async fn get_model(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    read_model(&state, &id).map(|m| Json(model_value(&m)))
}

pub async fn put_model(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: String,
) -> ApiResult<Json<Value>> {
    let mut model = parse_model(&body, body_format(&headers))?;
    model.id = id;
    write_model(&state, &model)?;
    Ok(Json(model_value(&model)))
}

pub async fn delete_model(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    let _guard = state.project_lock();
    if !state.store().delete(Collection::Models, &id)? {
        return Err(ApiError::not_found("model", &id));
    }
    for pid in state.store().list(Collection::Projects)? {
        let mut project = read_project(&state, &pid)?;
        let before = project.model_ids.len();
        project.model_ids.retain(|m| *m != id);
        if project.model_ids.len() != before {
            write_project(&state, &project)?;
        }
    }
    Ok(StatusCode::NO_CONTENT)
}

pub async fn copy_model(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let mut model = read_model(&state, &id)?;
    model.id = generate_id();
    model.name = format!("{} (copy)", model.name);
    write_model(&state, &model)?;
    Ok((StatusCode::CREATED, Json(model_value(&model))).into_response())
}

pub async fn validate_document(headers: HeaderMap, body: String) -> ApiResult<Json<Value>> {
    let model = parse_model(&body, body_format(&headers))?;
    let report = validate_model(&model);
    Ok(Json(
        json!({ "valid": report.is_empty(), "violations": report.violations }),
    ))
}

#[derive(Debug, Deserialize)]
pub struct EmitQuery {
    emit: Option<String>,
}

pub async fn compile_model(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<EmitQuery>,
) -> ApiResult<Response> {
    let model = read_model(&state, &id)?;
    let program = compile(&model).map_err(ApiError::unprocessable)?;
    match q.emit.as_deref().unwrap_or("netlogo") {
        "netlogo" => Ok((
            [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
            emit_netlogo(&program),
        )
            .into_response()),
        "ir" => Ok(Json(program).into_response()),
        other => Err(ApiError::bad_request(format!("unknown emit target `{other}`"))),
    }
}

// ---- exemplars

pub async fn list_exemplars() -> Json<Vec<Value>> {
    Json(
        ExemplarId::ALL
            .into_iter()
            .map(|id| {
                let (_, config) = load_exemplar(id);
                json!({ "id": id.slug(), "title": id.title(), "config": config })
            })
            .collect(),
    )
}

pub async fn model_from_exemplar(State(state): State<AppState>, Path(slug): Path<String>) -> ApiResult<Response> {
    let id: ExemplarId = slug.parse().map_err(|_| ApiError::not_found("exemplar", &slug))?;
    let (mut model, config) = load_exemplar(id);
    model.id = generate_id();
    write_model(&state, &model)?;
    Ok((
        StatusCode::CREATED,
        Json(json!({ "model": model_value(&model), "config": config })),
    )
        .into_response())
}

// ---- runs

#[derive(Debug, Deserialize)]
pub struct RunRequest {
    model_id: String,
    #[serde(default)]
    config: Option<Value>,
}

pub async fn create_run(State(state): State<AppState>, Json(req): Json<RunRequest>) -> ApiResult<Response> {
    let config: EngineConfig = match req.config {
        Some(v) => serde_json::from_value(v).map_err(|e| ApiError::unprocessable(format!("bad config: {e}")))?,
        None => EngineConfig::default(),
    };
    config.validate().map_err(ApiError::unprocessable)?;
    let model = read_model(&state, &req.model_id)?;
    let program = compile(&model).map_err(ApiError::unprocessable)?;
    let session = Arc::new(RunSession::new(generate_id(), model.id, config, &program));
    state.runs().insert(session.clone());
    let worker = session.clone();
    tokio::task::spawn_blocking(move || worker.execute(program));
    Ok((StatusCode::CREATED, Json(session.summary())).into_response())
}

pub async fn list_runs(State(state): State<AppState>) -> Json<Value> {
    Json(json!(state.runs().list()))
}

fn session(state: &AppState, id: &str) -> ApiResult<Arc<RunSession>> {
    state.runs().get(id).ok_or_else(|| ApiError::not_found("run", id))
}

pub async fn get_run(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    Ok(Json(json!(session(&state, &id)?.summary())))
}

pub async fn run_csv(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let run = session(&state, &id)?;
    let Some(series) = run.series() else {
        let summary = run.summary();
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            format!("run is {:?}, CSV is available once it is done", summary.status).to_lowercase(),
        ));
    };
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], to_csv(&series)).into_response())
}

struct Feed {
    run: Arc<RunSession>,
    changes: watch::Receiver<u64>,
    next: usize,
    queue: VecDeque<Event>,
    finished: bool,
}

/// Every record in tick order as `record` events, then one `done` or
/// `failed` event carrying the run summary.
fn record_stream(run: Arc<RunSession>) -> impl Stream<Item = Result<Event, Infallible>> {
    let feed = Feed {
        changes: run.subscribe(),
        run,
        next: 0,
        queue: VecDeque::new(),
        finished: false,
    };
    futures_util::stream::unfold(feed, |mut feed| async move {
        loop {
            if let Some(event) = feed.queue.pop_front() {
                return Some((Ok(event), feed));
            }
            if feed.finished {
                return None;
            }
            let snap = feed.run.snapshot(feed.next);
            for record in &snap.records {
                feed.next += 1;
                feed.queue.push_back(
                    Event::default()
                        .event("record")
                        .data(serde_json::to_string(record).unwrap()),
                );
            }
            if !feed.queue.is_empty() {
                continue;
            }
            if snap.status.is_final() {
                let name = if snap.status == RunStatus::Done {
                    "done"
                } else {
                    "failed"
                };
                let summary = serde_json::to_string(&feed.run.summary()).unwrap();
                feed.queue.push_back(Event::default().event(name).data(summary));
                feed.finished = true;
            } else if feed.changes.changed().await.is_err() {
                feed.finished = true;
            }
        }
    })
}

pub async fn stream_run(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let run = session(&state, &id)?;
    Ok(Sse::new(record_stream(run))
        .keep_alive(KeepAlive::default())
        .into_response())
}

// ---- species lookup

#[derive(Debug, Deserialize)]
pub struct SearchQuery {
    q: String,
}

#[derive(Debug, Deserialize)]
pub struct TraitsQuery {
    taxon: String,
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(ApiError::internal)
}

pub async fn eol_search(State(state): State<AppState>, Query(q): Query<SearchQuery>) -> ApiResult<Json<Value>> {
    let client = state.eol().clone();
    let found = blocking(move || client.search_species(&q.q)).await??;
    Ok(Json(json!(found)))
}

pub async fn eol_traits(State(state): State<AppState>, Query(q): Query<TraitsQuery>) -> ApiResult<Json<Value>> {
    let client = state.eol().clone();
    let taxon = q.taxon.clone();
    let traits = blocking(move || client.fetch_traits(&taxon)).await??;
    let estimate = traits_to_parameters(&traits);
    let suggested: Map<String, Value> = estimate
        .params
        .entries()
        .into_iter()
        .map(|(k, v)| {
            let v = match v {
                ParamValue::Real(x) => json!(x),
                ParamValue::Count(n) => json!(n),
            };
            (k.to_string(), v)
        })
        .collect();
    Ok(Json(json!({
        "taxon_id": q.taxon,
        "traits": traits,
        "suggested": suggested,
        "estimates": estimate.estimates,
        "notes": estimate.notes,
    })))
}
