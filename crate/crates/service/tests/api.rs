use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use ecoloom::engine::PopulationRecord;
use ecoloom::exemplars::ExemplarId;
use ecoloom_eol::{bundled_fixtures, EolClient};
use ecoloom_service::{router, AppState, FileStore};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(AppState::in_memory(EolClient::with_fixtures(bundled_fixtures())))
}

async fn send(app: &Router, method: Method, uri: &str, body: Option<String>) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header(header::CONTENT_TYPE, "application/json");
    }
    let req = req.body(body.map(Body::from).unwrap_or_else(Body::empty)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn json_of(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, text) = send(app, method, uri, body.map(|b| b.to_string())).await;
    (status, serde_json::from_str(&text).unwrap_or(Value::String(text)))
}

fn predator_prey() -> String {
    ExemplarId::PredatorPrey.document().to_string()
}

async fn create_model(app: &Router, doc: String) -> String {
    let (status, text) = send(app, Method::POST, "/models", Some(doc)).await;
    assert_eq!(status, StatusCode::CREATED, "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    v["id"].as_str().unwrap().to_string()
}

/// Parses a server-sent event body into (event, data) pairs.
fn events(body: &str) -> Vec<(String, String)> {
    body.split("\n\n")
        .filter_map(|block| {
            let mut name = None;
            let mut data = None;
            for line in block.lines() {
                if let Some(v) = line.strip_prefix("event:") {
                    name = Some(v.trim().to_string());
                } else if let Some(v) = line.strip_prefix("data:") {
                    data = Some(v.trim().to_string());
                }
            }
            Some((name?, data?))
        })
        .collect()
}

async fn streamed(app: &Router, model_id: &str, config: Value) -> Vec<PopulationRecord> {
    let (status, run) = json_of(
        app,
        Method::POST,
        "/runs",
        Some(json!({ "model_id": model_id, "config": config })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{run}");
    let run_id = run["id"].as_str().unwrap();
    let (status, body) = send(app, Method::GET, &format!("/runs/{run_id}/stream"), None).await;
    assert_eq!(status, StatusCode::OK);
    let evs = events(&body);
    assert_eq!(evs.last().unwrap().0, "done", "{body}");
    evs.iter()
        .filter(|(n, _)| n == "record")
        .map(|(_, d)| serde_json::from_str(d).unwrap())
        .collect()
}

#[tokio::test]
async fn unknown_model_is_404() {
    let app = app();
    for (method, uri) in [
        (Method::GET, "/models/nope"),
        (Method::DELETE, "/models/nope"),
        (Method::POST, "/models/nope/copy"),
        (Method::POST, "/models/nope/compile"),
        (Method::GET, "/runs/nope"),
        (Method::GET, "/runs/nope/stream"),
        (Method::GET, "/projects/nope"),
        (Method::POST, "/models/from-exemplar/nope"),
    ] {
        let (status, _) = send(&app, method.clone(), uri, None).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{method} {uri}");
    }
}

#[tokio::test]
async fn stream_starts_with_the_initial_populations() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    let records = streamed(&app, &id, json!({ "rng_seed": 7, "max_ticks": 10 })).await;
    assert_eq!(records.len(), 11);
    assert_eq!(records[0].tick, 0);
    assert_eq!(records[0].counts, vec![200.0, 1200.0, 1000.0]);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.tick as usize, i);
    }
}

#[tokio::test]
async fn identical_runs_stream_identical_records() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    let config = json!({ "rng_seed": 11, "max_ticks": 24 });
    let (a, b) = tokio::join!(streamed(&app, &id, config.clone()), streamed(&app, &id, config.clone()));
    assert_eq!(a, b);
    let c = streamed(&app, &id, json!({ "rng_seed": 12, "max_ticks": 24 })).await;
    assert_ne!(a, c);
}

#[tokio::test]
async fn csv_matches_streamed_records() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    let records = streamed(&app, &id, json!({ "rng_seed": 7, "max_ticks": 11 })).await;
    let (_, runs) = json_of(&app, Method::GET, "/runs", None).await;
    let run_id = runs[0]["id"].as_str().unwrap();
    let (status, csv) = send(&app, Method::GET, &format!("/runs/{run_id}/csv"), None).await;
    assert_eq!(status, StatusCode::OK);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], "Month,Wolf,Sheep,Grass");
    assert_eq!(lines[1], "0,200,1200,1000");
    let last = records.last().unwrap();
    let expected: Vec<String> = last.counts.iter().map(|c| (c.round() as i64).to_string()).collect();
    assert_eq!(lines[12], format!("11,{}", expected.join(",")));
}

#[tokio::test]
async fn invalid_models_are_never_stored() {
    let app = app();
    let mut doc: Value = serde_json::from_str(&predator_prey()).unwrap();
    doc["id"] = json!("broken");
    doc["components"][1]["params"]["reproductive_interval"] = json!(0);
    let (status, body) = json_of(&app, Method::POST, "/models", Some(doc)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    assert!(!body["violations"].as_array().unwrap().is_empty());
    let (status, _) = send(&app, Method::GET, "/models/broken", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, _) = send(&app, Method::POST, "/models", Some("{not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, listing) = json_of(&app, Method::GET, "/models", None).await;
    assert_eq!(listing, json!([]));
}

#[tokio::test]
async fn model_crud_and_copy() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    let (status, _) = send(&app, Method::POST, "/models", Some(predator_prey())).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (_, mut model) = json_of(&app, Method::GET, &format!("/models/{id}"), None).await;
    model["name"] = json!("Renamed");
    let (status, updated) = json_of(&app, Method::PUT, &format!("/models/{id}"), Some(model)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(updated["name"], "Renamed");

    let (status, copy) = json_of(&app, Method::POST, &format!("/models/{id}/copy"), None).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_ne!(copy["id"], json!(id));
    assert_eq!(copy["name"], "Renamed (copy)");
    assert_eq!(copy["components"], updated["components"]);

    let (status, _) = send(&app, Method::DELETE, &format!("/models/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (_, listing) = json_of(&app, Method::GET, "/models", None).await;
    assert_eq!(listing.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn projects_group_existing_models() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    let (status, _) = json_of(
        &app,
        Method::POST,
        "/projects",
        Some(json!({ "name": "Class", "model_ids": ["ghost"] })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, project) = json_of(
        &app,
        Method::POST,
        "/projects",
        Some(json!({ "name": "Class", "model_ids": [id] })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    let pid = project["id"].as_str().unwrap().to_string();

    let mut doc: Value = serde_json::from_str(&predator_prey()).unwrap();
    doc["id"] = json!("second");
    doc["project_id"] = json!(pid);
    create_model(&app, doc.to_string()).await;
    let (_, project) = json_of(&app, Method::GET, &format!("/projects/{pid}"), None).await;
    assert_eq!(project["model_ids"], json!([id, "second"]));

    send(&app, Method::DELETE, &format!("/models/{id}"), None).await;
    let (_, project) = json_of(&app, Method::GET, &format!("/projects/{pid}"), None).await;
    assert_eq!(project["model_ids"], json!(["second"]));
}

#[tokio::test]
async fn exemplars_instantiate_as_new_models() {
    let app = app();
    let (_, list) = json_of(&app, Method::GET, "/exemplars", None).await;
    assert_eq!(list.as_array().unwrap().len(), 4);
    let (status, made) = json_of(&app, Method::POST, "/models/from-exemplar/predator-prey", None).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(made["config"]["rng_seed"], 7);
    let id = made["model"]["id"].as_str().unwrap();
    let (status, _) = send(&app, Method::GET, &format!("/models/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn compile_emits_netlogo_or_ir() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    let (status, code) = send(&app, Method::POST, &format!("/models/{id}/compile?emit=netlogo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(code.contains("to go"));
    assert!(
        code.contains("breed [wolves wolf]") || code.contains("breed ["),
        "{code}"
    );
    let (status, ir) = json_of(&app, Method::POST, &format!("/models/{id}/compile?emit=ir"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ir["breeds"].as_array().unwrap().len(), 3);
    let (status, _) = send(&app, Method::POST, &format!("/models/{id}/compile?emit=java"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn bad_run_config_is_refused() {
    let app = app();
    let id = create_model(&app, predator_prey()).await;
    for config in [json!({ "grid_size": 0 }), json!({ "ticks": 5 })] {
        let (status, _) = json_of(
            &app,
            Method::POST,
            "/runs",
            Some(json!({ "model_id": id, "config": config })),
        )
        .await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    }
}

#[tokio::test]
async fn validate_reports_without_storing() {
    let app = app();
    let (status, report) = json_of(&app, Method::POST, "/validate", Some(json!({ "name": "empty" }))).await;
    assert_eq!(status, StatusCode::OK, "{report}");
    assert_eq!(report["valid"], true);
    let (_, listing) = json_of(&app, Method::GET, "/models", None).await;
    assert_eq!(listing, json!([]));
}

#[tokio::test]
async fn species_lookup_is_proxied() {
    let app = app();
    let (status, found) = json_of(&app, Method::GET, "/eol/search?q=gray%20wolf", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(found[0]["scientific_name"], "Canis lupus");
    let (status, traits) = json_of(&app, Method::GET, "/eol/traits?taxon=328607", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(traits["suggested"]["lifespan"], 180);
    assert_eq!(traits["suggested"]["body_mass"], 30.0);
    let (status, _) = json_of(&app, Method::GET, "/eol/traits?taxon=404404", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn file_store_survives_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let make = || {
        router(AppState::new(
            FileStore::open(dir.path()).unwrap(),
            EolClient::with_fixtures(bundled_fixtures()),
        ))
    };
    let id = create_model(&make(), predator_prey()).await;
    let (status, model) = json_of(&make(), Method::GET, &format!("/models/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(model["components"].as_array().unwrap().len(), 3);
}
