//! HTTP facade over ecoloom: model storage, compilation, streamed runs and
//! species lookup.
//!
//! | method | path | |
//! |---|---|---|
//! | POST, GET | `/projects` | |
//! | GET, PUT, DELETE | `/projects/{id}` | |
//! | POST, GET | `/models` | body is a model document, validated before storing |
//! | GET, PUT, DELETE | `/models/{id}` | |
//! | POST | `/models/{id}/copy` | |
//! | POST | `/models/{id}/compile?emit=netlogo\|ir` | |
//! | POST | `/models/from-exemplar/{exemplar}` | |
//! | POST | `/validate` | report only, nothing stored |
//! | GET | `/exemplars` | |
//! | POST, GET | `/runs` | body `{"model_id": .., "config": {..}}` |
//! | GET | `/runs/{id}` | status |
//! | GET | `/runs/{id}/stream` | server-sent events, one `record` per tick |
//! | GET | `/runs/{id}/csv` | after the run is done |
//! | GET | `/eol/search?q=` | |
//! | GET | `/eol/traits?taxon=` | traits plus suggested parameters |

mod error;
mod handlers;
pub mod runs;
pub mod store;

pub use error::ApiError;
pub use handlers::Project;
pub use store::{Collection, DocumentStore, FileStore, MemoryStore, StoreError};

use axum::routing::{get, post};
use axum::Router;
use ecoloom_eol::EolClient;
use runs::RunRegistry;
use std::net::{Ipv4Addr, SocketAddr};
use std::sync::{Arc, Mutex, MutexGuard};

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    store: Box<dyn DocumentStore>,
    runs: RunRegistry,
    eol: EolClient,
    // project documents are read-modify-write
    projects: Mutex<()>,
}

impl AppState {
    pub fn new(store: impl DocumentStore + 'static, eol: EolClient) -> Self {
        Self {
            inner: Arc::new(Inner {
                store: Box::new(store),
                runs: RunRegistry::default(),
                eol,
                projects: Mutex::new(()),
            }),
        }
    }

    pub fn in_memory(eol: EolClient) -> Self {
        Self::new(MemoryStore::new(), eol)
    }

    pub fn store(&self) -> &dyn DocumentStore {
        self.inner.store.as_ref()
    }

    pub fn runs(&self) -> &RunRegistry {
        &self.inner.runs
    }

    pub fn eol(&self) -> &EolClient {
        &self.inner.eol
    }

    fn project_lock(&self) -> MutexGuard<'_, ()> {
        self.inner.projects.lock().unwrap_or_else(|p| p.into_inner())
    }
}

pub fn router(state: AppState) -> Router {
    use handlers::*;
    Router::new()
        .route("/projects", post(create_project).get(list_projects))
        .route(
            "/projects/{id}",
            get(get_project).put(update_project).delete(delete_project),
        )
        .route("/models", post(create_model).get(list_models))
        .route("/models/{id}", get(get_model).put(put_model).delete(delete_model))
        .route("/models/{id}/copy", post(copy_model))
        .route("/models/{id}/compile", post(compile_model))
        .route("/models/from-exemplar/{exemplar}", post(model_from_exemplar))
        .route("/validate", post(validate_document))
        .route("/exemplars", get(list_exemplars))
        .route("/runs", post(create_run).get(list_runs))
        .route("/runs/{id}", get(get_run))
        .route("/runs/{id}/stream", get(stream_run))
        .route("/runs/{id}/csv", get(run_csv))
        .route("/eol/search", get(eol_search))
        .route("/eol/traits", get(eol_traits))
        .with_state(state)
}

/// Loopback only; there is no authentication.
pub fn local_address(port: u16) -> SocketAddr {
    SocketAddr::from((Ipv4Addr::LOCALHOST, port))
}

pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}
