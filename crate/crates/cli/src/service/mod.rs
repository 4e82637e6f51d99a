//! HTTP session service.
//!
//! | method | path                      |                                   |
//! |--------|---------------------------|-----------------------------------|
//! | POST   | `/sessions`               | create from files or a fixture    |
//! | GET    | `/sessions/{id}`          | status and transcript             |
//! | DELETE | `/sessions/{id}`          |                                   |
//! | GET    | `/sessions/{id}/moves`    | legal questions, `?prior=<argId>` |
//! | POST   | `/sessions/{id}/move`     | play a question or `none`         |
//! | GET    | `/sessions/{id}/graph`    | session graph, `?full=true`       |
//! | GET    | `/schema`                 | JSON schema of every response     |

pub mod api;
pub mod error;
pub mod store;

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime};

use axum::http::{header, HeaderValue, Method};
use axum::routing::{get, post};
use axum::Router;
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, CorsLayer};

use store::{unix_seconds, SessionStore};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub ttl: Duration,
    pub max_sessions: usize,
    pub fixture_dir: Option<PathBuf>,
    /// Append-only JSON-lines record of session events.
    pub transcript_log: Option<PathBuf>,
    /// Origins allowed by CORS; empty disables the layer.
    pub cors_origins: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            ttl: Duration::from_secs(3600),
            max_sessions: 1000,
            fixture_dir: None,
            transcript_log: None,
            cors_origins: Vec::new(),
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub config: Arc<ServiceConfig>,
    log: Option<Arc<Mutex<File>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> io::Result<Self> {
        let log = match &config.transcript_log {
            Some(path) => Some(Arc::new(Mutex::new(
                OpenOptions::new().create(true).append(true).open(path)?,
            ))),
            None => None,
        };
        Ok(AppState {
            store: Arc::new(SessionStore::new(config.ttl, config.max_sessions)),
            config: Arc::new(config),
            log,
        })
    }

    fn log(&self, session: &str, event: &str, detail: Value) {
        let Some(log) = &self.log else { return };
        let mut line = json!({
            "time": unix_seconds(SystemTime::now()),
            "session": session,
            "event": event,
        });
        if let (Value::Object(line), Value::Object(detail)) = (&mut line, detail) {
            line.extend(detail);
        }
        let mut file = log.lock().unwrap();
        if let Err(e) = writeln!(file, "{line}") {
            eprintln!("transcript log: {e}");
        }
    }
}

pub fn router(state: AppState) -> Router {
    let cors = cors_layer(&state.config.cors_origins);
    let router = Router::new()
        .route("/schema", get(api::schema))
        .route("/sessions", post(api::create_session))
        .route("/sessions/{id}", get(api::get_session).delete(api::delete_session))
        .route("/sessions/{id}/moves", get(api::get_moves))
        .route("/sessions/{id}/move", post(api::play_move))
        .route("/sessions/{id}/graph", get(api::get_graph))
        .fallback(api::no_route)
        .method_not_allowed_fallback(api::bad_method)
        .with_state(state);
    match cors {
        Some(layer) => router.layer(layer),
        None => router,
    }
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    let origins: Vec<HeaderValue> = origins.iter().filter_map(|o| o.parse().ok()).collect();
    if origins.is_empty() {
        return None;
    }
    Some(
        CorsLayer::new()
            .allow_origin(AllowOrigin::list(origins))
            .allow_methods([Method::GET, Method::POST, Method::DELETE])
            .allow_headers([header::CONTENT_TYPE]),
    )
}

/// Serves until ctrl-c, sweeping expired sessions in the background.
pub async fn serve(state: AppState, listener: TcpListener) -> io::Result<()> {
    let store = state.store.clone();
    let period = (store.ttl() / 2).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            store.evict_expired();
        }
    });
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
