//! Read-only HTTP service over a directory of scene bundles, plus budgeted `/compute`.

use crate::bundle::{frame_for, FamilyInput, SceneBundle, SCHEMA_VERSION};
use crate::thread_cap;
use axum::body::{Body, Bytes};
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::Response;
use axum::routing::{get, post};
use axum::Router;
use blowup_core::rational::parse_rational;
use blowup_core::Rational;
use blowup_geometry::TorusParams;
use blowup_model::BlowupSpec;
use serde::Deserialize;
use serde_json::json;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;
use std::time::Duration;
use tokio::sync::Semaphore;

pub const SCHEMA_HEADER: &str = "x-schema-version";

struct Loaded {
    bundle: SceneBundle,
    json: Bytes,
}

#[derive(Clone)]
pub struct AppState {
    bundles: Arc<BTreeMap<String, Loaded>>,
    budget: Duration,
    workers: Arc<Semaphore>,
}

impl AppState {
    pub fn new(bundles: BTreeMap<String, SceneBundle>, budget: Duration, workers: usize) -> Self {
        let bundles = bundles
            .into_iter()
            .map(|(id, b)| {
                let json = Bytes::from(serde_json::to_vec(&b).expect("bundle serializes"));
                (id, Loaded { bundle: b, json })
            })
            .collect();
        AppState { bundles: Arc::new(bundles), budget, workers: Arc::new(Semaphore::new(workers.max(1))) }
    }
}

/// Bundles in `dir`: every `*.json` that parses as a bundle (id = file stem) and every
/// `<id>/bundle.json`.
pub fn load_dir(dir: &Path) -> Result<BTreeMap<String, SceneBundle>, String> {
    let mut out = BTreeMap::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?.flatten().collect();
    entries.sort_by_key(|e| e.path());
    for e in entries {
        let path = e.path();
        let (id, file) = if path.is_dir() {
            (e.file_name().to_string_lossy().into_owned(), path.join("bundle.json"))
        } else if path.extension().is_some_and(|x| x == "json") {
            (path.file_stem().unwrap_or_default().to_string_lossy().into_owned(), path.clone())
        } else {
            continue;
        };
        let Ok(text) = std::fs::read_to_string(&file) else { continue };
        if let Ok(b) = serde_json::from_str::<SceneBundle>(&text) {
            out.insert(id, b);
        }
    }
    Ok(out)
}

fn with_headers(status: StatusCode, content_type: &'static str, body: impl Into<Body>) -> Response {
    let mut r = Response::new(body.into());
    *r.status_mut() = status;
    r.headers_mut().insert(header::CONTENT_TYPE, HeaderValue::from_static(content_type));
    r.headers_mut().insert(SCHEMA_HEADER, HeaderValue::from(SCHEMA_VERSION));
    r
}

fn json_response(status: StatusCode, v: &serde_json::Value) -> Response {
    with_headers(status, "application/json", serde_json::to_vec(v).expect("json"))
}

fn error(status: StatusCode, msg: impl std::fmt::Display) -> Response {
    json_response(status, &json!({ "schema_version": SCHEMA_VERSION, "error": msg.to_string() }))
}

async fn health() -> Response {
    json_response(StatusCode::OK, &json!({ "schema_version": SCHEMA_VERSION, "status": "ok" }))
}

async fn list(State(s): State<AppState>) -> Response {
    let items: Vec<_> = s
        .bundles
        .iter()
        .map(|(id, l)| json!({ "id": id, "frames": l.bundle.frames.len(),
                               "t": l.bundle.frames.iter().map(|f| f.t).collect::<Vec<_>>() }))
        .collect();
    json_response(StatusCode::OK, &json!({ "schema_version": SCHEMA_VERSION, "bundles": items }))
}

async fn bundle(State(s): State<AppState>, UrlPath(id): UrlPath<String>) -> Response {
    match s.bundles.get(&id) {
        Some(l) => with_headers(StatusCode::OK, "application/json", l.json.clone()),
        None => error(StatusCode::NOT_FOUND, format!("unknown bundle {id}")),
    }
}

async fn frame_mesh(
    State(s): State<AppState>,
    UrlPath((id, k)): UrlPath<(String, usize)>,
    Query(q): Query<HashMap<String, String>>,
) -> Response {
    let Some(l) = s.bundles.get(&id) else {
        return error(StatusCode::NOT_FOUND, format!("unknown bundle {id}"));
    };
    let Some(f) = l.bundle.frames.get(k) else {
        return error(StatusCode::NOT_FOUND, format!("bundle {id} has no frame {k}"));
    };
    match q.get("format").map(String::as_str) {
        Some("obj") => with_headers(StatusCode::OK, "model/obj", f.mesh.to_obj()),
        None | Some("json") => {
            json_response(StatusCode::OK, &json!({ "schema_version": SCHEMA_VERSION, "t": f.t, "mesh": f.mesh }))
        }
        Some(other) => error(StatusCode::BAD_REQUEST, format!("unknown format {other}")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComputeRequest {
    spec: BlowupSpec,
    #[serde(default)]
    family: Option<FamilyInput>,
    #[serde(default)]
    t: Option<serde_json::Value>,
    #[serde(default)]
    rho: Option<String>,
    #[serde(default)]
    r: Option<String>,
    #[serde(default)]
    resolution: Option<u32>,
}

fn parse_t(v: &Option<serde_json::Value>) -> Result<Rational, String> {
    let t = match v {
        None => Rational::from_integer(0.into()),
        Some(serde_json::Value::String(s)) => parse_rational(s).ok_or("t is not a rational number")?,
        Some(serde_json::Value::Number(n)) => {
            parse_rational(&n.to_string()).ok_or("t is not a finite number")?
        }
        _ => return Err("t must be a string or number".into()),
    };
    if t < Rational::from_integer(0.into()) || t > Rational::from_integer(1.into()) {
        return Err("t must lie in [0, 1]".into());
    }
    Ok(t)
}

/// Upper bound on the mesh level accepted by `/compute`.
const MAX_COMPUTE_RESOLUTION: u32 = 7;

fn compute(req: ComputeRequest) -> Result<serde_json::Value, String> {
    let t = parse_t(&req.t)?;
    let spec = req.spec.verify().map_err(|e| e.to_string())?;
    let (drho, _) = crate::bundle::default_torus(&spec);
    let rho = match &req.rho {
        Some(s) => parse_rational(s).ok_or("rho is not a rational number")?,
        None => drho,
    };
    let r = match &req.r {
        Some(s) => parse_rational(s).ok_or("r is not a rational number")?,
        None => &rho * Rational::from_integer(2.into()),
    };
    let tp = TorusParams::new(rho, r).map_err(|e| e.to_string())?;
    tp.check_disk(&spec.disk).map_err(|e| e.to_string())?;
    let resolution = req.resolution.unwrap_or(5).min(MAX_COMPUTE_RESOLUTION);
    let frame = frame_for(&spec, req.family.as_ref(), &t, &tp, resolution).map_err(|e| e.to_string())?;
    Ok(json!({ "schema_version": SCHEMA_VERSION, "torus": tp, "frame": frame }))
}

async fn post_compute(State(s): State<AppState>, body: Bytes) -> Response {
    let req: ComputeRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e),
    };
    let workers = s.workers.clone();
    let job = async move {
        let permit = workers.acquire_owned().await.expect("semaphore open");
        tokio::task::spawn_blocking(move || {
            let _permit = permit;
            compute(req)
        })
        .await
    };
    match tokio::time::timeout(s.budget, job).await {
        Err(_) => error(StatusCode::SERVICE_UNAVAILABLE, "compute budget exceeded"),
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
        Ok(Ok(Err(msg))) => error(StatusCode::UNPROCESSABLE_ENTITY, msg),
        Ok(Ok(Ok(v))) => json_response(StatusCode::OK, &v),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/bundles", get(list))
        .route("/bundle/{id}", get(bundle))
        .route("/bundle/{id}/frame/{k}/mesh", get(frame_mesh))
        .route("/compute", post(post_compute))
        .with_state(state)
}

pub fn serve_blocking(dir: &Path, port: u16, budget_ms: u64) -> Result<(), String> {
    let bundles = load_dir(dir)?;
    let workers = thread_cap().unwrap_or(2);
    let state = AppState::new(bundles, Duration::from_millis(budget_ms), workers);
    let rt = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(workers)
        .enable_all()
        .build()
        .map_err(|e| e.to_string())?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await.map_err(|e| e.to_string())?;
        eprintln!("serving {} on http://{}", dir.display(), listener.local_addr().map_err(|e| e.to_string())?);
        axum::serve(listener, router(state)).await.map_err(|e| e.to_string())
    })
}
