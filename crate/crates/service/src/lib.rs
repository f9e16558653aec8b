//! JSON over HTTP access to linkage analyses.
//!
//! Uploaded linkages are identified by the SHA-256 of their canonical JSON
//! and kept in a bounded LRU cache. Each entry is analyzed at most once, on
//! first use, off the async runtime.

use std::net::SocketAddr;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cayrs_core::{
    parse_literal, Analysis, ContinuousMotion, Error, LinkageSpec, Realization, RealizationType, TdLinkage, Tolerances,
    Uniform, VertexPair,
};
use lru::LruCache;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const DEFAULT_CAPACITY: usize = 64;
const MAX_SAMPLES: usize = 100_000;

/// A JSON error response.
#[derive(Clone, Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Value,
}

impl ApiError {
    fn bad_request(name: &str, message: impl Into<String>) -> Self {
        Self { status: StatusCode::BAD_REQUEST, body: json!({ "error": name, "message": message.into() }) }
    }

    fn from_core(err: &Error, tdl: Option<&TdLinkage>) -> Self {
        let status = if err.is_input_error() { StatusCode::BAD_REQUEST } else { StatusCode::UNPROCESSABLE_ENTITY };
        Self { status, body: err.to_json(tdl) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::bad_request("ParseError", r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        Self::bad_request("InvalidQuery", r.body_text())
    }
}

type ApiResult<T = Json<Value>> = Result<T, ApiError>;

struct Entry {
    linkage: TdLinkage,
    analysis: OnceLock<Result<Arc<Analysis>, ApiError>>,
}

/// Shared state: the session cache and the tolerances every analysis uses.
#[derive(Clone)]
pub struct AppState {
    cache: Arc<Mutex<LruCache<String, Arc<Entry>>>>,
    tol: Arc<Tolerances>,
}

impl AppState {
    pub fn new(tol: Tolerances, capacity: usize) -> Self {
        let capacity = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        Self { cache: Arc::new(Mutex::new(LruCache::new(capacity))), tol: Arc::new(tol) }
    }

    fn entry(&self, id: &str) -> ApiResult<Arc<Entry>> {
        self.cache.lock().expect("cache lock").get(id).cloned().ok_or_else(|| ApiError {
            status: StatusCode::NOT_FOUND,
            body: json!({ "error": "UnknownLinkage", "message": format!("no linkage with id {id}") }),
        })
    }

    async fn analysis(&self, id: &str) -> ApiResult<Arc<Analysis>> {
        let entry = self.entry(id)?;
        let tol = self.tol.clone();
        blocking(move || {
            entry
                .analysis
                .get_or_init(|| {
                    Analysis::new(entry.linkage.clone(), &tol)
                        .map(Arc::new)
                        .map_err(|e| ApiError::from_core(&e, Some(&entry.linkage)))
                })
                .clone()
        })
        .await
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(Tolerances::default(), DEFAULT_CAPACITY)
    }
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| {
        Err(ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: json!({ "error": "Internal", "message": e.to_string() }),
        })
    })
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/linkages", post(upload))
        .route("/linkages/{id}/ccs", get(ccs))
        .route("/linkages/{id}/components", get(components))
        .route("/linkages/{id}/components/{i}/samples", get(samples))
        .route("/linkages/{id}/components/{i}/curve3d", get(curve3d))
        .route("/linkages/{id}/components/{i}/trace", get(trace))
        .route("/linkages/{id}/realization", get(realization))
        .route("/linkages/{id}/path", post(path))
        .route("/linkages/{id}/closest", post(closest))
        .with_state(state)
}

/// Serves the API on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

/// Content hash of a linkage upload. Object keys are sorted, so formatting
/// and key order do not matter.
pub fn content_id(upload: &Value) -> String {
    let canonical = serde_json::to_vec(upload).expect("json value serializes");
    hex::encode(Sha256::digest(canonical))
}

async fn upload(State(state): State<AppState>, body: Result<Json<Value>, JsonRejection>) -> ApiResult {
    let Json(body) = body?;
    let id = content_id(&body);
    let cached = state.cache.lock().expect("cache lock").get(&id).cloned();
    let entry = match cached {
        Some(entry) => entry,
        None => {
            let tol = state.tol.clone();
            let linkage = blocking(move || {
                let spec: LinkageSpec =
                    serde_json::from_value(body).map_err(|e| ApiError::from_core(&Error::Parse(e), None))?;
                TdLinkage::from_spec(&spec, &tol).map_err(|e| ApiError::from_core(&e, None))
            })
            .await?;
            let entry = Arc::new(Entry { linkage, analysis: OnceLock::new() });
            state.cache.lock().expect("cache lock").get_or_insert(id.clone(), || entry).clone()
        }
    };
    let mut out = entry.linkage.summary(&state.tol);
    out["id"] = id.into();
    out["baseNonedges"] = json!(entry.linkage.base_nonedge_names());
    Ok(Json(out))
}

async fn ccs(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    Ok(Json(state.analysis(&id).await?.ccs.to_json()))
}

async fn components(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let a = state.analysis(&id).await?;
    Ok(Json(
        a.components()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut out = c.summary();
                out["index"] = i.into();
                out
            })
            .collect(),
    ))
}

fn component(a: &Analysis, i: usize) -> ApiResult<&ContinuousMotion> {
    a.component(i).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))
}

#[derive(Deserialize)]
struct SamplesQuery {
    n: Option<usize>,
}

fn sampler(n: Option<usize>) -> ApiResult<Uniform> {
    match n {
        None => Ok(Uniform::default()),
        Some(n) if (2..=MAX_SAMPLES).contains(&n) => Ok(Uniform { per_leg: n }),
        Some(n) => Err(ApiError::bad_request("InvalidQuery", format!("n must lie in 2..={MAX_SAMPLES}, got {n}"))),
    }
}

async fn samples(
    State(state): State<AppState>,
    Path((id, i)): Path<(String, usize)>,
    query: Result<Query<SamplesQuery>, QueryRejection>,
) -> ApiResult {
    let Query(query) = query?;
    let sampler = sampler(query.n)?;
    let a = state.analysis(&id).await?;
    blocking(move || {
        let c = component(&a, i)?;
        let list: Vec<Value> = a
            .sample(c, &sampler)
            .into_iter()
            .map(|s| {
                let mut r = s.realization.to_json(&a.linkage);
                r["leg"] = s.leg.into();
                r
            })
            .collect();
        Ok(Json(list.into()))
    })
    .await
}

fn pair(a: &Analysis, text: &str) -> ApiResult<VertexPair> {
    let (u, v) = text
        .split_once(',')
        .ok_or_else(|| ApiError::bad_request("InvalidQuery", format!("expected a vertex pair u,v, got {text:?}")))?;
    a.linkage.pair_by_names(u.trim(), v.trim()).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))
}

#[derive(Deserialize)]
struct CurveQuery {
    f1: String,
    f2: String,
    f3: String,
    n: Option<usize>,
}

async fn curve3d(
    State(state): State<AppState>,
    Path((id, i)): Path<(String, usize)>,
    query: Result<Query<CurveQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = query?;
    let sampler = sampler(q.n)?;
    let a = state.analysis(&id).await?;
    blocking(move || {
        let c = component(&a, i)?;
        let nonedges = [pair(&a, &q.f1)?, pair(&a, &q.f2)?, pair(&a, &q.f3)?];
        let curve = a.curve_3d(c, nonedges, &sampler).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))?;
        Ok(Json(serde_json::to_value(curve).expect("curve serializes")))
    })
    .await
}

#[derive(Deserialize)]
struct TraceQuery {
    vertices: String,
    n: Option<usize>,
}

async fn trace(
    State(state): State<AppState>,
    Path((id, i)): Path<(String, usize)>,
    query: Result<Query<TraceQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = query?;
    let sampler = sampler(q.n)?;
    let a = state.analysis(&id).await?;
    blocking(move || {
        let c = component(&a, i)?;
        let vertices: Vec<&str> = q.vertices.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
        let curves = a.traced_curves(c, &vertices, &sampler).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))?;
        Ok(Json(serde_json::to_value(curves).expect("curves serialize")))
    })
    .await
}

#[derive(Deserialize)]
struct RealizationQuery {
    length: f64,
    #[serde(rename = "type")]
    rtype: String,
}

fn realize(a: &Analysis, length: f64, rtype: &str) -> ApiResult<Realization> {
    let core = |e: Error| ApiError::from_core(&e, Some(&a.linkage));
    let rtype = RealizationType::parse(rtype).map_err(core)?;
    a.realize(length, &rtype).map_err(core)
}

async fn realization(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<RealizationQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = query?;
    let a = state.analysis(&id).await?;
    let r = realize(&a, q.length, &q.rtype)?;
    Ok(Json(r.to_json(&a.linkage)))
}

/// A realization named either by an `L:signs` literal or by its fields.
#[derive(Deserialize)]
#[serde(untagged)]
enum RealizationRef {
    Literal(String),
    Fields {
        length: f64,
        #[serde(rename = "type")]
        rtype: String,
    },
}

impl RealizationRef {
    fn resolve(&self, a: &Analysis) -> ApiResult<Realization> {
        match self {
            RealizationRef::Literal(text) => {
                let (length, rtype) = parse_literal(text).map_err(|e| ApiError::from_core(&e, None))?;
                a.realize(length, &rtype).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))
            }
            RealizationRef::Fields { length, rtype } => realize(a, *length, rtype),
        }
    }
}

#[derive(Deserialize)]
struct PathBody {
    from: RealizationRef,
    to: RealizationRef,
}

async fn path(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<PathBody>, JsonRejection>,
) -> ApiResult {
    let Json(body) = body?;
    let a = state.analysis(&id).await?;
    blocking(move || {
        let (r1, r2) = (body.from.resolve(&a)?, body.to.resolve(&a)?);
        let paths = a.find_path(&r1, &r2).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))?;
        Ok(Json(json!({ "paths": paths.iter().map(ContinuousMotion::to_json).collect::<Vec<_>>() })))
    })
    .await
}

#[derive(Deserialize)]
struct ClosestBody {
    c1: usize,
    c2: usize,
    n: Option<usize>,
}

async fn closest(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<ClosestBody>, JsonRejection>,
) -> ApiResult {
    let Json(body) = body?;
    let sampler = sampler(body.n)?;
    let a = state.analysis(&id).await?;
    blocking(move || {
        let (c1, c2) = (component(&a, body.c1)?, component(&a, body.c2)?);
        let nearest =
            a.nearest_realizations(c1, c2, &sampler).map_err(|e| ApiError::from_core(&e, Some(&a.linkage)))?;
        let mut out = nearest.to_json(&a.linkage);
        out["indices"] = json!([nearest.indices.0, nearest.indices.1]);
        Ok(Json(out))
    })
    .await
}
