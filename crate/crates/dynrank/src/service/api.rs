//! REST and server-sent-event routes.

use std::convert::Infallible;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::sse::{Event as SseEvent, KeepAlive, Sse};
use axum::response::IntoResponse;
use axum::routing::{get, post, put};
use axum::{Json, Router};
use dynrank_core::RuleId;
use futures::stream::{self, Stream, StreamExt};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast::error::RecvError;

use super::error::ServiceError;
use super::store::{Entry, History, Store, View};

type ApiResult<T> = Result<T, ServiceError>;

#[derive(Debug, Default, Deserialize)]
pub struct CreateSession {
    pub rule: Option<String>,
    pub h: Option<usize>,
    #[serde(default)]
    pub candidates: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct SubmitCandidate {
    pub name: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Joined {
    pub voter: usize,
    pub token: String,
}

#[derive(Debug, Deserialize)]
pub struct CastVote {
    pub candidate: String,
    #[serde(default = "yes")]
    pub approve: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
pub struct Implement {
    pub candidate: String,
}

#[derive(Debug, Serialize)]
pub struct Preview {
    pub candidate: String,
    pub ranking: Vec<Entry>,
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}/candidates", post(submit_candidate))
        .route("/sessions/{id}/voters", post(join))
        .route("/sessions/{id}/votes/{voter}", put(cast_vote))
        .route("/sessions/{id}/ranking", get(ranking))
        .route("/sessions/{id}/implement", post(implement))
        .route("/sessions/{id}/preview/{candidate}", get(preview))
        .route("/sessions/{id}/history", get(history))
        .route("/sessions/{id}/stream", get(stream))
        .with_state(store)
}

async fn create_session(
    State(store): State<Arc<Store>>,
    Json(body): Json<CreateSession>,
) -> ApiResult<(StatusCode, Json<View>)> {
    let rule = body.rule.as_deref().map(str::parse::<RuleId>).transpose()?;
    let handle = store.create(rule, body.h, &body.candidates)?;
    Ok((StatusCode::CREATED, Json((*handle.view()).clone())))
}

async fn list_sessions(State(store): State<Arc<Store>>) -> Json<Vec<String>> {
    Json(store.ids())
}

async fn submit_candidate(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Json(body): Json<SubmitCandidate>,
) -> ApiResult<(StatusCode, Json<View>)> {
    let view = store.get(&id)?.submit_candidate(&body.name)?;
    Ok((StatusCode::CREATED, Json((*view).clone())))
}

async fn join(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<(StatusCode, Json<Joined>)> {
    let (voter, token) = store.get(&id)?.join()?;
    Ok((StatusCode::CREATED, Json(Joined { voter, token })))
}

fn bearer(headers: &HeaderMap) -> ApiResult<&str> {
    headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .ok_or(ServiceError::Unauthorized)
}

async fn cast_vote(
    State(store): State<Arc<Store>>,
    Path((id, voter)): Path<(String, usize)>,
    headers: HeaderMap,
    Json(body): Json<CastVote>,
) -> ApiResult<Json<View>> {
    let token = bearer(&headers)?;
    let view = store.get(&id)?.cast_vote(voter, token, &body.candidate, body.approve)?;
    Ok(Json((*view).clone()))
}

async fn ranking(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<View>> {
    Ok(Json((*store.get(&id)?.view()).clone()))
}

async fn implement(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Json(body): Json<Implement>,
) -> ApiResult<Json<View>> {
    let view = store.get(&id)?.implement(&body.candidate)?;
    Ok(Json((*view).clone()))
}

async fn preview(
    State(store): State<Arc<Store>>,
    Path((id, candidate)): Path<(String, String)>,
) -> ApiResult<Json<Preview>> {
    let ranking = store.get(&id)?.preview(&candidate)?;
    Ok(Json(Preview { candidate, ranking }))
}

async fn history(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<History>> {
    Ok(Json(store.get(&id)?.history()?))
}

fn sse_event(view: &View) -> SseEvent {
    SseEvent::default().event("ranking").id(view.seq.to_string()).json_data(view).expect("view serializes")
}

/// Sends the current view, then every update. A subscriber that falls
/// behind skips to the latest view.
async fn stream(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let handle = store.get(&id)?;
    let rx = handle.subscribe();
    let first = handle.view();
    let updates = stream::unfold((rx, handle, first.seq), |(mut rx, handle, mut last)| async move {
        loop {
            let view = match rx.recv().await {
                Ok(view) => view,
                Err(RecvError::Lagged(_)) => handle.view(),
                Err(RecvError::Closed) => return None,
            };
            if view.seq > last {
                last = view.seq;
                return Some((Ok::<_, Infallible>(sse_event(&view)), (rx, handle, last)));
            }
        }
    });
    let events: std::pin::Pin<Box<dyn Stream<Item = Result<SseEvent, Infallible>> + Send>> =
        Box::pin(stream::once(async move { Ok(sse_event(&first)) }).chain(updates));
    Ok(Sse::new(events).keep_alive(KeepAlive::default()))
}
