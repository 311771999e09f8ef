use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use tower_http::cors::CorsLayer;

use crate::service::{ApiError, ApiResult, Format, Service, TradeRequest};

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        json_response(status, self.to_json())
    }
}

/// Runs a query off the async workers; computations are CPU-bound.
async fn run<F>(service: Arc<Service>, f: F) -> Response
where
    F: FnOnce(&Service) -> ApiResult + Send + 'static,
{
    match tokio::task::spawn_blocking(move || f(&service)).await {
        Ok(Ok(body)) => json_response(StatusCode::OK, body),
        Ok(Err(e)) => e.into_response(),
        Err(e) => ApiError::Internal(e.to_string()).into_response(),
    }
}

async fn teams(State(s): State<Arc<Service>>) -> Response {
    run(s, |s| s.teams()).await
}

async fn summary(State(s): State<Arc<Service>>, Path(slug): Path<String>) -> Response {
    run(s, move |s| s.summary(&slug)).await
}

async fn players(State(s): State<Arc<Service>>, Path(slug): Path<String>) -> Response {
    run(s, move |s| s.players(&slug)).await
}

#[derive(Deserialize)]
struct BarcodeQuery {
    dim: Option<String>,
}

async fn barcode(
    State(s): State<Arc<Service>>,
    Path(slug): Path<String>,
    query: Result<Query<BarcodeQuery>, QueryRejection>,
) -> Response {
    let q = match query {
        Ok(Query(q)) => q,
        Err(e) => return ApiError::BadRequest(e.body_text()).into_response(),
    };
    let dim = match q.dim.as_deref().map(str::parse::<usize>) {
        None => None,
        Some(Ok(d)) => Some(d),
        Some(Err(_)) => {
            return ApiError::BadRequest(format!(
                "dim must be 0 or 1, got {:?}",
                q.dim.unwrap_or_default()
            ))
            .into_response()
        }
    };
    run(s, move |s| s.barcode(&slug, dim, Format::Json)).await
}

async fn evaluate(
    State(s): State<Arc<Service>>,
    body: Result<Json<TradeRequest>, JsonRejection>,
) -> Response {
    match body {
        Ok(Json(req)) => run(s, move |s| s.evaluate_trade(&req)).await,
        Err(e) => ApiError::BadRequest(e.body_text()).into_response(),
    }
}

async fn correlation(State(s): State<Arc<Service>>) -> Response {
    run(s, |s| s.correlate()).await
}

async fn not_found() -> Response {
    ApiError::NotFound("no such endpoint".into()).into_response()
}

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/api/teams", get(teams))
        .route("/api/teams/{slug}/summary", get(summary))
        .route("/api/teams/{slug}/barcode", get(barcode))
        .route("/api/teams/{slug}/players", get(players))
        .route("/api/trades/evaluate", post(evaluate))
        .route("/api/correlation", get(correlation))
        .fallback(not_found)
        .layer(CorsLayer::permissive())
        .with_state(service)
}

pub async fn serve(service: Arc<Service>, listen: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(listen).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
