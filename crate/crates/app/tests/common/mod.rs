#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use persistry::{Dataset, Service, ServiceConfig};
use tower::ServiceExt;

pub fn data_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fixture_service() -> Arc<Service> {
    let dataset = Dataset::load(&data_root(), Some("2013-2014")).unwrap();
    Arc::new(Service::new(dataset, ServiceConfig::default()).unwrap())
}

pub fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persistry"))
        .arg("--dataset")
        .arg(data_root())
        .args(args)
        .output()
        .unwrap()
}

pub async fn call(
    service: &Arc<Service>,
    method: &str,
    uri: &str,
    body: Option<&str>,
) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let res = persistry::http::router(service.clone())
        .oneshot(req)
        .await
        .unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub fn get(service: &Arc<Service>, uri: &str) -> (StatusCode, String) {
    block_on(call(service, "GET", uri, None))
}

pub fn post(service: &Arc<Service>, uri: &str, body: &str) -> (StatusCode, String) {
    block_on(call(service, "POST", uri, Some(body)))
}

pub fn block_on<F: std::future::Future>(f: F) -> F::Output {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .unwrap()
        .block_on(f)
}

pub fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}
