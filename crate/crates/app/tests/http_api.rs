mod common;

use axum::http::StatusCode;
use common::{cli, fixture_service, get, json, post};

#[test]
fn lists_teams() {
    let s = fixture_service();
    let (status, body) = get(&s, "/api/teams");
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    let teams = v.as_array().unwrap();
    assert_eq!(teams.len(), 2);
    assert_eq!(teams[1]["slug"], "sharks");
    assert_eq!(teams[1]["name"], "San Jose Sharks");
    assert_eq!(teams[0]["name"], "Edmonton Oilers");
}

#[test]
fn lists_players_in_file_order() {
    let s = fixture_service();
    let (status, body) = get(&s, "/api/teams/sharks/players");
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    let players = v.as_array().unwrap();
    assert_eq!(players.len(), 16);
    assert_eq!(players[0]["name"], "Justin Braun");
    assert_eq!(players[5]["stats"]["SP"], 549.0);
    let keys: Vec<&String> = players[0]["stats"].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 12);
    assert!(body.find("\"G\"").unwrap() < body.find("\"Gv\"").unwrap());
}

#[test]
fn barcode_dimensions() {
    let s = fixture_service();
    let (status, body) = get(&s, "/api/teams/oilers/barcode?dim=0");
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    assert_eq!(v["dim0"].as_array().unwrap().len(), 16);
    assert!(v.get("dim1").is_none());
    let (_, both) = get(&s, "/api/teams/oilers/barcode");
    let both = json(&both);
    assert!(both["dim0"].is_array() && both["dim1"].is_array());
    assert!(both["dim0"].as_array().unwrap().last().unwrap()[1].is_null());
}

#[test]
fn errors_are_json() {
    let s = fixture_service();
    for (uri, code) in [
        ("/api/teams/canucks/summary", StatusCode::NOT_FOUND),
        ("/api/teams/canucks/barcode", StatusCode::NOT_FOUND),
        ("/api/teams/sharks/barcode?dim=2", StatusCode::BAD_REQUEST),
        ("/api/teams/sharks/barcode?dim=one", StatusCode::BAD_REQUEST),
        ("/api/nothing", StatusCode::NOT_FOUND),
    ] {
        let (status, body) = get(&s, uri);
        assert_eq!(status, code, "{uri}");
        assert!(json(&body)["error"].is_string(), "{uri}: {body}");
    }
    let (status, body) = post(&s, "/api/trades/evaluate", "{not json");
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(json(&body)["error"].is_string());
    let (status, _) = post(&s, "/api/trades/evaluate", r#"{"team":"sharks"}"#);
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let unknown = r#"{"team":"sharks","outgoing":"Joe Thornton","incoming_team":"oilers","incoming_player":"Wayne Gretzky"}"#;
    let (status, body) = post(&s, "/api/trades/evaluate", unknown);
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(json(&body)["error"]
        .as_str()
        .unwrap()
        .contains("Wayne Gretzky"));
}

#[test]
fn self_trade_is_neutral_and_does_not_mutate() {
    let s = fixture_service();
    let (_, players_before) = get(&s, "/api/teams/sharks/players");
    let body = r#"{"team":"sharks","outgoing":"Joe Thornton","incoming_team":"sharks","incoming_player":"Joe Thornton"}"#;
    let (status, report) = post(&s, "/api/trades/evaluate", body);
    assert_eq!(status, StatusCode::OK);
    let v = json(&report);
    assert_eq!(v["verdict"], "neutral");
    assert_eq!(v["deltas"]["h1_count"], 0);
    assert_eq!(v["before"], v["after"]);
    assert_eq!(get(&s, "/api/teams/sharks/players").1, players_before);
}

#[test]
fn real_trade_report_is_consistent() {
    let s = fixture_service();
    let body = r#"{"team":"oilers","outgoing":"Nick Schultz","incoming_team":"sharks","incoming_player":"Joe Thornton"}"#;
    let (status, report) = post(&s, "/api/trades/evaluate", body);
    assert_eq!(status, StatusCode::OK);
    let v = json(&report);
    let d = |k: &str| v["after"][k].as_f64().unwrap() - v["before"][k].as_f64().unwrap();
    assert_eq!(v["deltas"]["top_line"].as_f64().unwrap(), d("top_line"));
    assert_eq!(
        v["deltas"]["mean_bar_length"].as_f64().unwrap(),
        d("mean_bar_length")
    );
    assert_eq!(v["before"]["team"], "Edmonton Oilers");
}

#[test]
fn cli_and_http_emit_identical_bytes() {
    let s = fixture_service();
    let pairs = [
        (
            vec!["summary", "--team", "oilers"],
            "/api/teams/oilers/summary",
        ),
        (
            vec!["barcode", "--team", "sharks", "--dim", "1"],
            "/api/teams/sharks/barcode?dim=1",
        ),
        (
            vec!["barcode", "--team", "sharks"],
            "/api/teams/sharks/barcode",
        ),
        (vec!["correlate"], "/api/correlation"),
    ];
    for (args, uri) in pairs {
        let out = cli(&args);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(
            String::from_utf8(out.stdout).unwrap(),
            get(&s, uri).1,
            "{uri}"
        );
    }
}

#[test]
fn cors_is_enabled() {
    use axum::body::Body;
    use axum::http::Request;
    use tower::ServiceExt;
    let s = fixture_service();
    let res = common::block_on(
        persistry::http::router(s).oneshot(
            Request::get("/api/teams")
                .header("origin", "http://localhost:5173")
                .body(Body::empty())
                .unwrap(),
        ),
    )
    .unwrap();
    assert_eq!(res.headers()["access-control-allow-origin"], "*");
}
