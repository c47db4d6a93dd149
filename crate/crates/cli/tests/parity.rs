//! The same dataset scored through the CLI and through `POST /assess`.

use std::process::Command;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use pmcda_service::{router, Config};
use tower::ServiceExt;

async fn service_assess(body: String) -> serde_json::Value {
    let req = Request::post("/assess")
        .header("content-type", "application/json")
        .body(Body::from(body))
        .unwrap();
    let resp = router(Config::default()).oneshot(req).await.unwrap();
    assert!(resp.status().is_success());
    serde_json::from_slice(&resp.into_body().collect().await.unwrap().to_bytes()).unwrap()
}

fn cli_assess(path: &std::path::Path) -> serde_json::Value {
    let o = Command::new(env!("CARGO_BIN_EXE_pmcda")).arg("assess").arg(path).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[tokio::test]
async fn cli_and_service_agree() {
    let dir = tempfile::tempdir().unwrap();
    for (model, seed) in [("linear", 1), ("slos", 4), ("multilinear", 9), ("product", 2)] {
        let mut d: serde_json::Value = serde_json::from_str(pmcda::case_study::REPRODUCTION_JSON).unwrap();
        d["model"] = model.into();
        d["seed"] = seed.into();
        d["samples"] = 30_000.into();
        let text = d.to_string();
        let path = dir.path().join(format!("{model}.json"));
        std::fs::write(&path, &text).unwrap();

        let cli = cli_assess(&path);
        let http = service_assess(text).await;
        assert_eq!(cli["comparisons"], http["comparisons"], "{model}");
        assert_eq!(cli, http, "{model}");
    }
}

#[tokio::test]
async fn linear_and_slos_differ_on_fluoxetine_vs_placebo() {
    let mut probs = Vec::new();
    for model in ["linear", "slos"] {
        let mut d: serde_json::Value = serde_json::from_str(pmcda::case_study::REPRODUCTION_JSON).unwrap();
        d["model"] = model.into();
        let r = service_assess(d.to_string()).await;
        let fp = r["comparisons"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["arm_i"] == "Fluoxetine" && c["arm_h"] == "Placebo")
            .unwrap()["probability"]
            .as_f64()
            .unwrap();
        probs.push(fp);
    }
    assert!((probs[0] - 0.072).abs() < 0.015, "{probs:?}");
    assert!((probs[1] - 0.473).abs() < 0.015, "{probs:?}");
}
