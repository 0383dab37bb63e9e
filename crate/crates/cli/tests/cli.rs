use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hypangle::formats::{from_json, GeneratorsDoc, ThetaDoc, VerticesDoc};
use hypangle::oracle::perturbed_canonical;
use hypangle::polygon::{is_hyperelliptic, CanonicalPolygon};
use rand::SeedableRng;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypangle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    let out = run(args);
    out.status.code().expect("exit code")
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

/// A valid genus-3 polygon with unequal opposite angles.
fn asymmetric_g3(dir: &TempDir) -> String {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let p = perturbed_canonical(3, 2e-2, &mut rng).unwrap();
    assert!(!is_hyperelliptic(&p, 1e-6));
    let path = dir.path().join("asym.json");
    std::fs::write(&path, hypangle::formats::to_json(&p)).unwrap();
    path.to_string_lossy().into_owned()
}

fn malformed(dir: &TempDir) -> String {
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"genus\": 2, \"sides\": [1.0]").unwrap();
    path.to_string_lossy().into_owned()
}

fn out_path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

const UNWRITABLE: &str = "/nonexistent-dir/out.json";

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = run(&["validate", &fx("regular_g2.json")]);
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for n in ["i", "ii", "iii", "iv", "v"] {
        assert!(names.contains(&n));
    }
    assert_eq!(code(&["validate", &fx("unpaired_g2.json")]), 1);
    assert_eq!(code(&["validate", &fx("open_g2.json")]), 2);
    assert_eq!(code(&["validate", &malformed(&dir)]), 3);
    assert_eq!(code(&["validate", "missing.json"]), 3);
}

#[test]
fn extract_exit_codes() {
    let dir = TempDir::new().unwrap();
    let theta = out_path(&dir, "theta.json");
    assert_eq!(
        code(&[
            "extract",
            "--kind",
            "teich",
            &fx("regular_g3.json"),
            "-o",
            &theta
        ]),
        0
    );
    let doc: ThetaDoc = from_json(&std::fs::read_to_string(&theta).unwrap()).unwrap();
    assert_eq!(doc.theta.len(), 13);
    assert_eq!(
        code(&["extract", "--kind", "hyper", &fx("regular_g2.json")]),
        0
    );
    assert_eq!(
        code(&["extract", "--kind", "teich", &fx("regular_g2.json")]),
        1
    );
    assert_eq!(
        code(&["extract", "--kind", "hyper", &asymmetric_g3(&dir)]),
        1
    );
    assert_eq!(
        code(&["extract", "--kind", "hyper", &fx("open_g2.json")]),
        2
    );
    assert_eq!(code(&["extract", "--kind", "hyper", &malformed(&dir)]), 3);
    assert_eq!(
        code(&["extract", "--kind", "other", &fx("regular_g2.json")]),
        3
    );
}

#[test]
fn reconstruct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let poly = out_path(&dir, "poly.json");
    assert_eq!(
        code(&["reconstruct", &fx("hyper_theta_g3.json"), "-o", &poly]),
        0
    );
    assert_eq!(code(&["validate", &poly]), 0);
    let stderr = run(&["reconstruct", &fx("off_image_theta_g3.json")]).stderr;
    assert!(String::from_utf8_lossy(&stderr).contains("not in the image"));
    assert_eq!(code(&["reconstruct", &fx("off_image_theta_g3.json")]), 1);
    assert_eq!(code(&["reconstruct", &fx("random_theta_g3.json")]), 1);
    assert_eq!(code(&["reconstruct", &fx("hinge_no_bracket_g2.json")]), 2);
    let short = out_path(&dir, "short.json");
    std::fs::write(
        &short,
        r#"{"genus": 3, "kind": "teich", "theta": [0.5, 0.5]}"#,
    )
    .unwrap();
    assert_eq!(code(&["reconstruct", &short]), 3);
}

#[test]
fn extract_then_reconstruct_is_identity() {
    let dir = TempDir::new().unwrap();
    for (kind, src) in [("teich", "regular_g3.json"), ("hyper", "hyper_g3.json")] {
        let theta = out_path(&dir, "t.json");
        let back = out_path(&dir, "p.json");
        assert_eq!(
            code(&["extract", "--kind", kind, &fx(src), "-o", &theta]),
            0
        );
        assert_eq!(code(&["reconstruct", &theta, "-o", &back]), 0);
        let p: CanonicalPolygon =
            from_json(&std::fs::read_to_string(fixture(src)).unwrap()).unwrap();
        let q: CanonicalPolygon = from_json(&std::fs::read_to_string(&back).unwrap()).unwrap();
        assert!(
            hypangle::polygon::equivalent(&p, &q, 1e-7).unwrap(),
            "{kind}"
        );
    }
}

#[test]
fn embed_exit_codes() {
    let dir = TempDir::new().unwrap();
    let verts = out_path(&dir, "v.json");
    assert_eq!(code(&["embed", &fx("regular_g2.json"), "-o", &verts]), 0);
    let doc: VerticesDoc = from_json(&std::fs::read_to_string(&verts).unwrap()).unwrap();
    assert_eq!(doc.vertices.len(), 8);
    assert!(doc.vertices.iter().all(|v| v[1] > 0.0));
    let out = run(&["embed", &fx("regular_g2.json"), "--model", "disk"]);
    let doc: VerticesDoc = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.vertices.iter().all(|v| v[0] * v[0] + v[1] * v[1] < 1.0));
    assert_eq!(code(&["embed", &fx("unpaired_g2.json")]), 1);
    assert_eq!(code(&["embed", &fx("open_g2.json")]), 2);
    assert_eq!(
        code(&["embed", &fx("regular_g2.json"), "-o", UNWRITABLE]),
        3
    );
}

#[test]
fn generators_exit_codes() {
    let dir = TempDir::new().unwrap();
    let gens = out_path(&dir, "g.json");
    assert_eq!(
        code(&["generators", &fx("regular_g2.json"), "-o", &gens]),
        0
    );
    let doc: GeneratorsDoc = from_json(&std::fs::read_to_string(&gens).unwrap()).unwrap();
    assert_eq!(doc.generators.len(), 4);
    assert!(doc.generators.iter().all(|g| g.trace.abs() > 2.0));
    assert!(doc.relation_defect < 1e-6);
    assert_eq!(code(&["generators", &fx("unpaired_g2.json")]), 1);
    assert_eq!(code(&["generators", &fx("open_g2.json")]), 2);
    assert_eq!(code(&["generators", "missing.json"]), 3);
}

fn parse_svg(path: &str) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    roxmltree::Document::parse(&text).expect("well-formed SVG");
    text
}

#[test]
fn render_exit_codes_and_format() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (out_path(&dir, "a.svg"), out_path(&dir, "b.svg"));
    assert_eq!(code(&["render", &fx("regular_g2.json"), "-o", &a]), 0);
    assert_eq!(code(&["render", &fx("regular_g2.json"), "-o", &b]), 0);
    let text = parse_svg(&a);
    assert_eq!(text, std::fs::read_to_string(&b).unwrap(), "deterministic");
    let doc = roxmltree::Document::parse(&text).unwrap();
    let sides: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("side"))
        .collect();
    assert_eq!(sides.len(), 8);
    assert!(sides
        .iter()
        .all(|n| n.attribute("d").unwrap().contains(" A ")));
    assert_eq!(
        doc.descendants().filter(|n| n.has_tag_name("text")).count(),
        8
    );

    let h = out_path(&dir, "h.svg");
    assert_eq!(
        code(&[
            "render",
            &fx("regular_g2.json"),
            "--model",
            "halfplane",
            "-o",
            &h
        ]),
        0
    );
    parse_svg(&h);

    assert_eq!(code(&["render", &fx("unpaired_g2.json")]), 1);
    assert_eq!(code(&["render", &fx("open_g2.json")]), 2);
    assert_eq!(code(&["render", &fx("regular_g2.json"), "--size", "0"]), 3);
}

/// Arcs orthogonal to the boundary circle: `|C − O|² = r² + R²` for one of
/// the two centres compatible with the endpoints and radius.
#[test]
fn rendered_arcs_are_geodesics() {
    let dir = TempDir::new().unwrap();
    let a = out_path(&dir, "a.svg");
    assert_eq!(code(&["render", &fx("regular_g3.json"), "-o", &a]), 0);
    let text = parse_svg(&a);
    let doc = roxmltree::Document::parse(&text).unwrap();
    let disk = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("boundary"))
        .unwrap();
    let num = |s: Option<&str>| s.unwrap().parse::<f64>().unwrap();
    let (ox, oy, big_r) = (
        num(disk.attribute("cx")),
        num(disk.attribute("cy")),
        num(disk.attribute("r")),
    );
    for side in doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("side"))
    {
        let d: Vec<f64> = side
            .attribute("d")
            .unwrap()
            .split_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect();
        let (px, py, r, qx, qy) = (d[0], d[1], d[2], d[7], d[8]);
        let (mx, my) = ((px + qx) / 2.0, (py + qy) / 2.0);
        let half = ((qx - px).powi(2) + (qy - py).powi(2)).sqrt() / 2.0;
        let h = (r * r - half * half).max(0.0).sqrt();
        let (nx, ny) = (-(qy - py) / (2.0 * half), (qx - px) / (2.0 * half));
        let ok = [1.0, -1.0].iter().any(|s| {
            let (cx, cy) = (mx + s * h * nx, my + s * h * ny);
            let lhs = (cx - ox).powi(2) + (cy - oy).powi(2);
            (lhs - r * r - big_r * big_r).abs() < 1e-3 * big_r * big_r
        });
        assert!(ok, "arc {d:?} not orthogonal");
    }
}

#[test]
fn hyperelliptic_render_is_centrally_symmetric() {
    let dir = TempDir::new().unwrap();
    let a = out_path(&dir, "a.svg");
    assert_eq!(code(&["render", &fx("hyper_g3.json"), "-o", &a]), 0);
    let text = parse_svg(&a);
    let doc = roxmltree::Document::parse(&text).unwrap();
    let dots: Vec<(f64, f64)> = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle") && n.attribute("r") == Some("2"))
        .map(|n| {
            (
                n.attribute("cx").unwrap().parse().unwrap(),
                n.attribute("cy").unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(dots.len(), 12);
    for k in 0..6 {
        let (p, q) = (dots[k], dots[k + 6]);
        assert!(
            (p.0 + q.0 - 512.0).abs() < 2e-3 && (p.1 + q.1 - 512.0).abs() < 2e-3,
            "{p:?} {q:?}"
        );
    }
}

#[test]
fn roundtrip_exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = run(&["roundtrip", &fx("regular_g3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["teich"]["ok"], true);
    assert_eq!(v["hyperelliptic"]["ok"], true);
    let asym = run(&["roundtrip", &asymmetric_g3(&dir)]);
    assert_eq!(
        asym.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&asym.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&asym.stdout).unwrap();
    assert!(v.get("hyperelliptic").is_none());
    assert_eq!(
        code(&["roundtrip", &fx("regular_g3.json"), "--tol", "1e-300"]),
        1
    );
    assert_eq!(code(&["roundtrip", &fx("open_g2.json")]), 2);
    assert_eq!(
        code(&["roundtrip", &fx("regular_g3.json"), "--tol", "-1"]),
        3
    );
}

#[test]
fn oracle_sweep_exit_codes() {
    let out = run(&["oracle-sweep", "--n", "200", "--genera", "2"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(reports.as_array().unwrap().len() > 3);
    assert_eq!(
        code(&[
            "oracle-sweep",
            "--n",
            "200",
            "--genera",
            "2",
            "--tol",
            "1e-30"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "oracle-sweep",
            "--n",
            "10",
            "--genera",
            "2",
            "-o",
            UNWRITABLE
        ]),
        3
    );
    assert_eq!(code(&["oracle-sweep", "--genera", "1"]), 3);
}

#[test]
fn usage_errors_are_parse_errors() {
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(code(&[]), 3);
    assert_eq!(code(&["--help"]), 0);
}
