use std::path::Path;
use std::process::{Command, Output};

use quadinterp::imgio::{read_flo, read_image, write_image};
use quadinterp::Image;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadinterp"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

const SCENE: &str = "\
# accelerating disc
canvas 80 80
background 0.1
sprite disc 38 40 0.5 0.2 2.5 1.5 11 3
";

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["interpolate", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn runtime_errors_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.txt"),
        "canvas 40 40\nsprite blob 1 1 0 0 0 0 3\n",
    )
    .unwrap();
    let out = run(dir.path(), &["synth", "--scene", "bad.txt", "--out", "o"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.starts_with("error: rendering"), "{msg}");
    assert!(msg.contains("canvas edge"), "{msg}");

    std::fs::write(
        dir.path().join("typo.txt"),
        "canvas 40 40\nsprite cube 1 1 0 0 0 0 3\n",
    )
    .unwrap();
    let out = run(dir.path(), &["synth", "--scene", "typo.txt", "--out", "o"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.starts_with("error: loading scene"), "{msg}");
    assert!(msg.contains("line 2"), "{msg}");

    let out = run(
        dir.path(),
        &["metrics", "--ref", "nope.pgm", "--pred", "nope.pgm"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading nope.pgm"));
}

#[test]
fn static_quartet_reproduces_the_frame() {
    let dir = tempfile::tempdir().unwrap();
    let img = Image::from_fn(40, 32, 3, |x, y, c| {
        ((x * 3 + y * 5 + c * 7) % 17) as f64 / 16.0
    })
    .unwrap();
    write_image(&img, dir.path().join("f.ppm")).unwrap();
    let out = run(
        dir.path(),
        &[
            "interpolate",
            "--in",
            "f.ppm",
            "f.ppm",
            "f.ppm",
            "f.ppm",
            "--t",
            "0.5,0.25",
            "--out",
            "o",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stored = read_image(dir.path().join("f.ppm")).unwrap();
    for t in ["0.5", "0.25"] {
        let got = read_image(dir.path().join(format!("o/out_t{t}.pnm"))).unwrap();
        for (a, b) in got.data().iter().zip(stored.data()) {
            assert!((a - b).abs() <= 1.0 / 255.0 + 1e-12);
        }
    }
}

#[test]
fn synth_writes_quartet_targets_and_flows() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("scene.txt"), SCENE).unwrap();
    let out = run(
        dir.path(),
        &[
            "synth",
            "--scene",
            "scene.txt",
            "--targets",
            "7",
            "--out",
            "s",
        ],
    );
    assert!(out.status.success());
    let s = dir.path().join("s");
    for name in [
        "frame_-1.pnm",
        "frame_0.pnm",
        "frame_1.pnm",
        "frame_2.pnm",
        "target_t0.125.pnm",
        "target_t0.875.pnm",
    ] {
        assert!(s.join(name).exists(), "{name}");
    }
    let f = read_flo(s.join("flow_0to1.flo")).unwrap();
    assert_eq!((f.width(), f.height()), (80, 80));
    assert!(f.max_abs() > 0.0);
    assert!(
        s.join("flow_0to-1.flo").exists()
            && s.join("flow_1to0.flo").exists()
            && s.join("flow_1to2.flo").exists()
    );

    // given flows and the flow stages run standalone
    let out = run(
        dir.path(),
        &[
            "interpolate",
            "--in",
            "s/frame_-1.pnm",
            "s/frame_0.pnm",
            "s/frame_1.pnm",
            "s/frame_2.pnm",
            "--t",
            "0.5",
            "--flows",
            "s/flow_{src}to{dst}.flo",
            "--model",
            "linear",
            "--out",
            "o",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(
        dir.path(),
        &[
            "flow",
            "reverse",
            "--in",
            "s/flow_0to1.flo",
            "--out",
            "r.flo",
            "--holes",
            "h.pgm",
        ],
    );
    assert!(out.status.success());
    let out = run(
        dir.path(),
        &[
            "flow", "filter", "--in", "r.flo", "--holes", "h.pgm", "--radius", "3", "--out",
            "g.flo",
        ],
    );
    assert!(out.status.success());
    let out = run(
        dir.path(),
        &[
            "flow", "filter", "--in", "r.flo", "--radius", "11", "--out", "g.flo",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn metrics_prints_one_json_record() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("scene.txt"), SCENE).unwrap();
    assert!(run(
        dir.path(),
        &[
            "synth",
            "--scene",
            "scene.txt",
            "--targets",
            "1",
            "--out",
            "s"
        ]
    )
    .status
    .success());
    let out = run(
        dir.path(),
        &[
            "metrics",
            "--ref",
            "s/target_t0.5.pnm",
            "--pred",
            "s/target_t0.5.pnm",
            "--asfp",
            "--base",
            "s/frame_0.pnm",
        ],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["psnr"], 99.0);
    assert_eq!(v["ie"], 0.0);
    assert_eq!(v["asfp"], 0.0);

    let out = run(
        dir.path(),
        &[
            "metrics",
            "--ref",
            "s/frame_0.pnm",
            "--pred",
            "s/frame_1.pnm",
            "--asfp",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_ranks_quadratic_ahead_on_accelerated_scene() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("scene.txt"), SCENE).unwrap();
    let out = run(
        dir.path(),
        &[
            "eval",
            "--scene",
            "scene.txt",
            "--models",
            "quadratic,linear",
            "--json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows: Vec<serde_json::Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["model"], "quadratic");
    let f = |r: &serde_json::Value, k: &str| r[k].as_f64().unwrap();
    assert!(f(&rows[0], "ie") < f(&rows[1], "ie"));
    assert!(f(&rows[0], "asfp_mean") < f(&rows[1], "asfp_mean"));

    let out = run(
        dir.path(),
        &["eval", "--scene", "scene.txt", "--flows", "analytic"],
    );
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.lines().next().unwrap().starts_with("model"));
    assert_eq!(table.lines().count(), 3);
}
