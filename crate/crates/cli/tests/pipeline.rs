use std::process::Command;

use cir::output::{report_json, write_outputs, PLOT_FILES};
use cir::{
    analyze, build_corpus, enumerate_scenarios, run_all, run_scenario, scenario, CaType, Nature, RunConfig, TopologyId,
};
use cir_stats::{Direction, Significance};

#[test]
fn full_run_contracts() {
    let cfg = RunConfig::default();
    let outcome = run_all(&cfg).unwrap();
    assert_eq!(outcome.failures(), 0);
    let reports: Vec<_> = outcome.reports().collect();
    assert_eq!(reports.len(), 48);
    for r in &reports {
        assert_eq!(r.nature, Nature::of(r.verdict.brm.as_ref()));
        assert_eq!(r.corpus_size, 100);
    }
    let bands = [Significance::Highly, Significance::Significant, Significance::NotSignificant];
    assert_eq!(bands.iter().map(|b| reports.iter().filter(|r| r.label == *b).count()).sum::<usize>(), 48);

    // Paired directions share the corpus, so the estimator gives the same CC.
    for r in &reports {
        if r.spec.direction == Direction::TxIy {
            let pair = reports.iter().find(|p| p.spec.id == r.spec.id + 4).unwrap();
            assert_eq!((pair.spec.metric, pair.spec.direction), (r.spec.metric, Direction::IxTy));
            assert_eq!(pair.cc, r.cc);
            assert!(pair.cc.is_some());
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let written = write_outputs(&outcome, dir.path()).unwrap();
    assert_eq!(written.len(), 6 + 48 + 1 + 5);
    for name in PLOT_FILES {
        assert!(dir.path().join("plots").join(name).is_file());
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 49);
    let corpus = std::fs::read_to_string(dir.path().join("corpus_GWMN_5x5_generic.csv")).unwrap();
    assert_eq!(corpus.lines().next().unwrap(), "ca_id,generator,tid,cdal,cxls,calm,nat_mbps");
    assert_eq!(corpus.lines().count(), 101);

    let cc = std::fs::read_to_string(dir.path().join("plots/cc_by_tiem.csv")).unwrap();
    for line in cc.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let r = reports.iter().find(|r| r.spec.id.to_string() == cols[0]).unwrap();
        let m = if cols[5] == "BRM" { &r.verdict.brm } else { &r.verdict.arm };
        assert_eq!(m.as_ref().unwrap().degree, 1);
    }
}

#[test]
fn scenario_runs_are_reproducible() {
    let cfg = RunConfig { corpus_size: 40, ..RunConfig::default() };
    let spec = scenario(3).unwrap();
    let a = report_json(&run_scenario(spec, &cfg).unwrap()).unwrap();
    let b = report_json(&run_scenario(spec, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn direction_flip_swaps_series_only() {
    let cfg = RunConfig { corpus_size: 40, ..RunConfig::default() };
    let corpus = build_corpus(&cfg, TopologyId::Gwmn5x5, CaType::Tpca).unwrap();
    let specs = enumerate_scenarios();
    let txiy = specs.iter().find(|s| s.ca_type == CaType::Tpca && s.direction == Direction::TxIy).unwrap();
    let ixty = specs
        .iter()
        .find(|s| s.ca_type == CaType::Tpca && s.direction == Direction::IxTy && s.metric == txiy.metric)
        .unwrap();
    let a = analyze(*txiy, &corpus, &cfg).unwrap();
    let b = analyze(*ixty, &corpus, &cfg).unwrap();
    assert_eq!(a.cc, b.cc);
    assert!((a.models[0].r_squared - b.models[0].r_squared).abs() < 1e-12);
    assert!(analyze(specs[0], &corpus, &cfg).is_err());
}

fn cir() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cir"))
}

#[test]
fn cli_exit_code_reflects_scenario_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({ "corpus_size": 12, "degrees": [20], "output_dir": dir.path().join("out") });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let out = cir().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let summary = std::fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert_eq!(summary.lines().filter(|l| l.contains("error:")).count(), 48);
}

#[test]
fn cli_topology_metrics() {
    let out = cir().args(["topo", "--label", "GWMN_5x5", "--metrics"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("delta=0.0667"), "{text}");
    assert!(text.contains("eps_min=250.00"));
    assert!(text.contains("T=NA"));
    let bad = cir().args(["topo", "--label", "GWMN_9x9", "--metrics"]).output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn cli_scenario_and_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"corpus_size": 30}"#).unwrap();
    let out = cir().args(["scenario", "--id", "41", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["spec"]["ca_type"], "TPCA");
    assert_eq!(v["corpus_size"], 30);
    let out = cir().args(["corpus", "--topology", "PWMN_25", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 31);
}
