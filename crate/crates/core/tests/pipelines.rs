use std::path::PathBuf;
use std::time::Duration;

use llab::hilbert::curve_invariants;
use llab::liaison::{link_imposing_points, LinkageSpec};
use llab::pipelines::{export_fixture, fixture_build, run_pipeline_with_budget, FixtureKind, PipelineName, PipelineSpec};
use llab::report::{Report, Verdict};
use llab::{Error, DEFAULT_PRIME};

const BUDGET: Duration = Duration::from_secs(1200);

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("llab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(name: PipelineName, seed: u64) -> Report {
    run_pipeline_with_budget(&PipelineSpec::new(name, DEFAULT_PRIME, seed), BUDGET).unwrap()
}

#[test]
fn m133_passes_and_is_reproducible() {
    let a = run(PipelineName::M133, 1);
    assert_eq!(a.verdict, Verdict::Pass, "{}", a.to_text());
    let b = run(PipelineName::M133, 1);
    assert_eq!(a.without_timings().to_json(), b.without_timings().to_json());
    let back = Report::from_json(&a.to_json()).unwrap();
    assert_eq!(back.without_timings(), a.without_timings());
}

#[test]
fn generated_rows_pass() {
    for name in [PipelineName::MgnuRow(10, 6), PipelineName::MgnuRow(10, 5), PipelineName::GeissRoundtrip] {
        let r = run(name, 2);
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_text());
    }
}

#[test]
fn m124_passes() {
    let r = run(PipelineName::M124, 1);
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_text());
}

#[test]
fn ingest_only_pipelines_need_a_fixture() {
    for name in [PipelineName::M123, PipelineName::M123Sernesi, PipelineName::M125u, PipelineName::MgnuRow(11, 6), PipelineName::MgnuRow(12, 5)] {
        let err = run_pipeline_with_budget(&PipelineSpec::new(name, DEFAULT_PRIME, 1), BUDGET).unwrap_err();
        assert!(matches!(err, Error::MissingFixture(_)), "{name}: {err}");
    }
}

#[test]
fn ingested_fixture_runs() {
    let fx = fixture_build(FixtureKind::Genus10Deg12P3, DEFAULT_PRIME, 3).unwrap();
    let path = scratch("g10.ideal");
    export_fixture(&fx, &path).unwrap();
    let spec = PipelineSpec::new(PipelineName::M133, DEFAULT_PRIME, 3).with_fixture(&path);
    let r = run_pipeline_with_budget(&spec, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_text());
    // the wrong curve fails on its invariants rather than erroring
    let spec = PipelineSpec::new(PipelineName::M123Sernesi, DEFAULT_PRIME, 3).with_fixture(&path);
    let r = run_pipeline_with_budget(&spec, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let spec = PipelineSpec::new(PipelineName::M133, 7, 3).with_fixture(&path);
    let r = run_pipeline_with_budget(&spec, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let spec = PipelineSpec::new(PipelineName::GeissRoundtrip, DEFAULT_PRIME, 1);
    let r = run_pipeline_with_budget(&spec, Duration::from_millis(1)).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.steps.last().unwrap().inconclusive);
}

#[test]
fn octic_model_links_to_a_reducible_curve() {
    let fx = fixture_build(FixtureKind::Genus10Octic, DEFAULT_PRIME, 1).unwrap();
    let inv = curve_invariants(&fx.ideal).unwrap();
    assert_eq!((inv.degree, inv.genus), (vec![12], 10));
    let spec = LinkageSpec::projective(3, &[5, 5], 5).unwrap();
    let pl = link_imposing_points(&fx.ideal, &spec).unwrap();
    assert_eq!((pl.result.computed.degree.clone(), pl.result.computed.genus), (vec![13], 13));
    assert!(!pl.result.residual_smooth);
}
