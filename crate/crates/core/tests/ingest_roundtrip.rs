mod common;

use std::path::PathBuf;

use common::{random_classes, rng};
use oodq::ingest::{self, write_odl, IngestError};
use oodq::synth::generated_model;
use oodq::{load_model_file, parse_source, write_model_file, ClassModel, Execution};
use proptest::prelude::*;

fn both_ways(model: &ClassModel) {
    let json = write_model_file(model);
    assert_eq!(&load_model_file(&json).unwrap(), model, "interchange:\n{json}");
    let odl = write_odl(model);
    assert_eq!(&parse_source(&odl, "gen.odl").unwrap(), model, "odl:\n{odl}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_models_round_trip(seed in any::<u64>()) {
        let model = ClassModel::new(random_classes(&mut rng(seed))).unwrap();
        both_ways(&model);
    }
}

#[test]
fn generated_models_round_trip() {
    for seed in 0..5 {
        both_ways(&generated_model(120, seed));
    }
}

#[test]
fn fixture_corpus_round_trips() {
    for entry in std::fs::read_dir(common::fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        if ingest::InputKind::of(&path).is_none() && !path.is_dir() {
            continue;
        }
        let (model, _) = ingest::load_inputs(std::slice::from_ref(&path), Execution::Sequential).unwrap();
        both_ways(&model);
    }
}

#[test]
fn interchange_fixture_matches_its_source() {
    let load = |name: &str| {
        ingest::load_inputs(&[common::fixture(name)], Execution::Sequential)
            .unwrap()
            .0
    };
    assert_eq!(load("f1.odl"), load("f1.oodm.json"));
}

#[test]
fn f1_parse_shape() {
    let text = std::fs::read_to_string(common::fixture("f1.odl")).unwrap();
    let m = parse_source(&text, "f1.odl").unwrap();
    assert_eq!(m.len(), 3);
    assert_eq!(m.inheritance_edges().len(), 1);
    assert_eq!(m.aggregation_edges().len(), 1);
}

#[test]
fn split_design_merges_across_files() {
    let (model, sources) =
        ingest::load_inputs(&[common::fixture("split")], Execution::Parallel).unwrap();
    assert_eq!(sources.len(), 2);
    assert_eq!(model.len(), 4);
    assert_eq!(model.aggregation_components().len(), 1);
    assert!(model.validate().is_empty());
}

#[test]
fn duplicate_class_across_inputs_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.odl"), "class A {}").unwrap();
    std::fs::write(dir.path().join("b.odl"), "class A {}").unwrap();
    match ingest::load_inputs(&[dir.path().to_path_buf()], Execution::Sequential) {
        Err(IngestError::Conflict { class }) => assert_eq!(class, "A"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unresolved_parent_fails_at_merge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.odl");
    std::fs::write(&path, "class A extends Missing {}").unwrap();
    let err = ingest::load_inputs(&[path], Execution::Sequential).unwrap_err();
    assert!(matches!(err, IngestError::Invalid { .. }), "{err:?}");
    assert!(err.to_string().contains("Missing"));
}

#[test]
fn parse_errors_report_position() {
    let err = parse_source("class A {\n  public int ;\n}", "bad.odl").unwrap_err();
    match err {
        IngestError::Parse(e) => {
            assert_eq!(e.position.file, PathBuf::from("bad.odl"));
            assert_eq!((e.position.line, e.position.column), (2, 14));
            assert_eq!(e.expected, "member name");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn missing_file_is_io_error() {
    let err = ingest::load_inputs(&[PathBuf::from("/no/such/file.odl")], Execution::Sequential)
        .unwrap_err();
    assert!(matches!(err, IngestError::Io { .. }));
}
