mod common;

use common::{fixture_kb, fixture_pipeline, fixtures};
use ie_core::kb::{ConfigError, PipelineConfig};
use ie_core::pipeline::{emit_json, run_documents, run_pipeline, Document, PipelineError};

fn announcement() -> Document {
    let text = std::fs::read_to_string(fixtures().join("docs/announcement.txt")).unwrap();
    Document::new("announcement", text)
}

#[test]
fn empty_document_yields_empty_result() {
    let r = run_pipeline(&Document::new("empty", ""), fixture_kb(), &fixture_pipeline()).unwrap();
    assert!(r.tokens.is_empty());
    assert!(r.items().is_empty());
    assert!(r.templates.is_empty());
    let json: serde_json::Value = serde_json::from_slice(&emit_json(&r)).unwrap();
    assert_eq!(json["tokens"], serde_json::json!([]));
}

#[test]
fn template_fillers_are_cached_items() {
    let r = run_pipeline(&announcement(), fixture_kb(), &fixture_pipeline()).unwrap();
    assert!(!r.templates.is_empty());
    for t in &r.templates {
        for item in t.items() {
            assert!(
                r.items().iter().any(|c| &c.item == item),
                "{} slot item {item:?} is not in the cache",
                t.fcp
            );
        }
    }
}

#[test]
fn announcement_frames() {
    let r = run_pipeline(&announcement(), fixture_kb(), &fixture_pipeline()).unwrap();
    let mut frames: Vec<(&str, &str, bool)> = r
        .templates
        .iter()
        .map(|t| (t.fcp.as_str(), t.anchor.lexeme.as_str(), t.anchor.passive))
        .collect();
    frames.sort();
    assert_eq!(
        frames,
        [
            ("event", "stattfinden", false),
            ("event", "stattfinden", false),
            ("intrans", "beginnen", false),
            ("talk", "sprechen", false),
            ("trans", "benutzen", false),
            ("trans", "organisieren", true),
        ]
    );
    let passive = r.templates.iter().find(|t| t.anchor.passive).unwrap();
    let agent = &passive.slots["agent"][0];
    assert_eq!(agent.ty, "agent");
    assert!(passive.slots.contains_key("obj"));
    assert!(!passive.slots.contains_key("subj"));
}

const RANGE_TEXT: &str = "Die Tagung findet vom 22. (8.00 h) bis einschl. 23. Oktober (18.00 h) statt.";

fn range_config(mode: &str, grammars: &str) -> PipelineConfig {
    let src = format!("[[stage]]\nname = \"dates\"\nmode = \"{mode}\"\ngrammars = [{grammars}]\n");
    PipelineConfig::parse(&src, "test.toml").unwrap()
}

#[test]
fn interleaved_stage_feeds_its_own_grammars() {
    let config = range_config("interleave", "\"date-range\", \"date-time\"");
    let r = run_pipeline(&Document::new("range", RANGE_TEXT), fixture_kb(), &config).unwrap();
    let pp = r.items().iter().find(|c| c.item.ty == "pp").expect("interval from cached dates");
    assert_eq!(pp.item.out.get("from").and_then(|v| v.as_av()).and_then(|a| a.get_int("day")), Some(22));
    assert_eq!(pp.item.out.get("to").and_then(|v| v.as_av()).and_then(|a| a.get_int("month")), Some(10));
}

#[test]
fn cascade_rejects_consumer_before_producer() {
    let config = range_config("cascade", "\"date-range\", \"date-time\"");
    let err = run_pipeline(&Document::new("range", RANGE_TEXT), fixture_kb(), &config).unwrap_err();
    match err {
        PipelineError::Config(ConfigError::Invalid(d)) => {
            assert!(d.iter().any(|d| d.message.contains("interleave")), "{d:?}")
        }
        other => panic!("unexpected error {other}"),
    }
    // Producer first is fine.
    let config = range_config("cascade", "\"date-time\", \"date-range\"");
    let r = run_pipeline(&Document::new("range", RANGE_TEXT), fixture_kb(), &config).unwrap();
    assert!(r.items().iter().any(|c| c.item.ty == "pp"));
}

#[test]
fn unknown_grammar_is_rejected() {
    let config = range_config("cascade", "\"no-such-grammar\"");
    assert!(config.validate(fixture_kb()).is_err());
}

#[test]
fn json_is_byte_deterministic_across_workers() {
    let docs: Vec<Document> = std::fs::read_dir(fixtures().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| Document::new(p.display().to_string(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    let render = |workers| -> Vec<Vec<u8>> {
        run_documents(&docs, fixture_kb(), &fixture_pipeline(), workers)
            .unwrap()
            .into_iter()
            .map(|r| emit_json(&r.unwrap()))
            .collect()
    };
    let one = render(1);
    assert_eq!(one, render(4));
    assert_eq!(one, render(1));
}
