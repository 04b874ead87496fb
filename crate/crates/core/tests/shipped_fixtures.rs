use std::path::PathBuf;

use nonhaus_core::document::{parse_system, system_to_json};
use nonhaus_core::fixtures::catalog;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn shipped_files_match_the_catalog() {
    for (name, build) in catalog() {
        let path = dir().join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let expected = build();
        assert_eq!(text.trim_end(), system_to_json(&expected), "{name}: regenerate with the write_fixtures example");
        let parsed = parse_system(&text).unwrap();
        assert_eq!(parsed.closure_cell_classes().labelled(&parsed), expected.closure_cell_classes().labelled(&expected));
    }
}
