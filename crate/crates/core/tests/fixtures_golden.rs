use std::fs;
use std::path::PathBuf;

use multidescent::gallery::{fixture_library, Fixture, FixtureItem};
use multidescent::json::{functor_document, multicategory_document, parse, to_string};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn render(f: &Fixture) -> String {
    let doc = match &f.item {
        FixtureItem::Multicategory(m) => multicategory_document(m),
        FixtureItem::Functor(p) => functor_document(p),
    };
    to_string(&doc.named(&f.name, &f.description))
}

/// Set `UPDATE_FIXTURES=1` to rewrite the shipped files.
#[test]
fn shipped_fixtures_match_the_library() {
    let update = std::env::var_os("UPDATE_FIXTURES").is_some();
    for f in fixture_library() {
        let path = dir().join(format!("{}.json", f.name));
        let expected = render(&f);
        if update {
            fs::write(&path, &expected).unwrap();
            continue;
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, expected, "{} is stale", path.display());
    }
}

#[test]
fn shipped_fixtures_round_trip_bit_exactly() {
    let mut seen = 0;
    for entry in fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let doc = parse(&text).unwrap();
        assert_eq!(to_string(&doc), text, "{}", path.display());
        match doc.kind() {
            "multicategory" => assert!(doc.multicategory().unwrap().is_valid()),
            "functor" => assert!(doc.functor().unwrap().is_valid()),
            other => panic!("unexpected kind {other}"),
        }
        seen += 1;
    }
    assert_eq!(seen, fixture_library().len());
}
