use std::collections::BTreeMap;
use std::fs;
use std::io::Cursor;

use coocnet::corpus::{load_corpus, read_manifest, CorpusError, SI_BOOK_MANIFEST};

#[test]
fn bundled_book_list_has_thirteen_authors_of_six() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("manifest.csv"), SI_BOOK_MANIFEST).unwrap();
    let mut rows = csv::Reader::from_reader(SI_BOOK_MANIFEST.as_bytes());
    for record in rows.records() {
        let path = dir.path().join(&record.unwrap()[0]);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, "placeholder text").unwrap();
    }
    let docs = load_corpus(dir.path().join("manifest.csv")).unwrap();
    assert_eq!(docs.len(), 78);
    let mut per_author: BTreeMap<&str, usize> = BTreeMap::new();
    for d in &docs {
        *per_author.entry(d.author()).or_default() += 1;
    }
    assert_eq!(per_author.len(), 13);
    assert!(per_author.values().all(|&n| n == 6));
}

#[test]
fn missing_text_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = "path,author,title\nmissing.txt,Someone,Nothing\n";
    let err = read_manifest(Cursor::new(manifest), dir.path()).unwrap_err();
    assert!(matches!(err, CorpusError::Text { row: 1, .. }), "{err}");
}
