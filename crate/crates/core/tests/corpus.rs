use std::fs;
use std::path::PathBuf;

use tamc_core::bisim::bisim_check;
use tamc_core::calculi::TerminalClass;
use tamc_core::surface::{parse, print_source};
use tamc_core::syntax::SourceTerm;

fn corpus() -> Vec<(String, SourceTerm)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "lam"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let text = fs::read_to_string(&p).unwrap();
            let t = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, t)
        })
        .collect()
}

#[test]
fn every_file_parses_and_reprints() {
    let c = corpus();
    assert!(c.len() >= 20);
    for (name, t) in c {
        assert!(t.is_closed(), "{name}");
        assert_eq!(parse(&print_source(&t)).unwrap(), t, "{name}");
    }
}

#[test]
fn clash_files_clash_and_the_rest_succeed() {
    for (name, t) in corpus() {
        let r = bisim_check(&t, 10_000).unwrap_or_else(|d| panic!("{name}: {d}"));
        if name.starts_with("clash_") {
            assert!(matches!(r.terminal, TerminalClass::Clash(_)), "{name}: {}", r.terminal);
        } else {
            assert_eq!(r.terminal, TerminalClass::Value, "{name}");
        }
    }
}
