mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;
use turnvol::ingest::{parse_vtt, to_canonical_vtt};

#[test]
fn golden_fixtures() {
    let names = common::golden_names();
    assert!(names.len() >= 12, "only {} fixtures", names.len());
    let failures: Vec<String> = names
        .iter()
        .filter_map(|n| common::check_golden(n).err().map(|e| format!("{n}: {e}")))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn golden_successes_survive_canonical_rewrite() {
    for name in common::golden_names() {
        let bytes = std::fs::read(common::fixture_dir().join(format!("vtt/{name}.vtt"))).unwrap();
        let Ok((utts, _)) = parse_vtt(&bytes) else { continue };
        let (again, diag) = parse_vtt(to_canonical_vtt(&utts).as_bytes()).unwrap();
        assert!(diag.warnings.is_empty(), "{name}");
        assert_eq!(again, utts, "{name}");
    }
}

#[test]
fn utf16_error_mentions_encoding() {
    let bytes = std::fs::read(common::fixture_dir().join("vtt/utf16.vtt")).unwrap();
    let msg = parse_vtt(&bytes).unwrap_err().to_string();
    assert!(msg.contains("UTF-8"), "{msg}");
}

#[test]
fn random_bytes_never_panic() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..2000 {
        let input = common::fuzz_input(&mut rng);
        if let Ok((utts, diag)) = parse_vtt(&input) {
            assert!(!utts.is_empty());
            assert_eq!(diag.source_byte_count, input.len());
            for (i, u) in utts.iter().enumerate() {
                assert_eq!(u.index, i);
                assert!(u.end_s > u.start_s && u.start_s >= 0.0);
                assert!(!u.speaker_id.is_empty());
            }
        }
    }
}
