use skewhad::field::{smallest_irreducible, FieldConfig, FieldTables};
use skewhad::hadamard::gate0_verify;
use skewhad::manifest::{build, BuildConfig, Manifest};

fn config_1252() -> BuildConfig {
    BuildConfig {
        p: 5,
        e: 4,
        n_classes: 16,
        i0: (4..=11).collect(),
        i1: (0..=7).collect(),
        modulus: None,
        generator: None,
    }
}

#[test]
fn other_generators_also_certify() {
    let tables = FieldTables::build(&FieldConfig::new(5, 4)).unwrap();
    for g in tables.primitive_elements().skip(1).step_by(37).take(4) {
        let art = build(&BuildConfig {
            generator: Some(g),
            ..config_1252()
        })
        .unwrap();
        assert_eq!(art.search.trace, vec![(g, true)]);
        assert!(gate0_verify(&art.matrix).pass());
    }
}

#[test]
fn another_modulus_certifies() {
    // x^4 + 3 is irreducible over GF(5) and differs from the default x^4 + 2.
    let modulus = vec![3, 0, 0, 0, 1];
    assert_ne!(modulus, smallest_irreducible(5, 4));
    let art = build(&BuildConfig {
        modulus: Some(modulus.clone()),
        ..config_1252()
    })
    .unwrap();
    assert!(art.pass());
    assert_eq!(art.search.tables.modulus(), &modulus[..]);
}

#[test]
fn manifest_records_resolved_configuration() {
    let cfg = config_1252();
    let art = build(&cfg).unwrap();
    let files = art.bundle_files();
    let text = Manifest::new(art.resolved_config(&cfg), &files).to_text();
    assert!(text.contains("# modulus=2,0,0,0,1\n"));
    assert!(text.contains("# generator=6\n"));
    let m = Manifest::from_text(&text).unwrap();
    assert_eq!(build(&m.config).unwrap().bundle_files(), files);
}
