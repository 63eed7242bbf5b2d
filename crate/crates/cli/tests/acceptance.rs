//! Acceptance criterion 13: two runs of the reference config produce
//! identical artifact digests (the manifest timestamp is the only field
//! allowed to differ).

use std::fs;
use uncertop_cli::run;

#[test]
fn criterion_13_determinism() {
    let config = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/hankel_alpha0_reference.json");
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let sa = run(&config, &out_a, None).unwrap();
    let sb = run(&config, &out_b, None).unwrap();
    assert!(sa.all_passed && sb.all_passed);

    let ma: serde_json::Value =
        serde_json::from_slice(&fs::read(out_a.join("manifest.json")).unwrap()).unwrap();
    let mb: serde_json::Value =
        serde_json::from_slice(&fs::read(out_b.join("manifest.json")).unwrap()).unwrap();

    let ea = ma["entries"].as_array().unwrap();
    let eb = mb["entries"].as_array().unwrap();
    assert_eq!(ea.len(), eb.len());
    let mut identical = true;
    for (a, b) in ea.iter().zip(eb) {
        identical &= a == b; // file name, task, pass and sha256 all equal
                             // and the bytes themselves
        let fa = fs::read(out_a.join(a["file"].as_str().unwrap())).unwrap();
        let fb = fs::read(out_b.join(b["file"].as_str().unwrap())).unwrap();
        identical &= fa == fb;
    }
    println!(
        "criterion 13 determinism: {} ({} artifacts, digests identical)",
        if identical { "PASS" } else { "FAIL" },
        ea.len()
    );
    assert!(identical);
}
