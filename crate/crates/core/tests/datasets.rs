use tilecoh::datasets::{self, load, run, run_checkpoints, Payload, RunOutput};

const ALL: [&str; 10] = [
    "thue-morse",
    "period-doubling",
    "fibonacci",
    "chair",
    "pinwheel",
    "penrose-rot",
    "chair-rot",
    "pinwheel-rot",
    "pinwheel-variant(8,1)",
    "pinwheel-variant(7,4)",
];

#[test]
fn every_checkpoint_passes() {
    for name in ALL {
        let ds = load(name).unwrap();
        let r = run_checkpoints(&ds);
        for c in &r.results {
            assert!(c.pass, "{name}: {} expected {} got {}", c.stage, c.expected, c.actual);
            assert!(!c.citation.is_empty());
        }
    }
}

#[test]
fn complex_cross_checks_hold() {
    for name in ["chair", "pinwheel"] {
        let ds = load(name).unwrap();
        let RunOutput::Complex(r) = run(&ds).unwrap() else { panic!() };
        for c in &r.cross_checks {
            assert!(c.holds, "{name}: {}", c.what);
        }
    }
}

#[test]
fn exported_complexes_reload() {
    for name in ["chair", "pinwheel", "thue-morse"] {
        let ds = load(name).unwrap();
        let text = datasets::export(&ds).unwrap();
        let cx = tilecoh::cellcx::json::from_json(&text).unwrap();
        if let Payload::Complex(orig) = &ds.payload {
            assert_eq!(&cx, orig);
        }
        assert!(cx.validate().valid);
    }
}
