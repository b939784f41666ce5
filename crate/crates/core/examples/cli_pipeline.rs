//! The command-line driver used as a library: generate a matrix, estimate its
//! DOS, compare with the dense reference and repeat the run from provenance.

use specsweep::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("specsweep_cli_pipeline");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();

    let steps: Vec<Vec<String>> = vec![
        vec!["gen".into(), "--cells".into(), "1".into(), "--out".into(), p("m.mtx")],
        vec!["dos".into(), "--input".into(), p("m.mtx"), "--method".into(), "ress".into(), "--nv".into(), "20".into(), "--out".into(), p("dos.csv")],
        vec!["exact".into(), "--input".into(), p("m.mtx"), "--against".into(), p("dos.csv"), "--out".into(), p("exact.csv")],
        vec!["rerun".into(), p("dos.csv.prov.json"), "--out".into(), p("again.csv")],
    ];
    for args in steps {
        println!("$ specsweep {}", args.join(" "));
        let code = run(std::iter::once("specsweep".to_string()).chain(args));
        assert_eq!(code, 0);
    }
    let a = std::fs::read(p("dos.csv")).expect("dos.csv");
    let b = std::fs::read(p("again.csv")).expect("again.csv");
    println!("rerun reproduces the CSV byte for byte: {}", a == b);
}
