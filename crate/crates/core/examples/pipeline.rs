//! The file-based pipeline driven through the library entry point of the
//! `cnl` binary. Artifacts go to a temporary directory.
//!
//! cargo run --example pipeline

use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/config.json");
    let out = tempfile::tempdir()?;
    let base = [
        "cnl".into(),
        "--config".into(),
        config.into_os_string(),
        "--out".into(),
        out.path().as_os_str().to_owned(),
    ];

    // Stage by stage, then a one-shot rerun with another seed.
    for stage in ["ingest", "graph", "metrics", "embed", "aggression", "geo", "report"] {
        let mut args = base.to_vec();
        args.push(stage.into());
        let code = cnl::cli::run(args);
        assert_eq!(code, 0, "{stage} failed");
    }
    let first = std::fs::read(out.path().join("report.json"))?;

    let mut args = base.to_vec();
    args.extend(["--seed".into(), "7".into(), "run".into()]);
    assert_eq!(cnl::cli::run(args), 0);
    let second = std::fs::read(out.path().join("report.json"))?;
    println!("report changed with the seed: {}", first != second);

    let mut files: Vec<_> = std::fs::read_dir(out.path())?
        .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect::<Result<_, _>>()?;
    files.sort();
    println!("artifacts: {}", files.join(", "));
    Ok(())
}
