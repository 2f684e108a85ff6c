//! Drive an analysis through a `RunConfig`, then replay its manifest.

use inducing::cli::{self, Analysis, Budgets, RunConfig};

fn main() -> inducing::Result<()> {
    let dir = std::env::temp_dir().join("inducing-example");
    let config = RunConfig {
        scheme: Some("builtin:weighted-infinite?beta=0.3".into()),
        phi: "phi".into(),
        psi: None,
        analysis: Analysis::Gibbs,
        budgets: Budgets {
            levels: 6,
            per_level: 3,
            ..Budgets::default()
        },
        seed: None,
        output: dir.join("first"),
    };
    let first = cli::run(&config)?;
    for f in &first.files {
        println!("wrote {}", f.display());
    }
    let again = cli::replay(&first.manifest, Some(dir.join("again")))?;
    let same = first
        .files
        .iter()
        .zip(&again.files)
        .all(|(a, b)| std::fs::read(a).ok() == std::fs::read(b).ok());
    println!("replay identical: {same}");
    Ok(())
}
