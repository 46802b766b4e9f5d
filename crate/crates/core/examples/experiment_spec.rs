//! A seeded experiment described in JSON, as run by `tubal run --spec`.

use tubal::experiment::{run_experiment, ExperimentSpec};

const SPEC: &str = r#"{
  "task": "complete",
  "seed": 2024,
  "source": {"synth": {"dims": [24, 24, 6], "rank": 3}},
  "degrade": {"gaussian_sigma": 0.1, "mask_rate": 0.5},
  "solver": {"penalty": "scad", "gamma": 25, "mu0": 0.001, "outer_iters": 5},
  "outputs": {"estimate": "estimate.tns", "report": "report.txt"}
}"#;

fn main() -> tubal::Result<()> {
    let spec = ExperimentSpec::from_json(SPEC)?;
    let dir = std::env::temp_dir().join("tubal_experiment");
    std::fs::create_dir_all(&dir)?;
    let outcome = run_experiment(&spec, &dir)?;
    print!("{}", outcome.report.to_key_value());
    println!("outputs in {}", dir.display());
    Ok(())
}
