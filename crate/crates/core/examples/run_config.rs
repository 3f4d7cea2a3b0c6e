// Drive an experiment from JSON, the way the `freqlab` binary does.

use freqlab::cli::{parse_config, run, RunOptions};

fn main() {
    let config = parse_config(
        r#"{ "kind": "profile",
             "field": { "catalog": "harmonic", "k": 3 },
             "radii": { "min": 0.05, "max": 0.9, "count": 50 },
             "expected_frequency": 6 }"#,
    )
    .unwrap();
    let out = std::env::temp_dir().join("freqlab_run_config_example");
    let outcome = run(&config, &RunOptions { out_dir: out.clone(), ..RunOptions::default() }).unwrap();
    print!("{}", outcome.summary());
    println!("exit code {}", outcome.exit_code());
    let _ = std::fs::remove_dir_all(out);
}
