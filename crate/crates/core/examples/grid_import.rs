// Export a catalog field to the grid CSV format, import it back and compare
// its frequency profile with the analytic one.

use freqlab::field::{import_grid_field, make_bessel_mode, GridField, ORIGIN};
use freqlab::frequency::{frequency_profile_with, linspace, ProfileSettings};

fn main() {
    let (u, v) = make_bessel_mode(1, 9.0).unwrap();
    let h = 0.02;
    let grid = GridField::from_field(&u, h, 1.0).unwrap();
    let path = std::env::temp_dir().join("freqlab_grid_example.csv");
    grid.write_csv(&path).unwrap();
    let imported = import_grid_field(&path, h, 2).unwrap();

    let radii = linspace(0.1, 0.8, 8);
    let settings = ProfileSettings { pde_tolerance: 1e-3, ..ProfileSettings::default() };
    let exact = frequency_profile_with(&u, &v, &ORIGIN, &radii, 0.0, &settings).unwrap();
    let sampled = frequency_profile_with(&imported, &v, &ORIGIN, &radii, 0.0, &settings).unwrap();
    for ((r, a), (_, b)) in exact.guarded().iter().zip(sampled.guarded()) {
        println!("r={r:.2}: N analytic {a:.8}, N from grid {b:.8}");
    }
    let _ = std::fs::remove_file(path);
}
