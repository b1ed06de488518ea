//! Quantum empirical distance between two placed elementary systems,
//! including the universal parallel-axis case where the distance is a pure
//! quantum number.
//!
//! ```bash
//! cargo run --release --example empirical_distance
//! ```

use spingeo::empirical::{empirical_distance, uncertainty_budget, E3Placement, PlacedState};
use spingeo::geom::Vec3;
use spingeo::half::HalfInt;
use spingeo::operators::ElementaryParams;
use spingeo::swsh::QNum;

fn show(label: &str, s1: &PlacedState, s2: &PlacedState) {
    let g = empirical_distance(s1, s2).unwrap();
    println!("{label}");
    println!("  d12            = {:+.12}", g.d12);
    println!(
        "  numerator      = {:+.12} (translational {:+.6}, quantum {:+.6})",
        g.numerator, g.numerator_translational, g.numerator_quantum
    );
    println!("  D^2            = {:.12}", g.dsq);
    println!("  beta12         = {:.6} deg", g.beta12.to_degrees());
    match uncertainty_budget(s1, s2) {
        Ok(u) => println!(
            "  uncertainty    = {:.6} (A-term {:.3e}, B-term {:.3e})",
            u.total, u.relative_a, u.relative_b
        ),
        Err(e) => println!("  uncertainty    : {e}"),
    }
    println!("  classical ref  = {:.12}", g.classical_ref);
}

fn main() {
    // Two spin-1/2 systems: one at the origin along z, one shifted along x
    // with its axis tilted by 60 degrees.
    let params = ElementaryParams::new(1.0, HalfInt::HALF).unwrap();
    let q = QNum::from_doubled(1, 1, 1).unwrap();
    let s1 = PlacedState::new(params, q, E3Placement::identity()).unwrap();
    let s2 = PlacedState::new(
        params,
        q,
        E3Placement {
            euler: [0.0, std::f64::consts::PI / 3.0, 0.0],
            xi: Vec3::new(1.0, 0.0, 0.0),
        },
    )
    .unwrap();
    show("spin-1/2 pair, tilted and shifted:", &s1, &s2);

    // Parallel axes: the translational term drops out and the distance is
    // universal, set by the Casimirs and the quantum numbers alone.
    let s3 = PlacedState::new(
        params,
        q,
        E3Placement {
            euler: [0.0, 0.0, 0.0],
            xi: Vec3::new(5.0, -3.0, 2.0),
        },
    )
    .unwrap();
    show(
        "\nsame axes, large offset (universal quantum distance):",
        &s1,
        &s3,
    );

    // Higher spin at a larger radius: the quantum correction shrinks.
    let params5 = ElementaryParams::new(10.0, HalfInt::from_int(5)).unwrap();
    let q5 = QNum::from_doubled(10, 10, 10).unwrap();
    let t1 = PlacedState::new(params5, q5, E3Placement::identity()).unwrap();
    let t2 = PlacedState::new(
        params5,
        q5,
        E3Placement {
            euler: [0.0, std::f64::consts::PI / 3.0, 0.0],
            xi: Vec3::new(1.0, 0.0, 0.0),
        },
    )
    .unwrap();
    show("\nspin-5 pair on the same geometry:", &t1, &t2);
}
