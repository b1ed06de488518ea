//! The classical limit: along s = m = j with P = j, the empirical distance
//! between two fixed skew lines converges to their Euclidean distance and
//! the empirical angle converges to the axis angle.
//!
//! ```bash
//! cargo run --release --example classical_limit
//! ```

use spingeo::classical::{euclidean_line_distance, Line3};
use spingeo::empirical::{
    classical_limit_distance, empirical_angle, placement_for_line, PlacedState,
};
use spingeo::geom::Vec3;
use spingeo::half::HalfInt;
use spingeo::operators::ElementaryParams;
use spingeo::swsh::QNum;

fn main() {
    let l1 = Line3::new(Vec3::new(0.1, -0.3, 0.2), Vec3::new(1.0, 0.4, -0.2)).unwrap();
    let l2 = Line3::new(Vec3::new(-0.4, 0.8, 1.4), Vec3::new(0.9, 1.0, 0.1)).unwrap();
    let truth = euclidean_line_distance(&l1, &l2);
    println!("Euclidean distance of the target lines: {truth:.12}\n");

    println!(
        "{:>6} {:>16} {:>12} {:>12}",
        "j", "|d12|", "rel_err", "uncertainty"
    );
    for dj in [2i64, 8, 32, 128, 512, 2048] {
        let j = HalfInt::from_doubled(dj);
        let g = classical_limit_distance(&l1, &l2, j, 1.0, 1.0).unwrap();
        println!(
            "{:>6} {:>16.12} {:>12.3e} {:>12.3e}",
            j,
            g.d12.abs(),
            (g.d12.abs() - truth).abs() / truth,
            g.uncertainty.unwrap_or(f64::NAN),
        );
    }

    // The empirical angle approaches the axis angle beta12.
    let beta = spingeo::clamped_acos(l1.dir().dot(l2.dir())).unwrap();
    println!("\naxis angle beta12 = {:.9} rad", beta);
    println!("{:>8} {:>16} {:>12}", "j", "omega12", "omega-beta");
    for dj in [8i64, 128, 2048, 20000] {
        let j = HalfInt::from_doubled(dj);
        let params = ElementaryParams::new(j.as_f64(), j).unwrap();
        let q = QNum::new(j, j, j).unwrap();
        let a = PlacedState::new(params, q, placement_for_line(&l1)).unwrap();
        let b = PlacedState::new(params, q, placement_for_line(&l2)).unwrap();
        let omega = empirical_angle(&a, &b).unwrap();
        println!("{:>8} {:>16.9} {:>12.3e}", j, omega, (omega - beta).abs());
    }
}
