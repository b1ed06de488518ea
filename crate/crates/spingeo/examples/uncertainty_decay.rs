//! Decay of the distance uncertainty along the classical-limit sequence:
//! the numerator term falls off like 1/j and the denominator term like
//! 1/sqrt(j).
//!
//! ```bash
//! cargo run --release --example uncertainty_decay
//! ```

use spingeo::empirical::{empirical_distance, uncertainty_budget, E3Placement, PlacedState};
use spingeo::geom::Vec3;
use spingeo::half::HalfInt;
use spingeo::operators::ElementaryParams;
use spingeo::swsh::QNum;

fn main() {
    println!(
        "{:>6} {:>14} {:>12} {:>12} {:>12}",
        "j", "|d12|", "A-term", "B-term", "delta d"
    );
    let mut prev: Option<(f64, f64, f64)> = None;
    for dj in [16i64, 32, 64, 128, 256, 512] {
        let j = HalfInt::from_doubled(dj);
        let params = ElementaryParams::new(j.as_f64(), j).unwrap();
        let q = QNum::new(j, j, j).unwrap();
        let a = PlacedState::new(params, q, E3Placement::identity()).unwrap();
        let b = PlacedState::new(
            params,
            q,
            E3Placement {
                euler: [0.0, std::f64::consts::PI / 3.0, 0.0],
                xi: Vec3::new(1.0, 0.0, 0.0),
            },
        )
        .unwrap();
        let g = empirical_distance(&a, &b).unwrap();
        let u = uncertainty_budget(&a, &b).unwrap();
        print!(
            "{:>6} {:>14.9} {:>12.4e} {:>12.4e} {:>12.4e}",
            j,
            g.d12.abs(),
            u.relative_a,
            u.relative_b,
            u.total
        );
        if let Some((pa, pb, pj)) = prev {
            let ratio = (dj as f64 / pj).ln();
            print!(
                "   slopes: A {:+.2}, B {:+.2}",
                (u.relative_a / pa).ln() / ratio,
                (u.relative_b / pb).ln() / ratio
            );
        }
        println!();
        prev = Some((u.relative_a, u.relative_b, dj as f64));
    }
    println!("\nexpected slopes: A-term -1 (1/j), B-term -1/2 (1/sqrt j)");
}
