//! Classical elementary systems: the empirical distance built from pair
//! Casimirs recovers the Euclidean distance between centre-of-mass lines.
//!
//! ```bash
//! cargo run --release --example classical_lines
//! ```

use spingeo::classical::{
    empirical_angle_classical, empirical_distance_classical, empirical_volume_classical,
    euclidean_line_distance, system_from_line, varpi_angle, Line3,
};
use spingeo::geom::Vec3;

fn main() {
    let l1 = Line3::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)).unwrap();
    let l2 = Line3::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 0.0)).unwrap();
    let l3 = Line3::new(Vec3::new(0.5, -1.0, 0.2), Vec3::new(0.3, 0.4, 1.0)).unwrap();

    // Systems carrying arbitrary Casimirs on the same lines.
    let s1 = system_from_line(&l1, 1.0, 0.25).unwrap();
    let s2 = system_from_line(&l2, 2.0, -0.5).unwrap();
    let s3 = system_from_line(&l3, 0.7, 0.0).unwrap();

    println!("line pair (1,2):");
    let d = empirical_distance_classical(&s1, &s2).unwrap();
    println!("  empirical |d12|       = {:.12}", d.abs());
    println!(
        "  Euclidean distance    = {:.12}",
        euclidean_line_distance(&l1, &l2)
    );
    println!(
        "  empirical angle       = {:.6} deg",
        empirical_angle_classical(&s1, &s2).unwrap().to_degrees()
    );

    println!("pair (1,3) and (2,3):");
    for (a, b, la, lb) in [(&s1, &s3, &l1, &l3), (&s2, &s3, &l2, &l3)] {
        let d = empirical_distance_classical(a, b).unwrap();
        println!(
            "  |d| = {:.12}  vs Euclidean {:.12}",
            d.abs(),
            euclidean_line_distance(la, lb)
        );
    }

    println!(
        "volume of the momentum tetrahedron: {:+.12}",
        empirical_volume_classical(&s1, &s2, &s3).unwrap()
    );
    println!(
        "varpi angle at system 2: {:.6} deg",
        varpi_angle(&s1, &s2, &s3).unwrap().to_degrees()
    );

    // Parallel lines go through the limit branch.
    let l4 = Line3::new(Vec3::new(1.5, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)).unwrap();
    let s4 = system_from_line(&l4, 1.3, 0.0).unwrap();
    let d = empirical_distance_classical(&s1, &s4).unwrap();
    println!(
        "parallel pair (1,4): |d| = {:.12} vs Euclidean {:.12}",
        d.abs(),
        euclidean_line_distance(&l1, &l4)
    );
}
