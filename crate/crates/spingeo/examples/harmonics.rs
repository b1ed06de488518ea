//! Spin-weighted harmonics on the momentum sphere: pointwise values, the
//! edth ladder, and orthonormality checked by quadrature.
//!
//! ```bash
//! cargo run --release --example harmonics
//! ```

use num_complex::Complex64;
use spingeo::swsh::{
    build_quadrature, edth_ladder, eval_harmonic, laplacian_eigenvalue, QNum, SpherePoint,
};

fn main() {
    let pt = SpherePoint::new(std::f64::consts::FRAC_PI_3, 0.8).unwrap();

    println!("values at theta = pi/3, phi = 0.8:");
    for (ds, dj, dm) in [
        (0i64, 0i64, 0i64),
        (0, 2, 0),
        (0, 2, 2),
        (1, 1, 1),
        (2, 4, -2),
        (1, 3, 1),
    ] {
        let q = QNum::from_doubled(ds, dj, dm).unwrap();
        let v = eval_harmonic(q, &pt);
        println!("  {q}: {:+.12} {:+.12}i", v.re, v.im);
    }

    // The edth operators ladder the spin weight at fixed (j, m).
    let p_radius = 1.0;
    let q = QNum::from_doubled(0, 2, 0).unwrap();
    let (coeff, target) = edth_ladder(q, false, p_radius);
    println!("\nedth {q} = {coeff:+.6} * {}", target.unwrap());
    let (coeff, target) = edth_ladder(target.unwrap(), true, p_radius);
    println!("edth' back down: {coeff:+.6} * {}", target.unwrap());
    println!(
        "laplacian eigenvalue at {q}: {:+.6}",
        laplacian_eigenvalue(q, p_radius)
    );

    // Orthonormality via Gauss quadrature on the unit sphere.
    let quad = build_quadrature(2 * (3 + 3));
    let states: Vec<QNum> = [(1i64, 1i64, 1i64), (1, 3, 1), (1, 5, -1), (1, 3, 3)]
        .iter()
        .map(|&(ds, dj, dm)| QNum::from_doubled(ds, dj, dm).unwrap())
        .collect();
    println!("\nGram matrix of four s = 1/2 harmonics (quadrature):");
    for a in &states {
        let row: Vec<String> = states
            .iter()
            .map(|b| {
                let ip = quad.integrate(|pt| eval_harmonic(*a, pt).conj() * eval_harmonic(*b, pt));
                format!("{:+.3e}", (ip - expected(a, b)).norm())
            })
            .collect();
        println!("  deviation from identity: {}", row.join("  "));
    }
}

fn expected(a: &QNum, b: &QNum) -> Complex64 {
    if a == b {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}
