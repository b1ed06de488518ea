//! The basic observables as sparse operators: Casimir action, commutation
//! relations, and the eigenvalue table of the centre-of-mass-square family.
//!
//! ```bash
//! cargo run --release --example operator_algebra
//! ```

use num_complex::Complex64;
use spingeo::half::HalfInt;
use spingeo::operators::{apply, moment, spectra, Axis, ElementaryParams, Letter, StateVector};
use spingeo::swsh::QNum;

fn main() {
    let params = ElementaryParams::new(2.0, HalfInt::ONE).unwrap();
    let q = QNum::from_doubled(2, 4, 2).unwrap();
    let state = StateVector::basis(params, q).unwrap();

    // W acts as the Casimir hbar P s.
    let w_image = apply(&[Letter::W], &state);
    println!(
        "W on {q}: coefficient {:+.12} (expected hbar P s = {})",
        w_image.coeff(&q).re,
        params.casimir_w()
    );

    // [J_x, J_y] = i hbar J_z on any state.
    let mut residual = apply(&[Letter::J(Axis::X), Letter::J(Axis::Y)], &state);
    let yx = apply(&[Letter::J(Axis::Y), Letter::J(Axis::X)], &state);
    residual.axpy(Complex64::new(-1.0, 0.0), &yx);
    let jz = apply(&[Letter::J(Axis::Z)], &state);
    residual.axpy(Complex64::new(0.0, -1.0), &jz);
    println!(
        "|[J_x, J_y] - i hbar J_z| on {q}: {:.3e}",
        residual.norm_sqr().sqrt()
    );

    // Expectation values: the momentum points along z.
    for axis in Axis::ALL {
        let v = moment(&state, &[Letter::P(axis)]).unwrap();
        println!("<p_{axis:?}> = {:+.12}", v.re);
    }

    // Eigenvalues of C.C, J.J, L.L for a few j at fixed s.
    println!("\nspectra at s = 1, P = 2, hbar = 1:");
    println!("{:>5} {:>14} {:>14} {:>14}", "j", "c2", "j2", "l2");
    for dj in (2..=10i64).step_by(2) {
        let sp = spectra(&params, HalfInt::from_doubled(dj)).unwrap();
        println!(
            "{:>5} {:>14.6} {:>14.6} {:>14.6}",
            HalfInt::from_doubled(dj),
            sp.c2,
            sp.j2,
            sp.l2
        );
    }
}
