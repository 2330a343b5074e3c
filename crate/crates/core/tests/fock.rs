mod common;

use cvdecomp::algebra::parse_polynomial;
use cvdecomp::cli::fourier_conjugation;
use cvdecomp::compiler::instantiate;
use cvdecomp::fock::{sequence_distance, subspace_distance, unitarity_defect, FockSpace};
use cvdecomp::rewrite::{conjugation_identity_check, power_tree};
use cvdecomp::sequence::{Gate, GateSequence};
use cvdecomp::solver::library;
use num_complex::Complex64;
use rand::Rng;

fn random_gate(r: &mut impl Rng, modes: usize) -> Gate {
    let mode = r.random_range(0..modes);
    match r.random_range(0..3) {
        0 => Gate::Fourier(mode),
        1 if modes > 1 => Gate::Cz { a: 0, b: 1, s: r.random_range(-0.5..0.5) },
        _ => Gate::X { mode, power: r.random_range(1..=3), s: r.random_range(-0.5..0.5) },
    }
}

#[test]
fn generated_unitaries_are_unitary() {
    let mut r = common::rng(11);
    for (n, modes) in [(32, 1), (12, 2)] {
        let space = FockSpace::new(n, modes).unwrap();
        for _ in 0..20 {
            let g = random_gate(&mut r, modes);
            let u = space.gate_unitary(&g).unwrap();
            assert!(unitarity_defect(&u) < 1e-10, "{g:?}");
        }
        let mut seq = GateSequence::new(modes);
        for _ in 0..6 {
            seq.push(random_gate(&mut r, modes));
        }
        assert!(unitarity_defect(&space.sequence_unitary(&seq).unwrap()) < 1e-10);
    }
}

#[test]
fn distance_ignores_global_phase() {
    let space = FockSpace::new(32, 1).unwrap();
    let mut seq = GateSequence::new(1);
    seq.push(Gate::X { mode: 0, power: 2, s: 0.2 });
    let block = space.subspace_block(6);
    let u = space.apply_sequence(&seq, &block).unwrap();
    let v = &u * Complex64::from_polar(1.0, 0.7);
    assert!(subspace_distance(&u, &v) < 1e-12);
    let h = parse_polynomial("X0^2").unwrap();
    let d = sequence_distance(&space, &seq, &h, 0.2, 6).unwrap();
    assert!(d < 1e-10, "{d:e}");
}

#[test]
fn identity_distances_shrink_with_truncation() {
    let p3 = parse_polynomial("P0^3").unwrap();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for n in [32, 64, 128] {
        let space = FockSpace::new(n, 1).unwrap();
        let f = sequence_distance(&space, &fourier_conjugation(0.3), &p3, 0.3, 6).unwrap();
        let c = conjugation_identity_check(0.2, &space, 6).unwrap().distance;
        assert!(f <= last.0 + 1e-8 && c <= last.1 + 1e-8, "N={n}: {f:e} {c:e} after {last:?}");
        last = (f, c);
    }
    assert!(last.0 < 1e-6 && last.1 < 1e-8, "{last:?}");
}

/// The fourth-order nested scheme against the exact nested-commutator exponential:
/// halving the scheme parameter shrinks the distance by about `2^5`.
#[test]
fn nested_scheme_distance_scales_with_order() {
    let space = FockSpace::new(64, 1).unwrap();
    let wt = power_tree(4).unwrap();
    let weight = wt.weight.to_c64();
    let scheme = library().nested.iter().find(|s| s.name == "table-IV").unwrap();
    let target = wt.expand();
    let distance = |theta: f64| {
        let seq = instantiate(&wt.tree, weight, theta, scheme, 1).unwrap().lower();
        sequence_distance(&space, &seq, &target, theta, 6).unwrap()
    };
    let d: Vec<f64> = [0.08, 0.01, 0.00125].iter().map(|&th| distance(th)).collect();
    for w in d.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 16.0 && ratio < 64.0, "{d:?}");
    }
}
