use cvdecomp::algebra::{parse_polynomial, Quad};
use cvdecomp::fock::{sequence_distance, FockSpace};
use cvdecomp::rewrite::{
    conjugation_identity_check, exact_pdc_sequence, exact_x2_sequence, pdc_logical, x2_angle_logical,
};
use cvdecomp::sequence::{Gate, GateSequence};

#[test]
fn x2_identity_on_fock_subspace() {
    let space = FockSpace::new(64, 1).unwrap();
    let h = parse_polynomial("X0^2").unwrap();
    for t in [0.05, 0.1] {
        let d = sequence_distance(&space, &exact_x2_sequence(t), &h, t * t, 6).unwrap();
        assert!(d < 1e-9, "t={t}: {d:e}");
    }
}

#[test]
fn x2_identity_converges_in_truncation() {
    let h = parse_polynomial("X0^2").unwrap();
    let mut last = f64::INFINITY;
    for n in [32, 64, 128] {
        let space = FockSpace::new(n, 1).unwrap();
        let d = sequence_distance(&space, &exact_x2_sequence(0.3), &h, 0.09, 6).unwrap();
        assert!(d <= last + 1e-8, "N={n}: {d:e} after {last:e}");
        last = d;
    }
    assert!(last < 1e-5, "{last:e}");
}

#[test]
fn x2_angle_handles_both_signs_and_quadratures() {
    let space = FockSpace::new(64, 1).unwrap();
    for (quad, text) in [(Quad::X, "X0^2"), (Quad::P, "P0^2")] {
        let h = parse_polynomial(text).unwrap();
        for theta in [0.01, -0.01] {
            let seq = x2_angle_logical(0, quad, theta).lower();
            let d = sequence_distance(&space, &seq, &h, theta, 6).unwrap();
            assert!(d < 1e-5, "{text} theta={theta}: {d:e}");
        }
    }
}

#[test]
fn pdc_identity_on_fock_subspace() {
    let space = FockSpace::new(24, 2).unwrap();
    let h = parse_polynomial("X0^2 P1").unwrap();
    let (k, alpha) = (0.05, 0.3);
    let d = sequence_distance(&space, &exact_pdc_sequence(k, alpha), &h, 1.5 * k * alpha * alpha, 6).unwrap();
    assert!(d < 1e-5, "{d:e}");
}

#[test]
fn pdc_in_rotated_frames() {
    let space = FockSpace::new(32, 2).unwrap();
    for (sq, lin, text) in [(Quad::P, Quad::P, "P0^2 P1"), (Quad::X, Quad::X, "X0^2 X1"), (Quad::P, Quad::X, "P0^2 X1")]
    {
        let h = parse_polynomial(text).unwrap();
        for theta in [0.003, -0.003] {
            let mut seq = pdc_logical((0, sq), (1, lin), theta).lower();
            seq.n_modes = 2;
            let d = sequence_distance(&space, &seq, &h, theta, 4).unwrap();
            assert!(d < 1e-5, "{text} theta={theta}: {d:e}");
        }
    }
}

#[test]
fn fourier_gate_is_quarter_oscillator_period() {
    let space = FockSpace::new(64, 1).unwrap();
    let h = parse_polynomial("X0^2 + P0^2").unwrap();
    let mut seq = GateSequence::new(1);
    seq.push(Gate::Fourier(0));
    let d = sequence_distance(&space, &seq, &h, std::f64::consts::FRAC_PI_2, 6).unwrap();
    assert!(d < 1e-10, "{d:e}");
}

#[test]
fn conjugation_identity() {
    let space = FockSpace::new(64, 1).unwrap();
    let r = conjugation_identity_check(0.1, &space, 6).unwrap();
    assert!(conjugation_identity_check(0.0, &space, 6).unwrap().distance < 1e-12);
    assert!(r.symbolic);
    assert!(r.pass, "{:e}", r.distance);
}
