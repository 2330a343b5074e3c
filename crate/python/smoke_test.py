"""Smoke test for the Python extension. Build with `maturin build` in crates/python, then run this file."""

import cvdecomp


def main():
    x4 = cvdecomp.Polynomial("X0^4")
    p2 = cvdecomp.Polynomial("P0^2")
    x3 = cvdecomp.Polynomial("X0^3")
    assert x4.is_hermitian() and x4.degree == 4
    # X^4 = -2/9 [X^3, [X^3, P^2]]
    rebuilt = x3.commutator(x3.commutator(p2)) * cvdecomp.Polynomial("-2/9")
    assert rebuilt == x4, str(rebuilt)

    kerr = cvdecomp.Polynomial("(X0^2+P0^2)^2")
    print("\n".join(kerr.plan()))

    seq, report = cvdecomp.compile(kerr, 0.1, 1e-3)
    assert len(seq) == report["total"] == 94
    assert seq.fourier_count == 48
    assert seq.counts()["FOURIER"] == 48
    again = cvdecomp.GateSequence.from_jsonl(seq.to_jsonl())
    assert len(again) == len(seq)

    name, order, gates, rescale, err = cvdecomp.choose_order(0.05 * 2 / 9, 1e-3, "nested")
    assert (order, gates) == (4, 9) and abs(err / 0.55326e-3 - 1) < 1e-2

    assert round(cvdecomp.naive_count("commutator", 0.1, 1e-3)) == 4000

    toml_text, residual = cvdecomp.refine_table("I")
    assert residual < 1e-10 and "order" in toml_text

    small, _ = cvdecomp.compile(cvdecomp.Polynomial("X0^2"), 0.1, 1e-3)
    d = small.distance(cvdecomp.Polynomial("X0^2"), 0.1)
    assert d < 1e-9, d

    try:
        cvdecomp.Polynomial("X0^")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error expected")
    print("smoke test passed")


if __name__ == "__main__":
    main()
