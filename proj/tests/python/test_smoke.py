import math

import pytest

import kbavg


def cubic_field():
    return kbavg.PolynomialField(
        1,
        [
            kbavg.Polynomial(
                1,
                [
                    kbavg.Monomial([2], [1], 1.0),
                    kbavg.Monomial([3], [0], 1.0),
                ],
            )
        ],
    )


def test_resonant_part_drops_the_nonresonant_term():
    P = cubic_field()
    lam = kbavg.FrequencyVector([1])
    res = kbavg.resonant_part(P, lam, kbavg.default_tolerance(lam))
    terms = res.components[0].terms
    assert len(terms) == 1
    assert terms[0].alpha.exponents == [2]
    assert terms[0].beta.exponents == [1]
    assert terms[0].coeff == 1.0

    table = kbavg.resonance_table(P, lam, kbavg.default_tolerance(lam))
    assert [r.resonant for r in table] == [True, False]


def test_quadrature_average_matches_the_symbolic_one():
    P = cubic_field()
    lam = kbavg.FrequencyVector([1])
    a = [0.6 + 0.2j]
    sym = kbavg.average_at(P, lam, a, tol=1e-4)
    num = kbavg.average_at(P, lam, a, tol=1e-4, threads=2, quadrature=True)
    assert abs(sym[0] - num[0]) < 1e-3
    assert abs(sym[0] - (0.6 + 0.2j) * abs(0.6 + 0.2j) ** 2) < 1e-12


def test_simulate_tracks_the_closed_form_amplitude():
    traj = kbavg.simulate(
        cubic_field(),
        kbavg.FrequencyVector([1]),
        1e-3,
        [1.0 + 0.0j],
        form="fast",
        step=0.05,
        theta=0.2,
        t_final=100.0,
    )
    assert traj.form == "fast"
    assert traj.epsilon == pytest.approx(1e-3)
    z = kbavg.state_at(traj, 100.0)[0]
    assert abs(z) == pytest.approx((1.0 - 0.2) ** -0.5, abs=1e-2)


def test_hamiltonian_averaging_identity():
    h = kbavg.Hamiltonian(
        2,
        [
            kbavg.Monomial([2, 0], [0, 2], 0.05),
            kbavg.Monomial([0, 2], [2, 0], 0.05),
            kbavg.Monomial([2, 0], [2, 0], 1.0),
        ],
    )
    lam = kbavg.FrequencyVector([1.0, math.sqrt(2.0)])
    rep = kbavg.check_ham_eff(h, lam, 1e-9)
    assert rep.ok
    assert rep.max_discrepancy <= 1e-12

    field = kbavg.hamiltonian_field(h)
    assert field.dim == 2

    check = kbavg.is_nonresonant(kbavg.FrequencyVector([1, 2]), 10)
    assert not check.nonresonant
    assert check.witness


def test_blow_up_maps_to_arithmetic_error():
    P = kbavg.PolynomialField(
        1, [kbavg.Polynomial(1, [kbavg.Monomial([2], [1], 1.0)])]
    )
    with pytest.raises(kbavg.BlowUpError):
        kbavg.simulate(P, kbavg.FrequencyVector([1]), 1.0, [1.0 + 0.0j], theta=0.5)
    assert issubclass(kbavg.BlowUpError, ArithmeticError)


def test_run_cli_help_exits_cleanly():
    assert kbavg.run_cli(["--help"]) == 0
