import math
import random

import pytest

from speclab.boundary import (
    CoincidentPoints,
    busemann,
    cross_term,
    decay_rate,
    northsouth_limits,
    pairing_check,
    pullback_cocycle,
    pullback_potential,
    recover_cocycle_from_C,
    run_all_checks,
    step1_identity_check,
)
from speclab.fricke import schottky_sample
from speclab.mobius import (
    BoundaryPoint,
    Mat2,
    act,
    fixed_points,
    identity,
    translation_length,
)
import speclab.surface_group as sg


REP = schottky_sample(17, 2)
RNG = random.Random(17)


def _pt(theta):
    return BoundaryPoint.from_angle(theta)


def test_busemann_identity_element():
    assert abs(busemann(identity(), _pt(1.0))) < 1e-15


def test_busemann_at_poles():
    g = REP.matrix(1)
    gp, gm = fixed_points(g)
    l = translation_length(g)
    assert abs(busemann(g, gp) - l) < 1e-10
    assert abs(busemann(g, gm) + l) < 1e-10


def test_busemann_parabolic_fixed_point():
    eta = Mat2(1, 1, 0, 1)  # fixes infinity
    xi = BoundaryPoint.from_real(math.inf)
    assert abs(busemann(eta, xi)) < 1e-12


def test_cross_term_symmetric():
    x, y = _pt(0.4), _pt(2.2)
    assert cross_term(x, y) == cross_term(y, x)


def test_cross_term_rejects_coincident():
    with pytest.raises(CoincidentPoints):
        cross_term(_pt(1.0), _pt(1.0 + 1e-9))


def test_cocycle_identity_random():
    worst = 0.0
    for _ in range(200):
        g1 = REP.matrix(RNG.randint(1, 2))
        g2 = REP.matrix(RNG.randint(1, 2))
        xi = _pt(RNG.uniform(0, 2 * math.pi))
        d = abs(busemann(g1 * g2, xi) - busemann(g1, act(g2, xi)) - busemann(g2, xi))
        worst = max(worst, d)
    assert worst < 1e-9


def test_pairing_identity_random():
    worst = 0.0
    done = 0
    while done < 200:
        g = REP.matrix(RNG.randint(1, 2))
        xi = _pt(RNG.uniform(0, 2 * math.pi))
        eta = _pt(RNG.uniform(0, 2 * math.pi))
        if xi.angle_dist(eta) < 1e-3:
            continue
        if act(g, xi).angle_dist(act(g, eta)) < 1e-5:
            continue
        worst = max(worst, pairing_check(g, xi, eta))
        done += 1
    assert worst < 1e-8


def test_recover_cocycle_identity_element():
    x, y, z = _pt(0.2), _pt(2.0), _pt(4.0)
    assert abs(recover_cocycle_from_C(identity(), x, y, z)) < 1e-12


def test_recover_cocycle_matches_busemann_and_aux_independence():
    g = REP.matrix(1)
    x, y, z = _pt(0.3), _pt(1.7), _pt(3.9)
    y2, z2 = _pt(2.6), _pt(5.1)
    b = busemann(g, x)
    r1 = recover_cocycle_from_C(g, x, y, z)
    r2 = recover_cocycle_from_C(g, x, y2, z2)
    assert abs(r1 - b) < 1e-7
    assert abs(r1 - r2) < 1e-7


def test_recover_cocycle_at_attracting_point():
    g = REP.matrix(2)
    gp, _ = fixed_points(g)
    r = recover_cocycle_from_C(g, gp, _pt(1.0), _pt(2.5))
    assert abs(r - translation_length(g)) < 1e-7


def test_step1_zero_potential():
    g = REP.matrix(1)
    assert step1_identity_check(lambda q: 0.0, REP.matrix(2), g) == 0.0


def test_step1_cosine_potential():
    g = REP.matrix(1)
    e = REP.matrix(2)
    assert step1_identity_check(lambda q: math.cos(q.theta), e, g) < 1e-12


def test_northsouth_identity_conjugator():
    g = REP.matrix(1)
    gp, gm = fixed_points(g)
    rows = northsouth_limits(identity(), g, n_max=8)
    for n, dp, dm in rows:
        assert dp < 1e-9 and dm < 1e-9


def test_northsouth_convergence_and_rate():
    g = REP.matrix(1)
    e = REP.matrix(2)
    rows = northsouth_limits(e, g, n_max=30)
    usable = [(n, dp) for n, dp, _ in rows if dp is not None]
    final = usable[-1][1]
    assert final < 1e-8
    rate = decay_rate(rows)
    if rate is not None:
        expected = math.exp(-translation_length(g))
        assert abs(rate - expected) / expected < 0.2


def test_pullback_identity_conjugator():
    beta = pullback_cocycle(identity())
    g = REP.matrix(1)
    for theta in (0.3, 1.5, 4.2):
        xi = _pt(theta)
        assert abs(beta(g, xi) - busemann(g, xi)) < 1e-12
    phi = pullback_potential(identity(), _pt(1.0), _pt(2.0))
    vals = [phi(_pt(t)) for t in (0.1, 2.9, 5.0)]
    assert max(vals) - min(vals) < 1e-12


def test_pullback_preserves_lengths():
    rng = random.Random(23)
    h = Mat2(1, rng.uniform(-1, 1), 0, 1) * Mat2(1, 0, rng.uniform(-1, 1), 1)
    beta = pullback_cocycle(h)
    for key in sg.enumerate_classes(REP.presentation, 3):
        g = sg.evaluate(key.word, REP)
        hg = h * g * h.inverse()
        try:
            gp, _ = fixed_points(hg)
        except Exception:
            continue
        # beta evaluated at the pulled-back pole equals the original length
        l_beta = busemann(hg, gp)
        assert abs(l_beta - translation_length(g)) < 1e-8


def test_pullback_potential_is_coboundary():
    rng = random.Random(31)
    h = Mat2(1, 0.4, 0, 1) * Mat2(1, 0, -0.3, 1)
    beta = pullback_cocycle(h)
    phi = pullback_potential(h, _pt(2.0), _pt(4.5))
    worst = 0.0
    for _ in range(200):
        g = REP.matrix(rng.randint(1, 2))
        xi = _pt(rng.uniform(0, 2 * math.pi))
        lhs = beta(g, xi) - busemann(g, xi)
        rhs = phi(act(g, xi)) - phi(xi)
        worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-7


def test_run_all_checks_passes():
    reports = run_all_checks(REP, seed=17, samples=200)
    assert len(reports) == 7
    for r in reports:
        assert r.passed, f"{r.check}: {r.max_defect}"
    names = {r.check for r in reports}
    assert "cocycle_identity" in names and "northsouth_limits" in names


def test_check_report_json():
    reports = run_all_checks(REP, seed=1, samples=50)
    import json

    doc = json.loads(reports[0].to_json())
    assert set(doc) == {"check", "samples", "max_defect", "tolerance", "pass"}
