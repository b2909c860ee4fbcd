"""Busemann cocycle and cross-term checks on the circle boundary.

Conventions (disk model, base point at the center):
    B(g, xi)   = -log |g'(xi)|            so  B(g, g+) = translation length
    C(xi, eta) = -log(|xi - eta|^2 / 4)   twice the Gromov product

With these signs the pairing identity
    C(g xi, g eta) - C(xi, eta) = B(g, xi) + B(g, eta)
is an algebraic identity of Mobius maps, verified here numerically.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from . import surface_group as sg
from .mobius import (
    BoundaryPoint,
    IsometryClass,
    Mat2,
    act,
    boundary_derivative,
    classify,
    fixed_points,
)

SEPARATION_FLOOR = 1e-6


class BoundaryError(Exception):
    pass


class CoincidentPoints(BoundaryError):
    pass


class DegenerateConfiguration(BoundaryError):
    pass


def busemann(gamma: Mat2, xi: BoundaryPoint) -> float:
    """Horospherical displacement cocycle B(gamma, xi) = -log|gamma'(xi)|."""
    return -math.log(boundary_derivative(gamma, xi))


def cross_term(xi: BoundaryPoint, eta: BoundaryPoint) -> float:
    """C(xi, eta) = 2 (xi, eta)_o = -log(|xi - eta|^2 / 4)."""
    d = xi.chord_dist(eta)
    if xi.angle_dist(eta) < SEPARATION_FLOOR:
        raise CoincidentPoints(f"separation {xi.angle_dist(eta)} below floor")
    return -math.log(d * d / 4.0)


def pairing_check(gamma: Mat2, xi: BoundaryPoint, eta: BoundaryPoint) -> float:
    """Defect of the Gromov-product pairing identity at (gamma, xi, eta)."""
    lhs = cross_term(act(gamma, xi), act(gamma, eta)) - cross_term(xi, eta)
    rhs = busemann(gamma, xi) + busemann(gamma, eta)
    return abs(lhs - rhs)


def _h(C, x, y, z):
    return C(x, y) + C(x, z) - C(y, z)


def recover_cocycle_from_C(gamma: Mat2, x: BoundaryPoint, y: BoundaryPoint, z: BoundaryPoint) -> float:
    """Triple-difference recovery: half of h(gx,gy,gz) - h(x,y,z) equals B(gamma, x)."""
    gx, gy, gz = act(gamma, x), act(gamma, y), act(gamma, z)
    return 0.5 * (_h(cross_term, gx, gy, gz) - _h(cross_term, x, y, z))


def step1_identity_check(phi, eta: Mat2, gamma: Mat2) -> float:
    """For a coboundary delta = d(phi), check
    delta(eta, gamma+) = f(eta gamma+, gamma-) - f(gamma+, gamma-) with
    f(x, y) = phi(x) + phi(y)."""
    if classify(gamma) is not IsometryClass.HYPERBOLIC:
        raise DegenerateConfiguration("gamma must be hyperbolic")
    gp, gm = fixed_points(gamma)
    egp = act(eta, gp)
    if egp.angle_dist(gm) < SEPARATION_FLOOR:
        raise DegenerateConfiguration("eta gamma+ coincides with gamma-")

    def f(a, b):
        return phi(a) + phi(b)

    delta = phi(egp) - phi(gp)
    return abs(delta - (f(egp, gm) - f(gp, gm)))


def northsouth_limits(eta: Mat2, gamma: Mat2, n_max: int = 30):
    """Fixed points of eta gamma^n against the limit points eta gamma+ / gamma-.

    Returns a list of rows (n, d_plus, d_minus); non-hyperbolic powers are
    reported with None distances and skipped.
    """
    if classify(gamma) is not IsometryClass.HYPERBOLIC:
        raise DegenerateConfiguration("gamma must be hyperbolic")
    gp, gm = fixed_points(gamma)
    target_plus = act(eta, gp)
    if target_plus.angle_dist(gm) < SEPARATION_FLOOR:
        raise DegenerateConfiguration("eta gamma+ coincides with gamma-")
    rows = []
    power = Mat2(1, 0, 0, 1)
    for n in range(1, n_max + 1):
        power = power * gamma
        w = eta * power
        if classify(w) is not IsometryClass.HYPERBOLIC:
            rows.append((n, None, None))
            continue
        wp, wm = fixed_points(w)
        rows.append((n, wp.angle_dist(target_plus), wm.angle_dist(gm)))
    return rows


def decay_rate(rows) -> float | None:
    """Log-linear estimate of the geometric decay of d_plus over the tail."""
    usable = [(n, dp) for n, dp, _ in rows if dp is not None and dp > 1e-14]
    if len(usable) < 4:
        return None
    tail = usable[-6:] if len(usable) >= 6 else usable
    n0, d0 = tail[0]
    n1, d1 = tail[-1]
    if n1 == n0:
        return None
    return math.exp((math.log(d1) - math.log(d0)) / (n1 - n0))


# ---------------------------------------------------------------------------
# Pullback cocycles (conjugation by h).
# ---------------------------------------------------------------------------

def pullback_cocycle(h: Mat2):
    """beta(gamma, xi) = B(h gamma h^-1, h xi), the pullback of B along h."""

    def beta(gamma: Mat2, xi: BoundaryPoint) -> float:
        return busemann(h * gamma * h.inverse(), act(h, xi))

    return beta


def pullback_cross_term(h: Mat2):
    def C(xi: BoundaryPoint, eta: BoundaryPoint) -> float:
        return cross_term(act(h, xi), act(h, eta))

    return C


def pullback_potential(h: Mat2, y: BoundaryPoint, z: BoundaryPoint):
    """Candidate potential with d(phi) = beta - B, built from the cross-term
    difference by the triple construction."""
    Cb = pullback_cross_term(h)

    def F(a, b):
        return Cb(a, b) - cross_term(a, b)

    def phi(xi: BoundaryPoint) -> float:
        return 0.5 * (F(xi, y) + F(xi, z) - F(y, z))

    return phi


@dataclass
class CheckReport:
    check: str
    samples: int
    max_defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_defect < self.tolerance

    def as_dict(self):
        return {
            "check": self.check,
            "samples": self.samples,
            "max_defect": self.max_defect,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _random_point(rng: random.Random) -> BoundaryPoint:
    return BoundaryPoint.from_angle(rng.uniform(0.0, 2.0 * math.pi))


def _separated_points(rng, count, floor=1e-3, tries=1000):
    for _ in range(tries):
        pts = [_random_point(rng) for _ in range(count)]
        if all(
            pts[i].angle_dist(pts[j]) > floor
            for i in range(count)
            for j in range(i + 1, count)
        ):
            return pts
    raise BoundaryError("could not draw separated points")


def _random_word_element(rep, rng, max_len=3) -> Mat2:
    rank = rep.presentation.free_rank
    L = rng.randint(1, max_len)
    w = []
    while len(w) < L:
        x = rng.choice([k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)])
        if w and w[-1] == -x:
            continue
        w.append(x)
    return sg.evaluate(tuple(w), rep)


def _random_hyperbolic(rep, rng, max_len=3) -> Mat2:
    for _ in range(100):
        m = _random_word_element(rep, rng, max_len)
        if classify(m) is IsometryClass.HYPERBOLIC:
            return m
    raise BoundaryError("no hyperbolic element found")


def run_all_checks(rep, seed: int = 0, samples: int = 1000) -> list[CheckReport]:
    """The full B-cocycle identity suite over one representation."""
    rng = random.Random(seed)
    reports = []

    # cocycle identity
    worst = 0.0
    for _ in range(samples):
        g1 = _random_word_element(rep, rng)
        g2 = _random_word_element(rep, rng)
        xi = _random_point(rng)
        d = abs(busemann(g1 * g2, xi) - busemann(g1, act(g2, xi)) - busemann(g2, xi))
        worst = max(worst, d)
    reports.append(CheckReport("cocycle_identity", samples, worst, 1e-9))

    # pairing identity (image separation enforced by rejection)
    worst = 0.0
    done = 0
    while done < samples:
        g = _random_word_element(rep, rng, max_len=2)
        xi, eta = _separated_points(rng, 2)
        if act(g, xi).angle_dist(act(g, eta)) < 1e-5:
            continue
        worst = max(worst, pairing_check(g, xi, eta))
        done += 1
    reports.append(CheckReport("pairing_identity", samples, worst, 1e-8))

    # antisymmetry at the poles and inverse-class equality
    worst_anti = 0.0
    worst_inv = 0.0
    for _ in range(samples):
        g = _random_hyperbolic(rep, rng)
        gp, gm = fixed_points(g)
        worst_anti = max(worst_anti, abs(busemann(g, gm) + busemann(g, gp)))
        gi = g.inverse()
        gip, _ = fixed_points(gi)
        worst_inv = max(worst_inv, abs(busemann(gi, gip) - busemann(g, gp)))
    reports.append(CheckReport("antisymmetry_at_poles", samples, worst_anti, 1e-8))
    reports.append(CheckReport("inverse_class_equality", samples, worst_inv, 1e-8))

    # C determines c (triple-difference recovery, aux-pair independence)
    worst = 0.0
    done = 0
    while done < samples:
        g = _random_word_element(rep, rng, max_len=2)
        pts = _separated_points(rng, 5)
        x, y, z, y2, z2 = pts
        imgs = [act(g, p) for p in pts]
        if any(
            imgs[i].angle_dist(imgs[j]) < 1e-5 for i in range(5) for j in range(i + 1, 5)
        ):
            continue
        r1 = recover_cocycle_from_C(g, x, y, z)
        r2 = recover_cocycle_from_C(g, x, y2, z2)
        b = busemann(g, x)
        worst = max(worst, abs(r1 - b), abs(r2 - b), abs(r1 - r2))
        done += 1
    reports.append(CheckReport("c_determines_cocycle", samples, worst, 1e-7))

    # Step-1 identity for coboundaries
    worst = 0.0
    done = 0
    while done < samples:
        g = _random_hyperbolic(rep, rng)
        e = _random_word_element(rep, rng)
        try:
            worst = max(worst, step1_identity_check(lambda q: math.cos(q.theta), e, g))
        except DegenerateConfiguration:
            continue
        done += 1
    reports.append(CheckReport("step1_coboundary_identity", samples, worst, 1e-12))

    # north-south limits (Lemma S style convergence)
    worst = 0.0
    trials = samples
    for _ in range(trials):
        g = _random_hyperbolic(rep, rng, max_len=1)
        e = _random_word_element(rep, rng, max_len=1)
        try:
            rows = northsouth_limits(e, g, n_max=25)
        except DegenerateConfiguration:
            continue
        finals = [(dp, dm) for _, dp, dm in rows[-3:] if dp is not None]
        if not finals:
            continue
        worst = max(worst, min(dp for dp, _ in finals), min(dm for _, dm in finals))
    reports.append(CheckReport("northsouth_limits", trials, worst, 1e-6))

    return reports
