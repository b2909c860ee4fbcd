"""Fricke coordinates: matrix representations from coordinate vectors and back.

The normalization puts the first handle generator in diagonal form with
repelling / attracting fixed points at 0 and infinity and gives the second
one a fixed point at 1.  The remaining generators carry the coordinates
(a_i, c_i, d_i, a'_i, c'_i, d'_i) for 2 <= i <= g and (e_j, g_j) for the
punctures; the first pair of matrices is then forced by the surface relator.

Certified sample points come from ping-pong configurations: disjoint
isometric-circle pairs prove the sampled generators are free and discrete.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from . import surface_group as sg
from .mobius import (
    IsometryClass,
    Mat2,
    classify,
    fixed_points,
    identity,
)

RELATOR_TOL = 1e-8


class FrickeError(Exception):
    pass


class DegenerateCoordinates(FrickeError):
    pass


class NotInFrickeImage(FrickeError):
    pass


class NotNormalizable(FrickeError):
    pass


class SamplingFailed(FrickeError):
    pass


@dataclass(frozen=True)
class FrickeVector:
    """Point of R^(6g-6+2n): handle coordinates then puncture coordinates."""

    genus: int
    punctures: int
    values: tuple

    def __post_init__(self):
        g, n = self.genus, self.punctures
        expected = 6 * (g - 1) + 2 * n
        if len(self.values) != expected:
            raise FrickeError(
                f"dimension {len(self.values)}, expected {expected} for (g,n)=({g},{n})"
            )
        for i in range(g - 1):
            block = self.values[6 * i : 6 * i + 6]
            if block[1] <= 0 or block[4] <= 0:
                raise FrickeError("handle coordinates need c_i > 0, c'_i > 0")
        for j in range(n):
            if self.values[6 * (g - 1) + 2 * j + 1] == 0:
                raise FrickeError("puncture coordinates need g_j != 0")

    def handle(self, i: int):
        """(a_i, c_i, d_i, a'_i, c'_i, d'_i) for 2 <= i <= genus."""
        off = 6 * (i - 2)
        return self.values[off : off + 6]

    def puncture(self, j: int):
        """(e_j, g_j) for 1 <= j <= punctures."""
        off = 6 * (self.genus - 1) + 2 * (j - 1)
        return self.values[off : off + 2]


@dataclass(frozen=True)
class ValidityReport:
    relator_defect: float
    all_hyperbolic_or_parabolic: bool
    punctures_parabolic: bool
    discreteness_certificate: tuple | None = None

    @property
    def valid(self) -> bool:
        return self.relator_defect <= RELATOR_TOL and self.all_hyperbolic_or_parabolic

    def as_dict(self):
        return {
            "relator_defect": self.relator_defect,
            "all_hyperbolic_or_parabolic": self.all_hyperbolic_or_parabolic,
            "punctures_parabolic": self.punctures_parabolic,
            "discreteness_certificate": (
                None
                if self.discreteness_certificate is None
                else [[float(x) for x in row] for row in self.discreteness_certificate]
            ),
        }


@dataclass(frozen=True)
class SurfaceRep:
    """Presentation plus one matrix per presentation generator."""

    presentation: sg.Presentation
    matrices: tuple
    validity: ValidityReport = None

    def matrix(self, k: int) -> Mat2:
        return self.matrices[k - 1]

    @classmethod
    def free_rep(cls, mats, certificate=None) -> "SurfaceRep":
        """Wrap free generators A_1..A_m as a punctured surface (g=1, n=m-1);
        the last puncture generator is forced by the relator."""
        m = len(mats)
        if m < 2:
            raise FrickeError("need at least two generators")
        pres = sg.Presentation(genus=1, punctures=m - 1)
        a, b = mats[0], mats[1]
        partial = a * b * a.inverse() * b.inverse()
        for g in mats[2:]:
            partial = partial * g
        last = partial.inverse()
        t = last.tr()
        if (t < 0) if last.exact() else (float(t) < 0):
            last = -last
        all_mats = tuple(mats) + (last,)
        return cls(pres, all_mats, _validate(pres, all_mats, certificate))

    def conjugated(self, h: Mat2) -> "SurfaceRep":
        det = h.det()
        hinv = Mat2(h.d / det, -h.b / det, -h.c / det, h.a / det)
        mats = tuple((h * m * hinv) for m in self.matrices)
        return SurfaceRep(
            self.presentation,
            mats,
            _validate(self.presentation, mats, self.validity.discreteness_certificate if self.validity else None),
        )

    def digest(self) -> str:
        import hashlib

        payload = json.dumps(
            [[repr(x) for x in m.entries()] for m in self.matrices], sort_keys=True
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def as_dict(self):
        return {
            "genus": self.presentation.genus,
            "punctures": self.presentation.punctures,
            "matrices": [[_num(x) for x in m.entries()] for m in self.matrices],
            "validity": self.validity.as_dict() if self.validity else None,
        }


def _num(x):
    return float(x)


def _validate(pres: sg.Presentation, mats, certificate=None) -> ValidityReport:
    rel = sg.relator(pres)
    rep = SurfaceRep(pres, tuple(mats))
    r = sg.evaluate(rel, rep)
    defect = r.dist_to_pm_identity()
    ok = True
    cusps = True
    for k, m in enumerate(mats):
        cls = classify(m)
        if cls is IsometryClass.ELLIPTIC:
            ok = False
        if k >= 2 * pres.genus and cls is not IsometryClass.PARABOLIC:
            cusps = False
    return ValidityReport(defect, ok, cusps, certificate)


# ---------------------------------------------------------------------------
# Coordinates -> representation.
# ---------------------------------------------------------------------------

def _handle_matrices(coords):
    a, c, d, a2, c2, d2 = coords
    alpha = Mat2(a, (a * d - 1) / c, c, d)
    beta = Mat2(a2, (a2 * d2 - 1) / c2, c2, d2)
    return alpha, beta


def _puncture_matrix(e, gg) -> Mat2:
    return Mat2(e, (2 * e - e * e - 1) / gg, gg, 2 - e)


def _first_pair(a, b, c, d):
    """Solve for the normalized first handle pair from the inverse partial
    product (a b / c d).  Raises on coordinate degeneracies."""
    for x, label in ((a - 1, "a = 1"), (d - 1, "d = 1"), (c + d - 1, "c + d = 1"), (a + b - 1, "a + b = 1")):
        if x == 0:
            raise DegenerateCoordinates(label)
    lam_sq = (a - 1) / (1 - d)
    if lam_sq <= 0:
        raise NotInFrickeImage(f"lambda^2 = {lam_sq} <= 0")
    # a1 d1 - b1 c1 = 1 forces c1^2 * bracket = 1
    bracket = (b * c * (a + b - 1)) / ((1 - a) ** 2 * (c + d - 1)) - ((1 - d) * (a + b - 1)) / (
        (1 - a) * (c + d - 1)
    )
    if bracket <= 0:
        raise NotInFrickeImage(f"c1^2 bracket = {bracket} <= 0")
    lam = math.sqrt(lam_sq)
    c1 = math.sqrt(1.0 / bracket)
    a1 = b * c1 / (1 - a)
    b1 = (1 - d) * (a + b - 1) * c1 / ((1 - a) * (c + d - 1))
    d1 = c * b1 / (1 - d)
    if a1 + b1 < 0:
        a1, b1, c1, d1 = -a1, -b1, -c1, -d1
    alpha1 = Mat2(lam, 0.0, 0.0, 1.0 / lam)
    beta1 = Mat2(a1, b1, c1, d1)
    return alpha1, beta1


def rep_from_fricke(g: int, n: int, v: FrickeVector) -> SurfaceRep:
    """Build the normalized representation determined by a Fricke vector."""
    if g < 1:
        raise FrickeError("construction needs genus >= 1 (first handle pair)")
    if (v.genus, v.punctures) != (g, n):
        raise FrickeError("vector shape does not match (g, n)")
    handles = [_handle_matrices(v.handle(i)) for i in range(2, g + 1)]
    punct = [_puncture_matrix(*v.puncture(j)) for j in range(1, n + 1)]
    partial = identity()
    for alpha, beta in handles:
        partial = partial * alpha * beta * alpha.inverse() * beta.inverse()
    for gm in punct:
        partial = partial * gm
    inv = partial.inverse()
    a, b, c, d = (float(x) for x in inv.entries())
    pres = sg.Presentation(genus=g, punctures=n)

    def build(sign):
        alpha1, beta1 = _first_pair(sign * a, sign * b, sign * c, sign * d)
        ordered = [alpha1, beta1]
        for alpha, beta in handles:
            ordered += [alpha, beta]
        ordered += punct
        ordered = tuple(m.to_float() for m in ordered)
        return SurfaceRep(pres, ordered, _validate(pres, ordered))

    # the sign of the partial product is only determined up to +-1; keep the
    # branch that actually satisfies the relator
    candidates = []
    errors = []
    for sign in (1.0, -1.0):
        try:
            candidates.append(build(sign))
        except FrickeError as exc:
            errors.append(exc)
    if not candidates:
        raise errors[0]
    candidates.sort(
        key=lambda r: (
            r.validity.relator_defect,
            0 if classify(r.matrix(1)) is IsometryClass.HYPERBOLIC else 1,
        )
    )
    return candidates[0]


# ---------------------------------------------------------------------------
# Representation -> coordinates.
# ---------------------------------------------------------------------------

def _mobius_to_0_inf_1(x_to_0, x_to_inf, x_to_1) -> Mat2:
    """Real Mobius map with prescribed images 0, infinity, 1; det normalized to 1."""
    inf = math.inf

    def row(p):
        # returns (u, v) with map numerator ~ u*z + v vanishing at p
        if p == inf:
            return (0.0, 1.0)
        return (1.0, -float(p))

    (na, nb) = row(x_to_0)
    (ca, cb) = row(x_to_inf)
    # scale so the third point goes to 1
    def ev(u, v, p):
        if p == inf:
            return u
        return u * float(p) + v

    num = ev(na, nb, x_to_1)
    den = ev(ca, cb, x_to_1)
    if num == 0.0 or den == 0.0:
        raise NotNormalizable("normalization points collide")
    s = den / num
    m = Mat2(s * na, s * nb, ca, cb)
    det = float(m.det())
    if det == 0.0:
        raise NotNormalizable("degenerate normalization")
    # scale for conditioning only; conjugation divides by det, so det = +-1 is fine
    r = math.sqrt(abs(det))
    return Mat2(m.a / r, m.b / r, m.c / r, m.d / r)


def _sign_fix(m: Mat2, want_positive) -> Mat2:
    return -m if want_positive(m) < 0 else m


def fricke_from_rep(rep: SurfaceRep) -> FrickeVector:
    """Normalize the representation and read the coordinates off the matrices."""
    g, n = rep.presentation.genus, rep.presentation.punctures
    if g < 1:
        raise FrickeError("coordinates need genus >= 1")
    alpha1 = rep.matrix(1)
    if classify(alpha1) is not IsometryClass.HYPERBOLIC:
        raise NotNormalizable("first generator must be hyperbolic")
    att, repel = fixed_points(alpha1)
    x_plus, x_minus = att.to_real(), repel.to_real()
    beta1 = rep.matrix(2)
    p = _beta_normalization_point(beta1, x_plus, x_minus)
    h = _mobius_to_0_inf_1(x_minus, x_plus, p)
    norm = rep.conjugated(h)
    mats = list(norm.matrices)
    # sign conventions: lambda > 0, a1 + b1 > 0, c_i > 0, tr(gamma_j) >= 0
    a1m = mats[0]
    if float(a1m.a) < 0:
        a1m = -a1m
    b1m = mats[1]
    if float(b1m.a + b1m.b) < 0:
        b1m = -b1m
    mats[0], mats[1] = a1m, b1m
    values = []
    for i in range(2, g + 1):
        am = mats[2 * i - 2]
        bm = mats[2 * i - 1]
        if float(am.c) < 0:
            am = -am
        if float(bm.c) < 0:
            bm = -bm
        mats[2 * i - 2], mats[2 * i - 1] = am, bm
        values += [float(am.a), float(am.c), float(am.d), float(bm.a), float(bm.c), float(bm.d)]
    for j in range(1, n + 1):
        gm = mats[2 * g + j - 1]
        if float(gm.tr()) < 0:
            gm = -gm
        mats[2 * g + j - 1] = gm
        values += [float(gm.a), float(gm.c)]
    return FrickeVector(g, n, tuple(values))


def _beta_normalization_point(beta1: Mat2, x_plus, x_minus):
    """A beta_1 fixed point distinct from both alpha_1 fixed points."""
    cls = classify(beta1)
    cands = []
    if cls is IsometryClass.HYPERBOLIC:
        a, r = fixed_points(beta1)
        cands = [a.to_real(), r.to_real()]
    elif cls is IsometryClass.PARABOLIC:
        a, b, c, d = (float(x) for x in beta1.entries())
        cands = [math.inf if c == 0.0 else (a - d) / (2.0 * c)]
    else:
        raise NotNormalizable("second generator is elliptic or trivial")

    def close(u, v):
        if u == math.inf or v == math.inf:
            return u == v
        return abs(u - v) <= 1e-9 * max(1.0, abs(u), abs(v))

    for p in cands:
        if not close(p, x_plus) and not close(p, x_minus):
            return p
    raise NotNormalizable("generators share their fixed points (elementary pair)")


# ---------------------------------------------------------------------------
# Certified sampling.
# ---------------------------------------------------------------------------

def schottky_sample(seed: int, m: int = 2, spread: float = 1.0, max_retries: int = 64) -> SurfaceRep:
    """Discrete free rank-m group from disjoint isometric-circle pairs.

    Generator k maps the outside of one disk onto the inside of its partner;
    pairwise disjointness of all 2m disks is the ping-pong certificate.
    """
    if m < 2:
        raise FrickeError("need m >= 2")
    rng = random.Random(seed)
    for _ in range(max_retries):
        centers = []
        radii = []
        ok = True
        for _ in range(2 * m):
            for _try in range(200):
                x = rng.uniform(-4.0 * spread, 4.0 * spread)
                r = rng.uniform(0.25 * spread, 0.6 * spread)
                if all(abs(x - y) > (r + s) * 1.15 for y, s in zip(centers, radii)):
                    centers.append(x)
                    radii.append(r)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        mats = []
        cert = []
        for k in range(m):
            p, q = centers[2 * k], centers[2 * k + 1]
            r1, r2 = radii[2 * k], radii[2 * k + 1]
            r = math.sqrt(r1 * r2)
            # isometric circles at p (radius r) and q (radius r), det 1
            c = 1.0 / r
            a = q * c
            d = -p * c
            b = (a * d - 1.0) / c
            mat = Mat2(a, b, c, d).psl_normalized()
            mats.append(mat)
            cert.append((p, r, q, r))
        disks = [(p, r) for (p, r, _, _) in cert] + [(q, r) for (_, _, q, r) in cert]
        if _disks_disjoint(disks):
            return SurfaceRep.free_rep(mats, certificate=tuple(cert))
    raise SamplingFailed(f"no disjoint disk configuration after {max_retries} tries")


def _disks_disjoint(disks) -> bool:
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            (x, r), (y, s) = disks[i], disks[j]
            if abs(x - y) <= r + s:
                return False
    return True


def punctured_torus_sample(seed: int, trace_low: float = 2.3, trace_high: float = 5.0) -> SurfaceRep:
    """Normalized punctured-torus point: generator traces (x, y, z) with
    x^2 + y^2 + z^2 = xyz, which makes the commutator parabolic (trace -2).

    The representation comes out already in Fricke normal form: the first
    generator diagonal with attracting point at infinity, the second fixing 1.
    """
    rng = random.Random(seed)
    for _ in range(256):
        x = rng.uniform(max(trace_low, 3.0), trace_high)
        y = rng.uniform(max(trace_low, 3.0), trace_high)
        disc = x * x * y * y - 4.0 * (x * x + y * y)
        if disc <= 0:
            continue
        z = (x * y + math.sqrt(disc)) / 2.0
        lam = (x + math.sqrt(x * x - 4.0)) / 2.0
        alpha = Mat2(lam, 0.0, 0.0, 1.0 / lam)
        # beta: trace y, fixed point at 1 (a1 + b1 = c1 + d1), tr(alpha beta) = z
        a1 = (lam * z - y) / (lam * lam - 1.0)
        d1 = y - a1
        # c1^2 + (d1 - a1) c1 - (a1 d1 - 1) = 0
        disc2 = y * y - 4.0
        c1 = ((a1 - d1) + math.sqrt(disc2)) / 2.0
        if c1 == 0.0:
            c1 = ((a1 - d1) - math.sqrt(disc2)) / 2.0
        b1 = c1 + d1 - a1
        beta = Mat2(a1, b1, c1, d1)
        if abs(float(beta.det()) - 1.0) > 1e-9:
            continue
        if a1 + b1 < 0:
            beta = -beta
        comm = alpha * beta * alpha.inverse() * beta.inverse()
        gamma = -comm.inverse()
        if abs(float(gamma.tr()) - 2.0) > 1e-8:
            continue
        mats = (alpha, beta, gamma)
        pres = sg.Presentation(genus=1, punctures=1)
        rep = SurfaceRep(pres, mats, _validate(pres, mats, certificate=((x, y, z),)))
        if rep.validity.valid:
            return rep
    raise SamplingFailed("no valid punctured-torus sample")


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def rep_to_json(rep: SurfaceRep) -> str:
    doc = {
        "genus": rep.presentation.genus,
        "punctures": rep.presentation.punctures,
        "matrices": [[_fmt(float(x)) for x in m.entries()] for m in rep.matrices],
        "validity": rep.validity.as_dict() if rep.validity else None,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def rep_from_json(text: str) -> SurfaceRep:
    doc = json.loads(text)
    pres = sg.Presentation(genus=doc["genus"], punctures=doc["punctures"])
    mats = tuple(Mat2(*(float(v) for v in row)) for row in doc["matrices"])
    cert = None
    if isinstance(doc.get("validity"), dict):
        stored = doc["validity"].get("discreteness_certificate")
        if stored is not None:
            cert = tuple(tuple(float(x) for x in row) for row in stored)
    return SurfaceRep(pres, mats, _validate(pres, mats, cert))


def vector_to_json(v: FrickeVector) -> str:
    doc = {
        "genus": v.genus,
        "punctures": v.punctures,
        "vector": [_fmt(x) for x in v.values],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def vector_from_json(text: str) -> FrickeVector:
    doc = json.loads(text)
    return FrickeVector(doc["genus"], doc["punctures"], tuple(float(x) for x in doc["vector"]))
