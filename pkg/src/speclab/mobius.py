"""SL2 / PSL2 linear algebra and the induced action on the circle boundary.

Matrices act on the upper half plane by fractional-linear maps; boundary
work happens in the disk model, reached through the fixed Cayley transform
z -> (z - i)/(z + i).  Entries may be exact (int / Fraction) or 64-bit
floats; exact matrices are compared exactly, float matrices against EPS.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational

EPS = 1e-9

INF = math.inf


class MobiusError(Exception):
    pass


class NotHyperbolic(MobiusError):
    pass


class EllipticElement(MobiusError):
    pass


def is_exact(x) -> bool:
    return isinstance(x, Rational)


class IsometryClass(Enum):
    IDENTITY = "identity"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class Mat2:
    """Unit-determinant 2x2 matrix, row-major (a b / c d)."""

    a: object
    b: object
    c: object
    d: object

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def tr(self):
        return self.a + self.d

    def inverse(self) -> "Mat2":
        # valid for det = 1
        return Mat2(self.d, -self.b, -self.c, self.a)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def exact(self) -> bool:
        return all(is_exact(x) for x in self.entries())

    def to_float(self) -> "Mat2":
        return Mat2(float(self.a), float(self.b), float(self.c), float(self.d))

    def max_diff(self, other: "Mat2") -> float:
        return max(abs(float(x - y)) for x, y in zip(self.entries(), other.entries()))

    def dist_to_pm_identity(self) -> float:
        i = identity()
        return min(self.max_diff(i), (-self).max_diff(i))

    def psl_normalized(self) -> "Mat2":
        """PSL2 representative with tr >= 0 (tr = 0 left as is)."""
        t = self.tr()
        if self.exact():
            return -self if t < 0 else self
        return -self if t < -EPS else self

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        out = identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def identity() -> Mat2:
    return Mat2(1, 0, 0, 1)


def check_unimodular(m: Mat2, eps: float = EPS) -> None:
    d = m.det()
    if m.exact():
        if d != 1:
            raise MobiusError(f"det = {d}, expected 1")
    elif abs(float(d) - 1.0) > eps:
        raise MobiusError(f"det = {d}, expected 1 within {eps}")


def classify(m: Mat2, eps: float = EPS) -> IsometryClass:
    """Classify by |tr| relative to 2; identity means m = +-I."""
    t = m.tr()
    if m.exact():
        if m in (identity(), -identity()):
            return IsometryClass.IDENTITY
        at = abs(t)
        if at > 2:
            return IsometryClass.HYPERBOLIC
        if at == 2:
            return IsometryClass.PARABOLIC
        return IsometryClass.ELLIPTIC
    if m.dist_to_pm_identity() <= eps:
        return IsometryClass.IDENTITY
    at = abs(float(t))
    if at > 2 + eps:
        return IsometryClass.HYPERBOLIC
    if at >= 2 - eps:
        return IsometryClass.PARABOLIC
    return IsometryClass.ELLIPTIC


def translation_length(m: Mat2, eps: float = EPS) -> float:
    """Geodesic translation length 2*arccosh(|tr|/2); 0 for parabolic/identity."""
    cls = classify(m, eps)
    if cls is IsometryClass.ELLIPTIC:
        raise EllipticElement(f"trace {m.tr()} has no geodesic representative")
    if cls is not IsometryClass.HYPERBOLIC:
        return 0.0
    half = abs(float(m.tr())) / 2.0
    return 2.0 * math.acosh(half)


def length_from_trace(t: float) -> float:
    at = abs(float(t))
    if at <= 2.0:
        return 0.0
    return 2.0 * math.acosh(at / 2.0)


# ---------------------------------------------------------------------------
# Boundary points.  Canonical storage is the disk-model angle; the half-plane
# coordinate (extended real) is available through the Cayley transform.
# ---------------------------------------------------------------------------

def _real_to_circle(x) -> complex:
    if x == INF:
        return 1.0 + 0.0j
    x = float(x)
    u = complex(x, -1.0) / complex(x, 1.0)
    return u / abs(u)


def _circle_to_real(u: complex) -> float:
    # inverse Cayley: z = i(1+u)/(1-u); boundary value is real
    den = 1.0 - u
    if abs(den) < 1e-15:
        return INF
    z = 1j * (1.0 + u) / den
    return z.real


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the circle at infinity, stored as a disk-model angle."""

    theta: float

    @classmethod
    def from_angle(cls, theta: float) -> "BoundaryPoint":
        return cls(theta % (2.0 * math.pi))

    @classmethod
    def from_real(cls, x) -> "BoundaryPoint":
        u = _real_to_circle(x)
        return cls(math.atan2(u.imag, u.real) % (2.0 * math.pi))

    @property
    def u(self) -> complex:
        return cmath.exp(1j * self.theta)

    def to_real(self) -> float:
        return _circle_to_real(self.u)

    def angle_dist(self, other: "BoundaryPoint") -> float:
        d = abs(self.theta - other.theta) % (2.0 * math.pi)
        return min(d, 2.0 * math.pi - d)

    def chord_dist(self, other: "BoundaryPoint") -> float:
        return abs(self.u - other.u)


# Cayley transform as a det-1 complex matrix: (z - i)/(z + i) scaled by 1/(1+i).
_CAYLEY = (1.0 / (1.0 + 1.0j),) * 0  # placeholder to keep constants together
_C_A = 1.0 / (1.0 + 1.0j)
_C_B = -1.0j / (1.0 + 1.0j)
_C_C = 1.0 / (1.0 + 1.0j)
_C_D = 1.0j / (1.0 + 1.0j)


def disk_matrix(m: Mat2) -> tuple[complex, complex, complex, complex]:
    """Conjugate a real matrix into the disk model; det stays 1."""
    a, b, c, d = (float(x) for x in m.entries())
    # C * M
    pa = _C_A * a + _C_B * c
    pb = _C_A * b + _C_B * d
    pc = _C_C * a + _C_D * c
    pd = _C_C * b + _C_D * d
    # (C*M) * C^-1, with C^-1 = (d, -b; -c, a) of the Cayley matrix
    qa = pa * _C_D + pb * (-_C_C)
    qb = pa * (-_C_B) + pb * _C_A
    qc = pc * _C_D + pd * (-_C_C)
    qd = pc * (-_C_B) + pd * _C_A
    return (qa, qb, qc, qd)


def act(m: Mat2, xi: BoundaryPoint) -> BoundaryPoint:
    """Fractional-linear action on the circle."""
    qa, qb, qc, qd = disk_matrix(m)
    u = xi.u
    den = qc * u + qd
    if abs(den) < 1e-300:
        # image of the pole is the point at infinity of the disk map; for
        # det-1 maps preserving the circle this is qa/qc on the circle
        w = qa / qc
    else:
        w = (qa * u + qb) / den
    w = w / abs(w)
    return BoundaryPoint(math.atan2(w.imag, w.real) % (2.0 * math.pi))


def boundary_derivative(m: Mat2, xi: BoundaryPoint) -> float:
    """Conformal derivative |m'(xi)| on the circle (disk model)."""
    _, _, qc, qd = disk_matrix(m)
    den = abs(qc * xi.u + qd)
    return 1.0 / (den * den)


def act_real(m: Mat2, x):
    """Action on the extended real line (half-plane boundary)."""
    a, b, c, d = m.entries()
    if x == INF:
        if (float(c) == 0.0):
            return INF
        return float(a) / float(c)
    a, b, c, d = (float(v) for v in (a, b, c, d))
    x = float(x)
    den = c * x + d
    if den == 0.0:
        return INF
    return (a * x + b) / den


def fixed_points(m: Mat2, eps: float = EPS) -> tuple[BoundaryPoint, BoundaryPoint]:
    """(attracting, repelling) fixed points of a hyperbolic element."""
    if classify(m, eps) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolic(f"classify = {classify(m, eps).value}")
    a, b, c, d = (float(x) for x in m.entries())
    if c == 0.0:
        # fixed points are infinity and b/(d-a)
        other = b / (d - a)
        if abs(a) > 1.0:
            att, rep = INF, other
        else:
            att, rep = other, INF
        return BoundaryPoint.from_real(att), BoundaryPoint.from_real(rep)
    # roots of c x^2 + (d - a) x - b = 0, written to avoid cancellation
    p = d - a
    disc = p * p + 4.0 * b * c  # equals tr^2 - 4 for det 1
    sq = math.sqrt(disc)
    if p >= 0.0:
        q = -(p + sq) / 2.0
    else:
        q = -(p - sq) / 2.0
    x1 = q / c
    x2 = -b / q if q != 0.0 else (-p / c - x1)
    # The attracting root has |c x + d| = e^{l/2} > 1 and the repelling one
    # its reciprocal.  Compare the two instead of testing against 1: for
    # high powers the repelling value is pure cancellation noise, but the
    # noise (~|c| * ulp) stays far below the attracting value.
    if abs(c * x1 + d) > abs(c * x2 + d):
        att, rep = x1, x2
    else:
        att, rep = x2, x1
    return BoundaryPoint.from_real(att), BoundaryPoint.from_real(rep)
