"""PSL(2, C) arithmetic: composition, traces, complex length, cusp normalization.

A :class:`MoebiusClass` stores a determinant-one 2x2 complex matrix and is
identified with its negative.  Every constructor path renormalizes the
determinant, so long word products do not drift away from SL(2, C).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DependentGenerators, NonCommuting, NonParabolic, SingularMatrix

DET_TOL = 1e-12
PARABOLIC_TOL = 1e-10
IDENTITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MoebiusClass:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if abs(det) < 1e-300 or not cmath.isfinite(det):
            raise SingularMatrix(f"matrix is singular or non-finite (det={det})")
        if abs(det - 1) > DET_TOL:
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_array(cls, m) -> "MoebiusClass":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls) -> "MoebiusClass":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, t: complex) -> "MoebiusClass":
        return cls(1, t, 0, 1)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "MoebiusClass":
        return MoebiusClass(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusClass") -> "MoebiusClass":
        return compose(self, other)

    def __neg__(self) -> "MoebiusClass":
        return MoebiusClass(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> "MoebiusClass":
        if n < 0:
            return self.inverse() ** (-n)
        result = MoebiusClass.identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def conjugate_by(self, C: "MoebiusClass") -> "MoebiusClass":
        """Return C M C^-1."""
        return C @ self @ C.inverse()

    def __call__(self, z: complex) -> complex:
        """Action on the Riemann sphere; ``math.inf`` stands for the point at infinity."""
        if z == math.inf:
            return self.a / self.c if self.c != 0 else math.inf
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den

    def distance(self, other: "MoebiusClass") -> float:
        """Max-entry distance between the classes, minimized over the sign."""
        p = self.to_array()
        q = other.to_array()
        return float(min(np.abs(p - q).max(), np.abs(p + q).max()))

    def is_close(self, other: "MoebiusClass", tol: float = DET_TOL) -> bool:
        scale = max(1.0, float(np.abs(self.to_array()).max()))
        return self.distance(other) <= tol * scale

    def __eq__(self, other):
        if not isinstance(other, MoebiusClass):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return self.distance(MoebiusClass.identity()) <= tol

    def __repr__(self):
        return f"MoebiusClass([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def compose(M: MoebiusClass, N: MoebiusClass) -> MoebiusClass:
    return MoebiusClass(
        M.a * N.a + M.b * N.c,
        M.a * N.b + M.b * N.d,
        M.c * N.a + M.d * N.c,
        M.c * N.b + M.d * N.d,
    )


def commutator(M: MoebiusClass, N: MoebiusClass) -> MoebiusClass:
    """[M, N] = M N M^-1 N^-1."""
    return M @ N @ M.inverse() @ N.inverse()


class IsometryKind(str, Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class ComplexLength:
    l: float
    theta: float
    kind: IsometryKind

    @property
    def value(self) -> complex:
        return complex(self.l, self.theta)


def fold_angle(theta: float) -> float:
    """Reduce an angle into (-pi, pi]; -pi maps to +pi."""
    return math.pi - (math.pi - theta) % (2 * math.pi)


def classify(M: MoebiusClass, tol: float = PARABOLIC_TOL) -> IsometryKind:
    if M.is_identity(tol):
        return IsometryKind.IDENTITY
    tr2 = M.trace ** 2
    if abs(tr2 - 4) < tol:
        return IsometryKind.PARABOLIC
    if abs(tr2.imag) < tol and -tol <= tr2.real < 4:
        return IsometryKind.ELLIPTIC
    return IsometryKind.LOXODROMIC


def complex_length(M: MoebiusClass, tol: float = PARABOLIC_TOL) -> ComplexLength:
    """Complex length l + i theta with tr^2 = 4 cosh^2(L/2), l >= 0, theta in (-pi, pi].

    The trace equation fixes L only up to sign and 2 pi i.  The sign is
    pinned by l >= 0; for elliptic elements (l = 0) we report the positive
    rotation angle, which makes the result independent of the sign of M.
    """
    kind = classify(M, tol)
    if kind in (IsometryKind.IDENTITY, IsometryKind.PARABOLIC):
        return ComplexLength(0.0, 0.0, kind)
    half = cmath.acosh(M.trace / 2)  # principal branch, Re >= 0
    if kind is IsometryKind.ELLIPTIC:
        theta = abs(fold_angle(2 * half.imag))
        return ComplexLength(0.0, theta, kind)
    return ComplexLength(2 * half.real, fold_angle(2 * half.imag), kind)


def fixed_points(M: MoebiusClass) -> list:
    """Fixed points on the Riemann sphere (``math.inf`` for infinity)."""
    a, b, c, d = M.a, M.b, M.c, M.d
    if abs(c) < 1e-14 * max(1.0, abs(a), abs(b), abs(d)):
        pts = [math.inf]
        if abs(a - d) > 1e-14 * max(1.0, abs(a), abs(d)):
            pts.append(b / (d - a))
        return pts
    disc = cmath.sqrt((a - d) ** 2 + 4 * b * c)
    p = ((a - d) + disc) / (2 * c)
    q = ((a - d) - disc) / (2 * c)
    if abs(disc) < math.sqrt(PARABOLIC_TOL):
        return [(a - d) / (2 * c)]
    return [p, q]


def normalize_cusp(lam: MoebiusClass, beta: MoebiusClass, tol: float = PARABOLIC_TOL) -> complex:
    """Teichmueller parameter w of the rank-2 cusp generated by ``lam`` and ``beta``.

    Conjugates so that lam = [[1, 2], [0, 1]]; then beta = [[1, w], [0, 1]].
    The conjugating map is determined up to post-composition with maps
    fixing infinity and lam, all of which fix w.
    """
    for name, g in (("lambda", lam), ("beta", beta)):
        if classify(g, tol) is not IsometryKind.PARABOLIC:
            raise NonParabolic(f"{name} is not parabolic")
    if not commutator(lam, beta).is_identity(max(tol, 1e-9)):
        raise NonCommuting("lambda and beta do not commute")

    (p,) = fixed_points(lam)[:1]
    if p == math.inf:
        C = MoebiusClass.identity()
    else:
        C = MoebiusClass(0, 1, -1, p)  # z -> 1/(p - z)
    lam_n = lam.conjugate_by(C)
    beta_n = beta.conjugate_by(C)
    # Upper unipotent up to sign: translation length is b / a (a = +-1).
    t_lam = lam_n.b / lam_n.a
    t_beta = beta_n.b / beta_n.a
    w = 2 * t_beta / t_lam
    if abs(w.imag) <= 1e-9 * max(1.0, abs(w)):
        raise DependentGenerators("beta lies in the real span of lambda; not a rank-2 lattice")
    return w
