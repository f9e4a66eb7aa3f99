"""Finite evidence that the horoball {Im z > h} is precisely invariant under a parabolic subgroup."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import NonPositiveInput, NotUpperTriangular
from ..moebius import MoebiusClass

TRI_TOL = 1e-12


@dataclass(frozen=True)
class InvarianceEvidence:
    """``word`` is None when no violation was found (evidence, not proof)."""

    word: Optional[tuple] = None
    top: Optional[float] = None  # highest point of the offending image

    @property
    def violation(self) -> bool:
        return self.word is not None


def image_top(g: MoebiusClass, height: float) -> float:
    """sup of Im over g({Im z > height}); ``inf`` when the image is unbounded above.

    For c != 0 the image is the disc of centre a/c + i/(2 k c^2) and radius
    1/(2 k |c|^2) with k = height + Im(d/c), provided k > 0.
    """
    a, b, c, d = g.a, g.b, g.c, g.d
    if abs(c) <= TRI_TOL * max(1.0, abs(a), abs(d)):
        rho = a / d
        if abs(rho.imag) > TRI_TOL * abs(rho) or rho.real > 0:
            return float("inf")
        return rho.real * height + (b / d).imag
    k = height + (d / c).imag
    if k <= 0:
        return float("inf")
    center = a / c + 1j / (2 * k * c * c)
    radius = 1 / (2 * k * abs(c) ** 2)
    return center.imag + radius


def _in_subgroup(g: MoebiusClass, t: complex, tol: float = 1e-9) -> bool:
    """Whether g = +-[[1, k t], [0, 1]] for an integer k."""
    if abs(g.c) > tol or abs(abs(g.a) - 1) > tol or abs(g.a - g.d) > tol:
        return False
    k = g.b / (g.a * t)
    return abs(k.imag) <= tol and abs(k.real - round(k.real)) <= tol


def precise_invariance_evidence(
    generators: Sequence[MoebiusClass],
    H_generator: MoebiusClass,
    half_plane_height: float,
    word_budget: int,
) -> InvarianceEvidence:
    """Look for g outside <H> with g(B) meeting B = {Im z > height}, over reduced words up to ``word_budget``.

    Words are enumerated by length, so a violation found at some budget is
    found at every larger one.
    """
    H = H_generator
    if abs(H.c) > TRI_TOL or abs(H.a - H.d) > 1e-9 or abs(H.b) <= TRI_TOL:
        raise NotUpperTriangular("H must be a parabolic fixing infinity")
    if not half_plane_height > 0:
        raise NonPositiveInput("half-plane height must be positive")
    t = H.b / H.a
    letters = []
    for i, g in enumerate(generators):
        letters.append(((i, 1), g))
        letters.append(((i, -1), g.inverse()))
    layer = [((k,), g) for k, g in letters]
    for _length in range(word_budget):
        for word, g in layer:
            if _in_subgroup(g, t):
                continue
            top = image_top(g, half_plane_height)
            if top > half_plane_height:
                return InvarianceEvidence(word, top)
        layer = [
            (word + (k,), g @ h)
            for word, g in layer
            for k, h in letters
            if k != (word[-1][0], -word[-1][1])
        ]
    return InvarianceEvidence()
