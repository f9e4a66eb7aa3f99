"""Explicit marked representations of the punctured torus and four-punctured sphere groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..errors import LowerHalfPlane
from ..moebius import MoebiusClass

T2 = MoebiusClass(1, 2, 0, 1)  # the accidental parabolic, normalized


class SurfaceKind(str, Enum):
    PUNCTURED_TORUS = "punctured_torus"
    FOUR_PUNCTURED_SPHERE = "four_punctured_sphere"

    @classmethod
    def parse(cls, s) -> "SurfaceKind":
        if isinstance(s, cls):
            return s
        aliases = {"torus": cls.PUNCTURED_TORUS, "sphere": cls.FOUR_PUNCTURED_SPHERE}
        return aliases.get(s) or cls(s)


EXTENSION_NAME = {SurfaceKind.PUNCTURED_TORUS: "c", SurfaceKind.FOUR_PUNCTURED_SPHERE: "d"}


@dataclass(frozen=True)
class MarkedRepresentation:
    surface_kind: SurfaceKind
    z: complex
    images: dict = field(hash=False)
    w: Optional[complex] = None

    def word(self, letters: str) -> MoebiusClass:
        """Image of a word; an upper-case letter denotes the inverse generator."""
        out = MoebiusClass.identity()
        for ch in letters:
            g = self.images[ch.lower()]
            out = out @ (g.inverse() if ch.isupper() else g)
        return out

    @property
    def peripheral(self) -> MoebiusClass:
        """The element the extension generator commutes with: b (torus) or ab (sphere)."""
        if self.surface_kind is SurfaceKind.PUNCTURED_TORUS:
            return self.images["b"]
        return self.images["a"] @ self.images["b"]


def sigma_z_torus(z: complex) -> MarkedRepresentation:
    z = complex(z)
    a = MoebiusClass(1j * z, 1j, 1j, 0)
    return MarkedRepresentation(SurfaceKind.PUNCTURED_TORUS, z, {"a": a, "b": T2})


def sigma_z_sphere(z: complex) -> MarkedRepresentation:
    z = complex(z)
    images = {
        "a": MoebiusClass(-3, 2, -2, 1),
        "b": MoebiusClass(1, 0, 2, 1),
        "c": MoebiusClass(-1 + 2 * z, -2 * z * z, 2, -1 - 2 * z),
    }
    return MarkedRepresentation(SurfaceKind.FOUR_PUNCTURED_SPHERE, z, images)


def sigma_z(z: complex, kind) -> MarkedRepresentation:
    kind = SurfaceKind.parse(kind)
    return sigma_z_torus(z) if kind is SurfaceKind.PUNCTURED_TORUS else sigma_z_sphere(z)


def extend_with_w(rep: MarkedRepresentation, w: complex) -> MarkedRepresentation:
    """Add the parabolic [[1, w], [0, 1]] sharing the fixed point at infinity."""
    w = complex(w)
    if not w.imag > 0:
        raise LowerHalfPlane("w must lie in the upper half-plane")
    images = dict(rep.images)
    images[EXTENSION_NAME[rep.surface_kind]] = MoebiusClass.translation(w)
    return MarkedRepresentation(rep.surface_kind, rep.z, images, w)
