"""Three-valued membership in the Maskit slice.

A query z is reduced to the punctured-torus slice M+ and then tested in a
fixed order:

1. Im z <= 1 is outside M+ (a known necessary condition).
2. A violated Joergensen inequality for a non-elementary pair of group
   elements certifies non-discreteness, hence Out.
3. Strict interior of a certified rectangle gives In.
4. The optional heuristic region Im z > 2 gives In, labelled as heuristic.
5. Otherwise Unknown.

No step ever claims In without region data.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from ..errors import ParseError
from .reps import SurfaceKind

JOERGENSEN_SLACK = 1e-9
FIX_TOL = 1e-8
HEURISTIC_IM = 2.0


class Verdict(str, Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


class Evidence(str, Enum):
    NECESSARY_BOUND = "necessary_bound_violated"
    JOERGENSEN = "joergensen_violation"
    CERTIFIED = "certified_region"
    HEURISTIC = "heuristic_region"
    MOCK = "mock_oracle"
    NONE = "none"


@dataclass(frozen=True)
class SliceVerdict:
    verdict: Verdict
    evidence: Evidence
    detail: str = ""

    def evidence_string(self) -> str:
        """Compact single-field form, e.g. ``joergensen_violation;a;bAb``."""
        return self.evidence.value + (";" + self.detail if self.detail else "")


@dataclass(frozen=True)
class CertifiedRegion:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    provenance: str = ""

    def contains_interior(self, z: complex) -> bool:
        """Strict interior test, periodic under z -> z + 2."""
        k_lo = math.ceil((self.re_min - z.real) / 2)
        k_hi = math.floor((self.re_max - z.real) / 2)
        if not (self.im_min < z.imag < self.im_max):
            return False
        for k in range(k_lo, k_hi + 1):
            x = z.real + 2 * k
            if self.re_min < x < self.re_max:
                return True
        return False


def parse_regions(text: str, source: str = "<string>") -> tuple:
    """Parse ``re_min re_max im_min im_max # provenance`` lines; blank and ``#`` lines are skipped."""
    regions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, _, prov = raw.partition("#")
        body = body.strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 4:
            raise ParseError(f"{source}:{lineno}: expected 4 numbers, got {len(parts)}")
        try:
            x0, x1, y0, y1 = (float(p) for p in parts)
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: {exc}") from None
        if not (x0 < x1 and y0 < y1) or not all(map(math.isfinite, (x0, x1, y0, y1))):
            raise ParseError(f"{source}:{lineno}: degenerate or non-finite rectangle")
        regions.append(CertifiedRegion(x0, x1, y0, y1, prov.strip()))
    return tuple(regions)


def load_regions(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return parse_regions(fh.read(), os.fspath(path))


@dataclass(frozen=True)
class OracleConfig:
    """Settings for the default pipeline.

    ``pair_length`` bounds the word length of the first element of each
    Joergensen pair; the second ranges over all words up to ``word_budget``.
    """

    regions: tuple = ()
    word_budget: int = 8
    heuristic: bool = False
    pair_length: int = 2


@dataclass(frozen=True)
class MockStripOracle:
    """Fully resolving fixture: M+ is modelled as {Im z > c} with c >= 1."""

    c: float

    def __post_init__(self):
        if not self.c >= 1:
            raise ValueError("mock strip height must be at least 1, the known necessary bound")

    def classify(self, z: complex) -> SliceVerdict:
        if z.imag <= 1:
            return SliceVerdict(Verdict.OUT, Evidence.NECESSARY_BOUND)
        if z.imag > self.c:
            return SliceVerdict(Verdict.IN, Evidence.MOCK, f"strip>{self.c:g}")
        return SliceVerdict(Verdict.OUT, Evidence.MOCK, f"strip>{self.c:g}")


Oracle = Union[OracleConfig, MockStripOracle]


def parse_oracle(source: Optional[str], **kwargs) -> Oracle:
    """``mock-strip:<c>`` or a path to a certified-region file; None gives an empty config."""
    if source is None or source == "":
        return OracleConfig(**kwargs)
    if source.startswith("mock-strip:"):
        try:
            return MockStripOracle(float(source.split(":", 1)[1]))
        except ValueError as exc:
            raise ParseError(f"bad mock oracle {source!r}: {exc}") from None
    try:
        regions = load_regions(source)
    except OSError as exc:
        raise ParseError(f"cannot read oracle file {source!r}: {exc}") from None
    return OracleConfig(regions=regions, **kwargs)


# -- reductions --------------------------------------------------------------

def reduce_re(z: complex) -> complex:
    """Translate by a multiple of 2 so that Re z lies in (-1, 1]."""
    x = z.real - 2 * math.floor((z.real + 1) / 2)
    if x <= -1:
        x += 2
    return complex(x, z.imag)


def to_torus_plus(z: complex, kind=SurfaceKind.PUNCTURED_TORUS, side: str = "+") -> complex:
    """The point of M+ whose membership decides the original query.

    The sphere slice satisfies z in M_{0,4}^(+-) iff 2z in M^(+-);
    z in M^- iff -z in M^+.
    """
    kind = SurfaceKind.parse(kind)
    z = complex(z)
    if kind is SurfaceKind.FOUR_PUNCTURED_SPHERE:
        z = 2 * z
    if side == "-":
        z = -z
    elif side != "+":
        raise ValueError("side must be '+' or '-'")
    return reduce_re(z)


# -- Joergensen scan ---------------------------------------------------------

_LETTERS = "aAbB"
_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


@lru_cache(maxsize=None)
def _word_tree(budget: int):
    """Reduced words of length 1..budget over a, A, b, B, ordered by length then by prefix order.

    Returns the words with, per word, the index of its prefix (-1 for single
    letters) and the index of its last letter in ``_LETTERS``.
    """
    words, parent, last = [], [], []
    layer = list(range(4))
    for i, ch in enumerate(_LETTERS):
        words.append(ch)
        parent.append(-1)
        last.append(i)
    for _ in range(budget - 1):
        nxt = []
        for p in layer:
            w = words[p]
            for i, ch in enumerate(_LETTERS):
                if ch != _INVERSE[w[-1]]:
                    words.append(w + ch)
                    parent.append(p)
                    last.append(i)
                    nxt.append(len(words) - 1)
        layer = nxt
    return tuple(words), np.array(parent), np.array(last)


def reduced_words(budget: int) -> tuple:
    """All freely reduced words of length 1..budget over a, A, b, B, ordered by length then by prefix order."""
    return _word_tree(budget)[0] if budget > 0 else ()


def _word_matrices(z: complex, budget: int) -> np.ndarray:
    words, parent, last = _word_tree(budget)
    a = np.array([[1j * z, 1j], [1j, 0]], dtype=complex)
    b = np.array([[1, 2], [0, 1]], dtype=complex)
    a_inv = np.array([[0, -1j], [-1j, 1j * z]], dtype=complex)
    b_inv = np.array([[1, -2], [0, 1]], dtype=complex)
    gens = np.stack([a, a_inv, b, b_inv])
    mats = np.empty((len(words), 2, 2), dtype=complex)
    mats[:4] = gens
    start = 4
    while start < len(words):
        # each layer is contiguous and its parents precede it
        stop = start
        L = len(words[start])
        while stop < len(words) and len(words[stop]) == L:
            stop += 1
        mats[start:stop] = mats[parent[start:stop]] @ gens[last[start:stop]]
        start = stop
    return mats


def _fixed_vectors(m) -> list:
    """Homogeneous vectors of the fixed points of a non-elliptic, non-identity matrix."""
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    scale = max(1.0, abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-14 * scale:
        vecs = [np.array([1, 0], dtype=complex)]
        if abs(a - d) > 1e-12 * scale:
            vecs.append(np.array([b, d - a], dtype=complex))
        return vecs
    disc = np.sqrt((a - d) ** 2 + 4 * b * c)
    vecs = [np.array([(a - d) + disc, 2 * c]), np.array([(a - d) - disc, 2 * c])]
    if abs(disc) <= 1e-7 * scale:
        vecs = vecs[:1]
    return vecs


def _preserves(Bs: np.ndarray, vecs: list) -> np.ndarray:
    """Mask of the B's mapping the fixed-point set onto itself (chordal test on the sphere)."""
    us = [v / np.linalg.norm(v) for v in vecs]
    ok = np.ones(len(Bs), dtype=bool)
    for u in us:
        img = Bs @ u
        img /= np.linalg.norm(img, axis=1)[:, None]
        hit = np.zeros(len(Bs), dtype=bool)
        for v in us:
            cross = np.abs(img[:, 0] * v[1] - img[:, 1] * v[0])
            hit |= cross < FIX_TOL
        ok &= hit
    return ok


def _commutator_trace(A: np.ndarray, Bs: np.ndarray) -> np.ndarray:
    Ai = np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]])
    Bi = np.empty_like(Bs)
    Bi[:, 0, 0] = Bs[:, 1, 1]
    Bi[:, 1, 1] = Bs[:, 0, 0]
    Bi[:, 0, 1] = -Bs[:, 0, 1]
    Bi[:, 1, 0] = -Bs[:, 1, 0]
    C = (A @ Bs) @ (Ai @ Bi)
    return C[:, 0, 0] + C[:, 1, 1]


def joergensen_scan(z: complex, budget: int = 8, pair_length: int = 2) -> Optional[tuple]:
    """First pair (A, B) of words violating Joergensen's inequality for sigma_z, or None.

    A ranges over words of length <= pair_length that are loxodromic or
    parabolic (finite elementary groups with elliptics could otherwise give
    false positives); B over all reduced words up to ``budget``.  The pair
    must be non-elementary, i.e. B must not preserve the fixed points of A.

    Pairs are screened with tr[A,B] = trA^2 + trB^2 + trAB^2 - trA trB trAB - 2
    and every candidate is confirmed with explicit matrix products.
    """
    if budget < 1:
        return None
    words = reduced_words(budget)
    mats = _word_matrices(complex(z), budget)
    tr = mats[:, 0, 0] + mats[:, 1, 1]
    n_short = sum(1 for w in words if len(w) <= min(pair_length, budget))
    t2 = tr[:n_short] ** 2
    loxo = ~((np.abs(t2.imag) < 1e-10) & (t2.real >= -1e-10) & (t2.real < 4 - 1e-10))
    idx = np.nonzero(loxo)[0]
    if idx.size == 0:
        return None
    trAB = np.einsum("aij,bji->ab", mats[idx], mats)
    tA = tr[idx][:, None]
    tB = tr[None, :]
    comm = tA ** 2 + tB ** 2 + trAB ** 2 - tA * tB * trAB - 2
    q = np.abs(tA ** 2 - 4) + np.abs(comm - 2)
    screen = q < 1 + 1e-3
    for row in np.nonzero(screen.any(axis=1))[0]:
        i = idx[row]
        cand = np.nonzero(screen[row])[0]
        exact = abs(tr[i] ** 2 - 4) + np.abs(_commutator_trace(mats[i], mats[cand]) - 2)
        cand = cand[exact < 1 - JOERGENSEN_SLACK]
        if cand.size == 0:
            continue
        keep = ~_preserves(mats[cand], _fixed_vectors(mats[i]))
        if keep.any():
            return words[i], words[cand[np.argmax(keep)]]
    return None


# -- membership --------------------------------------------------------------

def classify_torus_plus(z: complex, config: Oracle) -> SliceVerdict:
    """Membership of an already-reduced point in M+."""
    if isinstance(config, MockStripOracle):
        return config.classify(z)
    if z.imag <= 1:
        return SliceVerdict(Verdict.OUT, Evidence.NECESSARY_BOUND)
    pair = joergensen_scan(z, config.word_budget, config.pair_length) if config.word_budget > 0 else None
    if pair is not None:
        return SliceVerdict(Verdict.OUT, Evidence.JOERGENSEN, ";".join(pair))
    for i, reg in enumerate(config.regions):
        if reg.contains_interior(z):
            return SliceVerdict(Verdict.IN, Evidence.CERTIFIED, f"{i}" + (f":{reg.provenance}" if reg.provenance else ""))
    if config.heuristic and z.imag > HEURISTIC_IM:
        return SliceVerdict(Verdict.IN, Evidence.HEURISTIC, "non-rigorous:Im>2")
    return SliceVerdict(Verdict.UNKNOWN, Evidence.NONE)


def slice_membership(
    z: complex,
    kind=SurfaceKind.PUNCTURED_TORUS,
    config: Optional[Oracle] = None,
    side: str = "+",
) -> SliceVerdict:
    """Three-valued membership of z in the (+ or -) Maskit slice of the given surface."""
    config = OracleConfig() if config is None else config
    return classify_torus_plus(to_torus_plus(z, kind, side), config)
