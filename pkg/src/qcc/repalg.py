"""Explicit quiver representations over the rationals.

Indecomposables are found by sampling small integer matrices and keeping the
first sample whose endomorphism algebra is one dimensional.  For a positive
root this certifies that the sample lies in the open orbit, i.e. that it is
the indecomposable of that dimension vector.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import product
from typing import Sequence

from .errors import InputError, NegativeExt, NonGenericZ, NotARoot, NotFound, NotUnique, SamplingExhausted
from .quiver import DimVector, KostantPartition, Quiver, euler_form, kostant_partitions, positive_roots, root_index

Matrix = tuple[tuple[Fraction, ...], ...]

DEFAULT_SEED = 20240601


def rank(rows: list[list]) -> int:
    """Rank of a rational matrix by exact Gaussian elimination."""
    rows = [[Fraction(x) for x in r] for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        inv = 1 / p[c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f *= inv
                row = rows[i]
                for k in range(c, ncols):
                    if p[k]:
                        row[k] -= f * p[k]
        r += 1
        if r == len(rows):
            break
    return r


@dataclass(frozen=True)
class QuiverRep:
    """One matrix per arrow (same order as ``quiver.arrows``), shape ``dim(h) x dim(t)``."""

    quiver: Quiver
    dim: DimVector
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        q = self.quiver
        if len(self.matrices) != len(q.arrows):
            raise InputError("need one matrix per arrow")
        for (t, h), m in zip(q.arrow_positions(), self.matrices):
            if len(m) != self.dim[h] or any(len(row) != self.dim[t] for row in m):
                raise InputError(f"matrix shape does not match dimension vector {self.dim}")

    @classmethod
    def zero(cls, q: Quiver, dim: Sequence[int]) -> "QuiverRep":
        dim = q.check_dim(dim)
        mats = tuple(
            tuple(tuple(Fraction(0) for _ in range(dim[t])) for _ in range(dim[h]))
            for t, h in q.arrow_positions()
        )
        return cls(q, dim, mats)

    def arrow_ranks(self) -> list[int]:
        return [rank([list(r) for r in m]) for m in self.matrices]

    def to_json(self) -> dict:
        return {
            "dim": list(self.dim),
            "matrices": [[[str(x) for x in row] for row in m] for m in self.matrices],
        }


def direct_sum(reps: Sequence[QuiverRep]) -> QuiverRep:
    """Block-diagonal direct sum."""
    q = reps[0].quiver
    dim = tuple(sum(r.dim[i] for r in reps) for i in range(q.n))
    mats = []
    for a, (t, h) in enumerate(q.arrow_positions()):
        rows = []
        col = 0
        for r in reps:
            for row in r.matrices[a]:
                rows.append((Fraction(0),) * col + tuple(row) + (Fraction(0),) * (dim[t] - col - r.dim[t]))
            col += r.dim[t]
        mats.append(tuple(rows))
    return QuiverRep(q, dim, tuple(mats))


def hom_dim(q: Quiver, M: QuiverRep, N: QuiverRep) -> int:
    """Dimension of the space of morphisms ``M -> N``.

    Unknowns are the entries of ``f_i : M_i -> N_i``; each arrow contributes
    the equations ``N_a f_t - f_h M_a = 0``.
    """
    m, n = M.dim, N.dim
    offset = []
    total = 0
    for i in range(q.n):
        offset.append(total)
        total += n[i] * m[i]
    if total == 0:
        return 0

    def var(i, r, c):  # entry (r, c) of f_i, an n_i x m_i matrix
        return offset[i] + r * m[i] + c

    rows = []
    for a, (t, h) in enumerate(q.arrow_positions()):
        Ma, Na = M.matrices[a], N.matrices[a]
        # entry (r, c) of an n_h x m_t matrix
        for r in range(n[h]):
            for c in range(m[t]):
                row = [0] * total
                for k in range(n[t]):
                    if Na[r][k]:
                        row[var(t, k, c)] += Na[r][k]
                for k in range(m[h]):
                    if Ma[k][c]:
                        row[var(h, r, k)] -= Ma[k][c]
                rows.append(row)
    return total - rank(rows)


def end_dim(q: Quiver, M: QuiverRep) -> int:
    return hom_dim(q, M, M)


def ext_dim(q: Quiver, M: QuiverRep, N: QuiverRep) -> int:
    """``dim Ext^1(M, N)`` from hom and the Euler form."""
    val = hom_dim(q, M, N) - euler_form(q, M.dim, N.dim)
    if val < 0:
        raise NegativeExt(f"negative ext for dimensions {M.dim}, {N.dim}")
    return val


_lock = threading.Lock()
_indec_cache: dict[tuple[Quiver, int, DimVector], QuiverRep] = {}
_ext_cache: dict[tuple[Quiver, int, DimVector, DimVector], tuple[int, int]] = {}


def construct_indecomposable(q: Quiver, b: Sequence[int], seed: int = DEFAULT_SEED,
                             attempts: int = 200) -> QuiverRep:
    """The indecomposable representation with dimension vector ``b``."""
    b = q.check_dim(b)
    key = (q, seed, b)
    cached = _indec_cache.get(key)
    if cached is not None:
        return cached
    if b not in root_index(q):
        raise NotARoot(f"{b} is not a positive root")
    rng = random.Random(f"{seed}:{b}")
    rep = None
    for attempt in range(attempts):
        bound = 2 + attempt // 20
        mats = tuple(
            tuple(tuple(Fraction(rng.randint(-bound, bound)) for _ in range(b[t])) for _ in range(b[h]))
            for t, h in q.arrow_positions()
        )
        cand = QuiverRep(q, b, mats)
        if end_dim(q, cand) == 1:
            rep = cand
            break
    if rep is None:
        raise SamplingExhausted(f"no indecomposable of dimension {b} after {attempts} samples")
    with _lock:
        _indec_cache.setdefault(key, rep)
    return _indec_cache[key]


def root_hom_ext(q: Quiver, b1: Sequence[int], b2: Sequence[int], seed: int = DEFAULT_SEED) -> tuple[int, int]:
    """``(hom, ext)`` between the indecomposables of two roots."""
    key = (q, seed, tuple(b1), tuple(b2))
    cached = _ext_cache.get(key)
    if cached is None:
        M = construct_indecomposable(q, b1, seed)
        N = construct_indecomposable(q, b2, seed)
        h = hom_dim(q, M, N)
        e = h - euler_form(q, M.dim, N.dim)
        if e < 0:
            raise NegativeExt(f"negative ext for roots {tuple(b1)}, {tuple(b2)}")
        cached = (h, e)
        with _lock:
            _ext_cache[key] = cached
    return cached


def root_ext(q: Quiver, b1: Sequence[int], b2: Sequence[int], seed: int = DEFAULT_SEED) -> int:
    return root_hom_ext(q, b1, b2, seed)[1]


def orbit_codimension(m: KostantPartition, seed: int = DEFAULT_SEED) -> int:
    """Codimension of the orbit, ``dim Ext(M, M)`` for its module ``M``."""
    q = m.quiver
    supp = list(m.support().items())
    return sum(mi * mj * root_ext(q, bi, bj, seed) for bi, mi in supp for bj, mj in supp)


def orbit_module(m: KostantPartition, seed: int = DEFAULT_SEED) -> QuiverRep:
    q = m.quiver
    parts = [construct_indecomposable(q, r, seed) for r, k in m.support().items() for _ in range(k)]
    if not parts:
        return QuiverRep.zero(q, q.zero())
    return direct_sum(parts)


def generic_kostant_partition(q: Quiver, d: Sequence[int], seed: int = DEFAULT_SEED) -> KostantPartition:
    """The Kostant partition of the open orbit in ``Rep_d``."""
    found = [m for m in kostant_partitions(q, d) if orbit_codimension(m, seed) == 0]
    if not found:
        raise NotFound(f"no orbit of codimension 0 in dimension {tuple(d)}")
    if len(found) > 1:
        raise NotUnique(f"several orbits of codimension 0 in dimension {tuple(d)}")
    return found[0]


def generic_ext(q: Quiver, d1: Sequence[int], d2: Sequence[int], seed: int = DEFAULT_SEED) -> int:
    """Ext between general representations of dimensions ``d1`` and ``d2``."""
    if not any(d1) or not any(d2):
        return 0
    s1 = generic_kostant_partition(q, d1, seed).support()
    s2 = generic_kostant_partition(q, d2, seed).support()
    return sum(m1 * m2 * root_ext(q, r1, r2, seed) for r1, m1 in s1.items() for r2, m2 in s2.items())


def submodule_dim_vectors(q: Quiver, b: Sequence[int], seed: int = DEFAULT_SEED) -> set[DimVector]:
    """Dimension vectors of subrepresentations of the general representation of ``b``.

    Uses the criterion that ``d`` occurs iff the general ext from ``d`` to
    ``b - d`` vanishes.
    """
    b = q.check_dim(b)
    out = set()
    for d in product(*(range(x + 1) for x in b)):
        rest = tuple(x - y for x, y in zip(b, d))
        if generic_ext(q, d, rest, seed) == 0:
            out.add(tuple(d))
    return out


@dataclass(frozen=True)
class StabilityFunction:
    """Central charge: a pair ``(x_i, y_i)`` with ``y_i > 0`` per vertex."""

    charge: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        ch = tuple((Fraction(x), Fraction(y)) for x, y in self.charge)
        if any(y <= 0 for _, y in ch):
            raise InputError("every vertex needs a positive imaginary part")
        object.__setattr__(self, "charge", ch)

    @classmethod
    def parse(cls, text: str) -> "StabilityFunction":
        """``"x1,y1;x2,y2;..."`` with rational entries."""
        try:
            pairs = [tuple(Fraction(v.strip()) for v in part.split(",")) for part in text.split(";")]
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad stability function {text!r}: {exc}") from exc
        if any(len(p) != 2 for p in pairs):
            raise InputError(f"bad stability function {text!r}: need x,y pairs")
        return cls(tuple(pairs))

    def __str__(self) -> str:
        return ";".join(f"{x},{y}" for x, y in self.charge)

    def __call__(self, d: Sequence[int]) -> tuple[Fraction, Fraction]:
        return (sum((k * x for k, (x, _) in zip(d, self.charge)), Fraction(0)),
                sum((k * y for k, (_, y) in zip(d, self.charge)), Fraction(0)))

    def scaled(self, factor) -> "StabilityFunction":
        return StabilityFunction(tuple((x * factor, y * factor) for x, y in self.charge))

    def compare(self, d1: Sequence[int], d2: Sequence[int]) -> int:
        """Sign of ``phase(d1) - phase(d2)``."""
        x1, y1 = self(d1)
        x2, y2 = self(d2)
        det = x2 * y1 - y2 * x1
        return (det > 0) - (det < 0)


def _proportional(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x * sum(b) == y * sum(a) for x, y in zip(a, b))


def check_generic(Z: StabilityFunction, cutoff: Sequence[int]) -> bool:
    """No two non-proportional vectors ``<= cutoff`` have images on one line."""
    vecs = [v for v in product(*(range(c + 1) for c in cutoff)) if any(v)]
    for i, u in enumerate(vecs):
        for v in vecs[i + 1:]:
            if Z.compare(u, v) == 0 and not _proportional(u, v):
                return False
    return True


def stable_roots(q: Quiver, Z: StabilityFunction, seed: int = DEFAULT_SEED) -> list[DimVector]:
    """Stable positive roots, sorted by strictly decreasing phase."""
    if len(Z.charge) != q.n:
        raise InputError(f"stability function needs {q.n} pairs")
    out = []
    for r in positive_roots(q):
        stable = True
        for d in submodule_dim_vectors(q, r, seed):
            if not any(d) or d == r:
                continue
            c = Z.compare(d, r)
            if c == 0:
                raise NonGenericZ(f"{d} and {r} have the same phase")
            if c > 0:
                stable = False
        if stable:
            out.append(r)
    for i, u in enumerate(out):
        for v in out[i + 1:]:
            if Z.compare(u, v) == 0:
                raise NonGenericZ(f"stable roots {u} and {v} have the same phase")
    return sorted(out, key=cmp_to_key(lambda u, v: -Z.compare(u, v)))


def z_compatible_partitions(q: Quiver, Z: StabilityFunction, g: Sequence[int],
                            seed: int = DEFAULT_SEED) -> list[KostantPartition]:
    """Kostant partitions of ``g`` supported on ``Z``-stable roots."""
    stable = set(stable_roots(q, Z, seed))
    return [m for m in kostant_partitions(q, g) if set(m.support()) <= stable]


def random_generic_stability(q: Quiver, cutoff: Sequence[int], rng: random.Random,
                             bound: int = 20, attempts: int = 1000) -> StabilityFunction:
    """A random integral stability function that is generic up to ``cutoff``."""
    for _ in range(attempts):
        Z = StabilityFunction(tuple((rng.randint(-bound, bound), rng.randint(1, bound)) for _ in q.vertices))
        if check_generic(Z, cutoff):
            return Z
    raise SamplingExhausted("no generic stability function found")
