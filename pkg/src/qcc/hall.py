"""Shuffle products in the cohomological and K-theoretic Hall algebras.

For dimension vectors ``g_1, ..., g_r`` summing to ``g`` the product of
classes ``f_u`` (each a symmetric function of its own Chern roots) is a sum
over shuffles, i.e. over ways to split each vertex's roots into ordered
blocks of the prescribed sizes.  Summands have denominators of the form
``omega - alpha`` between roots at the same vertex.

The default ``"vertexwise"`` method builds the summand of the canonical
shuffle (each block gets consecutive roots) with its denominator cleared
against the full Vandermonde product, then at every vertex with more than
one block antisymmetrises over the block cosets and divides that vertex's
Vandermonde out exactly.  ``"direct"`` clears every summand separately and
serves as a cross-check; :func:`shuffle_product_at` evaluates the sum at a
single point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence

from . import kernels
from .errors import BlockMismatch, InputError, ModeMismatch, NonzeroConstantTerm, NotDivisible
from .poly import LaurentPoly, RationalExpr, Var, Y, alpha, layout_for, Layout
from .quiver import DimVector, Quiver


class Mode(str, Enum):
    COHOMOLOGY = "cohomology"
    KTHEORY = "ktheory"

    @classmethod
    def of(cls, value) -> "Mode":
        if isinstance(value, str):
            value = _MODE_ALIASES.get(value.lower(), value.lower())
        try:
            return cls(value)
        except ValueError as exc:
            raise InputError(f"unknown mode {value!r}") from exc


_MODE_ALIASES = {"coh": "cohomology", "h": "cohomology", "csm": "cohomology",
                 "k": "ktheory", "k-theory": "ktheory", "mc": "ktheory"}


def chern_roots(q: Quiver, g: Sequence[int]) -> list[list[Var]]:
    """Per vertex (in vertex order) the variables ``a{i}_1 .. a{i}_{g(i)}``."""
    return [[alpha(v, k) for k in range(1, g[j] + 1)] for j, v in enumerate(q.vertices)]


def ring_layout(q: Quiver, g: Sequence[int], with_y: bool) -> Layout:
    vs = [v for block in chern_roots(q, g) for v in block]
    if with_y:
        vs.append(Y)
    return layout_for(tuple(sorted(vs)))


# shuffles ---------------------------------------------------------------

def _ordered_splits(n: int, sizes: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Ordered set partitions of ``1..n`` into blocks of the given sizes."""
    if not sizes:
        if n == 0:
            yield ()
        return

    def rec(rest: tuple[int, ...], k: int):
        if k == len(sizes) - 1:
            yield (rest,)
            return
        for chosen in combinations(rest, sizes[k]):
            left = tuple(x for x in rest if x not in chosen)
            for tail in rec(left, k + 1):
                yield (chosen,) + tail

    yield from rec(tuple(range(1, n + 1)), 0)


def _inversions(seq: Sequence[int]) -> int:
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


@dataclass(frozen=True)
class Shuffle:
    """``parts[i][u]`` is the sorted tuple of slots of block ``u`` at vertex position ``i``."""

    parts: tuple[tuple[tuple[int, ...], ...], ...]

    def sign(self) -> int:
        inv = sum(_inversions([x for block in vertex for x in block]) for vertex in self.parts)
        return -1 if inv % 2 else 1

    def sizes(self) -> list[DimVector]:
        r = len(self.parts[0]) if self.parts else 0
        return [tuple(len(vertex[u]) for vertex in self.parts) for u in range(r)]


def shuffle_count(gs: Sequence[Sequence[int]]) -> int:
    if not gs:
        return 1
    total = 1
    for j in range(len(gs[0])):
        n = sum(g[j] for g in gs)
        c = math.factorial(n)
        for g in gs:
            c //= math.factorial(g[j])
        total *= c
    return total


def enumerate_shuffles(gs: Sequence[Sequence[int]]) -> Iterator[Shuffle]:
    """All shuffles for the list ``gs`` in a fixed canonical order."""
    gs = [tuple(g) for g in gs]
    if not gs:
        yield Shuffle(())
        return
    n = len(gs[0])
    if any(len(g) != n for g in gs):
        raise BlockMismatch("dimension vectors of different lengths")
    per_vertex = [list(_ordered_splits(sum(g[j] for g in gs), [g[j] for g in gs])) for j in range(n)]
    for combo in product(*per_vertex):
        yield Shuffle(tuple(combo))


def _factor_pairs(q: Quiver, S: Shuffle):
    """Yield ``(kind, omega, alpha)`` for every linear factor of the summand.

    ``kind`` is ``"arrow_fwd"`` (omega at the head in a later block than alpha
    at the tail), ``"arrow_back"`` (omega at the head in an earlier block) or
    ``"vertex"`` (same vertex, omega in the later block).
    """
    r = len(S.parts[0]) if S.parts else 0
    verts = q.vertices
    for t, h in q.arrow_positions():
        for v in range(r):
            for w in range(v + 1, r):
                for om in S.parts[h][w]:
                    for al in S.parts[t][v]:
                        yield "arrow_fwd", alpha(verts[h], om), alpha(verts[t], al)
                for om in S.parts[h][v]:
                    for al in S.parts[t][w]:
                        yield "arrow_back", alpha(verts[h], om), alpha(verts[t], al)
    for i, vertex in enumerate(S.parts):
        for v in range(r):
            for w in range(v + 1, r):
                for om in vertex[w]:
                    for al in vertex[v]:
                        yield "vertex", alpha(verts[i], om), alpha(verts[i], al)


def fac_factors(q: Quiver, S: Shuffle, mode) -> RationalExpr:
    """The structure factor of a shuffle as a factored rational expression."""
    mode = Mode.of(mode)
    x = LaurentPoly.var
    num = LaurentPoly.one()
    den = []
    mono = LaurentPoly.one()
    for kind, om, al in _factor_pairs(q, S):
        if mode is Mode.COHOMOLOGY:
            if kind == "arrow_fwd":
                num = num * (x(om) - x(al))
            else:
                num = num * (1 + x(om) - x(al))
        else:
            if kind == "arrow_fwd":
                num = num * (x(om) - x(al))
                mono = mono * x(om)
            elif kind == "arrow_back":
                num = num * (x(om) + x(Y) * x(al))
                mono = mono * x(om)
            else:
                num = num * (x(om) + x(Y) * x(al))
        if kind == "vertex":
            den.append((om, x(al), 1))
    return RationalExpr(num, den, mono)


# symbolic product ---------------------------------------------------------

def _check_factors(q: Quiver, fs) -> list[tuple[DimVector, LaurentPoly]]:
    out = []
    for g, f in fs:
        g = q.check_dim(g)
        f = LaurentPoly.const(f) if isinstance(f, (int, Fraction)) else f
        for var in f.variables():
            if var == Y:
                continue
            j = q.position.get(var.vertex)
            if j is None or var.slot > g[j]:
                raise BlockMismatch(f"variable {var} does not belong to dimension {g}")
        out.append((g, f))
    return out


def _canonical_offsets(gs: Sequence[DimVector]) -> list[list[int]]:
    """``offsets[u][i]``: slots of block ``u`` at vertex ``i`` start after this."""
    n = len(gs[0])
    offs = []
    run = [0] * n
    for g in gs:
        offs.append(list(run))
        run = [a + b for a, b in zip(run, g)]
    return offs


def _canonical_shuffle(gs: Sequence[DimVector]) -> Shuffle:
    offs = _canonical_offsets(gs)
    n = len(gs[0])
    return Shuffle(tuple(
        tuple(tuple(range(offs[u][i] + 1, offs[u][i] + g[i] + 1)) for u, g in enumerate(gs))
        for i in range(n)
    ))


class _Ring:
    """Raw-dictionary helpers over one fixed layout."""

    def __init__(self, layout: Layout):
        self.layout = layout
        self.zero = layout.zero
        self.shift = {v: s for v, s in zip(layout.variables, layout.shifts)}

    def unit(self, v: Var) -> int:
        return 1 << self.shift[v]

    def linear(self, const, om: Var, c_om, al: Var, c_al, al_times_y: bool = False) -> dict:
        z = self.zero
        out = {}
        if const:
            out[z] = const
        out[z + self.unit(om)] = c_om
        k = z + self.unit(al)
        if al_times_y:
            k += self.unit(Y)
        out[k] = out.get(k, 0) + c_al
        return out

    def embed(self, p: LaurentPoly) -> dict:
        return dict(p.in_layout(self.layout).raw_terms)


def _summand_numerator(q: Quiver, S: Shuffle, mode: Mode, ring: _Ring, skip_w: set[int],
                       start: dict | None = None) -> dict:
    """``start`` times the linear factors of ``S`` and its within-block Vandermonde.

    Multiplying the linear factors one at a time into the (usually larger)
    ``start`` is much cheaper than expanding them first.
    """
    terms = start if start is not None else {ring.zero: 1}
    mono_delta = 0
    for kind, om, al in _factor_pairs(q, S):
        if mode is Mode.COHOMOLOGY:
            if kind == "arrow_fwd":
                fac = ring.linear(0, om, 1, al, -1)
            else:
                fac = ring.linear(1, om, 1, al, -1)
        else:
            if kind == "arrow_fwd":
                fac = ring.linear(0, om, 1, al, -1)
                mono_delta -= ring.unit(om)
            elif kind == "arrow_back":
                fac = ring.linear(0, om, 1, al, 1, al_times_y=True)
                mono_delta -= ring.unit(om)
            else:
                fac = ring.linear(0, om, 1, al, 1, al_times_y=True)
        terms = kernels.mul(terms, fac, ring.zero)
    verts = q.vertices
    for i, vertex in enumerate(S.parts):
        if i in skip_w:
            continue
        for block in vertex:
            for a, b in combinations(block, 2):
                fac = ring.linear(0, alpha(verts[i], b), 1, alpha(verts[i], a), -1)
                terms = kernels.mul(terms, fac, ring.zero)
    if mono_delta:
        terms = kernels.shift(terms, mono_delta)
    return terms


def _divide_vandermonde(terms: dict, ring: _Ring, blocks) -> dict:
    for block in blocks:
        for a, b in combinations(block, 2):
            terms = kernels.div_linear(terms, ring.shift[b], ring.unit(a), 1)
    return terms


def _wrap(layout: Layout, terms: dict) -> LaurentPoly:
    out = {}
    for k, c in terms.items():
        if c:
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            out[k] = c
    return LaurentPoly(layout, out).trimmed()


def shuffle_product(q: Quiver, fs: Sequence[tuple[Sequence[int], LaurentPoly]], mode,
                    method: str = "vertexwise") -> LaurentPoly:
    """``f_1 * ... * f_r`` for ``fs = [(g_1, f_1), ..., (g_r, f_r)]``."""
    mode = Mode.of(mode)
    fs = _check_factors(q, fs)
    if not fs:
        return LaurentPoly.one()
    if len(fs) == 1:
        return fs[0][1]
    if method == "direct":
        return _shuffle_product_direct(q, fs, mode)
    if method != "vertexwise":
        raise InputError(f"unknown method {method!r}")
    gs = [g for g, _ in fs]
    g = tuple(map(sum, zip(*gs)))
    with_y = mode is Mode.KTHEORY or any(Y in f.variables() for _, f in fs)
    ring = _Ring(ring_layout(q, g, with_y))
    verts = q.vertices
    multi = [i for i in range(q.n) if sum(1 for gu in gs if gu[i]) > 1]
    single = set(range(q.n)) - set(multi)
    S0 = _canonical_shuffle(gs)
    offs = _canonical_offsets(gs)
    terms = {ring.zero: 1}
    for u, (gu, f) in enumerate(fs):
        ren = {alpha(verts[i], k): alpha(verts[i], offs[u][i] + k)
               for i in range(q.n) for k in range(1, gu[i] + 1)}
        fu = f.rename(ren) if ren else f
        terms = kernels.mul(terms, ring.embed(fu), ring.zero)
        if not terms:
            return LaurentPoly.zero()
    terms = _summand_numerator(q, S0, mode, ring, single, terms)
    for i in multi:
        sizes = [gu[i] for gu in gs]
        slots = list(range(1, g[i] + 1))
        src = [ring.shift[alpha(verts[i], s)] for s in slots]
        acc: dict = {}
        for split in _ordered_splits(g[i], sizes):
            target = [x for block in split for x in block]
            if target == slots:
                kernels.add_into(acc, terms)
                continue
            dst = [ring.shift[alpha(verts[i], s)] for s in target]
            sgn = -1 if _inversions(target) % 2 else 1
            kernels.add_into(acc, kernels.relabel(terms, src, dst), sgn)
        terms = kernels.prune(acc)
        terms = _divide_vandermonde(terms, ring, [[alpha(verts[i], s) for s in slots]])
    return _wrap(ring.layout, terms)


def _shuffle_product_direct(q: Quiver, fs, mode: Mode) -> LaurentPoly:
    gs = [g for g, _ in fs]
    g = tuple(map(sum, zip(*gs)))
    with_y = mode is Mode.KTHEORY or any(Y in f.variables() for _, f in fs)
    ring = _Ring(ring_layout(q, g, with_y))
    verts = q.vertices
    acc: dict = {}
    for S in enumerate_shuffles(gs):
        terms = {ring.zero: 1}
        for u, (gu, f) in enumerate(fs):
            ren = {alpha(verts[i], k + 1): alpha(verts[i], s)
                   for i in range(q.n) for k, s in enumerate(S.parts[i][u])}
            fu = f.rename(ren) if ren else f
            terms = kernels.mul(terms, ring.embed(fu), ring.zero)
        terms = _summand_numerator(q, S, mode, ring, set(), terms)
        kernels.add_into(acc, terms, S.sign())
    acc = kernels.prune(acc)
    blocks = [[alpha(v, s) for s in range(1, g[i] + 1)] for i, v in enumerate(verts)]
    return _wrap(ring.layout, _divide_vandermonde(acc, ring, blocks))


def commutator(q: Quiver, a: tuple[Sequence[int], LaurentPoly], b: tuple[Sequence[int], LaurentPoly],
               mode, method: str = "vertexwise") -> LaurentPoly:
    return shuffle_product(q, [a, b], mode, method) - shuffle_product(q, [b, a], mode, method)


# pointwise evaluation ---------------------------------------------------------

class _Field:
    """Either exact rationals (``prime`` is None) or integers modulo a prime."""

    def __init__(self, prime: int | None):
        self.prime = prime

    def __call__(self, x):
        if self.prime is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.prime) % self.prime
        return x % self.prime

    def inv(self, x):
        if self.prime is None:
            return 1 / x
        if x % self.prime == 0:
            raise ZeroDivisionError("evaluation point hits a pole")
        return pow(x, -1, self.prime)

    def reduce(self, x):
        return x if self.prime is None else x % self.prime


def evaluate_at(p: LaurentPoly, point: Mapping[Var, object], prime: int | None = None):
    if prime is None:
        return p.evaluate(point)
    return p.evaluate_mod(point, prime)


def shuffle_product_at(q: Quiver, fs: Sequence[tuple[Sequence[int], LaurentPoly]], mode,
                       point: Mapping[Var, object], prime: int | None = None):
    """Value of ``f_1 * ... * f_r`` at ``point`` (exact, or modulo ``prime``)."""
    mode = Mode.of(mode)
    fs = _check_factors(q, fs)
    F = _Field(prime)
    pt = {v: F(x) for v, x in point.items()}
    gs = [g for g, _ in fs]
    verts = q.vertices
    yv = pt.get(Y)
    total = F(0)
    for S in enumerate_shuffles(gs):
        val = F(1)
        for u, (gu, f) in enumerate(fs):
            sub = {alpha(verts[i], k + 1): pt[alpha(verts[i], s)]
                   for i in range(q.n) for k, s in enumerate(S.parts[i][u])}
            if Y in pt:
                sub[Y] = yv
            val = F.reduce(val * evaluate_at(f, sub, prime))
            if not val:
                break
        if not val:
            continue
        num, den = F(1), F(1)
        for kind, om, al in _factor_pairs(q, S):
            o, a = pt[om], pt[al]
            if mode is Mode.COHOMOLOGY:
                num = F.reduce(num * ((o - a) if kind == "arrow_fwd" else (1 + o - a)))
            else:
                if kind == "arrow_fwd":
                    num = F.reduce(num * (o - a))
                    den = F.reduce(den * o)
                elif kind == "arrow_back":
                    num = F.reduce(num * (o + yv * a))
                    den = F.reduce(den * o)
                else:
                    num = F.reduce(num * (o + yv * a))
            if kind == "vertex":
                den = F.reduce(den * (o - a))
        total = F.reduce(total + val * num * F.inv(den))
    return total


# q-factorials and graded classes ---------------------------------------------------

def q_factorial(m: int) -> LaurentPoly:
    """``[m]_y! = prod_{j=1..m} (1 - y + y^2 - ... + (-y)^(j-1))``."""
    if m < 0:
        raise InputError("q_factorial needs m >= 0")
    y = LaurentPoly.var(Y)
    out = LaurentPoly.one()
    for j in range(1, m + 1):
        out = out * sum(((-y) ** e for e in range(j)), LaurentPoly.zero())
    return out


def divide_factorials(p: LaurentPoly, ms: Iterable[int], mode) -> LaurentPoly:
    """Divide by ``prod m!`` (cohomology) or exactly by ``prod [m]_y!`` (K-theory)."""
    mode = Mode.of(mode)
    ms = [m for m in ms if m > 1]
    if mode is Mode.COHOMOLOGY:
        return p / math.prod(math.factorial(m) for m in ms) if ms else p
    for m in ms:
        p = p.exact_div_univariate(Y, q_factorial(m))
    return p


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass
class GradedClass:
    """Finitely many graded components ``dimension vector -> class``."""

    quiver: Quiver
    mode: Mode
    components: dict[DimVector, LaurentPoly] = field(default_factory=dict)

    def __post_init__(self):
        self.mode = Mode.of(self.mode)
        self.components = {self.quiver.check_dim(g): p for g, p in self.components.items() if p}

    @classmethod
    def unit(cls, q: Quiver, mode) -> "GradedClass":
        return cls(q, mode, {q.zero(): LaurentPoly.one()})

    @classmethod
    def single(cls, q: Quiver, mode, g: Sequence[int], p) -> "GradedClass":
        if isinstance(p, (int, Fraction)):
            p = LaurentPoly.const(p)
        return cls(q, mode, {tuple(g): p})

    def __getitem__(self, g: Sequence[int]) -> LaurentPoly:
        return self.components.get(tuple(g), LaurentPoly.zero())

    def truncated(self, cutoff: Sequence[int]) -> "GradedClass":
        return GradedClass(self.quiver, self.mode,
                           {g: p for g, p in self.components.items() if _leq(g, cutoff)})

    def __add__(self, other: "GradedClass") -> "GradedClass":
        if self.mode is not other.mode:
            raise ModeMismatch("cannot add classes of different modes")
        comps = dict(self.components)
        for g, p in other.components.items():
            comps[g] = comps[g] + p if g in comps else p
        return GradedClass(self.quiver, self.mode, comps)

    def scale_components(self, fn) -> "GradedClass":
        return GradedClass(self.quiver, self.mode, {g: fn(p) for g, p in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.mode is other.mode and self.components == other.components

    def differences(self, other: "GradedClass") -> list[DimVector]:
        keys = sorted(set(self.components) | set(other.components))
        return [g for g in keys if self[g] != other[g]]


def graded_product(a: GradedClass, b: GradedClass, cutoff: Sequence[int],
                   method: str = "vertexwise") -> GradedClass:
    """Truncated product: component ``g`` sums ``a_{g1} * b_{g2}`` over ``g1 + g2 = g <= cutoff``."""
    if a.mode is not b.mode:
        raise ModeMismatch("cannot multiply classes of different modes")
    q = a.quiver
    comps: dict[DimVector, LaurentPoly] = {}
    for ga, fa in sorted(a.components.items()):
        for gb, fb in sorted(b.components.items()):
            g = tuple(x + y for x, y in zip(ga, gb))
            if not _leq(g, cutoff):
                continue
            if not any(ga):
                val = fa * fb
            elif not any(gb):
                val = fa * fb
            else:
                val = shuffle_product(q, [(ga, fa), (gb, fb)], a.mode, method)
            comps[g] = comps[g] + val if g in comps else val
    return GradedClass(q, a.mode, comps)


def exp_class(c: GradedClass, cutoff: Sequence[int], method: str = "vertexwise") -> GradedClass:
    """Truncated ``Exp`` (cohomology) or ``Exp_y`` (K-theory)."""
    q = c.quiver
    if c[q.zero()]:
        raise NonzeroConstantTerm("the zero-dimensional component must vanish")
    c = c.truncated(cutoff)
    result = GradedClass.unit(q, c.mode)
    power = GradedClass.unit(q, c.mode)
    k = 0
    while True:
        power = graded_product(power, c, cutoff, method)
        k += 1
        if not power.components:
            break
        result = result + power.scale_components(lambda p: divide_factorials(p, [k], c.mode))
    return result


def ordered_exp_product(factors: Sequence[GradedClass], cutoff: Sequence[int],
                        method: str = "vertexwise") -> GradedClass:
    """``Exp(c_1) * Exp(c_2) * ...`` truncated at ``cutoff``."""
    if not factors:
        raise InputError("need at least one factor")
    out = GradedClass.unit(factors[0].quiver, factors[0].mode)
    for c in factors:
        out = graded_product(out, exp_class(c, cutoff, method), cutoff, method)
    return out
