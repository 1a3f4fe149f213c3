"""Dynkin quivers and their root combinatorics.

Dimension vectors are plain tuples indexed by the quiver's vertices in
increasing id order.  Roots are always listed in the *canonical order*:
first by the position of the first nonzero coordinate, then
lexicographically by coordinates.  Kostant partitions store their
multiplicities in that same order.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Sequence

from .errors import CycleDetected, InputError, NoAdmissibleOrder, NotDynkin, NotTypeA

DimVector = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    """A quiver with integer vertex ids and arrows ``(tail, head)``."""

    vertices: tuple[int, ...]
    arrows: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        verts = tuple(sorted(self.vertices))
        if len(set(verts)) != len(verts):
            raise InputError("duplicate vertex ids")
        object.__setattr__(self, "vertices", verts)
        arrows = tuple((int(t), int(h)) for t, h in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        vs = set(verts)
        for t, h in arrows:
            if t not in vs or h not in vs:
                raise InputError(f"arrow ({t}, {h}) uses an unknown vertex")
            if t == h:
                raise InputError(f"loop at vertex {t}")

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "Quiver":
        try:
            return cls(tuple(data["vertices"]), tuple(tuple(a) for a in data["arrows"]),
                       name or data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad quiver description: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "Quiver":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data, data.get("name", path.stem))

    def to_dict(self) -> dict:
        return {"name": self.name, "vertices": list(self.vertices),
                "arrows": [list(a) for a in self.arrows]}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: j for j, v in enumerate(self.vertices)}

    def arrow_positions(self) -> list[tuple[int, int]]:
        """Arrows as ``(tail index, head index)`` into dimension vectors."""
        return [(self.position[t], self.position[h]) for t, h in self.arrows]

    def check_dim(self, g: Sequence[int]) -> DimVector:
        g = tuple(int(x) for x in g)
        if len(g) != self.n:
            raise InputError(f"dimension vector {g} needs {self.n} coordinates")
        if any(x < 0 for x in g):
            raise InputError(f"dimension vector {g} has a negative coordinate")
        return g

    def zero(self) -> DimVector:
        return (0,) * self.n

    def simple(self, v: int) -> DimVector:
        return tuple(int(w == v) for w in self.vertices)

    def neighbours(self) -> dict[int, set[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for t, h in self.arrows:
            nb[t].add(h)
            nb[h].add(t)
        return nb

    @cached_property
    def dynkin_type(self) -> str:
        """``"A5"``, ``"D4"``, ``"E6"``...; raises :class:`NotDynkin` otherwise."""
        n = self.n
        if n == 0:
            raise NotDynkin("empty quiver")
        edges = {frozenset(a) for a in self.arrows}
        if len(edges) != len(self.arrows):
            raise NotDynkin("multiple edges")
        if len(edges) != n - 1:
            raise NotDynkin("underlying graph is not a tree")
        nb = self.neighbours()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in nb[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise NotDynkin("underlying graph is disconnected")
        branch = [v for v in self.vertices if len(nb[v]) >= 3]
        if not branch:
            return f"A{n}"
        if len(branch) > 1 or len(nb[branch[0]]) > 3:
            raise NotDynkin("more than one branch point")
        centre = branch[0]
        arms = []
        for start in nb[centre]:
            length, prev, cur = 1, centre, start
            while True:
                nxt = [w for w in nb[cur] if w != prev]
                if not nxt:
                    break
                length, prev, cur = length + 1, cur, nxt[0]
            arms.append(length)
        arms.sort()
        if arms[:2] == [1, 1]:
            return f"D{n}"
        if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
            return f"E{n}"
        raise NotDynkin(f"branch arms {arms} are not of type D or E")

    def type_a_path(self) -> list[int]:
        """Vertices of a type A quiver along the path, from the smaller end."""
        if not self.dynkin_type.startswith("A"):
            raise NotTypeA(f"quiver is of type {self.dynkin_type}")
        nb = self.neighbours()
        ends = [v for v in self.vertices if len(nb[v]) <= 1]
        path = [min(ends)]
        while len(path) < self.n:
            path.append(next(w for w in nb[path[-1]] if len(path) < 2 or w != path[-2]))
        return path


def euler_form(q: Quiver, b1: Sequence[int], b2: Sequence[int]) -> int:
    """``sum_i b1(i) b2(i) - sum_a b1(t(a)) b2(h(a))``."""
    val = sum(x * y for x, y in zip(b1, b2))
    for t, h in q.arrow_positions():
        val -= b1[t] * b2[h]
    return val


def canonical_key(root: Sequence[int]) -> tuple:
    first = next((j for j, x in enumerate(root) if x), len(root))
    return (first, tuple(root))


_ROOT_CACHE: dict[Quiver, tuple[DimVector, ...]] = {}

_ROOT_COUNTS = {"A": lambda n: n * (n + 1) // 2, "D": lambda n: n * (n - 1),
                "E": lambda n: {6: 36, 7: 63, 8: 120}[n]}


def positive_roots(q: Quiver) -> list[DimVector]:
    """All positive roots in canonical order.

    Grown from the simple roots by adding one simple root at a time while the
    Tits form stays 1; every positive root of a Dynkin quiver is reached this
    way.  The count is checked against the root-system tables.
    """
    if q in _ROOT_CACHE:
        return list(_ROOT_CACHE[q])
    kind = q.dynkin_type
    simples = [q.simple(v) for v in q.vertices]
    found = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for r in frontier:
            for s in simples:
                cand = tuple(x + y for x, y in zip(r, s))
                if cand not in found and euler_form(q, cand, cand) == 1:
                    found.add(cand)
                    nxt.append(cand)
        frontier = nxt
    expected = _ROOT_COUNTS[kind[0]](q.n)
    if len(found) != expected:
        raise NotDynkin(f"found {len(found)} roots, expected {expected} for {kind}")
    roots = tuple(sorted(found, key=canonical_key))
    _ROOT_CACHE[q] = roots
    return list(roots)


def root_index(q: Quiver) -> dict[DimVector, int]:
    return {r: j for j, r in enumerate(positive_roots(q))}


def is_root(q: Quiver, b: Sequence[int]) -> bool:
    return tuple(b) in root_index(q)


def _order_constraints(q: Quiver) -> tuple[list[DimVector], list[set[int]], list[int]]:
    roots = positive_roots(q)
    n = len(roots)
    succ: list[set[int]] = [set() for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            a, b = roots[i], roots[j]
            ab, ba = euler_form(q, a, b), euler_form(q, b, a)
            b_after_a = ba >= 0 >= ab
            a_after_b = ab >= 0 >= ba
            if b_after_a and a_after_b:
                continue
            if not (b_after_a or a_after_b):
                raise NoAdmissibleOrder(f"roots {a} and {b} cannot be ordered")
            lo, hi = (i, j) if b_after_a else (j, i)
            succ[lo].add(hi)
            indeg[hi] += 1
    return roots, succ, indeg


def reineke_order(q: Quiver) -> list[DimVector]:
    """A Reineke order of the positive roots, earliest first.

    Pairs that only one relative order satisfies are forced; the remaining
    freedom is resolved by height (coordinate sum) and then canonical order.
    """
    roots, succ, indeg = _order_constraints(q)
    indeg = list(indeg)
    heap = [(sum(roots[i]), i) for i in range(len(roots)) if not indeg[i]]
    heapq.heapify(heap)
    out = []
    while heap:
        _, i = heapq.heappop(heap)
        out.append(roots[i])
        for j in succ[i]:
            indeg[j] -= 1
            if not indeg[j]:
                heapq.heappush(heap, (sum(roots[j]), j))
    if len(out) != len(roots):
        raise NoAdmissibleOrder("constraint graph has a cycle")
    return out


def all_reineke_orders(q: Quiver, limit: int = 10_000) -> Iterator[list[DimVector]]:
    """Every Reineke order (all topological sorts of the forced pairs)."""
    roots, succ, indeg = _order_constraints(q)
    indeg = list(indeg)
    n = len(roots)
    chosen: list[int] = []
    count = 0

    def walk():
        nonlocal count
        if count >= limit:
            return
        if len(chosen) == n:
            count += 1
            yield [roots[i] for i in chosen]
            return
        for i in range(n):
            if indeg[i] == 0 and i not in chosen:
                chosen.append(i)
                for j in succ[i]:
                    indeg[j] -= 1
                yield from walk()
                for j in succ[i]:
                    indeg[j] += 1
                chosen.pop()

    yield from walk()


def is_reineke_order(q: Quiver, order: Sequence[Sequence[int]]) -> bool:
    for i in range(len(order)):
        for j in range(i):
            if not euler_form(q, order[i], order[j]) >= 0 >= euler_form(q, order[j], order[i]):
                return False
    return True


def head_before_tail_order(q: Quiver) -> list[int]:
    """Vertices ordered so that every arrow's head precedes its tail."""
    indeg = {v: 0 for v in q.vertices}
    succ: dict[int, list[int]] = {v: [] for v in q.vertices}
    for t, h in q.arrows:
        succ[h].append(t)
        indeg[t] += 1
    heap = [v for v in q.vertices if not indeg[v]]
    heapq.heapify(heap)
    out = []
    while heap:
        v = heapq.heappop(heap)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if not indeg[w]:
                heapq.heappush(heap, w)
    if len(out) != q.n:
        raise CycleDetected("quiver has an oriented cycle")
    return out


@dataclass(frozen=True)
class KostantPartition:
    """Multiplicities of the positive roots (canonical order) summing to ``gamma``."""

    quiver: Quiver
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        roots = positive_roots(self.quiver)
        if len(self.multiplicities) != len(roots):
            raise InputError(f"need {len(roots)} multiplicities, got {len(self.multiplicities)}")
        if any(m < 0 for m in self.multiplicities):
            raise InputError("negative multiplicity")

    @classmethod
    def from_support(cls, q: Quiver, support: dict[Sequence[int], int]) -> "KostantPartition":
        idx = root_index(q)
        mult = [0] * len(idx)
        for r, m in support.items():
            r = tuple(r)
            if r not in idx:
                raise InputError(f"{r} is not a positive root")
            mult[idx[r]] += m
        return cls(q, tuple(mult))

    @cached_property
    def gamma(self) -> DimVector:
        g = [0] * self.quiver.n
        for r, m in zip(positive_roots(self.quiver), self.multiplicities):
            for j, x in enumerate(r):
                g[j] += m * x
        return tuple(g)

    def support(self) -> dict[DimVector, int]:
        return {r: m for r, m in zip(positive_roots(self.quiver), self.multiplicities) if m}

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.multiplicities)) + ")"


def kostant_partitions(q: Quiver, g: Sequence[int]) -> list[KostantPartition]:
    """All Kostant partitions of ``g`` in ascending lex order of multiplicities."""
    g = q.check_dim(g)
    roots = positive_roots(q)
    out: list[tuple[int, ...]] = []
    mult = [0] * len(roots)

    def fill(j: int, rest: list[int]):
        if j == len(roots):
            if not any(rest):
                out.append(tuple(mult))
            return
        r = roots[j]
        cap = min((rest[i] // x for i, x in enumerate(r) if x), default=0)
        for m in range(cap + 1):
            mult[j] = m
            fill(j + 1, [a - m * x for a, x in zip(rest, r)])
        mult[j] = 0

    fill(0, list(g))
    return [KostantPartition(q, m) for m in sorted(out)]


@dataclass(frozen=True)
class OrbitDiagram:
    text: str
    partition: KostantPartition


def type_a_open_orbit_diagram(q: Quiver, g: Sequence[int]) -> OrbitDiagram:
    """Dot diagram of the open orbit of a type A quiver.

    Vertices are drawn as columns along the path.  Neighbouring columns are
    aligned at the top when the arrow between them points left and at the
    bottom when it points right; horizontal runs of dots are the interval
    summands of the generic representation.
    """
    g = q.check_dim(g)
    path = q.type_a_path()
    heads = {frozenset(a): a[1] for a in q.arrows}
    pos = q.position
    sizes = [g[pos[v]] for v in path]
    tops = [0]
    for k in range(1, len(path)):
        points_left = heads[frozenset((path[k - 1], path[k]))] == path[k - 1]
        if points_left:
            tops.append(tops[-1])
        else:
            tops.append(tops[-1] + sizes[k - 1] - sizes[k])
    shift = min(tops)
    tops = [t - shift for t in tops]
    height = max((t + s for t, s in zip(tops, sizes)), default=0)
    support: dict[DimVector, int] = {}
    lines = []
    for row in range(height):
        cells = [tops[k] <= row < tops[k] + sizes[k] for k in range(len(path))]
        line = ""
        k = 0
        while k < len(path):
            if not cells[k]:
                line += "   " if k else " "
                k += 1
                continue
            start = k
            while k + 1 < len(path) and cells[k + 1]:
                k += 1
            root = [0] * q.n
            for j in range(start, k + 1):
                root[pos[path[j]]] = 1
            support[tuple(root)] = support.get(tuple(root), 0) + 1
            line += ("  " if start else "") + "o" + "--o" * (k - start)
            k += 1
        lines.append(line.rstrip())
    header = "  ".join(str(v) for v in path)
    text = "\n".join([header] + lines)
    return OrbitDiagram(text, KostantPartition.from_support(q, support))
