import random
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from qcc.errors import BlockMismatch, ModeMismatch, NonzeroConstantTerm
from qcc.hall import (
    GradedClass, Mode, chern_roots, commutator, divide_factorials, enumerate_shuffles, exp_class,
    fac_factors, graded_product, ordered_exp_product, q_factorial, shuffle_count, shuffle_product,
    shuffle_product_at,
)
from qcc.poly import LaurentPoly as L, Y, alpha

from conftest import bundled


# independent oracle ---------------------------------------------------------------

def ordered_set_partitions(n, sizes):
    """All ways to split {1..n} into consecutive labelled blocks of the given sizes."""
    if not sizes:
        yield []
        return
    for first in combinations(range(1, n + 1), sizes[0]):
        rest = [k for k in range(1, n + 1) if k not in first]
        for tail in ordered_set_partitions(len(rest), sizes[1:]):
            yield [list(first)] + [[rest[k - 1] for k in blk] for blk in tail]


def oracle_product(q, fs, mode, point):
    """Localization sum evaluated directly at ``point`` with Fractions."""
    gs = [g for g, _ in fs]
    gamma = [sum(g[j] for g in gs) for j in range(q.n)]
    per_vertex = [list(ordered_set_partitions(gamma[j], [g[j] for g in gs])) for j in range(q.n)]
    pos = q.position
    y = point.get(Y)
    total = Fraction(0)
    for choice in product(*per_vertex):
        val = Fraction(1)
        for u, (g, f) in enumerate(fs):
            sub = {alpha(v, k + 1): point[alpha(v, s)] for j, v in enumerate(q.vertices)
                   for k, s in enumerate(choice[j][u])}
            if y is not None:
                sub[Y] = y
            val *= f.evaluate(sub)
        r = len(fs)
        for t, h in q.arrows:
            for v in range(r):
                for w in range(v + 1, r):
                    for om in choice[pos[h]][w]:
                        for al in choice[pos[t]][v]:
                            o, a = point[alpha(h, om)], point[alpha(t, al)]
                            val *= (o - a) if mode == "cohomology" else (1 - a / o)
                    for om in choice[pos[h]][v]:
                        for al in choice[pos[t]][w]:
                            o, a = point[alpha(h, om)], point[alpha(t, al)]
                            val *= (1 + o - a) if mode == "cohomology" else (1 + y * a / o)
        for j, i in enumerate(q.vertices):
            for v in range(r):
                for w in range(v + 1, r):
                    for om in choice[j][w]:
                        for al in choice[j][v]:
                            o, a = point[alpha(i, om)], point[alpha(i, al)]
                            if mode == "cohomology":
                                val *= (1 + o - a) / (o - a)
                            else:
                                val *= (1 + y * a / o) / (1 - a / o)
        total += val
    return total


def random_point(q, gamma, rng, with_y):
    pt = {v: Fraction(rng.randint(2, 400), rng.randint(1, 7)) for blk in chern_roots(q, gamma) for v in blk}
    if with_y:
        pt[Y] = Fraction(rng.randint(2, 50), rng.randint(1, 5))
    return pt


def symmetric_class(q, g, rng, mode):
    from qcc.charclass import random_symmetric_class

    return random_symmetric_class(q, g, mode, rng)


# tests ---------------------------------------------------------------------------

def test_shuffle_counts():
    assert shuffle_count([(1, 1), (1, 1)]) == 4
    assert shuffle_count([(2, 1), (1, 2)]) == 9
    assert len(list(enumerate_shuffles([(1, 2, 1), (1, 0, 1), (0, 1, 0)]))) == 2 * 3 * 2


def test_a2_products():
    a2 = bundled("a2")
    one10, one01 = ((1, 0), L.one()), ((0, 1), L.one())
    assert commutator(a2, one01, one10, "cohomology") == L.one()
    k = commutator(a2, one01, one10, "ktheory")
    assert k == L.parse("(1+y)*a1_1/a2_1")
    assert shuffle_product(a2, [one10, one10], "cohomology") == L.const(2)
    assert shuffle_product(a2, [one10, one10], "ktheory") == L.parse("1 - y")


@pytest.mark.parametrize("mode", ["cohomology", "ktheory"])
@pytest.mark.parametrize("name,gs", [
    ("a2", [(1, 0), (1, 1), (0, 1)]),
    ("a2", [(2, 1), (0, 1)]),
    ("a3", [(1, 1, 0), (0, 1, 1)]),
    ("a3", [(1, 1, 1), (0, 1, 0), (0, 1, 1)]),
    ("d4", [(1, 0, 1, 0), (0, 1, 1, 1)]),
])
def test_against_localization_oracle(name, gs, mode):
    q = bundled(name)
    rng = random.Random(hash((name, tuple(gs), mode)) & 0xFFFF)
    fs = [(g, symmetric_class(q, g, rng, mode)) for g in gs]
    p = shuffle_product(q, fs, mode)
    gamma = tuple(map(sum, zip(*gs)))
    for _ in range(3):
        pt = random_point(q, gamma, rng, mode == "ktheory")
        want = oracle_product(q, fs, mode, pt)
        assert p.evaluate(pt) == want
        assert shuffle_product_at(q, fs, mode, pt) == want


@pytest.mark.parametrize("mode", ["cohomology", "ktheory"])
def test_direct_and_vertexwise_agree(mode):
    q = bundled("a3")
    rng = random.Random(5)
    fs = [(g, symmetric_class(q, g, rng, mode)) for g in [(1, 1, 0), (0, 1, 1), (1, 0, 0)]]
    assert shuffle_product(q, fs, mode, method="direct") == shuffle_product(q, fs, mode)


def test_pointwise_mod_prime_matches_exact():
    q = bundled("d4")
    fs = [((1, 0, 1, 0), L.parse("(1+y)*a1_1/a3_1")), ((0, 1, 1, 1), L.parse("(1+y)^2*a2_1*a4_1/a3_1^2"))]
    p = shuffle_product(q, fs, "ktheory")
    prime = (1 << 61) - 1
    rng = random.Random(1)
    pt = {v: rng.randrange(1, prime) for blk in chern_roots(q, (1, 1, 2, 1)) for v in blk}
    pt[Y] = rng.randrange(2, prime)
    assert shuffle_product_at(q, fs, "ktheory", pt, prime) == p.evaluate_mod(pt, prime)


@given(st.integers(0, 10**6), st.sampled_from(["a2", "a3"]), st.sampled_from(["cohomology", "ktheory"]))
@settings(max_examples=12, deadline=None)
def test_associativity(seed, name, mode):
    q = bundled(name)
    rng = random.Random(seed)
    gs = [tuple(rng.randint(0, 1) for _ in q.vertices) for _ in range(3)]
    f, g, h = [(d, symmetric_class(q, d, rng, mode)) for d in gs]
    fg = (tuple(map(sum, zip(f[0], g[0]))), shuffle_product(q, [f, g], mode))
    gh = (tuple(map(sum, zip(g[0], h[0]))), shuffle_product(q, [g, h], mode))
    left = shuffle_product(q, [fg, h], mode)
    assert left == shuffle_product(q, [f, gh], mode)
    assert left == shuffle_product(q, [f, g, h], mode)


@given(st.integers(0, 10**6), st.sampled_from(["cohomology", "ktheory"]))
@settings(max_examples=10, deadline=None)
def test_products_are_symmetric(seed, mode):
    q = bundled("a3")
    rng = random.Random(seed)
    gs = [tuple(rng.randint(0, 1) for _ in q.vertices) for _ in range(2)]
    fs = [(d, symmetric_class(q, d, rng, mode)) for d in gs]
    p = shuffle_product(q, fs, mode)
    assert p.is_symmetric(chern_roots(q, tuple(map(sum, zip(*gs)))))
    if mode == "cohomology":
        assert not p.has_negative_exponents()


def test_fac_factors_for_a2():
    q = bundled("a2")
    s = next(iter(enumerate_shuffles([(0, 1), (1, 0)])))
    assert fac_factors(q, s, "cohomology").to_poly() == L.parse("1 + a2_1 - a1_1")


def test_block_mismatch():
    q = bundled("a2")
    with pytest.raises(BlockMismatch):
        shuffle_product(q, [((1, 0), L.var(alpha(1, 2)))], "cohomology")


def test_q_factorial():
    assert q_factorial(0) == L.one()
    assert q_factorial(3) == L.parse("(1 - y)*(1 - y + y^2)")
    assert divide_factorials(L.parse("6*a1_1"), [3], "cohomology") == L.var(alpha(1, 1))
    p = L.parse("a1_1 + y") * q_factorial(2) * q_factorial(3)
    assert divide_factorials(p, [2, 3], "ktheory") == L.parse("a1_1 + y")


def test_exponential_identity_a2():
    q = bundled("a2")
    for mode in ("cohomology", "ktheory"):
        one = lambda g: GradedClass.single(q, mode, g, 1)
        c11 = L.one() if mode == "cohomology" else L.parse("(1+y)*a1_1/a2_1")
        left = ordered_exp_product([one((1, 0)), GradedClass.single(q, mode, (1, 1), c11), one((0, 1))], (3, 3))
        right = ordered_exp_product([one((0, 1)), one((1, 0))], (3, 3))
        assert left == right


def test_graded_errors():
    q = bundled("a2")
    a = GradedClass.single(q, "cohomology", (1, 0), 1)
    b = GradedClass.single(q, "ktheory", (1, 0), 1)
    with pytest.raises(ModeMismatch):
        graded_product(a, b, (2, 2))
    with pytest.raises(NonzeroConstantTerm):
        exp_class(GradedClass.unit(q, "cohomology"), (2, 2))


def test_exp_of_simple_is_factorial_series():
    q = bundled("a2")
    e = exp_class(GradedClass.single(q, "cohomology", (1, 0), 1), (3, 0))
    assert [e[(k, 0)] for k in range(4)] == [L.one()] * 4
