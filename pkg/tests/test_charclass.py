import json
import random
from itertools import product

import pytest

from qcc import charclass as cc
from qcc.errors import CoordinateTooLarge, InputError, MissingBasicClass, NotARoot, NotASubmodule, SumMismatch
from qcc.hall import Mode, chern_roots
from qcc.poly import LaurentPoly as L, Y, alpha
from qcc.quiver import KostantPartition, all_reineke_orders, kostant_partitions, positive_roots
from qcc.repalg import StabilityFunction, generic_kostant_partition, orbit_codimension, random_generic_stability

from conftest import bundled

MODES = ["cohomology", "ktheory"]


def table_for(name, mode, strategy="sieve"):
    return cc.build_basic_table(bundled(name), mode, strategy=strategy, validation="exact")


def boxes(g):
    return [v for v in product(*(range(x + 1) for x in g))]


def euler_class_of_zero_orbit(q, g):
    """Cohomology class of the origin: product of all weights of Rep_g."""
    x = L.var
    out = L.one()
    for t, h in q.arrows:
        for u in range(1, g[q.position[t]] + 1):
            for v in range(1, g[q.position[h]] + 1):
                out = out * (x(alpha(h, v)) - x(alpha(t, u)))
    return out


def test_base_classes_type_a():
    q = bundled("a3")
    assert cc.basic_class_base(q, (1, 1, 1), "cohomology") == L.one()
    assert cc.basic_class_base(q, (1, 1, 1), "ktheory") == L.parse("(1+y)^2*a1_1/a3_1")
    with pytest.raises(CoordinateTooLarge):
        cc.basic_class_base(bundled("d4"), (1, 1, 2, 1), "cohomology")
    with pytest.raises(NotARoot):
        cc.basic_class_base(q, (1, 0, 1), "cohomology")


def test_a2_open_orbits_against_geometry():
    # Rep_(m,n) has two orbits when min(m,n)=1: the open one and the origin
    q = bundled("a2")
    t = table_for("a2", "cohomology")
    for g in [(1, 2), (2, 1), (1, 3), (3, 1)]:
        open_class = cc.orbit_class_v2(q, generic_kostant_partition(q, g), "cohomology", t)
        assert open_class == cc.total_rep_class(q, g, "cohomology") - euler_class_of_zero_orbit(q, g)


@pytest.mark.parametrize("mode", MODES)
def test_partition_of_unity(mode):
    for name, top in [("a2", (2, 2)), ("a3", (1, 2, 1))]:
        q = bundled(name)
        t = table_for(name, mode)
        for g in boxes(top):
            assert cc.verify_sum_identity(q, g, mode, t), g


@pytest.mark.parametrize("mode", MODES)
def test_sieve_inj_and_commutator_agree_on_d4(mode):
    q = bundled("d4")
    t = cc.BasicClassTable(q)
    b = (1, 1, 2, 1)
    assert len(cc.sieve_subtrahends(q, b)) == 14
    assert len(cc.sieve_subtrahends(q, b, use_inj=True)) == 4
    s = cc.basic_class_sieve(q, b, mode, t)
    assert cc.basic_class_sieve(q, b, mode, t, use_inj=True) == s
    assert cc.basic_class_commutator(q, b, (1, 0, 1, 0), (0, 1, 1, 1), mode, t) == s
    assert cc.basic_class_sieve(q, b, mode, t, jobs=2) == s
    t.set(b, mode, s, "sieve")
    assert cc.verify_sum_identity(q, b, mode, t)


@pytest.mark.parametrize("name", ["d4", "d5"])
@pytest.mark.parametrize("mode", MODES)
def test_commutators_agree_with_sieve(name, mode):
    q = bundled(name)
    t = table_for(name, mode)
    for b in positive_roots(q):
        if max(b) < 2:
            continue
        s = cc.basic_class_sieve(q, b, mode, t)
        assert t.get(b, mode) == s
        pair = cc.find_commutator_pair(q, b, t, mode)
        assert pair is not None
        assert cc.basic_class_commutator(q, b, *pair, mode, t) == s, (b, pair)


def test_not_every_decomposition_gives_the_basic_class():
    # the sink simple root is a submodule of M_b, yet the commutator is wrong
    q = bundled("d5")
    t = table_for("d5", "cohomology")
    b, tau, omega = (1, 1, 2, 1, 0), (0, 0, 1, 0, 0), (1, 1, 1, 1, 0)
    bad = cc.basic_class_commutator(q, b, tau, omega, "cohomology", t)
    assert bad != t.get(b, "cohomology")
    assert not cc.validate_basic_class(q, b, bad, "cohomology", t)


def test_d5_basic_class():
    q = bundled("d5")
    t = table_for("d5", "cohomology", "commutator-first")
    x = lambda i, u: L.var(alpha(i, u))
    want = L.one()
    for i in (3, 4):
        want = want * (1 + x(i, 1) - x(i, 2)) * (1 + x(i, 2) - x(i, 1))
    assert t.get((1, 1, 2, 2, 1), "cohomology") == want
    assert all(cc.check_conjecture(q, r, t) for r in positive_roots(q))


def test_type_a_tables_are_trivial():
    for name in ("a2", "a3"):
        t = table_for(name, "cohomology", "commutator-first")
        assert all(t.get(r, "cohomology") == L.one() for r in positive_roots(bundled(name)))


def test_validation():
    q = bundled("d4")
    t = cc.BasicClassTable(q)
    b = (1, 1, 2, 1)
    s = cc.basic_class_sieve(q, b, "ktheory", t)
    for method in ("exact", "pointwise"):
        assert cc.validate_basic_class(q, b, s, "ktheory", t, method)
        assert not cc.validate_basic_class(q, b, s + 1, "ktheory", t, method)
    with pytest.raises(InputError):
        cc.validate_basic_class(q, b, s, "ktheory", t, "magic")


def test_commutator_errors():
    q = bundled("d4")
    t = cc.BasicClassTable(q)
    with pytest.raises(SumMismatch):
        cc.basic_class_commutator(q, (1, 1, 2, 1), (1, 0, 1, 0), (0, 1, 1, 0), "cohomology", t)
    with pytest.raises(NotARoot):
        cc.basic_class_commutator(q, (1, 1, 2, 1), (1, 1, 0, 0), (0, 0, 2, 1), "cohomology", t)
    with pytest.raises(NotASubmodule):
        cc.basic_class_commutator(q, (1, 1, 2, 1), (0, 1, 1, 1), (1, 0, 1, 0), "cohomology", t)


def test_find_commutator_pair():
    a2 = bundled("a2")
    assert cc.find_commutator_pair(a2, (1, 1), cc.BasicClassTable(a2)) == ((0, 1), (1, 0))
    assert cc.find_commutator_pair(a2, (1, 0), cc.BasicClassTable(a2)) is None
    d4 = bundled("d4")
    assert cc.find_commutator_pair(d4, (1, 1, 2, 1), cc.BasicClassTable(d4), "ktheory") is not None


def test_missing_class():
    t = cc.BasicClassTable(bundled("d4"))
    with pytest.raises(MissingBasicClass):
        t.get((1, 1, 2, 1), "cohomology")
    m = KostantPartition.from_support(bundled("d4"), {(1, 1, 2, 1): 1})
    with pytest.raises(MissingBasicClass):
        cc.orbit_class_v2(bundled("d4"), m, "cohomology", t)


def test_table_json_roundtrip(tmp_path):
    t = table_for("d4", "ktheory")
    path = tmp_path / "t.json"
    t.save(path)
    back = cc.BasicClassTable.load(path)
    assert back.get((1, 1, 2, 1), "ktheory") == t.get((1, 1, 2, 1), "ktheory")
    assert back.entry((1, 1, 2, 1), "ktheory").provenance == "sieve"
    data = json.loads(path.read_text())
    with pytest.raises(InputError):
        cc.BasicClassTable.from_json(data, bundled("d5"))


def test_whitelist_closure():
    q = bundled("d5")
    t = cc.build_basic_table(q, "cohomology", whitelist=[(1, 1, 2, 1, 0)])
    assert {r for r, _ in t.entries} == {r for r in positive_roots(q) if all(x <= y for x, y in zip(r, (1, 1, 2, 1, 0)))}


def test_specialization_guard():
    for name in ("a3", "d4", "d5"):
        q = bundled(name)
        t = table_for(name, "ktheory", "commutator-first")
        for r in positive_roots(q):
            p = t.get(r, "ktheory")
            pt = {v: 1 for blk in chern_roots(q, r) for v in blk}
            pt[Y] = 0
            assert p.evaluate(pt) in (0, 1)


@pytest.mark.parametrize("mode", MODES)
def test_v1_equals_v2(mode):
    for name, top in [("a2", (2, 2)), ("a3", (2, 2, 2))]:
        q = bundled(name)
        t = table_for(name, mode)
        for g in boxes(top):
            for m in kostant_partitions(q, g):
                assert cc.orbit_class_v1(q, m, mode, t) == cc.orbit_class_v2(q, m, mode, t), m


@pytest.mark.parametrize("mode", MODES)
def test_reineke_order_independence(mode):
    q = bundled("a3")
    t = table_for("a3", mode)
    orders = list(all_reineke_orders(q))
    for g in [(1, 2, 1), (2, 2, 1), (1, 2, 2)]:
        for m in kostant_partitions(q, g):
            results = {cc.orbit_class_v2(q, m, mode, t, order=o) for o in orders}
            assert len(results) == 1


def test_lowest_degree_is_codimension():
    for name, top in [("a2", (3, 3)), ("a3", (2, 2, 2)), ("d4", (1, 1, 2, 1))]:
        q = bundled(name)
        t = table_for(name, "cohomology")
        for g in boxes(top):
            for m in kostant_partitions(q, g):
                p = cc.orbit_class_v2(q, m, "cohomology", t)
                assert p.alpha_degrees()[0] == orbit_codimension(m), m


def test_classes_are_symmetric():
    q = bundled("d4")
    for mode in MODES:
        t = table_for("d4", mode)
        for m in kostant_partitions(q, (1, 1, 2, 1)):
            assert cc.orbit_class_v2(q, m, mode, t).is_symmetric(chern_roots(q, m.gamma))


def test_pointwise_helpers_agree():
    q = bundled("d4")
    rng = random.Random(2)
    t = table_for("d4", "ktheory")
    b = (1, 1, 2, 1)
    pt = cc.random_point(q, b, "ktheory", rng)
    assert cc.total_rep_class_at(q, b, "ktheory", pt, cc.PRIME) == \
        cc.total_rep_class(q, b, "ktheory").evaluate_mod(pt, cc.PRIME)
    for m in kostant_partitions(q, b):
        assert cc.orbit_class_at(q, m, "ktheory", t, pt, cc.PRIME) == \
            cc.orbit_class_v2(q, m, "ktheory", t).evaluate_mod(pt, cc.PRIME)


def test_inj_class_a2():
    q = bundled("a2")
    # injective maps C^1 -> C^2 are everything but the origin
    assert cc.inj_class(q, (1, 2), "cohomology") == \
        cc.total_rep_class(q, (1, 2), "cohomology") - euler_class_of_zero_orbit(q, (1, 2))
    assert cc.inj_class(q, (2, 1), "cohomology") == L.zero()


@pytest.mark.parametrize("mode", MODES)
def test_dt_invariance_random_a3(mode):
    q = bundled("a3")
    t = table_for("a3", mode)
    rng = random.Random(11)
    z1, z2 = (random_generic_stability(q, (1, 1, 1), rng) for _ in range(2))
    assert cc.verify_dt_invariance(q, z1, z2, (1, 1, 1), mode, t)


def test_z_compatible_sum_matches_total():
    q = bundled("a2")
    t = table_for("a2", "ktheory")
    for z in ("1,1;2,1", "2,1;1,1"):
        Z = StabilityFunction.parse(z)
        for g in boxes((2, 2)):
            assert cc.z_compatible_sum(q, Z, g, "ktheory", t) == cc.total_rep_class(q, g, "ktheory")


def test_associativity_verifier():
    assert cc.verify_associativity(bundled("a2"), "ktheory", 5, seed=1)
