import json
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from qcc.errors import CycleDetected, InputError, NotDynkin, NotTypeA
from qcc.quiver import (
    KostantPartition, Quiver, all_reineke_orders, euler_form, head_before_tail_order, is_reineke_order,
    kostant_partitions, positive_roots, reineke_order, type_a_open_orbit_diagram,
)

from conftest import bundled


def brute_force_roots(q, bound=3):
    """Dimension vectors with Tits form 1 and connected support, by box search."""
    out = []
    for v in product(range(bound + 1), repeat=q.n):
        if any(v) and euler_form(q, v, v) == 1:
            out.append(v)
    return sorted(out)


@pytest.mark.parametrize("name,count,kind", [("a2", 3, "A2"), ("a3", 6, "A3"), ("d4", 12, "D4"),
                                             ("d5", 20, "D5"), ("e6", 36, "E6")])
def test_root_counts_and_types(name, count, kind):
    q = bundled(name)
    assert q.dynkin_type == kind
    assert len(positive_roots(q)) == count


@pytest.mark.parametrize("name", ["a2", "a3", "d4", "d5", "e6"])
def test_roots_match_box_search(name):
    q = bundled(name)
    assert sorted(positive_roots(q)) == brute_force_roots(q)


def test_canonical_root_order_a3(a3):
    assert positive_roots(a3) == [(1, 0, 0), (1, 1, 0), (1, 1, 1), (0, 1, 0), (0, 1, 1), (0, 0, 1)]


def test_reineke_orders(a2, a3):
    assert reineke_order(a2) == [(1, 0), (1, 1), (0, 1)]
    assert reineke_order(a3) == [(1, 0, 0), (1, 1, 0), (0, 1, 0), (1, 1, 1), (0, 1, 1), (0, 0, 1)]
    orders = list(all_reineke_orders(a3))
    assert len(orders) == 2
    assert all(is_reineke_order(a3, o) for o in orders)


@pytest.mark.parametrize("name", ["a3", "d4", "d5", "e6"])
def test_reineke_order_is_valid(name):
    q = bundled(name)
    order = reineke_order(q)
    assert sorted(order) == sorted(positive_roots(q))
    assert is_reineke_order(q, order)
    assert not is_reineke_order(q, order[::-1])


def test_head_before_tail(d4):
    assert head_before_tail_order(d4) == [3, 1, 2, 4]


def test_kostant_partitions_a2(a2):
    parts = kostant_partitions(a2, (3, 4))
    assert [p.multiplicities for p in parts] == [(0, 3, 1), (1, 2, 2), (2, 1, 3), (3, 0, 4)]


def test_kostant_partitions_a3(a3):
    parts = kostant_partitions(a3, (1, 2, 1))
    assert [str(p) for p in parts] == ["(0,0,1,1,0,0)", "(0,1,0,0,1,0)", "(0,1,0,1,0,1)",
                                       "(1,0,0,1,1,0)", "(1,0,0,2,0,1)"]


def test_kostant_partition_count_d4(d4):
    assert len(kostant_partitions(d4, (1, 1, 2, 1))) == 15


@given(st.tuples(*[st.integers(0, 3)] * 4))
@settings(max_examples=40, deadline=None)
def test_kostant_partitions_sum_to_gamma(g):
    q = bundled("d4")
    parts = kostant_partitions(q, g)
    assert len({p.multiplicities for p in parts}) == len(parts)
    assert all(p.gamma == g for p in parts)
    assert [p.multiplicities for p in parts] == sorted(p.multiplicities for p in parts)


def test_open_orbit_diagram_a2(a2):
    d = type_a_open_orbit_diagram(a2, (3, 4))
    assert d.partition.multiplicities == (0, 3, 1)


def test_open_orbit_diagram_six_vertices():
    # orientation: left right left right left
    q = Quiver((1, 2, 3, 4, 5, 6), ((2, 1), (2, 3), (4, 3), (4, 5), (6, 5)))
    d = type_a_open_orbit_diagram(q, (2, 3, 2, 4, 6, 3))
    assert d.partition.support() == {
        (1, 1, 0, 0, 0, 0): 1, (1, 1, 1, 1, 1, 1): 1, (0, 1, 1, 1, 1, 0): 1,
        (0, 0, 0, 1, 1, 0): 2, (0, 0, 0, 0, 1, 1): 2,
    }
    assert d.text.splitlines()[0] == "1  2  3  4  5  6"


def test_open_orbit_diagram_is_generic():
    from qcc.repalg import generic_kostant_partition

    q = Quiver((1, 2, 3, 4), ((2, 1), (2, 3), (3, 4)))
    for g in product(range(3), repeat=4):
        assert type_a_open_orbit_diagram(q, g).partition == generic_kostant_partition(q, g)


def test_errors(tmp_path, d4):
    with pytest.raises(NotDynkin):
        Quiver((1, 2, 3), ((1, 2), (2, 3), (3, 1))).dynkin_type
    with pytest.raises(NotTypeA):
        d4.type_a_path()
    with pytest.raises(CycleDetected):
        head_before_tail_order(Quiver((1, 2, 3), ((1, 2), (2, 3), (3, 1))))
    with pytest.raises(InputError):
        d4.check_dim((1, 2))
    with pytest.raises(InputError):
        KostantPartition.from_support(d4, {(2, 0, 0, 0): 1})
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [1, 2],\n "arrows": [[1, 2]')
    with pytest.raises(InputError, match=r"bad.json:2:"):
        Quiver.load(bad)


def test_quiver_roundtrip(e6):
    assert Quiver.from_dict(json.loads(json.dumps(e6.to_dict()))) == Quiver(e6.vertices, e6.arrows, e6.name)
