import pytest

from pflab.errors import DomainError
from pflab.families import (
    FAMILIES,
    VYALYI_TAGS,
    complete,
    complete_bipartite,
    conformal_lower_bound,
    cycle,
    generate,
    k33_copies,
    petersen,
    vyalyi,
    vyalyi_block,
    vyalyi_blocks,
    wheel,
)
from pflab.graph_core import (
    enumerate_perfect_matchings,
    is_bipartite,
    is_conformal,
    is_isomorphic,
    is_matching_covered,
    retract,
)
from pflab.suites import cached_pfaffian_number


def test_basic_families():
    k33 = complete_bipartite(3, 3)
    assert (k33.n, k33.m) == (6, 9)
    p = petersen()
    assert (p.n, p.m) == (10, 15) and all(p.degree(v) == 3 for v in p.vertices)
    k4 = complete(4)
    assert k4.m == 6 and len(enumerate_perfect_matchings(k4)) == 3
    assert wheel(5).n == 6 and wheel(5).m == 10


def test_bipartite_sides_are_contiguous():
    g = complete_bipartite(2, 3)
    assert all(u <= 2 < v for u, v in g.edges)


def test_petersen_layout():
    p = petersen()
    assert all(p.degree(v) == 3 for v in p.vertices)
    assert {(i, i + 5) for i in range(1, 6)} <= set(p.edges)


@pytest.mark.parametrize("bad", [lambda: complete_bipartite(0, 2), lambda: complete(0), lambda: cycle(2), lambda: vyalyi(0)])
def test_non_positive_sizes(bad):
    with pytest.raises(DomainError):
        bad()


def test_generation_is_deterministic():
    for name, (fn, arity) in FAMILIES.items():
        params = {0: (), 1: (4,), 2: (2, 3)}[arity]
        if name == "vyalyi":
            params = (2,)
        assert generate(name, params) == generate(name, params)


@pytest.mark.parametrize("name, params", [("cycle", (6,)), ("complete", (4,)), ("complete-bipartite", (3, 3)), ("petersen", ()), ("wheel", (5,)), ("vyalyi-block", ()), ("vyalyi", (2,))])
def test_generated_graphs_are_matching_covered(name, params):
    assert is_matching_covered(generate(name, params))


def test_generate_errors():
    with pytest.raises(DomainError, match="unknown family"):
        generate("moebius", ())
    with pytest.raises(DomainError):
        generate("cycle", ())


# ------------------------------------------------------------- blocks


def test_vyalyi_block():
    h = vyalyi_block()
    assert (h.n, h.m) == (10, 13)
    assert is_isomorphic(retract(h), complete_bipartite(3, 3), simple=True)
    for tag, v in VYALYI_TAGS.items():
        assert h.degree(v) == 2, tag
    assert cached_pfaffian_number(h).k == 4
    assert cached_pfaffian_number(h).classes == 16


@pytest.mark.parametrize("n", [1, 2, 3])
def test_vyalyi_shape(n):
    g = vyalyi(n)
    assert (g.n, g.m) == (10 * n, 15 * n)
    assert all(g.degree(v) == 3 for v in g.vertices)
    assert is_bipartite(g) and is_matching_covered(g)


@pytest.mark.parametrize("n", [2, 3])
def test_blocks_are_conformal(n):
    g = vyalyi(n)
    for block in vyalyi_blocks(n):
        assert is_conformal(g, block)


def test_vyalyi_links():
    g = vyalyi(2)
    t = VYALYI_TAGS
    assert (t["u"], t["p"] + 10) in g.edges and (t["v"], t["q"] + 10) in g.edges
    assert (t["u"] + 10, t["p"]) in g.edges and (t["v"] + 10, t["q"]) in g.edges


# --------------------------------------------------------------- bounds


def test_conformal_bound_k44():
    pf = cached_pfaffian_number(complete_bipartite(3, 3)).k
    assert conformal_lower_bound(complete_bipartite(4, 4), [{1, 2, 3, 5, 6, 7}, {4, 8}], [pf, 1]) == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conformal_bound_k3n3n(n):
    pf = cached_pfaffian_number(complete_bipartite(3, 3)).k
    assert conformal_lower_bound(complete_bipartite(3 * n, 3 * n), k33_copies(n), [pf] * n) == 3 * n + 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conformal_bound_vyalyi(n):
    pf_h = cached_pfaffian_number(retract(vyalyi_block())).k
    assert conformal_lower_bound(vyalyi(n), vyalyi_blocks(n), [pf_h] * n) == 3 * n + 1


def test_conformal_bound_errors():
    g = cycle(6)
    with pytest.raises(DomainError, match="not conformal"):
        conformal_lower_bound(g, [{1, 2, 3}], [1])
    with pytest.raises(DomainError):
        conformal_lower_bound(g, [{1, 2}, {2, 3}], [1, 1])
    with pytest.raises(DomainError):
        conformal_lower_bound(g, [{1, 2}], [1, 1])
    with pytest.raises(DomainError):
        conformal_lower_bound(g, [{1, 9}], [1])
