import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import CORPUS, korientations, oriented
from pflab import exact_linalg as la
from pflab.errors import DomainError, ResourceError
from pflab.families import complete, complete_bipartite, cycle
from pflab.graph_core import Graph, enumerate_perfect_matchings, make_cut
from pflab.orientation import KOrientation, Orientation, is_pfaffian_korientation, reverse
from pflab.suites import cached_pfaffian_number
from pflab.symbolic import (
    RingPoly,
    SymbolicLabeling,
    bitstring,
    count_via_symbolic,
    is_pfaffian_symbolic,
    labeling_from_korientation,
    parse_bitstring,
    pfaffian_ring,
    ring_add,
    ring_mul,
    spf_lower_bound,
    standard_basis_labeling,
    symbolic_from_korientation,
    symbolic_matrix,
    symbolic_obstruction,
    tau_of_matching,
    zero_labeling,
)


@st.composite
def ring_elements(draw, d=3):
    terms = draw(st.dictionaries(st.integers(0, (1 << d) - 1), st.integers(-5, 5), max_size=6))
    return RingPoly(d, terms)


# --------------------------------------------------------------- ring


def test_ring_examples():
    t1 = RingPoly.monomial(1, 1)
    assert ring_mul(t1, t1) == 1
    one = RingPoly.const(1, 1)
    assert ring_mul(ring_add(one, t1), one - t1) == 0
    p = RingPoly(3, {0b101: 2, 0b010: -1})
    assert p * 1 == p and p * RingPoly.const(3, 1) == p


def test_ring_dimension_checks():
    with pytest.raises(DomainError):
        RingPoly(2, {0b100: 1})
    with pytest.raises(DomainError):
        RingPoly(2) + RingPoly(3)
    with pytest.raises(DomainError):
        RingPoly(-1)


def test_no_zero_terms_stored():
    p = RingPoly(2, {1: 3, 2: 0})
    assert p.terms == {1: 3}
    assert (p - p).terms == {}


@given(ring_elements(), ring_elements(), ring_elements())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0


@given(ring_elements(), ring_elements())
def test_evaluation_at_ones_is_homomorphism(p, q):
    assert (p * q).at_ones() == p.at_ones() * q.at_ones()
    assert (p + q).at_ones() == p.at_ones() + q.at_ones()


@given(ring_elements())
def test_ring_json_roundtrip(p):
    assert RingPoly.from_json(p.d, p.to_json()) == p


def test_bitstrings():
    assert bitstring(0b011, 4) == "1100"
    assert parse_bitstring("1100") == 0b011
    assert parse_bitstring("") == 0
    with pytest.raises(DomainError):
        parse_bitstring("12")


def test_repr():
    assert repr(RingPoly(2)) == "0"
    assert repr(RingPoly(2, {0: 1, 0b11: -2})) == "1 + -2*t1*t2"


# ---------------------------------------------------------- labelings


def test_labeling_json_roundtrip():
    lab = SymbolicLabeling(3, (0b001, 0b110, 0))
    js = lab.to_json()
    assert js == {"d": 3, "tau": {"0": "100", "1": "011", "2": "000"}}
    assert SymbolicLabeling.from_json(js) == lab
    with pytest.raises(DomainError):
        SymbolicLabeling.from_json({"d": 1, "tau": {"0": "1", "2": "0"}})
    with pytest.raises(DomainError):
        SymbolicLabeling(1, (2,))


def test_tau_examples():
    g = complete_bipartite(3, 3)
    assert tau_of_matching(zero_labeling(g, 2), {0, 4, 8}) == 0
    std = standard_basis_labeling(g)
    taus = [tau_of_matching(std, m) for m in enumerate_perfect_matchings(g)]
    assert all(bin(t).count("1") == 3 for t in taus)
    assert len(set(taus)) == len(taus)
    assert tau_of_matching(SymbolicLabeling(1, (1, 0, 1, 0)), {0, 2}) == 0


# ---------------------------------------------------- pfaffian symbolic


def test_symbolic_pfaffian_examples():
    c4 = Orientation(cycle(4), 0b0100)
    assert is_pfaffian_symbolic(c4, zero_labeling(cycle(4)))
    k33 = complete_bipartite(3, 3)
    assert not is_pfaffian_symbolic(Orientation(k33), zero_labeling(k33))
    m, n = symbolic_obstruction(Orientation(k33), zero_labeling(k33))
    assert m != n


@given(oriented())
def test_standard_basis_is_always_pfaffian(d):
    assert is_pfaffian_symbolic(d, standard_basis_labeling(d.graph))


def test_symbolic_matrix_examples():
    k2 = complete(2)
    a = symbolic_matrix(Orientation(k2), SymbolicLabeling(1, (1,)))
    assert a[0][1] == RingPoly.monomial(1, 1) and a[1][0] == -RingPoly.monomial(1, 1)
    assert pfaffian_ring(a) == RingPoly.monomial(1, 1)
    d = Orientation(complete(4), 0b100101)
    z = symbolic_matrix(d, zero_labeling(d.graph))
    adj = la.skew_adjacency(d)
    assert all(z[i][j] == adj[i][j] for i in range(4) for j in range(4))
    assert pfaffian_ring(z) == la.pfaffian_int(adj)


def test_symbolic_matrix_rejects_multigraph():
    g = Graph(2, ((1, 2), (1, 2)))
    with pytest.raises(DomainError):
        symbolic_matrix(Orientation(g), zero_labeling(g))


@given(oriented(), st.data())
def test_pfaffian_ring_at_ones_is_integer_pfaffian(d, data):
    if not d.graph.is_simple():
        return
    dim = data.draw(st.integers(0, 4))
    lab = SymbolicLabeling(dim, tuple(data.draw(st.integers(0, (1 << dim) - 1)) for _ in range(d.graph.m)))
    a = symbolic_matrix(d, lab)
    assert pfaffian_ring(a).at_ones() == la.pfaffian_int(la.skew_adjacency(d))
    for i in range(d.graph.n):
        for j in range(d.graph.n):
            assert a[j][i] == -a[i][j]


def test_count_examples():
    c4 = cycle(4)
    assert count_via_symbolic(Orientation(c4, 0b0100), zero_labeling(c4)) == 2
    k2 = complete(2)
    for tau in (0, 1):
        assert count_via_symbolic(Orientation(k2), SymbolicLabeling(1, (tau,))) == 1
    with pytest.raises(DomainError):
        count_via_symbolic(Orientation(c4), zero_labeling(c4))


def test_ring_dimension_limit(monkeypatch):
    monkeypatch.setenv("PFLAB_LIMITS", "ring_dimension=3")
    g = complete_bipartite(3, 3)
    with pytest.raises(ResourceError):
        is_pfaffian_symbolic(Orientation(g), standard_basis_labeling(g))


# ------------------------------------------------ from k-orientations


def test_from_pfaffian_orientation():
    c4 = cycle(4)
    d0, lab = symbolic_from_korientation(KOrientation((Orientation(c4, 0b0100),)))
    assert lab.d == 0 and count_via_symbolic(d0, lab) == 2
    d = Orientation(c4, 0b0100)
    _, lab = symbolic_from_korientation(KOrientation((d, d)))
    assert lab.d == 1 and set(lab.tau) == {0}


@pytest.mark.parametrize("name, count", [("K33", 6), ("C4", 2), ("petersen", 6), ("K4", 3), ("vyalyi-block", 6)])
def test_pipeline_counts(name, count):
    g = CORPUS[name]
    res = cached_pfaffian_number(g)
    d0, lab = symbolic_from_korientation(res.witness)
    assert lab.d == res.k - 1
    assert is_pfaffian_symbolic(d0, lab)
    assert count_via_symbolic(d0, lab) == count == len(enumerate_perfect_matchings(g))


@given(korientations(max_k=4))
def test_pipeline_on_random_korientations(kd):
    if is_pfaffian_korientation(kd):
        d0, lab = symbolic_from_korientation(kd)
        assert is_pfaffian_symbolic(d0, lab)
        if kd.graph.is_simple():
            assert count_via_symbolic(d0, lab) == len(enumerate_perfect_matchings(kd.graph))
    else:
        with pytest.raises(DomainError):
            symbolic_from_korientation(kd)


def test_labeling_from_korientation_differences():
    g = complete_bipartite(3, 3)
    a, b = Orientation(g, 0b000000011), Orientation(g, 0b000000101)
    last, lab = labeling_from_korientation(KOrientation((a, b)))
    assert last == b
    assert lab.tau[:3] == (0, 1, 1)


def test_cut_reversed_witness_still_counts():
    g = CORPUS["K33"]
    kd = cached_pfaffian_number(g).witness
    moved = KOrientation(tuple(reverse(d, make_cut(g, {1, 4}).edges) for d in kd))
    d0, lab = symbolic_from_korientation(moved)
    assert count_via_symbolic(d0, lab) == 6


# ------------------------------------------------------------- bounds


def test_spf_examples():
    assert spf_lower_bound(cycle(4)).bound == 0
    b = spf_lower_bound(complete_bipartite(3, 3))
    assert (b.matchings, b.pf_star, b.bound) == (6, 4, 1) and not b.unbounded


@pytest.mark.parametrize("name", sorted(set(CORPUS) - {"K44"}))
def test_bound_chain(name):
    g = CORPUS[name]
    if not g.is_simple():
        return
    b = spf_lower_bound(g)
    assert b.bound is not None and b.bound + 1 <= cached_pfaffian_number(g).k
    # integer bound matches its defining inequality
    assert 4 ** b.bound * b.pf_star >= b.matchings
    assert b.bound == 0 or 4 ** (b.bound - 1) * b.pf_star < b.matchings
