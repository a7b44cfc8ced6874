import pytest

from ringlat.algebra import Extension, Subalgebra, generated_subalgebra, make_product
from ringlat.gfq import GF
from ringlat.lattice import (
    BudgetExceeded,
    brute_force_interval,
    check_distributivity,
    enumerate_interval,
    greedy_maximal_chain,
    interval_length,
    is_arithmetic,
    is_chained,
    is_delta_extension,
    is_pinched_at,
    longest_chain,
    maximal_chains,
    quotient_interval_check,
    to_dot,
)

# regression values frozen from the brute-force oracle before the main build
EX44_CARDINALITY = 6
EX44_LENGTH = 3
EX44_CHAIN_COUNT = 3


def test_enumerate_interval_frozen_regression(ext44):
    lat = enumerate_interval(ext44)
    assert len(lat.nodes) == EX44_CARDINALITY
    assert sorted(n.dim for n in lat.nodes) == [1, 2, 2, 2, 3, 4]
    assert set(lat.nodes) == brute_force_interval(ext44)


def test_enumerate_trivial(T44):
    lat = enumerate_interval(Extension(T44.full(), T44))
    assert len(lat.nodes) == 1
    assert lat.covers == ()
    assert interval_length(lat) == 0
    assert is_chained(lat)


def test_enumerate_field_tower_divisor_lattice(ext64):
    lat = enumerate_interval(ext64)
    assert [n.dim for n in lat.nodes] == [1, 2, 3, 6]
    assert set(lat.nodes) == brute_force_interval(ext64)


def test_brute_force_minimal_decomposed(F2):
    from ringlat.algebra import base_algebra

    P = make_product(base_algebra(F2), base_algebra(F2))
    ext = Extension(generated_subalgebra(P, []), P)
    assert len(brute_force_interval(ext)) == 2


def test_node_budget(ext44):
    with pytest.raises(BudgetExceeded):
        enumerate_interval(ext44, node_budget=2)


def test_interval_length_examples(ext44, ext64, ext_chain3):
    assert interval_length(enumerate_interval(ext44)) == EX44_LENGTH
    assert interval_length(enumerate_interval(ext_chain3)) == 2
    assert interval_length(enumerate_interval(ext64)) == 2


def test_longest_chain_is_witness(ext44):
    lat = enumerate_interval(ext44)
    chain = longest_chain(lat)
    assert len(chain.nodes) - 1 == EX44_LENGTH
    for i, j in zip(chain.nodes, chain.nodes[1:]):
        assert (i, j) in lat.covers


def test_cover_edges_have_nothing_between(ext44):
    lat = enumerate_interval(ext44)
    for i, j in lat.covers:
        between = [k for k in range(len(lat.nodes))
                   if k not in (i, j) and lat.leq(i, k) and lat.leq(k, j)]
        assert not between


def test_cover_edges_minimal_by_brute_force(ext44, ext64):
    """Independent re-test: the subspace scan of each cover edge finds only
    its two endpoints."""
    for ext in (ext44, ext64):
        lat = enumerate_interval(ext)
        for i, j in lat.covers:
            inner = brute_force_interval(Extension(lat.nodes[i], lat.nodes[j]))
            assert inner == {lat.nodes[i], lat.nodes[j]}


def test_is_chained(ext44, ext_chain3):
    assert is_chained(enumerate_interval(ext_chain3))
    assert not is_chained(enumerate_interval(ext44))


def test_is_arithmetic_witness(ext44):
    ok, witnesses = is_arithmetic(ext44)
    assert not ok
    pair = witnesses[0].pair
    bases = {p.basis for p in pair}
    assert ((1, 0, 0, 0), (0, 0, 1, 0)) in bases  # K[y^2]
    assert ((1, 0, 0, 0), (0, 0, 0, 1)) in bases  # K[y^3]
    assert not pair[0].contains(pair[1]) and not pair[1].contains(pair[0])


def test_is_arithmetic_chain_and_product(ext_chain3, F2):
    assert is_arithmetic(ext_chain3)[0]
    from ringlat.algebra import make_poly_quotient

    T3 = make_poly_quotient(F2, (0, 0, 0, 1))
    S = make_product(T3, T3)
    R = Subalgebra(S, [(1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0)])
    ext = Extension(R, S)
    ok, _ = is_arithmetic(ext)
    assert ok


def test_arithmetic_witness_pullback_lands_in_interval(F2):
    """For a non-local failure the witness pair consists of genuine
    intermediate rings of the original pair."""
    from ringlat.algebra import make_poly_quotient

    T44 = make_poly_quotient(F2, (0, 0, 0, 0, 1))
    S = make_product(T44, make_poly_quotient(F2, (0, 1)))
    R = Subalgebra(S, [(1, 0, 0, 0, 0), (0, 0, 0, 0, 1)])
    ext = Extension(R, S)
    ok, witnesses = is_arithmetic(ext)
    assert not ok
    for w in witnesses:
        for node in w.pair:
            assert node.ambient is S
            assert node.contains(ext.bottom)
            assert ext.top.contains(node)
        a, b = w.pair
        assert not a.contains(b) and not b.contains(a)


def test_is_pinched_at(ext44, ext64):
    lat = enumerate_interval(ext44)
    assert is_pinched_at(lat, lat.nodes[lat.bottom])
    dim3 = [n for n in lat.nodes if n.dim == 3][0]
    assert is_pinched_at(lat, dim3)
    lat64 = enumerate_interval(ext64)
    f4 = [n for n in lat64.nodes if n.dim == 2][0]
    assert not is_pinched_at(lat64, f4)


def test_is_delta_extension(ext44, ext64, ext_chain3):
    lat = enumerate_interval(ext_chain3)
    assert is_delta_extension(ext_chain3, lat)[0]
    lat44 = enumerate_interval(ext44)
    assert is_delta_extension(ext44, lat44)[0]
    lat64 = enumerate_interval(ext64)
    ok, pair = is_delta_extension(ext64, lat64)
    assert not ok
    assert {p.dim for p in pair} == {2, 3}  # the two proper subfields


def test_check_distributivity(ext44, ext64, ext_chain3):
    assert check_distributivity(enumerate_interval(ext_chain3))[0]
    ok64, _ = check_distributivity(enumerate_interval(ext64))
    assert ok64  # modular non-chain: both identities still hold
    ok44, triple = check_distributivity(enumerate_interval(ext44))
    assert not ok44 and triple is not None


def test_remark_finite_field_analogue_shape(ext64):
    """[R,S] for the 64-element tower: T1*T2 = S, T1 meet T2 = R, no chain."""
    lat = enumerate_interval(ext64)
    t1 = [n for n in lat.nodes if n.dim == 2][0]
    t2 = [n for n in lat.nodes if n.dim == 3][0]
    from ringlat.lattice import compositum_rows, module_sum_rows

    i1, i2 = lat.index_of(t1), lat.index_of(t2)
    assert compositum_rows(lat, i1, i2) == lat.nodes[lat.top].basis
    from ringlat.gfq import intersect_rowspaces

    met = intersect_rowspaces(lat.ext.ambient.field, t1.basis, t2.basis,
                              lat.ext.ambient.dim)
    assert met == lat.nodes[lat.bottom].basis
    assert not is_chained(lat)


def test_maximal_chains(ext44, ext64, ext_chain3):
    chains, trunc = maximal_chains(enumerate_interval(ext_chain3))
    assert len(chains) == 1 and not trunc
    chains64, _ = maximal_chains(enumerate_interval(ext64))
    assert len(chains64) == 2
    chains44, _ = maximal_chains(enumerate_interval(ext44))
    assert len(chains44) == EX44_CHAIN_COUNT
    partial, trunc = maximal_chains(enumerate_interval(ext44), budget=2)
    assert len(partial) == 2 and trunc


def test_maximal_chains_consistent_with_length(ext44):
    lat = enumerate_interval(ext44)
    chains, trunc = maximal_chains(lat)
    assert not trunc
    assert max(len(c.nodes) - 1 for c in chains) == interval_length(lat)


def test_greedy_chain_is_maximal(ext44):
    chain = greedy_maximal_chain(ext44)
    lat = enumerate_interval(ext44)
    for lo, hi in zip(chain, chain[1:]):
        assert (lat.index_of(lo), lat.index_of(hi)) in lat.covers


def test_quotient_interval_bijection(ext44):
    ok, detail = quotient_interval_check(ext44, [(0, 0, 0, 1)])
    assert ok and detail["upstairs"] == detail["downstairs"]
    ok0, _ = quotient_interval_check(ext44, ())
    assert ok0


def test_dot_output_stable(ext44):
    lat = enumerate_interval(ext44)
    out1 = to_dot(lat)
    out2 = to_dot(enumerate_interval(ext44, threads=3))
    assert out1 == out2
    assert out1.startswith("digraph interval {")
    assert out1.count("->") == len(lat.covers)


def test_threads_do_not_change_nodes(ext44, ext64):
    for ext in (ext44, ext64):
        a = enumerate_interval(ext)
        b = enumerate_interval(ext, threads=4)
        assert tuple(n.basis for n in a.nodes) == tuple(n.basis for n in b.nodes)
