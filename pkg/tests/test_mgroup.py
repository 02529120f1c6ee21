import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from gpcheck import config
from gpcheck.gf import (
    SingularMatrixError,
    diagonal,
    field_of_order,
    identity,
    mat_inv,
    mat_mul,
    permutation_matrix,
    random_invertible,
)
from gpcheck.grassmann import apply_matrix, coordinate_subspace, enumerate_subspaces, intersect_dim
from gpcheck.mgroup import (
    NAMED_ORDERS,
    MatrixGroup,
    closure,
    gl_generators,
    group_order_bsgs,
    named_order,
    order_formula,
    orbit,
    orbit_partition,
    parabolic_generators,
    parse_group,
    sl_generators,
    stabilizer_orbits_on_subspaces,
)
from gpcheck.schreier import StabilizerChain, compose, group_order, inverse


# -- permutation-group engine -------------------------------------------------------

perm_gens = st.integers(2, 9).flatmap(
    lambda d: st.tuples(st.just(d), st.lists(st.permutations(range(d)), min_size=1, max_size=3)))


@settings(max_examples=120, deadline=None)
@given(perm_gens)
def test_schreier_sims_matches_sympy(case):
    degree, gens = case
    expected = PermutationGroup([Permutation(g) for g in gens]).order()
    chain = StabilizerChain(degree)
    chain.extend(np.array(g) for g in gens)
    assert chain.order() == expected
    for g in gens:
        assert chain.contains(np.array(g))


@settings(max_examples=60, deadline=None)
@given(perm_gens, st.permutations(range(9)))
def test_membership_matches_sympy(case, candidate):
    degree, gens = case
    cand = [c for c in candidate if c < degree]
    G = PermutationGroup([Permutation(g) for g in gens])
    chain = StabilizerChain(degree)
    chain.extend(np.array(g) for g in gens)
    assert chain.contains(np.array(cand)) == G.contains(Permutation(cand))


def test_compose_and_inverse():
    a = np.array([1, 2, 0])
    b = np.array([0, 2, 1])
    # a first, then b: 0 -> 1 -> 2
    assert compose(a, b).tolist() == [2, 1, 0]
    assert compose(a, inverse(a)).tolist() == [0, 1, 2]


def test_redundant_generators_are_skipped():
    chain = StabilizerChain(4)
    assert chain.add_generator([1, 0, 2, 3])
    assert not chain.add_generator([1, 0, 2, 3])
    assert chain.add_generator([1, 2, 3, 0])
    assert not chain.add_generator([0, 2, 1, 3])
    assert chain.order() == 24
    assert group_order(4, []) == 1
    with pytest.raises(ValueError):
        chain.add_generator([0, 1, 2])


# -- matrix groups -------------------------------------------------------------------

def _groups():
    """(name, MatrixGroup) pairs with order <= 10^5."""
    F2, F3, F4, F5, F7 = (field_of_order(q) for q in (2, 3, 4, 5, 7))
    out = [
        ("SL2(2)", MatrixGroup(F2, 2, sl_generators(2, F2))),
        ("SL2(3)", MatrixGroup(F3, 2, sl_generators(2, F3))),
        ("GL2(3)", MatrixGroup(F3, 2, gl_generators(2, F3))),
        ("SL2(4)", MatrixGroup(F4, 2, sl_generators(2, F4))),
        ("GL2(4)", MatrixGroup(F4, 2, gl_generators(2, F4))),
        ("SL2(5)", MatrixGroup(F5, 2, sl_generators(2, F5))),
        ("GL2(5)", MatrixGroup(F5, 2, gl_generators(2, F5))),
        ("SL2(7)", MatrixGroup(F7, 2, sl_generators(2, F7))),
        ("SL3(2)", MatrixGroup(F2, 3, sl_generators(3, F2))),
        ("SL3(3)", MatrixGroup(F3, 3, sl_generators(3, F3))),
        ("SL4(2)", MatrixGroup(F2, 4, sl_generators(4, F2))),
        ("P(4,2,2)", MatrixGroup(F2, 4, parabolic_generators(4, 2, F2))),
        ("P(3,1,3)", MatrixGroup(F3, 3, parabolic_generators(3, 1, F3))),
        ("<perm(1 2 3)>", MatrixGroup(F2, 3, [permutation_matrix([(1, 2, 3)], 3, F2)])),
        ("torus GL2(7)", MatrixGroup(F7, 2, [diagonal(F7, [3, 1]), diagonal(F7, [1, 3])])),
    ]
    return out


GROUPS = _groups()


@pytest.mark.parametrize("name,G", GROUPS, ids=[g[0] for g in GROUPS])
def test_bsgs_matches_closure(name, G):
    elements = closure(G)
    assert len(elements) <= 10**5
    assert group_order_bsgs(G) == len(elements)
    assert order_formula("GL", G.n, G.field.q) % len(elements) == 0


@pytest.mark.parametrize("name,G", GROUPS[:11], ids=[g[0] for g in GROUPS[:11]])
def test_standard_generators_give_formula_orders(name, G):
    family = "GL" if name.startswith("GL") else "SL"
    assert G.order() == order_formula(family, G.n, G.field.q)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(range(len(GROUPS))), st.integers(0, 2**32 - 1))
def test_bsgs_invariant_under_shuffle_and_conjugation(idx, seed):
    _, G = GROUPS[idx]
    F = G.field
    rng = np.random.default_rng(seed)
    gens = [G.generators[i] for i in rng.permutation(len(G.generators))]
    assert group_order_bsgs(MatrixGroup(F, G.n, gens)) == G.order()
    P = random_invertible(F, G.n, rng)
    assert group_order_bsgs(G.conjugate(P, mat_inv(F, P))) == G.order()


@pytest.mark.parametrize("name,G", GROUPS, ids=[g[0] for g in GROUPS])
def test_chain_orbit_sizes_multiply_to_order(name, G):
    chain = G.chain
    assert np.prod(chain.orbit_sizes, dtype=object) == chain.order() == G.order()
    e1 = [1] + [0] * (G.n - 1)
    assert G.order() % len(orbit(G, e1, "vector")) == 0


def test_bsgs_examples(F2):
    assert group_order_bsgs(MatrixGroup(F2, 3, [identity(F2, 3)])) == 1
    assert group_order_bsgs(MatrixGroup(F2, 2, sl_generators(2, F2))) == 6
    assert group_order_bsgs(MatrixGroup(F2, 4, sl_generators(4, F2))) == 20160
    with pytest.raises(SingularMatrixError):
        MatrixGroup(F2, 2, [np.zeros((2, 2), dtype=np.int64)])
    with pytest.raises(config.BudgetExceeded):
        group_order_bsgs(MatrixGroup(F2, 8, sl_generators(8, F2)), budget=100)


def test_membership(F3):
    G = MatrixGroup(F3, 2, sl_generators(2, F3))
    assert G.contains(np.array([[0, 1], [2, 0]]))
    assert not G.contains(diagonal(F3, [2, 1]))


def test_closure_examples(F2, F3):
    assert len(closure(MatrixGroup(F2, 2, [identity(F2, 2)]))) == 1
    assert len(closure(MatrixGroup(F2, 2, [permutation_matrix([(1, 2)], 2, F2)]))) == 2
    assert len(closure(MatrixGroup(F3, 2, sl_generators(2, F3)))) == 24
    with pytest.raises(config.BudgetExceeded):
        closure(MatrixGroup(F3, 3, sl_generators(3, F3)), cap=1000)


def test_orbit_examples(F2):
    G = MatrixGroup(F2, 2, sl_generators(2, F2))
    assert sorted(orbit(G, [1, 0])) == [(0, 1), (1, 0), (1, 1)]
    trivial = MatrixGroup(F2, 3, [identity(F2, 3)])
    assert orbit(trivial, [1, 0, 1]) == [(1, 0, 1)]
    H = MatrixGroup(F2, 4, sl_generators(4, F2))
    orb = orbit(H, coordinate_subspace(F2, 4, [1, 2]))
    assert len(orb) == 35 and len(set(orb)) == 35
    with pytest.raises(config.BudgetExceeded):
        orbit(H, coordinate_subspace(F2, 4, [1, 2]), budget=10)


def test_orbit_partition_invariants(F3):
    G = MatrixGroup(F3, 2, [diagonal(F3, [2, 1])])
    domain = [tuple(v) for v in np.ndindex(3, 3)]
    parts = orbit_partition(G, domain, "vector")
    flat = [v for o in parts for v in o]
    assert sorted(flat) == sorted(domain)
    for o in parts:
        for v in o:
            img = tuple(int(c) for c in mat_mul(F3, np.array([v]), G.generators[0])[0])
            assert img in o


def _brute_orbits(n, k, F):
    """Partition k-subspaces by applying every element of the parabolic subgroup."""
    H = MatrixGroup(F, n, parabolic_generators(n, k, F))
    elements = closure(H)
    subs = list(enumerate_subspaces(n, k, F))
    remaining = set(subs)
    out = []
    for s in subs:
        if s not in remaining:
            continue
        orb = {apply_matrix(s, g, check=False) for g in elements}
        remaining -= orb
        out.append(orb)
    return out


@pytest.mark.parametrize("n,k,q", [(2, 1, 2), (4, 2, 2), (4, 1, 3), (4, 2, 3)])
def test_stabilizer_orbits_match_brute_force(n, k, q):
    F = field_of_order(q)
    part = stabilizer_orbits_on_subspaces(n, k, F)
    assert sorted(map(frozenset, part.orbits), key=len) == sorted(map(frozenset, _brute_orbits(n, k, F)), key=len)
    x = coordinate_subspace(F, n, range(1, k + 1))
    assert len(part.orbits) == k + 1
    assert [intersect_dim(x, o[0]) for o in part.orbits] == list(range(k, -1, -1))
    for o in part.orbits:
        assert len({intersect_dim(x, y) for y in o}) == 1


def test_stabilizer_orbit_examples(F2):
    assert stabilizer_orbits_on_subspaces(4, 2, F2).sizes == [1, 18, 16]
    assert stabilizer_orbits_on_subspaces(2, 1, F2).sizes == [1, 2]
    with pytest.raises(ValueError):
        stabilizer_orbits_on_subspaces(4, 3, F2)


@pytest.mark.parametrize("n,k,q", [(4, 2, 2), (5, 2, 2), (4, 1, 3), (4, 2, 3)])
def test_parabolic_has_index_gaussian_binomial(n, k, q):
    from gpcheck.grassmann import gaussian_binomial

    F = field_of_order(q)
    H = MatrixGroup(F, n, parabolic_generators(n, k, F))
    assert H.order() * gaussian_binomial(n, k, q) == order_formula("SL", n, q)
    x = coordinate_subspace(F, n, range(1, k + 1))
    assert all(apply_matrix(x, g) == x for g in H.generators)


# -- order formulas ------------------------------------------------------------------

@pytest.mark.parametrize("family,params,order", [
    ("SL", (2, 2), 6),
    ("SL", (4, 2), 20160),
    ("SL", (4, 3), 12130560),
    ("GL", (2, 3), 48),
    ("PSL", (2, 41), 34440),
    ("PSL", (2, 7), 168),
    ("PSL", (5, 3), 237783237120),
    ("PGL", (2, 5), 120),
    ("PSU", (4, 2), 25920),
    ("GU", (2, 2), 18),
    ("SU", (3, 2), 216),
    ("Sp", (4, 2), 720),
    ("PSp", (4, 3), 25920),
    ("A", (5,), 60),
    ("S", (4,), 24),
    ("M11", (), 7920),
    ("2^4.A6", (), 5760),
])
def test_order_formula_values(family, params, order):
    assert order_formula(family, *params) == order


def test_order_formula_cross_checks():
    # |PSL_2(q)| = q(q^2-1)/gcd(2,q-1)
    for q in (41, 49, 59, 61, 71):
        assert order_formula("PSL", 2, q) == q * (q * q - 1) // (2 if q % 2 else 1)
    assert NAMED_ORDERS["2^4.A6"] == 16 * order_formula("A", 6)
    # PSU_4(2) and PSp_4(3) are isomorphic
    assert order_formula("PSU", 4, 2) == order_formula("PSp", 4, 3)
    for bad in [("XX", 2, 2), ("SL", 2), ("SL", 2, 6), ("A",), ("M11", 1), ("Sp", 3, 2)]:
        with pytest.raises(ValueError):
            order_formula(*bad)


def test_parse_group():
    assert parse_group("PSL(5,3)") == ("PSL", (5, 3))
    assert parse_group(" A(5) ") == ("A", (5,))
    assert parse_group("A5") == ("A", (5,))
    assert parse_group("M11") == ("M11", ())
    assert named_order("2^4.A6") == 5760
    assert named_order("PSU(4,2)") == 25920
    with pytest.raises(ValueError):
        parse_group("PSL[5,3]")
