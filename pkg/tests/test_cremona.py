import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nonef.cremona import (
    CremonaError,
    QuadTransform,
    ReductionFailed,
    TransformLog,
    greedy_steps_bound,
    image_under_log,
    fixed_chain,
    quadratic_transform,
    reduce_chain,
    split_curve,
)
from nonef.lattice import (
    DivisorClass,
    canonical_class,
    intersect,
    line_class,
    minus_one_curve_C,
    parse_class,
    virtual_dim,
)


def cls(text: str) -> DivisorClass:
    return parse_class(text)


def explicit_transform(a: DivisorClass, base: tuple[int, int, int]) -> DivisorClass:
    # oracle: the transform as a 4x4 reflection matrix acting on (d, m_i, m_j, m_k)
    i, j, k = base
    d, mi, mj, mk = a.degree, a.mults[i], a.mults[j], a.mults[k]
    matrix = [[2, -1, -1, -1], [1, 0, -1, -1], [1, -1, 0, -1], [1, -1, -1, 0]]
    v = [sum(r * x for r, x in zip(row, (d, mi, mj, mk))) for row in matrix]
    out = list(a.mults)
    out[i], out[j], out[k] = v[1], v[2], v[3]
    return DivisorClass(v[0], tuple(out))


@st.composite
def class_and_base(draw, lo=-15, hi=15):
    n = draw(st.integers(3, 9))
    a = DivisorClass(draw(st.integers(lo, hi)), tuple(draw(st.lists(st.integers(lo, hi), min_size=n, max_size=n))))
    base = tuple(draw(st.permutations(range(n)))[:3])
    return a, base


# -- single transforms ------------------------------------------------------------

@pytest.mark.parametrize(
    "before, base, after",
    [
        ("4;3,1,1,1^4", (0, 1, 2), "3;2,0,0,1^4"),
        ("1;0,0,0", (0, 1, 2), "2;1,1,1"),
        ("10;6,3,3,3^4", (0, 1, 2), "8;4,1,1,3^4"),
    ],
)
def test_transform_examples(before, base, after):
    assert quadratic_transform(cls(before), QuadTransform(base)) == cls(after)


@pytest.mark.parametrize("base", [(0, 0, 1), (0, 1, 7), (-1, 1, 2)])
def test_transform_rejects_bad_base(base):
    with pytest.raises(CremonaError):
        quadratic_transform(cls("4;1^7"), QuadTransform(base))


@given(class_and_base())
def test_transform_matches_reflection_matrix(data):
    a, base = data
    assert quadratic_transform(a, QuadTransform(base)) == explicit_transform(a, base)


@given(class_and_base())
def test_transform_is_an_involution(data):
    a, base = data
    t = QuadTransform(base)
    assert quadratic_transform(quadratic_transform(a, t), t) == a


@settings(max_examples=1000)
@given(st.data())
def test_transform_preserves_pairing_and_canonical(data):
    a, base = data.draw(class_and_base())
    b = DivisorClass(data.draw(st.integers(-15, 15)), tuple(data.draw(st.lists(st.integers(-15, 15), min_size=a.n, max_size=a.n))))
    t = QuadTransform(base)
    ta, tb = quadratic_transform(a, t), quadratic_transform(b, t)
    K = canonical_class(a.n)
    assert intersect(ta, tb) == intersect(a, b)
    assert intersect(ta, K) == intersect(a, K)
    assert quadratic_transform(K, t) == K


@given(class_and_base(lo=0, hi=12))
def test_transform_preserves_virtual_dim_when_nonnegative(data):
    a, base = data
    b = quadratic_transform(a, QuadTransform(base))
    # vdim is a pairing formula only while every multiplicity stays >= 0
    if a.degree >= 0 and b.degree >= 0 and min(b.mults) >= 0:
        assert virtual_dim(b) == virtual_dim(a)


# -- logs ------------------------------------------------------------------------------

def test_log_text_round_trip():
    log = fixed_chain(7)
    assert log.to_text() == "q 0 1 2\nq 0 3 4\nq 0 5 6\n"
    assert TransformLog.from_text(log.to_text()) == log
    assert TransformLog.from_text("") == TransformLog(())


@given(st.integers(3, 21).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.permutations(range(n)), max_size=6))))
def test_log_then_reverse_is_identity(data):
    n, perms = data
    log = TransformLog(tuple(QuadTransform(tuple(p[:3])) for p in perms))
    a = DivisorClass(11, tuple(range(n)))
    assert image_under_log(image_under_log(a, log), log.reversed()) == a
    assert image_under_log(a, log.then(log.reversed())) == a


def test_empty_log_is_identity():
    a = cls("9;3,2,1")
    assert image_under_log(a, TransformLog(())) == a


def test_fresh_pairs_must_be_disjoint():
    with pytest.raises(CremonaError):
        fixed_chain(7, pairs=[(1, 2), (2, 3)])


# -- reduction chains -----------------------------------------------------------------

def test_chain_on_P_residual_lands_on_plane_quartic_through_six_points():
    terminal, log = reduce_chain(cls("10;6,3^6"), "fixed")
    assert terminal == cls("4;0,1^6")
    assert len(log) == 3


def test_chain_on_F_residual_lands_on_lines():
    terminal, log = reduce_chain(cls("4;3,1^6"), "fixed")
    assert terminal.stripped() == cls("1;")
    assert len(log) == 3


def test_greedy_agrees_on_examples():
    assert reduce_chain(cls("10;6,3^6"), "greedy")[0].stripped() == cls("4;1^6")
    assert reduce_chain(cls("1;"), "greedy") == (cls("1;"), TransformLog(()))


def test_line_image_under_chain():
    for n in range(1, 9):
        N = 2 * n + 1
        assert image_under_log(line_class(N), fixed_chain(N)) == DivisorClass(n + 1, (n,) + (1,) * (2 * n))


def test_minus_one_curve_C_under_chain_is_exceptional():
    # C = L_n(n-1, 1^2n) is contracted to the point p_0 by the chain
    for n in range(2, 9):
        N = 2 * n + 1
        image = image_under_log(minus_one_curve_C(n), fixed_chain(N))
        assert image == DivisorClass(0, (-1,) + (0,) * (2 * n))


def test_pencil_family_reduces_to_complete_system():
    for n in range(2, 9):
        for K in range(1, 5):
            a = DivisorClass((n + 1) * K, (n * K,) + (K,) * (2 * n))
            assert reduce_chain(a, "fixed")[0] == DivisorClass(K, (0,) * (2 * n + 1))


@given(st.integers(2, 6), st.integers(1, 12), st.data())
def test_any_fresh_pair_choice_gives_same_terminal(n, k, data):
    N = 2 * n + 1
    order = data.draw(st.permutations(range(1, N)))
    pairs = [(order[2 * s], order[2 * s + 1]) for s in range(n)]
    a = DivisorClass((n + 1) * k, (n * k,) + (k,) * (2 * n))
    assert reduce_chain(a, "fixed", pairs=pairs)[0] == reduce_chain(a, "fixed")[0]


def test_pipeline_identity_grid():
    # residual systems of the m=2 argument, on both sides, for every feasible twist
    for n in range(2, 9):
        for k in range(1, 13):
            for t in range(0, k // n + 1):
                r = k - t * n
                LF = DivisorClass((n + 1) * r, (n * r,) + (r,) * (2 * n))
                LP = DivisorClass(t * (n * n + 1), (t * n * (n - 1),) + (t * n,) * (2 * n))
                assert reduce_chain(LF, "fixed")[0] == DivisorClass(r, (0,) * (2 * n + 1)), (n, k, t)
                assert reduce_chain(LP, "fixed")[0] == DivisorClass(t * (n + 1), (0,) + (t,) * (2 * n)), (n, k, t)


def test_greedy_reaches_standard_form():
    for text in ["13;6,4^8", "6;3,2^6", "9;3^9", "7;3^6"]:
        terminal, log = reduce_chain(cls(text), "greedy")
        top = sorted(terminal.mults, reverse=True)[:3]
        assert terminal.degree >= sum(top)
        assert image_under_log(terminal, log.reversed()) == cls(text)


def test_greedy_failure_after_step_bound():
    # non-effective classes with negative square keep losing degree
    for text in ["12;5^9", "20;8^7,3^3"]:
        with pytest.raises(ReductionFailed):
            reduce_chain(cls(text), "greedy")
    assert greedy_steps_bound(3) == 130


def test_unknown_strategy():
    with pytest.raises(CremonaError):
        reduce_chain(cls("3;1^3"), "other")


# -- splitting -------------------------------------------------------------------------

def test_split_line_from_F_system():
    line = DivisorClass(1, (1, 1, 0, 0, 0, 0, 0))
    assert split_curve(cls("16;13,4^6"), line).multiplicity == 1


def test_split_C_examples():
    C = minus_one_curve_C(3)
    r = split_curve(cls("10;7,3^6"), C)
    assert (r.multiplicity, r.residual) == (2, cls("4;3,1^6"))
    r = split_curve(cls("13;8,4^6"), C)
    assert (r.multiplicity, r.residual) == (1, cls("10;6,3^6"))


def test_split_requires_minus_one_class():
    with pytest.raises(CremonaError):
        split_curve(cls("4;1^4"), cls("2;1^4"))


@given(st.integers(2, 6), st.lists(st.integers(-5, 30), min_size=13, max_size=13), st.integers(0, 40))
def test_split_is_idempotent(n, mults, degree):
    C = minus_one_curve_C(n)
    a = DivisorClass(degree, tuple(mults[: C.n]) + (0,) * max(0, C.n - 13))
    first = split_curve(a, C)
    assert first.residual == a - first.multiplicity * C
    assert intersect(first.residual, C) >= 0
    assert split_curve(first.residual, C).multiplicity == 0


def test_transform_order_within_base_irrelevant():
    a = cls("9;4,3,2,1,1")
    images = {quadratic_transform(a, QuadTransform(b)) for b in itertools.permutations((0, 2, 4))}
    assert len(images) == 1
