import io
from fractions import Fraction as Q
from random import Random

import pytest

from trbm.cube import all_vertices, enumerate_slicings, is_slicing, \
    vertex_coords
from trbm.linalg import rank, rank_bareiss
from trbm.tropical import (AmbiguousArgmax, TropParams, TropicalPoint,
                           count_inference_functions, inference_function,
                           read_tropical_point, slicing_matrix,
                           tropical_dimension, tropical_membership,
                           tropical_morphism, write_tropical_point)


def random_params(n, k, rng, denom=2):
    return TropParams.build(
        [[Q(rng.randint(-6, 6), rng.randint(1, denom)) for _ in range(n)]
         for _ in range(k)],
        [Q(rng.randint(-6, 6), rng.randint(1, denom)) for _ in range(n)],
        [Q(rng.randint(-6, 6), rng.randint(1, denom)) for _ in range(k)])


def unitwise_oracle(params):
    """Score vector via the per-unit decomposition max(0, W_i.v + c_i)."""
    values = []
    for v in all_vertices(params.n):
        coords = vertex_coords(v, params.n)
        total = sum((params.visible_bias[j] * coords[j]
                     for j in range(params.n)), Q(0))
        for i in range(params.k):
            act = sum((params.weights[i][j] * coords[j]
                       for j in range(params.n)), params.hidden_bias[i])
            total += max(Q(0), act)
        values.append(total)
    return TropicalPoint(params.n, tuple(values))


def test_morphism_zero_params():
    p = TropParams.build([[0, 0]], [0, 0], [0])
    assert tropical_morphism(p).values == (0, 0, 0, 0)


def test_morphism_half_margin_example():
    p = TropParams.build([[1, 1]], [0, 0], [Q(-3, 2)])
    assert tropical_morphism(p).values == (0, 0, 0, Q(1, 2))


def test_morphism_matches_unitwise_oracle():
    rng = Random(17)
    for _ in range(60):
        p = random_params(3, 2, rng)
        assert tropical_morphism(p) == unitwise_oracle(p)
        assert tropical_morphism(p).values == unitwise_oracle(p).values


def test_shift_invariance():
    rng = Random(4)
    for _ in range(20):
        p = random_params(3, 2, rng)
        beta = [Q(rng.randint(-5, 5)) for _ in range(3)]
        shifted = TropParams.build(
            p.weights, [b + d for b, d in zip(p.visible_bias, beta)],
            p.hidden_bias)
        base = tropical_morphism(p).values
        moved = tropical_morphism(shifted).values
        for v in all_vertices(3):
            coords = vertex_coords(v, 3)
            delta = sum((beta[j] * coords[j] for j in range(3)), Q(0))
            assert moved[v] == base[v] + delta


def test_region_linearity():
    rng = Random(8)
    tested = 0
    while tested < 15:
        p = random_params(2, 2, rng)
        try:
            pattern = inference_function(p)
        except AmbiguousArgmax:
            continue
        # small same-pattern perturbation
        q = TropParams.build(
            [[w + Q(rng.randint(-1, 1), 50) for w in row]
             for row in p.weights],
            [b + Q(rng.randint(-1, 1), 50) for b in p.visible_bias],
            [c + Q(rng.randint(-1, 1), 50) for c in p.hidden_bias])
        try:
            if inference_function(q) != pattern:
                continue
        except AmbiguousArgmax:
            continue
        qa, qb = tropical_morphism(p).values, tropical_morphism(q).values
        for t in (Q(1, 3), Q(1, 2), Q(2, 3)):
            mix = TropParams.build(
                [[t * a + (1 - t) * b for a, b in zip(ra, rb)]
                 for ra, rb in zip(p.weights, q.weights)],
                [t * a + (1 - t) * b
                 for a, b in zip(p.visible_bias, q.visible_bias)],
                [t * a + (1 - t) * b
                 for a, b in zip(p.hidden_bias, q.hidden_bias)])
            assert tropical_morphism(mix).values == tuple(
                t * a + (1 - t) * b for a, b in zip(qa, qb))
        tested += 1


def test_inference_constant_when_bias_dominates():
    p = TropParams.build([[1, 2], [3, -1]], [0, 0], [10, 10])
    assert set(inference_function(p).values()) == {0b11}


def test_inference_margin_example():
    p = TropParams.build([[1, 1]], [0, 0], [Q(-3, 2)])
    assert inference_function(p) == {0: 0, 1: 0, 2: 0, 3: 1}


def test_inference_tie_reports_states():
    p = TropParams.build([[1, 1]], [0, 0], [-1])
    with pytest.raises(AmbiguousArgmax) as info:
        inference_function(p)
    assert sorted(v for v, _ in info.value.ties) == [0b01, 0b10]
    assert all(hs == [0, 1] for _, hs in info.value.ties)


def test_inference_coordinates_are_threshold_functions():
    rng = Random(31)
    for _ in range(40):
        n, k = 3, 2
        p = TropParams.build(
            [[rng.randint(-4, 4) for _ in range(n)] for _ in range(k)],
            [rng.randint(-4, 4) for _ in range(n)],
            [Q(2 * rng.randint(-8, 8) + 1, 2) for _ in range(k)])
        mapping = inference_function(p)
        for i in range(k):
            ones = {v for v, h in mapping.items() if h >> (k - 1 - i) & 1}
            assert is_slicing(ones, n) is not None


def test_slicing_matrix_blocks():
    assert rank(slicing_matrix(3, [])) == 3
    s0 = is_slicing({0b000}, 3)
    m = slicing_matrix(3, [s0])
    assert m.cols == 7 and rank(m) == rank_bareiss(m) == 4
    corner = is_slicing({0b000, 0b100, 0b010, 0b001}, 3)
    m = slicing_matrix(3, [corner])
    assert rank(m) == rank_bareiss(m) == 7


def test_slicing_matrix_rank_permutation_invariant():
    slicings = [s for s in enumerate_slicings(3)
                if len(s.positive) in (2, 3, 4)][:3]
    base = rank(slicing_matrix(3, slicings))
    assert base == rank(slicing_matrix(3, slicings[::-1]))


def test_dimension_exhaustive_small():
    r = tropical_dimension(3, 1)
    assert (r.max_rank, r.dim, r.certified) == (7, 7, True)
    r = tropical_dimension(3, 2)
    assert (r.max_rank, r.dim, r.certified) == (8, 7, True)


def test_dimension_code_based():
    r = tropical_dimension(7, 15, "code_based")
    assert (r.max_rank, r.dim, r.certified) == (127, 127, True)
    r = tropical_dimension(7, 16, "code_based")
    assert (r.max_rank, r.dim, r.certified) == (128, 127, True)


def test_dimension_greedy_reaches_target():
    r = tropical_dimension(3, 1, "greedy_random", seed=0)
    assert r.dim == 7 and r.certified


def test_dimension_guard():
    with pytest.raises(ValueError):
        tropical_dimension(4, 3)  # tuple count above the guard


def test_dimension_code_based_needs_enough_words():
    with pytest.raises(ValueError):
        tropical_dimension(7, 17, "code_based")


def test_membership_origin():
    assert tropical_membership(TropicalPoint.build(3, [0] * 8)).member


def test_membership_image_points_roundtrip():
    rng = Random(12)
    for _ in range(25):
        p = random_params(3, 1, rng)
        q = tropical_morphism(p)
        res = tropical_membership(q)
        assert res.member
        image = tropical_morphism(res.params())
        shifted = TropicalPoint.build(
            3, [x + res.shift for x in image.values])
        assert shifted == q
        assert shifted.values == q.values


def test_membership_parity_indicator_fails():
    parity = TropicalPoint.build(
        3, [1 if bin(v).count("1") % 2 == 0 else 0 for v in all_vertices(3)])
    assert not tropical_membership(parity).member


def test_membership_needs_small_n():
    with pytest.raises(ValueError):
        tropical_membership(TropicalPoint.build(5, [0] * 32))


def test_count_inference_functions():
    assert count_inference_functions(1, 1) == 4
    assert count_inference_functions(2, 1) == 14
    assert count_inference_functions(3, 2) == 10816


def test_tropical_point_equality_mod_ones():
    a = TropicalPoint.build(2, [0, 1, 2, 3])
    b = TropicalPoint.build(2, [5, 6, 7, 8])
    assert a == b and hash(a) == hash(b)
    assert a != TropicalPoint.build(2, [0, 1, 2, 4])


def test_tropical_point_file_roundtrip():
    q = TropicalPoint.build(2, [Q(1, 3), 0, Q(-5, 2), 7])
    buf = io.StringIO()
    write_tropical_point(q, buf)
    buf.seek(0)
    assert read_tropical_point(buf).values == q.values
