"""Counting layer: transfer recursion, closed forms, series, enumeration."""

import pytest

from simclass import (
    BadParams,
    BudgetExceeded,
    CountVector,
    base_vector,
    canon3,
    classify_form,
    count3,
    enumerate3,
    gf_coeffs,
    level_vector,
    ring_ctx,
    scalar,
    theta,
    transfer_matrix,
    transfer_power,
    type_histogram,
)

ANCHORS = [
    (2, 1, "M", 14),
    (2, 1, "GL", 6),
    (2, 2, "M", 144),
    (2, 2, "GL", 60),
    (3, 1, "M", 39),
    (3, 1, "GL", 24),
    (3, 2, "M", 1179),
    (3, 2, "GL", 714),
    (2, 3, "M", 1296),
]


# ----------------------------------------------------------------------
# transfer matrix


def test_transfer_matrix_at_q2():
    assert transfer_matrix(2) == [
        [2, 0, 0, 0],
        [2, 4, 0, 0],
        [2, 0, 4, 0],
        [8, 8, 10, 8],
    ]


def test_transfer_power_level_edge_cases():
    for mode in ("iterate", "closed"):
        assert transfer_power(3, 0, mode) == [
            [1 if i == j else 0 for j in range(4)] for i in range(4)
        ]
        assert transfer_power(3, 1, mode) == transfer_matrix(3)


def test_transfer_power_closed_matches_iterate():
    for q in (2, 3, 5, 7):
        for level in range(7):
            assert transfer_power(q, level, "closed") == transfer_power(q, level, "iterate")
            assert transfer_power(q, level, "closed_form") == transfer_power(q, level, "closed")


def test_transfer_square_corner_entry():
    for q in (2, 3, 5, 7, 11):
        assert transfer_power(q, 2)[3][0] == q**6 + q**5 + q**4 + q**2


def test_theta_small_levels():
    for q in (2, 3, 5, 7):
        assert theta(q, 1) == q**3
        assert theta(q, 2) == q**6 + q**5 + q**4 + q**2
        # theta is the corner of the power for every level
        for level in (3, 4, 5):
            assert theta(q, level) == transfer_power(q, level, "iterate")[3][0]


# ----------------------------------------------------------------------
# class counts


def test_count3_anchor_values():
    for q, level, group, expected in ANCHORS:
        assert count3(q, level, group) == expected


def test_count3_level_zero_is_one():
    assert count3(2, 0) == 1
    assert count3(3, 0, "GL") == 1


def test_count3_closed_matches_recursion():
    for q in (2, 3, 5, 7):
        for level in range(1, 11):
            for group in ("M", "GL"):
                assert count3(q, level, group, "closed") == count3(
                    q, level, group, "recursion"
                )


def test_count3_closed_form_alias():
    assert count3(2, 2, "M", "closed_form") == 144


def test_count3_rejects_bad_arguments():
    with pytest.raises(BadParams):
        count3(1, 2)
    with pytest.raises(BadParams):
        count3(2, -1)
    with pytest.raises(BadParams):
        count3(2, 2, "SL")
    with pytest.raises(BadParams):
        count3(2, 2, "M", "guess")


def test_vectors():
    assert base_vector(2) == CountVector(2, 2, 2, 8)
    assert base_vector(2, "GL") == CountVector(1, 0, 1, 4)
    assert base_vector(3, "GL") == CountVector(2, 2, 2, 18)
    assert level_vector(2, 1) == base_vector(2)
    v = level_vector(2, 2)
    assert v == CountVector(4, 12, 12, 116)
    assert v.scalar == 4 and v.rest == 116
    assert sum(v) == 144
    assert sum(level_vector(2, 2, "GL")) == 60


# ----------------------------------------------------------------------
# generating function


def test_gf_coeffs_match_counts():
    for q in (2, 3):
        for group in ("M", "GL"):
            coeffs = gf_coeffs(q, group, 11)
            assert coeffs == [count3(q, i, group) for i in range(11)]
            assert coeffs[0] == 1


def test_gf_coeffs_first_terms_at_q2():
    assert gf_coeffs(2, "M", 5) == [1, 14, 144, 1296, 10976]
    assert gf_coeffs(2, "GL", 3) == [1, 6, 60]


# ----------------------------------------------------------------------
# enumeration


def test_enumerate3_counts():
    cases = [
        (("z", 2, 1), "M", 14),
        (("z", 2, 1), "GL", 6),
        (("z", 2, 2), "M", 144),
        (("z", 2, 2), "GL", 60),
        (("t", 2, 2), "M", 144),
        (("z", 3, 1), "M", 39),
        (("z", 3, 1), "GL", 24),
    ]
    for desc, group, expected in cases:
        ctx = ring_ctx(*desc)
        reps = enumerate3(ctx, group)
        assert len(reps) == expected == count3(ctx.q, ctx.length, group)
        assert len({form for form, _ in reps}) == expected


def test_enumerate3_pairs_are_consistent():
    ctx = ring_ctx("z", 2, 2)
    for form, mat in enumerate3(ctx):
        assert mat == form.rebuild()
        assert mat.ctx is ctx and mat.n == 3


def test_enumerate3_reps_are_canonical_fixed_points():
    ctx = ring_ctx("z", 3, 1)
    for form, mat in enumerate3(ctx):
        redone = canon3(mat)
        assert redone == form


def test_enumerate3_gl_reps_are_invertible():
    ctx = ring_ctx("z", 2, 2)
    for _, mat in enumerate3(ctx, "GL"):
        assert mat.is_invertible()


def test_enumerate3_larger_ring_matches_count():
    ctx = ring_ctx("z", 3, 2)
    assert len(enumerate3(ctx)) == 1179


def test_enumerate3_budget():
    with pytest.raises(BudgetExceeded):
        enumerate3(ring_ctx("z", 5, 3), budget=100)


# ----------------------------------------------------------------------
# bucket classification and histograms


def test_classify_form_buckets():
    ctx = ring_ctx("z", 2, 2)
    by_bucket = {0: 0, 1: 0, 2: 0, 3: 0}
    for form, _ in enumerate3(ctx):
        by_bucket[classify_form(form)] += 1
    assert classify_form(canon3(scalar(ctx, 3, 3))) == 0
    assert tuple(by_bucket[k] for k in range(4)) == (4, 12, 12, 116)


def test_type_histogram_matches_transfer_recursion():
    ctx = ring_ctx("z", 2, 2)
    hist = type_histogram(ctx)
    assert hist == [CountVector(2, 2, 2, 8), CountVector(4, 12, 12, 116)]
    t = transfer_matrix(2)
    pushed = CountVector(*(sum(t[i][k] * hist[0][k] for k in range(4)) for i in range(4)))
    assert pushed == hist[1]


def test_type_histogram_gl_base():
    hist = type_histogram(ring_ctx("z", 2, 1), "GL")
    assert hist == [CountVector(1, 0, 1, 4)]
