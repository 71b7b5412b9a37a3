"""3x3 pipeline: residue typing, block split, pi-power shapes, canon3."""

import itertools

import pytest

from simclass import (
    CentralizerShape,
    EParams,
    Mat,
    WrongResidueType,
    block_diag,
    canon2,
    canon3,
    centralizer_order,
    centralizer_shape,
    classify_hard,
    companion,
    diag,
    e_matrix,
    hard_class_rep,
    hard_family,
    hensel_block_split,
    identity,
    is_similar,
    j_matrix,
    reduce_to_e_form,
    residue_type,
    ring_ctx,
    scalar,
)
from simclass.canon3 import CyclicBody, ScalarBody, SplitBody
from conftest import rand_invertible, rand_mat


def ep(ctx, m, a, b, c, d):
    return EParams(ctx, m, ctx.elem(a), ctx.elem(b), ctx.elem(c), ctx.elem(d))


# ----------------------------------------------------------------------
# residue typing


def test_residue_type_defining_cases():
    f2 = ring_ctx("z", 2, 1)
    assert residue_type(identity(f2, 3)).kind == "scalar"
    assert residue_type(diag(f2, [1, 0, 0])).kind == "split"
    assert residue_type(diag(f2, [1, 0, 0])).data == (1, 0)
    assert residue_type(j_matrix(f2, 0, 0)).kind == "jtype"
    assert residue_type(j_matrix(f2, 0, 0)).data == (0,)
    assert residue_type(companion(f2, tuple(f2.elem(v) for v in (1, 0, 0)))).kind == "cyclic"


def test_residue_type_is_computed_modulo_pi(rng):
    ctx = ring_ctx("z", 2, 2)
    for _ in range(30):
        m = rand_mat(ctx, 3, rng)
        assert residue_type(m).kind == residue_type(m.residue()).kind


def test_residue_type_partitions_all_of_f3():
    f3 = ring_ctx("z", 3, 1)
    kinds = {"scalar": 0, "split": 0, "jtype": 0, "cyclic": 0}
    for vals in itertools.product(range(3), repeat=9):
        kinds[residue_type(Mat(f3, 3, list(vals))).kind] += 1
    assert sum(kinds.values()) == 3**9
    assert kinds["scalar"] == 3


# ----------------------------------------------------------------------
# block split for distinct residue eigenvalues


def test_hensel_block_split_fixed_point():
    ctx = ring_ctx("z", 2, 2)
    b = Mat.from_rows(ctx, [[0, 2], [2, 2]])
    m = block_diag(ctx, [1, b])
    a, blk, x = hensel_block_split(m)
    assert a.val == 1 and blk == b and x == identity(ctx, 3)


def test_hensel_block_split_worked_example():
    ctx = ring_ctx("z", 2, 2)
    m = Mat.from_rows(ctx, [[1, 0, 0], [1, 0, 2], [2, 2, 2]])
    a, blk, x = hensel_block_split(m)
    assert a.val == 1
    assert is_similar(blk, Mat.from_rows(ctx, [[0, 2], [2, 2]]))[0]
    assert m.conjugate_by(x) == block_diag(ctx, [a, blk])


def test_hensel_block_split_round_trips(rng):
    ctx = ring_ctx("z", 3, 2)
    b0 = Mat.from_rows(ctx, [[3, 3], [6, 3]])  # scalar residue 0
    for _ in range(200):
        g = rand_invertible(ctx, 3, rng)
        av = ctx.elem(rng.choice([1, 2, 4, 5, 7, 8]))  # unit: distinct from 0
        m = block_diag(ctx, [av, b0]).conjugate_by(g)
        a, blk, x = hensel_block_split(m)
        assert a == av
        assert canon2(blk)[0] == canon2(b0)[0]
        assert m.conjugate_by(x) == block_diag(ctx, [a, blk])


def test_hensel_block_split_requires_split_residue():
    ctx = ring_ctx("z", 2, 2)
    with pytest.raises(WrongResidueType):
        hensel_block_split(identity(ctx, 3))


# ----------------------------------------------------------------------
# reduction to the pi-power shape


def test_reduce_to_e_form_fixed_point():
    ctx = ring_ctx("z", 2, 2)
    m = e_matrix(ctx, 2, 2, 0, 2, 0)
    e, x = reduce_to_e_form(m)
    assert x == identity(ctx, 3)
    assert (e.m, e.a.val, e.b.val, e.c.val, e.d.val) == (2, 2, 0, 2, 0)


def test_reduce_to_e_form_normalizes_the_23_entry():
    ctx = ring_ctx("z", 2, 2)
    m = Mat.from_rows(ctx, [[0, 0, 0], [0, 0, 3], [0, 0, 0]])
    e, x = reduce_to_e_form(m)
    assert m.conjugate_by(x) == e.rebuild()
    assert e.rebuild().raw(1, 2) == 1
    assert (e.m, e.a.val, e.b.val, e.c.val, e.d.val) == (2, 0, 0, 0, 0)


def test_reduce_to_e_form_round_trips(rng):
    ctx = ring_ctx("z", 2, 3)
    base = e_matrix(ctx, 1, 2, 2, 0, 1)
    for _ in range(200):
        g = rand_invertible(ctx, 3, rng)
        m = base.conjugate_by(g)
        e, x = reduce_to_e_form(m)
        assert m.conjugate_by(x) == e.rebuild()
        assert is_similar(e.rebuild(), base)[0]


def test_reduce_to_e_form_requires_jtype_residue():
    ctx = ring_ctx("z", 2, 2)
    with pytest.raises(WrongResidueType):
        reduce_to_e_form(companion(ctx, tuple(ctx.elem(v) for v in (1, 0, 0))))


# ----------------------------------------------------------------------
# hard-case normalization


def test_classify_hard_type_examples():
    z4 = ring_ctx("z", 2, 2)

    h, x = classify_hard(ep(z4, 2, 0, 0, 2, 1))
    assert h.tag == "I" and (h.c.val, h.d.val) == (2, 1)
    assert x == identity(z4, 3)

    h, x = classify_hard(ep(z4, 2, 2, 0, 2, 0))
    assert h.tag == "III0"
    assert h.a.val == 2 and h.a.valuation() == 1  # a is exactly pi
    assert not h.b and not h.d  # b cleared, d absorbed into c
    assert h.c.val == 2

    h, x = classify_hard(ep(z4, 1, 2, 2, 0, 0))
    assert h.tag == "II"
    assert h.m == 1 and not h.a and h.b.val == 2  # m = val(b), a eliminated

    h, x = classify_hard(ep(z4, 1, 2, 0, 0, 2))
    assert h.tag == "III1"
    assert h.m == 1 and not h.b  # b cleared


def test_classify_hard_witness_and_idempotence_exhaustive_z4():
    ctx = ring_ctx("z", 2, 2)
    tags = {"I": 0, "II": 0, "III0": 0, "III1": 0}
    for m in (1, 2):
        for a, b, c in itertools.product((0, 2), repeat=3):
            for d in range(4):
                e = ep(ctx, m, a, b, c, d)
                h, x = classify_hard(e)
                tags[h.tag] += 1
                assert e.rebuild().conjugate_by(x) == h.rebuild()
                again, x2 = classify_hard(
                    EParams(ctx, h.m, h.a, h.b, h.c, h.d)
                )
                assert again == h and x2 == identity(ctx, 3)
    assert all(v > 0 for v in tags.values())


def test_classify_hard_tag_matches_valuation_pattern(rng):
    ctx = ring_ctx("z", 2, 3)
    length = ctx.length
    for _ in range(200):
        m = rng.randrange(1, length + 1)
        a, b, c = (rng.randrange(4) * 2 for _ in range(3))
        e = ep(ctx, m, a, b, c, rng.randrange(8))
        va, vb = e.a.valuation(), e.b.valuation()
        h, _ = classify_hard(e)
        if min(m, va, vb) >= length:
            assert h.tag == "I"
        elif vb <= m and vb <= va:
            assert h.tag == "II"
        elif va < m and va < vb:
            assert h.tag == "III0"
        else:
            assert h.tag == "III1"


def test_hard_family_members_are_their_own_class_reps():
    for desc in [("z", 2, 1), ("z", 2, 2), ("z", 3, 2), ("t", 2, 2)]:
        ctx = ring_ctx(*desc)
        fam = hard_family(ctx)
        assert len(fam) == len(set(fam))
        for h in fam:
            rep, x = hard_class_rep(h)
            assert rep == h and x == identity(ctx, 3)


def test_hard_family_tags_separate_classes():
    fam = hard_family(ring_ctx("z", 2, 2))
    for h1 in fam:
        for h2 in fam:
            if h1.tag != h2.tag:
                assert not is_similar(h1.rebuild(), h2.rebuild())[0]


def test_hard_class_rep_collapses_conjugates(rng):
    ctx = ring_ctx("z", 2, 2)
    fam = hard_family(ctx)
    for h in fam[:12]:
        g = rand_invertible(ctx, 3, rng)
        m = h.rebuild().conjugate_by(g)
        e, x1 = reduce_to_e_form(m)
        h2, x2 = classify_hard(e)
        rep, x3 = hard_class_rep(h2)
        assert rep == h
        assert m.conjugate_by(x3 @ x2 @ x1) == rep.rebuild()


# ----------------------------------------------------------------------
# the full canonical form


def test_canon3_scalar_cyclic_split_examples():
    z4 = ring_ctx("z", 2, 2)
    f = canon3(scalar(z4, 3, 3))
    assert isinstance(f.body, ScalarBody) and f.level == 2 and f.d.value.val == 3

    coeffs = tuple(z4.elem(v) for v in (1, 2, 3))
    c = companion(z4, coeffs)
    f = canon3(c)
    assert isinstance(f.body, CyclicBody) and f.body.coeffs == coeffs
    assert f.level == 0 and f.rebuild() == c  # companions are fixed points

    m = Mat.from_rows(z4, [[1, 0, 0], [1, 0, 2], [2, 2, 2]])
    f = canon3(m)
    assert isinstance(f.body, SplitBody) and f.body.a.val == 1
    inner = f.body.inner
    assert (inner.level, inner.d.value.val, inner.c.val, inner.e.val) == (1, 0, 1, 1)


def test_canon3_witness_is_exact(rng):
    for desc in [("z", 2, 2), ("z", 3, 2), ("t", 2, 2), ("z", 2, 3)]:
        ctx = ring_ctx(*desc)
        for _ in range(100):
            m = rand_mat(ctx, 3, rng)
            f = canon3(m)
            assert f.witness.is_invertible()
            assert m.conjugate_by(f.witness) == f.rebuild()


def test_canon3_is_conjugation_invariant(rng):
    for desc in [("z", 2, 2), ("z", 3, 2), ("t", 2, 2)]:
        ctx = ring_ctx(*desc)
        for _ in range(150):
            m = rand_mat(ctx, 3, rng)
            g = rand_invertible(ctx, 3, rng)
            assert canon3(m) == canon3(m.conjugate_by(g))


def test_canon3_invariance_at_length_three(rng):
    ctx = ring_ctx("z", 2, 3)
    # regression pair: a pi-power shape whose step-by-step normalization
    # used to depend on the conjugate it was reached through
    m = Mat.from_rows(ctx, [[2, 5, 2], [3, 2, 0], [1, 3, 5]])
    g = Mat.from_rows(ctx, [[0, 1, 7], [1, 7, 7], [3, 4, 3]])
    assert canon3(m) == canon3(m.conjugate_by(g))
    for _ in range(60):
        m = rand_mat(ctx, 3, rng)
        g = rand_invertible(ctx, 3, rng)
        assert canon3(m) == canon3(m.conjugate_by(g))


def test_canon3_equality_matches_is_similar(rng):
    ctx = ring_ctx("z", 2, 2)
    for _ in range(100):
        a, b = rand_mat(ctx, 3, rng), rand_mat(ctx, 3, rng)
        assert (canon3(a) == canon3(b)) == is_similar(a, b)[0]


def test_canon3_json_shape():
    ctx = ring_ctx("z", 2, 2)
    j = canon3(j_matrix(ctx, 0, 0)).to_json()
    assert j["ring"] == "z:2:2" and j["j"] == 0
    assert j["body"]["kind"] == "hard" and "witness" in j
    j = canon3(scalar(ctx, 3, 2)).to_json()
    assert j["body"] == {"kind": "scalar"}


# ----------------------------------------------------------------------
# centralizer shapes


def test_centralizer_shape_case_split():
    ctx = ring_ctx("z", 2, 2)
    # slot and both entries at full valuation: the two-unit case, dim 5i-2
    assert centralizer_shape(ep(ctx, 2, 0, 0, 2, 0)) == CentralizerShape(2, 8)
    assert centralizer_shape(ep(ctx, 2, 0, 0, 2, 0)).order(2) == 256
    # val(b) minimal: still the two-unit case
    assert centralizer_shape(ep(ctx, 1, 0, 2, 0, 0)).order(2) == 64
    # val(a) < min(m, val(b)): the one-unit case
    assert centralizer_shape(ep(ctx, 2, 2, 0, 0, 0)).order(2) == 128


def test_centralizer_shape_matches_exact_order_on_every_hard_rep():
    for desc in [("z", 2, 1), ("z", 2, 2), ("z", 3, 1), ("z", 3, 2)]:
        ctx = ring_ctx(*desc)
        for h in hard_family(ctx):
            predicted = centralizer_shape(h).order(ctx.q)
            assert predicted == centralizer_order(h.rebuild())
