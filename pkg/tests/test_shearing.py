from fractions import Fraction

import numpy as np
import pytest
import sympy

import helpers
from raagspace.blowup import build_blowup, salvetti
from raagspace.cubecomplex import Label
from raagspace.shearing import (ShearError, build_shear_system, decompose_shear, fiber_dimension, is_zero_sum,
                                shear_space_dims, twist_minimal_hyperplanes)

V = Label.vertex


def named(b, d):
    return {b.label_name(a): n for a, n in d.items()}


def test_twist_minimal_hyperplanes(s0, c4, bq):
    assert named(s0, shear_space_dims(s0)) == {"a": 1, "c": 1, "d": 0}
    assert named(salvetti(c4), shear_space_dims(salvetti(c4))) == {v: 0 for v in "abcd"}
    assert named(bq, shear_space_dims(bq)) == {"a": 1, "Q0": 1, "c": 1, "d": 0}
    assert V("b") not in twist_minimal_hyperplanes(bq)


def test_decompose(bq):
    q = Label.part(bq.family[0])
    assert decompose_shear(bq, "a", q, {"b": 0.3}) == ({"b": 0.3}, {})
    assert decompose_shear(bq, "d", q, {"b": 0.3}) == ({}, {"b": 0.3})
    assert decompose_shear(bq, "d", q, {"b": 0.0}) == ({}, {"b": 0.0})
    with pytest.raises(ShearError):
        decompose_shear(bq, "b", q, {"b": 0.3})
    with pytest.raises(ShearError):
        decompose_shear(bq, "a", q, {"c": 0.3})


def test_system_for_salvetti(s0):
    sys_ = build_shear_system(s0)
    assert [(a.value, w) for a, w in sys_.columns] == [("a", "b"), ("c", "b")]
    assert sys_.rows == [("a", "b"), ("c", "b")]
    assert sys_.matrix == [[1, 0], [0, 1]]
    assert sys_.fiber_dim == 0 and sys_.kernel_basis == []


def test_system_for_q_blowup(bq):
    sys_ = build_shear_system(bq)
    assert [(bq.label_name(a), w) for a, w in sys_.columns] == [("a", "b"), ("Q0", "b"), ("c", "b")]
    assert sys_.matrix == [[1, 1, 0], [0, 0, 1]]
    assert sys_.fiber_dim == 1
    (vec,) = sys_.kernel_basis
    assert vec[0] == -vec[1] != 0 and vec[2] == 0


def test_four_cycle_has_no_coordinates(c4):
    assert build_shear_system(salvetti(c4)).columns == []
    assert fiber_dimension(salvetti(c4)) == 0


def test_zero_sum_membership(bq, s0):
    q = Label.part(bq.family[0])
    assert is_zero_sum(bq, {})
    assert is_zero_sum(bq, {V("a"): {"b": 0.25}, q: {"b": -0.25}})
    assert not is_zero_sum(bq, {V("a"): {"b": 0.25}})
    assert not is_zero_sum(s0, {V("a"): {"b": 1e-6}})
    with pytest.raises(ShearError):
        is_zero_sum(bq, {V("b"): {"a": 1.0}})


def test_kernel_against_floating_point_oracle():
    for g in helpers.atlas_graphs(4):
        for fam in helpers.families(g, 1):
            b = build_blowup(g, fam)
            s = build_shear_system(b)
            m = np.array(s.matrix, dtype=float).reshape(len(s.rows), len(s.columns))
            rank = np.linalg.matrix_rank(m) if m.size else 0
            assert s.fiber_dim == len(s.columns) - rank
            assert len(s.kernel_basis) == s.fiber_dim
            for vec in s.kernel_basis:
                shear = {}
                for (a, w), x in zip(s.columns, vec):
                    shear.setdefault(a, {})[w] = float(x)
                assert is_zero_sum(b, shear, s)
            if s.kernel_basis:
                assert sympy.Matrix([[Fraction(x) for x in v] for v in s.kernel_basis]).rank() == s.fiber_dim


def test_columns_follow_characteristic_cycles():
    for g in helpers.atlas_graphs(4):
        for fam in helpers.families(g, 2):
            b = build_blowup(g, fam)
            s = build_shear_system(b)
            for r, (v, w) in enumerate(s.rows):
                crossed = set(b.characteristic_cycle(v).labels)
                for c, (a, u) in enumerate(s.columns):
                    assert s.matrix[r][c] == int(a in crossed and u == w)


def test_adding_a_partition_never_shrinks_fiber():
    for g in helpers.atlas_graphs(4):
        base = fiber_dimension(salvetti(g))
        for (p,) in (f for f in helpers.families(g, 1) if f):
            if any(not g.is_twist_dominant(v) and g.ul(v) for v in p.sing):
                assert fiber_dimension(build_blowup(g, [p])) >= base
