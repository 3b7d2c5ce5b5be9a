"""Tests for exact Smith normal form and homology helpers.

The independent oracle here computes invariant factors from gcds of k x k
minors (d_1 * ... * d_k = gcd of all k x k minors), which shares no code
with the row/column reduction under test.
"""

import itertools
import math

import pytest

from cubecensus.algebra import (
    AbelianInvariants,
    IntegerMatrix,
    h1_of_chain_complex,
    h1_with_coefficients,
    mod_p_dimension,
    smith_normal_form,
)


def minor_gcd_invariants(m: IntegerMatrix) -> tuple[int, ...]:
    """Oracle: invariant factors via gcds of k x k minors (exponential in k,
    fine for the small matrices used in these tests)."""

    def det(rows):
        n = len(rows)
        if n == 0:
            return 1
        if n == 1:
            return rows[0][0]
        total = 0
        for j in range(n):
            if rows[0][j] == 0:
                continue
            sub = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * det(sub)
        return total

    entries = [list(r) for r in m.entries]
    prev = 1
    out = []
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for ri in itertools.combinations(range(m.rows), k):
            for ci in itertools.combinations(range(m.cols), k):
                sub = [[entries[i][j] for j in ci] for i in ri]
                g = math.gcd(g, det(sub))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


CASES = [
    [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    [[2, 4], [6, 8]],
    [[0, 0], [0, 0]],
    [[2, 4, 4], [-6, 6, 12], [10, 4, 16]],
    [[1, 2, 3], [4, 5, 6]],
    [[6], [10], [15]],
    [[2, 0], [0, 3], [0, 0]],
    [[12, 8, 6], [4, 2, 0], [0, 0, 5], [1, 1, 1]],
    [[0, 1], [1, 0]],
    [[3, 3, 3], [3, 3, 3]],
]


@pytest.mark.parametrize("rows", CASES)
def test_snf_matches_minor_gcd_oracle(rows):
    m = IntegerMatrix.from_rows(rows)
    assert smith_normal_form(m).invariants == minor_gcd_invariants(m)


def test_snf_examples():
    assert smith_normal_form(IntegerMatrix.identity(3)).invariants == (1, 1, 1)
    # gcd of entries 2, |det| = 8 forces (2, 4)
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 4], [6, 8]])).invariants == (2, 4)
    assert smith_normal_form(IntegerMatrix.zero(3, 4)).invariants == ()


@pytest.mark.parametrize("rows", CASES)
def test_snf_certificate(rows):
    m = IntegerMatrix.from_rows(rows)
    s = smith_normal_form(m)
    assert s.u.mul(m).mul(s.v).entries == s.diagonal().entries
    assert s.u.mul(s.u_inv).entries == IntegerMatrix.identity(m.rows).entries
    assert s.v.mul(s.v_inv).entries == IntegerMatrix.identity(m.cols).entries
    for a, b in zip(s.invariants, s.invariants[1:]):
        assert b % a == 0


@pytest.mark.parametrize("rows", CASES)
def test_snf_invariant_under_permutation_and_transpose(rows):
    m = IntegerMatrix.from_rows(rows)
    base = smith_normal_form(m).invariants
    flipped = IntegerMatrix.from_rows(list(reversed([list(reversed(r)) for r in m.entries])))
    assert smith_normal_form(flipped).invariants == base
    assert smith_normal_form(m.transpose()).invariants == base


def test_snf_large_entries_stay_exact():
    big = 10 ** 30
    m = IntegerMatrix.from_rows([[big, big + 2], [2, 4]])
    s = smith_normal_form(m)
    assert s.u.mul(m).mul(s.v).entries == s.diagonal().entries
    assert minor_gcd_invariants(m) == s.invariants


def test_h1_torus_cube_complex():
    # One vertex, three edges, three squares whose boundary words cancel:
    # both boundary maps vanish, so H1 is free of rank 3.
    d1 = IntegerMatrix.zero(1, 3)
    d2 = IntegerMatrix.zero(3, 3)
    assert h1_of_chain_complex(d2, d1) == AbelianInvariants(3, ())


def test_h1_klein_times_circle_style_complex():
    # One vertex, three edges; one square kills twice the second edge.
    d1 = IntegerMatrix.zero(1, 3)
    d2 = IntegerMatrix.from_rows([[0, 0, 0], [0, -2, 0], [0, 0, 0]])
    assert h1_of_chain_complex(d2, d1) == AbelianInvariants(2, (2,))


def test_h1_trivial_group():
    # Circle whose fundamental class is killed once: H1 = 0.
    d1 = IntegerMatrix.zero(1, 1)
    d2 = IntegerMatrix.from_rows([[1]])
    assert h1_of_chain_complex(d2, d1) == AbelianInvariants(0, ())


def test_h1_rejects_non_complex():
    d1 = IntegerMatrix.from_rows([[1, 0]])
    d2 = IntegerMatrix.from_rows([[1], [0]])
    with pytest.raises(ValueError):
        h1_of_chain_complex(d2, d1)


def test_h1_mod_p_agrees_with_universal_coefficients():
    d1 = IntegerMatrix.zero(1, 3)
    for d2_rows, expect_int in [
        ([[0, 0, 0], [0, 0, 0], [0, 0, 0]], AbelianInvariants(3, ())),
        ([[0, 0, 0], [0, -2, 0], [0, 0, 0]], AbelianInvariants(2, (2,))),
        ([[4, 0, 0], [0, 6, 0], [0, 0, 0]], AbelianInvariants(1, (2, 12))),
    ]:
        d2 = IntegerMatrix.from_rows(d2_rows)
        h1 = h1_of_chain_complex(d2, d1)
        assert h1 == expect_int
        for p in (2, 3, 5):
            assert h1_with_coefficients(d2, d1, p) == mod_p_dimension(h1, p)


def test_h1_mod_p_examples():
    d1 = IntegerMatrix.zero(1, 3)
    torus_d2 = IntegerMatrix.zero(3, 3)
    klein_d2 = IntegerMatrix.from_rows([[0, 0, 0], [0, -2, 0], [0, 0, 0]])
    assert h1_with_coefficients(torus_d2, d1, 2) == 3
    # rank-2 free part plus Z/2 also gives dimension 3 over Z/2
    assert h1_with_coefficients(klein_d2, d1, 2) == 3
    assert h1_with_coefficients(klein_d2, d1, 3) == 2


def test_abelian_invariants_rendering():
    assert str(AbelianInvariants(0, ())) == "0"
    assert str(AbelianInvariants(1, ())) == "Z"
    assert str(AbelianInvariants(3, ())) == "Z^3"
    assert str(AbelianInvariants(2, (2,))) == "Z^2 + Z/2"
    assert str(AbelianInvariants(0, (2, 4))) == "Z/2 + Z/4"
