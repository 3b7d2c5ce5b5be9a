"""Exact integer linear algebra: Smith normal form and abelian invariants.

Everything here runs on arbitrary-precision Python ints.  The matrices in
this project are small (at most ~150x150, from subdivided cube complexes),
so the implementation favours auditability over asymptotics: classical
row/column reduction with the smallest-pivot rule, and every Smith normal
form carries unimodular transformation certificates that are re-verified by
multiplication before the result is returned.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(data) -> "IntegerMatrix":
        rows = [tuple(int(x) for x in row) for row in data]
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return IntegerMatrix(r, c, tuple(rows))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntegerMatrix":
        return IntegerMatrix(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def mul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.entries)) if other.entries and other.cols else [()] * other.cols
        out = []
        for row in self.entries:
            out.append(tuple(sum(a * b for a, b in zip(row, col)) for col in ot))
        if not out and self.rows:
            out = [()] * self.rows
        return IntegerMatrix(self.rows, other.cols, tuple(out))

    def transpose(self) -> "IntegerMatrix":
        if self.rows == 0 or self.cols == 0:
            return IntegerMatrix(self.cols, self.rows, tuple(() for _ in range(self.cols)))
        return IntegerMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


def _transpose_lists(m: list[list[int]], rows: int, cols: int) -> list[list[int]]:
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


@dataclass(frozen=True)
class SmithNormalForm:
    """SNF of a matrix m: u.mul(m).mul(v) is diagonal with the invariant
    factors (positive, each dividing the next) in the leading positions.

    u_inv and v_inv are exact integer inverses of u and v, which certifies
    that both transformations are unimodular.
    """

    matrix: IntegerMatrix
    invariants: tuple[int, ...]
    u: IntegerMatrix
    v: IntegerMatrix
    u_inv: IntegerMatrix
    v_inv: IntegerMatrix

    def diagonal(self) -> IntegerMatrix:
        m = self.matrix
        d = [[0] * m.cols for _ in range(m.rows)]
        for k, val in enumerate(self.invariants):
            d[k][k] = val
        return IntegerMatrix.from_rows(d) if m.rows else IntegerMatrix(0, m.cols, ())

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def rank_mod(self, p: int) -> int:
        return sum(1 for d in self.invariants if d % p != 0)


def _pivot(a, k, rows, cols):
    best = None
    for i in range(k, rows):
        ai = a[i]
        for j in range(k, cols):
            x = ai[j]
            if x != 0:
                mag = x if x > 0 else -x
                if best is None or mag < best[0]:
                    best = (mag, i, j)
                    if mag == 1:
                        return best
    return best


def smith_normal_form(m: IntegerMatrix) -> SmithNormalForm:
    """Diagonalise m over Z by unimodular row and column operations.

    Pivot rule: smallest nonzero magnitude in the remaining submatrix, ties
    broken by position, so the computation is deterministic.
    """
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    uinv = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    vinv = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in uinv:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, q):
        # row i += q * row j
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]
        for r in uinv:
            r[j] -= q * r[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in uinv:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def col_add(i, j, q):
        # col i += q * col j
        for r in a:
            r[i] += q * r[j]
        for r in v:
            r[i] += q * r[j]
        vinv[j] = [x - q * y for x, y in zip(vinv[j], vinv[i])]

    k = 0
    limit = min(rows, cols)
    while k < limit:
        found = _pivot(a, k, rows, cols)
        if found is None:
            break
        _, pi, pj = found
        if pi != k:
            row_swap(k, pi)
        if pj != k:
            col_swap(k, pj)
        while True:
            dirty = False
            for i in range(k + 1, rows):
                if a[i][k] != 0:
                    q = a[i][k] // a[k][k]
                    if q:
                        row_add(i, k, -q)
                    if a[i][k] != 0:
                        row_swap(k, i)
                        dirty = True
            for j in range(k + 1, cols):
                if a[k][j] != 0:
                    q = a[k][j] // a[k][k]
                    if q:
                        col_add(j, k, -q)
                    if a[k][j] != 0:
                        col_swap(k, j)
                        dirty = True
            if not dirty and all(a[i][k] == 0 for i in range(k + 1, rows)) \
                    and all(a[k][j] == 0 for j in range(k + 1, cols)):
                break
        # enforce divisibility of later diagonal entries by a[k][k]
        offender = None
        for l in range(k + 1, limit):
            if a[l][l] % a[k][k] != 0:
                offender = l
                break
        if offender is not None:
            col_add(k, offender, 1)
            continue
        if a[k][k] < 0:
            row_neg(k)
        k += 1

    invariants = tuple(a[i][i] for i in range(limit) if a[i][i] != 0)
    result = SmithNormalForm(
        matrix=m,
        invariants=invariants,
        u=IntegerMatrix.from_rows(u) if rows else IntegerMatrix(0, 0, ()),
        v=IntegerMatrix.from_rows(v) if cols else IntegerMatrix(0, 0, ()),
        u_inv=IntegerMatrix.from_rows(uinv) if rows else IntegerMatrix(0, 0, ()),
        v_inv=IntegerMatrix.from_rows(vinv) if cols else IntegerMatrix(0, 0, ()),
    )
    _verify_certificate(result)
    return result


def _verify_certificate(s: SmithNormalForm) -> None:
    m = s.matrix
    if m.rows and m.cols:
        if s.u.mul(m).mul(s.v).entries != s.diagonal().entries:
            raise AssertionError("SNF certificate failed: u*m*v != diagonal")
    if m.rows:
        if s.u.mul(s.u_inv).entries != IntegerMatrix.identity(m.rows).entries:
            raise AssertionError("SNF certificate failed: u not unimodular")
    if m.cols:
        if s.v.mul(s.v_inv).entries != IntegerMatrix.identity(m.cols).entries:
            raise AssertionError("SNF certificate failed: v not unimodular")
    for d1, d2 in zip(s.invariants, s.invariants[1:]):
        if d1 <= 0 or d2 % d1 != 0:
            raise AssertionError("SNF invariant factors not a divisibility chain")


@dataclass(frozen=True)
class AbelianInvariants:
    """A finitely generated abelian group Z^rank + Z/d1 + ... with d1|d2|..."""

    rank: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


def h1_of_chain_complex(d2: IntegerMatrix, d1: IntegerMatrix) -> AbelianInvariants:
    """First homology ker(d1)/im(d2) of a chain complex of free Z-modules.

    d1 maps 1-chains to 0-chains (shape V x E) and d2 maps 2-chains to
    1-chains (shape E x F); requires d1 * d2 = 0.
    """
    if d1.cols != d2.rows:
        raise ValueError("chain complex shape mismatch")
    if not d1.mul(d2).is_zero():
        raise ValueError("not a chain complex: d1 * d2 != 0")
    n = d1.cols
    snf1 = smith_normal_form(d1)
    r1 = snf1.rank
    # Columns r1..n-1 of v span ker(d1); rewrite im(d2) in that basis.
    y = snf1.v_inv.mul(d2)
    for i in range(r1):
        if any(x != 0 for x in y.entries[i]):
            raise AssertionError("im(d2) not contained in ker(d1)")
    w = IntegerMatrix(n - r1, d2.cols, y.entries[r1:])
    snf_w = smith_normal_form(w)
    torsion = tuple(d for d in snf_w.invariants if d > 1)
    rank = (n - r1) - snf_w.rank
    return AbelianInvariants(rank=rank, torsion=torsion)


def h1_with_coefficients(d2: IntegerMatrix, d1: IntegerMatrix, p: int) -> int:
    """Dimension of first homology with coefficients in the field Z/p."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    if d1.cols != d2.rows:
        raise ValueError("chain complex shape mismatch")
    if not d1.mul(d2).is_zero():
        raise ValueError("not a chain complex: d1 * d2 != 0")
    rank1 = smith_normal_form(d1).rank_mod(p)
    rank2 = smith_normal_form(d2).rank_mod(p)
    return (d1.cols - rank1) - rank2


def mod_p_dimension(h1: AbelianInvariants, p: int) -> int:
    """Universal-coefficients dimension of H1 with Z/p coefficients.

    H0 of our complexes is free, so the Tor term vanishes and the dimension
    is rank + #{torsion factors divisible by p}.
    """
    return h1.rank + sum(1 for d in h1.torsion if d % p == 0)
