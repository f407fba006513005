"""Exact linear algebra over the integers and over Z/m.

Everything downstream (module presentations, homotopy searches, purity
certificates) bottoms out in three primitives implemented here: Smith
normal form with recorded change of basis, exact linear solving, and
kernel computation.  Entries are plain Python ints, so intermediate
values never overflow.  Over Z/m all arithmetic is carried out on
canonical residues 0..m-1; elimination never leaves that range.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional


class WorkbenchError(Exception):
    """Base class for errors raised by the workbench."""


class InputError(WorkbenchError):
    """Malformed input: dimension mismatch, bad ring data, bad JSON."""


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class Ring:
    """The ring of integers (modulus None) or Z/m for m >= 2.

    Elements are represented canonically: arbitrary ints over Z,
    residues in 0..m-1 over Z/m.
    """

    modulus: Optional[int] = None

    def __post_init__(self) -> None:
        if self.modulus is not None and self.modulus < 2:
            raise InputError("modulus must be at least 2")

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    def reduce(self, x: int) -> int:
        if self.modulus is None:
            return x
        return x % self.modulus

    def reduce_matrix(self, a: "IntMatrix") -> "IntMatrix":
        if self.modulus is None:
            return a
        m = self.modulus
        return IntMatrix(a.rows, a.cols,
                         tuple(tuple(x % m for x in row) for row in a.data))

    def abs(self, x: int) -> int:
        """Pivot size: |x| over Z, distance to 0 mod m over Z/m."""
        if self.modulus is None:
            return abs(x)
        x %= self.modulus
        return min(x, self.modulus - x)

    def __str__(self) -> str:
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


ZZ = Ring()


def Zmod(m: int) -> Ring:
    return Ring(m)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; data is a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise InputError("matrix shape does not match data")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]]) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        r = len(data)
        c = len(data[0]) if r else 0
        return IntMatrix(r, c, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        row = (0,) * cols
        return IntMatrix(rows, cols, tuple(row for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n))
                                     for i in range(n)))

    @staticmethod
    def diagonal(entries: Iterable[int], rows: int, cols: int) -> "IntMatrix":
        ents = list(entries)
        return IntMatrix(rows, cols,
                         tuple(tuple(ents[i] if i == j and i < len(ents) else 0
                                     for j in range(cols)) for i in range(rows)))

    @staticmethod
    def column_vector(entries: Iterable[int]) -> "IntMatrix":
        ents = [int(x) for x in entries]
        return IntMatrix(len(ents), 1, tuple((x,) for x in ents))

    # -- accessors ----------------------------------------------------

    def at(self, i: int, j: int) -> int:
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def to_lists(self) -> list:
        return [list(row) for row in self.data]

    def max_abs(self) -> int:
        return max((abs(x) for row in self.data for x in row), default=0)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("matrix addition shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.data, other.data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("matrix subtraction shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a - b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.data, other.data)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(-a for a in row) for row in self.data))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(c * a for a in row) for row in self.data))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputError("matrix product shape mismatch")
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                    for row in self.data)
        if not self.rows:
            out = ()
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data))
                         if self.rows else tuple(() for _ in range(self.cols)))

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        """Kronecker product; (i1*other.rows+i2, j1*other.cols+j2) entry
        is self[i1,j1] * other[i2,j2]."""
        rows = []
        for r1 in self.data:
            for r2 in other.data:
                rows.append(tuple(a * b for a in r1 for b in r2))
        return IntMatrix(self.rows * other.rows, self.cols * other.cols, tuple(rows))


def hstack(*mats: IntMatrix) -> IntMatrix:
    mats = [m for m in mats]
    if not mats:
        raise InputError("hstack needs at least one matrix")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise InputError("hstack row mismatch")
    data = tuple(tuple(x for m in mats for x in m.data[i]) for i in range(rows))
    return IntMatrix(rows, sum(m.cols for m in mats), data)


def vstack(*mats: IntMatrix) -> IntMatrix:
    mats = [m for m in mats]
    if not mats:
        raise InputError("vstack needs at least one matrix")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise InputError("vstack column mismatch")
    data = tuple(row for m in mats for row in m.data)
    return IntMatrix(sum(m.rows for m in mats), cols, data)


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = list(m.data[i])
        r0 += m.rows
        c0 += m.cols
    return IntMatrix.from_rows(out) if rows else IntMatrix(0, cols, ())


def from_columns(cols: Iterable[Iterable[int]], height: int) -> IntMatrix:
    cols = [list(c) for c in cols]
    for c in cols:
        if len(c) != height:
            raise InputError("column height mismatch")
    data = tuple(tuple(c[i] for c in cols) for i in range(height))
    return IntMatrix(height, len(cols), data)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == D with U, V invertible over the ring and D diagonal.

    The diagonal entries form a divisibility chain d1 | d2 | ...; over Z
    they are nonnegative, over Z/m they are divisors of m (0 standing
    for the class of m).  u_inv and v_inv are the recorded inverses.
    """

    ring: Ring
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    def diagonal(self) -> list:
        k = min(self.d.rows, self.d.cols)
        return [self.d.at(i, i) for i in range(k)]


def _unit_scaling_mod(x: int, m: int) -> tuple:
    """A unit u mod m with u*x = gcd(x, m) mod m; returns (u, gcd)."""
    g = gcd(x, m)
    xp, mp = x // g, m // g
    u0 = pow(xp, -1, mp) if mp > 1 else 1
    for k in range(m):
        u = (u0 + k * mp) % m
        if u and gcd(u, m) == 1:
            return u, g
    raise AssertionError("no unit multiplier found")  # unreachable


@lru_cache(maxsize=8192)
def smith_normal_form(a_mat: IntMatrix, ring: Ring) -> SmithDecomposition:
    """Smith normal form with change of basis over Z or Z/m.

    Pivot selection is the smallest nonzero entry in ring size with
    first-occurrence tie-break (row-major scan), which makes the output
    deterministic.  Over Z/m each pivot is scaled by a unit so that it
    equals gcd(pivot, m); the final diagonal then consists of divisors
    of m and the divisibility chain survives reduction.  The chain
    itself is enforced after diagonalization by 2x2 transforms on the
    diagonal, not by per-pivot sweeps of the remaining block.

    Matrices and decompositions are immutable, so results are memoized;
    solving and kernel extraction hit the same differentials over and
    over and the cache turns those repeats into lookups.
    """
    r, c = a_mat.rows, a_mat.cols
    m = ring.modulus
    a = [list(row) for row in (ring.reduce_matrix(a_mat)).data]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    ui = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    vi = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def red(x: int) -> int:
        return x if m is None else x % m

    # The elementary operations below branch on the ring outside their
    # loops and skip zero source entries; the matrices coming out of
    # vectorized map equations are sparse enough that this matters.

    def row_add(dst: int, src: int, q: int) -> None:
        # row_dst -= q * row_src, tracked in u and ui
        ar, asrc = a[dst], a[src]
        ur, usrc = u[dst], u[src]
        if m is None:
            for j in range(c):
                x = asrc[j]
                if x:
                    ar[j] -= q * x
            for j in range(r):
                x = usrc[j]
                if x:
                    ur[j] -= q * x
            for i in range(r):
                x = ui[i][dst]
                if x:
                    ui[i][src] += q * x
        else:
            for j in range(c):
                x = asrc[j]
                if x:
                    ar[j] = (ar[j] - q * x) % m
            for j in range(r):
                x = usrc[j]
                if x:
                    ur[j] = (ur[j] - q * x) % m
            for i in range(r):
                x = ui[i][dst]
                if x:
                    ui[i][src] = (ui[i][src] + q * x) % m

    def col_add(dst: int, src: int, q: int) -> None:
        # col_dst -= q * col_src, tracked in v and vi
        vr, vdst = vi[src], vi[dst]
        if m is None:
            for i in range(r):
                x = a[i][src]
                if x:
                    a[i][dst] -= q * x
            for i in range(c):
                x = v[i][src]
                if x:
                    v[i][dst] -= q * x
            for j in range(c):
                x = vdst[j]
                if x:
                    vr[j] += q * x
        else:
            for i in range(r):
                x = a[i][src]
                if x:
                    a[i][dst] = (a[i][dst] - q * x) % m
            for i in range(c):
                x = v[i][src]
                if x:
                    v[i][dst] = (v[i][dst] - q * x) % m
            for j in range(c):
                x = vdst[j]
                if x:
                    vr[j] = (vr[j] + q * x) % m

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for k in range(r):
            ui[k][i], ui[k][j] = ui[k][j], ui[k][i]

    def col_swap(i: int, j: int) -> None:
        for k in range(r):
            a[k][i], a[k][j] = a[k][j], a[k][i]
        for k in range(c):
            v[k][i], v[k][j] = v[k][j], v[k][i]
        vi[i], vi[j] = vi[j], vi[i]

    def row_scale(i: int, unit: int, unit_inv: int) -> None:
        a[i] = [red(unit * x) for x in a[i]]
        u[i] = [red(unit * x) for x in u[i]]
        for k in range(r):
            ui[k][i] = red(ui[k][i] * unit_inv)

    t = 0
    limit = min(r, c)
    while t < limit:
        # locate pivot: smallest ring size, first occurrence.  Entries
        # of ring size 1 cannot be beaten and rows below t are zero to
        # the left of column t, so list.index finds them at C speed
        pi = pj = -1
        unit_lo = 1
        unit_hi = -1 if m is None else m - 1
        for i in range(t, r):
            row_i = a[i]
            try:
                j1 = row_i.index(unit_lo)
            except ValueError:
                j1 = -1
            j2 = -1
            if unit_hi != unit_lo:
                try:
                    j2 = row_i.index(unit_hi)
                except ValueError:
                    j2 = -1
            if j1 >= 0 and (j2 < 0 or j1 < j2):
                pi, pj = i, j1
                break
            if j2 >= 0:
                pi, pj = i, j2
                break
        if pi < 0:
            # no unit entry anywhere; fall back to the full scan, where
            # a key of 2 is now the best possible and stops it early
            best_key = None
            for i in range(t, r):
                row_i = a[i]
                for j in range(t, c):
                    x = row_i[j]
                    if x:
                        key = abs(x) if m is None else min(x, m - x)
                        if best_key is None or key < best_key:
                            best_key, pi, pj = key, i, j
                            if key == 2:
                                break
                if best_key == 2:
                    break
            if best_key is None:
                break
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        if m is None:
            if a[t][t] < 0:
                row_scale(t, -1, -1)
        else:
            unit, _ = _unit_scaling_mod(a[t][t], m)
            if unit != 1:
                row_scale(t, unit, pow(unit, -1, m))
        p = a[t][t]

        dirty = False
        for i in range(t + 1, r):
            x = a[i][t]
            if x:
                q, rem = divmod(x, p)
                row_add(i, t, q)
                if rem:
                    dirty = True
        if dirty:
            continue
        for j in range(t + 1, c):
            x = a[t][j]
            if x:
                q, rem = divmod(x, p)
                col_add(j, t, q)
                if rem:
                    dirty = True
        if dirty:
            continue
        t += 1

    # Divisibility is repaired afterwards on the diagonal alone, which
    # avoids rescanning the remaining block after every pivot.

    def fix_pair(i: int, j: int) -> None:
        # 2x2 transform sending diag(d_i, d_j) to diag(gcd, lcm); rows
        # and columns i, j are diagonal on entry and on exit
        col_add(i, j, -1)
        while a[j][i]:
            q = a[i][i] // a[j][i]
            row_add(i, j, q)
            row_swap(i, j)
        g = a[i][i]
        x = a[i][j]
        if x:
            col_add(j, i, x // g)
        if m is None:
            if a[j][j] < 0:
                row_scale(j, -1, -1)
        elif a[j][j]:
            unit, _ = _unit_scaling_mod(a[j][j], m)
            if unit != 1:
                row_scale(j, unit, pow(unit, -1, m))

    for i in range(t):
        di = a[i][i]
        for j in range(i + 1, t):
            dj = a[j][j]
            if (di == 0 and dj != 0) or (di != 0 and dj % di):
                fix_pair(i, j)
                di = a[i][i]

    to_mat = lambda rows_: IntMatrix.from_rows(rows_) if rows_ else IntMatrix(0, 0, ())
    d = IntMatrix(r, c, tuple(tuple(a[i][j] for j in range(c)) for i in range(r)))
    return SmithDecomposition(
        ring,
        IntMatrix(r, r, tuple(tuple(row) for row in u)),
        d,
        IntMatrix(c, c, tuple(tuple(row) for row in v)),
        IntMatrix(r, r, tuple(tuple(row) for row in ui)),
        IntMatrix(c, c, tuple(tuple(row) for row in vi)),
    )


# ---------------------------------------------------------------------------
# solving


def solve_linear(a: IntMatrix, b: IntMatrix, ring: Ring) -> Optional[IntMatrix]:
    """An exact solution X of A @ X = B over the ring, or None.

    The decision goes through the Smith form: with U A V = D the system
    becomes D Y = U B, which is solvable iff each diagonal congruence
    d_i * y = (UB)_i is, and then X = V Y.
    """
    if a.rows != b.rows:
        raise InputError("solve_linear: row mismatch")
    m = ring.modulus
    if a.cols == 0:
        return IntMatrix.zeros(0, b.cols) if ring.reduce_matrix(b).is_zero() else None
    if a.rows == 0:
        return IntMatrix.zeros(a.cols, b.cols)
    snf = smith_normal_form(a, ring)
    cmat = ring.reduce_matrix(snf.u @ b)
    k = min(a.rows, a.cols)
    y = [[0] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        d = snf.d.at(i, i) if i < k else 0
        if m is None:
            if d == 0:
                if any(cmat.at(i, j) for j in range(b.cols)):
                    return None
            else:
                for j in range(b.cols):
                    q, rem = divmod(cmat.at(i, j), d)
                    if rem:
                        return None
                    y[i][j] = q
        else:
            dd = d if d else m
            for j in range(b.cols):
                q, rem = divmod(cmat.at(i, j), dd)
                if rem:
                    return None
                if d:
                    y[i][j] = q
    return ring.reduce_matrix(snf.v @ IntMatrix.from_rows(y))


def kernel_basis(a: IntMatrix, ring: Ring) -> IntMatrix:
    """Columns generating {x : A x = 0} over the ring.

    Over Z the columns are a lattice basis of the kernel (which is
    automatically saturated); over Z/m they generate the kernel
    submodule, with the congruence freedom (m/d_i) per diagonal entry.
    """
    if a.cols == 0:
        return IntMatrix.zeros(0, 0)
    if a.rows == 0:
        return IntMatrix.identity(a.cols)
    m = ring.modulus
    snf = smith_normal_form(a, ring)
    k = min(a.rows, a.cols)
    cols = []
    for j in range(a.cols):
        if j < k:
            d = snf.d.at(j, j)
            if m is None:
                if d == 0:
                    cols.append(snf.v.column(j))
            else:
                dd = d if d else m
                coeff = m // dd
                if coeff % m:
                    cols.append(tuple(ring.reduce(coeff * x) for x in snf.v.column(j)))
        else:
            cols.append(snf.v.column(j))
    return from_columns(cols, a.cols)


def invert_unimodular(a: IntMatrix, ring: Ring) -> IntMatrix:
    """Inverse of a matrix invertible over the ring; raises if singular."""
    if a.rows != a.cols:
        raise InputError("only square matrices can be inverted")
    inv = solve_linear(a, IntMatrix.identity(a.rows), ring)
    if inv is None:
        raise InputError("matrix is not invertible over the ring")
    return inv


# ---------------------------------------------------------------------------
# simultaneous linear systems in matrix unknowns


class LinearSystem:
    """Joint exact solver for equations sum_k L_k X R_k = C.

    Unknowns are matrices; each equation is a list of terms
    (L, key, R) plus a right-hand side.  Everything is vectorized
    column-major (vec(L X R) = (R^T kron L) vec X) into one call of
    solve_linear, so solvability is decided exactly over the ring.
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self._shapes: dict = {}
        self._order: list = []
        self._equations: list = []

    def add_unknown(self, key, rows: int, cols: int) -> None:
        if key in self._shapes:
            if self._shapes[key] != (rows, cols):
                raise InputError(f"unknown {key!r} redeclared with a new shape")
            return
        self._shapes[key] = (rows, cols)
        self._order.append(key)

    def add_equation(self, terms: list, rhs: IntMatrix) -> None:
        for left, key, right in terms:
            rows, cols = self._shapes[key]
            if left.cols != rows or right.rows != cols:
                raise InputError("equation term shape mismatch")
            if left.rows != rhs.rows or right.cols != rhs.cols:
                raise InputError("equation term does not match rhs shape")
        self._equations.append((list(terms), rhs))

    @staticmethod
    def _vec(mat: IntMatrix) -> list:
        out = []
        for j in range(mat.cols):
            for i in range(mat.rows):
                out.append(mat.at(i, j))
        return out

    @staticmethod
    def _unvec(entries: list, rows: int, cols: int) -> IntMatrix:
        data = [[0] * cols for _ in range(rows)]
        idx = 0
        for j in range(cols):
            for i in range(rows):
                data[i][j] = entries[idx]
                idx += 1
        return IntMatrix.from_rows(data) if rows else IntMatrix(0, cols, ())

    def solve(self) -> Optional[dict]:
        offsets = {}
        total = 0
        for key in self._order:
            offsets[key] = total
            rows, cols = self._shapes[key]
            total += rows * cols
        big_rows = []
        rhs_entries = []
        for terms, rhs in self._equations:
            height = rhs.rows * rhs.cols
            block = [[0] * total for _ in range(height)]
            for left, key, right in terms:
                coeff = right.transpose().kron(left)
                off = offsets[key]
                for i in range(height):
                    row = block[i]
                    crow = coeff.data[i]
                    for j in range(coeff.cols):
                        row[off + j] += crow[j]
            big_rows.extend(block)
            rhs_entries.extend(self._vec(rhs))
        if not big_rows:
            sol_entries = [0] * total
        else:
            big = IntMatrix.from_rows(big_rows) if big_rows else IntMatrix(0, total, ())
            rhs_mat = IntMatrix.column_vector(rhs_entries)
            sol = solve_linear(big, rhs_mat, self.ring)
            if sol is None:
                return None
            sol_entries = [sol.at(i, 0) for i in range(total)]
        out = {}
        for key in self._order:
            rows, cols = self._shapes[key]
            off = offsets[key]
            out[key] = self._unvec(sol_entries[off:off + rows * cols], rows, cols)
        return out
