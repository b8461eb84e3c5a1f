"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding.  Matrices are small (at most a few
dozen rows), which keeps the textbook algorithms fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction


class LatticeVector(tuple):
    """Immutable integer vector with elementwise arithmetic.

    Behaves like a tuple for hashing, ordering and equality, so plain
    tuples and lattice vectors can be mixed freely in sets.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable[int]):
        vals = tuple(int(c) for c in coords)
        return super().__new__(cls, vals)

    def __add__(self, other):
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return LatticeVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return LatticeVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return LatticeVector(-a for a in self)

    def __mul__(self, k: int):
        return LatticeVector(k * a for a in self)

    __rmul__ = __mul__

    def dot(self, other) -> int:
        return sum(a * b for a, b in zip(self, other))

    @property
    def content(self) -> int:
        g = 0
        for a in self:
            g = gcd(g, a)
        return g

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    def primitive(self) -> "LatticeVector":
        g = self.content
        if g == 0:
            raise ValueError("zero vector has no primitive direction")
        return LatticeVector(a // g for a in self)

    def __repr__(self):
        return f"LatticeVector({tuple(self)!r})"


def det2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def perp(v: Sequence[int]) -> LatticeVector:
    """Rotate a 2D vector by +90 degrees."""
    return LatticeVector((-v[1], v[0]))


def primitive(v: Sequence[int]) -> LatticeVector:
    return LatticeVector(v).primitive()


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class IntMatrix:
    """Dense integer matrix stored as a tuple of row tuples."""

    __slots__ = ("_rows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        if isinstance(rows, IntMatrix):
            ncols, rows = rows.ncols, rows._rows
        self._rows = tuple(tuple(int(x) for x in r) for r in rows)
        if self._rows:
            widths = {len(r) for r in self._rows}
            if len(widths) != 1:
                raise ValueError("ragged matrix")
            self.ncols = widths.pop()
        else:
            self.ncols = 0 if ncols is None else ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._rows), ncols=self.nrows) if self._rows else IntMatrix([], 0)

    T = property(transpose)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.transpose().rows()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
            ncols=other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"


def _as_lists(A) -> list[list[int]]:
    if isinstance(A, IntMatrix):
        return A.tolist()
    return [[int(x) for x in r] for r in A]


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ A @ V == S``.

    ``S`` is diagonal with nonnegative entries ``d_1 | d_2 | ...`` and
    ``U``, ``V`` are unimodular.
    """
    S = _as_lists(A)
    m = len(S)
    n = len(S[0]) if m else (A.ncols if isinstance(A, IntMatrix) else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in S:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero pivot in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % S[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return IntMatrix(U, m), IntMatrix(S, n), IntMatrix(V, n)


def elementary_divisors(A) -> list[int]:
    _, S, _ = smith_normal_form(A)
    return [S[i, i] for i in range(min(S.shape)) if S[i, i]]


def hermite_normal_form(A) -> IntMatrix:
    """Row-style Hermite normal form with zero rows dropped.

    Two integer matrices have the same row lattice iff their HNFs agree.
    """
    H = _as_lists(A)
    ncols = len(H[0]) if H else (A.ncols if isinstance(A, IntMatrix) else 0)
    r = 0
    for c in range(ncols):
        rows = [i for i in range(r, len(H)) if H[i][c]]
        if not rows:
            continue
        while True:
            rows = [i for i in range(r, len(H)) if H[i][c]]
            piv = min(rows, key=lambda i: abs(H[i][c]))
            H[r], H[piv] = H[piv], H[r]
            done = True
            for i in range(r + 1, len(H)):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
        r += 1
        if r == len(H):
            break
    return IntMatrix([row for row in H[:r]], ncols)


def same_row_lattice(A, B) -> bool:
    return hermite_normal_form(A) == hermite_normal_form(B)


def integer_kernel(A) -> IntMatrix:
    """Rows form a basis of the saturated lattice ``{x : A x = 0}``."""
    rows = _as_lists(A)
    n = len(rows[0]) if rows else A.ncols
    _, S, V = smith_normal_form(rows)
    rank = sum(1 for i in range(min(S.shape)) if S[i, i])
    return IntMatrix([V.col(j) for j in range(rank, n)], n)


def rational_rank(A) -> int:
    return len(elementary_divisors(A))


def determinant(M: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix by fraction-free-ish elimination."""
    A = [[Fraction(x) for x in r] for r in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square system ``M x = b`` exactly; raises on singular ``M``."""
    n = len(M)
    A = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(M, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [a / piv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * bb for a, bb in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    cols = [solve(M, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(r, c)) for c in Bt] for r in A]


def matvec(A, v) -> list:
    return [sum(a * b for a, b in zip(r, v)) for r in A]


def bilinear(F, u, v):
    """``u^T F v``."""
    return sum(ui * sum(f * vj for f, vj in zip(row, v)) for ui, row in zip(u, F))


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination


@dataclass(frozen=True)
class Ineq:
    """The rational half-space ``coeffs . x <= bound``."""

    coeffs: tuple[Fraction, ...]
    bound: Fraction

    @classmethod
    def le(cls, coeffs, bound) -> "Ineq":
        return cls(tuple(Fraction(c) for c in coeffs), Fraction(bound))

    @classmethod
    def ge(cls, coeffs, bound) -> "Ineq":
        return cls(tuple(-Fraction(c) for c in coeffs), -Fraction(bound))

    @property
    def is_trivial(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_contradiction(self) -> bool:
        return self.is_trivial and self.bound < 0

    def holds(self, x) -> bool:
        return sum(c * xi for c, xi in zip(self.coeffs, x)) <= self.bound

    def normalized(self) -> "Ineq":
        if self.is_trivial:
            return Ineq(self.coeffs, Fraction(-1) if self.bound < 0 else Fraction(0))
        s = next(abs(c) for c in self.coeffs if c)
        return Ineq(tuple(c / s for c in self.coeffs), self.bound / s)


def _dedupe(ineqs: Iterable[Ineq]) -> list[Ineq]:
    # keep only the tightest bound per normalized direction
    best: dict[tuple, Fraction] = {}
    contradiction = None
    for q in ineqs:
        q = q.normalized()
        if q.is_trivial:
            if q.is_contradiction:
                contradiction = q
            continue
        if q.coeffs not in best or q.bound < best[q.coeffs]:
            best[q.coeffs] = q.bound
    out = [Ineq(c, b) for c, b in best.items()]
    if contradiction is not None:
        out.append(contradiction)
    return out


def fourier_motzkin(ineqs: Sequence[Ineq], eliminate: int) -> list[Ineq]:
    """Project the polyhedron onto the coordinates other than ``eliminate``.

    The eliminated coordinate keeps a zero coefficient so indices stay put.
    A contradictory system yields the single inequality ``0 <= -1``.
    """
    pos, neg, rest = [], [], []
    for q in ineqs:
        c = q.coeffs[eliminate]
        (pos if c > 0 else neg if c < 0 else rest).append(q)
    out = list(rest)
    for p in pos:
        for n in neg:
            a, b = p.coeffs[eliminate], -n.coeffs[eliminate]
            coeffs = tuple(b * x + a * y for x, y in zip(p.coeffs, n.coeffs))
            coeffs = tuple(Fraction(0) if i == eliminate else c for i, c in enumerate(coeffs))
            out.append(Ineq(coeffs, b * p.bound + a * n.bound))
    out = _dedupe(out)
    if any(q.is_contradiction for q in out):
        return [Ineq(tuple(Fraction(0) for _ in ineqs[0].coeffs), Fraction(-1))]
    return out


def _int_row(q: Ineq) -> tuple[int, ...] | None:
    """``q`` as a primitive integer row ``(c_1, ..., c_n, bound)``; ``None`` if trivially true."""
    den = 1
    for x in q.coeffs + (q.bound,):
        den = den * x.denominator // gcd(den, x.denominator)
    row = [int(x * den) for x in q.coeffs + (q.bound,)]
    return _prim_row(row)


def _prim_row(row) -> tuple[int, ...] | None:
    g = 0
    for x in row[:-1]:
        g = gcd(g, x)
    if g == 0:
        return None if row[-1] >= 0 else (0,) * (len(row) - 1) + (-1,)
    return tuple(x // g for x in row[:-1]) + (Fraction(row[-1], g),)


def _int_dedupe(rows) -> list[tuple]:
    best: dict[tuple, Fraction] = {}
    for r in rows:
        if r is None:
            continue
        if r[-1] == -1 and not any(r[:-1]):
            return [r]
        key = r[:-1]
        if key not in best or r[-1] < best[key]:
            best[key] = r[-1]
    return [k + (b,) for k, b in best.items()]


def fm_feasible(ineqs: Sequence[Ineq]) -> bool:
    """Exact feasibility of a system of non-strict rational inequalities.

    Works on rows with coprime integer coefficients and eliminates the
    variable with the fewest generated pairs first.
    """
    if not ineqs:
        return True
    system = _int_dedupe(_int_row(q) for q in ineqs)
    n = len(ineqs[0].coeffs)
    remaining = set(range(n))
    while remaining and system:
        if len(system) == 1 and not any(system[0][:-1]):
            return False

        def cost(k):
            pos = sum(1 for q in system if q[k] > 0)
            neg = sum(1 for q in system if q[k] < 0)
            return pos * neg - pos - neg

        k = min(sorted(remaining), key=cost)
        remaining.discard(k)
        pos = [q for q in system if q[k] > 0]
        neg = [q for q in system if q[k] < 0]
        out = [q for q in system if q[k] == 0]
        for p in pos:
            for m in neg:
                a, b = p[k], -m[k]
                row = [b * x + a * y for x, y in zip(p[:-1], m[:-1])]
                bound = b * p[-1] + a * m[-1]
                g = 0
                for x in row:
                    g = gcd(g, x)
                if g == 0:
                    if bound < 0:
                        return False
                    continue
                out.append(tuple(x // g for x in row) + (bound / g,))
        system = _int_dedupe(out)
    return not any(not any(q[:-1]) and q[-1] < 0 for q in system)
