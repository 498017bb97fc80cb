"""Exact arithmetic over Q and Q(sqrt(d)), exact matrices, and rank kernels.

Every exact matrix lives in a single field: the rationals, or one quadratic
extension Q(sqrt(d)) with d square-free.  Elimination is plain Gaussian
elimination with exact zero tests; Python's ``Fraction`` keeps intermediates
reduced.  A float rank with an explicit decision margin sits alongside for
inputs that are only known numerically.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidFieldError, NumericError, ShapeError

Rational = Union[int, Fraction]


def is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _split_square(n: int) -> tuple[int, int]:
    """Write n = s**2 * r with r square-free; returns (s, r)."""
    s, r, k = 1, n, 2
    while k * k <= r:
        while r % (k * k) == 0:
            r //= k * k
            s *= k
        k += 1
    return s, r


@total_ordering
class ExactScalar:
    """The number a + b*sqrt(d) with a, b rational and d square-free (or 0)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 0):
        a, b, d = Fraction(a), Fraction(b), int(d)
        if d < 0:
            raise InvalidFieldError(f"negative radicand {d}")
        if d == 1:
            a, b, d = a + b, Fraction(0), 0
        if d and not is_squarefree(d):
            raise InvalidFieldError(f"radicand {d} is not square-free")
        if d == 0 and b != 0:
            raise InvalidFieldError("nonzero surd coefficient with d = 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def sqrt(cls, n: int) -> "ExactScalar":
        """Exact square root of a nonnegative integer, e.g. sqrt(12) = 2*sqrt(3)."""
        if n < 0:
            raise InvalidFieldError("square root of a negative integer")
        s, r = _split_square(int(n))
        if r == 1 or n == 0:
            return cls(s if n else 0)
        return cls(0, s, r)

    # field bookkeeping -------------------------------------------------
    @property
    def radicand(self) -> int:
        """The radicand actually in use (0 when the value is rational)."""
        return self.d if self.b != 0 else 0

    def is_rational(self) -> bool:
        return self.b == 0

    def _merge(self, other: "ExactScalar") -> int:
        r1, r2 = self.radicand, other.radicand
        if r1 and r2 and r1 != r2:
            raise InvalidFieldError(f"cannot combine sqrt({r1}) and sqrt({r2})")
        return r1 or r2 or self.d or other.d

    @staticmethod
    def _coerce(x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar(x)
        return NotImplemented

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._merge(other)
        return ExactScalar(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._merge(other)
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return ExactScalar(a, b, d)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d b^2 (nonzero for nonzero elements)."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "ExactScalar":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return ExactScalar(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._merge(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ExactScalar(1, 0, self.d), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ordering and comparisons -------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2 (never equal for square-free d)
        return sa if a * a > self.d * b * b else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, float) else NotImplemented
        if other is NotImplemented:
            return NotImplemented
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    # text form ------------------------------------------------------------
    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt({self.d})"

    def __repr__(self):
        return f"ExactScalar('{self}')"

    _RAT = r"\d+(?:/\d+)?"
    _PATTERN = re.compile(
        rf"^(?P<a>[+-]?{_RAT}(?=[+-]))?(?P<sb>[+-]*)(?:(?P<b>{_RAT})\*)?sqrt\((?P<d>\d+)\)$"
    )

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """Parse ``"p/q"`` or ``"a+b*sqrt(d)"`` (whitespace ignored)."""
        s = "".join(str(text).split())
        if not s:
            raise ValueError("empty scalar string")
        if "sqrt" not in s:
            try:
                return cls(Fraction(s))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad scalar {text!r}") from exc
        m = cls._PATTERN.match(s)
        if m is None:
            raise ValueError(f"bad scalar {text!r}")
        a = Fraction(m["a"]) if m["a"] else Fraction(0)
        b = Fraction(m["b"]) if m["b"] else Fraction(1)
        if m["sb"].count("-") % 2:
            b = -b
        root = cls.sqrt(int(m["d"]))
        return cls(a) + root * b


def scalar(x) -> ExactScalar:
    """Coerce int / Fraction / string / ExactScalar to an ExactScalar."""
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, str):
        return ExactScalar.parse(x)
    if isinstance(x, (int, Fraction)):
        return ExactScalar(x)
    if isinstance(x, np.integer):
        return ExactScalar(int(x))
    raise TypeError(f"cannot make an exact scalar from {type(x).__name__}")


# Field elements used inside kernels: Fraction when d == 0, ExactScalar otherwise.
def _to_field(x: ExactScalar, d: int):
    if d == 0:
        return x.a
    return x if x.d == d else ExactScalar(x.a, x.b, d)


def _common_radicand(values: Iterable[ExactScalar]) -> int:
    d = 0
    for v in values:
        r = v.radicand
        if r:
            if d and r != d:
                raise InvalidFieldError(f"mixed radicands sqrt({d}) and sqrt({r})")
            d = r
    return d


def _is_zero(x) -> bool:
    return not x


class ExactMatrix:
    """Dense matrix over Q or a single Q(sqrt(d)).

    Entries are kept in row-major order as kernel field elements (plain
    ``Fraction`` for rational matrices) for speed; ``entry`` hands back
    ``ExactScalar`` values.
    """

    __slots__ = ("nrows", "ncols", "d", "_rows")

    def __init__(self, rows: Sequence[Sequence], d: int | None = None):
        scal = [[scalar(x) if not isinstance(x, ExactScalar) else x for x in row] for row in rows]
        nrows = len(scal)
        ncols = len(scal[0]) if nrows else 0
        if any(len(r) != ncols for r in scal):
            raise ShapeError("ragged rows")
        flat = [x for r in scal for x in r]
        dd = _common_radicand(flat)
        if d is not None and d != 0:
            if dd and dd != d:
                raise InvalidFieldError(f"entries use sqrt({dd}), matrix declared sqrt({d})")
            dd = d
        self.nrows, self.ncols, self.d = nrows, ncols, dd
        self._rows = tuple(tuple(_to_field(x, dd) for x in r) for r in scal)

    @classmethod
    def _raw(cls, rows, d: int) -> "ExactMatrix":
        obj = object.__new__(cls)
        obj._rows = tuple(tuple(r) for r in rows)
        obj.nrows = len(obj._rows)
        obj.ncols = len(obj._rows[0]) if obj.nrows else 0
        obj.d = d
        return obj

    @classmethod
    def identity(cls, n: int, d: int = 0) -> "ExactMatrix":
        one, zero = _field_one(d), _field_zero(d)
        return cls._raw([[one if i == j else zero for j in range(n)] for i in range(n)], d)

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None, d: int = 0) -> "ExactMatrix":
        ncols = nrows if ncols is None else ncols
        z = _field_zero(d)
        return cls._raw([[z] * ncols for _ in range(nrows)], d)

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        vals = [scalar(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else ExactScalar(0) for j in range(n)] for i in range(n)])

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]]) -> "ExactMatrix":
        return cls([[ExactScalar.parse(s) for s in row] for row in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def entries(self) -> tuple[ExactScalar, ...]:
        return tuple(self.entry(i, j) for i in range(self.nrows) for j in range(self.ncols))

    def rows(self) -> list[list]:
        """Mutable copy of the rows as kernel field elements."""
        return [list(r) for r in self._rows]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def entry(self, i: int, j: int) -> ExactScalar:
        x = self._rows[i][j]
        return x if isinstance(x, ExactScalar) else ExactScalar(x)

    def to_strings(self) -> list[list[str]]:
        return [[str(self.entry(i, j)) for j in range(self.ncols)] for i in range(self.nrows)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._rows], dtype=float).reshape(
            self.nrows, self.ncols
        )

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        r = self._rows
        return all(r[i][j] == r[j][i] for i in range(self.nrows) for j in range(i + 1, self.ncols))

    def is_zero(self) -> bool:
        return all(_is_zero(x) for r in self._rows for x in r)

    def _join(self, other: "ExactMatrix") -> int:
        if self.d and other.d and self.d != other.d:
            raise InvalidFieldError(f"mixed radicands sqrt({self.d}) and sqrt({other.d})")
        return self.d or other.d

    def _lift(self, d: int) -> list[list]:
        if d == self.d:
            return [list(r) for r in self._rows]
        return [[_to_field(ExactScalar(x) if not isinstance(x, ExactScalar) else x, d) for x in r]
                for r in self._rows]

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        d = self._join(other)
        a, b = self._lift(d), other._lift(d)
        return ExactMatrix._raw([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)], d)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._raw([[-x for x in r] for r in self._rows], self.d)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = scalar(c)
        d = self.d or c.radicand
        if self.d and c.radicand and self.d != c.radicand:
            raise InvalidFieldError("scalar outside the matrix field")
        cf = _to_field(c, d)
        return ExactMatrix._raw([[cf * x for x in r] for r in self._lift(d)], d)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        d = self._join(other)
        a, b = self._lift(d), other._lift(d)
        zero = _field_zero(d)
        cols = list(zip(*b)) if b else []
        out = []
        for ra in a:
            row = []
            for cb in cols:
                s = zero
                for x, y in zip(ra, cb):
                    if x and y:
                        s = s + x * y
                row.append(s)
            out.append(row)
        return ExactMatrix._raw(out, d)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._raw([list(c) for c in zip(*self._rows)] if self.nrows else [], self.d)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def trace(self) -> ExactScalar:
        s = _field_zero(self.d)
        for i in range(min(self.nrows, self.ncols)):
            s = s + self._rows[i][i]
        return s if isinstance(s, ExactScalar) else ExactScalar(s)

    def shift(self, c) -> "ExactMatrix":
        """A + c*I."""
        return self + ExactMatrix.identity(self.nrows, self.d).scale(c)

    def permute(self, perm: Sequence[int]) -> "ExactMatrix":
        """Simultaneous row/column permutation: result[i][j] = self[perm[i]][perm[j]]."""
        r = self._rows
        return ExactMatrix._raw([[r[pi][pj] for pj in perm] for pi in perm], self.d)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            x == y for ra, rb in zip(self._rows, other._rows) for x, y in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.shape, tuple(self.entries)))

    def __repr__(self):
        return f"ExactMatrix({self.to_strings()})"


def _field_zero(d: int):
    return Fraction(0) if d == 0 else ExactScalar(0, 0, d)


def _field_one(d: int):
    return Fraction(1) if d == 0 else ExactScalar(1, 0, d)


def block_diag(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    d = a._join(b)
    z = _field_zero(d)
    ra, rb = a._lift(d), b._lift(d)
    rows = [r + [z] * b.ncols for r in ra] + [[z] * a.ncols + r for r in rb]
    return ExactMatrix._raw(rows, d)


# ---------------------------------------------------------------------------
# elimination kernels


def _as_rows(M) -> tuple[list[list], int, int]:
    if isinstance(M, ExactMatrix):
        return M.rows(), M.ncols, M.d
    m = ExactMatrix(M)
    return m.rows(), m.ncols, m.d


def rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            inv = 1 / piv
            rows[r] = [x * inv if x else x for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank_exact(M) -> int:
    """Rank over Q(sqrt(d)) by exact Gaussian elimination."""
    rows, ncols, _ = _as_rows(M)
    if not rows or ncols == 0:
        return 0
    # eliminate along the shorter side
    if ncols < len(rows):
        rows = [list(c) for c in zip(*rows)]
        ncols = len(rows[0])
    _, piv = rref(rows, ncols)
    return len(piv)


def nullspace_basis_exact(M) -> list[tuple]:
    """Basis of {v : M v = 0}, one vector per free column (free entry set to 1)."""
    orig, ncols, d = _as_rows(M)
    rows, piv = rref([list(r) for r in orig], ncols)
    pivset = set(piv)
    zero, one = _field_zero(d), _field_one(d)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(piv):
            v[c] = -rows[r][f]
        basis.append(tuple(v))
    for v in basis:
        for row in orig:
            s = zero
            for x, y in zip(row, v):
                if x and y:
                    s = s + x * y
            if s:
                raise ArithmeticError("nullspace vector failed exact substitution")
    return basis


def rank_float(M, tol: float = 1e-9) -> tuple[int, float]:
    """Numerical rank with relative threshold tol*sigma_max.

    Returns ``(rank, margin)`` where margin is the smallest kept singular
    value over the largest dropped one (``inf`` when nothing is dropped).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ShapeError("rank_float expects a 2-d array")
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix has non-finite entries")
    if A.size == 0:
        return 0, math.inf
    s = np.linalg.svd(A, compute_uv=False)
    smax = s[0]
    if smax == 0.0:
        return 0, math.inf
    kept = s[s > tol * smax]
    dropped = s[s <= tol * smax]
    rank = int(kept.size)
    if dropped.size == 0 or dropped[0] == 0.0:
        return rank, math.inf
    return rank, float(kept[-1] / dropped[0])
