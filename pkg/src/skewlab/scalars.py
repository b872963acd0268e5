"""Exact scalars (rationals and prime fields) and dense exact linear algebra.

Rationals are ``gmpy2.mpq`` values, always in lowest terms. Prime-field
values are :class:`Mod` residues. Both support the ordinary arithmetic
operators, so the rest of the package is written generically against a
:class:`Domain` object that only supplies constants, conversion and
serialization.

Elimination over Q is fraction-free (Bareiss) on row-scaled integer
matrices; over F_p it is plain Gauss-Jordan on machine residues. Pivoting
is deterministic: columns left to right, first row with a nonzero entry.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import lcm

from gmpy2 import mpq, mpz

from .errors import InputError

MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Mod:
    """A residue modulo a prime ``p``, kept reduced to ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = int(v) % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Mod):
            if o.p != self.p:
                raise InputError(f"mixing F_{self.p} and F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Mod(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Mod(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Mod(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Mod(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        if w % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return Mod(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        return Mod(w, self.p) / self

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pow__(self, k):
        if k < 0:
            return Mod(1, self.p) / Mod(pow(self.v, -k, self.p), self.p)
        return Mod(pow(self.v, k, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, Mod):
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return (self.v - o) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def __str__(self):
        return str(self.v)


class Domain:
    """Base class for coefficient domains; see :data:`QQ` and :func:`GF`."""

    name: str
    characteristic: int
    is_finite: bool

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def convert(self, x):
        raise NotImplementedError

    def parse(self, s):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def vector(self, xs):
        return tuple(self.convert(x) for x in xs)

    def __repr__(self):
        return self.name


class Rationals(Domain):
    name = "Q"
    characteristic = 0
    is_finite = False

    def convert(self, x):
        if isinstance(x, Mod):
            raise InputError("prime-field residue where a rational was expected")
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, float):
            raise InputError("floating point values are not exact scalars")
        try:
            return mpq(x)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cannot read {x!r} as a rational") from exc

    def parse(self, s):
        try:
            return mpq(str(s).strip())
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational literal {s!r}") from exc

    def format(self, x) -> str:
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, o):
        return isinstance(o, Rationals)

    def __hash__(self):
        return hash("Q")

    def to_json(self):
        return "Q"


class PrimeField(Domain):
    is_finite = True

    def __init__(self, p: int):
        self.p = p
        self.characteristic = p
        self.name = f"F_{p}"

    def convert(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise InputError(f"F_{x.p} residue where F_{self.p} was expected")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool) or not isinstance(x, (int, type(mpz(0)))):
            q = mpq(x)
            if q.denominator % self.p == 0:
                raise InputError(f"{x!r} has no image in F_{self.p}")
            return Mod(int(q.numerator), self.p) / Mod(int(q.denominator), self.p)
        return Mod(int(x), self.p)

    def parse(self, s):
        s = str(s).strip()
        if "/" in s:
            num, den = s.split("/")
            return self.convert(int(num)) / self.convert(int(den))
        try:
            return Mod(int(s), self.p)
        except ValueError as exc:
            raise InputError(f"bad residue literal {s!r}") from exc

    def elements(self):
        return [Mod(v, self.p) for v in range(self.p)]

    def __eq__(self, o):
        return isinstance(o, PrimeField) and o.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def to_json(self):
        return {"p": self.p}


QQ = Rationals()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """The prime field F_p; ``p`` is checked by trial division."""
    if not isinstance(p, int) or not _is_prime(p):
        raise InputError(f"{p!r} is not a prime")
    if p >= MAX_PRIME:
        raise InputError(f"prime {p} exceeds the 2^31 bound")
    return PrimeField(p)


def domain_from_json(obj) -> Domain:
    if obj in ("Q", "QQ", None):
        return QQ
    if isinstance(obj, dict) and "p" in obj:
        return GF(int(obj["p"]))
    if isinstance(obj, int):
        return GF(obj)
    raise InputError(f"unknown domain descriptor {obj!r}")


def domain_of(x) -> Domain:
    if isinstance(x, Mod):
        return GF(x.p)
    return QQ


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    """Dense matrix with entries from a single domain.

    ``rows`` is a tuple of equal-length tuples. Entries are coerced into
    ``domain`` at construction, which rejects residues of another prime.
    """

    rows: tuple
    domain: Domain
    ncols: int = -1

    def __post_init__(self):
        rows = tuple(tuple(self.domain.convert(x) for x in r) for r in self.rows)
        ncols = len(rows[0]) if rows else max(self.ncols, 0)
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def from_columns(cls, cols, domain, nrows=None):
        cols = [tuple(c) for c in cols]
        if not cols:
            return cls(tuple(() for _ in range(nrows or 0)), domain, 0)
        return cls(tuple(zip(*cols)), domain)

    @classmethod
    def identity(cls, n, domain):
        z, o = domain.zero, domain.one
        return cls(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), domain)

    @classmethod
    def zeros(cls, r, c, domain):
        z = domain.zero
        return cls(tuple((z,) * c for _ in range(r)), domain, c)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def entries(self):
        return tuple(itertools.chain.from_iterable(self.rows))

    def columns(self):
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    @property
    def T(self):
        return Matrix(tuple(self.columns()), self.domain, self.nrows)

    def apply(self, v):
        if len(v) != self.ncols:
            raise InputError(f"vector of length {len(v)} for {self.nrows}x{self.ncols} matrix")
        z = self.domain.zero
        out = []
        for r in self.rows:
            s = z
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise InputError("matrix dimension mismatch")
            cols = [self.apply(c) for c in other.columns()]
            return Matrix.from_columns(cols, self.domain, self.nrows) if cols else Matrix.zeros(self.nrows, 0, self.domain)
        return self.apply(other)

    def __add__(self, other):
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.domain, self.ncols)

    def __sub__(self, other):
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.domain, self.ncols)

    def __pow__(self, k):
        if self.nrows != self.ncols:
            raise InputError("power of a non-square matrix")
        out = Matrix.identity(self.nrows, self.domain)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_identity(self):
        o = self.domain.one
        return self.nrows == self.ncols and all(
            (x == o) if i == j else (not x) for i, r in enumerate(self.rows) for j, x in enumerate(r)
        )

    def to_json(self):
        return [[self.domain.format(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(self.domain.format(x) for x in r) for r in self.rows)
        return f"Matrix[{self.domain.name}]({self.nrows}x{self.ncols}: {body})"


def vstack(mats, domain, ncols):
    rows = []
    for m in mats:
        rows.extend(m.rows)
    return Matrix(tuple(rows), domain, ncols)


# ---------------------------------------------------------------------------
# elimination


def _bareiss_echelon(rows, ncols):
    """Fraction-free forward elimination of an integer matrix in place.

    Returns the pivot columns. Every division is exact by Sylvester's
    identity, which is asserted.
    """
    nrows = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, ncols):
                num = piv * row[j] - f * prow[j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                row[j] = q
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def _rref_rational(m: Matrix):
    ncols = m.ncols
    rows = []
    for r in m.rows:
        den = 1
        for x in r:
            den = lcm(den, int(x.denominator))
        rows.append([int(x.numerator) * (den // int(x.denominator)) for x in r])
    pivots = _bareiss_echelon(rows, ncols)
    out = [[mpq(x) for x in rows[i]] for i in range(len(pivots))]
    # normalize and clear upward (back substitution on the reduced echelon)
    for i, c in enumerate(pivots):
        piv = out[i][c]
        out[i] = [x / piv for x in out[i]]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        for k in range(i):
            f = out[k][c]
            if f:
                rowi = out[i]
                out[k] = [a - f * b for a, b in zip(out[k], rowi)]
    return out, pivots


def _rref_modp(m: Matrix, p: int):
    rows = [[x.v for x in r] for r in m.rows]
    ncols = m.ncols
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return [[Mod(x, p) for x in rows[i]] for i in range(len(pivots))], pivots


def rref(m: Matrix):
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    if isinstance(m.domain, PrimeField):
        return _rref_modp(m, m.domain.p)
    return _rref_rational(m)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel(m: Matrix):
    """Basis of the right null space ``{v : m v = 0}`` as tuples.

    One vector per free column, with a 1 in that column.
    """
    red, pivots = rref(m)
    dom = m.domain
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [dom.zero] * m.ncols
        v[f] = dom.one
        for row, c in zip(red, pivots):
            if row[f]:
                v[c] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b):
    """A particular solution of ``a x = b`` or ``None`` if inconsistent."""
    if len(b) != a.nrows:
        raise InputError(f"right-hand side has length {len(b)}, matrix has {a.nrows} rows")
    dom = a.domain
    aug = Matrix(tuple(r + (dom.convert(x),) for r, x in zip(a.rows, b)), dom, a.ncols + 1)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = [dom.zero] * a.ncols
    for row, c in zip(red, pivots):
        x[c] = row[-1]
    return tuple(x)


def inverse(m: Matrix):
    """Two-sided inverse of a square matrix, or ``None`` when singular."""
    if m.nrows != m.ncols:
        raise InputError("inverse of a non-square matrix")
    n = m.nrows
    dom = m.domain
    ident = Matrix.identity(n, dom)
    aug = Matrix(tuple(r + s for r, s in zip(m.rows, ident.rows)), dom, 2 * n)
    red, pivots = rref(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        return None
    return Matrix(tuple(tuple(row[n:]) for row in red), dom, n)


def in_span(vectors, v, domain) -> bool:
    if not vectors:
        return not any(v)
    a = Matrix.from_columns(vectors, domain)
    return solve(a, v) is not None


def span_equal(us, vs, domain) -> bool:
    """Exact equality of the spans of two lists of coordinate vectors."""
    n = len(us[0]) if us else (len(vs[0]) if vs else 0)
    ru = rank(Matrix(tuple(us), domain, n)) if us else 0
    rv = rank(Matrix(tuple(vs), domain, n)) if vs else 0
    if ru != rv:
        return False
    both = list(us) + list(vs)
    return (rank(Matrix(tuple(both), domain, n)) if both else 0) == ru
