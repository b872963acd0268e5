"""Twisted polynomials S[t; sigma] over a structure algebra, right division,
invariance, quotient algebras S_f and generalized cyclic algebras.

Elements of the quotient S_f = S[t;sigma]/S[t;sigma] f use the basis
``b_j t^i`` (``0 <= i < deg f``), ordered with the t-power major, so S sits
in the leading block.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import ContractError, InputError
from .fgalg import AlgElement, AlgMorphism, StructureAlgebra, is_perfect_square, same_span
from .scalars import Matrix, PrimeField, kernel, vstack


class SkewPolyRing:
    """The ring S[t; sigma] with ``t a = sigma(a) t``."""

    def __init__(self, base, sigma):
        if sigma.source is not base or sigma.target is not base:
            raise InputError("sigma must be an endomorphism of the coefficient algebra")
        self.base = base
        self.sigma = sigma
        self._powers = [AlgMorphism.identity(base).matrix]

    def sigma_power_coords(self, i, coords):
        while len(self._powers) <= i:
            self._powers.append(self.sigma.matrix @ self._powers[-1])
        if i == 0:
            return coords
        return self._powers[i].apply(coords)

    def sigma_power(self, i, a):
        return AlgElement(self.base, self.sigma_power_coords(i, a.coords))

    def __call__(self, coeffs):
        out = []
        for c in coeffs:
            if isinstance(c, AlgElement):
                if c.parent is not self.base:
                    raise InputError("coefficient from another algebra")
                out.append(c)
            else:
                out.append(self.base.scalar(c))
        return TwistedPoly(self, out)

    def monomial(self, a, i):
        return TwistedPoly(self, [self.base.zero] * i + [a])

    @property
    def t(self):
        return self.monomial(self.base.one, 1)

    @property
    def one(self):
        return self.monomial(self.base.one, 0)

    def zero(self):
        return TwistedPoly(self, [])

    def t_power_minus(self, m, d):
        """``t^m - d`` for ``d`` in S."""
        coeffs = [-d] + [self.base.zero] * (m - 1) + [self.base.one]
        if m == 0:
            coeffs = [self.base.one - d]
        return TwistedPoly(self, coeffs)


class TwistedPoly:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        """Degree, with ``None`` standing in for -infinity on zero."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.ring.base.zero

    def is_zero(self):
        return not self.coeffs

    def coeff(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else self.ring.base.zero

    def _same(self, o):
        if not isinstance(o, TwistedPoly):
            return False
        if o.ring is not self.ring:
            raise InputError("twisted polynomials from different rings")
        return True

    def __add__(self, o):
        if not self._same(o):
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return TwistedPoly(self.ring, [self.coeff(i) + o.coeff(i) for i in range(n)])

    def __sub__(self, o):
        if not self._same(o):
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return TwistedPoly(self.ring, [self.coeff(i) - o.coeff(i) for i in range(n)])

    def __neg__(self):
        return TwistedPoly(self.ring, [-c for c in self.coeffs])

    def __mul__(self, o):
        if not self._same(o):
            return NotImplemented
        return tp_mul(self, o)

    def __eq__(self, o):
        if not isinstance(o, TwistedPoly):
            return NotImplemented
        return self.ring is o.ring and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(c.coords for c in self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            terms.append(f"({c!r}){mono}")
        return " + ".join(terms)


def tp_mul(f, g):
    """Product with ``(a t^i)(b t^j) = a sigma^i(b) t^(i+j)``."""
    if f.ring is not g.ring:
        raise InputError("twisted polynomials from different rings")
    ring = f.ring
    S = ring.base
    if f.is_zero() or g.is_zero():
        return ring.zero()
    out = [S.zero.coords] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(g.coeffs):
            if b.is_zero():
                continue
            prod = S.mul_coords(a.coords, ring.sigma_power_coords(i, b.coords))
            out[i + j] = tuple(x + y for x, y in zip(out[i + j], prod))
    return TwistedPoly(ring, [AlgElement(S, c) for c in out])


def right_divmod(g, f):
    """``(q, r)`` with ``g = q f + r`` and ``deg r < deg f``; ``f`` monic."""
    if f.ring is not g.ring:
        raise InputError("twisted polynomials from different rings")
    ring = f.ring
    m = f.degree
    if m is None or m < 1:
        raise InputError("divisor must have degree at least 1")
    if f.leading != ring.base.one:
        raise InputError("divisor is not monic")
    q = ring.zero()
    r = g
    while not r.is_zero() and r.degree >= m:
        term = ring.monomial(r.leading, r.degree - m)
        q = q + term
        r = r - tp_mul(term, f)
    return q, r


def _closed_form_invariance(f):
    """For ``f = t^m - d``: sigma(d) = d and sigma^m(z) d = d z on a basis.

    Returns ``None`` when ``f`` is not of that shape.
    """
    ring = f.ring
    S = ring.base
    m = f.degree
    if any(not c.is_zero() for c in f.coeffs[1:m]):
        return None
    d = -f.coeffs[0]
    if ring.sigma(d) != d:
        return False
    for z in S.basis_elements():
        if ring.sigma_power(m, z) * d != d * z:
            return False
    return True


def is_invariant(f):
    """Whether S[t;sigma] f is a two-sided ideal.

    Decided by right-dividing ``f b`` (every basis b of S) and ``f t`` by
    ``f``. For ``f = t^m - d`` with d a unit or m >= 2 the closed-form
    condition is evaluated too and the two must agree.
    """
    ring = f.ring
    if f.degree is None or f.leading != ring.base.one:
        raise InputError("invariance test needs a monic polynomial")
    by_division = all(
        right_divmod(tp_mul(f, ring.monomial(b, 0)), f)[1].is_zero() for b in ring.base.basis_elements()
    ) and right_divmod(tp_mul(f, ring.t), f)[1].is_zero()
    closed = _closed_form_invariance(f)
    if closed is not None and ring.base.associative:
        d = -f.coeffs[0]
        if f.degree >= 2 or ring.base.try_inverse(d) is not None:
            if closed != by_division:
                raise AssertionError("division and closed-form invariance tests disagree")
    return by_division


class QuotientAlgebra(StructureAlgebra):
    """S_f as a structure algebra, remembering how it was built."""

    def __init__(self, f, consts, unit, label="", names=None):
        self.ring = f.ring
        self.modulus = f
        self.m = f.degree
        super().__init__(f.ring.base.domain, consts, unit, label=label, names=names)

    def embed(self, a):
        """Image of ``a`` in S as a degree-0 element."""
        S = self.ring.base
        if a.parent is not S:
            raise InputError("element is not from the coefficient algebra")
        return AlgElement(self, a.coords + (self.domain.zero,) * (self.dim - S.dim))

    def from_poly(self, p):
        coords = []
        for i in range(self.m):
            coords.extend(p.coeff(i).coords)
        if p.degree is not None and p.degree >= self.m:
            raise InputError("polynomial is not reduced modulo f")
        return AlgElement(self, coords)

    def to_poly(self, x):
        n = self.ring.base.dim
        S = self.ring.base
        return TwistedPoly(self.ring, [AlgElement(S, x.coords[i * n:(i + 1) * n]) for i in range(self.m)])

    @property
    def t(self):
        if self.m == 1:
            return self.from_poly(right_divmod(self.ring.t, self.modulus)[1])
        return self.from_poly(self.ring.t)

    def base_block(self):
        """The embedded basis of S."""
        return [self.embed(b) for b in self.ring.base.basis_elements()]


def _quotient_products(f):
    ring = f.ring
    S = ring.base
    n, m = S.dim, f.degree
    basis = [(i, j) for i in range(m) for j in range(n)]
    cache = {}

    def product(a, b):
        (i, j), (k, l) = basis[a], basis[b]
        key = (i, j, k, l)
        if key not in cache:
            lhs = ring.monomial(S.basis(j), i)
            rhs = ring.monomial(S.basis(l), k)
            r = right_divmod(tp_mul(lhs, rhs), f)[1] if i + k >= m else tp_mul(lhs, rhs)
            coords = []
            for p in range(m):
                coords.extend(r.coeff(p).coords)
            cache[key] = coords
        return cache[key]

    return basis, product


def _names(f):
    out = []
    for i in range(f.degree):
        t = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        for nm in f.ring.base.names:
            if not t:
                out.append(nm)
            else:
                out.append(t if nm == "1" else f"{nm}*{t}")
    return out


def _raw_quotient(f, label="S_f"):
    """Product table of S_f without the invariance precondition.

    Used by the test harness to show associativity fails for
    non-invariant f; the public constructor is :func:`quotient_algebra`.
    """
    ring = f.ring
    if f.leading != ring.base.one:
        raise InputError("modulus must be monic")
    basis, product = _quotient_products(f)
    dim = len(basis)
    consts = [[product(a, b) for b in range(dim)] for a in range(dim)]
    unit = list(ring.base.one.coords) + [ring.base.domain.zero] * (dim - ring.base.dim)
    return StructureAlgebra(ring.base.domain, consts, unit, label=label, names=_names(f))


def quotient_algebra(f, label="S_f"):
    if f.degree is None or f.degree < 1:
        raise InputError("modulus must have degree at least 1")
    if f.leading != f.ring.base.one:
        raise InputError("modulus must be monic")
    if not is_invariant(f):
        raise ContractError("f is not invariant; S_f would be nonassociative")
    basis, product = _quotient_products(f)
    dim = len(basis)
    consts = [[product(a, b) for b in range(dim)] for a in range(dim)]
    unit = list(f.ring.base.one.coords) + [f.ring.base.domain.zero] * (dim - f.ring.base.dim)
    A = QuotientAlgebra(f, consts, unit, label=label, names=_names(f))
    if not A.associative:
        raise AssertionError("invariant modulus produced a nonassociative quotient")
    return A


@dataclass
class GeneralizedCyclicSpec:
    S: StructureAlgebra
    sigma: AlgMorphism
    d: AlgElement
    m: int

    def validate(self):
        if self.m < 1:
            raise InputError("m must be a positive integer")
        if self.sigma.source is not self.S or self.sigma.target is not self.S or not self.sigma.is_automorphism:
            raise ContractError("sigma must be an automorphism of S")
        if self.sigma(self.d) != self.d:
            raise ContractError("d is not fixed by sigma")
        if self.S.try_inverse(self.d) is None:
            raise ContractError("d is not invertible")
        f = SkewPolyRing(self.S, self.sigma).t_power_minus(self.m, self.d)
        if not is_invariant(f):
            raise ContractError("t^m - d is not invariant")
        return f


@dataclass
class CyclicAlgebra:
    """A generalized cyclic algebra (S, sigma, d) with its structural report."""

    spec: GeneralizedCyclicSpec
    algebra: QuotientAlgebra
    center: list
    degree: int | None
    centralizer_of_S: list
    centralizer_is_center_of_S: bool

    @property
    def center_dim(self):
        return len(self.center)


def generalized_cyclic(spec, label=None):
    f = spec.validate()
    A = quotient_algebra(f, label=label or f"({spec.S.label},sigma,d)")
    cen = A.center()
    deg = is_perfect_square(A.dim // len(cen)) if A.dim % len(cen) == 0 else None
    cent = A.centralizer(A.base_block())
    cs = [A.embed(z) for z in spec.S.center()]
    return CyclicAlgebra(spec, A, cen, deg, cent, same_span(cent, cs))


def eigenring(A):
    """Basis (inside S) of the elements of S commuting with all of S_f."""
    S = A.ring.base
    dom = S.domain
    n = S.dim
    blocks = []
    for h in A.basis_elements():
        # a -> a h - h a, restricted to a in the leading S block
        cols = [(A.basis(j) * h - h * A.basis(j)).coords for j in range(n)]
        blocks.append(Matrix.from_columns(cols, dom))
    sys = vstack(blocks, dom, n)
    basis = [AlgElement(S, v) for v in kernel(sys)]
    for a in basis:
        for b in basis:
            if a * b != b * a:
                raise AssertionError("eigenring basis is not commutative")
    return basis


# ---------------------------------------------------------------------------
# norm-condition witness search


@dataclass(frozen=True)
class SearchSpec:
    """How to look for b with b sigma(b) ... sigma^(q-1)(b) = c.

    ``mode`` is ``"exhaustive"`` (finite base field only) or ``"height"``
    (coordinates of height at most ``bound``). ``limit`` caps the number of
    candidates examined; hitting it is reported as truncation.
    """

    mode: str = "height"
    bound: int = 3
    limit: int | None = 50_000

    def __post_init__(self):
        if self.mode not in ("exhaustive", "height"):
            raise InputError(f"unknown search mode {self.mode!r}")
        if self.mode == "height" and (not isinstance(self.bound, int) or self.bound < 0):
            raise InputError("height bound must be a non-negative integer")

    @classmethod
    def from_json(cls, obj):
        if obj is None:
            return cls()
        try:
            return cls(mode=obj.get("mode", "height"), bound=int(obj.get("bound", 3)), limit=obj.get("limit", 50_000))
        except (TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed search spec: {exc}") from exc

    def to_json(self):
        return {"mode": self.mode, "bound": self.bound, "limit": self.limit}


@dataclass
class WitnessResult:
    status: str  # "found" | "none-found" | "none"
    witness: AlgElement | None = None
    norm: AlgElement | None = None
    bound: int | None = None
    examined: int = 0
    truncated: bool = False

    @property
    def verdict(self):
        if self.status == "found":
            return "found"
        if self.status == "none":
            return "none(exhaustive)"
        return f"none-found({self.bound})"


def farey_scalars(bound):
    """Rationals of height <= bound: 0, then by height, smaller magnitude
    first, positive before negative (0, 1, -1, 1/2, -1/2, 2, -2, ...)."""
    out = [mpq(0)]
    for h in range(1, bound + 1):
        level = set()
        for den in range(1, h + 1):
            for num in range(0, h + 1):
                if max(num, den) == h and num and mpq(num, den).denominator == den:
                    level.add(mpq(num, den))
        for x in sorted(level):
            out.extend([x, -x])
    return out


def _graded_lex(nvals, dim):
    """Index vectors in [0, nvals)^dim by total degree, then lexicographically."""
    top = dim * (nvals - 1)

    def rec(pos, remaining):
        if pos == dim - 1:
            if remaining < nvals:
                yield (remaining,)
            return
        for v in range(min(remaining, nvals - 1) + 1):
            for rest in rec(pos + 1, remaining - v):
                yield (v,) + rest

    for g in range(1, top + 1):
        yield from rec(0, g)


def norm_product(S, sigma, q, b):
    """b sigma(b) ... sigma^(q-1)(b)."""
    out = b
    img = b
    for _ in range(q - 1):
        img = sigma(img)
        out = out * img
    return out


def norm_condition_witness(S, sigma, q, c, search=None):
    search = search or SearchSpec()
    if q < 1:
        raise InputError("q must be positive")
    if c.parent is not S:
        raise InputError("c must lie in S")
    dom = S.domain
    if search.mode == "exhaustive":
        if not isinstance(dom, PrimeField):
            raise InputError("exhaustive search needs a finite base field")
        if dom.p**S.dim > 10**6:
            raise InputError(f"exhaustive search over {dom.p}^{S.dim} elements is too large")
        values = dom.elements()
    else:
        if isinstance(dom, PrimeField):
            values = [dom.convert(v) for v in range(min(search.bound + 1, dom.p))]
        else:
            values = farey_scalars(search.bound)
    examined = 0
    truncated = False
    for idx in _graded_lex(len(values), S.dim):
        if search.mode == "height" and search.limit is not None and examined >= search.limit:
            truncated = True
            break
        examined += 1
        b = AlgElement(S, tuple(values[i] for i in idx))
        n = norm_product(S, sigma, q, b)
        if n == c:
            if norm_product(S, sigma, q, b) != c:  # pragma: no cover
                raise AssertionError("witness failed re-verification")
            return WitnessResult("found", b, n, search.bound, examined)
    if search.mode == "exhaustive":
        return WitnessResult("none", None, None, None, examined)
    return WitnessResult("none-found", None, None, search.bound, examined, truncated)
