"""Finite-dimensional unital algebras given by structure constants.

``e_i * e_j = sum_k c[i][j][k] e_k``. Constants are stored sparsely per
basis pair; associativity is checked once, exhaustively, when the algebra
is built, and the result is cached on the instance.
"""

from __future__ import annotations

import math

from .errors import ContractError, InputError, VerificationError
from .scalars import Matrix, inverse, kernel, rank, solve, span_equal, vstack

MAX_DIM = 64


class StructureAlgebra:
    def __init__(self, domain, structconsts, unit, label="", names=None, max_dim=MAX_DIM):
        dim = len(structconsts)
        if dim < 1:
            raise InputError("algebra must have dimension at least 1")
        if dim > max_dim:
            raise InputError(f"dimension {dim} exceeds the cap of {max_dim}")
        self.domain = domain
        self.dim = dim
        self.label = label
        self.names = list(names) if names is not None else [f"e{i}" for i in range(dim)]
        sparse = []
        for i, row in enumerate(structconsts):
            if len(row) != dim:
                raise InputError(f"structure constants row {i} has wrong length")
            srow = []
            for j, vec in enumerate(row):
                if len(vec) != dim:
                    raise InputError(f"structure constants ({i},{j}) have wrong length")
                srow.append(tuple((k, c) for k, c in enumerate(domain.vector(vec)) if c))
            sparse.append(srow)
        self._sparse = sparse
        if len(unit) != dim:
            raise InputError("unit vector has wrong length")
        self.one = AlgElement(self, domain.vector(unit))
        self.zero = AlgElement(self, (domain.zero,) * dim)
        for i in range(dim):
            e = self.basis(i)
            if self.one * e != e or e * self.one != e:
                raise InputError(f"unit is not a two-sided identity on basis element {self.names[i]}")
        self.associativity_failure = self._find_associativity_failure()
        self.associative = self.associativity_failure is None
        self._center = None

    # -- construction helpers

    @classmethod
    def from_products(cls, domain, dim, product, unit, **kw):
        """Build from a callable ``product(i, j)`` returning a coordinate vector."""
        consts = [[product(i, j) for j in range(dim)] for i in range(dim)]
        return cls(domain, consts, unit, **kw)

    @property
    def structconsts(self):
        z = self.domain.zero
        out = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                v = [z] * self.dim
                for k, c in self._sparse[i][j]:
                    v[k] = c
                row.append(tuple(v))
            out.append(row)
        return out

    def basis(self, i):
        v = [self.domain.zero] * self.dim
        v[i] = self.domain.one
        return AlgElement(self, tuple(v))

    def basis_elements(self):
        return [self.basis(i) for i in range(self.dim)]

    def element(self, coords):
        coords = self.domain.vector(coords)
        if len(coords) != self.dim:
            raise InputError(f"expected {self.dim} coordinates, got {len(coords)}")
        return AlgElement(self, coords)

    def scalar(self, c):
        c = self.domain.convert(c)
        return AlgElement(self, tuple(c * x for x in self.one.coords))

    # -- arithmetic

    def mul_coords(self, x, y):
        acc = [self.domain.zero] * self.dim
        sp = self._sparse
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = sp[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = xi * yj
                for k, c in row[j]:
                    acc[k] = acc[k] + s * c
        return tuple(acc)

    def multiply(self, x, y):
        if x.parent is not self or y.parent is not self:
            raise InputError("element does not belong to this algebra")
        return AlgElement(self, self.mul_coords(x.coords, y.coords))

    def _find_associativity_failure(self):
        sp = self._sparse
        dim = self.dim
        z = self.domain.zero
        for i in range(dim):
            for j in range(dim):
                ij = sp[i][j]
                for k in range(dim):
                    left = [z] * dim
                    for l, c in ij:
                        for m, d in sp[l][k]:
                            left[m] = left[m] + c * d
                    right = [z] * dim
                    jk = sp[j][k]
                    for l, c in jk:
                        for m, d in sp[i][l]:
                            right[m] = right[m] + c * d
                    if left != right:
                        return (i, j, k)
        return None

    def left_matrix(self, x):
        """Matrix of ``y -> x y`` acting on coordinate columns."""
        cols = [self.mul_coords(x.coords, self.basis(j).coords) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.domain)

    def right_matrix(self, x):
        cols = [self.mul_coords(self.basis(j).coords, x.coords) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.domain)

    def _require_associative(self, what):
        if not self.associative:
            i, j, k = self.associativity_failure
            raise ContractError(
                f"{what} needs an associative algebra; ({self.names[i]} {self.names[j]}) {self.names[k]} differs"
            )

    def center(self):
        if self._center is None:
            self._require_associative("center")
            self._center = self.centralizer(self.basis_elements())
        return list(self._center)

    def centralizer(self, gens):
        """Basis of ``{z : z g = g z for every g in gens}``."""
        blocks = []
        for g in gens:
            if g.parent is not self:
                raise InputError("generator does not belong to this algebra")
            blocks.append(self.right_matrix(g) - self.left_matrix(g))
        if not blocks:
            return self.basis_elements()
        sys = vstack(blocks, self.domain, self.dim)
        return [AlgElement(self, v) for v in kernel(sys)]

    def try_inverse(self, x):
        self._require_associative("try_inverse")
        y = solve(self.left_matrix(x), self.one.coords)
        if y is None:
            return None
        y = AlgElement(self, y)
        if y * x != self.one:
            return None
        return y

    def is_zero_divisor(self, x):
        self._require_associative("is_zero_divisor")
        if x.is_zero():
            raise InputError("zero is excluded from the zero-divisor test")
        return rank(self.left_matrix(x)) < self.dim

    def is_commutative(self):
        return all(
            self._sparse[i][j] == self._sparse[j][i] for i in range(self.dim) for j in range(i + 1, self.dim)
        )

    def in_center_span(self, x):
        cen = self.center()
        return _solve_in(cen, x) is not None

    def to_json(self):
        fmt = self.domain.format
        flat = [fmt(c) for plane in self.structconsts for vec in plane for c in vec]
        return {
            "dim": self.dim,
            "domain": self.domain.to_json(),
            "unit": [fmt(c) for c in self.one.coords],
            "structconsts": flat,
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj):
        from .scalars import domain_from_json

        try:
            dim = int(obj["dim"])
            dom = domain_from_json(obj.get("domain", "Q"))
            flat = [dom.convert(x) for x in obj["structconsts"]]
            unit = [dom.convert(x) for x in obj["unit"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed algebra descriptor: {exc}") from exc
        if len(flat) != dim**3:
            raise InputError(f"structconsts must have {dim**3} entries, got {len(flat)}")
        consts = [[flat[(i * dim + j) * dim:(i * dim + j + 1) * dim] for j in range(dim)] for i in range(dim)]
        return cls(dom, consts, unit, label=obj.get("label", ""))

    def __repr__(self):
        return f"StructureAlgebra({self.label or '?'}, dim={self.dim}, over {self.domain.name})"


class AlgElement:
    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        self.parent = parent
        self.coords = tuple(coords)

    def _check(self, o):
        if not isinstance(o, AlgElement):
            return False
        if o.parent is not self.parent:
            raise InputError("elements of different algebras")
        return True

    def __add__(self, o):
        if not self._check(o):
            return NotImplemented
        return AlgElement(self.parent, tuple(a + b for a, b in zip(self.coords, o.coords)))

    def __sub__(self, o):
        if not self._check(o):
            return NotImplemented
        return AlgElement(self.parent, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __neg__(self):
        return AlgElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, o):
        if isinstance(o, AlgElement):
            self._check(o)
            return self.parent.multiply(self, o)
        c = self.parent.domain.convert(o)
        return AlgElement(self.parent, tuple(c * a for a in self.coords))

    def __rmul__(self, o):
        c = self.parent.domain.convert(o)
        return AlgElement(self.parent, tuple(c * a for a in self.coords))

    def __pow__(self, k):
        if k < 0:
            inv = self.parent.try_inverse(self)
            if inv is None:
                raise ZeroDivisionError("element is not invertible")
            return inv ** (-k)
        out = self.parent.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if not isinstance(o, AlgElement):
            return NotImplemented
        return self.parent is o.parent and self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def to_json(self):
        return [self.parent.domain.format(c) for c in self.coords]

    def __repr__(self):
        fmt = self.parent.domain.format
        terms = [f"{fmt(c)}*{n}" for c, n in zip(self.coords, self.parent.names) if c]
        return " + ".join(terms) if terms else "0"


def _solve_in(elements, x):
    """Coordinates of ``x`` in the span of ``elements`` or ``None``."""
    if not elements:
        return () if x.is_zero() else None
    a = Matrix.from_columns([e.coords for e in elements], x.parent.domain)
    return solve(a, x.coords)


def coordinates_in(elements, x):
    return _solve_in(elements, x)


def same_span(xs, ys):
    dom = (xs or ys)[0].parent.domain
    return span_equal([x.coords for x in xs], [y.coords for y in ys], dom)


# ---------------------------------------------------------------------------
# morphisms


class AlgMorphism:
    """Unital algebra homomorphism given by its matrix on coordinates.

    Column ``j`` of ``matrix`` holds the image of basis element ``j``.
    Multiplicativity is checked on every basis pair at construction.
    """

    def __init__(self, source, target, matrix, automorphism=None, check=True):
        if matrix.nrows != target.dim or matrix.ncols != source.dim:
            raise InputError("morphism matrix has the wrong shape")
        self.source = source
        self.target = target
        self.matrix = matrix
        if automorphism is None:
            automorphism = source is target
        self.is_automorphism = automorphism
        self._inverse = None
        if check:
            self._verify()

    def _verify(self):
        if self.apply_coords(self.source.one.coords) != self.target.one.coords:
            raise VerificationError("unit preserved", "morphism does not send 1 to 1")
        images = [self.apply_coords(self.source.basis(i).coords) for i in range(self.source.dim)]
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = self.apply_coords(self.source.mul_coords(self.source.basis(i).coords, self.source.basis(j).coords))
                rhs = self.target.mul_coords(images[i], images[j])
                if lhs != rhs:
                    raise VerificationError(
                        "multiplicative",
                        f"f({self.source.names[i]}*{self.source.names[j]}) != f({self.source.names[i]})f({self.source.names[j]})",
                    )
        if self.is_automorphism:
            if self.source is not self.target:
                raise InputError("automorphism must have equal source and target")
            inv = inverse(self.matrix)
            if inv is None:
                raise VerificationError("invertible", "automorphism matrix is singular")
            self._inverse = inv

    def apply_coords(self, coords):
        return self.matrix.apply(coords)

    def __call__(self, x):
        if x.parent is not self.source:
            raise InputError("element outside the morphism's source")
        return AlgElement(self.target, self.matrix.apply(x.coords))

    def compose(self, other):
        """``self ∘ other``: apply ``other`` first."""
        if other.target is not self.source:
            raise InputError("morphisms are not composable")
        return AlgMorphism(other.source, self.target, self.matrix @ other.matrix,
                           automorphism=self.is_automorphism and other.is_automorphism, check=False)

    def inverse(self):
        if self._inverse is None:
            inv = inverse(self.matrix) if self.source is self.target else None
            if inv is None:
                raise ContractError("morphism is not invertible")
            self._inverse = inv
        return AlgMorphism(self.target, self.source, self._inverse, automorphism=True, check=False)

    def __pow__(self, k):
        if self.source is not self.target:
            raise InputError("power of a non-endomorphism")
        if k < 0:
            return self.inverse() ** (-k)
        return AlgMorphism(self.source, self.target, self.matrix**k, automorphism=self.is_automorphism, check=False)

    def __eq__(self, o):
        return isinstance(o, AlgMorphism) and self.source is o.source and self.target is o.target and self.matrix.rows == o.matrix.rows

    def __hash__(self):
        return hash(self.matrix.rows)

    def is_identity(self):
        return self.matrix.is_identity()

    @classmethod
    def identity(cls, a):
        return cls(a, a, Matrix.identity(a.dim, a.domain), automorphism=True, check=False)


def multiply(a, x, y):
    return a.multiply(x, y)


def is_associative(a):
    return a.associative


def center(a):
    return a.center()


def centralizer(a, gens):
    return a.centralizer(gens)


def try_inverse(a, x):
    return a.try_inverse(x)


def is_zero_divisor(a, x):
    return a.is_zero_divisor(x)


def inner_automorphism(a, u):
    """``z -> u z u^{-1}``; raises :class:`ContractError` if ``u`` is not a unit."""
    uinv = a.try_inverse(u)
    if uinv is None:
        raise ContractError("inner automorphism by a non-invertible element")
    cols = [(u * a.basis(j) * uinv).coords for j in range(a.dim)]
    return AlgMorphism(a, a, Matrix.from_columns(cols, a.domain), automorphism=True)


def is_n_central(a, x, n):
    """True iff x is outside the center, x^n is a central unit and x^m is
    non-central for 1 <= m < n."""
    if n < 1:
        raise InputError("n must be a positive integer")
    if a.in_center_span(x):
        return False
    p = a.one
    for m in range(1, n + 1):
        p = p * x
        central = a.in_center_span(p)
        if m < n and central:
            return False
    return central and a.try_inverse(p) is not None


def matrix_order(m, cap):
    """Least k in [1, cap] with m^k = I, else None."""
    p = m
    for k in range(1, cap + 1):
        if p.is_identity():
            return k
        p = p @ m
    return None


def morphism_order(f, cap=None):
    if f.source is not f.target:
        raise InputError("order of a non-endomorphism")
    if inverse(f.matrix) is None:
        raise ContractError("morphism is not invertible")
    if cap is None:
        cap = 4 * f.source.dim * f.source.dim
    return matrix_order(f.matrix, cap)


def restrict_to_subspace(f, basis):
    """Matrix of ``f`` on the span of ``basis`` (which ``f`` must stabilize).

    Returns ``None`` when some image leaves the span.
    """
    cols = []
    for b in basis:
        c = _solve_in(basis, f(b))
        if c is None:
            return None
        cols.append(c)
    return Matrix.from_columns(cols, f.source.domain, len(basis))


def is_perfect_square(n):
    r = math.isqrt(n)
    return r if r * r == n else None
