"""Field extensions M/F presented as base[x]/(minpoly) with a verified
automorphism list.

Automorphisms are supplied by the caller (or the built-in catalog) as the
image of the generator theta in the power basis; they are checked, never
searched for over Q.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

from .errors import ContractError, InputError, VerificationError
from .fgalg import AlgMorphism, StructureAlgebra, same_span
from .groups import FiniteGroup
from .scalars import GF, QQ, Matrix, PrimeField, kernel, vstack

# -- dense univariate polynomials, constant term first


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    q = [lead * 0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = r[shift + i] - c * bc
        r = _trim(r)
    return q, r


def poly_eval_in(carrier, poly, x):
    """Horner evaluation of a scalar polynomial at an algebra element."""
    acc = carrier.zero
    for c in reversed(poly):
        acc = acc * x + carrier.scalar(c)
    return acc


def _rational_roots(poly):
    from gmpy2 import mpq

    den = 1
    for c in poly:
        den = math.lcm(den, int(c.denominator))
    ints = [int(c * den) for c in poly]
    a0, an = ints[0], ints[-1]
    if a0 == 0:
        return [mpq(0)]

    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    roots = []
    for p in divisors(a0):
        for q in divisors(an):
            for s in (1, -1):
                r = mpq(s * p, q)
                if sum(c * r**i for i, c in enumerate(ints)) == 0:
                    roots.append(r)
    return roots


def _monic_polys(domain, degree):
    els = domain.elements()
    for coeffs in itertools.product(els, repeat=degree):
        yield list(coeffs) + [domain.one]


def irreducibility(domain, minpoly):
    """``'certified'`` when irreducibility was decided exactly, ``'asserted'``
    when it was out of reach. Raises :class:`InputError` on a factor."""
    n = len(minpoly) - 1
    if n <= 1:
        return "certified"
    if isinstance(domain, PrimeField):
        if domain.p**n > 10**6:
            return "asserted"
        for d in range(1, n // 2 + 1):
            for g in _monic_polys(domain, d):
                if not poly_divmod(minpoly, g)[1]:
                    raise InputError(f"minpoly is reducible: divisible by a degree-{d} factor")
        return "certified"
    if n <= 3:
        roots = _rational_roots(minpoly)
        if roots:
            raise InputError(f"minpoly is reducible: rational root {QQ.format(roots[0])}")
        return "certified"
    return "asserted"


class FieldExtension:
    """M = F[x]/(minpoly) with power basis 1, theta, ..., theta^(n-1).

    ``automorphisms`` is a list of ``(name, AlgMorphism)`` pairs on the
    carrier algebra.
    """

    def __init__(self, domain, minpoly, automorphism_images, label=""):
        minpoly = list(domain.vector(minpoly))
        if len(minpoly) < 2 or not minpoly[-1]:
            raise InputError("minpoly must have degree at least 1")
        if minpoly[-1] != domain.one:
            raise InputError("minpoly must be monic")
        self.domain = domain
        self.minpoly = tuple(minpoly)
        self.degree = n = len(minpoly) - 1
        self.label = label
        self.irreducibility = irreducibility(domain, minpoly)
        self.carrier = self._build_carrier()
        self.theta = self.carrier.basis(1) if n > 1 else self.carrier.scalar(-minpoly[0])
        self.automorphisms = []
        for name, img in automorphism_images:
            self.automorphisms.append((name, self._make_automorphism(name, img)))
        mats = [a.matrix.rows for _, a in self.automorphisms]
        if len(set(mats)) != len(mats):
            raise InputError("automorphism list contains duplicates")
        if len(self.automorphisms) > n:
            raise InputError("more automorphisms than the degree allows")
        names = [nm for nm, _ in self.automorphisms]
        if len(set(names)) != len(names):
            raise InputError("automorphism names must be distinct")

    def _build_carrier(self):
        dom, n = self.domain, self.degree
        # x^k mod minpoly for k < 2n-1
        powers = []
        for k in range(2 * n - 1):
            mono = [dom.zero] * k + [dom.one]
            r = poly_divmod(mono, self.minpoly)[1]
            powers.append(tuple(r + [dom.zero] * (n - len(r))))
        names = ["1"] + [f"th^{i}" if i > 1 else "th" for i in range(1, n)]
        return StructureAlgebra.from_products(
            dom, n, lambda i, j: powers[i + j], [dom.one] + [dom.zero] * (n - 1),
            label=self.label or "M", names=names,
        )

    def _make_automorphism(self, name, image):
        c = self.carrier
        img = c.element(image)
        if not poly_eval_in(c, self.minpoly, img).is_zero():
            raise InputError(f"image of theta under {name} is not a root of the minpoly")
        cols = []
        p = c.one
        for _ in range(self.degree):
            cols.append(p.coords)
            p = p * img
        mat = Matrix.from_columns(cols, self.domain)
        try:
            return AlgMorphism(c, c, mat, automorphism=True)
        except VerificationError as exc:
            raise InputError(f"{name} is not an automorphism: {exc}") from exc

    # -- access

    @property
    def names(self):
        return [n for n, _ in self.automorphisms]

    def index(self, name_or_index):
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < len(self.automorphisms):
                raise InputError(f"no automorphism with index {name_or_index}")
            return name_or_index
        try:
            return self.names.index(name_or_index)
        except ValueError:
            raise InputError(f"unknown automorphism {name_or_index!r}") from None

    def automorphism(self, key):
        return self.automorphisms[self.index(key)][1]

    def element(self, coords):
        return self.carrier.element(coords)

    def inverse(self, x):
        inv = self.carrier.try_inverse(x)
        if inv is None and not x.is_zero():
            raise ContractError(
                f"nonzero zero divisor {x!r} in carrier; irreducibility of the minpoly was {self.irreducibility}"
            )
        if inv is None:
            raise ZeroDivisionError("inverse of zero")
        return inv

    def in_base(self, x):
        return all(not c for c in x.coords[1:])

    def is_galois(self):
        return len(self.automorphisms) == self.degree

    def to_json(self):
        fmt = self.domain.format
        return {
            "base": self.domain.to_json(),
            "minpoly": [fmt(c) for c in self.minpoly],
            "automorphisms": [
                {"name": n, "theta_image": [fmt(c) for c in a(self.theta).coords]}
                for n, a in self.automorphisms
            ],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            return catalog(obj)
        if "catalog" in obj:
            return catalog(obj["catalog"])
        from .scalars import domain_from_json

        try:
            dom = domain_from_json(obj.get("base", "Q"))
            auts = [(a["name"], a["theta_image"]) for a in obj["automorphisms"]]
            return cls(dom, obj["minpoly"], auts, label=obj.get("label", ""))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed extension descriptor: {exc}") from exc

    def __repr__(self):
        return f"FieldExtension({self.label or '?'}, degree {self.degree} over {self.domain.name}, |auts|={len(self.automorphisms)})"


def make_extension(minpoly, automorphism_images, domain=QQ, label=""):
    return FieldExtension(domain, minpoly, automorphism_images, label=label)


def aut_group(e):
    """Cayley table of the listed automorphisms; element ``i`` is
    ``e.automorphisms[i]`` and the product ``g h`` is ``g ∘ h``."""
    mats = {a.matrix.rows: i for i, (_, a) in enumerate(e.automorphisms)}
    names = e.names
    table = []
    for i, (_, f) in enumerate(e.automorphisms):
        row = []
        for j, (_, g) in enumerate(e.automorphisms):
            comp = (f.matrix @ g.matrix).rows
            if comp not in mats:
                raise VerificationError("closed under composition", f"composite {names[i]}∘{names[j]} is not listed")
            row.append(mats[comp])
        table.append(row)
    return FiniteGroup(names, table)


@dataclass
class SubfieldHandle:
    basis: list
    degree: int
    embedding: Matrix

    def contains(self, x):
        from .fgalg import coordinates_in

        return coordinates_in(self.basis, x) is not None


def fixed_field(e, subset):
    idx = sorted({e.index(h) for h in subset})
    g = aut_group(e)
    if not g.is_subgroup(idx):
        raise ContractError("automorphism subset is not a subgroup")
    n = e.degree
    blocks = [e.automorphisms[h][1].matrix - Matrix.identity(n, e.domain) for h in idx]
    basis = [e.carrier.element(v) for v in kernel(vstack(blocks, e.domain, n))]
    for a in basis:
        for b in basis:
            if not _in(basis, a * b):
                raise VerificationError("fixed field closed under multiplication")
    if not _in(basis, e.carrier.one):
        raise VerificationError("fixed field contains 1")
    return SubfieldHandle(basis, len(basis), Matrix.from_columns([b.coords for b in basis], e.domain))


def _in(basis, x):
    from .fgalg import coordinates_in

    return coordinates_in(basis, x) is not None


def is_galois(e):
    return e.is_galois()


# -- catalog


def _quadratic_nonresidue(p):
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise InputError(f"no quadratic nonresidue mod {p}")


def _frobenius_extension(p, degree, minpoly, label):
    dom = GF(p)
    tmp = FieldExtension(dom, minpoly, [], label=label)
    images = []
    theta_power = tmp.theta
    for k in range(degree):
        images.append((f"frob^{k}" if k > 1 else ("id" if k == 0 else "frob"), theta_power.coords))
        theta_power = theta_power**p
    return FieldExtension(dom, minpoly, images, label=label)


def _first_irreducible(p, degree):
    dom = GF(p)
    for poly in _monic_polys(dom, degree):
        try:
            irreducibility(dom, poly)
            return poly
        except InputError:
            continue
    raise InputError(f"no irreducible polynomial of degree {degree} over F_{p}")


def catalog(name):
    """Built-in verified extensions, each listing its full automorphism group
    with the identity first."""
    if name == "gauss_Q_i":
        return FieldExtension(QQ, [1, 0, 1], [("id", [0, 1]), ("conj", [0, -1])], label="Q(i)")
    if name == "Q_sqrt2":
        return FieldExtension(QQ, [-2, 0, 1], [("id", [0, 1]), ("conj", [0, -1])], label="Q(sqrt2)")
    if name == "Q_sqrt2_sqrt3":
        # theta = sqrt2 + sqrt3; sqrt2 = (theta^3 - 9 theta)/2, sqrt3 = (11 theta - theta^3)/2
        return FieldExtension(
            QQ,
            [1, 0, -10, 0, 1],
            [
                ("id", [0, 1, 0, 0]),
                ("s1", [0, 10, 0, -1]),  # sqrt2 -> -sqrt2, fixes sqrt3
                ("s2", [0, -10, 0, 1]),  # sqrt3 -> -sqrt3, fixes sqrt2
                ("s1s2", [0, -1, 0, 0]),
            ],
            label="Q(sqrt2,sqrt3)",
        )
    if name == "Q_zeta5":
        return FieldExtension(
            QQ,
            [1, 1, 1, 1, 1],
            [
                ("id", [0, 1, 0, 0]),
                ("s", [0, 0, 1, 0]),
                ("s2", [-1, -1, -1, -1]),
                ("s3", [0, 0, 0, 1]),
            ],
            label="Q(zeta5)",
        )
    m = re.fullmatch(r"Fp([24])\((\d+)\)", name or "")
    if m:
        degree, p = int(m.group(1)), int(m.group(2))
        dom = GF(p)
        if degree == 2:
            if p == 2:
                poly = [1, 1, 1]
            else:
                poly = [-_quadratic_nonresidue(p), 0, 1]
        else:
            poly = _first_irreducible(p, 4)
        return _frobenius_extension(p, degree, dom.vector(poly), f"F_{p}^{degree}")
    raise InputError(f"unknown catalog extension {name!r}")


def subfield_span_equal(xs, ys):
    return same_span(xs, ys)
