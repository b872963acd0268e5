"""Forward construction of a crossed product containing an abelian Galois
extension M/F, as an iterated tower of generalized cyclic algebras

    A_1 = M[t_0; s_1]/(t_0^{q_0} - c_0),
    A_{i+1} = A_i[t_i; tau_i]/(t_i^{q_i} - c_i),

with tau_i acting by s_{i+1} on M-coefficients and fixing every t_j, and
c_i = l_i t_0^{lam_0} ... t_{i-1}^{lam_{i-1}} where s_{i+1}^{q_i} =
s_1^{lam_0} ... s_i^{lam_{i-1}}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .crossed import Chain, ChainLevel, CrossedProduct, FactorSet, IsoCertificate
from .errors import ContractError, InputError, VerificationError
from .fgalg import MAX_DIM, AlgElement, AlgMorphism, coordinates_in, matrix_order, restrict_to_subspace
from .fieldext import aut_group
from .groups import SolvableSeries, abelian_exponent_vector, composition_series
from .scalars import Matrix, PrimeField
from .skewpoly import SearchSpec, SkewPolyRing, is_invariant, norm_condition_witness, quotient_algebra


@dataclass
class AbelianChainParams:
    extension: object
    c0: object
    l: list = field(default_factory=list)
    series: SolvableSeries | None = None

    def __post_init__(self):
        ext = self.extension
        g = aut_group(ext)
        if not ext.is_galois():
            raise ContractError("extension must list its full automorphism group")
        if not g.is_abelian():
            raise ContractError("automorphism group is not abelian")
        if self.series is None:
            self.series = composition_series(g)
        self.series.validate(g)
        dom = ext.domain
        self.c0 = dom.convert(self.c0)
        self.l = [dom.convert(x) for x in self.l]
        if not self.c0:
            raise ContractError("c0 must be nonzero")
        if len(self.l) != self.series.length - 1:
            raise InputError(f"expected {self.series.length - 1} values of l, got {len(self.l)}")
        if any(not x for x in self.l):
            raise ContractError("every l_i must be nonzero")
        if ext.degree**2 > MAX_DIM:
            raise InputError(f"[M:F]^2 = {ext.degree ** 2} exceeds the dimension cap {MAX_DIM}")
        self.group = g


@dataclass
class AbelianChain(Chain):
    params: AbelianChainParams | None = None

    def embed(self, x, level=None):
        """Zero-padded image of an element of some A_j in A_level (default A_k)."""
        level = len(self.algebras) - 1 if level is None else level
        target = self.algebras[level]
        if x.parent.dim > target.dim:
            raise InputError("cannot embed a larger algebra")
        return AlgElement(target, x.coords + (target.domain.zero,) * (target.dim - x.parent.dim))

    def t(self, j, level=None):
        """Generator t_j inside A_level."""
        return self.embed(self.algebras[j + 1].t, level)

    def m_basis(self, level=None):
        return [self.embed(b, level) for b in self.algebras[0].basis_elements()]


def _coefficientwise(Ai, sigma, n):
    """Block-diagonal lift of ``sigma`` to A_i (leading index is M-coords)."""
    blocks = Ai.dim // n
    dom = Ai.domain
    rows = [[dom.zero] * Ai.dim for _ in range(Ai.dim)]
    for b in range(blocks):
        for r in range(n):
            for c in range(n):
                rows[b * n + r][b * n + c] = sigma.matrix.rows[r][c]
    return Matrix(tuple(tuple(r) for r in rows), dom, Ai.dim)


def build_abelian_chain(params):
    ext = params.extension
    g = params.group
    series = params.series
    n = ext.degree
    M = ext.carrier
    algebras = [M]
    levels = []
    for i in range(series.length):
        Ai = algebras[i]
        q = series.primes[i]
        s = series.generators[i]
        sigma = ext.automorphisms[s][1]
        tau = AlgMorphism(Ai, Ai, _coefficientwise(Ai, sigma, n), automorphism=True)
        if i == 0:
            lam = ()
            c = Ai.scalar(params.c0)
        else:
            lam = abelian_exponent_vector(g, series, g.power(s, q), level=i)
            c = Ai.scalar(params.l[i - 1])
            for j, e in enumerate(lam):
                tj = AlgElement(Ai, algebras[j + 1].t.coords + (Ai.domain.zero,) * (Ai.dim - algebras[j + 1].dim))
                c = c * tj**e
        f = SkewPolyRing(Ai, tau).t_power_minus(q, c)
        if not is_invariant(f):
            raise VerificationError("t^q - c invariant", f"level {i}")
        nxt = quotient_algebra(f, label=f"A_{i + 1}")
        algebras.append(nxt)
        checks = {"tau_automorphism": True, "invariant": True}
        levels.append(ChainLevel(i, Ai, tau, c, q, s, [], nxt.t, None, checks, lam))
    top = algebras[-1]
    if top.dim != n * n:
        raise VerificationError("[A_k:F] = n^2", f"got {top.dim}")
    centers = [a.center() for a in algebras]
    for lv in levels:
        lv.center = centers[lv.index]
    embeddings = []
    for a, b in zip(algebras, algebras[1:]):
        cols = [tuple(e.coords) + (a.domain.zero,) * (b.dim - a.dim) for e in a.basis_elements()]
        embeddings.append(Matrix.from_columns(cols, a.domain, b.dim))
    return AbelianChain(algebras, levels, centers, g, series, ext, embeddings, params=params)


def cyclic_chain(spec):
    """Single-level chain for a generalized cyclic algebra (S, sigma, d)."""
    f = spec.validate()
    S = spec.S
    A = quotient_algebra(f, label="(S,sigma,d)")
    lv = ChainLevel(0, S, spec.sigma, spec.d, spec.m, None, S.center(), A.t, None, {"invariant": True})
    cols = [tuple(e.coords) + (S.domain.zero,) * (A.dim - S.dim) for e in S.basis_elements()]
    emb = Matrix.from_columns(cols, S.domain, A.dim)
    return AbelianChain([S, A], [lv], [S.center(), A.center()], None, None, None, [emb])


def verify_inner_order(chain, level):
    """Order of tau_i restricted to the center of A_i; must equal q_i."""
    lv = chain.levels[level] if isinstance(level, int) else level
    mat = restrict_to_subspace(lv.tau, lv.center)
    if mat is None:
        raise VerificationError("tau stabilizes C(A_i)", f"level {lv.index}")
    order = matrix_order(mat, 4 * len(lv.center) ** 2 + lv.q)
    ok = order == lv.q
    lv.checks["inner_order"] = ok
    return {"level": lv.index, "order": order, "q": lv.q, "ok": ok}


def verify_center_is_base(chain):
    cen = chain.centers[-1]
    top = chain.top
    ok = len(cen) == 1 and coordinates_in(cen, top.one) is not None
    return {"ok": ok, "center_dim": len(cen), "center": [z.to_json() for z in cen]}


# ---------------------------------------------------------------------------
# division probe


@dataclass
class ProbeLevel:
    index: int
    status: str  # found / none / none-found / skipped
    witness: AlgElement | None = None
    norm: AlgElement | None = None
    zero_divisor: bool | None = None
    examined: int = 0
    truncated: bool = False
    reason: str = ""

    def to_json(self):
        out = {"level": self.index, "status": self.status, "examined": self.examined, "truncated": self.truncated}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["norm"] = self.norm.to_json()
            out["zero_divisor"] = self.zero_divisor
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class ProbeReport:
    verdict: str  # "division" | "not-division" | "undetermined(B)"
    levels: list
    search: SearchSpec

    def to_json(self):
        return {"verdict": self.verdict, "levels": [lv.to_json() for lv in self.levels], "search": self.search.to_json()}


def division_probe(chain, search=None):
    """Look for b with b tau(b) ... tau^{q-1}(b) = c at each level.

    A witness means not-division; this is confirmed by checking that
    t_i - b is a zero divisor in A_{i+1}. "division" is only returned when
    every level was searched exhaustively over a finite field.
    """
    search = search or SearchSpec()
    dom = chain.top.domain
    if search.mode == "exhaustive" and not isinstance(dom, PrimeField):
        raise InputError("exhaustive search needs a finite base field")
    out = []
    for lv in chain.levels:
        S = lv.algebra
        if search.mode == "exhaustive" and dom.p**S.dim > 10**6:
            out.append(ProbeLevel(lv.index, "skipped", reason=f"{dom.p}^{S.dim} candidates exceed the cap"))
            continue
        r = norm_condition_witness(S, lv.tau, lv.q, lv.c, search)
        pl = ProbeLevel(lv.index, r.status, r.witness, r.norm, examined=r.examined, truncated=r.truncated)
        if r.witness is not None:
            nxt = chain.algebras[lv.index + 1]
            b = AlgElement(nxt, r.witness.coords + (dom.zero,) * (nxt.dim - S.dim))
            pl.zero_divisor = nxt.is_zero_divisor(lv.generator - b)
            if not pl.zero_divisor:
                raise VerificationError("witness gives a zero divisor", f"level {lv.index}")
        out.append(pl)
    if any(p.status == "found" for p in out):
        verdict = "not-division"
    elif all(p.status == "none" for p in out):
        verdict = "division"
    elif search.mode == "exhaustive":
        verdict = "undetermined(exhaustive-cap)"
    else:
        verdict = f"undetermined({search.bound})"
    return ProbeReport(verdict, out, search)


# ---------------------------------------------------------------------------
# round trip to a crossed product


def extract_crossed_product(chain):
    """Read the crossed product (M, G, a) off A_k.

    x_r is the monomial t_0^{e_0} ... t_{k-1}^{e_{k-1}} for the exponent
    vector of r; a_{r,p} = x_r x_p x_{rp}^{-1}, which must lie in M. Returns
    the crossed product and a certificate for (M, G, a) -> A_k.
    """
    g = chain.group
    series = chain.series
    k = series.length
    A = chain.top
    ext = chain.extension
    n = ext.degree
    x = {}
    for r in range(g.order):
        e = abelian_exponent_vector(g, series, r, level=k)
        v = A.one
        for j, ej in enumerate(e):
            v = v * chain.t(j) ** ej
        x[r] = v
    mb = chain.m_basis()
    entries = {}
    for r in range(g.order):
        for p in range(g.order):
            inv = A.try_inverse(x[g.mul(r, p)])
            a = x[r] * x[p] * inv
            coords = a.coords[:n]
            if any(a.coords[n:]):
                raise VerificationError("a_{r,p} in M", f"({g.labels[r]}, {g.labels[p]})")
            entries[(r, p)] = ext.element(coords)
    fs = FactorSet(ext, entries, group=g)
    cp = CrossedProduct(fs, label="extracted")
    cols = []
    for s in cp.support:
        for b in mb:
            cols.append((b * x[s]).coords)
    cert = IsoCertificate(cp.algebra, A, Matrix.from_columns(cols, A.domain))
    cert.verify()
    return cp, cert
