"""Small finite groups by Cayley table, solvability and composition series."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ContractError, InputError


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


class FiniteGroup:
    """Group on ``range(order)`` with ``table[a][b]`` the index of ``a b``.

    The table is validated exhaustively (Latin square, identity,
    associativity, inverses) on construction.
    """

    def __init__(self, labels, table):
        n = len(table)
        if n == 0:
            raise InputError("empty group table")
        if len(labels) != n:
            raise InputError("one label per element is required")
        table = [list(map(int, row)) for row in table]
        full = set(range(n))
        for r in table:
            if len(r) != n or set(r) != full:
                raise InputError("table is not a Latin square")
        for c in range(n):
            if {table[r][c] for r in range(n)} != full:
                raise InputError("table is not a Latin square")
        ident = next((e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))), None)
        if ident is None:
            raise InputError("no identity element")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise InputError(f"table is not associative at ({labels[a]}, {labels[b]}, {labels[c]})")
        self.labels = list(labels)
        self.table = table
        self.order = n
        self.identity = ident
        self._inv = [table[a].index(ident) for a in range(n)]

    # -- basic operations

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def product(self, elems):
        out = self.identity
        for e in elems:
            out = self.table[out][e]
        return out

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def index(self, label):
        if isinstance(label, int):
            if not 0 <= label < self.order:
                raise InputError(f"no element with index {label}")
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown group element {label!r}") from None

    def is_abelian(self):
        return all(self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(a + 1, self.order))

    # -- subgroups

    def generated(self, gens):
        """Subgroup generated by ``gens`` as a frozenset of indices."""
        sub = {self.identity}
        frontier = list(sub)
        gens = list(gens)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in sub:
                        sub.add(y)
                        new.append(y)
            frontier = new
        return frozenset(sub)

    def is_subgroup(self, elems):
        s = set(elems)
        if self.identity not in s:
            return False
        return all(self.table[a][b] in s for a in s for b in s)

    def is_normal(self, sub, within=None):
        within = range(self.order) if within is None else within
        s = set(sub)
        return all(self.table[self.table[g][h]][self.inv(g)] in s for g in within for h in s)

    def commutator_subgroup(self, sub=None):
        sub = list(range(self.order)) if sub is None else list(sub)
        comms = {
            self.table[self.table[self.inv(a)][self.inv(b)]][self.table[a][b]] for a in sub for b in sub
        }
        return self.generated(comms)

    def derived_series(self):
        series = [frozenset(range(self.order))]
        while True:
            nxt = self.commutator_subgroup(series[-1])
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def subgroup_table(self, elems):
        """The subgroup on ``sorted(elems)`` as its own FiniteGroup."""
        elems = sorted(elems)
        pos = {e: i for i, e in enumerate(elems)}
        table = [[pos[self.table[a][b]] for b in elems] for a in elems]
        return FiniteGroup([self.labels[e] for e in elems], table)

    def to_json(self):
        return {"labels": list(self.labels), "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["labels"], obj["table"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed group descriptor: {exc}") from exc

    # -- constructors

    @classmethod
    def from_permutations(cls, perms, labels=None):
        perms = [tuple(p) for p in perms]
        pos = {p: i for i, p in enumerate(perms)}
        # (p q)(x) = p(q(x))
        try:
            table = [[pos[tuple(p[q[x]] for x in range(len(q)))] for q in perms] for p in perms]
        except KeyError:
            raise InputError("permutation list is not closed under composition") from None
        return cls(labels or [str(p) for p in perms], table)

    @classmethod
    def cyclic(cls, n, name="s"):
        labels = ["id"] + [name if k == 1 else f"{name}{k}" for k in range(1, n)]
        return cls(labels, [[(a + b) % n for b in range(n)] for a in range(n)])

    @classmethod
    def klein_four(cls):
        labels = ["id", "s1", "s2", "s1s2"]
        return cls(labels, [[a ^ b for b in range(4)] for a in range(4)])

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def symmetric_group(n):
    perms = sorted(itertools.permutations(range(n)))
    return FiniteGroup.from_permutations(perms)


def alternating_group(n):
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    perms = [p for p in sorted(itertools.permutations(range(n))) if even(p)]
    return FiniteGroup.from_permutations(perms)


@dataclass(frozen=True)
class SolvableSeries:
    """``{1} = G_0 < G_1 < ... < G_k = G`` with prime cyclic quotients.

    ``subgroups[j]`` is a sorted tuple of element indices,
    ``primes[j] = |G_{j+1} : G_j|`` and ``generators[j]`` is the element
    sigma_{j+1} whose coset generates ``G_{j+1}/G_j``.
    """

    subgroups: tuple
    primes: tuple
    generators: tuple

    @property
    def length(self):
        return len(self.primes)

    def validate(self, g):
        subs = [set(s) for s in self.subgroups]
        if subs[0] != {g.identity}:
            raise ContractError("series must start at the trivial subgroup")
        if subs[-1] != set(range(g.order)):
            raise ContractError("series must end at the whole group")
        for j in range(self.length):
            lo, hi = subs[j], subs[j + 1]
            if not (g.is_subgroup(hi) and lo < hi):
                raise ContractError(f"G_{j} is not a proper subgroup of G_{j+1}")
            if not g.is_normal(lo, within=hi):
                raise ContractError(f"G_{j} is not normal in G_{j+1}")
            q = len(hi) // len(lo)
            if q * len(lo) != len(hi) or not _is_prime(q) or q != self.primes[j]:
                raise ContractError(f"|G_{j+1}:G_{j}| is not the prime {self.primes[j]}")
            s = self.generators[j]
            if s not in hi or s in lo:
                raise ContractError(f"sigma_{j+1} is not in G_{j+1} minus G_{j}")
        return True

    @classmethod
    def from_subgroups(cls, g, subgroups):
        subs = [tuple(sorted(g.index(x) for x in s)) for s in subgroups]
        primes, gens = [], []
        for lo, hi in zip(subs, subs[1:]):
            primes.append(len(hi) // max(len(lo), 1))
            gens.append(min(set(hi) - set(lo)) if set(hi) - set(lo) else g.identity)
        series = cls(tuple(subs), tuple(primes), tuple(gens))
        series.validate(g)
        return series

    def to_json(self, g=None):
        if g is None:
            return {"subgroups": [list(s) for s in self.subgroups], "primes": list(self.primes), "generators": list(self.generators)}
        return {
            "subgroups": [[g.labels[e] for e in s] for s in self.subgroups],
            "primes": list(self.primes),
            "generators": [g.labels[e] for e in self.generators],
        }


def is_solvable(g):
    return len(g.derived_series()[-1]) == 1


def _coset_order(g, x, sub):
    """Least k >= 1 with x^k in sub."""
    k, y = 1, x
    while y not in sub:
        y = g.mul(y, x)
        k += 1
    return k


def composition_series(g, max_order=64):
    """Refine the derived series into steps of prime index.

    Within each abelian factor K/N the next step adjoins the smallest-index
    element of K whose coset has prime order over the current subgroup.
    """
    if g.order > max_order:
        raise ContractError(f"group order {g.order} exceeds {max_order}")
    if not is_solvable(g):
        raise ContractError("group is not solvable")
    derived = g.derived_series()
    subgroups = [frozenset({g.identity})]
    primes, gens = [], []
    for top in reversed(derived[:-1]):
        while subgroups[-1] != top:
            cur = subgroups[-1]
            for x in sorted(top - cur):
                k = _coset_order(g, x, cur)
                if _is_prime(k):
                    break
            else:  # pragma: no cover - impossible for an abelian factor
                raise ContractError("no prime-order coset in an abelian factor")
            subgroups.append(g.generated(list(cur) + [x]))
            primes.append(k)
            gens.append(x)
    series = SolvableSeries(tuple(tuple(sorted(s)) for s in subgroups), tuple(primes), tuple(gens))
    series.validate(g)
    return series


def abelian_exponent_vector(g, series, x, level=None):
    """Exponents (l_0, ..., l_{i-1}) with x = sigma_1^l_0 ... sigma_i^l_{i-1}.

    ``level`` defaults to the smallest i with x in G_i. Found by walking the
    exponent box; unique because the box and G_i have equal size.
    """
    if not g.is_abelian():
        raise ContractError("exponent vectors need an abelian group")
    if level is None:
        level = next(i for i, s in enumerate(series.subgroups) if x in s)
    if x not in series.subgroups[level]:
        raise ContractError(f"{g.labels[x]} is not in G_{level}")
    box = [range(q) for q in series.primes[:level]]
    for exps in itertools.product(*box):
        y = g.product(g.power(s, e) for s, e in zip(series.generators, exps))
        if y == x:
            return tuple(exps)
    raise ContractError("no exponent vector found")  # pragma: no cover
