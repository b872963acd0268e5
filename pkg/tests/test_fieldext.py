import itertools

import pytest
import sympy as sp
from gmpy2 import mpq

from skewlab.errors import ContractError, InputError, VerificationError
from skewlab.fgalg import same_span
from skewlab.fieldext import (
    FieldExtension,
    aut_group,
    catalog,
    fixed_field,
    irreducibility,
    make_extension,
)
from skewlab.scalars import GF


def test_gauss():
    e = catalog("gauss_Q_i")
    assert e.degree == 2 and e.is_galois()
    assert e.irreducibility == "certified"
    conj = e.automorphism("conj")
    assert conj(e.theta) == -e.theta


def _power_basis_coords(expr, theta, n):
    """Coordinates of expr in 1, theta, ..., theta^(n-1) via sympy."""
    K = sp.QQ.algebraic_field(theta)
    rep = list(K.from_sympy(sp.expand(expr)).rep)[::-1]
    rep = rep + [0] * (n - len(rep))
    return [mpq(int(r.numerator), int(r.denominator)) for r in rep]


def test_klein_images_match_sympy():
    r2, r3 = sp.sqrt(2), sp.sqrt(3)
    theta = r2 + r3
    e = catalog("Q_sqrt2_sqrt3")
    expected = {
        "s1": _power_basis_coords(-r2 + r3, theta, 4),
        "s2": _power_basis_coords(r2 - r3, theta, 4),
        "s1s2": _power_basis_coords(-r2 - r3, theta, 4),
    }
    for name, coords in expected.items():
        assert list(e.automorphism(name)(e.theta).coords) == coords
    assert aut_group(e).is_abelian()
    assert all(aut_group(e).element_order(i) <= 2 for i in range(4))


def test_zeta5_cyclic():
    e = catalog("Q_zeta5")
    g = aut_group(e)
    assert g.element_order(e.index("s")) == 4
    fix = fixed_field(e, ["id", "s2"])
    th = e.theta
    assert fix.degree == 2
    assert same_span(fix.basis, [e.carrier.one, th + th**4])


def test_f9_frobenius():
    e = catalog("Fp2(3)")
    assert e.domain == GF(3)
    assert e.minpoly == tuple(GF(3).vector([1, 0, 1]))
    frob = e.automorphism("frob")
    assert frob(e.theta) == e.theta**3 == -e.theta
    assert e.is_galois()
    assert e.irreducibility == "certified"


def test_fp4():
    e = catalog("Fp4(2)")
    assert e.degree == 4 and len(e.automorphisms) == 4
    assert aut_group(e).element_order(1) == 4


def test_unknown_catalog():
    with pytest.raises(InputError):
        catalog("Q_sqrt7")


def test_reducible_minpoly_rejected():
    with pytest.raises(InputError):
        make_extension([-1, 0, 1], [("id", [0, 1])])
    with pytest.raises(InputError):
        irreducibility(GF(5), GF(5).vector([1, 0, 1]))  # 2^2 = -1 mod 5


def test_bad_automorphism_rejected():
    with pytest.raises(InputError):
        make_extension([1, 0, 1], [("id", [0, 1]), ("bad", [1, 1])])


def test_non_closed_list():
    e = make_extension([1, 1, 1, 1, 1], [("id", [0, 1, 0, 0]), ("s", [0, 0, 1, 0])])
    with pytest.raises(VerificationError) as exc:
        aut_group(e)
    assert "closed" in exc.value.identity
    assert not e.is_galois()


def test_cube_root_not_galois():
    e = make_extension([-2, 0, 0, 1], [("id", [0, 1, 0])])
    assert e.irreducibility == "certified"
    assert not e.is_galois()
    assert fixed_field(e, ["id"]).degree == 3


def test_fixed_field_needs_subgroup(zeta5):
    with pytest.raises(ContractError):
        fixed_field(zeta5, ["s"])


def test_asserted_provenance_in_diagnostic():
    # x^4 + 4 = (x^2+2x+2)(x^2-2x+2) has no rational root, so it is only asserted
    e = make_extension([4, 0, 0, 0, 1], [("id", [0, 1, 0, 0])])
    assert e.irreducibility == "asserted"
    th = e.theta
    z = th * th + th * 2 + e.carrier.one * 2
    with pytest.raises(ContractError) as exc:
        e.inverse(z)
    assert "asserted" in str(exc.value)


def test_json_round_trip():
    e = catalog("Q_sqrt2_sqrt3")
    e2 = FieldExtension.from_json(e.to_json())
    assert e2.names == e.names
    for (_, a), (_, b) in zip(e.automorphisms, e2.automorphisms):
        assert a.matrix.rows == b.matrix.rows
    assert FieldExtension.from_json({"catalog": "gauss_Q_i"}).degree == 2


@pytest.mark.parametrize("name", ["gauss_Q_i", "Q_sqrt2", "Q_sqrt2_sqrt3", "Q_zeta5", "Fp2(3)", "Fp2(5)", "Fp4(3)"])
def test_galois_correspondence(name):
    e = catalog(name)
    g = aut_group(e)
    for s in range(g.order):
        sub = g.generated([s])
        assert fixed_field(e, sub).degree * len(sub) == e.degree
    for _, a in e.automorphisms:
        M = e.carrier
        for x, y in itertools.product(M.basis_elements(), repeat=2):
            assert a(x * y) == a(x) * a(y)


def test_klein_tower(klein):
    assert fixed_field(klein, range(4)).degree == 1
    assert fixed_field(klein, ["id", "s1"]).degree == 2


def test_s3_fixture_matches_sympy(s3_field):
    x = sp.symbols("x")
    c = sp.cbrt(2)
    w = (-1 + sp.sqrt(-3)) / 2
    theta = c + w
    mp = sp.Poly(sp.minimal_polynomial(theta, x), x).all_coeffs()[::-1]
    assert list(s3_field.minpoly) == [mpq(int(v)) for v in mp]
    images = set()
    for r in (c, c * w, c * w**2):
        for ww in (w, w**2):
            images.add(tuple(_power_basis_coords(r + ww, theta, 6)))
    got = {tuple(a(s3_field.theta).coords) for _, a in s3_field.automorphisms}
    assert got == images
    assert not aut_group(s3_field).is_abelian()
