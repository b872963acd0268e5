"""Command-line front end.

Every command prints a JSON report (sorted keys) on stdout. Exit codes:
0 all checks pass, 1 a verification failed (or the group is not solvable),
2 malformed input or an unmet precondition, 3 the answer is undetermined
(use --allow-undetermined to turn that into 0).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field

from .abelianchain import (
    AbelianChainParams,
    build_abelian_chain,
    cyclic_chain,
    division_probe,
    verify_center_is_base,
    verify_inner_order,
)
from .crossed import (
    CrossedProduct,
    FactorSet,
    centralizer_identity_check,
    decompose_chain,
    validate_cocycle,
)
from .errors import ContractError, InputError, VerificationError
from .fgalg import StructureAlgebra, morphism_order, same_span
from .fieldext import FieldExtension, aut_group
from .groups import FiniteGroup, SolvableSeries, composition_series, is_solvable
from .skewpoly import GeneralizedCyclicSpec, SearchSpec, generalized_cyclic

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2, 3


class Failure(Exception):
    """A command-level failure with a fixed exit code."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    command: str
    inputs_digest: str = ""
    verdicts: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    error: str | None = None
    exit_code: int = 0

    def to_json(self):
        out = {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "verdicts": dict(sorted(self.verdicts.items())),
            "artifacts": self.artifacts,
            "timing": self.timing,
            "exit_code": self.exit_code,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj):
        return cls(
            command=obj["command"],
            inputs_digest=obj["inputs_digest"],
            verdicts=obj["verdicts"],
            artifacts=obj["artifacts"],
            timing=obj["timing"],
            error=obj.get("error"),
            exit_code=obj["exit_code"],
        )


def _pf(ok):
    return "pass" if ok else "fail"


def _load(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise Failure(EXIT_INPUT, f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(raw), raw
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise Failure(EXIT_INPUT, f"{path} is not valid JSON: {exc}") from exc


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".skewlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# descriptors


def _extension(obj):
    if "extension" not in obj:
        raise InputError("descriptor has no 'extension'")
    return FieldExtension.from_json(obj["extension"])


def _base_scalar(ext, v, what):
    """A base-field scalar given as "p/q" or as an M-coordinate list in F."""
    dom = ext.domain
    if isinstance(v, list):
        coords = ext.element(v).coords
        if any(coords[1:]):
            raise ContractError(f"{what} must lie in the base field")
        return coords[0]
    return dom.convert(v)


def _factor_set(obj):
    fs_obj = obj.get("factor_set", obj)
    return FactorSet.from_json(fs_obj)


def _crossed(obj):
    fs = _factor_set(obj)
    report = validate_cocycle(fs)
    if not report.ok:
        raise VerificationError("cocycle", report.detail)
    return CrossedProduct(fs)


def _series(g, spec):
    if spec in (None, "auto"):
        return composition_series(g)
    if isinstance(spec, dict):
        spec = spec.get("subgroups")
    if not isinstance(spec, list):
        raise InputError("series must be 'auto' or a list of subgroups")
    return SolvableSeries.from_subgroups(g, spec)


def _chain_params(obj):
    ext = _extension(obj)
    g = aut_group(ext)
    if not g.is_abelian():
        raise ContractError("abelian-chain needs an abelian automorphism group")
    series = _series(g, obj.get("series", "auto"))
    c0 = _base_scalar(ext, obj.get("c0"), "c0")
    ls = [_base_scalar(ext, x, "l_i") for x in obj.get("l", [])]
    return AbelianChainParams(ext, c0, ls, series)


def _cyclic_spec(obj):
    ext = _extension(obj)
    sigma = ext.automorphism(obj.get("sigma", 1))
    d = obj.get("d")
    if d is None:
        raise InputError("cyclic descriptor needs 'd'")
    d = ext.element(d) if isinstance(d, list) else ext.carrier.scalar(ext.domain.convert(d))
    m = int(obj.get("m", morphism_order(sigma)))
    return GeneralizedCyclicSpec(ext.carrier, sigma, d, m)


def _kind_of(obj):
    kind = obj.get("kind")
    if kind in ("crossed", "crossed-product"):
        return "crossed"
    if kind in ("cyclic", "abelian-chain"):
        return kind
    if "c0" in obj:
        return "abelian-chain"
    if "d" in obj:
        return "cyclic"
    if "entries" in obj or "factor_set" in obj or "default" in obj:
        return "crossed"
    raise InputError("cannot tell what kind of descriptor this is")


def _descriptor(obj):
    """The construction descriptor inside an artifact, or the object itself."""
    return obj.get("descriptor", obj) if isinstance(obj, dict) else obj


# ---------------------------------------------------------------------------
# commands


def cmd_validate_cocycle(args, report):
    obj, _ = args.loaded
    fs = _factor_set(obj)
    r = validate_cocycle(fs)
    report.verdicts["cocycle"] = _pf(r.ok)
    report.artifacts["cocycle"] = r.to_json()
    if not r.ok:
        report.error = r.detail
    return EXIT_PASS if r.ok else EXIT_FAIL


def _build_crossed(obj, report):
    cp = _crossed(obj)
    report.verdicts["cocycle"] = "pass"
    report.verdicts["crossed_product_relations"] = "pass"
    report.verdicts["associative"] = "pass"
    report.verdicts["center_is_fixed_field"] = "pass"
    art = cp.to_json()
    art["descriptor"] = cp.factor_set.to_json()
    return art


def _build_cyclic(obj, report):
    spec = _cyclic_spec(obj)
    res = generalized_cyclic(spec)
    report.verdicts["invariant"] = "pass"
    report.verdicts["associative"] = _pf(res.algebra.associative)
    report.verdicts["centralizer_of_S"] = _pf(res.centralizer_is_center_of_S)
    fmt = spec.S.domain.format
    return {
        "kind": "cyclic",
        "descriptor": {
            "kind": "cyclic",
            "extension": obj["extension"],
            "sigma": obj.get("sigma", 1),
            "d": [fmt(c) for c in spec.d.coords],
            "m": spec.m,
        },
        "algebra": res.algebra.to_json(),
        "names": res.algebra.names,
        "center": [z.to_json() for z in res.center],
        "center_dim": res.center_dim,
        "degree": res.degree,
    }


def _build_chain(obj, report):
    params = _chain_params(obj)
    ch = build_abelian_chain(params)
    orders = [verify_inner_order(ch, i) for i in range(len(ch.levels))]
    for o in orders:
        report.verdicts[f"inner_order_level_{o['level']}"] = _pf(o["ok"])
    cb = verify_center_is_base(ch)
    report.verdicts["center_is_base"] = _pf(cb["ok"])
    report.verdicts["invariant"] = "pass"
    report.verdicts["dimension"] = "pass"
    ext = params.extension
    fmt = ext.domain.format
    desc = {
        "kind": "abelian-chain",
        "extension": obj["extension"],
        "series": params.series.to_json(params.group)["subgroups"],
        "c0": fmt(params.c0),
        "l": [fmt(x) for x in params.l],
    }
    if "probe" in obj:
        desc["probe"] = obj["probe"]
    return {
        "kind": "abelian-chain",
        "descriptor": desc,
        "chain": ch.to_json(),
        "algebra": ch.top.to_json(),
        "center_dim": len(ch.centers[-1]),
        "inner_order": orders,
    }


def cmd_build(args, report):
    obj, _ = args.loaded
    obj = _descriptor(obj)
    kind = args.kind
    declared = obj.get("kind")
    if declared is not None and _kind_of(obj) != kind:
        raise InputError(f"descriptor is of kind {declared!r}, not {kind!r}")
    art = {"crossed": _build_crossed, "cyclic": _build_cyclic, "abelian-chain": _build_chain}[kind](obj, report)
    report.artifacts["build"] = {k: v for k, v in art.items() if k not in ("algebra",)}
    report.artifacts["build"]["dim"] = art["algebra"]["dim"]
    if args.out:
        write_atomic(args.out, _dump(art))
    return EXIT_PASS if all(v == "pass" for v in report.verdicts.values()) else EXIT_FAIL


def cmd_decompose(args, report):
    obj, _ = args.loaded
    if isinstance(obj.get("group"), dict):
        g = FiniteGroup.from_json(obj["group"])
        if not is_solvable(g):
            report.verdicts["is_solvable"] = "fail"
            raise Failure(EXIT_FAIL, f"group of order {g.order} is not solvable (is_solvable)")
    cp = _crossed(_descriptor(obj) if "factor_set" not in obj else obj)
    g = cp.group
    if isinstance(obj.get("group"), dict) and FiniteGroup.from_json(obj["group"]).table != g.table:
        raise InputError("artifact group table does not match the extension's automorphism group")
    if not is_solvable(g):
        report.verdicts["is_solvable"] = "fail"
        raise Failure(EXIT_FAIL, "automorphism group is not solvable (is_solvable)")
    report.verdicts["is_solvable"] = "pass"
    if args.series == "auto":
        series = composition_series(g)
    else:
        sobj, _ = _load(args.series)
        series = _series(g, sobj)
    chain = decompose_chain(cp, series)
    names = sorted({k for lv in chain.levels for k in lv.checks})
    for k in names:
        report.verdicts[k] = _pf(all(lv.checks.get(k, True) for lv in chain.levels))
    cent = centralizer_identity_check(chain)
    report.verdicts["centralizer_identity"] = _pf(all(c["ok"] for c in cent))
    art = chain.to_json()
    art["centralizer_identity"] = cent
    report.artifacts["chain"] = art
    if args.out:
        write_atomic(args.out, _dump(art))
    return EXIT_PASS if all(v == "pass" for v in report.verdicts.values()) else EXIT_FAIL


def cmd_probe_division(args, report):
    obj, _ = args.loaded
    desc = _descriptor(obj)
    kind = _kind_of(desc)
    if kind == "abelian-chain":
        chain = build_abelian_chain(_chain_params(desc))
    elif kind == "cyclic":
        chain = cyclic_chain(_cyclic_spec(desc))
    else:
        raise InputError("probe-division needs a chain or cyclic descriptor")
    if args.exhaustive:
        search = SearchSpec(mode="exhaustive", limit=None)
    elif args.height is not None:
        search = SearchSpec(mode="height", bound=args.height, limit=args.limit)
    else:
        search = SearchSpec.from_json(desc.get("probe"))
    pr = division_probe(chain, search)
    report.artifacts["probe"] = pr.to_json()
    if pr.verdict.startswith("undetermined"):
        report.verdicts["division_probe"] = "undetermined"
        return EXIT_PASS if args.allow_undetermined else EXIT_UNDETERMINED
    report.verdicts["division_probe"] = "pass"
    return EXIT_PASS


def _algebra(obj):
    if "structconsts" in obj:
        return StructureAlgebra.from_json(obj)
    if "algebra" in obj:
        return StructureAlgebra.from_json(obj["algebra"])
    raise InputError("no algebra found in input")


def cmd_center(args, report):
    obj, _ = args.loaded
    A = _algebra(obj)
    cen = A.center()
    report.artifacts["center"] = {"dim": len(cen), "basis": [z.to_json() for z in cen]}
    report.verdicts["associative"] = "pass"
    return EXIT_PASS


def _gens(A, spec):
    spec = spec.strip()
    if spec.startswith("["):
        try:
            vecs = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad --gens JSON: {exc}") from exc
        return [A.element(v) for v in vecs]
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if tok in A.names:
            out.append(A.basis(A.names.index(tok)))
        elif tok.isdigit() and int(tok) < A.dim:
            out.append(A.basis(int(tok)))
        else:
            raise InputError(f"unknown basis element {tok!r}")
    return out


def cmd_centralizer(args, report):
    obj, _ = args.loaded
    A = _algebra(obj)
    if "names" in obj and len(obj["names"]) == A.dim:
        A.names = list(obj["names"])
    gens = _gens(A, args.gens)
    cent = A.centralizer(gens)
    report.artifacts["centralizer"] = {"dim": len(cent), "basis": [z.to_json() for z in cent]}
    report.artifacts["self_centralizing"] = same_span(cent, [A.one] + gens)
    return EXIT_PASS


COMMANDS = {
    "validate-cocycle": cmd_validate_cocycle,
    "build": cmd_build,
    "decompose": cmd_decompose,
    "probe-division": cmd_probe_division,
    "center": cmd_center,
    "centralizer": cmd_centralizer,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", default=argparse.SUPPRESS, help="also write the JSON report to this file")
    common.add_argument("--text", action="store_true", default=argparse.SUPPRESS,
                        help="print a short text summary instead of JSON")
    p = argparse.ArgumentParser(prog="skewlab", description="Crossed products and twisted polynomial algebras.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("validate-cocycle", help="check the cocycle identity of a factor set")
    s.add_argument("path")

    s = sub.add_parser("build", help="construct an algebra from a descriptor")
    s.add_argument("path")
    s.add_argument("--kind", required=True, choices=["crossed", "cyclic", "abelian-chain"])
    s.add_argument("--out", help="write the artifact JSON here")

    s = sub.add_parser("decompose", help="split a crossed product along a solvable series")
    s.add_argument("path")
    s.add_argument("--series", default="auto", help="'auto' or a JSON file with subgroups")
    s.add_argument("--out")

    s = sub.add_parser("probe-division", help="search for norm-condition witnesses")
    s.add_argument("path")
    grp = s.add_mutually_exclusive_group()
    grp.add_argument("--height", type=int)
    grp.add_argument("--exhaustive", action="store_true")
    s.add_argument("--limit", type=int, default=50_000, help="candidate cap per level for --height")
    s.add_argument("--allow-undetermined", action="store_true")

    s = sub.add_parser("center", help="center of an algebra")
    s.add_argument("path")

    s = sub.add_parser("centralizer", help="centralizer of generators")
    s.add_argument("path")
    s.add_argument("--gens", required=True, help="comma-separated basis names/indices or JSON coordinate list")
    return p


def _text(report):
    lines = [f"{report.command}: exit {report.exit_code}"]
    for k, v in sorted(report.verdicts.items()):
        lines.append(f"  {k}: {v}")
    if report.error:
        lines.append(f"  error: {report.error}")
    probe = report.artifacts.get("probe")
    if probe:
        lines.append(f"  verdict: {probe['verdict']}")
    return "\n".join(lines) + "\n"


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    args.report = getattr(args, "report", None)
    args.text = getattr(args, "text", False)
    report = RunReport(command=args.command)
    t0 = time.perf_counter()
    try:
        args.loaded = _load(args.path)
        h = hashlib.sha256(args.loaded[1])
        extras = {k: v for k, v in sorted(vars(args).items()) if k not in ("loaded", "path", "out", "report", "text")}
        h.update(json.dumps(extras, sort_keys=True, default=str).encode())
        report.inputs_digest = h.hexdigest()
        code = COMMANDS[args.command](args, report)
    except Failure as exc:
        code, report.error = exc.code, str(exc)
    except VerificationError as exc:
        code, report.error = EXIT_FAIL, f"verification failed: {exc}"
        report.verdicts[exc.identity] = "fail"
    except (InputError, ContractError) as exc:
        code, report.error = EXIT_INPUT, str(exc)
    report.exit_code = code
    report.timing = {"seconds": round(time.perf_counter() - t0, 6)}
    stdout.write(_text(report) if args.text else report.dumps())
    if args.report:
        write_atomic(args.report, report.dumps())
    return code


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
