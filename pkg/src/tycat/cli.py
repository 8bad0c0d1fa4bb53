"""Command-line interface.

Every subcommand validates its inputs before computing, writes UTF-8 JSON
to stdout (DOT text for graph commands with --dot), and reserves stderr
for diagnostics.  Exit codes: 0 success, 1 domain error, 2 usage error.
Exact values serialize as rational strings next to an advisory float block.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .cyclo import RootOfUnity
from .errors import TycatError
from .fusionrings import (
    check_fusion_ring,
    gen_mp_fusion_ring,
    gen_ty_fusion_ring,
    ty_dual_hypergroup_and_table,
    ty_fusion_ring,
    ty_hypergroup,
)
from .graphs import dual_principal_graph, emit_dot, principal_graph
from .groups import FinAbGroup
from .lattices import (
    EvenLattice,
    count_roots,
    discriminant_form,
    glue,
    named_lattice,
    orthogonal_sum,
)
from .moddata import (
    bantay_fs,
    md_equivalent,
    md_from_json,
    md_to_json,
    mp_md,
    pointed_md,
    ty_center_md,
    verify_condensation,
    verlinde_fusion,
)
from .quadforms import (
    Bichar,
    QuadForm,
    bichar_from_qform,
    classify_metric_groups,
    gauss_central_charge,
    metric_group,
)


def _rat(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _parse_group(spec: str) -> FinAbGroup:
    return FinAbGroup.of([int(x) for x in spec.split(",") if x.strip()])


def _parse_lattice(spec: str) -> EvenLattice:
    if spec.endswith(".json") or os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return EvenLattice.from_json(json.load(fh))
    parts = [p.strip() for p in spec.split("+") if p.strip()]
    lat = named_lattice(parts[0])
    for p in parts[1:]:
        lat = orthogonal_sum(lat, named_lattice(p))
    return lat


def _parse_qform(spec: str, group: FinAbGroup) -> QuadForm:
    if spec == "default":
        return classify_metric_groups(group)[0].quad
    exps = [Fraction(x) for x in spec.split(",")]
    return QuadForm.from_exponents(group, exps)


def _parse_bichar(spec: str, group: FinAbGroup) -> Bichar:
    if spec == "default":
        return classify_metric_groups(group)[0].bichar
    rows = [
        tuple(RootOfUnity(Fraction(x)) for x in row.split(","))
        for row in spec.split(";")
    ]
    b = Bichar(group, tuple(rows))
    b.validate()
    return b


def _load_md(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return md_from_json(json.load(fh))


def _qform_payload(group: FinAbGroup, q: QuadForm) -> dict:
    return {
        "group": list(group.invariant_factors),
        "qform": [_rat(v.exponent) for v in q.values],
        "central_charge": gauss_central_charge(q),
        "approx": [
            [v.to_complex().real, v.to_complex().imag] for v in q.values
        ],
    }


# -- subcommand bodies ----------------------------------------------------------


def _cmd_disc(args) -> int:
    lat = _parse_lattice(args.lattice)
    disc = discriminant_form(lat)
    _emit(_qform_payload(disc.group, disc.qform))
    return 0


def _cmd_glue(args) -> int:
    lat = _parse_lattice(args.lattice)
    disc = discriminant_form(lat)
    gens = []
    for part in args.isotropic.split(";"):
        part = part.strip()
        if part:
            gens.append(disc.group.element([int(x) for x in part.split(",")]))
    out = glue(lat, gens)
    payload = {
        "gram": [list(r) for r in out.gram],
        "rank": out.rank,
        "det": out.determinant,
    }
    if out.rank <= 8:
        payload["root_count"] = count_roots(out)
    _emit(payload)
    return 0


def _cmd_classify(args) -> int:
    group = _parse_group(args.group)
    reps = classify_metric_groups(group)
    _emit(
        {
            "group": list(group.invariant_factors),
            "metric_classes": len(reps),
            "mp_classes": 2 * len(reps),
            "qforms": [[_rat(v.exponent) for v in m.quad.values] for m in reps],
        }
    )
    return 0


def _cmd_md(args) -> int:
    group = _parse_group(args.group)
    sign = 1 if args.sign == "+" else -1
    if args.kind == "pointed":
        q = _parse_qform(args.qform, group)
        md = pointed_md(metric_group(q))
    else:
        if args.bichar is not None:
            b = _parse_bichar(args.bichar, group)
        else:
            b = bichar_from_qform(_parse_qform(args.qform, group))
        if args.kind == "ty-center":
            md = ty_center_md(group, b, sign)
        else:
            md = mp_md(group, b, sign)
    _emit(md_to_json(md))
    return 0


def _cmd_fusion(args) -> int:
    if args.from_md:
        ring = verlinde_fusion(_load_md(args.from_md))
    else:
        group = _parse_group(args.group)
        builder = {
            "ty": ty_fusion_ring,
            "genty": gen_ty_fusion_ring,
            "genmp": gen_mp_fusion_ring,
        }[args.rules]
        ring = builder(group)
    report = check_fusion_ring(ring)
    _emit(
        {
            "ring": ring.to_json(),
            "check": {
                "ok": report.ok,
                "violations": [[k, list(t)] for k, t in report.violations],
                "fp_dims": report.fp_dims,
                "global_dim": report.global_dim,
            },
        }
    )
    return 0


def _cmd_fs(args) -> int:
    md = _load_md(args.md)
    label = md.label_named(args.label)
    _emit({"label": args.label, "nu": bantay_fs(md, label)})
    return 0


def _cmd_equiv(args) -> int:
    a = _load_md(args.a)
    b = _load_md(args.b)
    w = md_equivalent(a, b)
    if w is None:
        _emit({"witness": None})
    else:
        _emit(
            {
                "witness": {
                    "mapping": list(w.mapping),
                    "zeta_exponent": _rat(w.zeta.exponent),
                }
            }
        )
    return 0


def _cmd_condense(args) -> int:
    parent = _load_md(args.parent)
    child = _load_md(args.child)
    bosons = []
    for part in args.bosons.split(","):
        part = part.strip()
        if not part:
            continue
        bosons.append(int(part) if part.isdigit() else parent.label_named(part))
    cert = verify_condensation(parent, child, bosons)
    if cert is None:
        _emit({"certificate": None})
    else:
        _emit(
            {
                "certificate": {
                    "matrix": [list(r) for r in cert.matrix],
                    "zeta_exponent": _rat(cert.zeta.exponent),
                }
            }
        )
    return 0


def _cmd_graph(args) -> int:
    group = _parse_group(args.group)
    builder = principal_graph if args.which == "lr-principal" else dual_principal_graph
    graph = builder(group)
    if args.dot:
        sys.stdout.write(emit_dot(graph))
    else:
        _emit(graph.to_json())
    return 0


def _cmd_hypergroup(args) -> int:
    group = _parse_group(args.group)
    payload = {"hypergroup": ty_hypergroup(group).to_json()}
    if args.table:
        dual, table = ty_dual_hypergroup_and_table(group)
        payload["dual"] = dual.to_json()
        payload["character_table"] = table.to_json()
    _emit(payload)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tycat",
        description=(
            "exact modular data, fusion rules, lattices, and graphs for "
            "Tambara-Yamagami doubles and metaplectic modular categories"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disc", help="discriminant form of an even lattice")
    p.add_argument("--lattice", required=True, help="name (A2, E8, A2+E6) or gram JSON path")
    p.set_defaults(func=_cmd_disc)

    p = sub.add_parser("glue", help="glue an isotropic subgroup onto a lattice")
    p.add_argument("--lattice", required=True)
    p.add_argument(
        "--isotropic",
        required=True,
        help="generator coordinates in the discriminant group, e.g. '1,1' or '1,0;0,1'",
    )
    p.set_defaults(func=_cmd_glue)

    p = sub.add_parser("classify", help="metric-group classes on a finite abelian group")
    p.add_argument("--group", required=True, help="cyclic orders, e.g. '15' or '3,3'")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("md", help="construct modular data")
    p.add_argument("kind", choices=["pointed", "ty-center", "mp"])
    p.add_argument("--group", required=True)
    p.add_argument("--qform", default="default", help="'default' or value exponents r(g)")
    p.add_argument("--bichar", default=None, help="'default' or generator exponent rows")
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.set_defaults(func=_cmd_md)

    p = sub.add_parser("fusion", help="fusion ring from rules or from modular data")
    p.add_argument("--from-md", dest="from_md", default=None, help="modular data JSON path")
    p.add_argument("--rules", choices=["ty", "genty", "genmp"], default=None)
    p.add_argument("--group", default=None)
    p.set_defaults(func=_cmd_fusion)

    p = sub.add_parser("fs", help="Frobenius-Schur indicator of a label")
    p.add_argument("--md", required=True)
    p.add_argument("--label", required=True)
    p.set_defaults(func=_cmd_fs)

    p = sub.add_parser("equiv", help="search for an equivalence of two modular data")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("condense", help="branching certificate for a condensation")
    p.add_argument("--parent", required=True)
    p.add_argument("--child", required=True)
    p.add_argument("--bosons", required=True, help="parent label indices or names")
    p.set_defaults(func=_cmd_condense)

    p = sub.add_parser("graph", help="principal graphs of the double subfactor")
    p.add_argument("which", choices=["lr-principal", "lr-dual"])
    p.add_argument("--group", required=True)
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("hypergroup", help="Tambara-Yamagami hypergroup data")
    p.add_argument("--group", required=True)
    p.add_argument("--table", action="store_true", help="include the dual and character table")
    p.set_defaults(func=_cmd_hypergroup)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "fusion" and not args.from_md:
        if not (args.rules and args.group):
            parser.error("fusion needs --from-md or both --rules and --group")
    try:
        return args.func(args)
    except TycatError as exc:
        _emit({"error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _emit({"error": f"{type(exc).__name__}: {exc}"})
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
