"""Command-line interface: coefficient tables, decompositions and verification suites."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from fractions import Fraction

from .group import DataError, format_rational, install_group_data, load_group_data, reference_tables

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

COEFF_KINDS = ("eta-inverse", "H", "Z-disc", "siegel")
DECOMPOSE_KINDS = ("eta-Fock", "K", "Khat")
SUITES = ("tables", "identities", "transforms", "rademacher", "all")


class UsageError(Exception):
    pass


def _text(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    return str(v)


def _series_labels() -> list[str]:
    g = load_group_data()
    return [r.label for r in g.records]


def _classes(selector: str) -> list[str]:
    labels = _series_labels()
    if selector == "all":
        return labels
    out = []
    g = load_group_data()
    for part in selector.split(","):
        try:
            out.append(g.record(part.strip()).label)
        except KeyError:
            raise UsageError(f"unknown class {part!r}; series labels are {', '.join(labels)}") from None
    return out


def _positive(name, v):
    if v is not None and v < 1:
        raise UsageError(f"--{name} must be positive")
    return v


# coefficient tables ---------------------------------------------------------------

def coeff_rows(kind: str, label: str, order: int, p_max: int, q_max: int) -> list[tuple[str, object]]:
    if kind == "eta-inverse":
        from .classical import inverse_eta_coefficients
        return [(str(n), v) for n, v in enumerate(inverse_eta_coefficients(label, order - 1))]
    if kind == "H":
        from .mock import mock_coefficients
        vals = mock_coefficients(label, order)
        return [(str(n), vals[n]) for n in range(1, order + 1)]
    if kind == "Z-disc":
        from .jacobi import disc_table
        return [(str(D), v) for D, v in sorted(disc_table(label, order).items())]
    if kind == "siegel":
        from .siegel import borcherds_product
        S = borcherds_product(label, p_max, q_max)
        rows = sorted((tuple(int(x) for x in k), v) for k, v in S.series.items())
        return [(",".join(map(str, k)), v) for k, v in rows]
    raise UsageError(f"unknown kind {kind!r}")


def cmd_coeffs(args) -> tuple[list[dict], int]:
    order = _positive("order", args.order) or 10
    p_max = _positive("pmax", args.pmax) or 4
    q_max = _positive("qmax", args.qmax) or 4
    tables = []
    for label in _classes(args.cls):
        if args.kind == "siegel":
            orders = {"pmax": p_max, "qmax": q_max}
        else:
            orders = {"order": order}
        rows = coeff_rows(args.kind, label, order, p_max, q_max)
        tables.append({"kind": args.kind, "class": label, "orders": orders,
                       "rows": [{"index": i, "value": _text(v)} for i, v in rows]})
    return tables, EXIT_OK


# decompositions -----------------------------------------------------------------

def _decomposition(kind: str, index: int):
    if kind == "eta-Fock":
        from .classical import fock_decomposition
        return fock_decomposition(index)
    if kind == "K":
        from .mock import kn_decomposition
        return kn_decomposition(index)
    from .jacobi import khat_decomposition
    return khat_decomposition(index)


def decomposition_flags(kind: str, mult: dict) -> list[str]:
    """Problems that disqualify a decomposition as a (virtual) module."""
    g = load_group_data()
    flags = []
    for irr, m in mult.items():
        if Fraction(m).denominator != 1:
            flags.append(f"non-integral multiplicity of {irr}")
    if kind in ("eta-Fock", "K"):
        flags += [f"negative multiplicity of {irr}" for irr, m in mult.items() if m < 0]
    if kind == "K":
        for irr, m in mult.items():
            partner = g.table.conjugate_irreducible(irr)
            if partner == irr and m % 2:
                flags.append(f"odd multiplicity of self-conjugate {irr}")
            elif mult[partner] != m:
                flags.append(f"{irr} and {partner} differ")
    return flags


def cmd_decompose(args) -> tuple[list[dict], int]:
    depth = args.order if args.order is not None else (20 if args.kind == "Khat" else 10)
    if args.kind == "Khat":
        if depth < -1:
            raise UsageError("--order for Khat is the largest discriminant, at least -1")
        indices = [D for D in range(-1, depth + 1) if D % 4 in (0, 3)]
    else:
        _positive("order", depth)
        indices = list(range(1, depth + 1))
    irreps = load_group_data().table.irreducibles
    rows, status = [], EXIT_OK
    for i in indices:
        mult = _decomposition(args.kind, i)
        flags = decomposition_flags(args.kind, mult)
        if flags:
            status = EXIT_FAIL
        rows.append({"index": str(i), "multiplicities": [_text(mult[r]) for r in irreps], "flags": flags})
    return [{"kind": args.kind, "irreducibles": list(irreps), "rows": rows}], status


# verification suites --------------------------------------------------------------

def _report(check, label, ok, detail=""):
    return {"check": check, "class": label, "status": "pass" if ok else "fail", "detail": _text(detail)}


def _guard(check, label, fn):
    try:
        ok, detail = fn()
    except (AssertionError, ArithmeticError, ValueError, KeyError) as e:
        ok, detail = False, f"{type(e).__name__}: {e}"
    return _report(check, label, ok, detail)


def suite_tables(args):
    from .classical import fock_decomposition, inverse_eta_coefficients
    from .jacobi import disc_table, khat_decomposition
    from .mock import kn_decomposition, mock_coefficients

    g = load_group_data()
    ref = reference_tables()
    classes = g.table.classes
    irreps = g.table.irreducibles

    def table_check(name, keys, compute):
        bad = []
        for k in keys:
            got = compute(k)
            if got != ref[name][k]:
                bad.append(k)
        return not bad, f"mismatched rows {bad}" if bad else f"{len(keys)} rows"

    series = {c: g.series_label(c) for c in classes}
    d_max = max(int(k) for k in ref["disc"])
    yield _guard("eta-inverse table", "all", lambda: table_check(
        "eta_inverse", list(ref["eta_inverse"]),
        lambda k: [inverse_eta_coefficients(series[c], 9)[int(k)] for c in classes]))
    yield _guard("Fock decomposition", "all", lambda: table_check(
        "fock", list(ref["fock"]), lambda k: [fock_decomposition(int(k))[r] for r in irreps]))
    yield _guard("mock coefficients", "all", lambda: table_check(
        "mock", list(ref["mock"]), lambda k: [mock_coefficients(series[c], 9)[int(k)] for c in classes]))
    yield _guard("K decomposition", "all", lambda: table_check(
        "k_decomposition", list(ref["k_decomposition"]), lambda k: [kn_decomposition(int(k))[r] for r in irreps]))
    yield _guard("discriminant coefficients", "all", lambda: table_check(
        "disc", list(ref["disc"]), lambda k: [disc_table(series[c], d_max)[int(k)] for c in classes]))
    yield _guard("Khat decomposition", "all", lambda: table_check(
        "khat", list(ref["khat"]), lambda k: [khat_decomposition(int(k))[r] for r in irreps]))


def suite_identities(args):
    from .classical import t_tilde
    from .jacobi import (check_discriminant_property, euler_specialization, k3_genus_via_thetas,
                         symmetric_product, symmetric_product_1A_via_product, zg_via_characters,
                         zg_via_generators)
    from .siegel import borcherds_product, double_zero_limit, eta_pair
    from .series import ExactSeries, Q

    g = load_group_data()
    depth = args.order or 12
    p_max = args.pmax or 4
    q_max = args.qmax or 4
    window = args.ywindow or 6
    labels = _classes(args.cls)
    for r in g.records:
        if r.t_tilde_alt is not None and r.label in labels:
            yield _guard("two expressions for T_g", r.label, lambda r=r: (
                t_tilde(r, depth).agrees(t_tilde(r, depth, alternate=True)), f"q < {depth}"))
    if "1A" in labels:
        yield _guard("generators vs theta quotients", "1A", lambda: (
            zg_via_generators("1A", depth).series.agrees(k3_genus_via_thetas(depth).series), f"q < {depth}"))
    for lab in labels:
        def disc_and_index(lab=lab):
            Z = zg_via_generators(lab, depth)
            n = check_discriminant_property(Z)
            chi = g.record(lab).chi
            at_zero = Z.series.substitute_one("y")
            ok = at_zero.agrees(ExactSeries.from_dict(Q, {(0,): chi}, hi=(depth,)))
            return ok, f"{n} coefficients; Z(tau, 0) = {chi}" if ok else "Z(tau, 0) is not constant"
        yield _guard("discriminant property and Witten index", lab, disc_and_index)
        T = min(depth, 6)
        yield _guard("generators vs characters", lab, lambda lab=lab, T=T: (
            zg_via_generators(lab, T).series.truncate(y=window).agrees(zg_via_characters(lab, T, window).series),
            f"q < {T}, y < {window}"))
    if "1A" in labels:
        def sqeg():
            S = symmetric_product("1A", p_max, q_max)
            same = S.agrees(symmetric_product_1A_via_product(p_max, q_max))
            euler = S.substitute_one("y").agrees(euler_specialization(p_max))
            return same and euler, f"(p, q) <= ({p_max}, {q_max}); product {same}, y = 1 {euler}"
        yield _guard("second-quantised genus", "1A", sqeg)
    for lab in labels:
        def siegel(lab=lab):
            S = borcherds_product(lab, p_max, q_max)
            return double_zero_limit(S).agrees(eta_pair(lab, p_max, q_max)), f"(p, q) <= ({p_max}, {q_max})"
        yield _guard("double zero of the lift", lab, siegel)


def suite_transforms(args):
    from . import analytic as an

    g = load_group_data()
    tol = args.tolerance
    rng = random.Random(20240)
    tau0 = 0.1 + 1.3j

    def eta_check():
        worst = max(an.eta_multiplier_residual(an.random_sl2z(rng, 3), tau0, 60) for _ in range(20))
        return worst < (tol or 1e-8), worst
    yield _guard("eta multiplier", "1A", eta_check)
    for lab in _classes(args.cls):
        c = g.record(lab)
        elements = [an.random_gamma0(c.n, rng) for _ in range(10)]

        def slash(c=c, elements=elements):
            worst = max(an.slash_inverse_eta_g(c, x, an.sample_point(x)) for x in elements)
            return worst < (tol or 1e-6), worst
        yield _guard("inverse eta product slash invariance", lab, slash)

        def completion(lab=lab, elements=elements):
            worst = max(an.completion_residual(lab, x, an.sample_point(x)) for x in elements[:5])
            return worst < (tol or 1e-4), worst
        yield _guard("completed mock form transformation", lab, completion)

        def jacobi(lab=lab, elements=elements):
            worst = max(an.check_jacobi_transform(lab, x, an.sample_point(x), 0.1 + 0.02j) for x in elements[:3])
            return worst < (tol or 1e-4), worst
        yield _guard("Jacobi transformation", lab, jacobi)


def suite_rademacher(args):
    from . import analytic as an

    tau = 0.1 + 0.8j

    def trend():
        H = an.mock_value("1A", tau)
        errs = [abs(-2 * an.rademacher_sum("1A", tau, K) - H) for K in (25, 50, 100)]
        ok = errs[0] >= errs[1] >= errs[2] and errs[2] < (args.tolerance or 1e-1)
        return ok, " ".join(f"{x:.3g}" for x in errs)
    yield _guard("Rademacher trend K = 25, 50, 100", "1A", trend)


SUITE_FUNCS = {"tables": suite_tables, "identities": suite_identities,
               "transforms": suite_transforms, "rademacher": suite_rademacher}


def cmd_verify(args) -> tuple[list[dict], int]:
    names = list(SUITE_FUNCS) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        for rep in SUITE_FUNCS[name](args):
            rep = {"suite": name, **rep}
            reports.append(rep)
            if args.stream:
                args.stream(rep)
    status = EXIT_FAIL if any(r["status"] == "fail" for r in reports) else EXIT_OK
    return reports, status


# rendering ----------------------------------------------------------------------------

def render(command: str, payload: list[dict], fmt: str) -> str:
    if fmt == "json":
        if command == "verify":
            return "".join(json.dumps(r) + "\n" for r in payload)
        body = payload[0] if len(payload) == 1 else payload
        return json.dumps(body, indent=2) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if command == "coeffs":
            w.writerow(["kind", "class", "index", "value"])
            for t in payload:
                for r in t["rows"]:
                    w.writerow([t["kind"], t["class"], r["index"], r["value"]])
        elif command == "decompose":
            t = payload[0]
            w.writerow(["kind", "index", *t["irreducibles"], "flags"])
            for r in t["rows"]:
                w.writerow([t["kind"], r["index"], *r["multiplicities"], "; ".join(r["flags"])])
        else:
            w.writerow(["suite", "check", "class", "status", "detail"])
            for r in payload:
                w.writerow([r["suite"], r["check"], r["class"], r["status"], r["detail"]])
        return buf.getvalue()
    # human table
    lines = []
    if command == "coeffs":
        for t in payload:
            lines.append(f"{t['kind']} {t['class']} " + " ".join(f"{k}={v}" for k, v in t["orders"].items()))
            width = max((len(r["index"]) for r in t["rows"]), default=1)
            lines += [f"  {r['index']:>{width}}  {r['value']}" for r in t["rows"]]
    elif command == "decompose":
        t = payload[0]
        head = ["n"] + t["irreducibles"]
        rows = [[r["index"]] + r["multiplicities"] for r in t["rows"]]
        widths = [max(len(x) for x in col) for col in zip(head, *rows)]
        lines.append(" ".join(h.rjust(w) for h, w in zip(head, widths)))
        for r, src in zip(rows, t["rows"]):
            line = " ".join(x.rjust(w) for x, w in zip(r, widths))
            if src["flags"]:
                line += "   ! " + "; ".join(src["flags"])
            lines.append(line)
    else:
        for r in payload:
            lines.append(f"{r['status'].upper():4}  {r['suite']:<10} {r['check']:<40} {r['class']:<5} {r['detail']}")
    return "\n".join(lines) + "\n"


# entry point ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--class", dest="cls",
                        help="series label, comma-separated list, or 'all' "
                             "(default 1A; 'all' for verify)")
    common.add_argument("--order", type=int, help="number of rows, depth, or largest discriminant")
    common.add_argument("--pmax", type=int, help="largest p-order for lifts")
    common.add_argument("--qmax", type=int, help="largest q-order for lifts")
    common.add_argument("--ywindow", type=int, help="y-window for windowed expansions")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--tolerance", type=float, help="override numeric tolerances")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--data", help="alternative group data file (validated on load)")

    p = _Parser(prog="m24forms", description="Exact tables and checks for the M24 modular objects.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("coeffs", parents=[common], help="coefficient tables")
    c.add_argument("kind", choices=COEFF_KINDS)
    d = sub.add_parser("decompose", parents=[common], help="decompositions into irreducibles")
    d.add_argument("kind", choices=DECOMPOSE_KINDS)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"m24forms: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    if args.cls is None:
        args.cls = "all" if args.command == "verify" else "1A"
    out = open(args.out, "w") if args.out else sys.stdout
    args.stream = None
    if args.command == "verify" and args.format != "csv" and not args.out:
        # stream reports as they complete
        def stream(rep):
            out.write(render("verify", [rep], args.format))
            out.flush()
        args.stream = stream
    try:
        if args.data:
            install_group_data(args.data)
        else:
            load_group_data()
        handler = {"coeffs": cmd_coeffs, "decompose": cmd_decompose, "verify": cmd_verify}[args.command]
        start = time.perf_counter()
        payload, status = handler(args)
        if args.stream is None:
            out.write(render(args.command, payload, args.format))
        elif args.format == "table":
            out.write(f"{'FAIL' if status else 'PASS'}  {time.perf_counter() - start:.1f} s\n")
        return status
    except UsageError as e:
        print(f"m24forms: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"m24forms: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:  # truncation too small and similar
        from .series import WindowError
        if isinstance(e, WindowError):
            print(f"m24forms: error: {e}", file=sys.stderr)
            return EXIT_USAGE
        raise
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
