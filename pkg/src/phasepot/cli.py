"""
Command-line front end
======================

Thin client of the HTTP service: every subcommand marshals its flags into a
request model, posts it to the service (mounted in process by default, or a
remote instance via --server), and renders the JSON reply as CSV tables or
JSON reports.  Outputs are deterministic: identical configuration yields
byte-identical files.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx


def _fmt(value: float) -> str:
    return "%.17g" % value


def _post(server: str | None, path: str, payload: dict):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            reply = client.post(path, json=payload)
            return reply.status_code, reply.json()

    async def _in_process():
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://phasepot.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    reply = asyncio.run(_in_process())
    return reply.status_code, reply.json()


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _report_error(status: int, body: dict) -> int:
    detail = body.get("detail", body)
    print(f"error ({status}): {detail}", file=sys.stderr)
    return 2 if status == 422 else 1


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _table_csv(table: dict) -> str:
    lines = ["x,q,singular_flag"]
    for x, q, flag in zip(table["x"], table["q"], table["singular_flag"]):
        lines.append("%s,%s,%d" % (_fmt(x), _fmt(q), int(flag)))
    return "\n".join(lines) + "\n"


def cmd_invert(args) -> int:
    payload = {
        "l": args.l,
        "delta": args.delta,
        "n": args.branch,
        "x_max": args.xmax,
        "num_points": args.points,
    }
    status, body = _post(args.server, "/invert", payload)
    if status != 200:
        return _report_error(status, body)
    branch = body["branch"]
    meta = [
        "branch: n=%d L=%s coupling=%s degenerate=%s"
        % (branch["n"], _fmt(branch["L"]), _fmt(branch["coupling"]), branch["degenerate"]),
        "singular points: %s"
        % (", ".join(_fmt(p) for p in body["singular_points"]) or "none"),
    ]
    if args.format == "json":
        text = _dump_json(body) + "\n"
    else:
        text = _table_csv(body["table"])
    if args.output is None:
        for line in meta:
            print("# " + line)
        sys.stdout.write(text)
    else:
        _write(args.output, text)
        for line in meta:
            print(line)
    return 0


def cmd_check_theorem(args) -> int:
    payload = {"grid_max": args.grid_max, "grid_step": args.grid_step, "x_max": args.xmax}
    status, body = _post(args.server, "/checks/theorem", payload)
    if status != 200:
        return _report_error(status, body)
    for rec in body["records"]:
        print(
            "l=%-5g L=%-5g roots=%-3d expect=%-17s verdict=%s"
            % (rec["l"], rec["L"], rec["n_roots"], rec["expected"], rec["verdict"])
        )
    print(
        "theorem sweep: %d consistent, %d inconsistent, %d inconclusive -> %s"
        % (
            body["n_consistent"],
            body["n_inconsistent"],
            body["n_inconclusive"],
            "PASS" if body["all_consistent"] else "FAIL",
        )
    )
    return 0 if body["all_consistent"] else 1


def cmd_check_proposition(args) -> int:
    payload = {"nu_max": args.nu_max, "nu_step": args.nu_step, "n_max": args.n_max}
    status, body = _post(args.server, "/checks/proposition", payload)
    if status != 200:
        return _report_error(status, body)
    bad = [r for r in body["records"] if not (r["ok"] and r["chains_ok"])]
    for rec in bad:
        print(
            "VIOLATION nu=%g n=%d margin=%s chains_ok=%s"
            % (rec["nu"], rec["n"], _fmt(rec["margin"]), rec["chains_ok"])
        )
    print(
        "proposition sweep: %d cases, min margin %s -> %s"
        % (len(body["records"]), _fmt(body["min_margin"]), "PASS" if body["all_ok"] else "FAIL")
    )
    return 0 if body["all_ok"] else 1


def cmd_scan_wronskian(args) -> int:
    payload = {"l": args.l, "L": args.L, "x_max": args.xmax}
    status, body = _post(args.server, "/wronskian/scan", payload)
    if status != 200:
        return _report_error(status, body)
    lines = ["x,W"]
    for x, w in zip(body["samples_x"], body["samples_w"]):
        lines.append("%s,%s" % (_fmt(x), _fmt(w)))
    csv_text = "\n".join(lines) + "\n"
    summary = {
        "schema_version": body["schema_version"],
        "version": body["version"],
        "config": body["config"],
        "nonsingular_pair": body["nonsingular_pair"],
        "sign_origin": body["sign_origin"],
        "limit_infinity": body["limit_infinity"],
        "roots": body["roots"],
        "root_brackets": body["root_brackets"],
    }
    if args.output is None:
        sys.stdout.write(csv_text)
    else:
        _write(args.output, csv_text)
    print(_dump_json(summary))
    return 0


def cmd_zeros(args) -> int:
    payload = {"kind": args.kind, "nu": args.nu, "count": args.count}
    status, body = _post(args.server, "/zeros", payload)
    if status != 200:
        return _report_error(status, body)
    if args.format == "json":
        print(_dump_json(body))
    else:
        print("n,zero")
        for k, z in enumerate(body["zeros"], start=1):
            print("%d,%s" % (k, _fmt(z)))
    return 0


def cmd_verify_roundtrip(args) -> int:
    payload = {
        "l": args.l,
        "delta": args.delta,
        "x_max": args.xmax,
        "step": args.step,
        "tolerance": args.tol,
    }
    status, body = _post(args.server, "/roundtrip", payload)
    if status != 200:
        return _report_error(status, body)
    print(_dump_json(body))
    return 0 if body["within_tolerance"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasepot",
        description="Construct nonsingular potentials from one phase shift and verify them.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running phasepot service; default runs in process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invert", help="build the potential table for one phase shift")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--branch", type=int, default=None, help="branch index n; default auto-selects the nonsingular branch")
    p.add_argument("--xmax", type=float, default=30.0)
    p.add_argument("--points", type=int, default=600)
    p.add_argument("--output", default=None, help="write the table here; default stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("check-theorem", help="sweep the nonsingularity theorem on an (l, L) grid")
    p.add_argument("--grid-max", type=float, default=5.0)
    p.add_argument("--grid-step", type=float, default=0.25)
    p.add_argument("--xmax", type=float, default=100.0)
    p.set_defaults(func=cmd_check_theorem)

    p = sub.add_parser("check-proposition", help="sweep the Bessel-zero inequality")
    p.add_argument("--nu-max", type=float, default=10.0)
    p.add_argument("--nu-step", type=float, default=0.1)
    p.add_argument("--n-max", type=int, default=20)
    p.set_defaults(func=cmd_check_proposition)

    p = sub.add_parser("scan-wronskian", help="sample W_Ll and locate its roots")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--xmax", type=float, default=100.0)
    p.add_argument("--output", default=None, help="write the (x, W) CSV here; default stdout")
    p.set_defaults(func=cmd_scan_wronskian)

    p = sub.add_parser("zeros", help="table of Bessel-function zeros")
    p.add_argument("--kind", choices=("J", "Y", "Jprime"), required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify-roundtrip", help="re-derive the phase shift from the constructed potential")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--xmax", type=float, default=160.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=5e-3)
    p.set_defaults(func=cmd_verify_roundtrip)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        print(f"error: could not reach the service: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
