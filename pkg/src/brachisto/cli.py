"""Command-line front end.

Thin client over the HTTP service: every subcommand maps to one endpoint,
called in-process through an ASGI transport, and renders the JSON reply
into files under --out.  Identical flags produce byte-identical artifacts.

Exit codes: 0 success, 2 validation failure (a residual or tolerance
breach), 1 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import hashlib
import json
import math
import os
import sys

import httpx

from . import __version__, figures
from .geometry import curve_from_json_dict, curve_to_csv, tof_sampled

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2

_DEFAULT_TOL = {
    "solve": 0.02,
    "foliate": 0.02,
    "value": 0.05,
    "oracle": 0.02,
    "converge": None,
    "stationarity": 1e-4,
    "eikonal": 0.05,
    "repro": None,
}

_app = None


def _get_app():
    global _app
    if _app is None:
        from .service.app import create_app

        _app = create_app()
    return _app


def _request(method: str, path: str, payload: dict | None = None):
    async def go():
        transport = httpx.ASGITransport(app=_get_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://brachisto", timeout=None
        ) as client:
            resp = await client.request(method, path, json=payload)
            return resp.status_code, resp.json()

    status, body = asyncio.run(go())
    if status >= 500:
        raise RuntimeError(f"service error on {path}: {body}")
    return status, body


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _write_text(outdir: str, name: str, text: str) -> str:
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return name


def _emit_meta(args, command: str, params: dict, results: dict, tolerances: dict) -> dict:
    meta = {
        "command": command,
        "params": params,
        "results": results,
        "tolerances": tolerances,
        "version": __version__,
    }
    text = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    _write_text(args.out, f"{command}.json", text)
    print(text, end="")
    return meta


def _reject(body) -> int:
    detail = body.get("detail", body)
    print(f"error: {detail}", file=sys.stderr)
    return EXIT_USAGE


def _tol(args, key: str):
    return _DEFAULT_TOL[key] if args.tol is None else args.tol


def _cmd_solve(args) -> int:
    payload = {
        "theta_f": _angle(args.theta_f, args.degrees),
        "epsilon": args.epsilon,
        "n": args.n,
    }
    if args.terminal_r is not None:
        payload["terminal_r"] = args.terminal_r
    status, body = _request("POST", "/solve", payload)
    if status != 200:
        return _reject(body)
    tol = _tol(args, "solve")
    curve = curve_from_json_dict(body["curve"])
    sampled = float(tof_sampled(curve))
    mismatch = abs(sampled - body["tof"]) / body["tof"]
    files = [_write_text(args.out, "solve_curve.csv", curve_to_csv(curve))]
    results = {
        "family": body["family"],
        "params": body["params"],
        "tof": body["tof"],
        "tof_sampled": sampled,
        "time_mismatch_rel": mismatch,
        "files": files,
    }
    _emit_meta(args, "solve", payload, results, {"time_mismatch_rel": tol})
    return EXIT_OK if mismatch <= tol else EXIT_VALIDATION


def _cmd_foliate(args) -> int:
    payload = {
        "epsilon": args.epsilon,
        "count": args.count,
        "n_samples": args.n_samples,
    }
    status, body = _request("POST", "/foliate", payload)
    if status != 200:
        return _reject(body)
    tol = _tol(args, "foliate")
    files, worst = [], 0.0
    for entry, record in zip(body["index"], body["curves"]):
        curve = curve_from_json_dict(record)
        worst = max(worst, abs(float(tof_sampled(curve)) - entry["tof"]) / entry["tof"])
        files.append(
            _write_text(args.out, f"foliate_{entry['label']}.csv", curve_to_csv(curve))
        )
    results = {"index": body["index"], "time_mismatch_rel": worst, "files": files}
    _emit_meta(args, "foliate", payload, results, {"time_mismatch_rel": tol})
    return EXIT_OK if worst <= tol else EXIT_VALIDATION


def _cmd_value(args) -> int:
    payload = {
        "epsilon": args.epsilon,
        "n_r": args.nr,
        "n_theta": args.ntheta,
        "n_curves": args.curves,
        "n_samples": args.n_samples,
    }
    status, body = _request("POST", "/value", payload)
    if status != 200:
        return _reject(body)
    tol = _tol(args, "value")
    files = [_write_text(args.out, "value.csv", figures.grid_csv(body))]
    if args.svg:
        circles = [1.0] if args.epsilon == 0.0 else [1.0, args.epsilon]
        panel = {"name": "value", "curves": [], "grid": body,
                 "markers": [], "circles": circles}
        files.append(_write_text(args.out, "value.svg", figures.panel_svg(panel)))
    results = {
        "max_residual": body["max_residual"],
        "filled_fraction": body["filled_fraction"],
        "files": files,
    }
    _emit_meta(args, "value", payload, results, {"max_residual": tol})
    breach = body["max_residual"] is not None and body["max_residual"] > tol
    return EXIT_VALIDATION if breach else EXIT_OK


def _cmd_oracle(args) -> int:
    payload = {
        "target_r": args.target_r,
        "target_theta": _angle(args.target_theta, args.degrees),
        "epsilon": args.epsilon,
        "n_r": args.nr,
        "n_theta": args.ntheta,
        "stencil": args.stencil,
    }
    status, body = _request("POST", "/oracle", payload)
    if status != 200:
        return _reject(body)
    tol = _tol(args, "oracle")
    _emit_meta(args, "oracle", payload, dict(body), {"gap_vs_analytic": tol})
    breach = body["gap_vs_analytic"] is not None and body["gap_vs_analytic"] > tol
    return EXIT_VALIDATION if breach else EXIT_OK


def _cmd_converge(args) -> int:
    try:
        eps_list = [float(v) for v in args.eps.split(",") if v]
    except ValueError:
        print(f"error: --eps expects comma-separated floats, got {args.eps!r}",
              file=sys.stderr)
        return EXIT_USAGE
    payload = {
        "theta_f": _angle(args.theta_f, args.degrees),
        "eps_list": eps_list,
        "n": args.n,
    }
    status, body = _request("POST", "/converge", payload)
    if status != 200:
        return _reject(body)
    rows = body["rows"]
    text = "epsilon,distance\n" + "".join(
        f"{e:.12g},{d:.12g}\n" for e, d in rows
    )
    files = [_write_text(args.out, "converge.csv", text)]
    tol = _tol(args, "converge")
    monotone = all(b[1] <= a[1] + 1e-12 for a, b in zip(rows, rows[1:]))
    results = {"rows": rows, "monotone": monotone, "files": files}
    _emit_meta(args, "converge", payload, results, {"final_distance": tol})
    if not monotone:
        return EXIT_VALIDATION
    if tol is not None and rows[-1][1] > tol:
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_check(args) -> int:
    if args.stationarity == args.eikonal:
        print("error: pass exactly one of --stationarity or --eikonal",
              file=sys.stderr)
        return EXIT_USAGE
    if args.stationarity:
        if args.theta_f is None:
            print("error: --stationarity requires --theta-f", file=sys.stderr)
            return EXIT_USAGE
        tol = _tol(args, "stationarity")
        payload = {
            "theta_f": _angle(args.theta_f, args.degrees),
            "epsilon": 0.5 if args.epsilon is None else args.epsilon,
            "n": args.n,
            "n_checks": args.checks,
            "seed": args.seed,
            "tol": tol,
        }
        if args.terminal_r is not None:
            payload["terminal_r"] = args.terminal_r
        status, body = _request("POST", "/check/stationarity", payload)
        tol_name = "first_variation"
    else:
        tol = _tol(args, "eikonal")
        payload = {
            "epsilon": 0.0 if args.epsilon is None else args.epsilon,
            "n_r": args.nr,
            "n_theta": args.ntheta,
            "n_curves": args.curves,
            "n_samples": args.n_samples,
            "tol": tol,
        }
        status, body = _request("POST", "/check/eikonal", payload)
        tol_name = "max_residual"
    if status != 200:
        return _reject(body)
    _emit_meta(args, "check", payload, dict(body), {tol_name: tol})
    return EXIT_OK if body["passed"] else EXIT_VALIDATION


def _cmd_repro(args) -> int:
    status, bundle = _request("POST", f"/repro/{args.figure}")
    if status != 200:
        return _reject(bundle)
    paths = figures.emit(bundle, args.out)
    names = [os.path.basename(p) for p in paths]
    hashes = {}
    for path, name in zip(paths, names):
        with open(path, "rb") as fh:
            hashes[name] = hashlib.sha256(fh.read()).hexdigest()
    results = {"files": names, "sha256": hashes}
    _emit_meta(args, f"repro_{args.figure}", {"figure": args.figure}, results,
               {"tol": _tol(args, "repro")})
    return EXIT_OK


_HANDLERS = {
    "solve": _cmd_solve,
    "foliate": _cmd_foliate,
    "value": _cmd_value,
    "oracle": _cmd_oracle,
    "converge": _cmd_converge,
    "check": _cmd_check,
    "repro": _cmd_repro,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="directory for artifacts")
    common.add_argument("--degrees", action="store_true",
                        help="interpret angle flags as degrees (files stay in radians)")
    common.add_argument("--tol", type=float, default=None,
                        help="override the subcommand's validation tolerance")

    p = argparse.ArgumentParser(
        prog="brachisto",
        description="Time-optimal descent curves on the unit disk and annuli.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common],
                       help="one minimizer curve for a terminal point")
    s.add_argument("--theta-f", type=float, required=True)
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--terminal-r", type=float, default=None)
    s.add_argument("--n", type=int, default=1201)

    s = sub.add_parser("foliate", parents=[common],
                       help="family of curves with evenly spaced terminals")
    s.add_argument("--count", type=int, default=16)
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--n-samples", type=int, default=601)

    s = sub.add_parser("value", parents=[common],
                       help="minimal-time grid sampled from the foliation")
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--nr", type=int, default=200)
    s.add_argument("--ntheta", type=int, default=400)
    s.add_argument("--curves", type=int, default=512)
    s.add_argument("--n-samples", type=int, default=1201)
    s.add_argument("--svg", action="store_true", help="also write a contour plot")

    s = sub.add_parser("oracle", parents=[common],
                       help="discrete shortest-time bound for one target")
    s.add_argument("--target-r", type=float, required=True)
    s.add_argument("--target-theta", type=float, required=True)
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--nr", type=int, default=200)
    s.add_argument("--ntheta", type=int, default=400)
    s.add_argument("--stencil", choices=("knight", "dense"), default="knight")

    s = sub.add_parser("converge", parents=[common],
                       help="distance of constrained solutions to the free limit")
    s.add_argument("--theta-f", type=float, required=True)
    s.add_argument("--eps", type=str, required=True,
                   help="comma-separated inner radii, strictly decreasing")
    s.add_argument("--n", type=int, default=2001)

    s = sub.add_parser("check", parents=[common],
                       help="stationarity or eikonal residual report")
    s.add_argument("--stationarity", action="store_true")
    s.add_argument("--eikonal", action="store_true")
    s.add_argument("--epsilon", type=float, default=None)
    s.add_argument("--theta-f", type=float, default=None)
    s.add_argument("--terminal-r", type=float, default=None)
    s.add_argument("--n", type=int, default=9601)
    s.add_argument("--checks", type=int, default=12)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--nr", type=int, default=200)
    s.add_argument("--ntheta", type=int, default=400)
    s.add_argument("--curves", type=int, default=512)
    s.add_argument("--n-samples", type=int, default=1201)

    s = sub.add_parser("repro", parents=[common],
                       help="regenerate one of the reference figures")
    s.add_argument("figure", choices=sorted(figures.BUILDERS))

    return p


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    return _HANDLERS[args.command](args)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
