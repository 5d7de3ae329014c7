"""Thin-client CLI: builds a request, sends it through the service, prints JSON.

By default requests run against an in-process ASGI transport (no socket, same
handlers, byte-identical output for identical argv); --server redirects the
same request to a remote instance.  `serve` starts the HTTP service.

Polynomials are written with the tokens integer, x, ^, +, -, * in one
variable, e.g. "x^2+4", "2*x+3", "3x^2 - 2x + 1".
"""

from __future__ import annotations

import argparse
import asyncio
import json
import re
import sys
from typing import Any, Optional

import httpx

EXIT_OK = 0
EXIT_ACCEPTANCE_FAILURE = 1
EXIT_BAD_INPUT = 2

DEFAULT_SIEVE_LIMIT = 130_000

SEQUENCE_PRESETS = {
    "n": {"kind": "poly", "params": {"coeffs": [0, 1]}},
    "2n": {"kind": "poly", "params": {"coeffs": [0, 2]}},
    "n^2": {"kind": "poly", "params": {"coeffs": [0, 0, 1]}},
    "primes": {"kind": "primes", "params": {"sieve_limit": DEFAULT_SIEVE_LIMIT}},
    "primes^2": {
        "kind": "poly-of-primes",
        "params": {"coeffs": [0, 0, 1], "sieve_limit": DEFAULT_SIEVE_LIMIT},
    },
}

MEASURE_PRESETS = {
    # (delta_1 + delta_{-1}) / 2
    "half-dirac-pm1": {
        "atoms": [
            {"b": 0, "q": 1, "w_re": 0.5, "w_im": 0.0},
            {"b": 1, "q": 2, "w_re": 0.5, "w_im": 0.0},
        ],
        "arcs": [],
        "probability": True,
    },
    "dirac-1": {
        "atoms": [{"b": 0, "q": 1, "w_re": 1.0, "w_im": 0.0}],
        "arcs": [],
        "probability": True,
    },
    "uniform": {"atoms": [], "arcs": [{"a": 0.0, "b": 1.0, "w": 1.0}], "probability": True},
}


class CliError(Exception):
    pass


_POLY_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<x>x)|(?P<pow>\^)|(?P<mul>\*)|(?P<add>\+)|(?P<sub>[-−]))")


def parse_poly(text: str) -> list[int]:
    """Integer polynomial in x -> ascending coefficient list.

    Grammar: sum of monomials c, c*x^k, x^k with integer c and optional sign.
    """
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise CliError(f"cannot parse polynomial near {text[pos:]!r}")
            break
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    coeffs: dict[int, int] = {}
    i = 0
    sign = 1
    first = True
    while i < len(tokens):
        if not first:
            kind, _ = tokens[i]
            if kind == "add":
                sign = 1
            elif kind == "sub":
                sign = -1
            else:
                raise CliError("expected + or - between terms")
            i += 1
        else:
            if tokens[i][0] == "sub":
                sign = -1
                i += 1
            elif tokens[i][0] == "add":
                i += 1
            first = False
        coef = 1
        have_coef = False
        if i < len(tokens) and tokens[i][0] == "int":
            coef = int(tokens[i][1])
            have_coef = True
            i += 1
            if i < len(tokens) and tokens[i][0] == "mul":
                i += 1
        power = 0
        if i < len(tokens) and tokens[i][0] == "x":
            power = 1
            i += 1
            if i < len(tokens) and tokens[i][0] == "pow":
                i += 1
                if i >= len(tokens) or tokens[i][0] != "int":
                    raise CliError("expected an integer exponent after ^")
                power = int(tokens[i][1])
                i += 1
        elif not have_coef:
            raise CliError("expected a coefficient or x")
        coeffs[power] = coeffs.get(power, 0) + sign * coef
    if not coeffs:
        raise CliError("empty polynomial")
    deg = max(coeffs)
    return [coeffs.get(k, 0) for k in range(deg + 1)]


def _load_json_arg(text: str) -> Any:
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def resolve_sequence(args: argparse.Namespace) -> dict:
    if getattr(args, "poly", None):
        coeffs = parse_poly(args.poly)
        if getattr(args, "primes", False):
            return {
                "kind": "poly-of-primes",
                "params": {"coeffs": coeffs, "sieve_limit": args.sieve_limit},
            }
        return {"kind": "poly", "params": {"coeffs": coeffs}}
    spec = getattr(args, "seq", None)
    if spec is None:
        raise CliError("need --seq or --poly")
    if spec in SEQUENCE_PRESETS:
        base = json.loads(json.dumps(SEQUENCE_PRESETS[spec]))
        if base["kind"] in ("primes", "poly-of-primes"):
            base["params"]["sieve_limit"] = args.sieve_limit
        return base
    return _load_json_arg(spec)


def resolve_measure(text: str) -> dict:
    if text in MEASURE_PRESETS:
        return json.loads(json.dumps(MEASURE_PRESETS[text]))
    return _load_json_arg(text)


def _post(args: argparse.Namespace, path: str, payload: dict) -> tuple[int, dict]:
    server = getattr(args, "server", None)
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            resp = client.post(path, json=payload)
    else:
        resp = asyncio.run(_post_in_process(path, payload))
    try:
        body = resp.json()
    except json.JSONDecodeError:
        body = {"detail": resp.text}
    return resp.status_code, body


async def _post_in_process(path: str, payload: dict) -> httpx.Response:
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://wienerlab.local", timeout=None
    ) as client:
        return await client.post(path, json=payload)


def _print_report(body: dict, fmt: str) -> None:
    if fmt == "csv" and "entries" in body:
        lines = ["b,q,re,im,abs,provenance"]
        for e in body["entries"]:
            lines.append(
                f"{e['b']},{e['q']},{e['re']!r},{e['im']!r},{e['abs']!r},{e['provenance']}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
        return
    sys.stdout.write(json.dumps(body, indent=2, sort_keys=False) + "\n")


def _run_command(args: argparse.Namespace, path: str, payload: dict) -> int:
    status, body = _post(args, path, payload)
    if status != 200:
        sys.stderr.write(json.dumps(body, indent=2) + "\n")
        return EXIT_BAD_INPUT
    _print_report(body, getattr(args, "format", "json"))
    return EXIT_OK


# -- subcommand handlers ------------------------------------------------------------


def cmd_seq(args: argparse.Namespace) -> int:
    payload = {
        "sequence": resolve_sequence(args),
        "count": args.count,
        "modulus": args.mod,
        "gap_horizon": args.gaps,
        "density_bound": args.density,
    }
    return _run_command(args, "/v1/seq", payload)


def cmd_spectrum(args: argparse.Namespace) -> int:
    payload = {
        "sequence": resolve_sequence(args),
        "q_max": args.q_max,
        "threshold": args.threshold,
        "empirical_N": args.empirical_N,
    }
    return _run_command(args, "/v1/spectrum", payload)


def cmd_wiener(args: argparse.Namespace) -> int:
    payload = {
        "measure": resolve_measure(args.measure),
        "sequence": resolve_sequence(args),
        "N": args.N,
    }
    return _run_command(args, "/v1/wiener", payload)


def cmd_extremal(args: argparse.Namespace) -> int:
    payload = {
        "coeffs": parse_poly(args.poly),
        "of_primes": args.primes,
        "q_max": args.q_max,
        "horizon": args.horizon,
    }
    return _run_command(args, "/v1/extremal", payload)


def cmd_orbit(args: argparse.Namespace) -> int:
    payload: dict = {"mode": args.mode, "N": args.N, "tol": args.tol}
    if args.mode == "semigroup":
        payload["semigroup"] = _load_json_arg(args.operator)
        payload["real_sequence"] = _load_json_arg(args.real_seq)
    else:
        payload["operator"] = _load_json_arg(args.operator)
        payload["sequence"] = resolve_sequence(args)
    if args.x:
        payload["x"] = _load_json_arg(args.x)
    if args.y:
        payload["y"] = _load_json_arg(args.y)
    return _run_command(args, "/v1/orbit", payload)


def cmd_repro(args: argparse.Namespace) -> int:
    items = None
    if args.items:
        items = [int(t) for t in args.items.split(",")]
    status, body = _post(args, "/v1/repro", {"items": items})
    if status != 200:
        sys.stderr.write(json.dumps(body, indent=2) + "\n")
        return EXIT_BAD_INPUT
    for r in body["results"]:
        mark = "PASS" if r["passed"] else "FAIL"
        sys.stdout.write(
            f"[{mark}] {r['item']:>2} {r['name']:<32} {r['seconds']:7.2f}s  {r['detail']}\n"
        )
    if body["all_passed"]:
        sys.stdout.write("ALL PASS\n")
        return EXIT_OK
    sys.stdout.write("FAILURES PRESENT\n")
    return EXIT_ACCEPTANCE_FAILURE


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("wienerlab.service:app", host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, seq: bool = True) -> None:
    p.add_argument("--server", help="base URL of a running service (default: in-process)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    if seq:
        p.add_argument(
            "--seq",
            help="sequence preset (%s) or inline/@file JSON {kind, params}"
            % ", ".join(sorted(SEQUENCE_PRESETS)),
        )
        p.add_argument("--poly", help="polynomial like 'x^2+4' (tokens: integer x ^ + - *)")
        p.add_argument("--primes", action="store_true", help="with --poly: use P(p_n)")
        p.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT, dest="sieve_limit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wienerlab",
        description="Limit functions, Wiener averages and extremality certificates "
        "along arithmetic subsequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="list terms and run gap/density probes")
    _add_common(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--mod", type=int, help="also list residues mod q")
    p.add_argument("--gaps", type=int, help="gap probe horizon")
    p.add_argument("--density", type=int, help="upper-density bound N")
    p.set_defaults(fn=cmd_seq)

    p = sub.add_parser("spectrum", help="scan the rational spectrum of a sequence")
    _add_common(p)
    p.add_argument("--q-max", type=int, default=8, dest="q_max")
    p.add_argument("--threshold", type=float)
    p.add_argument("--empirical-N", type=int, default=20000, dest="empirical_N")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("wiener", help="Wiener average of a measure along a sequence")
    _add_common(p)
    p.add_argument(
        "--measure",
        required=True,
        help="measure preset (%s) or inline/@file JSON" % ", ".join(sorted(MEASURE_PRESETS)),
    )
    p.add_argument("--N", type=int, default=10000)
    p.set_defaults(fn=cmd_wiener)

    p = sub.add_parser("extremal", help="extremality verdict with certificate")
    _add_common(p, seq=False)
    p.add_argument("--poly", required=True, help="polynomial like 'x^2+4'")
    p.add_argument("--primes", action="store_true", help="decide for P(p_n) instead of P(n)")
    p.add_argument("--q-max", type=int, dest="q_max", help="probe moduli up to q_max")
    p.add_argument("--horizon", type=int, help="probe horizon (enables finite probes)")
    p.set_defaults(fn=cmd_extremal)

    p = sub.add_parser("orbit", help="operator-orbit averages and probes")
    _add_common(p)
    p.add_argument("--mode", choices=["average", "eigenvector", "classical", "gelfand", "semigroup"], default="average")
    p.add_argument("--operator", required=True, help='operator JSON, e.g. {"entries":[{"r":1.0,"b":1,"q":2}]}')
    p.add_argument("--x", help="vector as JSON [[re,im],...]")
    p.add_argument("--y", help="second vector (defaults to x)")
    p.add_argument("--real-seq", dest="real_seq", help="real sequence JSON for semigroup mode")
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--tol", type=float)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("repro", help="replay the registered end-to-end checks")
    p.add_argument("--server", help="base URL of a running service")
    p.add_argument("--items", help="comma-separated check numbers (default: all)")
    p.set_defaults(fn=cmd_repro)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except (json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
