"""Command-line client of the kolportrait service.

By default requests go to an in-process instance of the app; ``--server URL``
sends them to a running one instead.  Exit status: 0 ok, 2 validation
failure, 3 table or sector mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .classify import EPS_CONN
from .params import EPS_PARAM, PARAM_NAMES
from .sweep import default_jobs

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH, EXIT_OTHER = 0, 2, 3, 1


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from .api import app

    return TestClient(app)


def _parse_range(text: str) -> tuple:
    try:
        name, rng = text.split("=", 1)
        lo, hi, steps = rng.split(":")
        return name.strip(), [lo, hi, int(steps)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected name=lo:hi:steps, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kolportrait", description="Phase portraits of the cubic Kolmogorov family.")
    ap.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, params=True):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--epsilon-param", type=float, default=EPS_PARAM)
        p.add_argument("--epsilon-conn", type=float, default=EPS_CONN)
        if params:
            for name in PARAM_NAMES:
                p.add_argument(f"--{name}", required=True, help="number, e.g. 1, -0.5 or 3/2")

    p = sub.add_parser("classify", help="classify one parameter point")
    common(p)
    p.add_argument("--with-tracing", action="store_true", help="also trace the skeleton and check it")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("render", help="trace and draw the portrait of one parameter point")
    common(p)
    p.add_argument("--format", choices=["svg", "json"], default="svg")

    p = sub.add_parser("sweep", help="census over a grid or random sample")
    common(p, params=False)
    p.add_argument("spec", nargs="?", help="sweep spec JSON file")
    p.add_argument("--range", action="append", type=_parse_range, default=[], metavar="NAME=LO:HI:STEPS")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--with-tracing", action="store_true")
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.add_argument("--include-samples", action="store_true")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("tables", help="dump the embedded tables")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json"], default="json")
    return ap


def _request(args) -> tuple:
    if args.command == "tables":
        return "GET", "/tables", None
    tol = {"epsilon_param": args.epsilon_param, "epsilon_conn": args.epsilon_conn}
    if args.command in ("classify", "render"):
        body = {"params": {k: getattr(args, k) for k in PARAM_NAMES}, **tol}
        if args.command == "classify":
            body["with_tracing"] = args.with_tracing
        else:
            body["format"] = args.format
        return "POST", f"/{args.command}", body
    if args.spec:
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    elif args.range:
        spec = {"grid": dict(args.range)}
    else:
        spec = {"random": {"n": args.samples or 1000, "seed": args.seed or 0, "box": [-3, 3]}}
    body = {
        "spec": spec,
        "samples": args.samples,
        "seed": args.seed,
        "with_tracing": args.with_tracing,
        "jobs": args.jobs,
        "include_samples": args.include_samples,
        **tol,
    }
    return "POST", "/sweep", body


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        method, path, body = _request(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"kolportrait: cannot read sweep spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    client = _client(args.server)
    r = client.request(method, path, json=body)
    if r.status_code != 200:
        try:
            err = r.json()
            msg = f"{err.get('error', 'error')}: {err.get('detail', '')}"
        except ValueError:
            msg = r.text
        print(f"kolportrait: {msg}", file=sys.stderr)
        return {422: EXIT_INVALID, 400: EXIT_INVALID, 409: EXIT_MISMATCH}.get(r.status_code, EXIT_OTHER)
    if r.headers.get("content-type", "").startswith("image/svg"):
        _emit(r.content, args.out)
    else:
        _emit((json.dumps(r.json(), ensure_ascii=False, indent=2) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
