"""Command-line front end: a thin client over the service handlers.

By default requests are executed in-process through the same functions the
HTTP endpoints use; with --url they are POSTed to a running server instead.
Exit codes: 0 success, 1 I/O, 2 semantic/validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .errors import CoverkitError
from .pipeline import render_analysis_text, render_genuine_text
from .service import (
    AnalyzeRequest,
    CatalogRequest,
    GenuineRequest,
    HilbertRequest,
    ObstructionRequest,
    TameRequest,
    run_analyze,
    run_catalog,
    run_genuine,
    run_hilbert,
    run_obstruction,
    run_tame,
)

_ENDPOINTS = {
    "analyze": (AnalyzeRequest, run_analyze),
    "obstruction": (ObstructionRequest, run_obstruction),
    "genuine": (GenuineRequest, run_genuine),
    "hilbert": (HilbertRequest, run_hilbert),
    "tame": (TameRequest, run_tame),
    "catalog": (CatalogRequest, run_catalog),
}


def dump_json(obj: dict) -> str:
    """Canonical serialization: byte-stable for identical content."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class RemoteError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(detail)
        self.status = status


def call_endpoint(name: str, payload: dict, url: Optional[str]) -> dict:
    """Run a request in-process, or POST it to a remote server."""
    model, handler = _ENDPOINTS[name]
    if url is None:
        return handler(model.model_validate(payload))
    import httpx

    resp = httpx.post(f"{url.rstrip('/')}/{name}", json=payload, timeout=60.0)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise RemoteError(resp.status_code, str(detail))
    return resp.json()


def _load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_chi(text: str) -> list[int]:
    text = text.strip().strip("[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise CoverkitError(f"chi must be a comma-separated integer vector, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverkit",
        description="Exact cover combinatorics: sharp data, obstruction groups, local symbols.",
    )
    parser.add_argument("--url", help="send requests to a running coverkit server")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline on a problem document")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")

    p = sub.add_parser("obstruction", help="solve the vanishing equation for a character")
    p.add_argument("path")
    p.add_argument("--chi", help="character coordinates, e.g. 1 or 1,0 (default: document block)")
    p.add_argument("--window", type=int, default=8, help="enumeration width for the solution coset")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("hilbert", help="quadratic Hilbert symbol {a, b}")
    p.add_argument("field")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("tame", help="degree-m tame symbol of (a, b)")
    p.add_argument("field")
    p.add_argument("m", type=int)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("genuine", help="genuine-character obstruction table")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("catalog", help="emit a standard root-datum document")
    p.add_argument("name")
    p.add_argument("--size", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (OSError, json.JSONDecodeError) as exc:
        if isinstance(exc, json.JSONDecodeError):
            print(f"error: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except RemoteError as exc:
        print(f"error (HTTP {exc.status}): {exc}", file=sys.stderr)
        return 2 if exc.status in (400, 422) else 1
    except CoverkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    url = args.url
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "analyze":
        payload = {"document": _load_document(args.path), "seed": args.seed}
        report = call_endpoint("analyze", payload, url)
        _emit(report, args.as_json, render_analysis_text)
        return 0

    if args.command == "obstruction":
        payload = {
            "document": _load_document(args.path),
            "chi": _parse_chi(args.chi) if args.chi is not None else None,
            "window": args.window,
        }
        report = call_endpoint("obstruction", payload, url)
        _emit(report, args.as_json, render_analysis_text)
        return 0

    if args.command == "hilbert":
        out = call_endpoint("hilbert", {"field": args.field, "a": args.a, "b": args.b}, url)
        print(dump_json(out), end="") if args.as_json else print(out["display"])
        return 0

    if args.command == "tame":
        out = call_endpoint(
            "tame", {"field": args.field, "m": args.m, "a": args.a, "b": args.b}, url
        )
        print(dump_json(out), end="") if args.as_json else print(out["display"])
        return 0

    if args.command == "genuine":
        out = call_endpoint("genuine", {"document": _load_document(args.path)}, url)
        _emit(out, args.as_json, render_genuine_text)
        return 0

    if args.command == "catalog":
        payload = {"name": args.name}
        if args.size is not None:
            payload["size"] = args.size
        if args.rank is not None:
            payload["rank"] = args.rank
        out = call_endpoint("catalog", payload, url)
        print(dump_json(out), end="")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def _emit(report: dict, as_json: bool, renderer) -> None:
    if as_json:
        print(dump_json(report), end="")
    else:
        print(renderer(report))


if __name__ == "__main__":
    sys.exit(main())
