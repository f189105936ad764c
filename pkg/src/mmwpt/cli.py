"""Command-line client of the sweep service.

The CLI is a thin HTTP client: it assembles a request from an optional JSON
config file plus flag overrides, sends it to a server (``--server URL``) or
to an in-process instance of the same application when no server is given,
and writes the returned rows as CSV with a reproducibility header.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .service.schemas import (
    CoverageSweepRequest,
    EnergySweepRequest,
    PdfCheckRequest,
    RelSweepRequest,
)
from .csvio import write_csv

_COVERAGE_FIELDS = ["threshold_dbm", "engine", "antenna", "sigma", "p_ec", "ci"]
_ENERGY_FIELDS = ["axis", "axis_value", "engine", "antenna", "eh_variant", "mean_energy_w", "ci", "rel"]
_REL_FIELDS = ["theta0", "sigma", "antenna", "engine", "rel_value", "ci"]
_PDF_FIELDS = ["law", "sigma", "kind", "omega", "value"]


class ServiceClient:
    """HTTP access to the sweep service, remote or in-process."""

    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code == 422:
            detail = resp.json().get("detail", [])
            msgs = []
            for item in detail:
                loc = ".".join(str(p) for p in item.get("loc", []) if p != "body")
                msgs.append(f"{loc}: {item.get('msg', 'invalid')}")
            raise SystemExit("invalid configuration\n  " + "\n  ".join(msgs))
        resp.raise_for_status()
        return resp.json()

    def close(self):
        self._client.close()


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    text = Path(path).read_text()
    cfg = json.loads(text)
    if not isinstance(cfg, dict):
        raise SystemExit("config file must hold a JSON object")
    return cfg


def _apply_overrides(cfg: dict, args) -> dict:
    if getattr(args, "engine", None):
        cfg["engine"] = args.engine
    mc = dict(cfg.get("mc", {}))
    if getattr(args, "seed", None) is not None:
        mc["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        mc["trials"] = args.trials
    if mc:
        cfg["mc"] = mc
    return cfg


def _add_common(parser, default_out: str):
    parser.add_argument("--config", help="JSON config file (request schema)")
    parser.add_argument("--out", default=default_out, help="output CSV path")
    parser.add_argument("--engine", choices=["analytic", "mc", "both"])
    parser.add_argument("--seed", type=int, help="Monte-Carlo master seed")
    parser.add_argument("--trials", type=int, help="Monte-Carlo trials per point")
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")


def _run_sweep(args, model_cls, path: str, fields: list[str], defaults: dict) -> int:
    import pydantic

    cfg = {**defaults, **_load_config(args.config)}
    cfg = _apply_overrides(cfg, args)
    try:
        request = model_cls.model_validate(cfg)
    except pydantic.ValidationError as err:
        msgs = [
            ".".join(str(p) for p in e["loc"]) + f": {e['msg']}" for e in err.errors()
        ]
        raise SystemExit("invalid configuration\n  " + "\n  ".join(msgs)) from None
    client = ServiceClient(args.server)
    try:
        result = client.post(path, request.model_dump(mode="json"))
    finally:
        client.close()
    write_csv(args.out, result["meta"], fields, result["rows"])
    print(f"wrote {len(result['rows'])} rows to {args.out}")
    return 0


def _cmd_coverage(args) -> int:
    defaults = {"threshold_dbm": list(range(-60, -19, 2))}
    return _run_sweep(args, CoverageSweepRequest, "/sweeps/coverage", _COVERAGE_FIELDS, defaults)


def _cmd_energy(args) -> int:
    defaults = {"sigma_grid": [i * 0.2618 / 16 for i in range(17)]}
    return _run_sweep(args, EnergySweepRequest, "/sweeps/energy", _ENERGY_FIELDS, defaults)


def _cmd_rel(args) -> int:
    defaults = {"sigma_grid": [0.01 * i for i in range(1, 53)]}
    return _run_sweep(args, RelSweepRequest, "/sweeps/rel", _REL_FIELDS, defaults)


def _cmd_pdf(args) -> int:
    defaults = {"sigmas": [0.2618 / 7, 0.2618 / 4]}
    return _run_sweep(args, PdfCheckRequest, "/pdf-check", _PDF_FIELDS, defaults)


def _cmd_selftest(args) -> int:
    client = ServiceClient(args.server)
    try:
        result = client.post("/selftest", {})
    finally:
        client.close()
    width = max(len(c["name"]) for c in result["checks"])
    for c in result["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{c['name']:<{width}}  {status}  err={c['value']:.3e}  tol={c['tolerance']:.1e}")
    if result["passed"]:
        print("selftest: all checks passed")
        return 0
    print("selftest: FAILURES detected")
    return 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("mmwpt.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwpt",
        description="Millimeter-wave WPT energy-coverage experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coverage-sweep", help="coverage probability vs DC threshold")
    _add_common(p, "coverage.csv")
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("energy-sweep", help="average harvested energy sweep")
    _add_common(p, "energy.csv")
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("rel-sweep", help="relative serving-link energy loss sweep")
    _add_common(p, "rel.csv")
    p.set_defaults(func=_cmd_rel)

    p = sub.add_parser("pdf-check", help="dump gain-law densities and atoms")
    _add_common(p, "pdf.csv")
    p.set_defaults(func=_cmd_pdf)

    p = sub.add_parser("selftest", help="run the built-in oracle suite")
    p.add_argument("--server", help="base URL of a running service (default: in-process)")
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
