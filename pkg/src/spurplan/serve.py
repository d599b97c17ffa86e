"""Read-only HTTP service: spur-chart / region / cascade endpoints plus the
static assets of the explorer UI.

All state (the loaded spur tables) is immutable, so concurrent requests are
served from shared data without locking; no request mutates anything.
"""
from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .cascade import cascade, cascade_result_to_dict
from .core import (
    ChainError,
    FrequencyBand,
    Injection,
    PlanConfig,
    SpurTable,
    SpurTableError,
    chain_from_obj,
    parse_frequency,
    parse_spur_table,
)
from .planner import find_spur_free_regions, regions_to_dict
from .scan import build_chart, chart_to_dict

logger = logging.getLogger(__name__)

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".map": "application/json",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class ApiError(Exception):
    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


def load_table_dir(table_dir: str | Path) -> dict[str, SpurTable]:
    """Load every *.spur file in the directory, keyed by file stem."""
    tables: dict[str, SpurTable] = {}
    root = Path(table_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"table directory {root} does not exist")
    for path in sorted(root.glob("*.spur")):
        try:
            tables[path.stem] = parse_spur_table(path.read_text())
        except SpurTableError as exc:
            logger.warning("skipping %s: %s", path, exc)
    return tables


def _one(params: dict[str, list[str]], name: str) -> str | None:
    values = params.get(name)
    return values[0] if values else None


def _freq(params: dict, name: str, default: float | None = None) -> float:
    raw = _one(params, name)
    if raw is None:
        if default is None:
            raise ApiError(name, f"missing required parameter {name!r}")
        return default
    try:
        value = parse_frequency(raw)
    except ValueError as exc:
        raise ApiError(name, str(exc)) from None
    if value <= 0:
        raise ApiError(name, f"{name} must be > 0")
    return value


def _number(params: dict, name: str, default: float | None = None) -> float:
    raw = _one(params, name)
    if raw is None:
        if default is None:
            raise ApiError(name, f"missing required parameter {name!r}")
        return default
    try:
        return float(raw)
    except ValueError:
        raise ApiError(name, f"{name} must be a number, got {raw!r}") from None


def _flag(params: dict, name: str, default: bool) -> bool:
    raw = _one(params, name)
    if raw is None:
        return default
    if raw.lower() in ("1", "true", "yes", "on"):
        return True
    if raw.lower() in ("0", "false", "no", "off"):
        return False
    raise ApiError(name, f"{name} must be a boolean flag, got {raw!r}")


class PlannerService:
    def __init__(self, tables: dict[str, SpurTable], frontend_dir: Path | None):
        self.tables = tables
        self.frontend_dir = frontend_dir

    # -- endpoint implementations ------------------------------------------

    def api_tables(self, params: dict) -> list[dict]:
        return [
            {
                "id": key,
                "mixer_id": table.mixer_id,
                "max_rf_order": table.max_rf_order,
                "max_lo_order": table.max_lo_order,
            }
            for key, table in sorted(self.tables.items())
        ]

    def _table(self, params: dict) -> SpurTable:
        key = _one(params, "table")
        if key is None:
            raise ApiError("table", "missing required parameter 'table'")
        table = self.tables.get(key)
        if table is None:
            raise ApiError("table", f"unknown table {key!r}")
        return table

    def _config(self, params: dict, table: SpurTable, rf_center: float,
                rf_bw: float, if_bw: float, sums_default: bool) -> PlanConfig:
        max_order = int(_number(params, "max_order", max(table.max_rf_order,
                                                         table.max_lo_order)))
        if max_order < 1:
            raise ApiError("max_order", "max_order must be >= 1")
        floor = _number(params, "floor", 70.0)
        if floor <= 0:
            raise ApiError("floor", "floor must be > 0")
        injection_raw = _one(params, "injection") or "high"
        try:
            injection = Injection(injection_raw)
        except ValueError:
            raise ApiError("injection", "injection must be 'high' or 'low'") from None
        return PlanConfig(
            table=table,
            rf_center_hz=rf_center,
            rf_bw_hz=rf_bw,
            if_bw_hz=if_bw,
            injection=injection,
            spur_floor_db=floor,
            max_order=max_order,
            include_sum_products=_flag(params, "sums", sums_default),
        )

    def api_chart(self, params: dict) -> dict:
        table = self._table(params)
        lo = _freq(params, "lo")
        rf_lo = _freq(params, "rf_lo")
        rf_hi = _freq(params, "rf_hi")
        if rf_lo >= rf_hi:
            raise ApiError("rf_lo", "rf_lo must be below rf_hi")
        # charts default to difference products only
        config = self._config(params, table, rf_center=(rf_lo + rf_hi) / 2,
                              rf_bw=rf_hi - rf_lo, if_bw=1.0, sums_default=False)
        chart = build_chart(
            table, lo, FrequencyBand(rf_lo, rf_hi), config,
            normalized=_flag(params, "normalized", False),
            include_non_impact=_flag(params, "all", False))
        return chart_to_dict(chart)

    def api_regions(self, params: dict) -> dict:
        table = self._table(params)
        rf_center = _freq(params, "rf_center")
        rf_bw = _freq(params, "rf_bw")
        if_bw = _freq(params, "if_bw")
        config = self._config(params, table, rf_center, rf_bw, if_bw,
                              sums_default=True)
        search = None
        if _one(params, "search_lo") is not None or _one(params, "search_hi") is not None:
            search = FrequencyBand(_freq(params, "search_lo"), _freq(params, "search_hi"))
        regions = find_spur_free_regions(config, search)
        return regions_to_dict(regions)

    def api_cascade(self, body: bytes) -> dict:
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ApiError("body", f"invalid JSON body: {exc}") from None
        try:
            stages = chain_from_obj(data)
        except (ChainError, ValueError) as exc:
            raise ApiError("stages", str(exc)) from None
        return cascade_result_to_dict(cascade(stages))


def make_handler(service: PlannerService):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt: str, *args) -> None:
            logger.debug("%s - %s", self.address_string(), fmt % args)

        def _send_json(self, payload, status: int = 200) -> None:
            body = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error_json(self, exc: ApiError) -> None:
            self._send_json({"error": str(exc), "field": exc.field}, status=400)

        def do_GET(self) -> None:  # noqa: N802 (http.server API)
            url = urlparse(self.path)
            params = parse_qs(url.query)
            try:
                if url.path == "/api/tables":
                    self._send_json(service.api_tables(params))
                elif url.path == "/api/chart":
                    self._send_json(service.api_chart(params))
                elif url.path == "/api/regions":
                    self._send_json(service.api_regions(params))
                else:
                    self._serve_static(url.path)
            except ApiError as exc:
                self._send_error_json(exc)

        def do_POST(self) -> None:  # noqa: N802
            url = urlparse(self.path)
            if url.path != "/api/cascade":
                self.send_error(404)
                return
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length)
            try:
                self._send_json(service.api_cascade(body))
            except ApiError as exc:
                self._send_error_json(exc)

        def _serve_static(self, path: str) -> None:
            root = service.frontend_dir
            if root is None:
                if path == "/":
                    body = (b"<html><body><h1>spurplan</h1>"
                            b"<p>API: /api/tables /api/chart /api/regions "
                            b"/api/cascade</p></body></html>")
                    self.send_response(200)
                    self.send_header("Content-Type", "text/html; charset=utf-8")
                    self.send_header("Content-Length", str(len(body)))
                    self.end_headers()
                    self.wfile.write(body)
                else:
                    self.send_error(404)
                return
            rel = path.lstrip("/") or "index.html"
            target = (root / rel).resolve()
            if not str(target).startswith(str(root.resolve())) or not target.is_file():
                self.send_error(404)
                return
            data = target.read_bytes()
            ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

    return Handler


def create_server(host: str, port: int, table_dir: str | Path,
                  frontend_dir: str | Path | None = None) -> ThreadingHTTPServer:
    tables = load_table_dir(table_dir)
    front = Path(frontend_dir) if frontend_dir else None
    if front is not None and not front.is_dir():
        logger.warning("frontend directory %s not found; serving API only", front)
        front = None
    service = PlannerService(tables, front)
    return ThreadingHTTPServer((host, port), make_handler(service))


def serve_forever(host: str, port: int, table_dir: str | Path,
                  frontend_dir: str | Path | None = None) -> None:
    server = create_server(host, port, table_dir, frontend_dir)
    bound = server.server_address
    logger.info("serving on http://%s:%s/ (tables from %s)", bound[0], bound[1], table_dir)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
