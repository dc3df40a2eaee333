"""openFDA device recall / classification client with on-disk page caching.

Pages are fetched with the documented ``search`` / ``limit`` / ``skip``
parameters and written verbatim to ``<cache_dir>/<endpoint>/<page>.json``
before anything else happens, so later parses are reproducible byte for
byte. A cached page is never re-fetched.
"""

from __future__ import annotations

import datetime as dt
import json
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable

import requests

from .errors import ContractError, FormatError, ParseError, RequestError, TransportError

RECALL_URL = "https://api.fda.gov/device/recall.json"
CLASSIFICATION_URL = "https://api.fda.gov/device/classification.json"

API_KEY_ENV = "OPENFDA_API_KEY"
MAX_PAGE_SIZE = 1000  # openFDA hard limit per request

DEFAULT_DATE_FROM = dt.date(2018, 1, 1)
DEFAULT_DATE_TO = dt.date(2024, 4, 15)
DEFAULT_MAX_PAGES = 7

RETRY_ATTEMPTS = 3
BACKOFF_BASE_SECONDS = 1.0
REQUEST_TIMEOUT_SECONDS = 30

MANIFEST_NAME = "manifest.json"

# get(url, params, timeout) -> (status_code, body_bytes)
Transport = Callable[[str, dict, float], tuple[int, bytes]]


class Endpoint(Enum):
    RECALL = "recall"
    CLASSIFICATION = "classification"

    @property
    def url(self) -> str:
        return RECALL_URL if self is Endpoint.RECALL else CLASSIFICATION_URL


@dataclass(frozen=True)
class FetchSpec:
    """What to fetch: endpoint, date window and pagination bounds."""

    endpoint: Endpoint
    date_from: dt.date = DEFAULT_DATE_FROM
    date_to: dt.date = DEFAULT_DATE_TO
    page_size: int = MAX_PAGE_SIZE
    max_pages: int = DEFAULT_MAX_PAGES
    api_key: str | None = None

    def __post_init__(self):
        if not 1 <= self.page_size <= MAX_PAGE_SIZE:
            raise ContractError(
                f"page_size must be in 1..{MAX_PAGE_SIZE}, got {self.page_size}"
            )
        if self.date_from > self.date_to:
            raise ContractError(f"date_from {self.date_from} is after date_to {self.date_to}")
        if self.max_pages < 1:
            raise ContractError(f"max_pages must be >= 1, got {self.max_pages}")

    def search_expression(self) -> str | None:
        """Date filter for the recall endpoint; classifications are not time-scoped."""
        if self.endpoint is Endpoint.RECALL:
            return f"event_date_posted:[{self.date_from.isoformat()} TO {self.date_to.isoformat()}]"
        return None


@dataclass(frozen=True)
class RawPage:
    """One verbatim response body, exactly as received."""

    page_index: int
    payload: bytes
    record_count: int
    retrieved_at: str


def _requests_get(url: str, params: dict, timeout: float) -> tuple[int, bytes]:
    resp = requests.get(url, params=params, timeout=timeout)
    return resp.status_code, resp.content


def _count_results(payload: bytes, page_index: int) -> int:
    try:
        body = json.loads(payload)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"page {page_index}: response body is not valid JSON: {exc}") from exc
    results = body.get("results")
    if not isinstance(results, list):
        raise ParseError(f"page {page_index}: response carries no results array")
    return len(results)


def _is_empty_result(status: int, body: bytes) -> bool:
    # openFDA answers 404 NOT_FOUND when skip runs past the last record.
    if status != 404:
        return False
    try:
        error = json.loads(body).get("error", {})
    except (UnicodeDecodeError, json.JSONDecodeError):
        return False
    return error.get("code") == "NOT_FOUND"


def _fetch_one(
    spec: FetchSpec, page_index: int, get: Transport, sleep: Callable[[float], None]
) -> bytes | None:
    """Fetch one page with bounded retries; None signals end of data."""
    params: dict = {"limit": spec.page_size, "skip": page_index * spec.page_size}
    search = spec.search_expression()
    if search is not None:
        params["search"] = search
    if spec.api_key:
        params["api_key"] = spec.api_key

    name = f"{spec.endpoint.value} page {page_index}"
    last_failure = ""
    for attempt in range(RETRY_ATTEMPTS):
        try:
            status, body = get(spec.endpoint.url, params, REQUEST_TIMEOUT_SECONDS)
        except requests.RequestException as exc:
            last_failure = str(exc)
            if attempt + 1 < RETRY_ATTEMPTS:
                sleep(BACKOFF_BASE_SECONDS * 2**attempt)
            continue
        if status == 200:
            return body
        if _is_empty_result(status, body):
            return None
        if status == 429 or status >= 500:
            last_failure = f"HTTP {status}"
            if attempt + 1 < RETRY_ATTEMPTS:
                sleep(BACKOFF_BASE_SECONDS * 2**attempt)
            continue
        excerpt = body[:200].decode("utf-8", errors="replace")
        raise RequestError(status, f"{name}: {excerpt}")
    raise TransportError(
        f"{name}: giving up after {RETRY_ATTEMPTS} attempts ({last_failure})"
    )


def _load_manifest(endpoint_dir: Path) -> dict:
    path = endpoint_dir / MANIFEST_NAME
    if not path.exists():
        return {"pages": {}}
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable cache manifest {path}: {exc}") from exc


def _save_manifest(endpoint_dir: Path, manifest: dict) -> None:
    path = endpoint_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def fetch_pages(
    spec: FetchSpec,
    cache_dir: str | Path,
    *,
    get: Transport | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> list[RawPage]:
    """Return pages 0..k in order, fetching only what the cache lacks.

    Pagination stops early when a page comes back with fewer than
    ``page_size`` records (or the API reports the result set exhausted).
    Every fetched page is written to the cache before the call returns, so a
    rerun with the same spec makes no network requests at all.
    """
    get = get or _requests_get
    endpoint_dir = Path(cache_dir) / spec.endpoint.value
    endpoint_dir.mkdir(parents=True, exist_ok=True)

    manifest = _load_manifest(endpoint_dir)
    recorded_search = manifest.get("search", spec.search_expression())
    if manifest.get("pages") and (
        recorded_search != spec.search_expression()
        or manifest.get("page_size", spec.page_size) != spec.page_size
    ):
        raise FormatError(
            f"cache at {endpoint_dir} was built with different query parameters; "
            "point --cache-dir at a fresh directory"
        )
    manifest["endpoint"] = spec.endpoint.value
    manifest["search"] = spec.search_expression()
    manifest["page_size"] = spec.page_size
    manifest.setdefault("pages", {})

    pages: list[RawPage] = []
    for index in range(spec.max_pages):
        exhausted_at = manifest.get("exhausted_at")
        if exhausted_at is not None and index >= exhausted_at:
            break
        page_path = endpoint_dir / f"{index}.json"
        if page_path.exists():
            payload = page_path.read_bytes()
            retrieved_at = manifest["pages"].get(str(index), {}).get("retrieved_at", "")
        else:
            payload = _fetch_one(spec, index, get, sleep)
            if payload is None:
                # The API reported the result set exhausted at this index;
                # remember that so reruns stay fully cache-served.
                manifest["exhausted_at"] = index
                _save_manifest(endpoint_dir, manifest)
                break
            retrieved_at = dt.datetime.now(dt.timezone.utc).isoformat()
            page_path.write_bytes(payload)
            count = _count_results(payload, index)
            manifest["pages"][str(index)] = {
                "retrieved_at": retrieved_at,
                "record_count": count,
            }
            _save_manifest(endpoint_dir, manifest)
        count = _count_results(payload, index)
        pages.append(
            RawPage(
                page_index=index,
                payload=payload,
                record_count=count,
                retrieved_at=retrieved_at,
            )
        )
        if count < spec.page_size:
            break
    return pages


def _entry_text(entry: dict, key: str) -> str:
    value = entry.get(key)
    if value is None:
        return ""
    return value if isinstance(value, str) else str(value)


def _parse_results(page: RawPage) -> list[dict]:
    try:
        body = json.loads(page.payload)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"page {page.page_index}: cannot parse payload: {exc}") from exc
    results = body.get("results")
    if not isinstance(results, list):
        raise ParseError(f"page {page.page_index}: payload carries no results array")
    for entry in results:
        if not isinstance(entry, dict):
            raise ParseError(f"page {page.page_index}: non-object result entry")
    return results


def parse_recall_page(page: RawPage) -> list[dict]:
    """Extract the five recall fields per entry, in payload order.

    Absent fields become empty strings, never fabricated values.
    """
    return [
        {
            "product_code": _entry_text(entry, "product_code"),
            "event_date_posted": _entry_text(entry, "event_date_posted"),
            "recalling_firm": _entry_text(entry, "recalling_firm"),
            "root_cause_description": _entry_text(entry, "root_cause_description"),
            "product_quantity": _entry_text(entry, "product_quantity"),
        }
        for entry in _parse_results(page)
    ]


def parse_classification_page(page: RawPage) -> list[dict]:
    """Extract product_code, device_name and device_class per entry."""
    return [
        {
            "product_code": _entry_text(entry, "product_code"),
            "device_name": _entry_text(entry, "device_name"),
            "device_class": _entry_text(entry, "device_class"),
        }
        for entry in _parse_results(page)
    ]
