"""Fetching weight-one newform metadata from the LMFDB REST API.

Only used to refresh fixtures; nothing else in the package touches the
network.  Raw responses are cached on disk under the SHA-256 of the request
URL, written to a temporary file and renamed into place so that concurrent
runs never see a partial file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from pathlib import Path
from urllib.parse import urlencode

import requests

from .newform_classify import MetadataRecord, is_squarefree

__all__ = ["DEFAULT_BASE_URL", "NetworkError", "SchemaDriftError", "fetch_metadata", "parse_newform"]

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://www.lmfdb.org/api/mf_newforms/"
BASE_URL_ENV = "EXOTIC_HECKE_LMFDB_URL"
REQUIRED_FIELDS = ("label", "level", "char_order", "projective_image", "is_twist_minimal", "dim")
PAGE_SIZE = 100


class NetworkError(RuntimeError):
    """The API could not be reached; safe to retry later."""

    retryable = True


class SchemaDriftError(RuntimeError):
    """A response lacks a field this client relies on."""

    def __init__(self, field: str, label: str | None = None):
        self.field = field
        where = f" (record {label})" if label else ""
        super().__init__(f"response is missing expected field {field!r}{where}")


def _cache_path(cache_dir: Path, url: str) -> Path:
    h = hashlib.sha256(url.encode()).hexdigest()
    return cache_dir / h[:2] / f"{h}.json"


def _write_atomic(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _get_json(session, url: str, retries: int, backoff: float, timeout: float) -> dict:
    delay = backoff
    last = None
    for attempt in range(retries + 1):
        try:
            resp = session.get(url, timeout=timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            last = exc
        else:
            if resp.status_code in (429, 502, 503, 504):
                last = f"HTTP {resp.status_code}"
                wait = resp.headers.get("Retry-After")
                if wait and wait.isdigit():
                    delay = max(delay, float(wait))
            elif resp.status_code != 200:
                raise NetworkError(f"HTTP {resp.status_code} for {url}")
            else:
                try:
                    return resp.json()
                except ValueError:
                    raise NetworkError(f"response from {url} is not JSON") from None
        if attempt < retries:
            log.info("request failed (%s); retrying in %.1fs", last, delay)
            time.sleep(delay)
            delay *= 2
    raise NetworkError(f"giving up on {url} after {retries + 1} attempts: {last}")


def parse_newform(obj: dict) -> MetadataRecord:
    """Map one API row onto a MetadataRecord; raises SchemaDriftError."""
    label = obj.get("label")
    for f in REQUIRED_FIELDS:
        if f not in obj:
            raise SchemaDriftError(f, label)
    level = int(obj["level"])
    return MetadataRecord(
        label=str(label),
        level=level,
        char_order=int(obj["char_order"]),
        proj_type=str(obj["projective_image"]),
        is_twist_minimal=bool(obj["is_twist_minimal"]),
        level_is_squarefree=is_squarefree(level),
        hecke_degree=int(obj["dim"]),
    )


def fetch_metadata(level_bound: int, proj_types=("A4", "S4", "A5"), base_url: str | None = None,
                   cache_dir=None, session=None, retries: int = 4, backoff: float = 1.0,
                   timeout: float = 30.0) -> list[MetadataRecord]:
    """Weight-one exotic newforms of level <= level_bound.

    One query per projective type, paged with ``_offset``; levels above the
    bound are dropped client side.
    """
    base_url = base_url or os.environ.get(BASE_URL_ENV) or DEFAULT_BASE_URL
    cache = Path(cache_dir) if cache_dir else None
    session = session or requests.Session()
    out: list[MetadataRecord] = []
    for t in proj_types:
        offset = 0
        while True:
            params = {"weight": 1, "projective_image": t, "_format": "json",
                      "_fields": ",".join(REQUIRED_FIELDS), "_offset": offset, "_max_count": PAGE_SIZE}
            url = f"{base_url}?{urlencode(params)}"
            payload = None
            if cache is not None and _cache_path(cache, url).exists():
                payload = json.loads(_cache_path(cache, url).read_text(encoding="utf-8"))
            if payload is None:
                payload = _get_json(session, url, retries, backoff, timeout)
                if "data" not in payload:
                    raise SchemaDriftError("data")
                if cache is not None:
                    _write_atomic(_cache_path(cache, url), payload)
            if "data" not in payload:
                raise SchemaDriftError("data")
            rows = payload["data"]
            for row in rows:
                rec = parse_newform(row)
                if rec.level <= level_bound:
                    out.append(rec)
            if len(rows) < PAGE_SIZE:
                break
            offset += PAGE_SIZE
    out.sort(key=lambda r: (r.level, r.label))
    return out
