"""Pipeline stages and their file artifacts.

Every stage reads the previous stage's artifact from the output directory,
writes its own artifact plus a ``<stage>.meta.json`` sidecar (input hashes,
parameters, timestamp), and returns a one-line summary for the CLI. All
artifacts are deterministic; only the sidecars carry timestamps.
"""

from __future__ import annotations

import dataclasses
import datetime as dt
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import requests

from . import openfda
from .aggregate import (
    AggregationParams,
    MergeOverrides,
    aggregate,
    groups_from_json_dict,
    groups_to_json_dict,
)
from .dataset import (
    CleaningRules,
    clean,
    merge_datasets,
    read_dataset,
    write_dataset,
)
from .dbscan import (
    DEFAULT_EPS,
    DEFAULT_MIN_PTS,
    DbscanParams,
    cluster_root_causes,
    clusters_to_json_dict,
    summaries_from_json_dict,
)
from .errors import DataError, TransportError, UsageError
from .fixtures import FIXTURE_BUILDERS
from .report import (
    FORMATS,
    ComparisonReport,
    RankedReport,
    rank_initiators,
    render,
    top_devices,
    top_firms,
)

DATASET_FILE = "dataset.csv"
CLEANING_REPORT_FILE = "cleaning_report.json"
CLUSTERS_FILE = "clusters.json"
GROUPS_FILE = "groups.json"
CONFIG_ECHO_FILE = "effective_config.json"
REPORT_METADATA_FILE = "report_metadata.json"


@dataclass
class PipelineConfig:
    """Effective configuration of a run; flags override file, file overrides defaults."""

    date_from: dt.date = openfda.DEFAULT_DATE_FROM
    date_to: dt.date = openfda.DEFAULT_DATE_TO
    page_size: int = openfda.MAX_PAGE_SIZE
    max_pages: int = openfda.DEFAULT_MAX_PAGES
    api_key: str | None = None
    cache_dir: str = "cache"
    out: str = "out"
    eps: float = DEFAULT_EPS
    min_pts: int = DEFAULT_MIN_PTS
    prefix_len: int = 10
    theta: float = 0.85
    top: int = 10
    format: str = "markdown"
    fixture: str | None = None
    overrides_file: str | None = None

    _DATE_FIELDS = ("date_from", "date_to")

    def to_dict(self) -> dict:
        payload = dataclasses.asdict(self)
        for key in self._DATE_FIELDS:
            payload[key] = payload[key].isoformat()
        return payload

    @classmethod
    def from_sources(cls, config_path: str | None, flags: dict) -> "PipelineConfig":
        values = dataclasses.asdict(cls())
        if config_path:
            try:
                loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot parse config file {config_path}: {exc}") from exc
            if not isinstance(loaded, dict):
                raise UsageError(f"config file {config_path} must hold a JSON object")
            unknown = set(loaded) - set(values)
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
            values.update(loaded)
        for key, value in flags.items():
            if value is not None:
                values[key] = value
        for key in cls._DATE_FIELDS:
            if isinstance(values[key], str):
                try:
                    values[key] = dt.date.fromisoformat(values[key])
                except ValueError as exc:
                    raise UsageError(f"bad {key}: {exc}") from exc
        for key in ("page_size", "max_pages", "min_pts", "prefix_len", "top"):
            if not isinstance(values[key], int) or isinstance(values[key], bool):
                raise UsageError(f"config key {key} must be an integer")
        for key in ("eps", "theta"):
            if not isinstance(values[key], (int, float)) or isinstance(values[key], bool):
                raise UsageError(f"config key {key} must be a number")
            values[key] = float(values[key])
        cfg = cls(**values)
        if cfg.format not in FORMATS:
            raise UsageError(f"unsupported format {cfg.format!r}")
        if cfg.fixture is not None and cfg.fixture not in FIXTURE_BUILDERS:
            raise UsageError(
                f"unknown fixture {cfg.fixture!r}; available: {', '.join(sorted(FIXTURE_BUILDERS))}"
            )
        return cfg

    @property
    def out_dir(self) -> Path:
        return Path(self.out)


def write_json_artifact(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def read_json_artifact(path: Path) -> dict:
    if not path.exists():
        raise DataError(f"missing input artifact {path}; run the previous stage first")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"corrupt artifact {path}: {exc}") from exc


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_sidecar(out_dir: Path, stage: str, inputs: list[Path], params: dict) -> None:
    meta = {
        "stage": stage,
        "created_at": dt.datetime.now(dt.timezone.utc).isoformat(),
        "inputs": {p.name: _sha256(p) for p in inputs if p.exists()},
        "params": params,
    }
    (out_dir / f"{stage}.meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def echo_config(cfg: PipelineConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_json_artifact(cfg.out_dir / CONFIG_ECHO_FILE, cfg.to_dict())


def _fetch_spec(cfg: PipelineConfig, endpoint: openfda.Endpoint) -> openfda.FetchSpec:
    return openfda.FetchSpec(
        endpoint=endpoint,
        date_from=cfg.date_from,
        date_to=cfg.date_to,
        page_size=cfg.page_size,
        max_pages=cfg.max_pages,
        api_key=cfg.api_key,
    )


def fetch_stage(cfg: PipelineConfig, *, get=None) -> str:
    """Download recall and classification pages into the cache."""
    totals = {}
    for endpoint in (openfda.Endpoint.RECALL, openfda.Endpoint.CLASSIFICATION):
        pages = openfda.fetch_pages(_fetch_spec(cfg, endpoint), cfg.cache_dir, get=get)
        totals[endpoint.value] = sum(p.record_count for p in pages)
    write_sidecar(
        cfg.out_dir,
        "fetch",
        [],
        {
            "cache_dir": cfg.cache_dir,
            "date_from": cfg.date_from.isoformat(),
            "date_to": cfg.date_to.isoformat(),
            "page_size": cfg.page_size,
            "max_pages": cfg.max_pages,
            "records": totals,
        },
    )
    return (
        f"fetch: {totals['recall']} recall and {totals['classification']} "
        f"classification records cached in {cfg.cache_dir}"
    )


def _offline_get(url, params, timeout):
    raise requests.ConnectionError("network access disabled for this stage")


def build_stage(cfg: PipelineConfig) -> str:
    """Merge, clean and persist the canonical dataset (from cache or fixture)."""
    out = cfg.out_dir
    rules = CleaningRules(date_from=cfg.date_from, date_to=cfg.date_to)
    if cfg.fixture is not None:
        raw = FIXTURE_BUILDERS[cfg.fixture](cfg.date_from, cfg.date_to)
        records, report = clean(raw, rules)
        source: dict = {"fixture": cfg.fixture}
    else:
        recalls, classifications = [], []
        for endpoint, parse, sink in (
            (openfda.Endpoint.RECALL, openfda.parse_recall_page, recalls),
            (openfda.Endpoint.CLASSIFICATION, openfda.parse_classification_page, classifications),
        ):
            try:
                pages = openfda.fetch_pages(
                    _fetch_spec(cfg, endpoint), cfg.cache_dir, get=_offline_get, sleep=lambda s: None
                )
            except TransportError as exc:
                raise DataError(f"cache incomplete ({exc}); run fetch first") from exc
            for page in pages:
                sink.extend(parse(page))
        if not recalls:
            raise DataError(f"no cached recall pages under {cfg.cache_dir}; run fetch first")
        merged, stats = merge_datasets(recalls, classifications)
        records, report = clean(merged, rules)
        report.unmatched_product_codes = stats.unmatched_product_codes
        source = {"cache_dir": cfg.cache_dir}

    write_dataset(records, out / DATASET_FILE)
    write_json_artifact(out / CLEANING_REPORT_FILE, report.to_dict())
    write_sidecar(out, "build", [out / DATASET_FILE], {**source, "rules": {
        "date_from": cfg.date_from.isoformat(), "date_to": cfg.date_to.isoformat()}})
    return f"build: {len(records)} records -> {out / DATASET_FILE}"


def cluster_stage(cfg: PipelineConfig) -> str:
    """Cluster root causes and write the cluster artifact."""
    out = cfg.out_dir
    dataset_path = out / DATASET_FILE
    if not dataset_path.exists():
        raise DataError(f"missing input artifact {dataset_path}; run build first")
    records = read_dataset(dataset_path)
    if not records:
        raise DataError(f"dataset {dataset_path} holds no records; nothing to cluster")
    params = DbscanParams(eps=cfg.eps, min_pts=cfg.min_pts)
    result = cluster_root_causes(
        [r.root_cause_description for r in records], params
    )
    write_json_artifact(out / CLUSTERS_FILE, clusters_to_json_dict(result))
    write_sidecar(out, "cluster", [dataset_path], {"eps": cfg.eps, "min_pts": cfg.min_pts})
    return (
        f"cluster: {result.cluster_count} clusters over {result.clustered_count} records, "
        f"{result.noise_count} noise -> {out / CLUSTERS_FILE}"
    )


def aggregate_stage(cfg: PipelineConfig) -> str:
    """Aggregate cluster labels into groups and write the group artifact."""
    out = cfg.out_dir
    clusters_path = out / CLUSTERS_FILE
    payload = read_json_artifact(clusters_path)
    summaries = summaries_from_json_dict(payload)
    if not summaries:
        raise DataError(f"{clusters_path} holds no clusters; nothing to aggregate")
    params = AggregationParams(prefix_len=cfg.prefix_len, theta=cfg.theta)
    overrides = MergeOverrides.from_file(cfg.overrides_file) if cfg.overrides_file else None
    groups = aggregate(summaries, params, overrides)
    write_json_artifact(out / GROUPS_FILE, groups_to_json_dict(groups, params))
    write_sidecar(
        out, "aggregate", [clusters_path], {"prefix_len": cfg.prefix_len, "theta": cfg.theta}
    )
    return f"aggregate: {len(groups)} groups -> {out / GROUPS_FILE}"


def report_stage(cfg: PipelineConfig) -> str:
    """Render ranked reports from the cluster and group artifacts."""
    out = cfg.out_dir
    clusters_path = out / CLUSTERS_FILE
    groups_path = out / GROUPS_FILE
    dataset_path = out / DATASET_FILE
    cluster_payload = read_json_artifact(clusters_path)
    summaries = summaries_from_json_dict(cluster_payload)
    groups = groups_from_json_dict(read_json_artifact(groups_path))
    if not summaries or not groups:
        raise DataError("empty cluster or group artifact; nothing to report")
    records = read_dataset(dataset_path) if dataset_path.exists() else []

    clustered_total = sum(s.count for s in summaries)
    noise_total = sum(int(n["count"]) for n in cluster_payload.get("noise", []))
    metadata = {
        "clustered_records": clustered_total,
        "records_including_noise": clustered_total + noise_total,
        "share_denominator": "clustered_records",
    }

    before = RankedReport(
        title="Ranked recall initiators (clusters)",
        entries=rank_initiators(summaries),
        total_count=clustered_total,
        grouped=False,
        metadata=metadata,
    )
    after = RankedReport(
        title="Ranked recall initiators (aggregated groups)",
        entries=rank_initiators(groups),
        total_count=clustered_total,
        grouped=True,
        metadata=metadata,
    )
    comparison = ComparisonReport(
        title=f"Top {cfg.top} recall initiators before and after aggregation",
        before=before,
        after=after,
        k=cfg.top,
    )
    firm_report = RankedReport(
        title=f"Top {cfg.top} recalled firms",
        entries=top_firms(records, cfg.top) if records else [],
        total_count=len(records),
    )
    device_report = RankedReport(
        title=f"Top {cfg.top} recalled devices",
        entries=top_devices(records, cfg.top) if records else [],
        total_count=len(records),
    )

    fmt = cfg.format
    written: list[Path] = []

    def emit(name: str, payload: bytes) -> None:
        path = out / name
        path.write_bytes(payload)
        written.append(path)

    if fmt == "markdown":
        chunks = [
            f"# Medical device recall initiator report\n\n"
            f"- clustered records: {clustered_total}\n"
            f"- records including noise: {clustered_total + noise_total}\n"
            f"- share denominator: clustered records\n\n",
            render(before, fmt).decode("utf-8"),
            "\n",
            render(after, fmt).decode("utf-8"),
            "\n",
            render(comparison, fmt).decode("utf-8"),
        ]
        if records:
            chunks += [
                "\n",
                render(firm_report, fmt).decode("utf-8"),
                "\n",
                render(device_report, fmt).decode("utf-8"),
            ]
        emit("report.md", "".join(chunks).encode("utf-8"))
    elif fmt == "json":
        payload = {
            "schema_version": 1,
            "metadata": metadata,
            "before": json.loads(render(before, fmt)),
            "after": json.loads(render(after, fmt)),
            "comparison": json.loads(render(comparison, fmt)),
            "top_firms": json.loads(render(firm_report, fmt)) if records else None,
            "top_devices": json.loads(render(device_report, fmt)) if records else None,
        }
        emit("report.json", (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8"))
    elif fmt == "csv":
        emit("report_before.csv", render(before, fmt))
        emit("report_after.csv", render(after, fmt))
        emit("report_comparison.csv", render(comparison, fmt))
        if records:
            emit("report_top_firms.csv", render(firm_report, fmt))
            emit("report_top_devices.csv", render(device_report, fmt))
    else:  # svg-bars
        chart_before = RankedReport(
            title=before.title, entries=before.entries[: cfg.top],
            total_count=before.total_count, grouped=False, metadata=metadata,
        )
        chart_after = RankedReport(
            title=after.title, entries=after.entries[: cfg.top],
            total_count=after.total_count, grouped=True, metadata=metadata,
        )
        emit("report_before.svg", render(chart_before, fmt))
        emit("report_after.svg", render(chart_after, fmt))
        if records:
            emit("report_top_firms.svg", render(firm_report, fmt))
            emit("report_top_devices.svg", render(device_report, fmt))

    write_json_artifact(out / REPORT_METADATA_FILE, metadata)
    write_sidecar(
        out,
        "report",
        [clusters_path, groups_path, dataset_path],
        {"top": cfg.top, "format": fmt},
    )
    names = ", ".join(p.name for p in written)
    return f"report: {names} (shares over {clustered_total} clustered records)"


def pipeline_stage(cfg: PipelineConfig, *, get=None) -> str:
    """fetch -> build -> cluster -> aggregate -> report (fetch skipped for fixtures)."""
    lines = []
    if cfg.fixture is None:
        lines.append(fetch_stage(cfg, get=get))
    lines.append(build_stage(cfg))
    lines.append(cluster_stage(cfg))
    lines.append(aggregate_stage(cfg))
    lines.append(report_stage(cfg))
    return "\n".join(lines)
