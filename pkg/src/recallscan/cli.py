"""Command-line orchestration of the recall-initiator pipeline."""

from __future__ import annotations

import datetime as dt
import json
import os
import sys

import click

from . import stages
from .errors import RecallScanError
from .fixtures import FIXTURE_BUILDERS
from .openfda import API_KEY_ENV
from .report import FORMATS


def _date(value: str | None) -> dt.date | None:
    if value is None:
        return None
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        raise click.BadParameter(f"expected YYYY-MM-DD, got {value!r}")


_FETCH_OPTIONS = [
    click.option("--from", "date_from", default=None, help="Start of the recall date window (YYYY-MM-DD)."),
    click.option("--to", "date_to", default=None, help="End of the recall date window (YYYY-MM-DD)."),
    click.option("--page-size", type=int, default=None, help="Records per API request (max 1000)."),
    click.option("--max-pages", type=int, default=None, help="Pagination cap per endpoint."),
    click.option("--cache-dir", default=None, help="Directory for verbatim response pages."),
    click.option("--api-key", default=None, help=f"openFDA API key (falls back to ${API_KEY_ENV})."),
]
_BUILD_OPTIONS = [
    click.option(
        "--fixture",
        type=click.Choice(sorted(FIXTURE_BUILDERS)),
        default=None,
        help="Build from a bundled offline dataset instead of the cache.",
    ),
]
_CLUSTER_OPTIONS = [
    click.option("--eps", type=float, default=None, help="DBSCAN neighbourhood radius."),
    click.option("--min-pts", type=int, default=None, help="DBSCAN minimum neighbourhood size."),
]
_AGGREGATE_OPTIONS = [
    click.option("--prefix-len", type=int, default=None, help="Label prefix length to compare."),
    click.option("--theta", type=float, default=None, help="Similarity threshold for merging."),
    click.option("--overrides-file", default=None, help="JSON file with merge/split pair overrides."),
]
_REPORT_OPTIONS = [
    click.option("--top", type=int, default=None, help="Entries in top-k summaries."),
    click.option("--format", "format", type=click.Choice(FORMATS), default=None, help="Report output format."),
]
_COMMON_OPTIONS = [
    click.option("--config", "config_path", default=None, help="JSON config file (flags override it)."),
    click.option("--out", default=None, help="Output directory for stage artifacts."),
]


def _apply(options):
    def wrap(f):
        for option in reversed(options):
            f = option(f)
        return f

    return wrap


def _run(stage_fn, config_path: str | None, flags: dict) -> None:
    flags = dict(flags)
    for key in ("date_from", "date_to"):
        if key in flags:
            flags[key] = _date(flags[key])
    if flags.get("api_key") is None:
        flags["api_key"] = os.environ.get(API_KEY_ENV) or None
    try:
        cfg = stages.PipelineConfig.from_sources(config_path, flags)
        stages.echo_config(cfg)
        summary = stage_fn(cfg)
    except RecallScanError as exc:
        line = json.dumps(
            {"error": type(exc).__name__, "exit_code": exc.exit_code, "message": str(exc)}
        )
        click.echo(line, err=True)
        sys.exit(exc.exit_code)
    except OSError as exc:
        line = json.dumps({"error": "OSError", "exit_code": 4, "message": str(exc)})
        click.echo(line, err=True)
        sys.exit(4)
    click.echo(summary)


@click.group()
@click.version_option()
def main():
    """Deterministic recall-initiator analysis over openFDA device data."""


@main.command()
@_apply(_FETCH_OPTIONS + _COMMON_OPTIONS)
def fetch(config_path, **flags):
    """Download recall and classification pages into the cache."""
    _run(stages.fetch_stage, config_path, flags)


@main.command()
@_apply(_FETCH_OPTIONS + _BUILD_OPTIONS + _COMMON_OPTIONS)
def build(config_path, **flags):
    """Merge, clean and persist the canonical dataset."""
    _run(stages.build_stage, config_path, flags)


@main.command()
@_apply(_CLUSTER_OPTIONS + _COMMON_OPTIONS)
def cluster(config_path, **flags):
    """Cluster root-cause texts and write clusters.json."""
    _run(stages.cluster_stage, config_path, flags)


@main.command()
@_apply(_AGGREGATE_OPTIONS + _COMMON_OPTIONS)
def aggregate(config_path, **flags):
    """Merge cluster labels into groups and write groups.json."""
    _run(stages.aggregate_stage, config_path, flags)


@main.command()
@_apply(_REPORT_OPTIONS + _COMMON_OPTIONS)
def report(config_path, **flags):
    """Render ranked reports from the stage artifacts."""
    _run(stages.report_stage, config_path, flags)


@main.command()
@_apply(
    _FETCH_OPTIONS
    + _BUILD_OPTIONS
    + _CLUSTER_OPTIONS
    + _AGGREGATE_OPTIONS
    + _REPORT_OPTIONS
    + _COMMON_OPTIONS
)
def pipeline(config_path, **flags):
    """Run fetch, build, cluster, aggregate and report in sequence."""
    _run(stages.pipeline_stage, config_path, flags)


if __name__ == "__main__":
    main()
