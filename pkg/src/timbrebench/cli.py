"""Command-line entry points: render, embed, eval-instruments, eval-effects, report.

Exit codes: 0 success, 1 internal error, 2 bad config/input.
"""

from __future__ import annotations

import sys

import click

from timbrebench import reporting
from timbrebench.config import load_config
from timbrebench.errors import TimbreBenchError


def _config_options(fn):
    fn = click.option("--config", "config_path", required=True, type=click.Path())(fn)
    fn = click.option("--adapter", "adapter", default=None, help="Run a single adapter.")(fn)
    fn = click.option("--levels", "levels", default=None, help="Comma-separated levels.")(fn)
    fn = click.option("--tolerance", "tolerance", default=None, type=float)(fn)
    fn = click.option("--out", "out", default=None, type=click.Path())(fn)
    return fn


def _load(config_path, adapter, levels, tolerance, out):
    parsed_levels = None
    if levels is not None:
        try:
            parsed_levels = tuple(float(v) for v in levels.split(","))
        except ValueError:
            raise TimbreBenchError(f"bad --levels value: {levels!r}")
    return load_config(
        config_path,
        adapter_filter=adapter,
        levels_override=parsed_levels,
        tolerance_override=tolerance,
        output_override=out,
    )


def _run(fn):
    try:
        fn()
    except TimbreBenchError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except Exception as exc:  # noqa: BLE001 - internal failure gets exit code 1
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Benchmark language-audio embedding models against human timbre perception."""


@main.command()
@_config_options
def render(config_path, adapter, levels, tolerance, out):
    """Render EQ/reverb variants of the reference file and write the manifest."""

    def go():
        config = _load(config_path, adapter, levels, tolerance, out)
        manifest_path, count, cache_hits = reporting.cmd_render(config)
        click.echo(f"manifest: {manifest_path} ({count} items, {cache_hits} cache hits)")

    _run(go)


@main.command()
@_config_options
def embed(config_path, adapter, levels, tolerance, out):
    """Run the configured adapters and persist embedding files."""

    def go():
        config = _load(config_path, adapter, levels, tolerance, out)
        for path in reporting.cmd_embed(config):
            click.echo(f"wrote {path}")

    _run(go)


@main.command(name="eval-instruments")
@_config_options
def eval_instruments(config_path, adapter, levels, tolerance, out):
    """Experiment 1: correlate embedding similarities with human ratings."""

    def go():
        config = _load(config_path, adapter, levels, tolerance, out)
        for path in reporting.cmd_eval_instruments(config):
            click.echo(f"wrote {path}")

    _run(go)


@main.command(name="eval-effects")
@_config_options
def eval_effects(config_path, adapter, levels, tolerance, out):
    """Experiment 2: delta similarities and trend tables per effect."""

    def go():
        config = _load(config_path, adapter, levels, tolerance, out)
        for path in reporting.cmd_eval_effects(config):
            click.echo(f"wrote {path}")

    _run(go)


@main.command()
@_config_options
def report(config_path, adapter, levels, tolerance, out):
    """Merge prior outputs into one consolidated report."""

    def go():
        config = _load(config_path, adapter, levels, tolerance, out)
        click.echo(f"wrote {reporting.cmd_report(config)}")

    _run(go)


if __name__ == "__main__":
    main()
