"""CLI entry point for pidkit."""

import functools
import json
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click
from pydantic import ValidationError

from pidkit.arch import compression_ratio_candidates, format_rows, get_preset, preset_variants
from pidkit.arch.table import analyze
from pidkit.config import PidkitSettings, load_settings
from pidkit.dataset import (
    PUBLISHED_CITYINTRUSION_STATS,
    build_frames,
    dataset_stats,
    drop_empty_frames,
    format_stats,
    fuse_labels,
    read_box_list,
    read_dataset,
    read_detections,
    review_candidates,
    split_stats,
    validate_dataset,
)
from pidkit.dataset.records import dumps_lines
from pidkit.detection.anchors import AnchorConfig, generate_anchors
from pidkit.geometry.mask import load_mask
from pidkit.judge import annotate_frame
from pidkit.metrics.ap import evaluate as evaluate_frames
from pidkit.pipeline import DetectorNoise, emit_pr_curve, emit_report, run_simulation
from pidkit.pipeline.report import REPORT_FORMATS
from pidkit.shared.errors import EXIT_MALFORMED, DatasetError, PidkitError
from pidkit.shared.logging import configure_logging, get_logger

logger = get_logger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)
output_file = click.Path(dir_okay=False, path_type=Path)


def handle_errors(func: F) -> F:
    """Turn toolkit errors into a message on stderr and the documented exit code."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except DatasetError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(e.exit_code)
        except (PidkitError, ValidationError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_MALFORMED)

    return wrapper  # type: ignore[return-value]


def _settings(obj: dict[str, Any], **overrides: Any) -> PidkitSettings:
    settings = load_settings(
        obj["config_file"],
        log_level=obj["log_level"],
        json_logs=obj["json_logs"] or None,
        **overrides,
    )
    configure_logging(settings.log_level, settings.json_logs)
    return settings


def _write(data: bytes | str, out: Path | None) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out is None:
        click.echo(data.decode(), nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data)
    logger.info("Wrote output", path=str(out), size=len(data))


def _dims(value: str | None, count: int, option: str) -> tuple[int, ...] | None:
    """Parse ``AxB[xC]`` into positive integers."""
    if value is None:
        return None
    try:
        dims = tuple(int(p) for p in value.lower().split("x"))
    except ValueError:
        dims = ()
    if len(dims) != count or any(d <= 0 for d in dims):
        raise click.BadParameter(
            f"expected {count} positive integers joined by 'x', got {value!r}", param_hint=option
        )
    return dims


@click.group()
@click.option(
    "--config",
    "config_file",
    envvar="PIDKIT_CONFIG",
    type=existing_file,
    default=None,
    help="YAML/JSON settings file (flags override it, it overrides PIDKIT_* variables)",
)
@click.option(
    "--log-level",
    default=None,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Logging level",
)
@click.option("--json-logs", is_flag=True, default=False, help="Emit log events as JSON lines")
@click.version_option(package_name="pidkit")
@click.pass_context
def main(ctx: click.Context, config_file: Path | None, log_level: str | None, json_logs: bool) -> None:
    """Pedestrian intrusion detection toolkit.

    Feature-cropping geometry, intrusion judgment, PID metrics, dataset tools,
    architecture accounting and a deterministic pipeline simulator.
    """
    ctx.obj = {
        "config_file": config_file,
        "log_level": log_level.upper() if log_level else None,
        "json_logs": json_logs,
    }


@main.command()
@click.option("--scenes", default=100, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0))
@click.option(
    "--mode", default="fcm", show_default=True, type=click.Choice(["fcm", "full", "full-frame"])
)
@click.option("--alpha", type=float, default=None, help="MBR extension coefficient")
@click.option("--symmetric/--max-side-only", default=None, help="Extend both sides of the MBR")
@click.option("--stride", type=int, default=None, help="Feature-map downsampling factor")
@click.option("--pt", "p_t", type=int, default=None, help="Overlap-pixel threshold")
@click.option("--ct", "c_t", type=float, default=None, help="Confidence threshold")
@click.option("--workers", type=int, default=None, help="Scenes processed in parallel")
@click.option("--jitter", default=0, show_default=True, type=click.IntRange(min=0))
@click.option("--drop-prob", default=0.0, show_default=True, type=click.FloatRange(0.0, 1.0))
@click.option("--spurious-rate", default=0.0, show_default=True, type=click.FloatRange(min=0.0))
@click.option("--mean-true", default=0.95, show_default=True, type=click.FloatRange(0.0, 1.0))
@click.option("--mean-false", default=0.6, show_default=True, type=click.FloatRange(0.0, 1.0))
@click.option("--spread", default=0.0, show_default=True, type=click.FloatRange(min=0.0))
@click.option("--boundary", is_flag=True, help="Use the boundary-pedestrian scene family")
@click.option("--format", "fmt", default="text", show_default=True, type=click.Choice(REPORT_FORMATS))
@click.option("--out", type=output_file, default=None, help="Report file (default: stdout)")
@click.option("--pr-curve", type=output_file, default=None, help="Also write the PR curve CSV")
@click.pass_obj
@handle_errors
def simulate(
    obj: dict[str, Any],
    scenes: int,
    seed: int,
    mode: str,
    alpha: float | None,
    symmetric: bool | None,
    stride: int | None,
    p_t: int | None,
    c_t: float | None,
    workers: int | None,
    jitter: int,
    drop_prob: float,
    spurious_rate: float,
    mean_true: float,
    mean_false: float,
    spread: float,
    boundary: bool,
    fmt: str,
    out: Path | None,
    pr_curve: Path | None,
) -> None:
    """Run the pipeline over synthetic scenes and report PID metrics."""
    settings = _settings(
        obj, alpha=alpha, symmetric=symmetric, stride=stride, p_t=p_t, c_t=c_t, workers=workers
    )
    cfg = settings.pipeline_config("full-frame" if mode.startswith("full") else "fcm")
    noise = DetectorNoise(
        jitter_px=jitter,
        drop_prob=drop_prob,
        spurious_rate=spurious_rate,
        mean_true=mean_true,
        mean_false=mean_false,
        spread=spread,
        seed=seed,
    )
    report = run_simulation(
        scenes,
        seed,
        cfg,
        noise=noise,
        params=settings.scene_params(),
        workers=settings.workers,
        boundary=boundary,
    )
    _write(emit_report(report, fmt), out)
    if pr_curve is not None:
        _write(emit_pr_curve(report.pr_curve), pr_curve)


@main.command()
@click.option("--dataset", type=existing_file, required=True, help="Dataset JSON Lines file")
@click.option("--detections", type=existing_file, required=True, help="Per-frame detections file")
@click.option("--drop-empty-frames", "skip_empty", is_flag=True, help="Ignore frames without any person")
@click.option("--pt", "p_t", type=int, default=None, help="Overlap-pixel threshold")
@click.option("--ct", "c_t", type=float, default=None, help="Confidence threshold")
@click.option("--format", "fmt", default="text", show_default=True, type=click.Choice(REPORT_FORMATS))
@click.option("--out", type=output_file, default=None, help="Report file (default: stdout)")
@click.option("--pr-curve", type=output_file, default=None, help="Also write the PR curve CSV")
@click.pass_obj
@handle_errors
def evaluate(
    obj: dict[str, Any],
    dataset: Path,
    detections: Path,
    skip_empty: bool,
    p_t: int | None,
    c_t: float | None,
    fmt: str,
    out: Path | None,
    pr_curve: Path | None,
) -> None:
    """Score detections against an annotated dataset."""
    settings = _settings(obj, p_t=p_t, c_t=c_t)
    records = read_dataset(dataset)
    if skip_empty:
        records = drop_empty_frames(records)
    frames = build_frames(records, read_detections(detections), dataset.parent)
    report = evaluate_frames(frames, settings.eval_config(), label=detections.stem)
    _write(emit_report(report, fmt), out)
    if pr_curve is not None:
        _write(emit_pr_curve(report.pr_curve), pr_curve)


@main.command()
@click.option("--mask", type=existing_file, required=True, help="AoI mask (.pgm or .rle)")
@click.option("--boxes", type=existing_file, required=True, help="Detections box list")
@click.option("--pt", "p_t", type=int, default=None, help="Overlap-pixel threshold")
@click.option("--ct", "c_t", type=float, default=None, help="Confidence threshold")
@click.option("--out", type=output_file, default=None, help="Verdict file (default: stdout)")
@click.pass_obj
@handle_errors
def judge(
    obj: dict[str, Any], mask: Path, boxes: Path, p_t: int | None, c_t: float | None, out: Path | None
) -> None:
    """Judge each detection against the AoI mask."""
    settings = _settings(obj, p_t=p_t, c_t=c_t)
    verdicts = annotate_frame(read_box_list(boxes), load_mask(mask), settings.judge_config())
    _write(dumps_lines(v.to_wire() for v in verdicts), out)


@main.command()
@click.option("--mask", type=existing_file, required=True, help="AoI mask (.pgm or .rle)")
@click.option("--boxes", type=existing_file, required=True, help="Person box list")
@click.option("--pt", "p_t", type=int, default=None, help="Label fusion threshold")
@click.option("--out", type=output_file, default=None, help="Labelled cases (default: stdout)")
@click.option("--review", type=output_file, default=None, help="Write near-threshold cases here")
@click.pass_obj
@handle_errors
def fuse(
    obj: dict[str, Any],
    mask: Path,
    boxes: Path,
    p_t: int | None,
    out: Path | None,
    review: Path | None,
) -> None:
    """Label person boxes Intrusion / No Intrusion from their AoI overlap."""
    settings = _settings(obj, p_t=p_t)
    aoi = load_mask(mask)
    person_boxes = [d.box for d in read_box_list(boxes)]
    cases = fuse_labels(aoi, person_boxes, settings.p_t)
    _write(dumps_lines(c.to_wire() for c in cases), out)
    if review is not None:
        items = review_candidates(aoi, person_boxes, settings.p_t)
        _write(dumps_lines(i.to_wire() for i in items), review)
        logger.info("Review candidates written", count=len(items), path=str(review))


@main.command()
@click.option("--dataset", type=existing_file, required=True, help="Dataset JSON Lines file")
@click.option("--drop-empty-frames", "skip_empty", is_flag=True, help="Ignore frames without any person")
@click.option("--by-split", is_flag=True, help="Report train / val / total rows")
@click.option("--compare", is_flag=True, help="Add the published Cityintrusion rows")
@click.option("--format", "fmt", default="text", show_default=True, type=click.Choice(["text", "records"]))
@click.pass_obj
@handle_errors
def stats(
    obj: dict[str, Any],
    dataset: Path,
    skip_empty: bool,
    by_split: bool,
    compare: bool,
    fmt: str,
) -> None:
    """Count cities, images and cases."""
    _settings(obj)
    records = read_dataset(dataset)
    if skip_empty:
        records = drop_empty_frames(records)
    rows = split_stats(records) if by_split else {"total": dataset_stats(records)}
    if compare:
        rows.update({f"published-{k}": v for k, v in PUBLISHED_CITYINTRUSION_STATS.items()})
    if fmt == "records":
        payload = {label: s.model_dump() for label, s in rows.items()}
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(format_stats(rows), nl=False)


@main.command("analyze-arch")
@click.option("--preset", default="all", show_default=True, help="Preset name or 'all'")
@click.option("--input", "input_shape", default=None, help="Input shape CxHxW (single preset only)")
@click.option("--format", "fmt", default="text", show_default=True, type=click.Choice(["text", "csv"]))
@click.option("--ratios", is_flag=True, help="List the spatial-path compression ratio candidates")
@click.option("--out", type=output_file, default=None, help="Table file (default: stdout)")
@click.pass_obj
@handle_errors
def analyze_arch(
    obj: dict[str, Any],
    preset: str,
    input_shape: str | None,
    fmt: str,
    ratios: bool,
    out: Path | None,
) -> None:
    """Parameter, MAC and receptive-field table for architecture presets."""
    _settings(obj)
    if ratios:
        lines = ["ratio,value,approx_one_in"] + [
            f"{c.name},{c.value},{c.inverse:.2f}" for c in compression_ratio_candidates()
        ]
        _write("\n".join(lines) + "\n", out)
        return
    shape = _dims(input_shape, 3, "--input")
    if preset == "all":
        if shape is not None:
            raise click.UsageError("--input needs a single --preset")
        specs = preset_variants()
    else:
        specs = [get_preset(preset, shape)]  # type: ignore[arg-type]
    _write(format_rows([analyze(s) for s in specs], fmt), out)


@main.command()
@click.option("--dataset", type=existing_file, required=True, help="Dataset JSON Lines file")
@click.pass_obj
@handle_errors
def validate(obj: dict[str, Any], dataset: Path) -> None:
    """Check every record; exit 0 ok, 2 malformed, 3 semantic violation."""
    _settings(obj)
    report = validate_dataset(dataset)
    for issue in report.issues:
        click.echo(str(issue))
    click.echo(f"{report.frames} valid frames, {len(report.issues)} issues")
    if report.exit_code:
        sys.exit(report.exit_code)


@main.command()
@click.option("--grid", required=True, help="Feature grid WxH")
@click.option("--stride", type=int, default=None, help="Feature stride (pixels per cell)")
@click.option("--image", "image_size", default=None, help="Clip to image WxH (default grid*stride)")
@click.option("--out", type=output_file, default=None, help="Box list file (default: stdout)")
@click.pass_obj
@handle_errors
def anchors(
    obj: dict[str, Any], grid: str, stride: int | None, image_size: str | None, out: Path | None
) -> None:
    """Dump the anchor set of a feature grid as a box list."""
    settings = _settings(obj, stride=stride)
    grid_w, grid_h = _dims(grid, 2, "--grid")  # type: ignore[misc]
    image = _dims(image_size, 2, "--image")
    image_w, image_h = image if image is not None else (None, None)
    boxes = generate_anchors(AnchorConfig(stride=settings.stride), grid_w, grid_h, image_w, image_h)
    _write(dumps_lines(b.to_wire() for b in boxes), out)


if __name__ == "__main__":
    main()
