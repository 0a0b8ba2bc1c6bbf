"""Rows and renderings for ``pidkit analyze-arch``."""

import csv
import io

from pydantic import BaseModel, ConfigDict

from pidkit.arch.layers import ArchSpec, model_flops, model_params, receptive_field
from pidkit.arch.presets import PUBLISHED_BACKBONE_PARAMS_M
from pidkit.shared.errors import ArchSpecError, ReportFormatError

COLUMNS = ("name", "family", "input", "params", "params_m", "published_m", "macs", "rf", "jump")


class ArchRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    family: str
    input: tuple[int, int, int]
    params: int
    macs: int
    rf: int | None = None
    jump: int | None = None
    published_m: float | None = None

    @property
    def params_m(self) -> float:
        return self.params / 1e6

    def cells(self) -> list[str]:
        c, h, w = self.input
        return [
            self.name,
            self.family,
            f"{c}x{h}x{w}",
            str(self.params),
            f"{self.params_m:.3f}",
            "-" if self.published_m is None else f"{self.published_m:.1f}",
            str(self.macs),
            "-" if self.rf is None else str(self.rf),
            "-" if self.jump is None else str(self.jump),
        ]


def analyze(arch: ArchSpec) -> ArchRow:
    """Params, MACs and (for sequential specs) receptive field of one spec."""
    try:
        rf, jump = receptive_field(arch)
    except ArchSpecError:
        rf = jump = None
    return ArchRow(
        name=arch.name,
        family=arch.family,
        input=arch.input,
        params=model_params(arch),
        macs=model_flops(arch),
        rf=rf,
        jump=jump,
        published_m=PUBLISHED_BACKBONE_PARAMS_M.get(arch.name),
    )


def format_rows(rows: list[ArchRow], fmt: str = "text") -> str:
    """Aligned text table or CSV."""
    table = [list(COLUMNS), *(row.cells() for row in rows)]
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(table)
        return buf.getvalue()
    if fmt != "text":
        raise ReportFormatError(f"unknown table format {fmt!r}")
    widths = [max(len(r[i]) for r in table) for i in range(len(COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths, strict=True)).rstrip() for r in table]
    return "\n".join(lines) + "\n"
