"""Dataset statistics in the Train / Val / Total layout."""

from collections.abc import Iterable, Sequence

from pydantic import BaseModel, ConfigDict, Field, computed_field

from pidkit.dataset.records import FrameRecord, Split


class DatasetStats(BaseModel):
    """Counts of one split (or the whole dataset)."""

    model_config = ConfigDict(frozen=True)

    cities: int = Field(ge=0)
    images: int = Field(ge=0)
    intrusion_cases: int = Field(ge=0)
    no_intrusion_cases: int = Field(ge=0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def avg_cases_per_image(self) -> float:
        if self.images == 0:
            return 0.0
        return (self.intrusion_cases + self.no_intrusion_cases) / self.images

    @property
    def cases(self) -> int:
        return self.intrusion_cases + self.no_intrusion_cases


# Published Cityintrusion table (cities are counted per split, so the total is their sum).
PUBLISHED_CITYINTRUSION_STATS: dict[str, DatasetStats] = {
    "train": DatasetStats(cities=18, images=2303, intrusion_cases=3829, no_intrusion_cases=12691),
    "val": DatasetStats(cities=3, images=398, intrusion_cases=770, no_intrusion_cases=2393),
    "total": DatasetStats(cities=21, images=2701, intrusion_cases=4599, no_intrusion_cases=15084),
}


def dataset_stats(records: Iterable[FrameRecord]) -> DatasetStats:
    """Exact counts over the records."""
    cities: set[str] = set()
    images = intrusion = no_intrusion = 0
    for record in records:
        cities.add(record.city)
        images += 1
        n_int = record.intrusion_count
        intrusion += n_int
        no_intrusion += len(record.cases) - n_int
    return DatasetStats(
        cities=len(cities),
        images=images,
        intrusion_cases=intrusion,
        no_intrusion_cases=no_intrusion,
    )


def split_stats(records: Sequence[FrameRecord]) -> dict[str, DatasetStats]:
    """Stats per split plus the total."""
    result = {
        split.value: dataset_stats(r for r in records if r.split is split) for split in Split
    }
    result["total"] = dataset_stats(records)
    return result


def drop_empty_frames(records: Iterable[FrameRecord]) -> list[FrameRecord]:
    """Remove frames that contain no person at all."""
    return [r for r in records if r.cases]


def format_stats(rows: dict[str, DatasetStats]) -> str:
    """Aligned table, one row per split label."""
    header = ["split", "cities", "images", "intrusion", "no_intrusion", "avg_cases_per_image"]
    table = [header] + [
        [
            label,
            str(s.cities),
            str(s.images),
            str(s.intrusion_cases),
            str(s.no_intrusion_cases),
            f"{s.avg_cases_per_image:.2f}",
        ]
        for label, s in rows.items()
    ]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    return "".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths, strict=True)).rstrip() + "\n"
        for r in table
    )
