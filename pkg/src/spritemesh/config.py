"""Pipeline parameters and the flat ``key=value`` config format."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass(frozen=True)
class PipelineConfig:
    # mask acquisition
    tau_alpha: int = 128
    # exterior contour
    mask_sigma: float = 1.0
    dp_eps_frac: float = 0.003
    n_target: int = 50
    min_component_area: int = 100
    # interior boundaries
    bilateral_d: int = 9
    bilateral_sigma_color: float = 75.0
    bilateral_sigma_space: float = 75.0
    canny_low: float = 40.0
    canny_high: float = 120.0
    erode_kernel: int = 11
    erode_iters: int = 2
    close_kernel: int = 3
    interior_min_len: float = 150.0
    interior_dp_frac: float = 0.012
    interior_seg_len: float = 40.0
    interior_min_boundary_dist: float = 6.0
    dedup_radius: float = 18.0
    # triangulation
    vertex_merge_dist: float = 2.0
    # ablation switches; all on is the full pipeline
    use_bilateral: bool = True
    multi_channel: bool = True
    use_dp: bool = True
    use_subdivision: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not 0 <= self.tau_alpha <= 255:
            raise ValueError(f"tau_alpha must be in [0, 255], got {self.tau_alpha}")
        positive = [
            "mask_sigma", "n_target", "min_component_area", "bilateral_d",
            "bilateral_sigma_color", "bilateral_sigma_space", "erode_kernel",
            "erode_iters", "close_kernel", "interior_min_len", "interior_seg_len",
            "interior_min_boundary_dist", "dedup_radius", "vertex_merge_dist",
        ]
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("dp_eps_frac", "interior_dp_frac"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must be in (0, 1), got {getattr(self, name)}")
        if not self.canny_low < self.canny_high:
            raise ValueError("canny_low must be < canny_high")
        for name in ("bilateral_d", "erode_kernel", "close_kernel"):
            if getattr(self, name) % 2 != 1:
                raise ValueError(f"{name} must be odd, got {getattr(self, name)}")

    def replace(self, **overrides) -> "PipelineConfig":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_mapping(cls, values: dict, base: "PipelineConfig | None" = None) -> "PipelineConfig":
        """Build a config from string or typed values, coercing to field types."""
        base = base or cls()
        types = {f.name: type(getattr(base, f.name)) for f in fields(cls)}
        coerced = {}
        for key, raw in values.items():
            if key not in types:
                raise ValueError(f"unknown config key: {key!r}")
            typ = types[key]
            try:
                if typ is bool:
                    if isinstance(raw, bool):
                        coerced[key] = raw
                        continue
                    text = str(raw).strip().lower()
                    if text not in ("true", "false", "1", "0", "yes", "no"):
                        raise ValueError
                    coerced[key] = text in ("true", "1", "yes")
                elif typ is int:
                    value = float(raw)
                    if value != int(value):
                        raise ValueError
                    coerced[key] = int(value)
                else:
                    coerced[key] = typ(raw)
            except (TypeError, ValueError):
                raise ValueError(f"bad value for {key}: {raw!r}") from None
        return dataclasses.replace(base, **coerced)

    @classmethod
    def from_file(cls, path: str | Path, base: "PipelineConfig | None" = None) -> "PipelineConfig":
        return cls.from_mapping(parse_config_text(Path(path).read_text()), base)

    def to_text(self) -> str:
        return "".join(f"{f.name}={getattr(self, f.name)}\n" for f in fields(self))


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values
