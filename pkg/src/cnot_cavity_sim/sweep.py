"""Average-fidelity sweeps over the (kappa_s/kappa, g/kappa) plane.

A sweep fixes the side-leakage and coupling axes as ratios to the main cavity
decay rate kappa (the formulas only depend on such ratios), evaluates the
average gate fidelity on every grid cell, and serializes the result as a
small self-describing CSV plus an optional plain-text PGM heatmap.  Runs are
deterministic: quadrature averaging has no randomness at all, and Monte Carlo
averaging derives an independent per-cell seed from the configured base seed,
so serial and parallel execution produce byte-identical outputs.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .cavity import CavityParams, coefficients
from .components import ClonerModel
from .fidelity import (
    DEFAULT_CONVENTION,
    AveragingMethod,
    AveragingSpec,
    FidelityConvention,
    average_fidelity,
)

CSV_HEADER = "# cnot-cavity-sim sweep v1"
_CSV_COLUMNS = "kappa_s_ratio,g_ratio,avg_fidelity"


class Regime(enum.Enum):
    """Coupling regime relative to the threshold g = (kappa_s + kappa) / 4."""

    WEAK = "weak"
    STRONG = "strong"
    BOUNDARY = "boundary"


def regime_classify(params: CavityParams) -> Regime:
    threshold = (params.kappa_s + params.kappa) / 4.0
    if abs(params.g - threshold) <= 1e-12 * max(abs(params.g), abs(threshold)):
        return Regime.BOUNDARY
    return Regime.WEAK if params.g < threshold else Regime.STRONG


def _check_axis(name: str, values: tuple[float, ...]) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if not values:
        raise ValueError(f"{name} must be non-empty")
    for v in values:
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"{name} entries must be finite and > 0, got {v!r}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return values


def axis_points(lo: float, hi: float, count: int, scale: str = "log") -> tuple[float, ...]:
    """Build a strictly increasing axis of ``count`` points from lo to hi."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if count == 1:
        return (float(lo),)
    if not lo < hi:
        raise ValueError(f"need lo < hi for a multi-point axis, got {lo!r} >= {hi!r}")
    if scale == "log":
        if lo <= 0.0:
            raise ValueError(f"log axis needs lo > 0, got {lo!r}")
        pts = np.logspace(math.log10(lo), math.log10(hi), count)
    elif scale == "lin":
        pts = np.linspace(lo, hi, count)
    else:
        raise ValueError(f"scale must be 'log' or 'lin', got {scale!r}")
    return tuple(float(v) for v in pts)


@dataclass(frozen=True)
class SweepConfig:
    kappa_s_ratios: tuple[float, ...]
    g_ratios: tuple[float, ...]
    rho_ratio: float = 0.1
    f_uc: float = 5.0 / 6.0
    convention: FidelityConvention = DEFAULT_CONVENTION
    averaging: AveragingSpec = AveragingSpec()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa_s_ratios",
                           _check_axis("kappa_s_ratios", self.kappa_s_ratios))
        object.__setattr__(self, "g_ratios", _check_axis("g_ratios", self.g_ratios))
        if not (math.isfinite(self.rho_ratio) and self.rho_ratio >= 0.0):
            raise ValueError(f"rho_ratio must be finite and >= 0, got {self.rho_ratio!r}")
        ClonerModel(self.f_uc)  # reuse its f_uc range check
        if not isinstance(self.convention, FidelityConvention):
            raise TypeError("convention must be a FidelityConvention")
        if not isinstance(self.averaging, AveragingSpec):
            raise TypeError("averaging must be an AveragingSpec")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.kappa_s_ratios), len(self.g_ratios)


def default_config(convention: FidelityConvention | None = None,
                   averaging: AveragingSpec | None = None) -> SweepConfig:
    """60 x 60 logarithmic grid over [0.01, 3.0] on both ratio axes."""
    axis = axis_points(0.01, 3.0, 60, scale="log")
    return SweepConfig(
        kappa_s_ratios=axis,
        g_ratios=axis,
        convention=convention if convention is not None else DEFAULT_CONVENTION,
        averaging=averaging if averaging is not None else AveragingSpec(),
    )


def _argmax_indices(values: np.ndarray) -> tuple[int, int]:
    # np.argmax returns the first flat (row-major) occurrence, which is the
    # required tie-break toward the smaller (kappa_s, g) cell
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    return int(i), int(j)


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Sweep result: config plus a (len(ks) x len(g)) fidelity array."""

    config: SweepConfig
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != self.config.shape:
            raise ValueError(
                f"values shape {arr.shape} does not match axes {self.config.shape}"
            )
        if arr.min() < -1e-9 or arr.max() > 1.0 + 1e-9:
            raise ValueError("fidelity values must lie in [0, 1]")
        object.__setattr__(self, "values", arr)

    @property
    def argmax(self) -> tuple[float, float, float]:
        """(kappa_s ratio, g ratio, value) of the best cell."""
        i, j = _argmax_indices(self.values)
        return (
            self.config.kappa_s_ratios[i],
            self.config.g_ratios[j],
            float(self.values[i, j]),
        )


_MASK64 = (1 << 64) - 1


def _mix64(x: int) -> int:
    # splitmix64 finalizer; spreads grid indices into independent seed offsets
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _cell_seed(seed: int, i: int, j: int) -> int:
    return seed ^ _mix64(((i & 0xFFFFFFFF) << 32) | (j & 0xFFFFFFFF))


def _cell_value(config: SweepConfig, i: int, j: int) -> float:
    params = CavityParams(
        kappa=1.0,
        kappa_s=config.kappa_s_ratios[i],
        g=config.g_ratios[j],
        rho=config.rho_ratio,
    )
    avg = config.averaging
    if avg.method is AveragingMethod.MONTE_CARLO:
        avg = replace(avg, seed=_cell_seed(avg.seed, i, j))
    estimate = average_fidelity(
        coefficients(params), ClonerModel(config.f_uc), config.convention, avg
    )
    return estimate.value


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepGrid:
    """Evaluate the grid; results are identical for any worker count."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    n_ks, n_g = config.shape
    values = np.empty((n_ks, n_g))
    cells = [(i, j) for i in range(n_ks) for j in range(n_g)]
    if workers == 1:
        for i, j in cells:
            values[i, j] = _cell_value(config, i, j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {(i, j): pool.submit(_cell_value, config, i, j)
                       for i, j in cells}
        for (i, j), future in futures.items():
            values[i, j] = future.result()
    return SweepGrid(config=config, values=values)


@dataclass(frozen=True)
class MaxResult:
    """Best sweep cell together with its coupling-regime classification."""

    kappa_s_ratio: float
    g_ratio: float
    value: float
    regime: Regime


def locate_max(grid: SweepGrid) -> MaxResult:
    """Argmax of the grid with ties broken toward smaller (kappa_s, g)."""
    ks, g, value = grid.argmax
    params = CavityParams(kappa=1.0, kappa_s=ks, g=g, rho=grid.config.rho_ratio)
    return MaxResult(kappa_s_ratio=ks, g_ratio=g, value=value,
                     regime=regime_classify(params))


def _averaging_points(spec: AveragingSpec) -> int:
    if spec.method is AveragingMethod.QUADRATURE:
        return spec.quadrature_points
    return spec.mc_samples


def write_csv(grid: SweepGrid, destination: str | Path) -> None:
    """Serialize a sweep as UTF-8 CSV with LF line endings.

    Three comment lines carry the format version and the full configuration,
    followed by a column header and one row per cell in row-major order
    (kappa_s outer, g inner) with values printed as %.17e so that parsing
    them back reproduces the exact doubles.
    """
    config = grid.config
    lines = [
        CSV_HEADER,
        f"# rho_ratio={config.rho_ratio!r} f_uc={config.f_uc!r} "
        f"convention={config.convention.canonical()}",
        f"# averaging={config.averaging.method.value} "
        f"points={_averaging_points(config.averaging)} seed={config.averaging.seed}",
        _CSV_COLUMNS,
    ]
    for i, ks in enumerate(config.kappa_s_ratios):
        for j, g in enumerate(config.g_ratios):
            lines.append(f"{ks:.17e},{g:.17e},{grid.values[i, j]:.17e}")
    text = "\n".join(lines) + "\n"
    try:
        Path(destination).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {destination}: {exc}") from exc


def _parse_meta(line: str, expected_keys: tuple[str, ...]) -> dict[str, str]:
    if not line.startswith("# "):
        raise ValueError(f"malformed metadata line: {line!r}")
    fields = {}
    for token in line[2:].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise ValueError(f"malformed metadata token {token!r} in {line!r}")
        fields[key] = value
    missing = [k for k in expected_keys if k not in fields]
    if missing:
        raise ValueError(f"metadata line {line!r} is missing keys {missing}")
    return fields


def read_csv(source: str | Path) -> SweepGrid:
    """Parse a file produced by :func:`write_csv` back into a SweepGrid."""
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read sweep CSV from {source}: {exc}") from exc
    lines = text.splitlines()
    if len(lines) < 5:
        raise ValueError(f"{source}: too short to be a sweep CSV")
    if lines[0] != CSV_HEADER:
        raise ValueError(f"{source}: unrecognized header {lines[0]!r}")
    meta = _parse_meta(lines[1], ("rho_ratio", "f_uc", "convention"))
    avg_meta = _parse_meta(lines[2], ("averaging", "points", "seed"))
    if lines[3] != _CSV_COLUMNS:
        raise ValueError(f"{source}: unexpected column header {lines[3]!r}")

    method = AveragingMethod(avg_meta["averaging"])
    points = int(avg_meta["points"])
    if method is AveragingMethod.QUADRATURE:
        averaging = AveragingSpec(method=method, quadrature_points=points,
                                  seed=int(avg_meta["seed"]))
    else:
        averaging = AveragingSpec(method=method, mc_samples=points,
                                  seed=int(avg_meta["seed"]))

    ks_axis: list[float] = []
    g_axis: list[float] = []
    rows: list[tuple[float, float, float]] = []
    for line in lines[4:]:
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"{source}: malformed data row {line!r}")
        ks, g, v = (float(p) for p in parts)
        if not ks_axis or ks != ks_axis[-1]:
            ks_axis.append(ks)
        if len(ks_axis) == 1:
            g_axis.append(g)
        rows.append((ks, g, v))
    if len(rows) != len(ks_axis) * len(g_axis):
        raise ValueError(
            f"{source}: {len(rows)} rows do not fill a "
            f"{len(ks_axis)}x{len(g_axis)} grid"
        )

    config = SweepConfig(
        kappa_s_ratios=tuple(ks_axis),
        g_ratios=tuple(g_axis),
        rho_ratio=float(meta["rho_ratio"]),
        f_uc=float(meta["f_uc"]),
        convention=FidelityConvention.parse(meta["convention"]),
        averaging=averaging,
    )
    values = np.empty(config.shape)
    for idx, (ks, g, v) in enumerate(rows):
        i, j = divmod(idx, len(g_axis))
        if ks != ks_axis[i] or g != g_axis[j]:
            raise ValueError(f"{source}: rows are not in row-major axis order")
        values[i, j] = v
    return SweepGrid(config=config, values=values)


def write_heatmap(grid: SweepGrid, destination: str | Path) -> None:
    """Write the fidelity grid as a plain-text (P2) PGM image.

    One pixel per cell, 8-bit grayscale with 255 = fidelity 1.0; rows run
    along increasing kappa_s from top to bottom, columns along increasing g.
    """
    height, width = grid.values.shape
    pixels = np.clip(np.rint(grid.values * 255.0).astype(int), 0, 255)
    lines = [f"P2\n{width} {height}\n255"]
    for row in pixels:
        lines.append(" ".join(str(p) for p in row))
    try:
        Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8",
                                     newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write PGM heatmap to {destination}: {exc}") from exc
