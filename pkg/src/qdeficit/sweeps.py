"""Parameter sweeps behind the ``fig1`` / ``fig2`` CLI subcommands."""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from . import correlations as corr
from .decoherence import DephasingParams, apply_dephasing
from .errors import ParameterError
from .states import TwoParamState, build_two_param_state

CSV_HEADER = "param,deficit_bits,weak_deficit_bits,negativity"


class UsageError(ValueError):
    """A sweep specification names an invalid parameter region."""


@dataclass(frozen=True)
class SweepSpec:
    mode: str
    start: float
    stop: float
    steps: int
    x: float = 0.8
    d: int = 3
    s: float | None = None
    r: float | None = None
    t: float | None = None
    grid_n: int = 64

    def values(self) -> np.ndarray:
        if self.steps < 1:
            raise UsageError(f"--steps must be >= 1, got {self.steps}")
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class Row:
    param: float
    point: corr.CorrelationPoint

    def csv(self) -> str:
        p = self.point
        return ",".join(_fmt(v) for v in (self.param, p.deficit, p.weak_deficit, p.negativity))


def _fmt(v: float) -> str:
    return f"{v + 0.0:.12g}"


def fig1_spec(s=0.15, start=0.0, stop=None, steps=56, x=0.8, d=3, grid_n=64) -> SweepSpec:
    """Deficits and negativity against t at fixed s (default: the full admissible t range)."""
    if stop is None:
        stop = min(1.0, round(1.0 - 3.0 * s, 12))
    return SweepSpec("fig1", start, stop, steps, x=x, d=d, s=s, grid_n=grid_n)


def fig2_spec(r=0.03, t=0.58, start=0.0, stop=1.0, steps=101, x=0.8, grid_n=64) -> SweepSpec:
    """Deficits and negativity against gamma = gamma_a = gamma_b."""
    return SweepSpec("fig2", start, stop, steps, x=x, d=3, r=r, t=t, grid_n=grid_n)


def _check_common(spec: SweepSpec):
    if spec.x < 0:
        raise UsageError(f"x must be >= 0, got {spec.x}")
    if spec.grid_n < 8:
        raise UsageError(f"--grid-n must be >= 8, got {spec.grid_n}")


def validate(spec: SweepSpec) -> list[tuple[float, TwoParamState, DephasingParams | None]]:
    """Resolve every row of ``spec`` to a state, rejecting the whole sweep on any bad row."""
    _check_common(spec)
    rows = []
    if spec.mode == "fig1":
        if spec.d < 3:
            raise UsageError(f"d must be >= 3, got {spec.d}")
        if spec.s is None or spec.s < 0:
            raise UsageError(f"s must be >= 0, got {spec.s}")
        t_max = min(1.0, 1.0 - 3.0 * spec.s)
        for t in spec.values():
            if t < 0 or t > t_max + 1e-12:
                raise UsageError(
                    f"t={t:.6g} violates 0 <= t <= min(1, 1 - 3s) = {t_max:.6g} "
                    f"(r = (1 - 3s - t)/(2(d-2)) must stay >= 0)"
                )
            try:
                st = TwoParamState.from_s_t(spec.s, min(float(t), t_max), spec.d)
            except ParameterError as exc:
                raise UsageError(str(exc)) from exc
            rows.append((float(t), st, None))
    elif spec.mode == "fig2":
        try:
            st = TwoParamState(spec.r, spec.t, 3)
        except ParameterError as exc:
            raise UsageError(str(exc)) from exc
        for g in spec.values():
            if not 0.0 <= g <= 1.0:
                raise UsageError(f"gamma={g:.6g} violates 0 <= gamma <= 1")
            rows.append((float(g), st, DephasingParams(float(g), float(g))))
    else:
        raise UsageError(f"unknown sweep mode {spec.mode!r}")
    return rows


def _closed_row(args) -> Row:
    param, st, p, x = args
    point = corr.closed_form_point(st, x, p)
    if p is None and st.d != 3:
        # no closed-form negativity beyond qutrits: use the trace norm
        point = replace(point, negativity=corr.negativity(build_two_param_state(st.r, st.t, st.d)))
    return Row(param, point)


def numerical_point(st: TwoParamState, x: float, p: DephasingParams | None, grid_n: int = 64) -> corr.CorrelationPoint:
    """The same three measures recomputed from density matrices (slow path)."""
    rho = build_two_param_state(st.r, st.t, st.d)
    if p is not None:
        rho = apply_dephasing(rho, p)
    return corr.CorrelationPoint(
        st.r, st.s, st.t, x,
        None if p is None else p.gamma_a,
        None if p is None else p.gamma_b,
        corr.deficit_numerical(rho, grid_n=grid_n).value,
        corr.weak_deficit(rho, x),
        corr.negativity(rho),
    )


def _checked_row(args) -> tuple[Row, float]:
    param, st, p, x, grid_n = args
    row = _closed_row((param, st, p, x))
    num = numerical_point(st, x, p, grid_n)
    dev = max(
        abs(row.point.deficit - num.deficit),
        abs(row.point.weak_deficit - num.weak_deficit),
        abs(row.point.negativity - num.negativity),
    )
    return row, dev


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() yields in submission order, so output order is the sweep order
        return list(pool.map(fn, items))


def run_sweep(spec: SweepSpec, *, jobs: int = 1) -> list[Row]:
    items = [(param, st, p, spec.x) for param, st, p in validate(spec)]
    return _pmap(_closed_row, items, jobs)


def check_sweep(spec: SweepSpec, *, jobs: int = 1) -> tuple[list[Row], float]:
    """Closed-form rows plus the worst deviation from the numerical recomputation."""
    items = [(param, st, p, spec.x, spec.grid_n) for param, st, p in validate(spec)]
    out = _pmap(_checked_row, items, jobs)
    return [r for r, _ in out], max((dev for _, dev in out), default=0.0)


def iter_csv(rows: list[Row]) -> Iterator[str]:
    yield CSV_HEADER
    for row in rows:
        yield row.csv()


def to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    for line in iter_csv(rows):
        buf.write(line + "\n")
    return buf.getvalue()
