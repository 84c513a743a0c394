"""Export likelihood curves and MCSES sweeps as CSV or a bare SVG line plot."""

from __future__ import annotations

from typing import Sequence, Union
from xml.sax.saxutils import escape

from .inference import McsesSpec, SValueResult
from .likelihood import LikelihoodCurve

Sweep = Sequence[tuple[McsesSpec, SValueResult]]
Series = Union[LikelihoodCurve, Sweep]

_SVG_W, _SVG_H = 640, 400
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 20, 50


def series_points(series: Series) -> tuple[list[tuple[float, float]], str, str]:
    """``(points, x meaning, y meaning)`` for a curve or a sweep."""
    if isinstance(series, LikelihoodCurve):
        return list(series.points), "delta", "likelihood_ratio"
    points = [(spec.value, result.s) for spec, result in series]
    scales = {spec.scale for spec, _ in series}
    scale = scales.pop() if len(scales) == 1 else "mcses"
    return points, ("mcses_delta" if scale == "delta" else scale), "s_value"


def curve_csv(points: Sequence[tuple[float, float]], x_meaning: str) -> str:
    lines = [f"# x={x_meaning}", "x,y"]
    lines += [f"{x:.10g},{y:.10g}" for x, y in points]
    return "\n".join(lines) + "\n"


def _ticks(lo: float, hi: float) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / 4 for i in range(5)]


def curve_svg(points: Sequence[tuple[float, float]], x_label: str, y_label: str) -> str:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(0.0, min(ys)), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def px(x):
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return _MARGIN_T + (1 - (y - y_lo) / (y_hi - y_lo)) * plot_h

    base_y = _MARGIN_T + plot_h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<line x1="{_MARGIN_L}" y1="{base_y}" x2="{_MARGIN_L + plot_w}" y2="{base_y}" stroke="black"/>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" y2="{base_y}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(
            f'<text x="{px(t):.2f}" y="{base_y + 16}" font-size="11" '
            f'text-anchor="middle">{t:.3g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        out.append(
            f'<text x="{_MARGIN_L - 6}" y="{py(t) + 4:.2f}" font-size="11" '
            f'text-anchor="end">{t:.3g}</text>'
        )
    out.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{_SVG_H - 10}" font-size="13" '
        f'text-anchor="middle">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{_MARGIN_T + plot_h / 2:.1f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2:.1f})">{escape(y_label)}</text>'
    )
    coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in points)
    out.append(f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_points(
    points: Sequence[tuple[float, float]],
    fmt: str = "csv",
    x_meaning: str = "x",
    y_meaning: str = "y",
) -> bytes:
    if not points:
        raise ValueError("cannot export an empty series")
    if fmt == "csv":
        return curve_csv(points, x_meaning).encode()
    if fmt == "svg":
        return curve_svg(points, x_meaning, y_meaning).encode()
    raise ValueError(f"unknown export format {fmt!r}; use 'csv' or 'svg'")


def export_curve(series: Series, fmt: str = "csv") -> bytes:
    """Serialize a likelihood curve or MCSES sweep.

    CSV output starts with a ``# x=<meaning>`` comment, then the ``x,y``
    header. For sweeps ``x`` is the MCSES on its own scale (``hazard_ratio``,
    ``rate_difference``, ...) and ``y`` the S-value; for likelihood curves it
    is ``delta`` against the likelihood ratio.
    """
    points, x_meaning, y_meaning = series_points(series)
    return export_points(points, fmt, x_meaning, y_meaning)
