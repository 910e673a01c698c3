"""Minimal deterministic SVG charts (CSV stays the canonical artifact)."""

import math

_WIDTH = 640
_HEIGHT = 400
_MARGIN = 56


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _header() -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]


def _axes(lines: list[str]) -> None:
    x0, y0 = _MARGIN, _HEIGHT - _MARGIN
    x1, y1 = _WIDTH - _MARGIN, _MARGIN
    lines.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    lines.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')


def _y_scale(lo: float, hi: float):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo

    def to_y(v: float) -> float:
        frac = (v - lo) / span
        return _HEIGHT - _MARGIN - frac * (_HEIGHT - 2 * _MARGIN)

    return to_y


def boxplot_svg(groups: list[tuple[str, list[float]]]) -> str:
    """Box-and-whisker chart, one box per (label, values) group."""
    values = [v for _, vs in groups for v in vs]
    lo, hi = min(values), max(values)
    to_y = _y_scale(min(lo, 0.0), hi)
    lines = _header()
    _axes(lines)
    slot = (_WIDTH - 2 * _MARGIN) / max(len(groups), 1)
    half = min(28.0, slot * 0.3)
    for i, (label, vs) in enumerate(groups):
        vs = sorted(vs)
        n = len(vs)
        med = vs[n // 2] if n % 2 else 0.5 * (vs[n // 2 - 1] + vs[n // 2])
        q1 = vs[max(0, int(0.25 * (n - 1)))]
        q3 = vs[min(n - 1, int(math.ceil(0.75 * (n - 1))))]
        cx = _MARGIN + (i + 0.5) * slot
        for whisk_v, box_v in ((vs[0], q1), (vs[-1], q3)):
            lines.append(
                f'<line x1="{_fmt(cx)}" y1="{_fmt(to_y(whisk_v))}" '
                f'x2="{_fmt(cx)}" y2="{_fmt(to_y(box_v))}" stroke="black"/>'
            )
        lines.append(
            f'<rect x="{_fmt(cx - half)}" y="{_fmt(to_y(q3))}" width="{_fmt(2 * half)}" '
            f'height="{_fmt(max(to_y(q1) - to_y(q3), 0.5))}" fill="none" stroke="black"/>'
        )
        lines.append(
            f'<line x1="{_fmt(cx - half)}" y1="{_fmt(to_y(med))}" '
            f'x2="{_fmt(cx + half)}" y2="{_fmt(to_y(med))}" stroke="black"/>'
        )
        lines.append(
            f'<text x="{_fmt(cx)}" y="{_HEIGHT - _MARGIN + 20}" text-anchor="middle" '
            f'font-size="12">{label}</text>'
        )
    lines.append(f'<text x="8" y="{_MARGIN - 8}" font-size="12">{_fmt(hi)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def linechart_svg(xs: list[float], series: list[tuple[str, list[float]]]) -> str:
    """Polyline chart of several series over shared x values."""
    ys = [v for _, vs in series for v in vs]
    lo, hi = min(ys), max(ys)
    to_y = _y_scale(min(lo, 0.0), hi)
    x_lo, x_hi = min(xs), max(xs)
    x_span = max(x_hi - x_lo, 1e-12)

    def to_x(v: float) -> float:
        return _MARGIN + (v - x_lo) / x_span * (_WIDTH - 2 * _MARGIN)

    lines = _header()
    _axes(lines)
    dashes = ["none", "6,3", "2,3", "8,2,2,2", "1,2", "10,4"]
    for i, (label, vs) in enumerate(series):
        pts = " ".join(f"{_fmt(to_x(x))},{_fmt(to_y(v))}" for x, v in zip(xs, vs))
        dash = dashes[i % len(dashes)]
        lines.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-dasharray="{dash}"/>')
        lines.append(
            f'<text x="{_WIDTH - _MARGIN + 4}" y="{_fmt(to_y(vs[-1]))}" font-size="12">{label}</text>'
        )
    lines.append(f'<text x="8" y="{_MARGIN - 8}" font-size="12">{_fmt(hi)}</text>')
    lines.append(
        f'<text x="{_MARGIN}" y="{_HEIGHT - _MARGIN + 20}" font-size="12">{_fmt(x_lo)}</text>'
    )
    lines.append(
        f'<text x="{_WIDTH - _MARGIN}" y="{_HEIGHT - _MARGIN + 20}" text-anchor="end" '
        f'font-size="12">{_fmt(x_hi)}</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
