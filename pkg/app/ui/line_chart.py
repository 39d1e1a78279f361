# ABOUTME: Deterministic SVG line charts for E(t), error curves and convergence plots
# ABOUTME: Builds the markup by hand: axes, ticks, one polyline per series, legend

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from app.errors import UsageError

Series = tuple[Sequence[float], Sequence[float]]


class LineChart:
    """
    Renders named (x, y) series as an SVG string.

    With log_y the y axis shows log10 of the values; nonpositive or
    non-finite points are skipped, which breaks the polyline there.
    """

    # SVG dimensions
    WIDTH = 640
    HEIGHT = 400
    MARGIN_LEFT = 70
    MARGIN_RIGHT = 20
    MARGIN_TOP = 36
    MARGIN_BOTTOM = 50
    TICKS = 5

    COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

    def __init__(self, log_x: bool = False, log_y: bool = False):
        self.log_x = log_x
        self.log_y = log_y

    def render(
        self,
        series: dict[str, Series],
        title: str = "",
        x_label: str = "t",
        y_label: str = "E",
    ) -> str:
        if not series:
            raise UsageError("Need at least one series to chart")
        transformed = {name: self._transform(xs, ys) for name, (xs, ys) in series.items()}
        x_range, y_range = self._ranges(transformed.values())

        axis_elements = self._make_axes(x_range, y_range, x_label, y_label)
        line_elements = []
        legend_elements = []
        for i, (name, (xs, ys)) in enumerate(transformed.items()):
            color = self.COLORS[i % len(self.COLORS)]
            line_elements.extend(self._make_polylines(xs, ys, x_range, y_range, color))
            legend_elements.append(self._make_legend_entry(name, color, i))
        label_elements = [self._make_title(title, (self.WIDTH / 2, 22))] if title else []

        svg = f'''<svg width="{self.WIDTH}" height="{self.HEIGHT}" xmlns="http://www.w3.org/2000/svg" style="background: white;">
        <g id="axes">{chr(10).join(axis_elements)}</g>
        <g id="lines">{chr(10).join(line_elements)}</g>
        <g id="legend">{chr(10).join(legend_elements)}</g>
        <g id="labels">{chr(10).join(label_elements)}</g>
    </svg>'''

        return svg

    def _transform(self, xs: Sequence[float], ys: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(xs, dtype=np.float64).reshape(-1)
        y = np.asarray(ys, dtype=np.float64).reshape(-1)
        if x.shape != y.shape:
            raise UsageError(f"Series has {x.size} x values but {y.size} y values")
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.log_x:
                x = np.where(x > 0, np.log10(x), np.nan)
            if self.log_y:
                y = np.where(y > 0, np.log10(y), np.nan)
        return x, y

    def _ranges(self, data) -> tuple[tuple[float, float], tuple[float, float]]:
        xs, ys = [], []
        for x, y in data:
            keep = np.isfinite(x) & np.isfinite(y)
            xs.append(x[keep])
            ys.append(y[keep])
        x_all = np.concatenate(xs)
        y_all = np.concatenate(ys)
        if x_all.size == 0:
            return (0.0, 1.0), (0.0, 1.0)
        return self._padded(x_all.min(), x_all.max()), self._padded(y_all.min(), y_all.max())

    @staticmethod
    def _padded(lo: float, hi: float) -> tuple[float, float]:
        if hi - lo < 1e-12 * max(1.0, abs(lo), abs(hi)):
            pad = 0.5 * max(1.0, abs(lo))
            return float(lo - pad), float(hi + pad)
        return float(lo), float(hi)

    def _to_pixel(self, x: float, y: float, x_range, y_range) -> tuple[float, float]:
        plot_w = self.WIDTH - self.MARGIN_LEFT - self.MARGIN_RIGHT
        plot_h = self.HEIGHT - self.MARGIN_TOP - self.MARGIN_BOTTOM
        px = self.MARGIN_LEFT + plot_w * (x - x_range[0]) / (x_range[1] - x_range[0])
        py = self.MARGIN_TOP + plot_h * (1.0 - (y - y_range[0]) / (y_range[1] - y_range[0]))
        return px, py

    def _make_polylines(self, xs, ys, x_range, y_range, color: str) -> list[str]:
        """One polyline per run of finite points."""
        elements = []
        run: list[str] = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                px, py = self._to_pixel(x, y, x_range, y_range)
                run.append(f"{px:.1f},{py:.1f}")
                continue
            if run:
                elements.append(self._make_polyline(run, color))
                run = []
        if run:
            elements.append(self._make_polyline(run, color))
        return elements

    @staticmethod
    def _make_polyline(points: list[str], color: str) -> str:
        return f'<polyline points="{" ".join(points)}" stroke="{color}" stroke-width="2" fill="none" stroke-linejoin="round"/>'

    def _make_straight_line(
        self,
        start: tuple[float, float],
        end: tuple[float, float],
        color: str = "#333",
        stroke_width: int = 1
    ) -> str:
        x1, y1 = start
        x2, y2 = end
        return f'<path d="M {x1:.1f} {y1:.1f} L {x2:.1f} {y2:.1f}" stroke="{color}" stroke-width="{stroke_width}" fill="none"/>'

    def _make_axes(self, x_range, y_range, x_label: str, y_label: str) -> list[str]:
        elements = []
        left, bottom = self.MARGIN_LEFT, self.HEIGHT - self.MARGIN_BOTTOM
        right, top = self.WIDTH - self.MARGIN_RIGHT, self.MARGIN_TOP
        elements.append(self._make_straight_line((left, bottom), (right, bottom)))
        elements.append(self._make_straight_line((left, bottom), (left, top)))

        for i in range(self.TICKS + 1):
            frac = i / self.TICKS
            xv = x_range[0] + frac * (x_range[1] - x_range[0])
            px, _ = self._to_pixel(xv, y_range[0], x_range, y_range)
            elements.append(self._make_straight_line((px, bottom), (px, bottom + 5)))
            elements.append(self._make_label(f"{xv:.3g}", (px, bottom + 18), "middle"))

            yv = y_range[0] + frac * (y_range[1] - y_range[0])
            _, py = self._to_pixel(x_range[0], yv, x_range, y_range)
            elements.append(self._make_straight_line((left - 5, py), (left, py)))
            elements.append(self._make_label(f"{yv:.3g}", (left - 8, py + 4), "end"))

        x_text = f"log10 {x_label}" if self.log_x else x_label
        y_text = f"log10 {y_label}" if self.log_y else y_label
        elements.append(self._make_label(x_text, ((left + right) / 2, self.HEIGHT - 12), "middle"))
        elements.append(
            f'<text x="16" y="{(top + bottom) / 2:.1f}" font-family="sans-serif" font-size="12" '
            f'fill="#333" text-anchor="middle" transform="rotate(-90 16 {(top + bottom) / 2:.1f})">{escape(y_text)}</text>'
        )
        return elements

    def _make_legend_entry(self, name: str, color: str, index: int) -> str:
        x = self.MARGIN_LEFT + 10
        y = self.MARGIN_TOP + 14 + 16 * index
        swatch = self._make_straight_line((x, y - 4), (x + 18, y - 4), color=color, stroke_width=3)
        return swatch + "\n" + self._make_label(name, (x + 24, y), "start", color)

    def _make_label(self, text: str, position: tuple[float, float], anchor: str = "start", color: str = "#333") -> str:
        x, y = position
        return f'<text x="{x:.1f}" y="{y:.1f}" font-family="sans-serif" font-size="11" fill="{color}" text-anchor="{anchor}">{escape(text)}</text>'

    def _make_title(self, text: str, position: tuple[float, float]) -> str:
        """Create a small centered title."""
        x, y = position
        return f'<text x="{x:.1f}" y="{y:.1f}" font-family="sans-serif" font-size="14" fill="#333" text-anchor="middle">{escape(text)}</text>'


def render_curve_svg(series: dict[str, Series], title: str = "", log_y: bool = False,
                     log_x: bool = False, x_label: str = "t", y_label: str = "E") -> str:
    return LineChart(log_x=log_x, log_y=log_y).render(series, title, x_label, y_label)


def write_svg(svg: str, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(svg)
    except OSError as e:
        raise UsageError(f"Cannot write chart '{path}': {e.strerror or e}") from e
