# core/svg.py
"""Self-contained SVG figures rendered from jinja2 templates."""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from jinja2 import DictLoader, Environment, select_autoescape

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 640, 400
MARGIN = 50
PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]

_FRAME = """<svg xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}" font-family="sans-serif" font-size="11">
<rect width="100%" height="100%" fill="white"/>
<text x="{{ width / 2 }}" y="20" text-anchor="middle" font-size="14">{{ title }}</text>
<line x1="{{ margin }}" y1="{{ height - margin }}" x2="{{ width - margin }}" y2="{{ height - margin }}" stroke="black"/>
<line x1="{{ margin }}" y1="{{ margin }}" x2="{{ margin }}" y2="{{ height - margin }}" stroke="black"/>
<text x="{{ width / 2 }}" y="{{ height - 12 }}" text-anchor="middle">{{ xlabel }}</text>
<text x="14" y="{{ height / 2 }}" text-anchor="middle" transform="rotate(-90 14 {{ height / 2 }})">{{ ylabel }}</text>
{% for t in xticks %}<text x="{{ '%.1f' % t.pos }}" y="{{ height - margin + 14 }}" text-anchor="middle">{{ t.label }}</text>
{% endfor %}{% for t in yticks %}<text x="{{ margin - 4 }}" y="{{ '%.1f' % t.pos }}" text-anchor="end">{{ t.label }}</text>
{% endfor %}{% block body %}{% endblock %}
{% for item in legend %}<rect x="{{ width - margin - 90 }}" y="{{ margin + 14 * loop.index0 }}" width="10" height="10" fill="{{ item.colour }}"/><text x="{{ width - margin - 76 }}" y="{{ margin + 9 + 14 * loop.index0 }}">{{ item.label }}</text>
{% endfor %}</svg>
"""

_TEMPLATES = {
    "frame.svg": _FRAME,
    "bars.svg": """{% extends "frame.svg" %}{% block body %}{% for b in bars %}<rect x="{{ '%.2f' % b.x }}" y="{{ '%.2f' % b.y }}" width="{{ '%.2f' % b.w }}" height="{{ '%.2f' % b.h }}" fill="{{ b.colour }}" fill-opacity="{{ opacity }}"/>
{% endfor %}{% endblock %}""",
    "scatter.svg": """{% extends "frame.svg" %}{% block body %}{% for p in points %}<circle cx="{{ '%.2f' % p.x }}" cy="{{ '%.2f' % p.y }}" r="2" fill="{{ p.colour }}" fill-opacity="0.6"/>
{% endfor %}{% endblock %}""",
    "line.svg": """{% extends "frame.svg" %}{% block body %}<polyline fill="none" stroke="{{ colour }}" stroke-width="1.5" points="{% for p in points %}{{ '%.2f' % p.x }},{{ '%.2f' % p.y }} {% endfor %}"/>
{% endblock %}""",
    "barcode.svg": """<svg xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}" font-family="sans-serif" font-size="12">
<text x="{{ width / 2 }}" y="16" text-anchor="middle">{{ title }}</text>
{% for s in stripes %}<rect x="{{ '%.2f' % s.x }}" y="24" width="{{ '%.2f' % s.w }}" height="{{ height - 24 }}" fill="rgb({{ s.level }},{{ s.level }},{{ s.level }})"/>
{% endfor %}</svg>
""",
}

_env = Environment(loader=DictLoader(_TEMPLATES), autoescape=select_autoescape(default=True, default_for_string=True))

PathLike = Union[str, Path]


class _Axes:
    def __init__(self, xlim: Tuple[float, float], ylim: Tuple[float, float]):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0

    def x(self, v: float) -> float:
        return MARGIN + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def y(self, v: float) -> float:
        return HEIGHT - MARGIN - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)

    def ticks(self, n: int = 5) -> Tuple[List[dict], List[dict]]:
        xs = np.linspace(self.x0, self.x1, n)
        ys = np.linspace(self.y0, self.y1, n)
        return (
            [{"pos": self.x(v), "label": f"{v:.3g}"} for v in xs],
            [{"pos": self.y(v), "label": f"{v:.3g}"} for v in ys],
        )


def _context(axes: _Axes, title: str, xlabel: str, ylabel: str, legend: Optional[List[dict]] = None) -> dict:
    xticks, yticks = axes.ticks()
    return {
        "width": WIDTH,
        "height": HEIGHT,
        "margin": MARGIN,
        "title": title,
        "xlabel": xlabel,
        "ylabel": ylabel,
        "xticks": xticks,
        "yticks": yticks,
        "legend": legend or [],
    }


def _write(path: PathLike, template: str, context: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_env.get_template(template).render(**context))
    logger.debug("Wrote %s", path)
    return path


def bar_chart(path: PathLike, values: Sequence[float], title: str, xlabel: str = "", ylabel: str = "") -> Path:
    values = np.asarray(values, dtype=np.float64)
    axes = _Axes((0, max(len(values), 1)), (0, float(values.max()) if values.size else 1.0))
    bars = [
        {"x": axes.x(i) + 0.5, "y": axes.y(v), "w": max(axes.x(i + 1) - axes.x(i) - 1.0, 0.5), "h": axes.y(0) - axes.y(v), "colour": PALETTE[0]}
        for i, v in enumerate(values)
    ]
    return _write(path, "bars.svg", {**_context(axes, title, xlabel, ylabel), "bars": bars, "opacity": 1.0})


def histogram_chart(
    path: PathLike, series: Dict[str, Sequence[Tuple[float, float, int]]], title: str, xlabel: str = "", ylabel: str = "count"
) -> Path:
    """Overlaid histograms, one colour per series of (left, right, count) bins."""
    lefts = [b[0] for bins in series.values() for b in bins]
    rights = [b[1] for bins in series.values() for b in bins]
    top = max([b[2] for bins in series.values() for b in bins] or [1])
    axes = _Axes((min(lefts or [0.0]), max(rights or [1.0])), (0, top))
    bars, legend = [], []
    for k, (label, bins) in enumerate(series.items()):
        colour = PALETTE[k % len(PALETTE)]
        legend.append({"label": label, "colour": colour})
        for left, right, count in bins:
            if count:
                bars.append({"x": axes.x(left), "y": axes.y(count), "w": axes.x(right) - axes.x(left), "h": axes.y(0) - axes.y(count), "colour": colour})
    return _write(path, "bars.svg", {**_context(axes, title, xlabel, ylabel, legend), "bars": bars, "opacity": 0.6})


def scatter_chart(path: PathLike, points: np.ndarray, groups: Sequence, title: str, xlabel: str = "PC1", ylabel: str = "PC2") -> Path:
    points = np.asarray(points, dtype=np.float64)
    groups = np.asarray(groups)
    axes = _Axes((float(points[:, 0].min()), float(points[:, 0].max())), (float(points[:, 1].min()), float(points[:, 1].max())))
    labels = sorted(set(groups.tolist()))
    colours = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(labels)}
    unique, index = np.unique(np.column_stack([points.round(9), groups]), axis=0, return_index=True)
    drawn = [{"x": axes.x(points[i, 0]), "y": axes.y(points[i, 1]), "colour": colours[groups[i].item()]} for i in sorted(index)]
    legend = [{"label": str(g), "colour": colours[g]} for g in labels] if len(labels) > 1 else []
    return _write(path, "scatter.svg", {**_context(axes, title, xlabel, ylabel, legend), "points": drawn})


def line_chart(path: PathLike, xs: Sequence[float], ys: Sequence[float], title: str, xlabel: str = "", ylabel: str = "") -> Path:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    axes = _Axes((float(xs.min()), float(xs.max())), (float(ys.min()), float(ys.max())))
    points = [{"x": axes.x(x), "y": axes.y(y)} for x, y in zip(xs, ys)]
    return _write(path, "line.svg", {**_context(axes, title, xlabel, ylabel), "points": points, "colour": PALETTE[0]})


def barcode_chart(path: PathLike, values: Sequence[float], title: str) -> Path:
    """Greyscale stripes, lighter for larger values."""
    values = np.asarray(values, dtype=np.float64)
    span = values.max() - values.min() if values.size else 0.0
    levels = np.zeros_like(values) if span == 0 else (values - values.min()) / span
    width = WIDTH / max(values.size, 1)
    stripes = [{"x": i * width, "w": width, "level": int(round(255 * v))} for i, v in enumerate(levels)]
    return _write(path, "barcode.svg", {"width": WIDTH, "height": 120, "title": title, "stripes": stripes})
