"""Sampling, cross-checking and exporting service rate regions."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ._num import coerce, div, fmt
from .closed_form import (L_all_coded, L_three_file, all_coded_is_degenerate, classify_three_file,
                          theorem2_preconditions)
from .errors import NotInRegionError, UnsupportedFormatError, UnsupportedParametersError
from .greedy import maximize_lambda_K_greedy
from .lp import RATIONAL, LpMode, maximize_last
from .storage import StorageSystem, enumerate_repair_groups

SOURCES = ("lp", "closed", "greedy")


@dataclass(frozen=True)
class Sample:
    point: tuple  # lambda_hat, K-1 entries
    L: object
    source: str
    case_label: str = ""


@dataclass
class RegionBoundary:
    K: int
    mu: object
    extent: object  # axis range used for plots, N * mu
    samples: list[Sample] = field(default_factory=list)
    halfspaces: list[tuple[tuple, object]] | None = None  # normal . lam <= offset
    vertices: list[tuple] | None = None

    def max_L(self):
        return max((s.L for s in self.samples), default=None)


def _case_label(system: StorageSystem, point, mu) -> str:
    if system.K != 3:
        return ""
    N1, N2, _ = system.N_counts
    if not theorem2_preconditions(N1, N2, system.C, mu, *point):
        return ""
    return classify_three_file(N1, N2, system.C, mu, *point).label


def closed_form_L(system: StorageSystem, lambda_hat: Sequence, mu=None):
    """Closed-form boundary value, or raise when no formula covers the system."""
    mu = system.mu if mu is None else mu
    if system.is_all_coded:
        return L_all_coded(system.C, system.K, mu, lambda_hat)
    if system.K == 3:
        N1, N2, N3 = system.N_counts
        return L_three_file(N1, N2, N3, system.C, mu, *lambda_hat)
    raise UnsupportedParametersError(
        "closed forms exist only for all-coded systems and three-file MDS cores")


def boundary_value(system: StorageSystem, lambda_hat: Sequence, source: str,
                   mode: LpMode = RATIONAL, table=None):
    """L at one point from the chosen source; None when the source gives no value."""
    mu = coerce(system.mu, mode.exact)
    lambda_hat = tuple(coerce(v, mode.exact) for v in lambda_hat)
    if source == "lp":
        return maximize_last(system, table, lambda_hat, mode)[0]
    if source == "closed":
        try:
            return closed_form_L(system, lambda_hat, mu)
        except (NotInRegionError, UnsupportedParametersError):
            return None
    if source == "greedy":
        try:
            return maximize_lambda_K_greedy(system.with_mu(mu), lambda_hat)[0]
        except UnsupportedParametersError:
            return None
    raise ValueError(f"unknown source {source!r}")


def _grid(step, top, exact):
    step = coerce(step, exact)
    if not step > 0:
        raise ValueError("grid step must be positive")
    n = math.floor(div(coerce(top, exact), step) + (0 if exact else 1e-9))
    return [i * step for i in range(n + 1)]


def sample_boundary(system: StorageSystem, grid_step, source: str = "lp",
                    mode: LpMode = RATIONAL) -> RegionBoundary:
    """Evaluate L on a grid over [0, N mu]^(K-1); points outside the region are left out."""
    if source == "closed" and not (system.is_all_coded or system.K == 3):
        raise UnsupportedParametersError(
            "closed forms exist only for all-coded systems and three-file MDS cores")
    mu = coerce(system.mu, mode.exact)
    extent = system.N * mu
    table = enumerate_repair_groups(system) if source == "lp" else None
    axis = _grid(grid_step, extent, mode.exact)
    region = RegionBoundary(system.K, mu, extent)
    if system.K == 1:
        L = boundary_value(system, (), source, mode, table)
        if L is not None:
            region.samples.append(Sample((), L, source))
        return region
    # the region is downward closed, so once a point drops out the rest of its
    # innermost row is out too (for every source, since each is monotone or
    # undefined past the boundary)
    for head in product(axis, repeat=system.K - 2):
        for x in axis:
            point = head + (x,)
            L = boundary_value(system, point, source, mode, table)
            if L is None:
                if source == "lp":
                    break
                continue
            region.samples.append(Sample(point, L, source, _case_label(system, point, mu)))
    if system.K == 2:
        region.vertices = extreme_points_2d(region)
    return region


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """Andrew's monotone chain, counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def extreme_points_2d(region: RegionBoundary) -> list[tuple]:
    """Extreme points of the sampled two-file region (exact in rational mode)."""
    zero = 0 * region.mu
    pts = [(zero, zero)]
    for s in region.samples:
        pts.append((s.point[0], s.L))
        pts.append((s.point[0], zero))
    return convex_hull(pts)


def all_coded_polytope(C: int, K: int, mu=1) -> RegionBoundary:
    """Exact half-space and vertex description of an all-coded region."""
    zero = 0 * mu
    origin = (zero,) * K
    halfspaces = [(tuple(-1 if i == j else 0 for j in range(K)), zero) for i in range(K)]
    if all_coded_is_degenerate(C, K):
        halfspaces.append(((1,) * K, zero))
        vertices = [origin]
        extent = zero
    else:
        cap = div(C, K) * mu
        halfspaces.append(((1,) * K, cap))
        vertices = [origin] + [tuple(cap if i == j else zero for j in range(K)) for i in range(K)]
        extent = cap
    region = RegionBoundary(K, mu, extent, halfspaces=halfspaces, vertices=vertices)
    if K >= 2 and not all_coded_is_degenerate(C, K):
        # boundary samples at the vertices' projections
        cap = div(C, K) * mu
        for v in vertices:
            region.samples.append(Sample(v[:-1], cap - sum(v[:-1]), "closed"))
    elif K >= 2:
        region.samples.append(Sample(origin[:-1], zero, "closed"))
    return region


@dataclass
class CrossValidationReport:
    points: list[dict]
    max_discrepancy: object
    mismatches: list[dict]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        lines = [f"points checked: {len(self.points)}",
                 f"max |difference| where all sources give a value: {fmt(self.max_discrepancy)}",
                 f"mismatching points: {len(self.mismatches)}"]
        for m in self.mismatches[:20]:
            lines.append("  lambda_hat=(" + ", ".join(fmt(v) for v in m["lambda_hat"]) + ") "
                         + " ".join(f"{k}={'-' if m[k] is None else fmt(m[k])}" for k in SOURCES)
                         + f" {m['case']}")
        if len(self.mismatches) > 20:
            lines.append(f"  ... {len(self.mismatches) - 20} more")
        return "\n".join(lines)


def cross_validate(system: StorageSystem, grid_step, mode: LpMode = RATIONAL) -> CrossValidationReport:
    """Compare LP, closed form and greedy on the three-file closed form's domain."""
    if system.K != 3:
        raise UnsupportedParametersError("cross-validation covers three-file systems")
    mu = coerce(system.mu, mode.exact)
    N1, N2, _ = system.N_counts
    table = enumerate_repair_groups(system)
    axis = _grid(grid_step, (N1 + N2 + div(system.C, 3)) * mu, mode.exact)
    points, mismatches = [], []
    worst = 0 * mu
    tol = 0 if mode.exact else mode.tol
    for l1, l2 in product(axis, axis):
        if not theorem2_preconditions(N1, N2, system.C, mu, l1, l2):
            continue
        row = {"lambda_hat": (l1, l2),
               "case": classify_three_file(N1, N2, system.C, mu, l1, l2).label}
        for src in SOURCES:
            row[src] = boundary_value(system, (l1, l2), src, mode, table)
        vals = [row[src] for src in SOURCES]
        if all(v is not None for v in vals):
            spread = max(vals) - min(vals)
            worst = max(worst, spread)
            if spread > tol:
                mismatches.append(row)
        elif any(v is not None for v in vals):
            mismatches.append(row)
        points.append(row)
    return CrossValidationReport(points, worst, mismatches)


# --- export -------------------------------------------------------------

def to_csv(region: RegionBoundary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"lambda_{i + 1}" for i in range(region.K - 1)] + ["L", "source", "case_label"])
    for s in region.samples:
        w.writerow([fmt(v) for v in s.point] + [fmt(s.L), s.source, s.case_label])
    return buf.getvalue()


def _num(v):
    return float(fmt(v))


def to_json(region: RegionBoundary) -> str:
    doc = {
        "K": region.K,
        "mu": _num(region.mu),
        "samples": [{"lambda_hat": [_num(v) for v in s.point], "L": _num(s.L),
                     "source": s.source, "case_label": s.case_label} for s in region.samples],
        "halfspaces": None if region.halfspaces is None else
        [{"normal": [_num(v) for v in n], "offset": _num(b)} for n, b in region.halfspaces],
        "vertices": None if region.vertices is None else
        [[_num(v) for v in p] for p in region.vertices],
    }
    return json.dumps(doc, indent=2) + "\n"


SVG_SIZE = 600
SVG_MARGIN = 60


def to_svg(region: RegionBoundary) -> str:
    if region.K > 3:
        raise UnsupportedFormatError(f"svg export supports K <= 3, got K={region.K}")
    extent = float(region.extent) or 1.0
    span = SVG_SIZE - 2 * SVG_MARGIN

    def px(x, y):
        return (SVG_MARGIN + float(x) / extent * span, SVG_SIZE - SVG_MARGIN - float(y) / extent * span)

    def pt(x, y):
        a, b = px(x, y)
        return f"{fmt(a)},{fmt(b)}"

    if region.K == 3:
        xlab, ylab = "λ2", "λ3"
    elif region.K == 2:
        xlab, ylab = "λ1", "λ2"
    else:
        xlab, ylab = "λ1", ""
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="{SVG_MARGIN}" y1="{SVG_SIZE - SVG_MARGIN}" x2="{SVG_SIZE - SVG_MARGIN + 20}" '
        f'y2="{SVG_SIZE - SVG_MARGIN}" stroke="black"/>',
        f'<line x1="{SVG_MARGIN}" y1="{SVG_SIZE - SVG_MARGIN}" x2="{SVG_MARGIN}" y2="{SVG_MARGIN - 20}" '
        f'stroke="black"/>',
        f'<text x="{SVG_SIZE - SVG_MARGIN + 25}" y="{SVG_SIZE - SVG_MARGIN + 5}" '
        f'font-size="16">{xlab}</text>',
        f'<text x="{SVG_MARGIN - 10}" y="{SVG_MARGIN - 25}" font-size="16">{ylab}</text>',
    ]

    def intercepts(pairs):
        if not pairs:
            return
        x_max = max(x for x, _ in pairs)
        y0 = max((y for x, y in pairs if x == 0), default=None)
        a, b = px(x_max, 0)
        out.append(f'<text x="{fmt(a)}" y="{fmt(b + 20)}" font-size="12" '
                   f'text-anchor="middle">{fmt(x_max)}</text>')
        if y0 is not None:
            a, b = px(0, y0)
            out.append(f'<text x="{fmt(a - 8)}" y="{fmt(b + 4)}" font-size="12" '
                       f'text-anchor="end">{fmt(y0)}</text>')

    if not region.samples or all(s.L == 0 and not any(s.point) for s in region.samples):
        a, b = px(0, 0)
        out.append(f'<circle cx="{fmt(a)}" cy="{fmt(b)}" r="4" fill="steelblue"/>')
        out.append(f'<text x="{fmt(a + 8)}" y="{fmt(b - 8)}" font-size="12">0</text>')
    elif region.K == 2:
        poly = region.vertices or extreme_points_2d(region)
        out.append('<polygon points="' + " ".join(pt(x, y) for x, y in poly)
                   + '" fill="steelblue" fill-opacity="0.35" stroke="steelblue" stroke-width="2"/>')
        intercepts(poly)
    elif region.K == 1:
        L = region.samples[0].L
        out.append(f'<polyline points="{pt(0, 0)} {pt(L, 0)}" fill="none" stroke="steelblue" '
                   f'stroke-width="4"/>')
        intercepts([(0, 0), (L, 0)])
    else:
        slices: dict = {}
        for s in region.samples:
            slices.setdefault(s.point[0], []).append((s.point[1], s.L))
        for l1 in sorted(slices):
            pairs = sorted(slices[l1])
            out.append(f'<polyline points="{" ".join(pt(x, y) for x, y in pairs)}" fill="none" '
                       f'stroke="steelblue" stroke-width="1.5"><title>λ1 = {fmt(l1)}</title></polyline>')
        first = sorted(slices)[0]
        intercepts(sorted(slices[first]))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export(region: RegionBoundary, fmt_name: str, path) -> None:
    if fmt_name == "csv":
        text = to_csv(region)
    elif fmt_name == "json":
        text = to_json(region)
    elif fmt_name == "svg":
        text = to_svg(region)
    else:
        raise UnsupportedFormatError(f"unknown format {fmt_name!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def slice_region(region: RegionBoundary, l1) -> RegionBoundary:
    """Keep only the three-file samples with the given first coordinate."""
    out = RegionBoundary(region.K, region.mu, region.extent)
    out.samples = [s for s in region.samples if s.point and s.point[0] == l1]
    return out
