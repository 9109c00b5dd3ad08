"""2D geometric primitives shared by the vector and mesh stages.

Rings are (N, 2) float arrays without a repeated closing point.  Unless
stated otherwise they are normalized counter-clockwise in a y-up frame,
which for y-down pixel coordinates means a negative shoelace sum.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import InternalError, ValidationError
from .validation import check_points


# ---------------------------------------------------------------------------
# polygon and polyline measures
# ---------------------------------------------------------------------------

def polygon_signed_area(ring: np.ndarray) -> float:
    """Shoelace sum / 2 in the coordinate frame of the input."""
    ring = np.asarray(ring, dtype=np.float64)
    x, y = ring[:, 0], ring[:, 1]
    return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_area(ring: np.ndarray) -> float:
    return abs(polygon_signed_area(ring))


def polyline_length(points: np.ndarray, closed: bool = False) -> float:
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        return 0.0
    seg = np.diff(pts, axis=0)
    total = float(np.hypot(seg[:, 0], seg[:, 1]).sum())
    if closed:
        total += float(np.hypot(*(pts[0] - pts[-1])))
    return total


def ensure_ccw(ring: np.ndarray) -> np.ndarray:
    """Counter-clockwise in a y-up frame: negative shoelace on y-down coords."""
    ring = np.asarray(ring, dtype=np.float64)
    if polygon_signed_area(ring) > 0:
        return ring[::-1].copy()
    return ring


def dedupe_consecutive(points: np.ndarray, tol: float = 1e-9, closed: bool = True) -> np.ndarray:
    """Drop consecutive points closer than tol (and the wrap pair if closed)."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        return pts.copy()
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.hypot(*(pts[1:] - pts[:-1]).T) > tol
    out = pts[keep]
    if closed and len(out) > 1 and np.hypot(*(out[0] - out[-1])) <= tol:
        out = out[:-1]
    return out


# ---------------------------------------------------------------------------
# distances and containment
# ---------------------------------------------------------------------------

def points_to_segments_distance(points: np.ndarray, seg_a: np.ndarray, seg_b: np.ndarray) -> np.ndarray:
    """Min distance from each point to any of the segments (a_i, b_i).

    Evaluated in blocks to bound peak memory for large point sets.
    """
    pts = np.asarray(points, dtype=np.float64)
    a = np.asarray(seg_a, dtype=np.float64)
    b = np.asarray(seg_b, dtype=np.float64)
    d = b - a
    seg_len2 = (d * d).sum(axis=1)
    seg_len2 = np.where(seg_len2 == 0.0, 1.0, seg_len2)
    out = np.empty(len(pts), dtype=np.float64)
    block = max(1, 2_000_000 // max(1, len(a)))
    for start in range(0, len(pts), block):
        p = pts[start : start + block]
        rel = p[:, None, :] - a[None, :, :]
        t = np.clip((rel * d[None, :, :]).sum(axis=2) / seg_len2[None, :], 0.0, 1.0)
        proj = a[None, :, :] + t[..., None] * d[None, :, :]
        dist = np.hypot(*(p[:, None, :] - proj).transpose(2, 0, 1))
        out[start : start + block] = dist.min(axis=1)
    return out


def points_to_ring_distance(points: np.ndarray, ring: np.ndarray) -> np.ndarray:
    ring = np.asarray(ring, dtype=np.float64)
    return points_to_segments_distance(points, ring, np.roll(ring, -1, axis=0))


def points_in_polygon(points: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """Even-odd ray casting; points on an edge may land on either side."""
    pts = np.asarray(points, dtype=np.float64)
    ring = np.asarray(ring, dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    x0, y0 = ring[:, 0], ring[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    for i in range(len(ring)):
        crosses = (y0[i] > y) != (y1[i] > y)
        if not crosses.any():
            continue
        xi = x0[i] + (y[crosses] - y0[i]) / (y1[i] - y0[i]) * (x1[i] - x0[i])
        flip = np.zeros(len(pts), dtype=bool)
        flip[crosses] = x[crosses] < xi
        inside ^= flip
    return inside


def point_in_polygon(point, ring: np.ndarray) -> bool:
    return bool(points_in_polygon(np.asarray([point], dtype=np.float64), ring)[0])


def _segments_properly_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 1e-12:
            return 1
        if v < -1e-12:
            return -1
        return 0

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True

    def on_seg(a, b, c):
        return (
            orient(a, b, c) == 0
            and min(a[0], b[0]) - 1e-12 <= c[0] <= max(a[0], b[0]) + 1e-12
            and min(a[1], b[1]) - 1e-12 <= c[1] <= max(a[1], b[1]) + 1e-12
        )

    return on_seg(p1, p2, p3) or on_seg(p1, p2, p4) or on_seg(p3, p4, p1) or on_seg(p3, p4, p2)


def is_simple_polygon(ring: np.ndarray) -> bool:
    """True when no two non-adjacent edges intersect. O(n^2)."""
    ring = np.asarray(ring, dtype=np.float64)
    n = len(ring)
    if n < 3:
        return False
    for i in range(n):
        a1, a2 = ring[i], ring[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_properly_intersect(a1, a2, ring[j], ring[(j + 1) % n]):
                return False
    return True


# ---------------------------------------------------------------------------
# polyline simplification
# ---------------------------------------------------------------------------

def _point_segment_distances(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    len2 = float(d @ d)
    if len2 == 0.0:
        return np.hypot(*(pts - a).T)
    t = np.clip(((pts - a) @ d) / len2, 0.0, 1.0)
    proj = a + t[:, None] * d
    return np.hypot(*(pts - proj).T)


def rdp(points: np.ndarray, epsilon: float) -> np.ndarray:
    """Ramer-Douglas-Peucker on an open polyline; endpoints always survive.

    Distances are measured to the chord segment, so the output is a
    subsequence of the input with every dropped point within epsilon of
    the simplified chain.
    """
    pts = check_points(points, "points")
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    n = len(pts)
    if n <= 2:
        return pts.copy()
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        dists = _point_segment_distances(pts[i + 1 : j], pts[i], pts[j])
        k = int(np.argmax(dists))
        if dists[k] > epsilon:
            split = i + 1 + k
            keep[split] = True
            stack.append((i, split))
            stack.append((split, j))
    return pts[keep]


def rdp_closed(ring: np.ndarray, epsilon: float) -> np.ndarray:
    """Simplify a closed ring by splitting at the point farthest from ring[0]."""
    pts = check_points(ring, "ring", min_points=3)
    far = int(np.argmax(np.hypot(*(pts - pts[0]).T)))
    if far == 0:
        return pts.copy()
    first = rdp(pts[: far + 1], epsilon)
    second = rdp(np.vstack([pts[far:], pts[:1]]), epsilon)
    return np.vstack([first[:-1], second[:-1]])


# ---------------------------------------------------------------------------
# convex hull, minimum-area rectangle, minimum enclosing circle
# ---------------------------------------------------------------------------

def convex_hull(points: np.ndarray) -> np.ndarray:
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = check_points(points, "points")
    uniq = np.unique(pts, axis=0)
    if len(uniq) <= 2:
        return uniq
    order = np.lexsort((uniq[:, 1], uniq[:, 0]))
    p = uniq[order]

    def build(seq):
        chain: list[np.ndarray] = []
        for v in seq:
            while len(chain) >= 2:
                a, b = chain[-2], chain[-1]
                if (b[0] - a[0]) * (v[1] - a[1]) - (b[1] - a[1]) * (v[0] - a[0]) > 0:
                    break
                chain.pop()
            chain.append(v)
        return chain

    lower = build(p)
    upper = build(p[::-1])
    return np.asarray(lower[:-1] + upper[:-1], dtype=np.float64)


def min_area_rect(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-area rotated rectangle by rotating calipers on the hull.

    Returns (corners (4, 2) in ring order, edge angle in degrees
    normalized to [0, 90)).  Raises ValidationError for degenerate
    (collinear) input.
    """
    hull = convex_hull(points)
    if len(hull) < 3:
        raise ValidationError("minimum-area rectangle is undefined for collinear points")
    n = len(hull)
    edges = np.roll(hull, -1, axis=0) - hull
    edge_dirs = edges / np.hypot(*edges.T)[:, None]

    # rotating calipers: advance three support pointers as the caliper
    # direction sweeps over each hull edge
    proj0 = hull @ edge_dirs[0]
    perp0 = hull @ np.array([-edge_dirs[0, 1], edge_dirs[0, 0]])
    i_max = int(np.argmax(proj0))
    i_min = int(np.argmin(proj0))
    i_top = int(np.argmax(perp0))

    best = (np.inf, 0, 0.0, 0.0, 0.0, 0.0)  # area, edge idx, a0, a1, b0, b1
    for k in range(n):
        u = edge_dirs[k]
        w = np.array([-u[1], u[0]])

        def advance(idx, direction, sign):
            for _ in range(n + 1):
                cur = sign * float(hull[idx] @ direction)
                nxt = sign * float(hull[(idx + 1) % n] @ direction)
                if nxt >= cur + 1e-12:
                    idx = (idx + 1) % n
                else:
                    return idx, cur
            raise InternalError("caliper pointer failed to settle")

        i_max, a1 = advance(i_max, u, +1.0)
        i_min, neg_a0 = advance(i_min, u, -1.0)
        i_top, b1 = advance(i_top, w, +1.0)
        a0 = -neg_a0
        b0 = float(hull[k] @ w)
        area = (a1 - a0) * (b1 - b0)
        if area < best[0]:
            best = (area, k, a0, a1, b0, b1)

    _, k, a0, a1, b0, b1 = best
    u = edge_dirs[k]
    w = np.array([-u[1], u[0]])
    corners = np.array(
        [a0 * u + b0 * w, a1 * u + b0 * w, a1 * u + b1 * w, a0 * u + b1 * w]
    )
    angle = float(np.degrees(np.arctan2(u[1], u[0]))) % 90.0
    return corners, angle


def min_enclosing_circle(points: np.ndarray) -> tuple[float, float, float]:
    """Smallest circle containing all points; Welzl-style incremental.

    The point order is shuffled with a fixed-seed generator so the result
    is deterministic for identical input.
    """
    pts = [tuple(map(float, p)) for p in check_points(points, "points")]
    random.Random(0x5EED).shuffle(pts)

    def in_circle(c, p):
        return c is not None and np.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] + 1e-12

    def diameter(a, b):
        cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
        r = max(np.hypot(cx - a[0], cy - a[1]), np.hypot(cx - b[0], cy - b[1]))
        return (cx, cy, r)

    def circumcircle(a, b, c):
        ox, oy = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0, (
            min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])
        ) / 2.0
        ax, ay, bx, by, cx, cy = a[0] - ox, a[1] - oy, b[0] - ox, b[1] - oy, c[0] - ox, c[1] - oy
        d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
        if d == 0.0:
            return None
        x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
        y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
        r = max(np.hypot(x - p[0], y - p[1]) for p in (a, b, c))
        return (x, y, r)

    def circle_two(subset, p, q):
        circ = diameter(p, q)
        left = right = None
        for r in subset:
            if in_circle(circ, r):
                continue
            cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
            c = circumcircle(p, q, r)
            if c is None:
                continue
            c_cross = (q[0] - p[0]) * (c[1] - p[1]) - (q[1] - p[1]) * (c[0] - p[0])
            if cross > 0 and (left is None or c_cross > (q[0] - p[0]) * (left[1] - p[1]) - (q[1] - p[1]) * (left[0] - p[0])):
                left = c
            elif cross < 0 and (right is None or c_cross < (q[0] - p[0]) * (right[1] - p[1]) - (q[1] - p[1]) * (right[0] - p[0])):
                right = c
        if left is None and right is None:
            return circ
        if left is None:
            return right
        if right is None:
            return left
        return left if left[2] <= right[2] else right

    def circle_one(subset, p):
        c = (p[0], p[1], 0.0)
        for i, q in enumerate(subset):
            if not in_circle(c, q):
                c = diameter(p, q) if c[2] == 0.0 else circle_two(subset[: i + 1], p, q)
        return c

    circle = None
    for i, p in enumerate(pts):
        if not in_circle(circle, p):
            circle = circle_one(pts[: i + 1], p)
    return circle


# ---------------------------------------------------------------------------
# curve smoothing and resampling
# ---------------------------------------------------------------------------

def smooth_closed_ring(ring: np.ndarray, max_seg_len: float = 0.5) -> np.ndarray:
    """Closed piecewise-quadratic Bezier through a simplified ring.

    Each vertex becomes a control point; the midpoints of adjacent vertex
    pairs are the on-curve joints.  Returns a dense closed sample chain.
    """
    pts = check_points(ring, "ring", min_points=3)
    n = len(pts)
    samples = []
    for i in range(n):
        prev_mid = (pts[i - 1] + pts[i]) / 2.0
        ctrl = pts[i]
        next_mid = (pts[i] + pts[(i + 1) % n]) / 2.0
        approx_len = np.hypot(*(ctrl - prev_mid)) + np.hypot(*(next_mid - ctrl))
        m = max(2, int(np.ceil(approx_len / max_seg_len)))
        t = np.linspace(0.0, 1.0, m, endpoint=False)[:, None]
        seg = (1 - t) ** 2 * prev_mid + 2 * (1 - t) * t * ctrl + t**2 * next_mid
        samples.append(seg)
    return np.vstack(samples)


def subdivide_ring(ring: np.ndarray, max_len: float) -> np.ndarray:
    """Insert collinear points so no ring edge exceeds max_len.

    Inserted points lie on the polygon, so a control chain built from the
    result hugs straight edges and only rounds true corners.
    """
    pts = check_points(ring, "ring", min_points=3)
    if max_len <= 0:
        raise ValidationError(f"max_len must be positive, got {max_len}")
    out = []
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        out.append(a)
        span = float(np.hypot(*(b - a)))
        if span > max_len:
            pieces = int(np.ceil(span / max_len))
            for j in range(1, pieces):
                out.append(a + (b - a) * (j / pieces))
    return np.asarray(out)


def resample_ring(points: np.ndarray, step: float) -> np.ndarray:
    """Resample a closed chain at arc-length intervals of `step`, from t = 0."""
    pts = check_points(points, "points", min_points=3)
    if step <= 0:
        raise ValidationError(f"step must be positive, got {step}")
    closed = np.vstack([pts, pts[:1]])
    seg = np.diff(closed, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])
    total = cum[-1]
    if total <= 0:
        return pts[:1].copy()
    targets = np.arange(0.0, total, step)
    idx = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, len(seg_len) - 1)
    frac = (targets - cum[idx]) / np.where(seg_len[idx] == 0.0, 1.0, seg_len[idx])
    return closed[idx] + frac[:, None] * seg[idx]


# ---------------------------------------------------------------------------
# triangulation and offsetting
# ---------------------------------------------------------------------------

def ear_clip(ring: np.ndarray) -> np.ndarray:
    """Triangulate a simple polygon by ear clipping.

    Returns (M, 3) indices into the input ring; triangles wind
    counter-clockwise in the input frame.  Zero-area ears are removed
    without emitting a triangle.
    """
    pts = check_points(ring, "ring", min_points=3)
    n = len(pts)
    order = list(range(n))
    if polygon_signed_area(pts) < 0:
        order.reverse()

    def cross_at(i_prev, i_cur, i_next):
        a, b, c = pts[i_prev], pts[i_cur], pts[i_next]
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def any_point_inside(i_prev, i_cur, i_next, active):
        a, b, c = pts[i_prev], pts[i_cur], pts[i_next]
        for j in active:
            if j in (i_prev, i_cur, i_next):
                continue
            p = pts[j]
            d1 = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            d2 = (c[0] - b[0]) * (p[1] - b[1]) - (c[1] - b[1]) * (p[0] - b[0])
            d3 = (a[0] - c[0]) * (p[1] - c[1]) - (a[1] - c[1]) * (p[0] - c[0])
            if d1 >= -1e-12 and d2 >= -1e-12 and d3 >= -1e-12:
                return True
        return False

    triangles = []
    active = order[:]
    guard = 0
    while len(active) > 3:
        guard += 1
        if guard > 2 * n * n:
            raise InternalError("ear clipping failed to converge; polygon may be non-simple")
        clipped = False
        m = len(active)
        for k in range(m):
            i_prev, i_cur, i_next = active[k - 1], active[k], active[(k + 1) % m]
            c = cross_at(i_prev, i_cur, i_next)
            if abs(c) <= 1e-12:
                # collinear vertex: drop without a triangle
                active.pop(k)
                clipped = True
                break
            if c < 0:
                continue
            if any_point_inside(i_prev, i_cur, i_next, active):
                continue
            triangles.append((i_prev, i_cur, i_next))
            active.pop(k)
            clipped = True
            break
        if not clipped:
            raise InternalError("no ear found; polygon may be non-simple")
    if len(active) == 3 and abs(cross_at(*active)) > 1e-12:
        triangles.append(tuple(active))
    return np.asarray(triangles, dtype=np.int64).reshape(-1, 3)


def offset_polyline(points: np.ndarray, half_width: float, miter_limit: float = 4.0):
    """Offset an open polyline to both sides with mitered joins.

    Joins whose miter length exceeds miter_limit * half_width fall back
    to a bevel (two stations sharing the centerline vertex).  Returns
    (left, right) station arrays of equal length.
    """
    pts = dedupe_consecutive(check_points(points, "points", min_points=2), closed=False)
    if len(pts) < 2:
        raise ValidationError("offset needs at least 2 distinct points")
    seg = np.diff(pts, axis=0)
    seg /= np.hypot(seg[:, 0], seg[:, 1])[:, None]
    normals = np.column_stack([-seg[:, 1], seg[:, 0]])

    left, right = [], []

    def add(point, normal):
        left.append(point + half_width * normal)
        right.append(point - half_width * normal)

    add(pts[0], normals[0])
    for i in range(1, len(pts) - 1):
        n_in, n_out = normals[i - 1], normals[i]
        bisec = n_in + n_out
        norm = np.hypot(*bisec)
        if norm < 1e-12:
            add(pts[i], n_in)
            add(pts[i], n_out)
            continue
        bisec /= norm
        cos_half = float(bisec @ n_out)
        if cos_half < 1.0 / miter_limit:
            add(pts[i], n_in)
            add(pts[i], n_out)
        else:
            add(pts[i], bisec / cos_half)
    add(pts[-1], normals[-1])
    return np.asarray(left), np.asarray(right)
