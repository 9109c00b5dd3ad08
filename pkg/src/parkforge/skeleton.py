"""Iterative thinning and skeleton path decomposition."""

from __future__ import annotations

import numpy as np

_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def thin(bits: np.ndarray) -> np.ndarray:
    """Zhang-Suen thinning to a 1-px-wide 8-connected skeleton.

    Accepts any array where foreground is nonzero; returns uint8 {0, 255}.
    Both sub-steps flag removals over the whole image before applying them.
    """
    img = np.pad(np.asarray(bits) > 0, 1)

    def neighbors(a):
        # P2..P9 clockwise from north, for the unpadded interior
        p2 = a[:-2, 1:-1]
        p3 = a[:-2, 2:]
        p4 = a[1:-1, 2:]
        p5 = a[2:, 2:]
        p6 = a[2:, 1:-1]
        p7 = a[2:, :-2]
        p8 = a[1:-1, :-2]
        p9 = a[:-2, :-2]
        return p2, p3, p4, p5, p6, p7, p8, p9

    changed = True
    while changed:
        changed = False
        for step in (0, 1):
            p2, p3, p4, p5, p6, p7, p8, p9 = neighbors(img)
            seq = (p2, p3, p4, p5, p6, p7, p8, p9, p2)
            b = sum(n.astype(np.uint8) for n in seq[:-1])
            a = sum((~seq[i] & seq[i + 1]).astype(np.uint8) for i in range(8))
            cond = img[1:-1, 1:-1] & (b >= 2) & (b <= 6) & (a == 1)
            if step == 0:
                cond &= ~(p2 & p4 & p6) & ~(p4 & p6 & p8)
            else:
                cond &= ~(p2 & p4 & p8) & ~(p2 & p6 & p8)
            if cond.any():
                img[1:-1, 1:-1] &= ~cond
                changed = True
    return np.where(img[1:-1, 1:-1], 255, 0).astype(np.uint8)


def skeleton_paths(skeleton_bits: np.ndarray) -> list[np.ndarray]:
    """Decompose a skeleton into maximal paths between endpoints/junctions.

    Paths split at pixels with 3 or more skeleton neighbors and at
    endpoints (1 neighbor).  Pure cycles with no such node come back as
    closed paths.  Points are (x, y); every path has at least 2 points.
    """
    fg = np.asarray(skeleton_bits) > 0
    ys, xs = np.nonzero(fg)
    pixels = set(zip(xs.tolist(), ys.tolist()))

    def nbrs(p):
        return [
            (p[0] + dx, p[1] + dy)
            for dy, dx in _OFFSETS
            if (p[0] + dx, p[1] + dy) in pixels
        ]

    degree = {p: len(nbrs(p)) for p in pixels}
    nodes = sorted(p for p, d in degree.items() if d != 2)
    visited: set[tuple[tuple[int, int], tuple[int, int]]] = set()
    paths: list[np.ndarray] = []

    def walk(start, second):
        path = [start, second]
        visited.add((start, second))
        visited.add((second, start))
        prev, cur = start, second
        while degree[cur] == 2:
            nxt = next(n for n in nbrs(cur) if n != prev)
            visited.add((cur, nxt))
            visited.add((nxt, cur))
            path.append(nxt)
            prev, cur = cur, nxt
        return path

    for node in nodes:
        for second in sorted(nbrs(node)):
            if (node, second) in visited:
                continue
            paths.append(np.asarray(walk(node, second), dtype=np.int64))

    # leftover degree-2 pixels form closed loops
    in_path = {p for path in paths for p in map(tuple, path)}
    remaining = sorted(p for p in pixels if p not in in_path and degree[p] == 2)
    seen: set[tuple[int, int]] = set()
    for start in remaining:
        if start in seen:
            continue
        loop = [start]
        prev, cur = None, start
        while True:
            candidates = [n for n in sorted(nbrs(cur)) if n != prev]
            if not candidates:
                break
            nxt = candidates[0]
            if nxt == start:
                loop.append(nxt)
                break
            loop.append(nxt)
            prev, cur = cur, nxt
        seen.update(loop)
        if len(loop) >= 2:
            paths.append(np.asarray(loop, dtype=np.int64))
    return paths
