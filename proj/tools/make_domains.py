"""Writes the sample domains in data/ as triangulated OBJ files."""

import math
import pathlib
import sys


def write_obj(path, verts, tris, comment):
    with open(path, "w") as f:
        f.write(f"# {comment}\n")
        for v in verts:
            f.write("v {} {} {}\n".format(*(repr(float(c)) if c != int(c) else str(int(c)) for c in v)))
        for t in tris:
            f.write("f {} {} {}\n".format(*(i + 1 for i in t)))


def grid_region(xs, ys, keep):
    """Triangulated union of grid cells (i, j) for which keep(i, j) holds."""
    index = {}
    verts = []
    tris = []

    def vid(i, j):
        if (i, j) not in index:
            index[(i, j)] = len(verts)
            verts.append((xs[i], ys[j], 0))
        return index[(i, j)]

    for j in range(len(ys) - 1):
        for i in range(len(xs) - 1):
            if not keep(i, j):
                continue
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            tris += [(a, b, c), (a, c, d)]
    return verts, tris


def box(lo, hi, n):
    """Closed box surface with each face split into an n[0] x n[1] x n[2] grid."""
    index = {}
    verts = []
    tris = []

    def vid(p):
        key = tuple(round(c, 9) for c in p)
        if key not in index:
            index[key] = len(verts)
            verts.append(p)
        return index[key]

    def coord(axis, k):
        return lo[axis] + (hi[axis] - lo[axis]) * k / n[axis]

    for axis in range(3):
        u, v = [a for a in range(3) if a != axis]
        for side in (0, 1):
            for i in range(n[u]):
                for j in range(n[v]):
                    quad = []
                    for di, dj in ((0, 0), (1, 0), (1, 1), (0, 1)):
                        p = [0.0, 0.0, 0.0]
                        p[axis] = hi[axis] if side else lo[axis]
                        p[u] = coord(u, i + di)
                        p[v] = coord(v, j + dj)
                        quad.append(vid(tuple(p)))
                    a, b, c, d = quad
                    # (u, v, axis) is a right-handed frame for axis = 0, 2 and left-handed for 1.
                    outward = (side == 1) == (axis != 1)
                    if outward:
                        tris += [(a, b, c), (a, c, d)]
                    else:
                        tris += [(a, c, b), (a, d, c)]
    return verts, tris


def cylinder(radius, z0, z1, segments, rows, rings):
    verts = []
    tris = []

    def ring_points(r, m, z):
        start = len(verts)
        for k in range(m):
            t = 2 * math.pi * k / m
            verts.append((r * math.cos(t), r * math.sin(t), z))
        return list(range(start, start + m))

    # Lateral surface.
    levels = [ring_points(radius, segments, z0 + (z1 - z0) * k / rows) for k in range(rows + 1)]
    for lower, upper in zip(levels, levels[1:]):
        for k in range(segments):
            a, b = lower[k], lower[(k + 1) % segments]
            c, d = upper[(k + 1) % segments], upper[k]
            tris += [(a, b, c), (a, c, d)]

    # Caps: concentric rings joined by a merge walk, centre fan inside.
    for z, outer, up in ((z0, levels[0], False), (z1, levels[-1], True)):
        loops = []
        for k in range(1, rings):
            r = radius * k / rings
            loops.append(ring_points(r, segments * k // rings, z))
        loops.append(outer)
        centre = len(verts)
        verts.append((0.0, 0.0, z))
        cap = []
        first = loops[0]
        for k in range(len(first)):
            cap.append((centre, first[k], first[(k + 1) % len(first)]))
        for inner, out in zip(loops, loops[1:]):
            i = o = 0
            ni, no = len(inner), len(out)
            while i < ni or o < no:
                ti = 2 * math.pi * (i + 1) / ni
                to = 2 * math.pi * (o + 1) / no
                if o < no and (i >= ni or to <= ti):
                    cap.append((inner[i % ni], out[o % no], out[(o + 1) % no]))
                    o += 1
                else:
                    cap.append((inner[i % ni], out[o % no], inner[(i + 1) % ni]))
                    i += 1
        # Counterclockwise seen from +z; flip for the bottom cap.
        tris += cap if up else [(a, c, b) for a, b, c in cap]
    return verts, tris


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    xs = [10 * i for i in range(11)]
    ys = [10 * j for j in range(6)]
    v, t = grid_region(xs, ys, lambda i, j: True)
    write_obj(out / "rectangle.obj", v, t, "rectangle 100 x 50")

    xs = [-20 + 10 * i for i in range(6)]
    ys = [-30 + 10 * j for j in range(6)]
    v, t = grid_region(xs, ys, lambda i, j: not (xs[i] >= 10 and ys[j] < -10))
    write_obj(out / "lshape.obj", v, t, "L-shape, reentrant corner at (10, -10)")

    v, t = box((0, 0, 0), (100, 100, 80), (5, 5, 4))
    write_obj(out / "cuboid.obj", v, t, "cuboid 100 x 100 x 80")

    v, t = cylinder(50.0, -20.0, 20.0, 48, 4, 4)
    write_obj(out / "cylinder.obj", v, t, "cylinder radius 50, height 40, axis z")

    with open(out / "rectangle_centre.anchors", "w") as f:
        f.write("# x y z h\n50 25 0 20\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data")
