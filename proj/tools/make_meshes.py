#!/usr/bin/env python3
"""Regenerate the OFF assets in assets/.

Meshes:
  tetrahedron.off       boundary of a regular tetrahedron on the unit sphere
  icosphere.off         icosahedron subdivided twice, projected to the unit sphere
  torus_grid.off        24x12 grid on the vertical torus (x^2+z^2 -> R=2, r=1)
  torus7.off            7-vertex triangulation of the torus
  projective_plane.off  6-vertex triangulation of RP^2
"""
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "assets")


def write_off(name, verts, faces):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        f.write("OFF\n")
        f.write(f"{len(verts)} {len(faces)} 0\n")
        for v in verts:
            f.write("%.17g %.17g %.17g\n" % tuple(v))
        for t in faces:
            f.write("3 %d %d %d\n" % tuple(t))
    print(f"wrote {path}: {len(verts)} vertices, {len(faces)} faces")


def normalize(v):
    n = math.sqrt(sum(x * x for x in v))
    return tuple(x / n for x in v)


def tetrahedron():
    s = 1.0 / math.sqrt(3.0)
    verts = [(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)]
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    write_off("tetrahedron.off", verts, faces)


def icosphere(subdiv=2):
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    verts = [normalize(v) for v in verts]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(subdiv):
        mid = {}
        new_faces = []

        def midpoint(a, b):
            key = (min(a, b), max(a, b))
            if key not in mid:
                va, vb = verts[a], verts[b]
                verts.append(normalize(tuple((va[i] + vb[i]) / 2 for i in range(3))))
                mid[key] = len(verts) - 1
            return mid[key]

        for a, b, c in faces:
            ab, ac, bc = midpoint(a, b), midpoint(a, c), midpoint(b, c)
            new_faces += [(a, ab, ac), (b, bc, ab), (c, ac, bc), (ab, bc, ac)]
        faces = new_faces
    write_off("icosphere.off", verts, faces)


def torus_grid(nu=24, nv=12, R=2.0, r=1.0):
    # vertical torus: axis of revolution = x, center circle in the yz-plane
    verts = []
    for i in range(nu):
        u = 2.0 * math.pi * i / nu
        for j in range(nv):
            v = 2.0 * math.pi * j / nv
            rho = R + r * math.cos(v)
            verts.append((r * math.sin(v), rho * math.cos(u), rho * math.sin(u)))
    faces = []
    for i in range(nu):
        for j in range(nv):
            a = i * nv + j
            b = ((i + 1) % nu) * nv + j
            c = i * nv + (j + 1) % nv
            d = ((i + 1) % nu) * nv + (j + 1) % nv
            faces += [(a, b, c), (b, d, c)]
    write_off("torus_grid.off", verts, faces)


def torus7():
    # Moebius-Kantor triangulation: faces {i, i+1, i+3} and {i, i+2, i+3} mod 7
    verts = []
    for j in range(7):
        u = 2.0 * math.pi * j / 7
        v = 2.0 * math.pi * (2 * j % 7) / 7
        rho = 2.0 + math.cos(v)
        verts.append((math.sin(v), rho * math.cos(u), rho * math.sin(u)))
    faces = []
    for i in range(7):
        faces.append((i, (i + 1) % 7, (i + 3) % 7))
        faces.append((i, (i + 2) % 7, (i + 3) % 7))
    write_off("torus7.off", verts, faces)


def projective_plane():
    # antipodal quotient of the icosahedron: 6 vertices, 15 edges, 10 faces
    verts = [(1, 0, 0), (0, 1, 0), (0, 0, 1),
             (-1, 1, 1), (1, -1, 1), (1, 1, -1)]
    faces = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
    ]
    write_off("projective_plane.off", verts, faces)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    tetrahedron()
    icosphere()
    torus_grid()
    torus7()
    projective_plane()
