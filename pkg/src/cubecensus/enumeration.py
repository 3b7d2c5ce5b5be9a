"""Enumeration of one-cube gluings and reduction modulo cube symmetry.

The raw space is 15 perfect matchings of the six faces times 8 square
symmetries per pair (512 per matching, 7680 in total, or 512 with the
matching restricted to opposite faces).  Canonical forms quotient by the
48 isometries of the cube acting by conjugation, by swapping the two faces
inside a pair, and by reordering pairs; orbits are computed by explicit
generation because the space is tiny and brute force is auditable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .cube_complex import (
    ALL_SQUARE_SYMMETRIES,
    CHARTS,
    CORNER_COORDS,
    FACES,
    CubeGluing,
    Face,
    GluingPair,
    corner_id,
    gluing_index_map,
    index_map_to_symmetry,
)


@dataclass(frozen=True)
class CubeSymmetry:
    """One of the 48 isometries of the cube as a corner permutation, with
    the induced face permutation and per-face chart position maps."""

    corner_perm: tuple[int, ...]
    face_image: tuple[int, ...]                      # face index -> face index
    chart_maps: tuple[tuple[int, int, int, int], ...]  # face index -> position map

    def apply_corner(self, c: int) -> int:
        return self.corner_perm[c]

    def apply_face(self, f: Face) -> Face:
        return FACES[self.face_image[f.index]]


def _build_symmetries() -> tuple[CubeSymmetry, ...]:
    out = []
    for axes in itertools.permutations(range(3)):
        for flips in itertools.product((0, 1), repeat=3):
            perm = []
            for c in range(8):
                src = CORNER_COORDS[c]
                img = [0, 0, 0]
                for j in range(3):
                    img[j] = src[axes[j]] ^ flips[j]
                perm.append(corner_id(*img))
            perm = tuple(perm)
            face_image = []
            chart_maps = []
            for f in FACES:
                image_corners = [perm[c] for c in CHARTS[f]]
                common = [
                    (a, CORNER_COORDS[image_corners[0]][a])
                    for a in range(3)
                    if all(CORNER_COORDS[c][a] == CORNER_COORDS[image_corners[0]][a]
                           for c in image_corners)
                ]
                (axis, bit), = common
                f2 = Face(axis, 1 if bit else -1)
                face_image.append(f2.index)
                chart2 = CHARTS[f2]
                chart_maps.append(tuple(chart2.index(c) for c in image_corners))
            out.append(CubeSymmetry(perm, tuple(face_image), tuple(chart_maps)))
    return tuple(out)


ALL_CUBE_SYMMETRIES = _build_symmetries()

_FACE_MATCHINGS: tuple[tuple[tuple[int, int], ...], ...]


def _matchings(indices: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    if not indices:
        yield ()
        return
    first, rest = indices[0], indices[1:]
    for partner in rest:
        remaining = tuple(i for i in rest if i != partner)
        for tail in _matchings(remaining):
            yield ((first, partner),) + tail


_FACE_MATCHINGS = tuple(_matchings(tuple(range(6))))
_OPPOSITE_MATCHING = tuple(
    m for m in _FACE_MATCHINGS
    if all(FACES[a].opposite() == FACES[b] for a, b in m)
)


def enumerate_raw(opposite_only: bool = False) -> Iterator[CubeGluing]:
    """Every valid one-cube gluing exactly once, in a fixed order."""
    matchings = _OPPOSITE_MATCHING if opposite_only else _FACE_MATCHINGS
    for matching in matchings:
        for syms in itertools.product(ALL_SQUARE_SYMMETRIES, repeat=3):
            yield CubeGluing(tuple(
                GluingPair(FACES[a], FACES[b], sym)
                for (a, b), sym in zip(matching, syms)
            ))


def conjugate_gluing(g: CubeGluing, cs: CubeSymmetry) -> CubeGluing:
    """Relabel the cube by the isometry: the same identification space with
    every face and chart position renamed."""
    new_pairs = []
    for pair in g.pairs:
        fa, fb = pair.face_a, pair.face_b
        sigma = gluing_index_map(pair.sym)
        beta_a = cs.chart_maps[fa.index]
        beta_b = cs.chart_maps[fb.index]
        inv_a = [0, 0, 0, 0]
        for i, x in enumerate(beta_a):
            inv_a[x] = i
        new_sigma = tuple(beta_b[sigma[inv_a[i]]] for i in range(4))
        new_pairs.append(GluingPair(cs.apply_face(fa), cs.apply_face(fb),
                                    index_map_to_symmetry(new_sigma)))
    return CubeGluing.from_pairs(new_pairs)


@dataclass(frozen=True)
class CanonicalGluing:
    gluing: CubeGluing
    orbit_size: int

    @property
    def class_id(self) -> str:
        return self.gluing.serialize()


def orbit_of(g: CubeGluing) -> tuple[CubeGluing, ...]:
    """All distinct relabelings of g, sorted."""
    seen: dict[tuple, CubeGluing] = {}
    for cs in ALL_CUBE_SYMMETRIES:
        image = conjugate_gluing(g, cs)
        seen[image.sort_key()] = image
    return tuple(seen[k] for k in sorted(seen))


def canonical_form(g: CubeGluing) -> CanonicalGluing:
    orbit = orbit_of(g)
    return CanonicalGluing(gluing=orbit[0], orbit_size=len(orbit))


def enumerate_canonical(opposite_only: bool = False) -> list[CanonicalGluing]:
    """One representative per symmetry class, sorted by serialization."""
    classes: dict[tuple, CanonicalGluing] = {}
    visited: set[tuple] = set()
    for g in enumerate_raw(opposite_only):
        key = g.sort_key()
        if key in visited:
            continue
        orbit = orbit_of(g)
        visited.update(image.sort_key() for image in orbit)
        rep = CanonicalGluing(gluing=orbit[0], orbit_size=len(orbit))
        classes[rep.gluing.sort_key()] = rep
    return [classes[k] for k in sorted(classes)]
