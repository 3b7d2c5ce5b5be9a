"""The four cube blocks, diagonal patterns, and block-based triangulation.

A block is a triangulation of the solid cube that cuts each boundary square
into two triangles along one diagonal; the six chosen diagonals form the
block's diagonal pattern.  Four blocks suffice to triangulate every closed
manifold obtained by gluing the faces of one cube in pairs:

* the 5-tetrahedron block (four corner tetrahedra around a central one),
* the flipped block (one extra tetrahedron flattens onto a square and flips
  its diagonal; its internal edge has valence 4),
* the 5-valent block (the star of a 5-valent internal edge plus one more
  tetrahedron),
* the 4-valent block (the star of a 4-valent internal edge, an octahedron,
  plus two tetrahedra on opposite boundary triangles).

Given a gluing, we count the face pairs whose maps fail to carry diagonal
to diagonal in the 5-tetrahedron pattern and repair the pattern by flipping
one diagonal per bad pair (choosing flips in adjacent squares for two bad
pairs, and in squares around a common cube corner for three).  The repaired
pattern is always a rigid-symmetry image of one reference block, which is
then instantiated through that symmetry and glued up.

The tables below are frozen transcriptions with corner ids 4x + 2y + z;
their valence profiles are pinned by golden tests.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .cube_complex import (
    CHARTS,
    CORNER_COORDS,
    FACES,
    CubeGluing,
    Face,
    GluingPair,
    is_closed_manifold,
)
from .enumeration import ALL_CUBE_SYMMETRIES, CubeSymmetry
from .triangulation import Triangulation


class BlockKind(enum.Enum):
    FIVE_TETRAHEDRON = "five-tetrahedron"
    FLIPPED = "flipped"
    FIVE_VALENT = "five-valent"
    FOUR_VALENT = "four-valent"

    @property
    def tet_count(self) -> int:
        return 5 if self is BlockKind.FIVE_TETRAHEDRON else 6


_BLOCK_TETS: dict[BlockKind, tuple[frozenset[int], ...]] = {
    # central tetrahedron on the odd-parity corners, four corner tetrahedra
    BlockKind.FIVE_TETRAHEDRON: tuple(map(frozenset, (
        (1, 2, 4, 7), (0, 1, 2, 4), (2, 4, 6, 7), (1, 4, 5, 7), (1, 2, 3, 7),
    ))),
    # extra tetrahedron flattened onto the -y square
    BlockKind.FLIPPED: tuple(map(frozenset, (
        (1, 2, 4, 7), (0, 1, 2, 4), (2, 4, 6, 7), (1, 4, 5, 7), (1, 2, 3, 7),
        (0, 1, 4, 5),
    ))),
    # five tetrahedra around the main diagonal 2-5, one more glued on
    BlockKind.FIVE_VALENT: tuple(map(frozenset, (
        (0, 1, 2, 5), (0, 2, 4, 5), (2, 4, 5, 6), (2, 5, 6, 7), (1, 2, 5, 7),
        (1, 2, 3, 7),
    ))),
    # four tetrahedra around 2-5, two more on opposite boundary triangles
    BlockKind.FOUR_VALENT: tuple(map(frozenset, (
        (0, 2, 5, 6), (2, 5, 6, 7), (1, 2, 5, 7), (0, 1, 2, 5), (1, 2, 3, 7),
        (0, 4, 5, 6),
    ))),
}

_BLOCK_INTERNAL_EDGE: dict[BlockKind, frozenset[int] | None] = {
    BlockKind.FIVE_TETRAHEDRON: None,
    BlockKind.FLIPPED: frozenset((1, 4)),
    BlockKind.FIVE_VALENT: frozenset((2, 5)),
    BlockKind.FOUR_VALENT: frozenset((2, 5)),
}


@dataclass(frozen=True)
class DiagonalPattern:
    """One diagonal per face, as the unordered pair of chart positions it
    joins: {0,2} or {1,3} in each face's chart."""

    diagonals: tuple[frozenset[int], ...]  # indexed by Face.index

    def __post_init__(self):
        if len(self.diagonals) != 6 or any(
                d not in (frozenset((0, 2)), frozenset((1, 3))) for d in self.diagonals):
            raise ValueError("a diagonal pattern needs one chart diagonal per face")

    def diagonal_of(self, face: Face) -> frozenset[int]:
        return self.diagonals[face.index]

    def corner_diagonal(self, face: Face) -> frozenset[int]:
        chart = CHARTS[face]
        return frozenset(chart[i] for i in self.diagonals[face.index])

    def flip(self, face: Face) -> "DiagonalPattern":
        other = frozenset((0, 2)) if self.diagonals[face.index] == frozenset((1, 3)) \
            else frozenset((1, 3))
        new = list(self.diagonals)
        new[face.index] = other
        return DiagonalPattern(tuple(new))

    def flipped_faces_relative_to(self, other: "DiagonalPattern") -> tuple[Face, ...]:
        return tuple(f for f in sorted(FACES, key=lambda f: f.index)
                     if self.diagonals[f.index] != other.diagonals[f.index])


def _pattern_of_block(kind: BlockKind) -> DiagonalPattern:
    """Read the diagonal pattern off the block's boundary triangles."""
    tets = _BLOCK_TETS[kind]
    diagonals = []
    for face in FACES:
        chart = CHARTS[face]
        square = set(chart)
        choice = None
        for positions in (frozenset((0, 2)), frozenset((1, 3))):
            diag = {chart[i] for i in positions}
            off = [c for c in square if c not in diag]
            tris = [frozenset(diag | {u}) for u in off]
            # boundary triangles belong to exactly one tetrahedron;
            # triangles inside the block belong to two
            if all(sum(1 for tet in tets if tri <= tet) == 1 for tri in tris):
                if choice is not None:
                    raise AssertionError(f"{kind}: both diagonals of {face} on the boundary")
                choice = positions
        if choice is None:
            raise AssertionError(f"{kind}: no diagonal of {face} bounded by the block")
        diagonals.append(choice)
    return DiagonalPattern(tuple(diagonals))


_BLOCK_PATTERNS = {kind: _pattern_of_block(kind) for kind in BlockKind}

FIVE_TET_PATTERN = _BLOCK_PATTERNS[BlockKind.FIVE_TETRAHEDRON]


def reference_pattern(kind: BlockKind) -> DiagonalPattern:
    return _BLOCK_PATTERNS[kind]


def block_valences(kind: BlockKind) -> tuple[int | None, tuple[int, ...]]:
    """(internal edge valence, sorted diagonal valences) of the raw block."""
    tets = _BLOCK_TETS[kind]
    internal = _BLOCK_INTERNAL_EDGE[kind]

    def valence(edge: frozenset[int]) -> int:
        return sum(1 for tet in tets if edge <= tet)

    diag_valences = tuple(sorted(
        valence(_BLOCK_PATTERNS[kind].corner_diagonal(f)) for f in FACES))
    return (valence(internal) if internal is not None else None, diag_valences)


# -- mismatch analysis --------------------------------------------------------


@dataclass(frozen=True)
class MismatchReport:
    pair_matches: tuple[bool, bool, bool]

    @property
    def mismatch_count(self) -> int:
        return sum(1 for m in self.pair_matches if not m)

    def mismatching_pairs(self, g: CubeGluing) -> tuple[GluingPair, ...]:
        return tuple(p for p, ok in zip(g.pairs, self.pair_matches) if not ok)


def pair_matches_pattern(pair: GluingPair, pattern: DiagonalPattern) -> bool:
    imap = pair.index_map()
    image = frozenset(imap[i] for i in pattern.diagonal_of(pair.face_a))
    return image == pattern.diagonal_of(pair.face_b)


def mismatch_report(g: CubeGluing, pattern: DiagonalPattern) -> MismatchReport:
    return MismatchReport(tuple(pair_matches_pattern(p, pattern) for p in g.pairs))


# -- block selection ----------------------------------------------------------


def _faces_at_corner(corner: int) -> tuple[Face, ...]:
    x, y, z = CORNER_COORDS[corner]
    return (Face(0, 1 if x else -1), Face(1, 1 if y else -1), Face(2, 1 if z else -1))


def _apply_symmetry_to_pattern(cs: CubeSymmetry, pattern: DiagonalPattern) -> DiagonalPattern:
    diagonals: list[frozenset[int] | None] = [None] * 6
    for f in FACES:
        f2 = cs.apply_face(f)
        beta = cs.chart_maps[f.index]
        diagonals[f2.index] = frozenset(beta[i] for i in pattern.diagonal_of(f))
    return DiagonalPattern(tuple(diagonals))


@dataclass(frozen=True)
class BlockChoice:
    kind: BlockKind
    pattern: DiagonalPattern
    symmetry: CubeSymmetry  # carries reference_pattern(kind) to pattern


def _transport_symmetry(kind: BlockKind, pattern: DiagonalPattern) -> CubeSymmetry:
    ref = _BLOCK_PATTERNS[kind]
    for cs in ALL_CUBE_SYMMETRIES:
        if _apply_symmetry_to_pattern(cs, ref) == pattern:
            return cs
    raise AssertionError(
        f"pattern is not a rigid image of the {kind.value} block pattern; "
        "the frozen block transcription would be wrong")


def select_block(g: CubeGluing) -> BlockChoice:
    """Case analysis on the number of non-matching pairs; the returned
    pattern always matches all three pairs of g and is a rigid image of the
    chosen block's reference pattern."""
    report = mismatch_report(g, FIVE_TET_PATTERN)
    bad = report.mismatching_pairs(g)
    count = report.mismatch_count
    pattern = FIVE_TET_PATTERN
    if count == 0:
        kind = BlockKind.FIVE_TETRAHEDRON
    elif count == 1:
        kind = BlockKind.FLIPPED
        flip = min((bad[0].face_a, bad[0].face_b), key=lambda f: f.index)
        pattern = pattern.flip(flip)
    elif count == 2:
        kind = BlockKind.FIVE_VALENT
        candidates = [
            (fa, fb)
            for fa in (bad[0].face_a, bad[0].face_b)
            for fb in (bad[1].face_a, bad[1].face_b)
            if fa.opposite() != fb
        ]
        if not candidates:
            raise AssertionError("no adjacent flip choice for two bad pairs")
        fa, fb = min(candidates, key=lambda t: (t[0].index, t[1].index))
        pattern = pattern.flip(fa).flip(fb)
    else:
        kind = BlockKind.FOUR_VALENT
        pair_of_face = {f.index: i for i, p in enumerate(g.pairs)
                        for f in (p.face_a, p.face_b)}
        chosen = None
        for corner in range(8):
            # flip around an odd-parity corner, whose three pattern
            # diagonals all contain it, provided its faces meet all pairs
            if sum(CORNER_COORDS[corner]) % 2 == 0:
                continue
            faces = _faces_at_corner(corner)
            if {pair_of_face[f.index] for f in faces} == {0, 1, 2}:
                chosen = faces
                break
        if chosen is None:
            raise AssertionError("no corner meets one face of each bad pair")
        for f in chosen:
            pattern = pattern.flip(f)
    result = BlockChoice(kind, pattern, _transport_symmetry(kind, pattern))
    check = mismatch_report(g, result.pattern)
    if check.mismatch_count != 0:
        raise AssertionError("selected pattern does not match the gluing")
    return result


# -- assembling the triangulation ---------------------------------------------


@dataclass(frozen=True)
class BlockInstance:
    kind: BlockKind
    pattern: DiagonalPattern
    tets: tuple[tuple[int, int, int, int], ...]  # sorted corner ids per tet
    internal_edge: frozenset[int] | None


def block_instance(choice: BlockChoice) -> BlockInstance:
    cs = choice.symmetry
    tets = tuple(tuple(sorted(cs.apply_corner(c) for c in tet))
                 for tet in _BLOCK_TETS[choice.kind])
    internal = _BLOCK_INTERNAL_EDGE[choice.kind]
    if internal is not None:
        internal = frozenset(cs.apply_corner(c) for c in internal)
    return BlockInstance(choice.kind, choice.pattern, tets, internal)


def _owning_tet(instance: BlockInstance, triangle: frozenset[int]) -> tuple[int, int]:
    """(tet index, face slot) of the unique tetrahedron carrying a boundary
    triangle given by its corner set."""
    owners = [i for i, tet in enumerate(instance.tets) if triangle <= set(tet)]
    if len(owners) != 1:
        raise AssertionError(f"boundary triangle {set(triangle)} owned by {owners}")
    t = owners[0]
    (slot,) = [s for s in range(4) if instance.tets[t][s] not in triangle]
    return t, slot


def assemble_triangulation(g: CubeGluing) -> Triangulation:
    """Glue the selected block's boundary triangles according to g.

    Requires a closed-manifold gluing; the result has 5 or 6 tetrahedra and
    carries edge labels (internal / diagonal / other) for valence reports.
    """
    check = is_closed_manifold(g.to_spec())
    if not check:
        raise ValueError(f"not a closed manifold: {check.diagnostic}")
    choice = select_block(g)
    instance = block_instance(choice)
    n = len(instance.tets)
    gl: list[list] = [[None] * 4 for _ in range(n)]

    def slot_of(t: int, corner: int) -> int:
        return instance.tets[t].index(corner)

    def glue(t1, f1, t2, f2, corner_map):
        p1 = [None] * 4
        for c_src, c_dst in corner_map.items():
            p1[slot_of(t1, c_src)] = slot_of(t2, c_dst)
        p1[f1] = f2
        gl[t1][f1] = ((t2, f2), tuple(p1))
        p2 = [None] * 4
        for i, x in enumerate(p1):
            p2[x] = i
        gl[t2][f2] = ((t1, f1), tuple(p2))

    # internal gluings: every corner triple shared by two tetrahedra
    for t1, t2 in itertools.combinations(range(n), 2):
        shared = set(instance.tets[t1]) & set(instance.tets[t2])
        if len(shared) == 3:
            f1 = slot_of(t1, (set(instance.tets[t1]) - shared).pop())
            f2 = slot_of(t2, (set(instance.tets[t2]) - shared).pop())
            glue(t1, f1, t2, f2, {c: c for c in shared})

    # boundary gluings: two triangles per face pair, matched diagonals
    for pair in g.pairs:
        cmap = pair.corner_map()
        diag_a = instance.pattern.corner_diagonal(pair.face_a)
        diag_b = instance.pattern.corner_diagonal(pair.face_b)
        if {cmap[c] for c in diag_a} != set(diag_b):
            raise AssertionError("pattern diagonal not carried to pattern diagonal")
        off_a = [c for c in CHARTS[pair.face_a] if c not in diag_a]
        for u in off_a:
            tri_a = frozenset(diag_a | {u})
            tri_b = frozenset(cmap[c] for c in tri_a)
            t1, f1 = _owning_tet(instance, tri_a)
            t2, f2 = _owning_tet(instance, tri_b)
            glue(t1, f1, t2, f2, {c: cmap[c] for c in tri_a})

    labels = {}
    for t, tet in enumerate(instance.tets):
        for a, b in itertools.combinations(range(4), 2):
            edge = frozenset((tet[a], tet[b]))
            if instance.internal_edge is not None and edge == instance.internal_edge:
                labels[(t, frozenset((a, b)))] = "internal"
            elif any(edge == instance.pattern.corner_diagonal(f) for f in FACES):
                labels[(t, frozenset((a, b)))] = "diagonal"
    return Triangulation(gl, edge_labels=labels)
