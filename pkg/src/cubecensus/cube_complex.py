"""The cube, its face charts, square symmetries, gluings and quotients.

Conventions fixed once and used everywhere:

* Corners of the unit cube are numbered 0..7 with corner (x,y,z) getting id
  4x + 2y + z, so numeric order is lexicographic order on coordinates.
* Every face has a corner chart: its four corners listed counterclockwise
  as seen from outside the cube, starting at the smallest corner id.
* A gluing of faceA to faceB is written as a square symmetry `r<k>` or
  `r<k>m` relative to the base identification that matches the two charts
  with reversed cyclic order (charts of distinct faces look mirror-image
  to each other from outside, so the base map is the one "without twists":
  for opposite faces it is the straight translation).  Concretely, corner
  chartA[i] is sent to chartB[(k - i) % 4] for `r<k>`, and to
  chartB[(k + i) % 4] for `r<k>m`.  The eight symmetries form a dihedral
  group; the `m` forms are exactly the orientation-reversing gluings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .triangulation import Triangulation, _UnionFind

CORNER_COORDS = tuple((x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1))


def corner_id(x: int, y: int, z: int) -> int:
    return 4 * x + 2 * y + z


@dataclass(frozen=True)
class Face:
    axis: int  # 0, 1, 2 for x, y, z
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.axis not in (0, 1, 2) or self.sign not in (1, -1):
            raise ValueError("bad face label")

    @property
    def index(self) -> int:
        # display order: +x, -x, +y, -y, +z, -z
        return 2 * self.axis + (0 if self.sign > 0 else 1)

    def opposite(self) -> "Face":
        return Face(self.axis, -self.sign)

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + "xyz"[self.axis]

    def __lt__(self, other: "Face") -> bool:
        return self.index < other.index

    @staticmethod
    def from_str(s: str) -> "Face":
        if len(s) == 2 and s[0] in "+-" and s[1] in "xyz":
            return Face("xyz".index(s[1]), 1 if s[0] == "+" else -1)
        raise ValueError(f"bad face label {s!r}")


FACES = tuple(Face(axis, sign) for axis in (0, 1, 2) for sign in (1, -1))


def _chart(face: Face) -> tuple[int, int, int, int]:
    bit = 1 if face.sign > 0 else 0
    corners = [c for c in range(8) if CORNER_COORDS[c][face.axis] == bit]
    start = min(corners)
    diag = next(c for c in corners
                if c != start and all(CORNER_COORDS[c][a] != CORNER_COORDS[start][a]
                                      for a in range(3) if a != face.axis))
    n1, n2 = sorted(c for c in corners if c not in (start, diag))

    def cross_points_outward(a, b):
        pa, pb, ps = CORNER_COORDS[a], CORNER_COORDS[b], CORNER_COORDS[start]
        e1 = tuple(pa[i] - ps[i] for i in range(3))
        e2 = tuple(pb[i] - pa[i] for i in range(3))
        cr = (e1[1] * e2[2] - e1[2] * e2[1],
              e1[2] * e2[0] - e1[0] * e2[2],
              e1[0] * e2[1] - e1[1] * e2[0])
        return cr[face.axis] == face.sign

    if cross_points_outward(n1, diag):
        return (start, n1, diag, n2)
    assert cross_points_outward(n2, diag)
    return (start, n2, diag, n1)


CHARTS: dict[Face, tuple[int, int, int, int]] = {f: _chart(f) for f in FACES}


@dataclass(frozen=True)
class SquareSymmetry:
    """Element of the dihedral group of order 8 acting on chart positions
    0..3: rotations i -> i + r and reflections i -> r - i (mod 4)."""

    rotation: int
    reflected: bool

    def __post_init__(self):
        if self.rotation not in (0, 1, 2, 3):
            raise ValueError("rotation must be in 0..3")

    def apply(self, i: int) -> int:
        return (self.rotation - i) % 4 if self.reflected else (self.rotation + i) % 4

    def compose(self, other: "SquareSymmetry") -> "SquareSymmetry":
        """self after other: (self.compose(other)).apply(i) == self.apply(other.apply(i))."""
        r = (self.rotation - other.rotation) % 4 if self.reflected else (self.rotation + other.rotation) % 4
        return SquareSymmetry(r, self.reflected != other.reflected)

    def inverse(self) -> "SquareSymmetry":
        if self.reflected:
            return self
        return SquareSymmetry((-self.rotation) % 4, False)

    def __str__(self) -> str:
        return f"r{self.rotation}m" if self.reflected else f"r{self.rotation}"

    @staticmethod
    def from_str(s: str) -> "SquareSymmetry":
        if s.startswith("r") and len(s) in (2, 3):
            refl = s.endswith("m")
            body = s[1:-1] if refl else s[1:]
            if body in "0123" and len(body) == 1:
                return SquareSymmetry(int(body), refl)
        raise ValueError(f"bad square symmetry {s!r}")


ALL_SQUARE_SYMMETRIES = tuple(SquareSymmetry(r, m) for m in (False, True) for r in range(4))

_REVERSAL = (0, 3, 2, 1)  # the base chart matching i -> -i (mod 4)


def gluing_index_map(sym: SquareSymmetry) -> tuple[int, int, int, int]:
    """Chart position map of the gluing: position i of faceA's chart goes to
    this value in faceB's chart (the symmetry composed with the base
    reversal)."""
    return tuple(sym.apply(_REVERSAL[i]) for i in range(4))


def index_map_to_symmetry(index_map) -> SquareSymmetry:
    for sym in ALL_SQUARE_SYMMETRIES:
        if gluing_index_map(sym) == tuple(index_map):
            return sym
    raise ValueError(f"not a dihedral chart map: {index_map}")


@dataclass(frozen=True)
class GluingPair:
    face_a: Face
    face_b: Face
    sym: SquareSymmetry

    def index_map(self) -> tuple[int, int, int, int]:
        return gluing_index_map(self.sym)

    def corner_map(self) -> dict[int, int]:
        """Corners of face_a -> corners of face_b under the gluing."""
        ca, cb = CHARTS[self.face_a], CHARTS[self.face_b]
        imap = self.index_map()
        return {ca[i]: cb[imap[i]] for i in range(4)}

    def swapped(self) -> "GluingPair":
        """The same identification written from face_b's side."""
        imap = self.index_map()
        inv = [0, 0, 0, 0]
        for i, x in enumerate(imap):
            inv[x] = i
        return GluingPair(self.face_b, self.face_a, index_map_to_symmetry(tuple(inv)))

    def normalised(self) -> "GluingPair":
        return self if self.face_a < self.face_b else self.swapped()

    def __str__(self) -> str:
        return f"{self.face_a} {self.face_b} {self.sym}"


@dataclass(frozen=True)
class CubeGluing:
    """Three face pairs covering all six faces of one cube."""

    pairs: tuple[GluingPair, GluingPair, GluingPair]

    def __post_init__(self):
        faces = [f for p in self.pairs for f in (p.face_a, p.face_b)]
        if len({f.index for f in faces}) != 6:
            raise ValueError("gluing must use each face exactly once")

    @staticmethod
    def from_pairs(pairs) -> "CubeGluing":
        norm = sorted((p.normalised() for p in pairs), key=lambda p: p.face_a.index)
        return CubeGluing(tuple(norm))

    def serialize(self) -> str:
        return " / ".join(str(p) for p in self.pairs)

    def sort_key(self):
        # pairs by (faceA, faceB), then lexicographic on the symmetry
        # encoding, matching the order of serialized class ids
        return tuple((p.face_a.index, p.face_b.index, str(p.sym))
                     for p in self.pairs)

    def to_spec(self) -> "CubulationSpec":
        return CubulationSpec(
            cube_count=1,
            pairs=tuple(SpecPair((0, p.face_a), (0, p.face_b), p.sym) for p in self.pairs),
        )

    def is_opposite_pairing(self) -> bool:
        return all(p.face_a.opposite() == p.face_b for p in self.pairs)

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class SpecPair:
    slot_a: tuple[int, Face]
    slot_b: tuple[int, Face]
    sym: SquareSymmetry

    def corner_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        cube_a, face_a = self.slot_a
        cube_b, face_b = self.slot_b
        base = GluingPair(face_a, face_b, self.sym).corner_map()
        return {(cube_a, src): (cube_b, dst) for src, dst in base.items()}


@dataclass(frozen=True)
class CubulationSpec:
    """A finite collection of cubes with all faces glued in pairs."""

    cube_count: int
    pairs: tuple[SpecPair, ...]

    def __post_init__(self):
        slots = [s for p in self.pairs for s in (p.slot_a, p.slot_b)]
        keys = {(c, f.index) for c, f in slots}
        if len(self.pairs) != 3 * self.cube_count or len(keys) != 6 * self.cube_count:
            raise ValueError("every (cube, face) slot must appear exactly once")
        if any(not (0 <= c < self.cube_count) for c, _ in slots):
            raise ValueError("cube index out of range")


# -- text format ------------------------------------------------------------


class GluingSpecError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def parse_gluing_text(text: str) -> CubeGluing:
    """Parse the one-pair-per-line gluing format `<faceA> <faceB> r<k>[m]`.

    Blank lines and lines starting with `#` are ignored.  The inline form
    with ` / ` separators (used as census class ids) is accepted on a
    single line as well.
    """
    pairs: list[GluingPair] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        for chunk in line.split(" / "):
            tokens = chunk.split()
            if len(tokens) != 3:
                raise GluingSpecError(lineno, f"expected `<faceA> <faceB> r<k>[m]`, got {chunk!r}")
            try:
                fa = Face.from_str(tokens[0])
                fb = Face.from_str(tokens[1])
                sym = SquareSymmetry.from_str(tokens[2])
            except ValueError as exc:
                raise GluingSpecError(lineno, str(exc)) from None
            for f in (fa, fb):
                if f.index in seen:
                    raise GluingSpecError(
                        lineno, f"face {f} already used on line {seen[f.index]}")
                seen[f.index] = lineno
            if fa == fb:
                raise GluingSpecError(lineno, "a face cannot be glued to itself")
            pairs.append(GluingPair(fa, fb, sym))
    if len(pairs) != 3:
        raise GluingSpecError(len(text.splitlines()) or 1,
                              f"expected 3 gluing pairs, found {len(pairs)}")
    return CubeGluing.from_pairs(pairs)


# -- quotient complex --------------------------------------------------------

_CUBE_EDGES = tuple(sorted(
    (a, b)
    for a in range(8) for b in range(8)
    if a < b and sum(x != y for x, y in zip(CORNER_COORDS[a], CORNER_COORDS[b])) == 1
))


@dataclass(frozen=True)
class QuotientComplex:
    """Orbits of the cube cells under the transitive closure of the gluing
    maps, with enough incidence data to build the cellular chain complex."""

    spec: CubulationSpec
    vertex_orbit_of: dict[tuple[int, int], int]           # (cube, corner) -> orbit
    vertex_orbit_count: int
    edge_orbit_of: dict[tuple[int, int, int], tuple[int, int]]  # (cube, u, v) -> (orbit, sign)
    edge_orbit_count: int
    reversed_edge_orbits: tuple[int, ...]
    square_count: int

    @property
    def cube_count(self) -> int:
        return self.spec.cube_count

    def euler_characteristic(self) -> int:
        return (self.vertex_orbit_count - self.edge_orbit_count
                + self.square_count - self.cube_count)


def build_quotient(spec: CubulationSpec) -> QuotientComplex:
    """Finest cell partition closed under all gluing maps; orbit numbering
    follows the smallest contained cell id so output is reproducible."""
    nc = spec.cube_count
    v_uf = _UnionFind(8 * nc)
    e_uf = _UnionFind(64 * nc)  # directed edges indexed by (cube, u, v)

    def ekey(cube, u, v):
        return cube * 64 + u * 8 + v

    for pair in spec.pairs:
        cmap = pair.corner_map()
        cube_a, face_a = pair.slot_a
        chart = CHARTS[face_a]
        for i in range(4):
            u, v = chart[i], chart[(i + 1) % 4]
            (cb, u2), (_, v2) = cmap[(cube_a, u)], cmap[(cube_a, v)]
            v_uf.union(8 * cube_a + u, 8 * cb + u2)
            e_uf.union(ekey(cube_a, u, v), ekey(cb, u2, v2))
            e_uf.union(ekey(cube_a, v, u), ekey(cb, v2, u2))

    v_roots = sorted({v_uf.find(8 * c + v) for c in range(nc) for v in range(8)})
    v_renum = {r: i for i, r in enumerate(v_roots)}
    vertex_orbit_of = {(c, v): v_renum[v_uf.find(8 * c + v)]
                       for c in range(nc) for v in range(8)}

    groups: dict[int, list[tuple[int, int, int]]] = {}
    for c in range(nc):
        for (u, v) in _CUBE_EDGES:
            root = min(e_uf.find(ekey(c, u, v)), e_uf.find(ekey(c, v, u)))
            groups.setdefault(root, []).append((c, u, v))
    edge_orbit_of: dict[tuple[int, int, int], tuple[int, int]] = {}
    reversed_orbits = []
    for idx, root in enumerate(sorted(groups)):
        members = sorted(groups[root])
        c0, u0, v0 = members[0]
        fwd = e_uf.find(ekey(c0, u0, v0))
        if fwd == e_uf.find(ekey(c0, v0, u0)):
            reversed_orbits.append(idx)
        for (c, u, v) in members:
            sign = 1 if e_uf.find(ekey(c, u, v)) == fwd else -1
            edge_orbit_of[(c, u, v)] = (idx, sign)
            edge_orbit_of[(c, v, u)] = (idx, -sign)

    return QuotientComplex(
        spec=spec,
        vertex_orbit_of=vertex_orbit_of,
        vertex_orbit_count=len(v_roots),
        edge_orbit_of=edge_orbit_of,
        edge_orbit_count=len(groups),
        reversed_edge_orbits=tuple(reversed_orbits),
        square_count=3 * nc,
    )


def euler_characteristic(q: QuotientComplex) -> int:
    return q.euler_characteristic()


def quotient_chain_complex(q: QuotientComplex):
    """(d2, d1) of the quotient cell structure.  Square boundaries are read
    off from the chart walk of the smaller slot of each glued pair."""
    from .algebra import IntegerMatrix

    if q.reversed_edge_orbits:
        raise ValueError("chain complex undefined: edge orbit reversed onto itself")
    n_v, n_e = q.vertex_orbit_count, q.edge_orbit_count
    d1 = [[0] * n_e for _ in range(n_v)]
    # representative of each orbit: smallest (cube, u, v) with sign +1
    rep: dict[int, tuple[int, int, int]] = {}
    for key in sorted(q.edge_orbit_of):
        idx, sign = q.edge_orbit_of[key]
        if sign == 1 and idx not in rep:
            rep[idx] = key
    for idx, (c, u, v) in rep.items():
        d1[q.vertex_orbit_of[(c, v)]][idx] += 1
        d1[q.vertex_orbit_of[(c, u)]][idx] -= 1

    pairs = sorted(q.spec.pairs, key=lambda p: (p.slot_a[0], p.slot_a[1].index))
    d2 = [[0] * len(pairs) for _ in range(n_e)]
    for col, pair in enumerate(pairs):
        cube_a, face_a = pair.slot_a
        chart = CHARTS[face_a]
        for i in range(4):
            u, v = chart[i], chart[(i + 1) % 4]
            idx, sign = q.edge_orbit_of[(cube_a, u, v)]
            d2[idx][col] += sign
    return (IntegerMatrix.from_rows(d2) if n_e else IntegerMatrix.zero(0, len(pairs)),
            IntegerMatrix.from_rows(d1) if n_v else IntegerMatrix.zero(0, n_e))


# -- cone subdivision --------------------------------------------------------

def cone_subdivide(spec: CubulationSpec) -> Triangulation:
    """Cone each cube from its centre over the fully subdivided boundary.

    Every square gets a centre vertex and every cube edge a midpoint, so the
    boundary of each cube is cut into 48 triangles (8 per face) and each
    cube contributes 48 tetrahedra (corner, edge midpoint, square centre,
    cube centre).  With midpoints present, every edge of the subdivision has
    endpoints of different kinds, so no edge can be identified with itself
    in reverse and the vertex links detect every non-manifold point of the
    quotient, including those hiding in the middle of identified cube
    edges.
    """
    nc = spec.cube_count

    def tet_index(cube: int, face: Face, k: int, h: int) -> int:
        return ((cube * 6 + face.index) * 4 + k) * 2 + h

    def side_of(face: Face, corners: frozenset[int]) -> int:
        chart = CHARTS[face]
        for k in range(4):
            if frozenset((chart[k], chart[(k + 1) % 4])) == corners:
                return k
        raise AssertionError("not a side of this face")

    n = 48 * nc
    gl: list[list] = [[None] * 4 for _ in range(n)]

    def glue_identity(t1, f1, t2, f2):
        # all slot structures aligned: corner, midpoint, square centre, cube centre
        p = list(range(4))
        gl[t1][f1] = ((t2, f2), tuple(p))
        gl[t2][f2] = ((t1, f1), tuple(p))

    face_adjacent: dict[tuple[int, frozenset[int]], list[tuple[Face, int]]] = {}
    for cube in range(nc):
        for face in FACES:
            chart = CHARTS[face]
            for k in range(4):
                side = frozenset((chart[k], chart[(k + 1) % 4]))
                face_adjacent.setdefault((cube, side), []).append((face, k))

    for cube in range(nc):
        for face in FACES:
            for k in range(4):
                # same side, two halves, shared triangle (midpoint, centre, cube centre)
                glue_identity(tet_index(cube, face, k, 0), 0,
                              tet_index(cube, face, k, 1), 0)
                # adjacent sides around the corner chart[k+1]
                glue_identity(tet_index(cube, face, k, 1), 1,
                              tet_index(cube, face, (k + 1) % 4, 0), 1)
        # across each cube edge, matching corner halves
        for (u, v) in _CUBE_EDGES:
            (fa, ka), (fb, kb) = face_adjacent[(cube, frozenset((u, v)))]
            for corner in (u, v):
                ha = 0 if CHARTS[fa][ka] == corner else 1
                hb = 0 if CHARTS[fb][kb] == corner else 1
                glue_identity(tet_index(cube, fa, ka, ha), 2,
                              tet_index(cube, fb, kb, hb), 2)

    for pair in spec.pairs:
        cube_a, face_a = pair.slot_a
        cube_b, face_b = pair.slot_b
        imap = GluingPair(face_a, face_b, pair.sym).index_map()
        chart_b = CHARTS[face_b]
        for k in range(4):
            jk, jk1 = imap[k], imap[(k + 1) % 4]
            kb = side_of(face_b, frozenset((chart_b[jk], chart_b[jk1])))
            for h in (0, 1):
                j = imap[(k + h) % 4]
                hb = 0 if j == kb else 1
                glue_identity(tet_index(cube_a, face_a, k, h), 3,
                              tet_index(cube_b, face_b, kb, hb), 3)

    return Triangulation(gl)


def subdivision_vertex_label(spec: CubulationSpec, tet: int, slot: int):
    """Human-readable label of a subdivision vertex slot."""
    rest, h = divmod(tet, 2)
    rest, k = divmod(rest, 4)
    cube, face_idx = divmod(rest, 6)
    face = FACES[face_idx]
    chart = CHARTS[face]
    if slot == 0:
        return ("corner", cube, chart[(k + h) % 4])
    if slot == 1:
        return ("edge midpoint", cube, tuple(sorted((chart[k], chart[(k + 1) % 4]))))
    if slot == 2:
        return ("square centre", cube, str(face))
    return ("cube centre", cube)


# -- manifold test -----------------------------------------------------------


@dataclass(frozen=True)
class ManifoldCheck:
    ok: bool
    diagnostic: str

    def __bool__(self) -> bool:
        return self.ok


def is_closed_manifold(spec: CubulationSpec) -> ManifoldCheck:
    """True iff every vertex link of the cone subdivision is a 2-sphere."""
    tri = cone_subdivide(spec)
    failing = tri.link_spheres_diagnostic()
    if failing is None:
        return ManifoldCheck(True, "all vertex links are 2-spheres")
    orbit, euler, connected = failing
    rep = min((t, v) for (t, v), o in tri.vertex_orbit_index.items() if o == orbit)
    label = subdivision_vertex_label(spec, *rep)
    return ManifoldCheck(
        False,
        f"vertex orbit {orbit} {label}: link euler={euler}, connected={connected}",
    )


# -- orientability and the orientation double cover ---------------------------

ALREADY_ORIENTABLE = "already orientable"


def quotient_is_orientable(spec: CubulationSpec) -> bool:
    """Propagate cube orientations: a gluing written `r<k>` is compatible
    with coherent orientations and `r<k>m` flips them."""
    parity_uf = _UnionFind(2 * spec.cube_count)
    for pair in spec.pairs:
        ca, cb = pair.slot_a[0], pair.slot_b[0]
        w = 1 if pair.sym.reflected else 0
        parity_uf.union(2 * ca, 2 * cb + w)
        parity_uf.union(2 * ca + 1, 2 * cb + 1 - w)
    return all(parity_uf.find(2 * c) != parity_uf.find(2 * c + 1)
               for c in range(spec.cube_count))


def orientation_double_cover(spec: CubulationSpec):
    """Two lifts per cube; gluings stay in the sheet when orientation-
    compatible and cross sheets otherwise.  Returns ALREADY_ORIENTABLE for
    orientable input and rejects non-manifold input."""
    check = is_closed_manifold(spec)
    if not check:
        raise ValueError(f"not a closed manifold: {check.diagnostic}")
    if quotient_is_orientable(spec):
        return ALREADY_ORIENTABLE
    lifted = []
    for pair in spec.pairs:
        ca, fa = pair.slot_a
        cb, fb = pair.slot_b
        w = 1 if pair.sym.reflected else 0
        for sheet in (0, 1):
            lifted.append(SpecPair((2 * ca + sheet, fa),
                                   (2 * cb + (sheet ^ w), fb), pair.sym))
    return CubulationSpec(cube_count=2 * spec.cube_count, pairs=tuple(lifted))
