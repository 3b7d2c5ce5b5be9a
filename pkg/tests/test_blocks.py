"""The four blocks: frozen valence profiles, patterns, selection, assembly."""

import itertools

import pytest

from cubecensus.algebra import h1_of_chain_complex
from cubecensus.blocks import (
    FIVE_TET_PATTERN,
    BlockKind,
    assemble_triangulation,
    block_valences,
    mismatch_report,
    reference_pattern,
    select_block,
)
from cubecensus.cube_complex import (
    CHARTS,
    CORNER_COORDS,
    FACES,
    build_quotient,
    cone_subdivide,
    is_closed_manifold,
    parse_gluing_text,
    quotient_chain_complex,
)
from cubecensus.enumeration import enumerate_raw

T3 = "+x -x r0 / +y -y r0 / +z -z r0"

GOLDEN_VALENCES = {
    BlockKind.FIVE_TETRAHEDRON: (None, (3, 3, 3, 3, 3, 3)),
    BlockKind.FLIPPED: (4, (1, 3, 3, 3, 3, 3)),
    BlockKind.FIVE_VALENT: (5, (2, 2, 2, 2, 3, 3)),
    BlockKind.FOUR_VALENT: (4, (2, 2, 3, 3, 3, 3)),
}


@pytest.mark.parametrize("kind", list(BlockKind))
def test_block_valence_golden_table(kind):
    assert block_valences(kind) == GOLDEN_VALENCES[kind]


def test_block_tet_counts():
    assert BlockKind.FIVE_TETRAHEDRON.tet_count == 5
    for kind in (BlockKind.FLIPPED, BlockKind.FIVE_VALENT, BlockKind.FOUR_VALENT):
        assert kind.tet_count == 6


def test_five_tet_pattern_joins_odd_parity_corners():
    # independent derivation: the base pattern's diagonal on each face joins
    # the two corners with odd coordinate sum
    for face in FACES:
        chart = CHARTS[face]
        odd = {i for i in range(4) if sum(CORNER_COORDS[chart[i]]) % 2 == 1}
        assert FIVE_TET_PATTERN.diagonal_of(face) == frozenset(odd)


def test_reference_pattern_flip_structure():
    flips = {
        kind: reference_pattern(kind).flipped_faces_relative_to(FIVE_TET_PATTERN)
        for kind in BlockKind
    }
    assert flips[BlockKind.FIVE_TETRAHEDRON] == ()
    assert len(flips[BlockKind.FLIPPED]) == 1
    fa, fb = flips[BlockKind.FIVE_VALENT]
    assert fa.opposite() != fb  # two adjacent squares
    three = flips[BlockKind.FOUR_VALENT]
    assert len(three) == 3
    shared = set.intersection(*(set(CHARTS[f]) for f in three))
    assert len(shared) == 1  # three squares around one cube corner


def test_t3_mismatch_count_is_three():
    # independent coordinate check: the translation carries the odd-parity
    # diagonal of each minus face to the odd diagonal of the plus face,
    # which the base pattern never uses on plus faces
    g = parse_gluing_text(T3)
    rep = mismatch_report(g, FIVE_TET_PATTERN)
    assert rep.mismatch_count == 3
    for pair in g.pairs:
        cmap = pair.corner_map()
        diag_a = FIVE_TET_PATTERN.corner_diagonal(pair.face_a)
        image = {cmap[c] for c in diag_a}
        assert image != set(FIVE_TET_PATTERN.corner_diagonal(pair.face_b))


def test_flipping_one_face_flips_exactly_one_pair_flag():
    g = parse_gluing_text(T3)
    base = mismatch_report(g, FIVE_TET_PATTERN).pair_matches
    for face in FACES:
        flipped = mismatch_report(g, FIVE_TET_PATTERN.flip(face)).pair_matches
        assert sum(a != b for a, b in zip(base, flipped)) == 1


def test_zero_mismatch_gluings_select_the_five_tet_block():
    found = 0
    for g in enumerate_raw(False):
        if mismatch_report(g, FIVE_TET_PATTERN).mismatch_count == 0:
            choice = select_block(g)
            assert choice.kind is BlockKind.FIVE_TETRAHEDRON
            assert choice.pattern == FIVE_TET_PATTERN
            found += 1
            if found >= 20:
                break
    assert found


def test_t3_selects_four_valent_block():
    choice = select_block(parse_gluing_text(T3))
    assert choice.kind is BlockKind.FOUR_VALENT
    assert mismatch_report(parse_gluing_text(T3), choice.pattern).mismatch_count == 0


def test_selected_pattern_always_matches_sampled():
    for g in itertools.islice(enumerate_raw(False), 0, 7680, 127):
        choice = select_block(g)
        assert mismatch_report(g, choice.pattern).mismatch_count == 0
        count = mismatch_report(g, FIVE_TET_PATTERN).mismatch_count
        expected = {0: BlockKind.FIVE_TETRAHEDRON, 1: BlockKind.FLIPPED,
                    2: BlockKind.FIVE_VALENT, 3: BlockKind.FOUR_VALENT}[count]
        assert choice.kind is expected


def test_assembled_tet_counts():
    seen = set()
    for g in enumerate_raw(False):
        if not is_closed_manifold(g.to_spec()).ok:
            continue
        choice = select_block(g)
        if choice.kind in seen:
            continue
        tri = assemble_triangulation(g)
        assert tri.tet_count == choice.kind.tet_count <= 6
        seen.add(choice.kind)
        if len(seen) == 4:
            break
    assert len(seen) == 4


def test_assemble_rejects_non_manifold_gluings():
    for g in enumerate_raw(True):
        if not is_closed_manifold(g.to_spec()).ok:
            with pytest.raises(ValueError):
                assemble_triangulation(g)
            break


def test_t3_assembly_is_a_closed_orientable_manifold_with_h1_z3():
    tri = assemble_triangulation(parse_gluing_text(T3))
    assert tri.is_closed
    assert tri.all_links_are_spheres()
    assert tri.is_orientable()
    h1 = h1_of_chain_complex(*tri.chain_complex())
    assert (h1.rank, h1.torsion) == (3, ())


def test_block_h1_matches_cone_h1_on_samples():
    checked = 0
    for g in itertools.islice(enumerate_raw(False), 0, 7680, 61):
        if not is_closed_manifold(g.to_spec()).ok:
            continue
        h1_block = h1_of_chain_complex(*assemble_triangulation(g).chain_complex())
        h1_cone = h1_of_chain_complex(*cone_subdivide(g.to_spec()).chain_complex())
        h1_cells = h1_of_chain_complex(
            *quotient_chain_complex(build_quotient(g.to_spec())))
        assert h1_block == h1_cone == h1_cells
        checked += 1
    assert checked >= 5


def test_assembled_edge_labels_are_homogeneous():
    # label classes never merge: side edges glue to side edges, pattern
    # diagonals to pattern diagonals, internal edges stay interior
    tri = assemble_triangulation(parse_gluing_text(T3))
    profile = tri.edge_valences()
    assert profile.internal == (4,)
    assert sum(profile.all_valences) == 6 * tri.tet_count
