"""Raw and canonical enumeration of one-cube gluings.

The orbit-partition oracle groups all raw gluings by breadth-first closure
under single conjugations, independently of the min-serialization logic in
canonical_form.
"""

import itertools

from cubecensus.census import compute_fingerprint
from cubecensus.cube_complex import is_closed_manifold, parse_gluing_text
from cubecensus.enumeration import (
    ALL_CUBE_SYMMETRIES,
    canonical_form,
    conjugate_gluing,
    enumerate_canonical,
    enumerate_raw,
)

T3 = "+x -x r0 / +y -y r0 / +z -z r0"
REFERENCE_GLUINGS = [
    "+x -x r1m / +y -y r0 / +z -z r0",
    "+x -x r0 / +y -y r0 / +z -z r0m",
    "+x -x r1m / +y -y r0 / +z -z r1m",
    "+x -y r3 / -x +y r1 / +z -z r0m",
]


def test_cube_symmetry_group_size_and_identity_first():
    assert len(ALL_CUBE_SYMMETRIES) == 48
    assert len({cs.corner_perm for cs in ALL_CUBE_SYMMETRIES}) == 48
    assert ALL_CUBE_SYMMETRIES[0].corner_perm == tuple(range(8))


def test_cube_symmetries_are_closed_under_composition():
    perms = {cs.corner_perm for cs in ALL_CUBE_SYMMETRIES}
    sample = ALL_CUBE_SYMMETRIES[::7]
    for a in sample:
        for b in sample:
            composed = tuple(a.corner_perm[b.corner_perm[i]] for i in range(8))
            assert composed in perms


def test_raw_counts():
    assert sum(1 for _ in enumerate_raw(opposite_only=True)) == 512
    assert sum(1 for _ in enumerate_raw(opposite_only=False)) == 7680


def test_raw_gluings_are_valid_and_distinct():
    seen = set()
    for g in enumerate_raw(False):
        faces = [f.index for p in g.pairs for f in (p.face_a, p.face_b)]
        assert sorted(faces) == [0, 1, 2, 3, 4, 5]
        assert all(p.face_a < p.face_b for p in g.pairs)
        seen.add(g.serialize())
    assert len(seen) == 7680


def test_canonical_form_is_idempotent():
    for g in itertools.islice(enumerate_raw(False), 0, 7680, 389):
        c = canonical_form(g)
        again = canonical_form(c.gluing)
        assert again.gluing.serialize() == c.gluing.serialize()
        assert again.orbit_size == c.orbit_size


def test_t3_and_rotations_share_a_canonical_form():
    g = parse_gluing_text(T3)
    base = canonical_form(g).gluing.serialize()
    for cs in ALL_CUBE_SYMMETRIES:
        assert canonical_form(conjugate_gluing(g, cs)).gluing.serialize() == base


def test_orbit_partition_matches_brute_force_closure():
    classes = enumerate_canonical(False)
    assert sum(c.orbit_size for c in classes) == 7680

    # independent closure: group raw gluings by single-conjugation reachability
    key_to_index = {}
    raws = []
    for i, g in enumerate(enumerate_raw(False)):
        key_to_index[g.serialize()] = i
        raws.append(g)
    seen = [False] * len(raws)
    sizes = []
    for i, g in enumerate(raws):
        if seen[i]:
            continue
        frontier = [g]
        members = set()
        while frontier:
            current = frontier.pop()
            key = current.serialize()
            if key in members:
                continue
            members.add(key)
            seen[key_to_index[key]] = True
            for cs in ALL_CUBE_SYMMETRIES:
                image = conjugate_gluing(current, cs)
                if image.serialize() not in members:
                    frontier.append(image)
        sizes.append(len(members))
    assert sorted(sizes) == sorted(c.orbit_size for c in classes)
    assert len(sizes) == len(classes)


def test_opposite_only_partition():
    classes = enumerate_canonical(True)
    assert sum(c.orbit_size for c in classes) == 512
    for c in classes:
        assert c.gluing.is_opposite_pairing()


def test_canonical_stream_is_sorted_and_stable():
    # sorted by the documented order: pairs by (faceA, faceB) with faces in
    # +x, -x, +y, -y, +z, -z order, then lexicographic on the symmetry token
    classes = enumerate_canonical(False)
    keys = [parse_gluing_text(c.class_id).sort_key() for c in classes]
    assert keys == sorted(keys)
    assert [c.class_id for c in classes] == [c.class_id for c in enumerate_canonical(False)]


def test_canonical_classes_contain_t3_and_references(canonical_classes):
    ids = {c.class_id for c in canonical_classes}
    for text in [T3] + REFERENCE_GLUINGS:
        assert canonical_form(parse_gluing_text(text)).class_id in ids


def test_fingerprint_is_constant_on_an_orbit():
    g = parse_gluing_text(REFERENCE_GLUINGS[0])
    base = compute_fingerprint(g)
    for cs in ALL_CUBE_SYMMETRIES[::5]:
        image = conjugate_gluing(g, cs)
        assert is_closed_manifold(image.to_spec()).ok
        assert compute_fingerprint(image) == base
