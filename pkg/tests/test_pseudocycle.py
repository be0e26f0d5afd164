import dataclasses
import json
import random

import pytest

from bmh.bmhomology import bm_homology, fundamental_cycle
from bmh.pseudocycle import (
    Bordism,
    BoundaryMismatch,
    CombPseudocycle,
    DegenerateSimplex,
    FacePairing,
    InconsistentPairing,
    NotACycle,
    NotClosedRelL,
    SimplexInstance,
    bordism_to_json,
    check_bordism,
    check_pseudomanifold,
    expand_to_unit,
    glue,
    glue_equivalence,
    nullbordism,
    pair_faces,
    phi,
    pm_to_json,
    psi,
    roundtrip_check,
)
from bmh.simplicial import (
    Chain,
    Complex,
    SimplicialPair,
    boundary,
    cone,
    cylinder_pair,
    mobius_pair,
    relative_reduce,
    simplex,
    sphere,
    torus,
    unit_chain,
)

from checks import verify_pairing


def circle_pair():
    return SimplicialPair.closed(sphere(1))


def circle_cycle():
    return boundary(unit_chain([0, 1, 2]))


def torus_pair():
    return SimplicialPair.closed(torus())


def test_instance_validation_and_expansion():
    with pytest.raises(DegenerateSimplex):
        SimplexInstance(0, (1, 1, 2))
    c = 2 * unit_chain([0, 1, 2]) - unit_chain([1, 2, 3])
    insts = expand_to_unit(c)
    assert len(insts) == 3
    assert [i.id for i in insts] == [0, 1, 2]
    # instance sum re-canonicalizes to the chain
    total = Chain(2, {})
    for inst in insts:
        total = total + unit_chain(inst.map)
    assert total == c
    with pytest.raises(ValueError):
        expand_to_unit(-1 * unit_chain([3]))


def test_pair_faces_circle():
    insts = expand_to_unit(circle_cycle())
    pairing = pair_faces(insts, circle_pair())
    assert len(pairing.pairs) == 6  # 3 vertices, both orders
    assert not pairing.unpaired_at_infinity
    assert not pairing.free
    verify_pairing(insts, pairing, circle_pair())


def test_pair_faces_torus_fundamental():
    pair = torus_pair()
    mu = fundamental_cycle(pair).cycle
    insts = expand_to_unit(mu)
    pairing = pair_faces(insts, pair)
    assert len(pairing.pairs) == 42  # 21 edges, both orders
    verify_pairing(insts, pairing, pair)


def test_pair_faces_relative():
    pair = cylinder_pair()
    mu = fundamental_cycle(pair).cycle
    insts = expand_to_unit(mu)
    pairing = pair_faces(insts, pair)
    verify_pairing(insts, pairing, pair)
    assert len(pairing.unpaired_at_infinity) == 6  # edges on the two circles


def test_pair_faces_rejects_non_cycles():
    with pytest.raises(NotACycle):
        pair_faces(expand_to_unit(unit_chain([0, 1, 3])), torus_pair())


def test_glue_circle_counts():
    f = psi(circle_cycle(), circle_pair())
    assert f.m.cell_counts() == {0: 3, 1: 3}
    assert f.m.euler() == 0
    rep = check_pseudomanifold(f.m)
    assert rep.ok
    assert rep.interior_cells == 3 and rep.boundary_cells == 0


def test_glue_torus_counts():
    pair = torus_pair()
    mu = fundamental_cycle(pair).cycle
    f = psi(mu, pair)
    assert f.m.cell_counts() == {0: 7, 1: 21, 2: 14}
    assert f.m.euler() == 0
    rep = check_pseudomanifold(f.m)
    assert rep.ok
    assert rep.interior_cells == 21
    assert rep.codim2_cells == 7


def test_glue_relative_counts():
    pair = SimplicialPair(Complex.from_top([(0, 1, 2)]),
                          Complex.from_top([(0, 1), (1, 2), (0, 2)]))
    mu = unit_chain([0, 1, 2])
    f = psi(mu, pair)
    rep = check_pseudomanifold(f.m)
    assert rep.ok
    assert rep.infinity_cells == 3
    assert rep.interior_cells == 0
    assert f.m.boundary_faces() == [(0, 0), (0, 1), (0, 2)]


def test_face_class_lookup():
    f = psi(circle_cycle(), circle_pair())
    m = f.m
    for (i, p), (j, q) in m.gluing.pairs:
        assert m.face_class(i, p) == m.face_class(j, q)


def test_glue_rejects_sign_violations():
    # doubled circle paired same-sign against same-sign is refused
    insts = expand_to_unit(2 * circle_cycle())
    good = pair_faces(insts, circle_pair())
    verify_pairing(insts, good, circle_pair())
    eps = {}
    for inst in insts:
        for p in range(2):
            eps[(inst.id, p)] = (-1) ** p  # points: sort sign is 1
    by_vertex = {}
    for inst in insts:
        for p in range(2):
            by_vertex.setdefault(inst.face_tuple(p), []).append((inst.id, p))
    pairs = set()
    perms = {}
    for faces in by_vertex.values():
        plus = sorted(x for x in faces if eps[x] > 0)
        minus = sorted(x for x in faces if eps[x] < 0)
        # deliberately match same class with same class
        for a, b in (plus, minus):
            pairs.update({(a, b), (b, a)})
            perms[(a, b)] = (0,)
            perms[(b, a)] = (0,)
    bad = FacePairing(frozenset(pairs), perms)
    with pytest.raises(InconsistentPairing):
        glue(insts, bad, 1)


def test_glue_rejects_corrupted_perms():
    pair = torus_pair()
    insts = expand_to_unit(fundamental_cycle(pair).cycle)
    pairing = pair_faces(insts, pair)
    (a, b) = sorted(pairing.pairs)[0]
    perms = dict(pairing.perms)
    t = perms[(a, b)]
    perms[(a, b)] = (t[1], t[0])  # no longer realizes the identification
    bad = FacePairing(pairing.pairs, perms, pairing.unpaired_at_infinity,
                      pairing.free)
    with pytest.raises(InconsistentPairing):
        glue(insts, bad, 2)


def test_roundtrip_fixture_cycles():
    pair = torus_pair()
    mu = fundamental_cycle(pair).cycle
    assert roundtrip_check(mu, pair)

    s2 = SimplicialPair.closed(sphere(2))
    assert roundtrip_check(fundamental_cycle(s2).cycle, s2)

    assert roundtrip_check(circle_cycle(), circle_pair())

    cyl = cylinder_pair()
    assert roundtrip_check(fundamental_cycle(cyl).cycle, cyl)

    r0, r1 = bm_homology(pair).reps(1)
    combo = 2 * r0 + 3 * r1
    assert roundtrip_check(combo, pair)
    assert phi(psi(combo, pair)) == (2, 3)


def test_roundtrip_torsion_class():
    pair = mobius_pair()
    core = sum(
        (unit_chain([i, (i + 1) % 5]) for i in range(1, 5)), unit_chain([0, 1])
    )
    assert roundtrip_check(core, pair)
    assert phi(psi(core, pair)) == (1,)
    assert phi(psi(2 * core, pair)) == (0,)


def test_phi_is_linear_and_kills_boundaries():
    pair = torus_pair()
    mu = fundamental_cycle(pair).cycle
    assert phi(psi(3 * mu, pair)) == tuple(3 * x for x in phi(psi(mu, pair)))
    assert phi(psi(-mu, pair)) == tuple(-x for x in phi(psi(mu, pair)))
    b = boundary(unit_chain([0, 1, 3]) + unit_chain([0, 2, 3]))
    assert phi(psi(b, pair)) == (0, 0)


def test_phi_rejects_non_cycles():
    pair = torus_pair()
    inst = SimplexInstance(0, (0, 1, 3))
    free = frozenset({(0, 0), (0, 1), (0, 2)})
    m = glue([inst], FacePairing(frozenset(), {}, frozenset(), free), 2)
    assert check_pseudomanifold(m).ok  # a triangle with free boundary is fine
    with pytest.raises(NotClosedRelL):
        phi(CombPseudocycle(m, pair, frozenset()))


def test_random_boundary_cycles_glue_clean():
    rng = random.Random(41)
    pair = torus_pair()
    tris = pair.k.of_dim(2)
    seen = 0
    for _ in range(50):
        picks = rng.sample(tris, rng.randint(1, 5))
        c = boundary(Chain(2, {s: rng.randint(-2, 2) for s in picks}))
        if c.is_zero():
            continue
        seen += 1
        insts = expand_to_unit(c)
        pairing = pair_faces(insts, pair)
        verify_pairing(insts, pairing, pair)
        m = glue(insts, pairing, 1)
        assert check_pseudomanifold(m).ok
        assert phi(CombPseudocycle(m, pair, pairing.unpaired_at_infinity)) == (0, 0)
    assert seen >= 30


def prism_data():
    prism = Complex.from_top([(0, 1, 4), (0, 3, 4), (1, 2, 5), (1, 4, 5),
                              (0, 2, 3), (2, 3, 5), (0, 1, 2), (3, 4, 5)])
    tilde_c = (-1 * unit_chain((0, 1, 4)) + unit_chain((0, 3, 4))
               - unit_chain((1, 2, 5)) + unit_chain((1, 4, 5))
               + unit_chain((0, 2, 3)) - unit_chain((2, 3, 5)))
    c0 = boundary(unit_chain((0, 1, 2)))
    c1 = boundary(unit_chain((3, 4, 5)))
    return SimplicialPair.closed(prism), tilde_c, c0, c1


def test_prism_bordism():
    pair, tilde_c, c0, c1 = prism_data()
    b = glue_equivalence(tilde_c, c0, c1, pair)
    rep = check_bordism(b)
    assert rep.ok, rep.failures
    assert rep.boundary0_cells == 3
    assert rep.boundary1_cells == 3
    assert len(b.w.instances) == 6
    # both circles really are the glued boundaries
    assert not b.m0.is_empty() and not b.m1.is_empty()


def test_bordism_detects_boundary_mismatch():
    pair, tilde_c, c0, c1 = prism_data()
    with pytest.raises(BoundaryMismatch):
        glue_equivalence(tilde_c, c0, c0, pair)
    with pytest.raises(BoundaryMismatch):
        glue_equivalence(tilde_c + unit_chain((0, 1, 2)), c0, c1, pair)


def test_check_bordism_flags_moved_faces():
    pair, tilde_c, c0, c1 = prism_data()
    b = glue_equivalence(tilde_c, c0, c1, pair)
    face, j = sorted(b.match1.items())[0]
    m0 = dict(b.match0)
    m1 = dict(b.match1)
    del m1[face]
    m0[face] = sorted(b.m0.instances, key=lambda i: i.id)[0].id
    bad = dataclasses.replace(b, match0=m0, match1=m1)
    rep = check_bordism(bad)
    assert not rep.ok
    assert any("sign convention" in f or "bijectiv" in f for f in rep.failures)


def test_nullbordism_circle_in_disk():
    disk = SimplicialPair.closed(cone(sphere(1)))
    f = psi(circle_cycle(), disk)
    assert phi(f) == ()  # H_1 of the disk is trivial
    nb = nullbordism(f)
    assert nb is not None
    rep = check_bordism(nb)
    assert rep.ok, rep.failures
    assert nb.m0.is_empty()
    assert len(nb.m1.instances) == 3
    assert not nb.match0 and len(nb.match1) == 3


def test_nullbordism_refuses_essential_circle():
    f = psi(circle_cycle(), circle_pair())
    assert phi(f) in ((1,), (-1,))
    assert nullbordism(f) is None


def test_nullbordism_relative():
    # the cylinder class is essential rel its boundary circles
    cyl = cylinder_pair()
    mu = fundamental_cycle(cyl).cycle
    assert nullbordism(psi(mu, cyl)) is None
    # but a relative boundary is nullbordant
    c = relative_reduce(boundary(unit_chain([0, 1, 4])), cyl)
    nb = nullbordism(psi(c, cyl))
    assert nb is not None and check_bordism(nb).ok


def test_empty_bordism():
    pair, _, _, _ = prism_data()
    b = glue_equivalence(Chain(2, {}), Chain(1, {}), Chain(1, {}), pair)
    rep = check_bordism(b)
    assert rep.ok
    assert b.w.is_empty() and b.m0.is_empty() and b.m1.is_empty()


def test_certificates_are_deterministic():
    pair = torus_pair()
    mu = fundamental_cycle(pair).cycle
    one = json.dumps(pm_to_json(psi(mu, pair).m), sort_keys=True)
    two = json.dumps(pm_to_json(psi(mu, pair).m), sort_keys=True)
    assert one == two

    def build():
        p, tilde_c, c0, c1 = prism_data()
        return bordism_to_json(glue_equivalence(tilde_c, c0, c1, p))

    assert json.dumps(build(), sort_keys=True) == json.dumps(build(), sort_keys=True)
    doc = build()
    assert doc["boundary0"]["sign"] == -1
    assert doc["boundary1"]["sign"] == 1


def test_pm_json_shape():
    f = psi(circle_cycle(), circle_pair())
    doc = pm_to_json(f.m)
    assert doc["dimension"] == 1
    assert len(doc["instances"]) == 3
    assert doc["cells"] == {"0": 3, "1": 3}
    for entry in doc["pairs"]:
        assert entry["sign"] == -(-1) ** (entry["a"][1] + entry["b"][1])
