"""Smoke test for the polyconf_py extension module."""

import json
import math

import polyconf_py as pc


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    p = pc.build_polytope(1.0, 2.0)
    assert len(p.vertices) == 6 and len(p.faces) == 5, p
    assert close(p.volume(), 10.0 / 3.0)
    expected = pc.perimeters_from_xy(1.0, 2.0)
    assert all(close(a, b) for a, b in zip(p.family_perimeters(), expected))
    assert close(expected[1], 2 * (1 + math.sqrt(3)))

    c = pc.classify(expected)
    assert c.verdict == "TypeI" and c.label == "Type I" and c.is_member, c
    x, y = pc.xy_from_perimeters(expected)
    assert close(x, 1.0) and close(y, 2.0)
    assert not pc.classify([1.0] * 5).is_member

    basis = dict(pc.basis_vectors())
    gen = pc.plane_intersection()
    assert len(gen) == 1
    v2 = basis["vII"]
    cos = abs(sum(a * b for a, b in zip(gen[0], v2))) / math.sqrt(sum(b * b for b in v2))
    assert close(cos, 1.0)
    assert close(abs(pc.minor_check()), 112 - 24 * math.sqrt(3))

    r = pc.probe_line(v2, basis["vI"])
    assert r.half_branch_count == 1
    assert json.loads(r.to_json())["half_branch_count"] == 1
    assert pc.probe_line(v2, v2).half_branch_count == 2
    assert pc.convexity_witness()[3] == ["TypeI", "TypeIII", "NotMember"]

    normals = pc.canonical_normals()
    areas = [p.face_areas[i] for i in range(5)]
    assert pc.area_closure_residual(normals, [1.0] * 5) > 1.0
    assert all(pc.check_conditions(normals, areas)[:3])
    s = pc.solve_minkowski(normals, areas, tol=1e-10)
    assert s.area_residual <= 1e-10
    assert s.polytope.equal_up_to_translation(p, 1e-6)

    try:
        pc.build_polytope(0.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("x = 0 accepted")
    try:
        pc.solve_minkowski(normals, [1.0] * 5)
    except pc.ConditionsError:
        pass
    else:
        raise AssertionError("open area vector accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
