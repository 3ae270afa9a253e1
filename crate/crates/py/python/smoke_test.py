"""Smoke test for the compiled extension: python crates/py/python/smoke_test.py"""

import fpscp_py as f

ONE = """NAME: one
DIMENSION: 2
STATIONS: 0
CAPACITY: 10
ENERGY_CAPACITY: 20
ENERGY_CONSUMPTION: 1
NODE_COORD_SECTION
1 0 0
2 3 4
DEMAND_SECTION
1 0
2 3
STATIONS_COORD_SECTION
DEPOT_SECTION
1
-1
EOF
"""


def main():
    one = f.Instance.parse(ONE)
    r = f.decode(one, [0])
    assert r.solved and r.distance == 10.0, r
    assert r.solution.sequence == ["D", "C0", "D"]

    inst = f.Instance.generate(customers=30, stations=4, battery=1.2, cargo=60.0, seed=7)
    assert f.Instance.parse(inst.to_text()).to_text() == inst.to_text()

    orders = f.permutations(inst, 20, kind="knn", k=2, seed=3)
    assert len(orders) == 20 and all(sorted(o) == list(range(30)) for o in orders)
    assert f.uniform_random(3, 2024) == [2, 0, 1]

    checked = 0
    for order in orders:
        fp, fr, ss = (f.decode(inst, order, m) for m in ("fp", "fr", "ss"))
        if fr.solved:
            assert fp.solved and fp.distance <= fr.distance * (1 + 1e-9)
        if ss.solved:
            assert fr.solved and fr.distance <= ss.distance * (1 + 1e-9)
        if fp.solved:
            assert f.joint_distance(inst, order) == fp.distance
            assert f.validate(inst, order, fp.solution) == []
            sol = f.Solution.parse(fp.solution.to_text())
            assert f.validate(inst, order, sol) == []
            checked += 1
    assert checked > 0

    routes, dist = f.split(inst, orders[0])
    assert [c for r in routes for c in r] == orders[0] and dist > 0

    rows = f.compare([inst], count=10, seed=1)
    assert [r["method"] for r in rows] == ["fp", "fr", "ss"]
    assert rows[0]["solved_pct"] in (0.0, 100.0)

    try:
        f.decode(inst, [0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("bad order accepted")

    print(f"smoke ok: {checked} joint solutions validated")


if __name__ == "__main__":
    main()
