"""Smoke test of the Python bindings: build, verify and export a necklace."""

import json
import math

import necklace

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"


def main() -> None:
    diagram = necklace.LinkDiagram(TREFOIL)
    assert diagram.crossing_count == 3 and len(diagram.components) == 1

    patchwork = necklace.Patchwork(diagram)
    assert (patchwork.vertex_count, patchwork.edge_count) == (9, 21)
    disks = patchwork.pack()
    assert len(disks) == 9

    n = necklace.Necklace(diagram)
    assert len(n) == 15 and len(n.threads) == 1 and len(n.threads[0]) == 15
    report = n.verify()
    assert report.passed, str(report)
    assert report.worst_thread_residual < 1e-3

    csv = n.export("csv").splitlines()
    assert csv[0] == "id,x,y,z,r,role" and len(csv) == 16
    text = n.to_json()
    loaded = necklace.Necklace.from_json(text)
    assert loaded.verify().passed
    for a, b in zip(loaded.balls, n.balls):
        assert all(math.isclose(x, y, rel_tol=1e-12, abs_tol=1e-14) for x, y in zip(a[1:5], b[1:5]))
    assert len(json.loads(text)["balls"]) == 15

    unit = necklace.encode_ball([0.0, 0.0], 1.0)
    assert unit == [0.0, 0.0, -1.0, 0.0]
    right = necklace.encode_ball([2.0, 0.0], 1.0)
    assert math.isclose(necklace.product(unit, right), -1.0)
    assert necklace.blow_up(unit) == [0.0, 0.0, 0.0, -1.0, 0.0]
    kind, center, radius = necklace.decode(necklace.encode_half_space([0.0, 1.0], 1.0))
    assert kind == "half-space" and center == [0.0, 1.0] and radius == 1.0

    try:
        necklace.LinkDiagram("X(1,1,2,2)")
    except necklace.NecklaceError as e:
        assert "ugatory" in str(e)
    else:
        raise AssertionError("nugatory diagram accepted")

    print("python smoke test passed:", report.passed, f"{report.worst_separation:.2e}")


if __name__ == "__main__":
    main()
