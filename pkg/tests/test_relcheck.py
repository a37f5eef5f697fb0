import dataclasses
import json

import pytest

from coideal import relcheck as rc
from coideal.flagcat import FlagObject, all_objects


@pytest.fixture(scope="module")
def small_core():
    return rc.sweep(1, 2)


def test_core_small_sweep_passes(small_core):
    assert small_core["failures"] == 0
    assert small_core["checks"] == sum(c["pass"] for c in small_core["cases"].values())
    assert {"adj", "qha", "bubble-cw", "Pi=1"} <= set(small_core["cases"])


def test_entries_carry_report_fields(small_core):
    e = small_core["entries"][0]
    for key in ("case_id", "object", "r", "m", "labels", "param", "status", "degree",
                "source_rank", "target_rank", "millis"):
        assert key in e
    json.dumps(small_core)


def test_slides_pass_at_rank_two():
    report = rc.sweep(2, 3, suites=(rc.SLIDES,))
    assert report["failures"] == 0
    assert any(k.startswith("slide-down") for k in report["cases"])


def test_jserre_small_sweep_passes():
    report = rc.sweep(1, 3, suites=(rc.JSERRE,))
    assert report["failures"] == 0
    assert report["exercised_regimes"][">=2"] > 0 and report["exercised_regimes"]["1"] > 0


def test_paper_map_covers_every_case_id():
    covered = {cid for ids in rc.PAPER_MAP.values() for cid in ids}
    seen = set()
    for suite in rc.SUITES:
        seen |= set(rc.sweep(1, 3, suites=(suite,))["cases"])
    assert seen <= covered


def test_parallel_merge_is_deterministic():
    one = rc.sweep(1, 2, suites=(rc.CORE, rc.SLIDES), jobs=1)
    two = rc.sweep(1, 2, suites=(rc.CORE, rc.SLIDES), jobs=2)
    strip = lambda rep: [{k: v for k, v in e.items() if k != "millis"} for e in rep["entries"]]
    assert strip(one) == strip(two)
    assert one["cases"] == two["cases"]


def test_regimes_count_objects():
    report = rc.sweep(1, 2)
    assert sum(report["regimes"].values()) == len(all_objects(1, 1)) + len(all_objects(1, 2))


def test_write_report_roundtrip(tmp_path, small_core):
    path = tmp_path / "r.json"
    rc.write_report(small_core, path)
    assert json.loads(path.read_text())["failures"] == 0


def test_mutated_relation_is_caught():
    a = FlagObject(1, 3, (1,))
    inst = next(i for i in rc.CORE_CASES[0].build(a, (1,)))
    assert rc.check(inst)["status"] == "pass"
    bad = dataclasses.replace(inst, rhs=tuple((2 * c, d) for c, d in inst.rhs))
    assert rc.check(bad)["status"] == "fail"


@pytest.mark.parametrize("a", [FlagObject(1, 3, (2,)), FlagObject(1, 4, (2,))])
def test_unprimed_matrix_entries_fail_where_primed_hold(a):
    # Frozen finding: with the unprimed P_0 and I_{lambda-1} two off-diagonal entries
    # of the left-inverse identity are nonzero; the primed versions vanish.
    M = rc.serre_morphisms(a)
    lam = rc.diamond_weight(a)

    def X(name):
        return M[name].matrix(a)

    rho = X("rho")
    assert not rho.compose(X("B2")).compose(X(f"I{lam - 1}")).is_zero()
    assert not X("P0").compose(X("C2")).compose(rho).is_zero()
    assert rho.compose(X("B2")).compose(X(f"I'{lam - 1}")).is_zero()
    assert X("P'0").compose(X("C2")).compose(rho).is_zero()


def test_symmetry_audit_small():
    audit = rc.symmetry_audit(1, 2)
    c = audit["counts"]
    assert audit["failures"] == []
    assert c["instances"] > 0 and c["inhomogeneous"] == 0 and c["inverse_defects"] == 0
    assert c["transformed_failures"] == 0
