"""Acceptance criteria, each at its stated tolerance and time limit.

Blocks are searched afresh here (no golden files), then reused by the
composition and plane criteria.  A summary line per criterion is printed
at the end of the pytest run.
"""

import time
from math import comb

import pytest

from conftest import record
from toric_interp.classify import enumerate_classes
from toric_interp.degeneration import (
    BASE_BLOCKS,
    PLANE_BASE_CASES,
    BlockLibrary,
    DegenCertificate,
    build_p1xp1,
    build_p2,
    search_base,
    verify_certificate,
)
from toric_interp.errors import NotCovered
from toric_interp.fatpoints import generic_dim_oracle, residue_table, symbolic_det, triple_point_matrix
from toric_interp.lattice import rectangle, triangle

pytestmark = pytest.mark.acceptance

SIGNATURES = {"C_2^3": 2, "C_5^3": 4, "C_5^5": 6, "C_5^6": 7, "C_5^8": 9, "C_8^3": 6, "C_8^5": 9, "C_11^2": 6, "C_11^3": 8, "C_11^4": 10, "C_17^4": 15}
PLANE_E = {1: 3, 2: 0, 3: 4, 5: 3, 6: 4, 7: 0, 8: 3, 9: 1, 10: 0, 11: 0, 12: 1}

LISTED_P1XP1 = sorted(
    set(
        [(5, n) for n in (3, 5, 6, 7, 8, 9, 10, 11, 12)]
        + [(11, n) for n in range(2, 9)]
        + [(2, 11)]
        + [(8, n) for n in (3, 5, 7, 9, 11)]
        + [(6 * k - 1, n) for k in (1, 2) for n in range(1, 7)]
        + [(3 * k - 1, 2 * n - 1) for k in (1, 2, 3) for n in range(1, 5)]
    )
)
# Listed bidegrees whose systems are special: the oracle finds curves although
# the virtual dimension is -1, so no e = 0 certificate can exist.
SPECIAL_P1XP1 = {(2, 1): 0, (2, 5): 0, (5, 1): 1, (5, 2): 0, (5, 4): 0, (8, 1): 2, (11, 1): 3}


def lattice_width_at_most_one(P) -> bool:
    """All lattice points on at most two parallel lattice lines."""
    pts = P.points
    for u in range(-3, 4):
        for v in range(0, 4):
            if (u, v) != (0, 0) and len({u * x + v * y for x, y in pts}) <= 2:
                return True
    return False


@pytest.fixture(scope="module")
def searched(catalog):
    """Base blocks and plane base cases by search, with their wall time."""
    lib = BlockLibrary(catalog)
    t0 = time.perf_counter()
    for name in BASE_BLOCKS:
        lib.store(name, search_base(name, catalog))
    blocks_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    for d in PLANE_BASE_CASES:
        lib.store(f"V_{d}", search_base(f"V_{d}", catalog))
    plane_s = time.perf_counter() - t0
    return lib, blocks_s, plane_s


def test_criterion_1_classification():
    t0 = time.perf_counter()
    c8 = enumerate_classes(6, 8)
    c10 = enumerate_classes(6, 10)
    secs = time.perf_counter() - t0
    same = [c.representative for c in c8] == [c.representative for c in c10]
    ok = len(c8) == 13 and same and len(c8.empty_classes) == 5 and len(c8.nonempty_classes) == 8 and secs < 30
    record("1", ok, f"{len(c8)} classes at box 8, {len(c10)} at box 10, identical={same}, {len(c8.empty_classes)} empty / {len(c8.nonempty_classes)} non-empty, {secs:.1f}s")
    assert ok


def test_criterion_2_determinant_soundness(catalog):
    t0 = time.perf_counter()
    agree, forced = 0, []
    for c in catalog:
        zero = symbolic_det(triple_point_matrix(c.representative)).is_zero()
        if zero == (generic_dim_oracle(c.representative, [3]) >= 0):
            agree += 1
        if lattice_width_at_most_one(c.representative):
            forced.append(not c.empty_after_triple)
    secs = time.perf_counter() - t0
    ok = agree == 13 and forced and all(forced) and secs < 5
    record("2", ok, f"det/oracle agree on {agree}/13 classes; {sum(forced)}/{len(forced)} two-line classes non-empty; {secs:.1f}s")
    assert ok


def test_criterion_3_special_plane_systems():
    t0 = time.perf_counter()
    a = generic_dim_oracle(triangle(4), [3, 3])
    b = generic_dim_oracle(triangle(4), [2] * 5)
    secs = time.perf_counter() - t0
    ok = (a, b) == (3, 0) and secs < 5
    record("3", ok, f"dim L_4(3^2) = {a} (expect 3), dim L_4(2^5) = {b} (expect 0), {secs:.1f}s")
    assert ok


def test_criterion_4_blocks(searched, catalog):
    lib, secs, _ = searched
    bad = []
    for name, r in SIGNATURES.items():
        cert = lib.block(name)
        rep = verify_certificate(DegenCertificate.loads(cert.dumps()), catalog)
        a, b, _ = BASE_BLOCKS[name]
        if not (rep.valid and rep.special_count == r and rep.uncovered_count == 0 and cert.region.polygon == rectangle(a, b)):
            bad.append(name)
        if rep.regularity != "given-lifting-checked" or rep.failures:
            bad.append(name)
    ok = not bad and secs < 600
    record("4", ok, f"{len(SIGNATURES) - len(set(bad))}/11 blocks searched and verified with e=0, {secs:.1f}s" + (f"; failing {sorted(set(bad))}" if bad else ""))
    assert ok


def _build_listed(lib, catalog, pairs):
    built, failed = [], []
    for a, b in pairs:
        try:
            cert = build_p1xp1(a, b, library=lib)
        except NotCovered:
            failed.append((a, b))
            continue
        rep = verify_certificate(DegenCertificate.loads(cert.dumps()), catalog)
        if rep.valid and rep.special_count == (a + 1) * (b + 1) // 6 and rep.uncovered_count == 0:
            built.append((a, b))
        else:
            failed.append((a, b))
    return built, failed


@pytest.fixture(scope="module")
def p1xp1_outcome(searched, catalog):
    lib = searched[0]
    t0 = time.perf_counter()
    built, failed = _build_listed(lib, catalog, LISTED_P1XP1)
    return built, failed, time.perf_counter() - t0


def test_criterion_5_coverable_instances(p1xp1_outcome):
    built, failed, secs = p1xp1_outcome
    coverable = [ab for ab in LISTED_P1XP1 if ab not in SPECIAL_P1XP1]
    assert set(built) == set(coverable)
    assert secs < 600


def test_criterion_5_refused_instances_are_special():
    dims = {ab: generic_dim_oracle(rectangle(*ab), [3] * ((ab[0] + 1) * (ab[1] + 1) // 6)) for ab in SPECIAL_P1XP1}
    assert dims == SPECIAL_P1XP1
    assert all(d >= 0 for d in dims.values())


@pytest.mark.xfail(strict=True, reason="the listed bidegree ranges include special bidegrees (2,1),(2,5),(5,1),(5,2),(5,4),(8,1),(11,1)")
def test_criterion_5_as_listed(p1xp1_outcome):
    built, failed, secs = p1xp1_outcome
    ok = not failed and secs < 600
    detail = f"{len(built)}/{len(LISTED_P1XP1)} listed bidegrees built and re-verified from JSON, {secs:.1f}s"
    if failed:
        detail += f"; not coverable (special systems, oracle dim >= 0): {failed}"
    record("5", ok, detail)
    assert ok


def test_criterion_6_plane(searched, catalog):
    lib, _, plane_s = searched
    t0 = time.perf_counter()
    bad = []
    for d in list(PLANE_BASE_CASES) + [14, 19, 22, 23]:
        cert = build_p2(d, library=lib)
        rep = verify_certificate(DegenCertificate.loads(cert.dumps()), catalog)
        e = comb(d + 2, 2) % 6
        expect_e = PLANE_E.get(d, 0)
        if not (rep.valid and rep.uncovered_count == e == expect_e and rep.special_count == (comb(d + 2, 2) - e) // 6):
            bad.append(d)
    residues = [d for d in range(48) if residue_table(d) == 0] == [d for d in range(48) if d % 12 in (2, 7, 10, 11)]
    secs = plane_s + time.perf_counter() - t0
    ok = not bad and residues and secs < 900
    record("6", ok, f"{15 - len(bad)}/15 plane certificates verified (11 base cases, d=14,19,22,23), residue classes mod 12 {'match' if residues else 'differ'}, {secs:.1f}s")
    assert ok


def test_criterion_7_small_oracle(searched, catalog):
    lib = searched[0]
    t0 = time.perf_counter()
    certs = {name: lib.block(name) for name in list(BASE_BLOCKS) + [f"V_{d}" for d in PLANE_BASE_CASES]}
    for ab in [(2, 7), (2, 11), (11, 2)]:
        certs[f"C_{ab[0]}^{ab[1]}"] = build_p1xp1(*ab, library=lib)
    checked, bad = [], []
    for name, cert in sorted(certs.items()):
        P = cert.region.polygon
        if len(P.points) <= 40 and cert.e == 0 and verify_certificate(cert, catalog).valid:
            checked.append(name)
            if generic_dim_oracle(P, [3] * cert.r) != -1:
                bad.append(name)
    v3 = lib.plane_base(3)
    t3 = generic_dim_oracle(triangle(3), [3] * v3.r)
    secs = time.perf_counter() - t0
    must = {"C_2^3", "C_5^3", "C_11^2"}
    ok = not bad and must <= set(checked) and (v3.r, v3.e, t3) == (1, 4, 3) and secs < 120
    record("7", ok, f"oracle -1 on {len(checked) - len(bad)}/{len(checked)} e=0 certificates with <= 40 points ({', '.join(checked)}); T(3): r={v3.r} e={v3.e} oracle {t3}; {secs:.1f}s")
    assert ok


def test_criterion_8_property_suites():
    import test_properties as tp

    t0 = time.perf_counter()
    suites = {
        "canonical-form invariance": lambda: tp.test_canonical_form_invariance(),
        "Pick identity": lambda: tp.test_pick_identity(),
        "lifting round trip (paraboloid)": lambda: tp.test_paraboloid_round_trip(),
        "lifting round trip (random regular)": lambda: tp.test_random_regular_subdivisions(),
        "pinwheel rejection": lambda: tp.test_pinwheel_rejected_under_maps(),
    }
    for kind in tp.KINDS:
        suites[f"mutation {kind}"] = lambda kind=kind: (tp.test_mutation_is_detected(kind=kind), tp.test_mutation_sweep_over_golden_set(kind))
    failed = []
    for label, run in suites.items():
        try:
            run()
        except Exception as exc:  # report every suite, then fail
            failed.append(f"{label}: {type(exc).__name__}")
    secs = time.perf_counter() - t0
    ok = not failed
    record("8", ok, f"{len(suites) - len(failed)}/{len(suites)} property suites passed at 200 cases each; all 5 mutation kinds killed{'' if ok else ' NOT'}; {secs:.1f}s" + (f"; {failed}" if failed else ""))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
