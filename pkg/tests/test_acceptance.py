"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL`` line; the lines are
printed together at the end of the pytest run (see conftest.py).  Running
this file as a script prints them directly.
"""

import random
import time
from itertools import product

import pytest

from ce_oracle import expand, reversed_boundary
from conftest import ACCEPTANCE_LINES, BUNDLED
from qbrst.bar import BarChain, boundary, homotopy, verify_chain_map, verify_subcomplex, verify_w_identity
from qbrst.braid import build_jucys_murphy, compute_height, evaluate, verify_braid_suite
from qbrst.brst import (
    GhostEngine,
    GhostPolynomial,
    LiftRequired,
    build_brst_explicit,
    build_brst_recursive,
    compare_coefficients,
    default_degree,
    verify_closed_action,
    verify_q_squared,
)
from qbrst.bundled import permutation_doc, sl2_doc
from qbrst.graded import verify_grading
from qbrst.qlie import (
    build_z,
    build_z_explicit,
    bundled,
    check_yang_baxter,
    parse_structure,
    validate_structure,
    z_from_jucys_murphy,
)


def record(number, ok, what, elapsed, limit=None):
    verdict = "PASS" if ok else "FAIL"
    bound = f" (< {limit} s)" if limit else ""
    line = f"criterion {number:2d}: {verdict}  {what}  [{elapsed:.2f} s{bound}]"
    ACCEPTANCE_LINES.append((number, line))
    print(line)


def coefficients(sc):
    try:
        return build_brst_recursive(sc)
    except LiftRequired:
        return build_brst_explicit(sc)


def test_criterion_01_structure_validation():
    problems = []
    slowest = 0.0
    for name in BUNDLED:
        t0 = time.perf_counter()
        sc = bundled(name)
        ok = validate_structure(sc).all_passed and check_yang_baxter(sc).all_passed
        elapsed = time.perf_counter() - t0
        slowest = max(slowest, elapsed)
        if not ok or elapsed >= 5:
            problems.append(name)
    doc = sl2_doc()
    doc["c"][0][3] = "3"
    perturbed = parse_structure(doc)
    report = validate_structure(perturbed)
    failures = report.failures()
    caught = bool(failures) and failures[0].witness is not None and not check_yang_baxter(perturbed).ok
    ok = not problems and caught
    record(1, ok, "four algebras validate, perturbed sl2 fails with a witness", slowest, 5)
    assert not problems
    assert caught


def test_criterion_02_braid_suite():
    t0 = time.perf_counter()
    failed = []
    for name in BUNDLED:
        sc = bundled(name)
        for label, rep in (("sigma", sc.sigma_rep()), ("R", sc.r_rep())):
            report = verify_braid_suite(rep, 4, f"{name}:{label}")
            if not report.all_passed:
                failed.append(report.failures()[0].line(False))
    elapsed = time.perf_counter() - t0
    record(2, not failed and elapsed < 30, "braid identities, both representations, n <= 4", elapsed, 30)
    assert not failed, failed
    assert elapsed < 30


def test_criterion_03_heights():
    t0 = time.perf_counter()
    got = {
        "perm2": compute_height(parse_structure(permutation_doc(2)).sigma_rep(), 5),
        "sl2": compute_height(bundled("sl2").sigma_rep(), 5),
        "hecke2": compute_height(bundled("hecke2").sigma_rep(), 5),
        "abelian1": compute_height(bundled("abelian1").sigma_rep(), 5),
    }
    elapsed = time.perf_counter() - t0
    want = {"perm2": 2, "sl2": 3, "hecke2": 2, "abelian1": 1}
    ok = all(got[k] == v for k, v in want.items()) and elapsed < 5
    record(3, ok, "heights " + ", ".join(f"{k}={got[k]}" for k in want), elapsed, 5)
    assert {k: str(v) for k, v in got.items()} == {k: str(v) for k, v in want.items()}
    assert elapsed < 5


def test_criterion_04_jucys_murphy():
    t0 = time.perf_counter()
    bad = []
    for name in BUNDLED:
        sc = bundled(name)
        for rep in (sc.sigma_rep(), sc.r_rep()):
            for r in range(2, 4):
                for m in range(1, r):
                    jr, jm = build_jucys_murphy(r), build_jucys_murphy(m)
                    if evaluate(jr * jm, rep, r) != evaluate(jm * jr, rep, r):
                        bad.append((name, rep.name, "commute", r, m))
        for r in range(1, 4):
            z = build_z(sc, r + 1)
            if z != z_from_jucys_murphy(sc, r + 1):
                bad.append((name, "block", r))
            if z != build_z_explicit(sc, r + 1):
                bad.append((name, "recursion", r))
    elapsed = time.perf_counter() - t0
    record(4, not bad and elapsed < 10, "J_r commute, J block = Z, Z recursion = explicit sum, r <= 3",
           elapsed, 10)
    assert not bad, bad
    assert elapsed < 10


def test_criterion_05_brst_constructions():
    t0 = time.perf_counter()
    agree = all(
        compare_coefficients(build_brst_recursive(bundled(n)), build_brst_explicit(bundled(n)), n).all_passed
        for n in ("sl2", "gl11")
    )
    vanish = all(
        all(co.get(r).is_zero() for r in co.degrees())
        for n in ("hecke2", "abelian1")
        for co in (build_brst_explicit(bundled(n)), coefficients(bundled(n)))
    )
    elapsed = time.perf_counter() - t0
    ok = agree and vanish and elapsed < 10
    record(5, ok, "recursive = explicit for sl2, gl11; zero for hecke2, abelian1", elapsed, 10)
    assert agree and vanish
    assert elapsed < 10


def linear_terms(engine, n_max):
    """Nonzero chi-linear words of Q^2(gamma-monomial), with no reduction."""
    found = []
    for n in range(1, n_max + 1):
        for idx in product(range(engine.n), repeat=n):
            m = GhostPolynomial.monomial(engine, (), idx)
            q2 = engine.apply(engine.apply(m))
            found += [(idx, key) for key in q2.terms if len(key[0]) == 1]
    return found


def test_criterion_06_q_squared():
    t0 = time.perf_counter()
    modulo_ideal = {}
    literal = {}
    for name in BUNDLED:
        sc = bundled(name)
        co = coefficients(sc)
        degree = default_degree(sc)
        modulo_ideal[name] = verify_q_squared(sc, co, degree).all_passed
        literal[name] = len(linear_terms(GhostEngine(sc, co), degree))
    elapsed = time.perf_counter() - t0
    ideal_ok = all(modulo_ideal.values())
    literal_ok = not any(literal.values())
    detail = ", ".join(f"{k}:{v}" for k, v in literal.items())
    record(6, ideal_ok and literal_ok and elapsed < 60,
           f"Q^2 = 0 mod ideal: {ideal_ok}; unreduced chi-linear terms {detail}", elapsed, 60)
    assert ideal_ok
    assert elapsed < 60
    # The unreduced chi-linear part cancels against the quadratic part only
    # through the relation, so for C != 0 it is nonzero as a free-algebra
    # element.  Kept as a hard check rather than weakened.
    assert literal_ok, f"chi-linear terms survive before reduction: {detail}"


def test_criterion_07_closed_action():
    t0 = time.perf_counter()
    ok = all(verify_closed_action(bundled(n), coefficients(bundled(n)), 3).all_passed for n in ("sl2", "gl11"))
    elapsed = time.perf_counter() - t0
    record(7, ok, "Q matches the closed action formula, n <= 3, sl2 and gl11", elapsed)
    assert ok


def random_chain(rnd, n_gen=3):
    slots = rnd.randint(2, 4)
    c = BarChain()
    while c.is_zero():
        for _ in range(rnd.randint(1, 4)):
            key = tuple(tuple(rnd.randrange(n_gen) for _ in range(rnd.randint(0, 2))) for _ in range(slots))
            c.add_term(key, rnd.choice([-3, -2, -1, 1, 2, 3]))
    return c


def test_criterion_08_bar_complex():
    t0 = time.perf_counter()
    rnd = random.Random(20240)
    bad_b2 = bad_h = 0
    for _ in range(200):
        c = random_chain(rnd)
        if len(next(iter(c.terms))) >= 3 and not boundary(boundary(c)).is_zero():
            bad_b2 += 1
        if homotopy(boundary(c)) + boundary(homotopy(c)) != c:
            bad_h += 1
    elapsed = time.perf_counter() - t0
    ok = bad_b2 == 0 and bad_h == 0
    record(8, ok, f"b^2 = 0 and hb + bh = id on 200 random chains ({bad_b2 + bad_h} failures)", elapsed)
    assert ok


def test_criterion_09_w_identity_and_subcomplex():
    t0 = time.perf_counter()
    reports = []
    for name in ("sl2", "gl11"):
        sc = bundled(name)
        reports.append(verify_w_identity(sc, None, 3))
        reports.append(verify_subcomplex(sc, None, 3))
    shifts = sum(len(r.find("w_lift_independent")) for r in reports)
    ok = all(r.all_passed for r in reports) and shifts > 0
    elapsed = time.perf_counter() - t0
    record(9, ok, f"W identity n <= 3, {shifts} lift shifts, wedge <= 4 boundary decomposition", elapsed)
    assert ok


def test_criterion_10_chain_map():
    t0 = time.perf_counter()
    reports = []
    for name in ("sl2", "gl11", "hecke2"):
        sc = bundled(name)
        reports.append(verify_chain_map(sc, coefficients(sc), default_degree(sc)))
    certified = sum(int(c.detail.split()[0]) for r in reports for c in r.checks if c.detail)
    ok = all(r.all_passed for r in reports) and certified > 0
    elapsed = time.perf_counter() - t0
    record(10, ok, f"b i = i Q modulo the ideal for sl2, gl11, hecke2 ({certified} witnesses)", elapsed)
    assert ok


def test_criterion_11_classical_oracle():
    t0 = time.perf_counter()
    sc = bundled("sl2")
    bracket = {}
    for (i, j), (k,), v in sc.c.nonzero_entries():
        bracket.setdefault((i, j), {})[k] = v
    engine = GhostEngine(sc, build_brst_recursive(sc))
    mismatches = 0
    for n in (1, 2, 3):
        for word in [()] + [(i,) for i in range(3)]:
            for wedge in product(range(3), repeat=n):
                terms = {}
                for (w, v), c in reversed_boundary(bracket, word, wedge).items():
                    vec = expand(v, 3)
                    prev = terms.get((w, len(v)), [0] * len(vec))
                    terms[(w, len(v))] = [a + c * b for a, b in zip(prev, vec)]
                got = engine.apply(GhostPolynomial.monomial(engine, word, wedge))
                mismatches += got != GhostPolynomial(3, terms)
    elapsed = time.perf_counter() - t0
    record(11, mismatches == 0, "sl2 Q agrees with the Chevalley-Eilenberg oracle, degree <= 3", elapsed)
    assert mismatches == 0


def test_criterion_12_grading():
    t0 = time.perf_counter()
    report = verify_grading(bundled("gl11"))
    needed = {"grading_invertible", "grading_commutes_sigma", "grading_scales_c", "transform_fixed_point",
              "yang_baxter", "twisted_super_permutation"}
    present = {c.check_id for c in report.checks}
    ok = report.all_passed and needed <= present
    elapsed = time.perf_counter() - t0
    record(12, ok, "gl11 parity grading, fixed point, twisted YB, twisted super-permutation", elapsed)
    assert ok, report.render(False)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
