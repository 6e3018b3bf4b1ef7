"""Acceptance gate: one check per criterion, each with its runtime budget.

Every check returns ``(passed, fingerprint)``; the fingerprint holds every
reported quantity in printable form so that the precision-doubling
criterion can compare runs exactly.  Run directly for the summary table::

    python3 tests/test_acceptance.py
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from charp_nbg import nbgtest  # noqa: E402
from charp_nbg.basefield import working_precision  # noqa: E402
from charp_nbg.config import SHIPPED, load_tower  # noqa: E402
from charp_nbg.extfield import derivative, evaluate_poly  # noqa: E402
from charp_nbg.hopfgal import (act_classical, hopf_act, hopf_structure, integral_tH,  # noqa: E402
                               verify_tH_properties)
from charp_nbg.nbgtest import (certificate_residue, construct_x_sequence,  # noqa: E402
                               counterexample_for_b, idempotent_pair, idempotent_report,
                               nbg_rank_test_hopf, nbg_trace_test, random_element, sweep_verify,
                               x_basis_rank)
from charp_nbg.ramify import (hilbert_different, ramification_data, trace_dual_check,  # noqa: E402
                              uniformizer)

AS_FAMILY = [("q2b1", 2, 1), ("q2b3", 2, 3), ("q3b1", 3, 1), ("q3b2", 3, 2), ("q4b1", 4, 1), ("q4b3", 4, 3)]
BASE_PREC = 64


def fresh(name):
    # rebuilt per run so that nothing computed at another precision is reused
    tower = load_tower(name)[0]
    return tower, ramification_data(tower)


def different_formula():
    ok, fp = True, []
    for name, q, b in AS_FAMILY:
        t = load_tower(name)[0]
        pi = uniformizer(t)
        m = t.minimal_polynomial(pi)
        dm = evaluate_poly(derivative(m), pi, t)
        w = t.valuation(dm)
        ok &= w == hilbert_different(q, b)
        fp.append((name, w, t.format(pi), t.format(dm)))
    return ok, fp


def trace_dual():
    ok, fp = True, []
    for name, _, _ in AS_FAMILY:
        t, data = fresh(name)
        rep = trace_dual_check(t, data, samples=50, seed=0)
        ok &= rep["contained"] and rep["witness"] is not None and rep["witness_trace_valuation"] < 0
        fp.append((name, sorted(rep.items())))
    return ok, fp


def certificate_sweep():
    ok, fp = True, []
    for name in ("q2b1", "q4b1"):
        t, data = fresh(name)
        cert = certificate_residue(t, data)
        rows, records, methods = sweep_verify(t, data, samples=100, seed=7)
        samples = [r for r in records if r["kind"] == "sample"]
        disagreements = sum(not r["agree"] for r in samples)
        at_cert = [r for r in samples if r["residue"] == cert]
        ok &= disagreements == 0 and len(at_cert) == 100
        ok &= all(all(r["tests"].values()) and r["a1_nonzero"] for r in at_cert)
        ok &= all(r["valuation"] % t.degree == cert for r in at_cert)
        ok &= len(methods) == 2 and "trace" in methods
        fp.append((name, methods, [row.tsv(data.n) for row in rows],
                   [(r["residue"], r["valuation"], sorted(r["tests"].items())) for r in samples]))
    return ok, fp


def wrong_residue_counterexamples():
    t, data = fresh("q4b1")
    tester = nbgtest.Tester(t)
    cert = certificate_residue(t, data)
    ok, fp = True, []
    for r in range(4):
        if r == cert:
            continue
        wit = counterexample_for_b(t, data, r, tester)
        ok &= t.valuation(wit.rho) == r and t.trace(wit.rho).is_exact_zero()
        ok &= not nbg_rank_test_hopf(t, wit.rho, tester.H).is_generator and wit.proof["valid"]
        fp.append(sorted(wit.to_json(t).items(), key=lambda kv: kv[0]))
    return ok, [repr(x) for x in fp]


def mixed_tower_counterexamples():
    t, data = fresh("mixed")
    tester = nbgtest.Tester(t)
    ok, fp, seen_i1 = True, [], False
    for b in range(-data.n, 2 * data.n):
        wit = counterexample_for_b(t, data, b, tester)
        ok &= wit.proof["valid"] and t.valuation(wit.rho) == b and t.trace(wit.rho).is_exact_zero()
        if wit.proof["i"] == 1:
            seen_i1 = True
            ok &= wit.proof["v_core"] == 0
        fp.append(repr(sorted(wit.to_json(t).items())))
    return ok and seen_i1, fp


def tame_idempotents():
    ok, fp = True, []
    for name in ("tame2", "tame-nonp"):
        t, data = fresh(name)
        tester = nbgtest.Tester(t)
        rep = idempotent_report(t, data, samples=100, seed=7)
        ok &= rep["idempotent"] and rep["orthogonal"] and rep["sum_to_one"] and rep["valuation_bound"]
        H, e1, e2 = idempotent_pair(tester)
        for b in range(-data.n, 2 * data.n):
            wit = counterexample_for_b(t, data, b, tester, seed=7)
            other = (e2, e1)[wit.proof["idempotent"] - 1]
            ok &= wit.proof["valid"] and t.valuation(wit.rho) == b
            ok &= act_classical(H, other.coeffs, wit.rho).is_exact_zero()
            fp.append((name, b, t.format(wit.rho), sorted(wit.proof.items(), key=lambda kv: kv[0])))
        fp.append((name, sorted(rep.items())))
    return ok, [repr(x) for x in fp]


def hopf_integrity():
    t = load_tower("q4b1")[0]
    H = hopf_structure(t)
    rep = verify_tH_properties(H)
    th = integral_tH(H)
    ok = H.kind == "almost-classical" and H.n == 4 and rep["contains_tH"] and rep["ok"]
    ok &= all(row["left"] and row["right"] for row in rep["basis"])
    rng = random.Random(7)
    fp = [repr(sorted(rep.items(), key=lambda kv: kv[0]))]
    for _ in range(50):
        rho = random_element(t, rng)
        y = hopf_act(H, th, rho)
        ok &= y == t.embed(t.trace(rho))
        fp.append(t.format(y))
    rng = random.Random(8)
    agree = 0
    for _ in range(200):
        rho = random_element(t, rng)
        a, b = nbg_trace_test(t, rho), nbg_rank_test_hopf(t, rho, H)
        agree += a.is_generator == b.is_generator
        fp.append((a.is_generator, b.is_generator, a.witness, b.witness))
    ok &= agree == 200
    return ok, fp


def x_sequence_audit():
    ok, fp = True, []
    for name in SHIPPED:
        t, data = fresh(name)
        if data.e != data.n:
            continue
        xs = construct_x_sequence(t, data)
        audit = xs.audit(data.e, data.w)
        rank = x_basis_rank(t, xs)
        ok &= audit["valuations_ok"] and audit["traces_ok"] and rank == data.n
        fp.append((name, audit["valuations"], [t.format(x) for x in xs.elements], rank))
    return ok, fp


CRITERIA = [
    (1, "different formula (b+1)(q-1) via v_L(p'(Pi))", different_formula, 10),
    (2, "trace-dual containment and witness", trace_dual, 10),
    (3, "certificate residue: all samples generate, tests agree", certificate_sweep, 60),
    (4, "q=4 wrong residues: trace-zero counterexamples", wrong_residue_counterexamples, 30),
    (5, "mixed tower: every class refuted, Omega class included", mixed_tower_counterexamples, 30),
    (6, "tame idempotents and annihilated witnesses", tame_idempotents, 30),
    (7, "Hopf structure integrity for p=2, f=2, b=1", hopf_integrity, 120),
    (8, "x-sequence audit on totally ramified towers", x_sequence_audit, 30),
]

_BASELINE = {}


def _timed(fn, prec):
    start = time.perf_counter()
    with working_precision(prec):
        passed, fp = fn()
    return passed, fp, time.perf_counter() - start


def _line(num, title, passed, elapsed, budget):
    status = "PASS" if passed else "FAIL"
    return f"criterion {num}: {status} {title} ({elapsed:.2f}s / budget {budget}s)"


def _report(capsys, text):
    with capsys.disabled():
        print("\n" + text)


@pytest.mark.parametrize("num,title,fn,budget", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, budget, capsys):
    passed, fp, elapsed = _timed(fn, BASE_PREC)
    _BASELINE[num] = (passed, fp)
    ok = passed and elapsed < budget
    _report(capsys, _line(num, title, ok, elapsed, budget))
    assert passed, f"criterion {num} check failed"
    assert elapsed < budget, f"criterion {num} took {elapsed:.1f}s (budget {budget}s)"


def test_criterion_9_precision_doubled(capsys):
    start = time.perf_counter()
    mismatched = []
    for num, _, fn, _ in CRITERIA:
        base = _BASELINE.get(num)
        if base is None:
            p, fp, _ = _timed(fn, BASE_PREC)
            base = (p, fp)
        passed, fp, _ = _timed(fn, 2 * BASE_PREC)
        if (passed, fp) != base:
            mismatched.append(num)
    elapsed = time.perf_counter() - start
    ok = not mismatched and elapsed < 300
    _report(capsys, _line(9, "verdicts and values identical at doubled precision", ok, elapsed, 300))
    assert not mismatched, f"criteria {mismatched} changed under doubled precision"
    assert elapsed < 300


def main():
    failures = 0
    baseline = {}
    for num, title, fn, budget in CRITERIA:
        passed, fp, elapsed = _timed(fn, BASE_PREC)
        baseline[num] = (passed, fp)
        ok = passed and elapsed < budget
        failures += not ok
        print(_line(num, title, ok, elapsed, budget), flush=True)
    start = time.perf_counter()
    same = all(_timed(fn, 2 * BASE_PREC)[:2] == baseline[num] for num, _, fn, _ in CRITERIA)
    elapsed = time.perf_counter() - start
    ok = same and elapsed < 300
    failures += not ok
    print(_line(9, "verdicts and values identical at doubled precision", ok, elapsed, 300))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
