"""Exit criteria.  Each test records one PASS/FAIL line, printed in the terminal summary."""

import csv
import json
import random
import time
from fractions import Fraction

import pytest

from qmzv.cli import main
from qmzv.exactfield import get_context
from qmzv.identities import (
    conj_i_weight,
    conjecture_i_check,
    cyclic_orbit_representatives,
    rhs_eq1,
    rhs_eq2,
    rhs_eq3,
    rhs_thm1,
    rhs_thm2,
    thm1_index,
    thm2_index,
)
from qmzv.limits import corollary1_check, zn_complex
from qmzv.qsums import (
    IndexTuple,
    compositions,
    lemma1_reverse,
    mhs,
    mhs_naive,
    q_binomial_row,
    theorem3_rhs,
    theoremA_sides,
    zn,
)

LINES = []


@pytest.fixture
def record(request):
    start = time.perf_counter()
    box = {}

    def _record(number, text, ok, budget_s):
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < budget_s
        box.update(number=number, text=text, ok=ok, elapsed=elapsed, budget=budget_s)
        return ok

    yield _record
    if box:
        status = "PASS" if box["ok"] else "FAIL"
        LINES.append(f"[{status}] criterion {box['number']:>2}: {box['text']} ({box['elapsed']:.1f}s / {box['budget']:.0f}s)")


def _mismatches(pairs):
    return [label for label, lhs, rhs in pairs if lhs != rhs]


def test_criterion_01_eq1(record):
    bad = _mismatches(
        ((n, r), zn((1,) * r, n), rhs_eq1(n, r)) for n in range(2, 41) for r in range(n)
    )
    ok = record(1, f"Eq.1 exact, 2<=n<=40, 0<=r<n; mismatches={len(bad)}", not bad, 60)
    assert ok, bad[:5]


def test_criterion_02_eq2_eq3(record):
    bad2 = _mismatches(((n, r), zn((2,) * r, n), rhs_eq2(n, r)) for n in range(2, 41) for r in range(9))
    bad3 = _mismatches(((n, r), zn((3,) * r, n), rhs_eq3(n, r)) for n in range(2, 41) for r in range(7))
    ok = record(2, f"Eq.2 (r<=8) and Eq.3 (r<=6) exact, 2<=n<=40; mismatches={len(bad2)}+{len(bad3)}", not bad2 and not bad3, 120)
    assert ok, (bad2[:5], bad3[:5])


def test_criterion_03_theorems_1_2(record):
    def sym(build, n, a, b):
        return zn(build(a, b), n) + zn(build(b, a), n)

    bad1 = _mismatches(
        ((n, a, m - a), sym(thm1_index, n, a, m - a), rhs_thm1(n, a, m - a))
        for n in range(2, 31) for m in range(6) for a in range(m + 1)
    )
    bad2 = _mismatches(
        ((n, a, m - a), sym(thm2_index, n, a, m - a), rhs_thm2(n, a, m - a))
        for n in range(2, 31) for m in range(7) for a in range(m + 1)
    )
    ok = record(3, f"Theorem 1 (a+b<=5) and Theorem 2 (a+b<=6) exact, 2<=n<=30; mismatches={len(bad1)}+{len(bad2)}", not bad1 and not bad2, 180)
    assert ok, (bad1[:5], bad2[:5])


def test_criterion_04_lemma2(record):
    bad = []
    for n in range(2, 61):
        ctx = get_context(n)
        row = q_binomial_row(n - 1, ctx.generator)
        for k in range(1, n):
            expected = ctx.root_power(-(k * (k + 1) // 2)) * (-1) ** k
            if row[k] != expected:
                bad.append((n, k))
    ok = record(4, f"Lemma 2 exact, 1<=k<n<=60; mismatches={len(bad)}", not bad, 30)
    assert ok, bad[:5]


def test_criterion_05_lemma1(record):
    rng = random.Random(20240515)
    samples = []
    while len(samples) < 200:
        r = rng.randint(1, 4)
        s = [rng.randint(0, 3) for _ in range(r)]
        if sum(s) > 6:
            continue
        t = [rng.randint(0, 3) for _ in range(r)]
        samples.append((IndexTuple(s, t), rng.randint(2, 25)))
    bad = []
    for idx, n in samples:
        for star in (False, True):
            lhs, rhs = lemma1_reverse(idx, n, star)
            if lhs != rhs:
                bad.append((idx, n, star))
    ok = record(5, f"Lemma 1 reversal exact, 200 random (s,t), w<=6, n<=25, plain+star; mismatches={len(bad)}", not bad, 60)
    assert ok, bad[:5]


def test_criterion_06_duality(record):
    comps = [c for w in range(1, 6) for c in compositions(w)]
    bad = _mismatches(((s, n), zn(s, n), theorem3_rhs(s, n)) for n in range(2, 21) for s in comps)
    ok = record(6, f"Theorem 3 duality exact, w<=5, 2<=n<=20 ({len(comps)} compositions); mismatches={len(bad)}", not bad, 120)
    assert ok, bad[:5]


def test_criterion_07_theoremA(record):
    comps = [c for w in range(1, 6) for c in compositions(w)]
    bad = []
    for q in (Fraction(2), Fraction(3, 2), Fraction(-1, 2)):
        for n in range(1, 13):
            for s in comps:
                lhs, rhs = theoremA_sides(s, n, q)
                if lhs != rhs:
                    bad.append((s, n, q))
    ok = record(7, f"Theorem A exact at q in {{2, 3/2, -1/2}}, w<=5, 1<=n<=12; mismatches={len(bad)}", not bad, 120)
    assert ok, bad[:5]


def test_criterion_08_oracle_equivalence(record):
    import itertools

    bad = []
    count = 0
    for n in range(2, 11):
        z = get_context(n).generator
        for r in range(4):
            for s in itertools.product(range(4), repeat=r):
                for t in itertools.product(range(3), repeat=r):
                    idx = IndexTuple(s, t)
                    for mode in ("strict", "star"):
                        count += 1
                        if mhs(idx, n - 1, z, mode) != mhs_naive(idx, n - 1, z, mode):
                            bad.append((idx, n, mode))
    ok = record(8, f"DP == naive enumeration, r<=3, s_j<=3, t_j<=2, n<=10, both modes ({count} cases); mismatches={len(bad)}", not bad, 60)
    assert ok, bad[:5]


def test_criterion_09_conjectures(record, tmp_path, capsys):
    results = []
    for t in range(3):
        for d in cyclic_orbit_representatives(t, 2):
            for n in range(2, 31):
                results.append(conjecture_i_check(d, n))
    statuses_i = {r.status for r in results}
    t1 = [r for r in results if r.params["t"] == 1 and r.params["n"] > conj_i_weight(r.params["d"])]
    t1_ok = bool(t1) and all(r.status == "verified" for r in t1)
    findings_i = [r for r in results if r.status == "counterexample"]

    report = tmp_path / "conj_ii.json"
    constants = tmp_path / "constants.csv"
    codes = []
    for t in range(3):
        codes.append(
            main(["scan", "--pattern", "conj_ii", "--t", str(t), "--dmax", "1", "--nmax", "24",
                  "--output", str(report), "--constants", str(constants)])
        )
        rows = json.loads(report.read_text(encoding="utf-8"))
        const_rows = list(csv.DictReader(constants.open(encoding="utf-8")))
        assert len(const_rows) == sum(r["status"] == "verified" for r in rows)
        if t == 1:
            t1_ii = [r for r in rows if r["status"] != "skipped"]
            t1_ok = t1_ok and bool(t1_ii) and all(r["status"] == "verified" for r in t1_ii)
        statuses_i |= {r["status"] for r in rows}
    capsys.readouterr()
    classified = statuses_i <= {"verified", "skipped", "counterexample"}
    ok = record(
        9,
        f"cyclic-sum scans complete (conj_i t<=2 d<=2 n<=30; conj_ii t<=2 d<=1 n<=24, constants CSV); "
        f"t=1 slice verified={t1_ok}; conj_i findings={len(findings_i)}; conj_ii exit codes={codes}",
        classified and t1_ok,
        180,
    )
    assert ok


def test_criterion_10_corollary1(record):
    residuals = {}
    ok = True
    for ab in ((0, 0), (1, 0)):
        hi = corollary1_check(*ab, n_max=8192, tol=5e-3)
        lo = corollary1_check(*ab, n_max=512, tol=5e-3)
        r_hi, r_lo = hi.extra["residuals"], lo.extra["residuals"]
        residuals[ab] = r_hi
        ok = ok and hi.status == "verified" and all(h < l for h, l in zip(r_hi, r_lo))
    desc = ", ".join(f"{ab}: {r[0]:.1e}/{r[1]:.1e}" for ab, r in residuals.items())
    ok = record(10, f"Corollary 1 residuals <= 5e-3 at n_max=8192 and below n_max=512 values ({desc})", ok, 60)
    assert ok


def test_criterion_11_embedding(record):
    rng = random.Random(11)
    comps = [c for w in range(1, 5) for c in compositions(w)]
    worst = 0.0
    for _ in range(100):
        s, n = rng.choice(comps), rng.randint(2, 50)
        worst = max(worst, abs(zn_complex(s, n) - complex(zn(s, n))))
    ok = record(11, f"exact vs complex embedding, 100 random (s,n), n<=50, w<=4; worst={worst:.1e} <= 1e-9", worst <= 1e-9, 60)
    assert ok
