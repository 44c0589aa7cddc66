"""Acceptance criteria, one check per criterion.

Each ``criterion_N`` returns ``(ok, detail)``.  Under pytest every criterion
is a separate test and a PASS/FAIL line per criterion is printed in the
terminal summary; run as a script it prints the same lines and exits
non-zero if any criterion fails.
"""

import contextlib
import io
import json
import math
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import cofactor_det, copies_by_scan, product_min_bruteforce  # noqa: E402
from sepdisc.cli import main as cli_main  # noqa: E402
from sepdisc.cone import block_positivity_min, extract_T_params, necessity_bound  # noqa: E402
from sepdisc.discrimination import (  # noqa: E402
    capacity_family,
    construct_measurement,
    decide_sep,
    measurement_for,
    min_copies,
    multicopy_measurement,
    multicopy_states,
    verify_family,
    verify_perfect,
)
from sepdisc.linalg import (  # noqa: E402
    HermitianMatrix,
    det,
    is_psd,
    min_eigenvalue,
    partial_transpose,
    principal_submatrix,
    trace_product,
)
from sepdisc.states import (  # noqa: E402
    CanonicalPair,
    ProductMixedState,
    canonical_state,
    canonicalize,
    density,
    random_pure_product,
)

GOLDEN = Path(__file__).parent / "golden" / "sweep_0.25.csv"
REF = canonical_state(0.0, 0.0)
EX1_T1 = 0.5 * np.array([[1, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 1]], dtype=float)
EX1_T2 = 0.5 * np.array([[0, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 0]], dtype=float)

RESULTS = {}


def _interior_alphas(rng, count):
    out = []
    while len(out) < count:
        a1, a2 = 1 - rng.random(2)  # (0, 1]
        if a1 + a2 > 1:
            out.append((a1, a2))
    return out


def criterion_1():
    """Boundary pairs reproduce the constant matrices exactly."""
    worst = 0.0
    for a1 in (0.0, 0.25, 0.5):
        s2 = canonical_state(a1, 1 - a1)
        m = measurement_for(REF, s2)
        for e, t in zip(m, (EX1_T1, EX1_T2)):
            tm, tp = e.certificate
            if not (np.array_equal(tm.data, t) and np.array_equal(tp.data, t)):
                return False, f"alpha1={a1}: certificate differs from the boundary matrices"
            expected = t + partial_transpose(HermitianMatrix(t, (2, 2))).data
            if not np.array_equal(e.matrix.data, expected):
                return False, f"alpha1={a1}: effect differs from T + Γ(T)"
        rep = verify_perfect(density(REF), density(s2), m)
        worst = max(worst, rep.max_deviation)
        if not rep.perfect or rep.max_deviation > 1e-10:
            return False, f"alpha1={a1}: max deviation {rep.max_deviation:.3e}"
    return True, f"3 boundary pairs exact, max deviation {worst:.1e}"


def criterion_2():
    """Interior construction is sound on 10^4 seeded random pairs."""
    rng = np.random.default_rng(20240601)
    worst_eig, worst_comp, worst_off = math.inf, 0.0, 0.0
    for a1, a2 in _interior_alphas(rng, 10_000):
        c = CanonicalPair.from_alphas(a1, a2)
        m = construct_measurement(c)
        rho1, rho2 = c.densities()
        worst_eig = min(worst_eig, *(min_eigenvalue(e.certificate[0]) for e in m))
        worst_comp = max(worst_comp, m.completeness_residual())
        worst_off = max(worst_off, abs(trace_product(rho1, m[1].matrix)), abs(trace_product(rho2, m[0].matrix)))
    ok = worst_eig >= -1e-9 and worst_comp <= 1e-12 and worst_off <= 1e-10
    return ok, f"min eig {worst_eig:.2e}, completeness {worst_comp:.2e}, off-diagonal {worst_off:.2e}"


def criterion_3():
    """Principal-minor identities of the second matrix on a 50x50 grid."""
    worst2 = worst3 = 0.0
    count = 0
    grid = np.linspace(0.02, 1.0, 50)
    for a1 in grid:
        for a2 in grid:
            g = a1 + a2
            if not 1 < g <= 2:
                continue
            count += 1
            t2 = construct_measurement(CanonicalPair.from_alphas(a1, a2))[1].certificate[0]
            d2 = det(principal_submatrix(t2, [1, 2])).real
            d3 = det(principal_submatrix(t2, [1, 2, 3])).real
            lhs2 = (2 * g) ** 2 * d2
            rhs2 = (g - 1) * (-(1 + g) + g**2 / (a1 * a2))
            lhs3 = (2 * g) ** 3 / (g - 1) * d3
            rhs3 = g * (g - 1) / (a1 * a2)
            worst2 = max(worst2, abs(lhs2 - rhs2) / max(abs(rhs2), 1e-300))
            worst3 = max(worst3, abs(lhs3 - rhs3) / abs(rhs3))
    t2 = construct_measurement(CanonicalPair.from_alphas(0.6, 0.6))[1].certificate[0]
    spot = det(principal_submatrix(t2, [1, 2])).real
    spot_oracle = cofactor_det(t2.data.real[1:3, 1:3])
    ok = worst2 <= 1e-9 and worst3 <= 1e-9 and abs(spot - 0.0625) <= 1e-12 and abs(spot - spot_oracle) <= 1e-15
    return ok, f"{count} points, rel err {worst2:.1e}/{worst3:.1e}, spot det {spot:.12g}"


def criterion_4():
    """Block-positive and quantum verdicts separate on the grid."""
    grid = np.linspace(0, 1, 101)
    inside = below = 0
    for a1 in grid:
        for a2 in grid:
            g = a1 + a2
            v = decide_sep(REF, canonical_state(a1, a2))
            if 1 + 1e-9 < g < 2 and a1 < 1 and a2 < 1:
                inside += 1
                if not (v.sep_distinguishable and not v.qt_distinguishable):
                    return False, f"({a1}, {a2}): expected sep-only"
            elif g < 1 - 1e-9:
                below += 1
                if v.sep_distinguishable:
                    return False, f"({a1}, {a2}): expected sep-indistinguishable"
    return True, f"{inside} interior points sep-only, {below} points below threshold rejected"


def criterion_5():
    """The overlap identity and |z| <= 1/2 for constructed measurements."""
    cases = [(a, 1 - a) for a in np.linspace(0, 1, 21)]
    cases += _interior_alphas(np.random.default_rng(5), 500)
    worst_res, worst_z = 0.0, 0.0
    for a1, a2 in cases:
        c = CanonicalPair.from_alphas(a1, a2)
        m = construct_measurement(c)
        z = extract_T_params(m[0].certificate[0] + m[1].certificate[0]).z
        rho1, rho2 = c.densities()
        res = abs(trace_product(rho1, rho2) - 2 * z.real * c.beta1 * c.beta2)
        worst_res = max(worst_res, res)
        worst_z = max(worst_z, abs(z))
    ok = worst_res <= 1e-9 and worst_z <= 0.5 + 1e-9
    return ok, f"{len(cases)} measurements, max residual {worst_res:.1e}, max |z| {worst_z:.6f}"


def criterion_6():
    """Necessity chain on distinguishable pairs and its failure below threshold."""
    rng = np.random.default_rng(6)
    good = bad = 0
    while good < 1000 or bad < 1000:
        d_a, d_b = rng.integers(2, 4, size=2)
        s1 = random_pure_product(rng, d_a, d_b)
        s2 = random_pure_product(rng, d_a, d_b)
        v = decide_sep(s1, s2)
        c = canonicalize(s1, s2)
        r = necessity_bound(ProductMixedState.from_canonical(c))
        if v.sep_distinguishable and good < 1000:
            good += 1
            b = c.beta1 * c.beta2
            if not (r.satisfied and r.trace_overlap <= b + 1e-10 and r.bound <= b + 1e-15 and b <= 0.25 + 1e-15):
                return False, f"chain fails: overlap {r.trace_overlap}, bound {r.bound}, beta product {b}"
        elif not v.sep_distinguishable and c.gamma < 1 and bad < 1000:
            bad += 1
            if not (r.pure_condition < 1 and not r.satisfied):
                return False, f"gamma {c.gamma}: necessity check did not fail"
    return True, "1000 distinguishable pairs satisfy the chain, 1000 pairs with gamma < 1 violate it"


def criterion_7():
    """See-saw dual-cone checker against known cases and a brute-force grid."""
    phi = HermitianMatrix(0.5 * np.array([[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]]), (2, 2))
    half_swap = partial_transpose(phi)
    r = block_positivity_min(half_swap)
    swap_min = r.min_product_value
    if not (r.member and abs(swap_min) <= 1e-8 and not is_psd(half_swap)):
        return False, f"half-swap: member={r.member}, min={swap_min}"
    r = block_positivity_min(HermitianMatrix(np.diag([1.0, -0.1, 1.0, 1.0]), (2, 2)))
    w = r.witness
    if r.member or abs(abs(w.a.amplitudes[0]) - 1) > 1e-8 or abs(abs(w.b.amplitudes[1]) - 1) > 1e-8:
        return False, "diagonal witness not found"
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        y = HermitianMatrix((g + g.conj().T) / 2, (2, 2))
        worst = max(worst, abs(block_positivity_min(y).min_product_value - product_min_bruteforce(y.data)))
    return worst <= 1e-6, f"half-swap min {swap_min:.1e} and not PSD, witness |0>|1>, brute-force gap {worst:.1e}"


def criterion_8():
    """Copy threshold against a scan, and a materialized single-copy measurement."""
    rng = np.random.default_rng(8)
    for f in rng.random(1000):
        if min_copies(f) != copies_by_scan(f):
            return False, f"f={f}: {min_copies(f)} vs scan {copies_by_scan(f)}"
    if min_copies(0.9) != 7:
        return False, f"f=0.9 gives {min_copies(0.9)}"
    s2 = canonical_state(0.6, 0.6)  # f = 0.4 * 0.4 = 0.16
    n = min_copies(0.16)
    m = multicopy_measurement(REF, s2, n)
    m1, m2 = multicopy_states(REF, s2, n)
    rep = verify_perfect(density(m1), density(m2), m)
    return n == 1 and rep.perfect, f"1000 scans agree, f=0.9 -> 7, f=0.16 -> n={n} on dim {m.dim}, perfect={rep.perfect}"


def criterion_9():
    """Product-basis family reads out exactly for every d_A, d_B <= 4."""
    worst = 0.0
    for d_a in range(1, 5):
        for d_b in range(1, 5):
            states, m = capacity_family(d_a, d_b)
            rep = verify_family([density(s) for s in states], m)
            worst = max(worst, rep.max_deviation)
            if len(states) != d_a * d_b or not rep.perfect or rep.max_deviation > 1e-12:
                return False, f"({d_a}, {d_b}) failed"
    return True, f"16 dimension pairs, N = d_A d_B, max deviation {worst:.1e} (lower bound only)"


def _cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli_main(list(argv))
    return code, buf.getvalue()


def criterion_10():
    """decide, construct and verify from the command line, plus the sweep golden."""
    s2 = json.dumps({"canonical": {"alpha1": 0.5, "alpha2": 0.5}})
    with tempfile.TemporaryDirectory() as tmp:
        m_path = str(Path(tmp) / "m.json")
        codes = [
            _cli("decide", "--state2", s2)[0],
            _cli("construct", "--state2", s2, "--out", m_path)[0],
            _cli("verify", "--state2", s2, "--measurement", m_path)[0],
        ]
        csv_path = Path(tmp) / "sweep.csv"
        sweep_code = _cli("sweep", "--grid-step", "0.25", "--out", str(csv_path))[0]
        same = sweep_code == 0 and csv_path.read_bytes() == GOLDEN.read_bytes()
    return codes == [0, 0, 0] and same, f"pipeline exit codes {codes}, sweep matches golden: {same}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _line(k, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k):
    ok, detail = CRITERIA[k - 1]()
    RESULTS[k] = _line(k, ok, detail)
    print(RESULTS[k])
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k, check in enumerate(CRITERIA, 1):
        ok, detail = check()
        failed += not ok
        print(_line(k, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
