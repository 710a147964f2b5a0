import io
import json
import math

import numpy as np
import pytest

import cmolab.arith as arith
import cmolab.criteria as cr
from cmolab.specs import PrimeValueSpec

import oracles as orc

EULER = PrimeValueSpec.liouville()         # f(p) = -1
PLUS_ONE = PrimeValueSpec.unit()           # f(p) = +1
IMAG = PrimeValueSpec.constant(1j)         # f(p) = i

#: sum_{p<=100} 1/p, exact rational arithmetic over the 25 primes
PRIME_RECIP_100 = 1.802817201048871


def test_frozen_prime_recip_reproduces():
    assert orc.prime_recip_sum(100) == pytest.approx(PRIME_RECIP_100,
                                                     abs=1e-15)


# ---------------------------------------------------------------- tau grid

def test_tau_grid_invariants():
    g = cr.TauGrid.default()
    assert 0.0 in g.taus
    assert list(g.taus) == sorted(g.taus)
    with pytest.raises(ValueError):
        cr.TauGrid(taus=(0.5, 1.0))
    with pytest.raises(ValueError):
        cr.TauGrid(taus=())
    g2 = cr.TauGrid.default([0.25])
    assert 0.25 in g2.taus


# ------------------------------------------------------ bounds diagnostics

def test_bounds_small_euler_function(table_1e5):
    # f(n) = lambda(n)/n: sup_n |f(n)| = |f(2)| = 1/2 = sup_p |f(p)|
    spec = PrimeValueSpec.twisted(EULER, 1.0)
    seq = arith.build_cm_sequence(spec, 10**5, table_1e5)
    rep = cr.bounds_diagnostics(seq, table_1e5)
    assert rep.scalars["max_abs_n"] == pytest.approx(0.5, abs=1e-15)
    assert rep.scalars["max_abs_p"] == pytest.approx(0.5, abs=1e-15)
    assert not rep.warnings
    # sum_{p<=x} |f(p)| = sum 1/p grows through checkpoints
    sums = rep.series["abs_prime_sum"]
    assert sums[0] == pytest.approx(PRIME_RECIP_100, abs=1e-12)
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert rep.verdict == cr.VERDICT_DIVERGES


def test_bounds_flags_constant_one(table_1e4):
    seq = arith.build_cm_sequence(PLUS_ONE, 10**4, table_1e4)
    rep = cr.bounds_diagnostics(seq, table_1e4)
    assert rep.scalars["max_abs_n"] == 1.0
    assert any("violates" in w for w in rep.warnings)
    assert rep.verdict == cr.VERDICT_BOUNDED


# ------------------------------------------------------- negative real sum

def test_negative_real_sum_euler(table_1e5):
    rep = cr.negative_real_sum(EULER, P=10**5,
                               checkpoints=[100, 1000, 10**4, 10**5],
                               table=table_1e5)
    assert rep.series["sum"][0] == pytest.approx(-PRIME_RECIP_100, abs=1e-12)


def test_negative_real_sum_excludes_nonnegative(table_1e4):
    for spec in (PLUS_ONE, IMAG):
        rep = cr.negative_real_sum(spec, P=10**4, table=table_1e4)
        assert all(v == 0.0 for v in rep.series["sum"])
        assert rep.verdict == cr.VERDICT_BOUNDED


# ------------------------------------------------------------- rotated sum

def test_rotated_sum_euler_all_taus_equal(table_1e5):
    # 1 + f(p) = 0 makes the summand -1/p for every tau
    rep = cr.rotated_sum(EULER, P=10**5, table=table_1e5)
    for key, series in rep.series.items():
        assert series[0] == pytest.approx(-PRIME_RECIP_100, abs=1e-12)
    assert not rep.warnings


def test_rotated_sum_exact_cancellation_at_matching_tau(table_1e5):
    # f(p) = p^{i tau0} - 1 makes the tau = tau0 summand vanish
    tau0 = 2.0
    spec = PrimeValueSpec.perturbed(
        PrimeValueSpec.twisted(PrimeValueSpec.unit(), -1j * tau0), {})
    # build f(p) = p^{i tau0} - 1 via table over primes <= P
    P = 10**4
    primes = [p for p in orc.trial_division_primes(P)]
    tbl = {p: complex(np.exp(1j * tau0 * math.log(p))) - 1.0 for p in primes}
    spec = PrimeValueSpec.from_table(tbl)
    rep = cr.rotated_sum(spec, cr.TauGrid.default([tau0]), P=P)
    key = f"tau={tau0:g}"
    assert max(abs(v) for v in rep.series[key]) < 1e-10
    assert rep.verdict != cr.VERDICT_DIVERGES  # criterion fails at tau0


def test_rotated_sum_warns_on_f2_minus_two(table_1e4):
    spec = PrimeValueSpec.from_table({2: -2.0})
    rep = cr.rotated_sum(spec, P=100, table=table_1e4)
    assert any("f(2) = -2" in w for w in rep.warnings)


def test_rotated_sum_warns_on_disk_violation(table_1e4):
    rep = cr.rotated_sum(PLUS_ONE, P=100, table=table_1e4)
    assert any("|1+f(p)| > 1" in w for w in rep.warnings)


def test_rotated_matches_real_part_at_tau_zero(table_1e4):
    # (Re[(1+f(p))] - 1)/p = Re f(p)/p identically, so the tau = 0 row of
    # the rotated report equals the plain real-part report entrywise
    rng = np.random.default_rng(12)
    primes = np.array(orc.trial_division_primes(5000), dtype=np.int64)
    for trial in range(100):
        vals = rng.uniform(-1, 0, len(primes)) + 1j * rng.uniform(
            -0.3, 0.3, len(primes))
        spec = PrimeValueSpec.from_table(dict(zip(map(int, primes), vals)))
        cps = [100, 1000, 5000]
        a = cr.rotated_sum(spec, cr.TauGrid(taus=(0.0,)), P=5000,
                           checkpoints=cps, table=table_1e4)
        b = cr.real_part_sum(spec, P=5000, checkpoints=cps, table=table_1e4)
        assert a.series["tau=0"] == b.series["sum"]


# ----------------------------------------------------------- real part sum

def test_real_part_sum_euler_values(table_1e5):
    rep = cr.real_part_sum(EULER, P=10**5,
                           checkpoints=[100, 1000, 10**4, 10**5],
                           table=table_1e5)
    assert rep.series["sum"][0] == pytest.approx(-PRIME_RECIP_100, abs=1e-12)
    assert all(b < a for a, b in zip(rep.series["sum"],
                                     rep.series["sum"][1:]))


def test_real_part_sum_bounded_cases(table_1e4):
    z = cr.real_part_sum(PrimeValueSpec.constant(0.0), P=10**4,
                         table=table_1e4)
    assert all(v == 0.0 for v in z.series["sum"])
    assert z.verdict == cr.VERDICT_BOUNDED
    i = cr.real_part_sum(IMAG, P=10**4, table=table_1e4)
    assert all(v == 0.0 for v in i.series["sum"])
    assert i.verdict == cr.VERDICT_BOUNDED


# --------------------------------------------------------------- density

def test_density_euler_identically_zero(table_1e5):
    rep = cr.deviation_density(EULER, x_list=[100, 1000, 10**4, 10**5],
                               table=table_1e5)
    assert all(r == 0.0 for r in rep.series["ratio"])
    assert rep.scalars["passes"]
    assert rep.verdict == cr.VERDICT_BOUNDED


def test_density_plus_one_fails(table_1e5):
    # numerator = 4 pi(x); at x = 10^5 the ratio is 4 pi(x) log x / x
    rep = cr.deviation_density(PLUS_ONE, x_list=[100, 1000, 10**4, 10**5],
                               table=table_1e5)
    pi_1e5 = len(table_1e5.primes)
    expect = 4.0 * pi_1e5 / (10**5 / math.log(10**5))
    assert rep.series["ratio"][-1] == pytest.approx(expect, rel=1e-12)
    assert not rep.scalars["passes"]


def test_density_residue_class_mix_fails(table_1e5):
    # f(p) = +1 for p = 1 mod 4, -1 otherwise: |1+f(p)|^2 = 4 on the
    # progression, so the ratio tends to 2; count the progression directly
    spec = PrimeValueSpec.perturbed(PrimeValueSpec.character(4, 1), {2: -1.0})
    rep = cr.deviation_density(spec, x_list=[10**4, 10**5], table=table_1e5)
    count = sum(1 for p in table_1e5.primes if p % 4 == 1)
    expect = 4.0 * count / (10**5 / math.log(10**5))
    assert rep.series["ratio"][-1] == pytest.approx(expect, rel=1e-12)
    assert expect > 1.5
    assert not rep.scalars["passes"]


def test_density_numerator_monotone(table_1e5):
    rng = np.random.default_rng(5)
    spec = PrimeValueSpec.random_unit_circle(77)
    rep = cr.deviation_density(spec, x_list=[100, 1000, 10**4, 10**5],
                               table=table_1e5)
    nums = rep.series["numerator"]
    assert all(b >= a for a, b in zip(nums, nums[1:]))


# ---------------------------------------------------------------- integral

def test_integral_euler_is_exactly_two(table_1e5):
    for P in (10**3, 10**4, 10**5):
        val = cr.deviation_integral(EULER, P=P, table=table_1e5)
        assert val == pytest.approx(2.0, abs=1e-9)


def test_integral_plus_one_grows(table_1e6):
    vals = [cr.deviation_integral(PLUS_ONE, P=P, table=table_1e6)
            for P in (10**3, 10**4, 10**5, 10**6)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 2.0 * vals[0]


def test_integral_unit_deviation_grows(table_1e6):
    # |1 + f(p)| = 1 on all p: integrand ~ 1/(sigma-1), log-divergent
    spec = PrimeValueSpec.constant(complex(-0.5, math.sqrt(3) / 2))
    vals = [cr.deviation_integral(spec, P=P, table=table_1e6)
            for P in (10**3, 10**4, 10**5, 10**6)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    rep = cr.deviation_integral_report(spec, P=10**6, table=table_1e6)
    assert rep.verdict == cr.VERDICT_INCONCLUSIVE
    assert rep.scalars["growth"] > 0.5


# ------------------------------------------------------------ perturbation

def test_perturbation_empty_delta_is_identity(table_1e4):
    base = PrimeValueSpec.twisted(EULER, 1.0)
    spec = cr.build_perturbation(base, {})
    a = arith.build_cm_sequence(spec, 1000, table_1e4)
    b = arith.build_cm_sequence(base, 1000, table_1e4)
    assert (a.values == b.values).all()


def test_perturbation_rejects_unit_modulus():
    base = PrimeValueSpec.twisted(EULER, 1.0)  # f(3) = -1/3
    with pytest.raises(cr.InvalidPerturbationError):
        cr.build_perturbation(base, {3: -2.0 / 3.0})  # |f(3)| = 1


def test_perturbation_moves_f2(table_1e6):
    # base f(p) = lambda(p)/p; move f(2) from -1/2 to -1/4: partial sums
    # must still trend toward zero
    base = PrimeValueSpec.twisted(EULER, 1.0)
    spec = cr.build_perturbation(base, {2: 0.25})
    vals = spec.values_at_primes(np.array([2, 3], dtype=np.int64))
    assert vals[0] == pytest.approx(-0.25)
    assert vals[1] == pytest.approx(-1.0 / 3.0)
    f_rep, g_rep = cr.compare_perturbation(spec, base, 10**6,
                                           [10**2, 10**4, 10**6],
                                           table=table_1e6)
    mags = [abs(s) for s in f_rep.sums]
    assert mags[-1] < mags[0]
    assert mags[-1] < 0.02
    assert abs(g_rep.sums[-1]) < 0.01


# ------------------------------------------------------------ report forms

def test_reports_are_reproducible(table_1e4):
    a = cr.real_part_sum(EULER, P=10**4, table=table_1e4)
    b = cr.real_part_sum(EULER, P=10**4, table=table_1e4)
    assert a == b
    assert json.dumps(a.to_json_dict()) == json.dumps(b.to_json_dict())


def test_report_csv_shape(table_1e4):
    rep = cr.rotated_sum(EULER, cr.TauGrid(taus=(-1.0, 0.0, 1.0)), P=10**4,
                         table=table_1e4)
    buf = io.StringIO()
    rep.write_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "x,tau=-1,tau=0,tau=1"
    assert len(lines) == 1 + len(rep.checkpoints)
