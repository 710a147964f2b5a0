import math

import numpy as np
import pytest

import cmolab.arith as arith
from cmolab.specs import InvalidSpecError, PrimeValueSpec

import oracles as orc

LIOUVILLE = PrimeValueSpec.liouville()
MOBIUS = PrimeValueSpec.mobius()


# ---------------------------------------------------------------- sieve

def test_spf_definition_examples(table_1e4):
    spf = table_1e4.spf
    assert spf[12] == 2
    assert spf[13] == 13
    assert spf[2] == 2


def test_prime_count_to_100_matches_trial_division(table_1e4):
    primes = table_1e4.primes
    assert int((primes <= 100).sum()) == 25
    assert list(primes[primes <= 100]) == orc.trial_division_primes(100)


def test_sieve_matches_trial_division_spf(table_1e4):
    spf = table_1e4.spf
    for n in range(2, 2000):
        assert spf[n] == orc.smallest_prime_factor(n)


def test_sieve_invariants(table_1e4):
    t = table_1e4
    assert (np.diff(t.primes) > 0).all()
    n = np.arange(2, t.limit + 1)
    assert (n % t.spf[2:] == 0).all()


def test_sieve_rejects_bad_limits():
    with pytest.raises(ValueError):
        arith.sieve_primes(1)
    with pytest.raises(ValueError):
        arith.sieve_primes(10**9)


# ------------------------------------------------------------- sequences

def test_cm_examples(table_1e4):
    lam = arith.build_cm_sequence(LIOUVILLE, 100, table_1e4)
    assert lam.values[12] == -1  # three prime factors with multiplicity
    half = arith.build_cm_sequence(PrimeValueSpec.constant(0.5), 100, table_1e4)
    assert half.values[12] == pytest.approx(0.125)
    chi = arith.build_cm_sequence(PrimeValueSpec.character(4, 1), 100, table_1e4)
    assert chi.values[15] == pytest.approx(-1.0)  # chi(3) chi(5) = (-1)(1)


def test_cm_first_value_and_immutability(table_1e4):
    lam = arith.build_cm_sequence(LIOUVILLE, 100, table_1e4)
    assert lam.values[1] == 1
    with pytest.raises(ValueError):
        lam.values[5] = 0


def test_complete_multiplicativity_random_pairs(table_1e5):
    n = 10**5
    seqs = [
        arith.build_cm_sequence(PrimeValueSpec.random_unit_circle(3), n, table_1e5),
        arith.build_cm_sequence(PrimeValueSpec.character(4, 1), n, table_1e5),
        arith.build_cm_sequence(
            PrimeValueSpec.twisted_character(4, 1, 0.5 + 6.02j), n, table_1e5),
    ]
    rng = np.random.default_rng(42)
    a = rng.integers(2, 400, size=10**4)
    b = rng.integers(2, n // 400, size=10**4)
    for seq in seqs:
        v = seq.values
        lhs = v[a * b]
        rhs = v[a] * v[b]
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-300)


def test_mult_examples(table_1e4):
    mu = arith.build_mult_sequence(MOBIUS, 100, table_1e4)
    assert mu.values[4] == 0
    assert mu.values[30] == -1
    assert mu.values[1] == 1
    for n in range(1, 101):
        assert mu.values[n] == orc.mobius(n)


def test_tilde_of_zero_spec(table_1e4):
    gt = arith.build_mult_sequence(PrimeValueSpec.constant(0.0).tilde(),
                                   100, table_1e4)
    assert gt.values[1] == 1
    assert (gt.values[2:] == 0).all()


def test_tilde_flat_tower_sequence(table_1e4):
    base = PrimeValueSpec.liouville()
    lt = arith.build_mult_sequence(base.tilde(), 1000, table_1e4)
    # multiplicative with value -1 at every prime power: (-1)^omega(n)
    for n in (8, 12, 36, 30, 1000):
        assert lt.values[n] == (-1) ** len(orc.factorize(n))


def test_mode_mismatch_raises(table_1e4):
    with pytest.raises(InvalidSpecError):
        arith.build_cm_sequence(MOBIUS, 100, table_1e4)
    with pytest.raises(InvalidSpecError):
        arith.build_mult_sequence(LIOUVILLE, 100, table_1e4)


# ------------------------------------------------------------ convolution

def test_mobius_inverts_ones(table_1e4):
    mu = arith.build_mult_sequence(MOBIUS, 100, table_1e4)
    conv = arith.dirichlet_convolve(mu, arith.ones_sequence(100))
    assert conv[1] == 1
    assert np.abs(conv[2:]).max() == 0


def test_liouville_convolution_is_square_indicator(table_1e4):
    lam = arith.build_cm_sequence(LIOUVILLE, 100, table_1e4)
    conv = arith.dirichlet_convolve(lam, arith.ones_sequence(100))
    brute = orc.brute_force_convolve(lam.values, arith.ones_sequence(100), 100)
    assert np.allclose(conv, brute, atol=1e-12)
    squares = {k * k for k in range(1, 11)}
    for n in range(1, 101):
        assert conv[n] == pytest.approx(1.0 if n in squares else 0.0)


def test_delta_is_identity(table_1e4):
    rng = np.random.default_rng(0)
    b = rng.standard_normal(101) + 1j * rng.standard_normal(101)
    b[0] = 0
    conv = arith.dirichlet_convolve(arith.delta_one(100), b)
    assert np.allclose(conv[1:], b[1:], atol=1e-15)


def test_convolve_matches_brute_force_to_2000():
    rng = np.random.default_rng(7)
    n = 2000
    a = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    b = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    a[0] = b[0] = 0
    fast = arith.dirichlet_convolve(a, b)
    brute = orc.brute_force_convolve(a, b, n)
    assert np.allclose(fast, brute, rtol=1e-12, atol=1e-12)


def test_convolve_commutative_associative():
    rng = np.random.default_rng(1)
    n = 500
    a, b, c = (rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
               for _ in range(3))
    ab = arith.dirichlet_convolve(a, b)
    ba = arith.dirichlet_convolve(b, a)
    assert np.allclose(ab, ba, rtol=1e-12, atol=1e-12)
    ab_c = arith.dirichlet_convolve(ab, c)
    a_bc = arith.dirichlet_convolve(a, arith.dirichlet_convolve(b, c))
    assert np.allclose(ab_c, a_bc, rtol=1e-10, atol=1e-10)


def test_convolve_length_mismatch():
    with pytest.raises(ValueError):
        arith.dirichlet_convolve(np.zeros(10, complex), np.zeros(5, complex),
                                 n=9)


# ----------------------------------------------------------- partial sums

def test_mertens_at_10(table_1e4):
    # mu(1..10) = 1,-1,-1,0,-1,1,-1,0,0,1 sums to -1
    mu = arith.build_mult_sequence(MOBIUS, 10, table_1e4)
    rep = arith.partial_sums(mu, "1", [10])
    assert rep.sums[0] == -1


def test_single_term_and_empty_sum(table_1e4):
    lam = arith.build_cm_sequence(LIOUVILLE, 10, table_1e4)
    rep = arith.partial_sums(lam, "1/n", [0, 1])
    assert rep.sums[0] == 0
    assert rep.sums[1] == 1


def test_prefix_consistency(table_1e5):
    lam = arith.build_cm_sequence(PrimeValueSpec.random_unit_circle(5), 10**5,
                                  table_1e5)
    cps = [10, 1000, 33333, 10**5]
    rep = arith.partial_sums(lam, "1/n", cps)
    for x, s in zip(cps, rep.sums):
        fresh = arith.partial_sums(lam, "1/n", [x]).sums[0]
        assert abs(fresh - s) <= 1e-12 * max(1.0, abs(s))


def test_checkpoint_validation(table_1e4):
    lam = arith.build_cm_sequence(LIOUVILLE, 100, table_1e4)
    with pytest.raises(ValueError):
        arith.partial_sums(lam, "1", [50, 10])
    with pytest.raises(ValueError):
        arith.partial_sums(lam, "1", [1000])
    with pytest.raises(ValueError):
        arith.partial_sums(lam, "bad", [10])


def test_mertens_log_square_bound(table_1e7):
    # |sum_{n<=x} mu(n)/n| * log^2(2x) stays below 0.5: empirical maximum
    # over the decade grid is 0.2549 (at x = 10^3), frozen with headroom
    mu = arith.mobius_sequence(10**7, table_1e7)
    cps = [10**3, 10**4, 10**5, 10**6, 10**7]
    rep = arith.partial_sums(mu, "1/n", cps)
    worst = max(abs(s) * math.log(2 * x) ** 2
                for x, s in zip(cps, rep.sums))
    assert worst < 0.5
    assert worst == pytest.approx(0.25489012092826924, rel=1e-9)


# -------------------------------------------------------- twisted sums

def test_twisted_mobius_exact_at_10(table_1e4):
    # sum_{n<=10} mu(n)/n = 19/210 by direct rational arithmetic
    val = arith.twisted_mobius_sum(10.0, 0.0, table_1e4)
    assert val == pytest.approx(19.0 / 210.0, abs=1e-15)


def test_twisted_mobius_single_term(table_1e4):
    assert arith.twisted_mobius_sum(1.0, 1.7, table_1e4) == 1.0


def test_twisted_mobius_approaches_inverse_zeta(table_1e6):
    from cmolab.analytic import zeta
    val = arith.twisted_mobius_sum(10**6, 1.0, table_1e6)
    assert abs(val - 1.0 / zeta(1.0 + 1.0j)) < 0.05


# ------------------------------------------------------------- cache file

def test_sequence_cache_round_trip(tmp_path, table_1e4):
    for seq in (arith.build_cm_sequence(PrimeValueSpec.random_unit_circle(11),
                                        500, table_1e4),
                arith.build_mult_sequence(MOBIUS, 500, table_1e4)):
        path = tmp_path / "seq.cmo"
        arith.save_sequence(seq, path)
        back = arith.load_sequence(path)
        assert type(back) is type(seq)
        assert back.n_max == seq.n_max
        assert back.spec == seq.spec
        assert (back.values == seq.values).all()


def test_cache_format_layout(tmp_path, table_1e4):
    seq = arith.build_cm_sequence(LIOUVILLE, 3, table_1e4)
    path = tmp_path / "seq.cmo"
    arith.save_sequence(seq, path)
    raw = path.read_bytes()
    assert raw[:4] == b"CMO1"
    n_max = int.from_bytes(raw[4:12], "little")
    blen = int.from_bytes(raw[12:20], "little")
    assert n_max == 3
    blob = raw[20:20 + blen].decode()
    assert "liouville" in blob
    values = np.frombuffer(raw[20 + blen:], dtype="<c16")
    assert np.allclose(values, [1, -1, -1])


def test_cache_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.cmo"
    path.write_bytes(b"XXXX" + b"\0" * 16)
    with pytest.raises(ValueError):
        arith.load_sequence(path)
