"""Smoke tests for the python bindings.

In an installed environment ``import prlab`` resolves the package; in the
dev tree ctest points PYTHONPATH at the built extension directly.
"""

import math
import os

import pytest

try:
    import prlab
except ImportError:  # dev tree: extension on PYTHONPATH without the package
    import _prlab as prlab


def test_residue_basics():
    assert prlab.euler_phi(8) == 4
    assert prlab.reduced_residues(8) == [1, 3, 5, 7]
    assert prlab.bias_constant(4, 1) == 1
    assert prlab.bias_constant(4, 3) == -1
    assert prlab.epsilon_sign(4, 7, 3, 1) == 1
    assert prlab.epsilon_sign(4, 5, 3, 1) == -1


def test_character_table():
    t = prlab.CharacterTable(5)
    assert t.size == 4
    assert t.modulus == 5
    # Orthogonality of one non-principal character.
    for chi in range(1, 4):
        s = sum(t.value(chi, a) for a in range(1, 5))
        assert abs(s) < 1e-12


def test_bessel_j0():
    assert prlab.bessel_j0(0.0) == 1.0
    assert abs(prlab.bessel_j0(1.0) - 0.7651976865579666) < 1e-13


def test_race_first_crossing():
    res = prlab.race(4, 30000, "pi", [3], [1])
    assert res["first_negative"] == 26861


def test_race_pi2():
    res = prlab.race(4, 25, "pi2", [1], [3])
    assert res["final_delta"] == 2.0  # pi2(25;4,1)=3 vs pi2(25;4,3)=1


def test_counts_match_known_values():
    out = prlab.count_functions(10, 100)
    classes = out["classes"]
    # pi(100) = 25; classes mod 10 split 25 - {2, 5} = 23 among units
    assert sum(c["pi"] for c in classes.values()) == 23
    assert out["pi_total"] == 25


def test_kernel_abel_positive_leading_term():
    res = prlab.abel_delta(4, "pi", 5.0, 3, 1)
    assert res["value"] == pytest.approx(math.exp(-15), rel=1e-4)


def test_bentz_negative():
    res = prlab.bentz_sum(50.0, 0.5)
    assert res["value"] < 0.0


def test_unbiased_check():
    assert prlab.unbiased_check(8, [3, 5])[0] is True
    assert prlab.unbiased_check(8, [1, 3])[0] is False
    assert prlab.unbiased_check(7, [1, 2, 4])[0] is True


@pytest.mark.skipif("PRLAB_ZERO_DIR" not in os.environ,
                    reason="needs the shipped zero archive")
def test_density_two_way():
    zeros = prlab.ZeroArchive(os.environ["PRLAB_ZERO_DIR"])
    assert zeros.count(4, 1) >= 100
    res = prlab.density(4, [3, 1], zeros)
    assert res["converged"]
    assert 0.9 < res["delta"] < 1.0  # strong mod-4 bias toward 3
