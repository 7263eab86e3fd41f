import numpy as np
import pytest

from segcap import IntChar
from segcap.characteristics import (add_mod2, branch_char, char_to_point, default_divisor,
                                    divisor_char, parity, point_to_char, riemann_constants_char,
                                    valid_divisors, xi_char)
from segcap.errors import CharacteristicError
from segcap.periods import abel_jacobi_branch_point


def C(e, ep):
    return IntChar(tuple(e), tuple(ep))


def test_branch_table_rows():
    assert branch_char(2, 1) == C([0, 0], [0, 0])
    assert branch_char(2, 5) == C([0, 1], [1, 1])
    assert branch_char(3, 8) == C([0, 0, 0], [1, 1, 1])
    assert branch_char(3, 2) == C([1, 0, 0], [0, 0, 0])
    assert branch_char(3, 3) == C([1, 0, 0], [1, 0, 0])
    assert branch_char(3, 4) == C([0, 1, 0], [1, 0, 0])


def test_branch_index_out_of_range():
    with pytest.raises(CharacteristicError):
        branch_char(2, 7)
    with pytest.raises(CharacteristicError):
        branch_char(0, 1)


@pytest.mark.parametrize("g, expected", [
    (1, C([1], [1])),
    (2, C([1, 1], [0, 1])),
    (3, C([1, 1, 1], [1, 0, 1])),
])
def test_riemann_constants(g, expected):
    assert riemann_constants_char(g) == expected


def test_add_mod2():
    a = C([1, 0], [1, 1])
    assert a + a == IntChar.zero(2)
    assert a + IntChar.zero(2) == a
    assert add_mod2(C([1, 0], [0, 0]), C([1, 1], [0, 1])) == C([0, 1], [0, 1])
    with pytest.raises(CharacteristicError):
        add_mod2(IntChar.zero(1), IntChar.zero(2))


def test_parity():
    assert parity(IntChar.zero(3)) == "even"
    assert parity(C([1], [1])) == "odd"
    assert parity(C([1, 1], [0, 1])) == "odd"


def test_divisor_char_examples():
    c = divisor_char(2, [2])
    assert c == C([0, 1], [0, 1]) and str(c) == "[01; 01]"
    assert parity(divisor_char(2, [3])) == "odd"
    assert divisor_char(1, []) == C([1], [1])
    assert divisor_char(1) == C([1], [1])


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_every_admissible_divisor_is_odd(g):
    sets = valid_divisors(g)
    assert default_divisor(g) in sets
    for I in sets:
        assert parity(divisor_char(g, I)) == "odd"


@pytest.mark.parametrize("I", [[1], [6], [2, 3], [], [2, 2, 3]])
def test_bad_divisors(I):
    with pytest.raises(CharacteristicError) as info:
        divisor_char(2 if len(I) < 3 else 3, I)
    assert info.value.code == "BAD_DIVISOR"


def test_xi_char():
    assert xi_char(C([0, 1], [0, 1])) == C([0, 1], [1, 0])
    assert xi_char(IntChar.zero(2)) == C([0, 0], [1, 1])
    c = C([1, 0, 1], [0, 1, 1])
    assert xi_char(xi_char(c)) == c


def test_char_to_point(e2):
    pd = e2.pd
    assert np.allclose(char_to_point(IntChar.zero(2), pd).value, 0)
    u = char_to_point(C([1, 0], [0, 0]), pd).value
    assert point_to_char(u, pd) == C([1, 0], [0, 0])


def test_point_round_trip_all_half_periods(chebyshev_problems):
    from itertools import product
    pd = chebyshev_problems[3].pd
    for bits in product((0, 1), repeat=6):
        c = C(bits[:3], bits[3:])
        assert point_to_char(char_to_point(c, pd), pd) == c


@pytest.mark.parametrize("n", [2, 3, 4])
def test_branch_points_snap_to_table(chebyshev_problems, n):
    pd = chebyshev_problems[n].pd
    for s in range(1, 2 * n + 3):
        assert point_to_char(abel_jacobi_branch_point(pd, s), pd, 1e-7) == branch_char(n, s)


def test_u_infinity_is_not_a_half_period(e2):
    with pytest.raises(CharacteristicError) as info:
        point_to_char(e2.pd.u_infinity, e2.pd)
    assert info.value.code == "NOT_A_HALF_PERIOD"
    real = point_to_char(e2.pd.u_infinity, e2.pd, None)
    assert np.allclose(np.mod(real.eps_prime, 2), [0.75, 0.25], atol=1e-9)
