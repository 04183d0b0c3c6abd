import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rayarray import InvalidArgumentError, PriceList, cost_hbf, cost_raa, design_orientations
from rayarray.cost import cost_ratio, cost_report_csv

QUOTE = PriceList(p_sw=0.12, p_ant=0.01, p_ps=63.44)


def test_raa_cost_golden():
    assert f"{cost_raa(1, 25, 16, QUOTE):.2f}" == "7.00"
    assert f"{cost_raa(2, 25, 16, QUOTE):.2f}" == "10.00"


def test_hbf_cost_golden():
    assert f"{cost_hbf(1, 16, QUOTE):.2f}" == "1015.20"
    assert cost_hbf(3, 16, PriceList(0, 0, 0)) == 0


def test_ratio():
    r = cost_ratio(cost_raa(1, 25, 16, QUOTE), cost_hbf(1, 16, QUOTE))
    assert round(r, 4) == 0.0069
    assert cost_ratio(1.0, 0.0) is None


def test_domain_guards():
    with pytest.raises(InvalidArgumentError):
        cost_raa(0, 25, 16, QUOTE)
    with pytest.raises(InvalidArgumentError):
        cost_hbf(1, 0, QUOTE)
    with pytest.raises(InvalidArgumentError):
        PriceList(-1, 0, 0)


@given(n_rf=st.integers(1, 16), N=st.integers(1, 99), M=st.integers(1, 256),
       f=st.sampled_from([0.5, 2.0, 4.0, 10.0]))
def test_linear_in_prices(n_rf, N, M, f):
    assert cost_raa(n_rf, N, M, QUOTE.scaled(f)) == pytest.approx(f * cost_raa(n_rf, N, M, QUOTE))
    assert cost_hbf(n_rf, M, QUOTE.scaled(f)) == pytest.approx(f * cost_hbf(n_rf, M, QUOTE))


def test_raa_cheaper_across_sweep():
    for M in range(4, 65):
        N, _ = design_orientations(M, 0.5 * math.pi)
        for n_rf in range(1, 9):
            assert cost_raa(n_rf, N, M, QUOTE) < cost_hbf(n_rf, M, QUOTE)


def test_report_csv():
    rows = cost_report_csv(1, 25, 16, QUOTE).splitlines()
    assert rows[0] == "architecture,N_RF,N,M,cost,ratio_to_hbf"
    assert rows[1] == "raa,1,25,16,7.00,0.0069"
    assert rows[2] == "hbf,1,16,16,1015.20,1.0000"
    zero = cost_report_csv(1, 25, 16, PriceList(0, 0, 0)).splitlines()
    assert zero[1].endswith("0.00,undefined")
