"""Hardware cost of RAA versus fully-connected HBF.

Only switches, phase shifters and antenna elements are counted; RF chains
and combiners are common to both designs and left out.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class PriceList:
    """Unit prices in dollars. Defaults are sub-6 GHz catalogue quotes."""

    p_sw: float = 0.12
    p_ant: float = 0.01
    p_ps: float = 63.44

    def __post_init__(self):
        if min(self.p_sw, self.p_ant, self.p_ps) < 0:
            raise InvalidArgumentError("prices must be non-negative")

    def scaled(self, factor: float) -> "PriceList":
        return PriceList(self.p_sw * factor, self.p_ant * factor, self.p_ps * factor)


def _check_positive(**kw):
    for name, v in kw.items():
        if int(v) != v or v < 1:
            raise InvalidArgumentError(f"{name} must be a positive integer, got {v!r}")


def cost_raa(n_rf: int, N: int, M: int, prices: PriceList = PriceList()) -> float:
    """``n_rf*N`` switches plus ``N*M`` antenna elements."""
    _check_positive(n_rf=n_rf, N=N, M=M)
    return n_rf * N * prices.p_sw + N * M * prices.p_ant


def cost_hbf(n_rf: int, M: int, prices: PriceList = PriceList()) -> float:
    """``n_rf*M`` phase shifters plus ``M`` antenna elements."""
    _check_positive(n_rf=n_rf, M=M)
    return n_rf * M * prices.p_ps + M * prices.p_ant


def cost_ratio(raa: float, hbf: float):
    """``raa / hbf``, or ``None`` when the HBF cost is zero."""
    return raa / hbf if hbf > 0 else None


def cost_report_csv(n_rf: int, N: int, M: int, prices: PriceList = PriceList(),
                    header_lines=()) -> str:
    """Two-row report ``architecture, N_RF, N, M, cost, ratio_to_hbf``."""
    raa = cost_raa(n_rf, N, M, prices)
    hbf = cost_hbf(n_rf, M, prices)
    ratio = cost_ratio(raa, hbf)
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["architecture", "N_RF", "N", "M", "cost", "ratio_to_hbf"])
    w.writerow(["raa", n_rf, N, M, f"{raa:.2f}",
                "undefined" if ratio is None else f"{ratio:.4f}"])
    w.writerow(["hbf", n_rf, M, M, f"{hbf:.2f}",
                "undefined" if ratio is None else "1.0000"])
    return buf.getvalue()
