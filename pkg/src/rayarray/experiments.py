"""Experiment runners: beam patterns, single-user SNR, multi-user sum rate, cost.

Each runner takes an :class:`ExperimentConfig`, returns an
:class:`ExperimentResult` and, when ``config.out`` is set, writes a CSV
whose comment header echoes the resolved config. Output depends only on
the config (including the seed), so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .channel import (ScenarioConfig, channels_to_csv, effective_channel_hbf,
                      effective_channel_raa, generate_multi_user,
                      generate_single_user)
from .cost import PriceList, cost_hbf, cost_raa, cost_ratio
from .geometry import build_hbf_codebook, build_raa
from .response import beam_pattern_sweep, reference_patterns
from .selection import (DEFAULT_CAP, LinkBudget, exhaustive_selection_multi,
                        greedy_selection, select_rays_single_user)

log = logging.getLogger(__name__)

EXPERIMENTS = ("beam_pattern", "single_user", "multi_user", "cost")
METHODS = ("greedy", "exhaustive", "top_magnitude")
DEFAULT_TRIALS = {"single_user": 1000, "multi_user": 500}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "single_user"
    M: Optional[int] = None
    eta_max: float = 0.5 * math.pi
    D: Optional[float] = None
    pattern: str = "both"
    n_rf: Optional[int] = None
    snr_grid_db: tuple = tuple(float(x) for x in range(-10, 11, 2))
    trials: Optional[int] = None
    seed: int = 0
    methods: tuple = ("greedy", "exhaustive", "top_magnitude")
    out: Optional[str] = None
    theta_points: int = 2001
    theta_min: float = -0.5 * math.pi
    theta_max: float = 0.5 * math.pi
    p_sw: float = 0.12
    p_ant: float = 0.01
    p_ps: float = 63.44
    cost_m_values: tuple = ()
    exhaustive_cap: int = DEFAULT_CAP
    selections_out: Optional[str] = None
    channels_out: Optional[str] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.pattern not in ("isotropic", "directional", "both"):
            raise ValueError(f"pattern must be isotropic, directional or both, got {self.pattern!r}")
        grid = np.asarray(self.snr_grid_db, dtype=float)
        if grid.size == 0 or not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise ValueError("snr_grid_db must be finite and strictly increasing")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods {sorted(bad)}")
        if self.theta_points < 1:
            raise ValueError("theta_points must be >= 1")

    @property
    def elements(self) -> int:
        if self.M is not None:
            return self.M
        # the beam-pattern figure uses the smaller array
        return 8 if self.experiment == "beam_pattern" else 16

    @property
    def rf_chains(self) -> int:
        if self.n_rf is not None:
            return self.n_rf
        # the cost comparison is quoted for a single RF chain
        return 1 if self.experiment == "cost" else 5

    @property
    def n_trials(self) -> int:
        return self.trials if self.trials is not None else DEFAULT_TRIALS.get(self.experiment, 1)

    @property
    def pattern_kinds(self) -> tuple:
        return ("isotropic", "directional") if self.pattern == "both" else (self.pattern,)

    @property
    def prices(self) -> PriceList:
        return PriceList(self.p_sw, self.p_ant, self.p_ps)

    def resolved(self) -> "ExperimentConfig":
        return replace(self, M=self.elements, trials=self.n_trials, n_rf=self.rf_chains)

    def header_lines(self) -> list:
        lines = [f"rayarray experiment: {self.experiment}"]
        for f in fields(self):
            lines.append(f"{f.name} = {_format_value(getattr(self, f.name))}")
        return lines


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


_PI_RE = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*$")


def _parse_float(text: str) -> float:
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        return (float(coef) if coef not in ("", "+", "-") else float(coef + "1")) * math.pi
    return float(text)


def _parse_field(name: str, text: str):
    text = text.strip()
    if name in ("M", "trials", "n_rf", "D", "out", "selections_out", "channels_out") and text in ("", "none", "None"):
        return None
    if name in ("experiment", "pattern", "out", "selections_out", "channels_out"):
        return text.replace("-", "_") if name == "experiment" else text
    if name in ("M", "n_rf", "trials", "seed", "theta_points", "exhaustive_cap"):
        return int(float(text))
    if name == "snr_grid_db":
        return _parse_grid(text)
    if name == "methods":
        return tuple(m.strip() for m in text.split(",") if m.strip())
    if name == "cost_m_values":
        return tuple(int(x) for x in _parse_grid(text))
    return _parse_float(text)


def _parse_grid(text: str) -> tuple:
    """``a:b:step`` (inclusive) or a comma list."""
    if ":" in text:
        parts = [_parse_float(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1.0
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(float(start + i * step) for i in range(n))
    return tuple(_parse_float(x) for x in text.split(",") if x.strip())


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines into typed config fields."""
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _parse_field(key, value)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path=None, **overrides) -> ExperimentConfig:
    values = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text()))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


@dataclass
class ResultRow:
    experiment: str
    architecture: str
    pattern: str
    transmit_snr_db: Optional[float]
    metric: str
    mean: float
    stderr: float
    trials: int
    seed: int


RESULT_COLUMNS = ["experiment", "architecture", "pattern", "transmit_snr_db",
                  "metric", "mean", "stderr", "trials", "seed"]


@dataclass
class ResultTable:
    rows: list = field(default_factory=list)

    def add(self, **kw):
        self.rows.append(ResultRow(**kw))

    def select(self, **match) -> list:
        return [r for r in self.rows
                if all(getattr(r, k) == v for k, v in match.items())]

    def value(self, **match) -> float:
        hits = self.select(**match)
        if len(hits) != 1:
            raise KeyError(f"{len(hits)} rows match {match}")
        return hits[0].mean

    def to_csv(self, header_lines=()) -> str:
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in self.rows:
            w.writerow([r.experiment, r.architecture, r.pattern,
                        "" if r.transmit_snr_db is None else repr(r.transmit_snr_db),
                        r.metric, repr(float(r.mean)), repr(float(r.stderr)),
                        r.trials, r.seed])
        return buf.getvalue()


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    table: ResultTable
    csv_text: str
    # raw per-trial samples keyed by (architecture, pattern, metric), shape (trials, len(grid))
    samples: dict = field(default_factory=dict)
    extra_files: dict = field(default_factory=dict)


def _mean_stderr(x: np.ndarray):
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    mean = x.mean(axis=0)
    if n > 1:
        se = x.std(axis=0, ddof=1) / math.sqrt(n)
    else:
        se = np.zeros_like(mean)
    return mean, se


def _trial_rngs(seed: int, trials: int) -> list:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _finish(config: ExperimentConfig, table: ResultTable, csv_text: str, **kw) -> ExperimentResult:
    result = ExperimentResult(config, table, csv_text, **kw)
    if config.out:
        Path(config.out).write_text(csv_text)
        for path, text in result.extra_files.items():
            Path(path).write_text(text)
    return result


def run_beam_pattern(config: ExperimentConfig) -> ExperimentResult:
    cfg = config.resolved()
    geom = build_raa(cfg.M, cfg.eta_max, cfg.D)
    codebook = build_hbf_codebook(cfg.M)
    grid = np.linspace(cfg.theta_min, cfg.theta_max, cfg.theta_points)
    table = ResultTable()
    extra = {}
    samples = {}
    header = cfg.header_lines()
    in_cov = np.abs(grid) <= cfg.eta_max + 1e-12
    for kind in cfg.pattern_kinds:
        raa_pat, hbf_pat = reference_patterns(kind)
        for arch, obj, pat in (("raa", geom, raa_pat), ("hbf", codebook, hbf_pat)):
            sweep = beam_pattern_sweep(obj, pat, grid)
            samples[(arch, kind, "max_magnitude_dB")] = sweep.max_magnitude_db
            if cfg.out:
                stem = Path(cfg.out)
                path = stem.with_name(f"{stem.stem}_{arch}_{kind}.csv")
                extra[str(path)] = sweep.to_csv(header + [f"architecture = {arch}", f"pattern = {kind}"])
            mdb = sweep.max_magnitude_db
            at_zero = beam_pattern_sweep(obj, pat, [0.0]).max_magnitude_db[0]
            common = dict(experiment="beam_pattern", architecture=arch, pattern=kind,
                          transmit_snr_db=None, stderr=0.0, trials=1, seed=cfg.seed)
            table.add(metric="max_magnitude_dB_at_0", mean=float(at_zero), **common)
            table.add(metric="peak_max_magnitude_dB", mean=float(mdb.max()), **common)
            table.add(metric="coverage_floor_max_magnitude_dB",
                      mean=float(mdb[in_cov].min()) if in_cov.any() else float("nan"), **common)
    return _finish(cfg, table, table.to_csv(header), samples=samples, extra_files=extra)


def run_single_user(config: ExperimentConfig) -> ExperimentResult:
    """Max post-MRC SNR (dB) with top-magnitude port selection for RAA and HBF."""
    cfg = config.resolved()
    geom = build_raa(cfg.M, cfg.eta_max, cfg.D)
    codebook = build_hbf_codebook(cfg.M)
    scenario = ScenarioConfig.single_user(eta_max=cfg.eta_max)
    grid = np.asarray(cfg.snr_grid_db)
    kinds = cfg.pattern_kinds
    # SNR in dB is the grid point plus a channel-only offset, 10*log10(||S h||^2 / M)
    offsets = {(a, k): np.empty(cfg.n_trials) for a in ("raa", "hbf") for k in kinds}
    dumps = []
    for t, rng in enumerate(_trial_rngs(cfg.seed, cfg.n_trials)):
        chan = generate_single_user(scenario, rng)
        if cfg.channels_out:
            dumps.append(channels_to_csv([chan], trial=t))
        for kind in kinds:
            raa_pat, hbf_pat = reference_patterns(kind)
            for arch, h in (("raa", effective_channel_raa(geom, raa_pat, chan)),
                            ("hbf", effective_channel_hbf(codebook, hbf_pat, chan))):
                sel = select_rays_single_user(h, min(cfg.n_rf, len(h)))
                energy = float(np.sum(np.abs(h[list(sel.indices)]) ** 2))
                with np.errstate(divide="ignore"):
                    offsets[(arch, kind)][t] = 10 * np.log10(energy / cfg.M)
    table = ResultTable()
    samples = {}
    for (arch, kind), off in offsets.items():
        snr_db = grid[None, :] + off[:, None]
        samples[(arch, kind, "max_snr_db")] = snr_db
        mean, se = _mean_stderr(snr_db)
        for p, m, s in zip(grid, mean, se):
            table.add(experiment="single_user", architecture=arch, pattern=kind,
                      transmit_snr_db=float(p), metric="max_snr_db", mean=float(m),
                      stderr=float(s), trials=cfg.n_trials, seed=cfg.seed)
    extra = {}
    if cfg.channels_out:
        extra[cfg.channels_out] = _join_csv(dumps)
    return _finish(cfg, table, table.to_csv(cfg.header_lines()), samples=samples,
                   extra_files=extra)


def _join_csv(chunks: list) -> str:
    if not chunks:
        return ""
    head, *_ = chunks[0].splitlines(keepends=True)
    return head + "".join("".join(c.splitlines(keepends=True)[1:]) for c in chunks)


def run_multi_user(config: ExperimentConfig) -> ExperimentResult:
    """MMSE sum rate with greedy and/or exhaustive ray (codeword) selection."""
    cfg = config.resolved()
    geom = build_raa(cfg.M, cfg.eta_max, cfg.D)
    codebook = build_hbf_codebook(cfg.M)
    scenario = ScenarioConfig.multi_user(eta_max=cfg.eta_max)
    grid = np.asarray(cfg.snr_grid_db)
    methods = [m for m in ("greedy", "exhaustive") if m in cfg.methods]
    if not methods:
        raise ValueError("multi_user needs at least one of: greedy, exhaustive")
    kinds = cfg.pattern_kinds
    archs = ("raa", "hbf")
    rates = {(a, k, m): np.empty((cfg.n_trials, len(grid)))
             for a in archs for k in kinds for m in methods}
    selections = []
    dumps = []
    for t, rng in enumerate(_trial_rngs(cfg.seed, cfg.n_trials)):
        users = generate_multi_user(scenario, rng)
        if cfg.channels_out:
            dumps.append(channels_to_csv(users, trial=t))
        for kind in kinds:
            raa_pat, hbf_pat = reference_patterns(kind)
            H = {"raa": np.array([effective_channel_raa(geom, raa_pat, u) for u in users]),
                 "hbf": np.array([effective_channel_hbf(codebook, hbf_pat, u) for u in users])}
            for arch in archs:
                n_rf = min(cfg.n_rf, H[arch].shape[1])
                budgets = [LinkBudget.from_db(p, cfg.M, arch) for p in grid]
                if "greedy" in methods:
                    for j, b in enumerate(budgets):
                        g = greedy_selection(H[arch], n_rf, b)
                        rates[(arch, kind, "greedy")][t, j] = g.step_rates[-1]
                        selections.append((t, arch, kind, grid[j], "greedy",
                                           g.selection.indices, g.step_rates[-1], g.evaluations))
                if "exhaustive" in methods:
                    res = exhaustive_selection_multi(H[arch], n_rf, budgets, cfg.exhaustive_cap)
                    for j, e in enumerate(res):
                        rates[(arch, kind, "exhaustive")][t, j] = e.rate
                        selections.append((t, arch, kind, grid[j], "exhaustive",
                                           e.selection.indices, e.rate, e.candidates))
        if (t + 1) % 50 == 0:
            log.info("multi_user: %d/%d trials", t + 1, cfg.n_trials)
    table = ResultTable()
    samples = {}
    for a in archs:
        for k in kinds:
            for m in methods:
                x = rates[(a, k, m)]
                samples[(a, k, f"sum_rate_{m}")] = x
                mean, se = _mean_stderr(x)
                for p, mu, s in zip(grid, mean, se):
                    table.add(experiment="multi_user", architecture=a, pattern=k,
                              transmit_snr_db=float(p), metric=f"sum_rate_{m}",
                              mean=float(mu), stderr=float(s), trials=cfg.n_trials, seed=cfg.seed)
            if len(methods) == 2:
                gap = rates[(a, k, "exhaustive")] - rates[(a, k, "greedy")]
                samples[(a, k, "greedy_gap")] = gap
                mean, se = _mean_stderr(gap)
                for p, mu, s in zip(grid, mean, se):
                    table.add(experiment="multi_user", architecture=a, pattern=k,
                              transmit_snr_db=float(p), metric="greedy_gap",
                              mean=float(mu), stderr=float(s), trials=cfg.n_trials, seed=cfg.seed)
    extra = {}
    if cfg.selections_out:
        extra[cfg.selections_out] = selection_records_csv(selections)
    if cfg.channels_out:
        extra[cfg.channels_out] = _join_csv(dumps)
    return _finish(cfg, table, table.to_csv(cfg.header_lines()), samples=samples,
                   extra_files=extra)


def selection_records_csv(records) -> str:
    """``trial, architecture, pattern, transmit_snr_db, method, indices, rate, evaluations``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "architecture", "pattern", "transmit_snr_db", "method",
                "indices", "rate", "evaluations"])
    for t, arch, kind, p, method, idx, rate, ev in records:
        w.writerow([t, arch, kind, repr(float(p)), method, " ".join(map(str, idx)),
                    repr(float(rate)), ev])
    return buf.getvalue()


def run_cost(config: ExperimentConfig) -> ExperimentResult:
    """Hardware cost of RAA and HBF; one pair of rows per ``M``."""
    cfg = config.resolved()
    prices = cfg.prices
    m_values = cfg.cost_m_values or (cfg.M,)
    table = ResultTable()
    buf = io.StringIO()
    for line in cfg.header_lines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["architecture", "N_RF", "N", "M", "cost", "ratio_to_hbf"])
    undefined = 0
    for M in m_values:
        N = build_raa(M, cfg.eta_max, cfg.D if len(m_values) == 1 else None).N
        raa = cost_raa(cfg.n_rf, N, M, prices)
        hbf = cost_hbf(cfg.n_rf, M, prices)
        ratio = cost_ratio(raa, hbf)
        undefined += ratio is None
        w.writerow(["raa", cfg.n_rf, N, M, f"{raa:.2f}",
                    "undefined" if ratio is None else f"{ratio:.4f}"])
        w.writerow(["hbf", cfg.n_rf, M, M, f"{hbf:.2f}",
                    "undefined" if ratio is None else "1.0000"])
        common = dict(experiment="cost", pattern="", transmit_snr_db=None, stderr=0.0,
                      trials=1, seed=cfg.seed)
        table.add(architecture=f"raa_M{M}", metric="cost", mean=raa, **common)
        table.add(architecture=f"hbf_M{M}", metric="cost", mean=hbf, **common)
        table.add(architecture=f"raa_M{M}", metric="ratio_to_hbf",
                  mean=float("nan") if ratio is None else ratio, **common)
    if undefined:
        log.warning("cost ratio undefined for %d configuration(s): HBF cost is zero", undefined)
    return _finish(cfg, table, buf.getvalue())


RUNNERS = {
    "beam_pattern": run_beam_pattern,
    "single_user": run_single_user,
    "multi_user": run_multi_user,
    "cost": run_cost,
}


def run(config: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[config.experiment](config)
