"""TTI-driven link simulation binding channel, table, and controller.

One run is a strict per-TTI loop. The expensive parts are hoisted out:
fading trajectories are synthesized for the whole run up front, and the
power-independent part of the SINR is reduced to one dB constant per
TTI (per precoder and stream for the 2x2 mode), so the loop only adds
the current transmit power in dB and compares against thresholds.

Feedback is delayed: the report the transmitter acts on at TTI t was
measured at t - feedback_delay_ttis against the power configured then,
and decode outcomes come back on the same lag. Reports are always
measured at the configured power even on TTIs that carried no data,
mirroring pilot-based measurement; otherwise an out-of-range report
would lock the link idle forever.

Failed blocks are retransmitted at the next serving opportunity at the
same MCS and the then-current power, up to max_retransmissions, and
count their payload once, at the attempt that decodes. Out-of-range
report TTIs send nothing but still burn the circuit overhead.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .ee_controller import (
    RECONFIGURE,
    ControllerConfig,
    TtiFeedback,
    new_controller_state,
    on_tti,
    relative_ee_difference,
    select_optimal,
    should_trigger,
    update_offset,
)
from .link_channel import ChannelParams, bessel_j0, doppler_hz, synth_fading
from .mcs_table import McsTable, default_table
from .mimo_dtxaa import DUAL, SINGLE, MimoFeedback, pci_codebook, select_optimal_dual, stream_gain_series
from .power_model import PowerModelParams, total_power

__all__ = [
    "SISO",
    "SIMO",
    "MIMO",
    "FIXED_BASELINE",
    "PER_TTI_OPTIMAL",
    "SEMI_STATIC",
    "OUTCOME_ACK",
    "OUTCOME_NACK",
    "OUTCOME_MIXED",
    "OUTCOME_IDLE",
    "ScenarioConfig",
    "TtiRecord",
    "RunMetrics",
    "SweepPoint",
    "estimation_loss_db",
    "power_model_for_mode",
    "run",
    "sweep",
]

SISO = "SISO"
SIMO = "SIMO"
MIMO = "MIMO"
_MODES = (SISO, SIMO, MIMO)

FIXED_BASELINE = "FixedBaseline"
PER_TTI_OPTIMAL = "PerTtiOptimal"
SEMI_STATIC = "SemiStatic"
_STRATEGIES = (FIXED_BASELINE, PER_TTI_OPTIMAL, SEMI_STATIC)

OUTCOME_ACK = "ack"
OUTCOME_NACK = "nack"
OUTCOME_MIXED = "mixed"
OUTCOME_IDLE = "idle"


def power_model_for_mode(mode: str, base: PowerModelParams) -> PowerModelParams:
    """Same amplifier/overhead figures with the chain count the antenna
    mode implies: both RF chains stay powered in the 2x2 mode."""
    m_a = 2 if mode == MIMO else 1
    if base.m_a == m_a:
        return base
    return PowerModelParams(eta=base.eta, p_cir_w=base.p_cir_w, p_sta_w=base.p_sta_w, m_a=m_a)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one run needs. power_model.m_a must match the antenna
    mode (2 for MIMO, 1 otherwise); power_model_for_mode builds it.

    pilot_window_s models pilot-aided channel estimation: the effective
    SINR (for decode and for the reported CQI alike) is degraded by the
    estimator decorrelation over one averaging window, a loss that grows
    with Doppler and is negligible at walking speed.
    """

    channel: ChannelParams
    antenna_mode: str = SISO
    strategy: str = SEMI_STATIC
    duration_ttis: int = 10_000
    seed: int = 1
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    power_model: PowerModelParams = field(default_factory=PowerModelParams)
    table: McsTable = field(default_factory=default_table)
    feedback_delay_ttis: int = 3
    baseline_power_dbm: float = 40.5
    max_retransmissions: int = 3
    dual_shift_factor: float = 2.0
    pair_tol_db: float = 0.0
    pilot_window_s: float = 1.0 / 1500.0
    collect_trace: bool = True

    def __post_init__(self):
        if self.antenna_mode not in _MODES:
            raise ValueError(f"antenna_mode must be one of {_MODES}")
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"strategy must be one of {_STRATEGIES}")
        if self.duration_ttis < 1:
            raise ValueError("duration_ttis must be > 0")
        if self.feedback_delay_ttis < 1:
            raise ValueError("feedback_delay_ttis must be >= 1")
        if self.max_retransmissions < 0:
            raise ValueError("max_retransmissions must be >= 0")
        if self.pilot_window_s < 0.0:
            raise ValueError("pilot_window_s must be >= 0")
        want_ma = 2 if self.antenna_mode == MIMO else 1
        if self.power_model.m_a != want_ma:
            raise ValueError(
                f"{self.antenna_mode} needs power_model.m_a == {want_ma}; "
                "use power_model_for_mode"
            )


@dataclass(slots=True)
class TtiRecord:
    tti_index: int
    p_tx_dbm: float
    mcs_index: int
    mcs_secondary: int
    outcome: str
    delivered_bits: int
    consumed_energy_j: float
    reconfigured: bool


@dataclass(frozen=True)
class RunMetrics:
    avg_ee_bits_per_joule: float
    throughput_bps: float
    reconfig_count: int
    nack_rate: float
    delivered_bits: int
    consumed_energy_j: float
    duration_ttis: int
    strategy: str
    antenna_mode: str


class _Accounting:
    """Per-run counters shared by the mode-specific loops."""

    __slots__ = (
        "delivered",
        "energy_j",
        "attempts",
        "nacks",
        "reconfigs",
        "trace",
        "collect",
    )

    def __init__(self, collect: bool):
        self.delivered = 0
        self.energy_j = 0.0
        self.attempts = 0
        self.nacks = 0
        self.reconfigs = 0
        self.trace: list[TtiRecord] = []
        self.collect = collect

    def log(self, rec: TtiRecord):
        if self.collect:
            self.trace.append(rec)

    def metrics(self, sc: ScenarioConfig) -> RunMetrics:
        span_s = sc.duration_ttis * sc.controller.tti_ms * 1e-3
        return RunMetrics(
            avg_ee_bits_per_joule=self.delivered / self.energy_j if self.energy_j > 0 else 0.0,
            throughput_bps=self.delivered / span_s,
            reconfig_count=self.reconfigs,
            nack_rate=self.nacks / self.attempts if self.attempts else 0.0,
            delivered_bits=self.delivered,
            consumed_energy_j=self.energy_j,
            duration_ttis=sc.duration_ttis,
            strategy=sc.strategy,
            antenna_mode=sc.antenna_mode,
        )


def _weighted_block(
    ch: ChannelParams, n_rx: int, n_tx: int, n_steps: int, rng: np.random.Generator
) -> np.ndarray:
    """Fading trajectories (n_taps, n_rx, n_tx, n_steps) with PDP weights
    folded in, sampled at the TTI rate."""
    n_taps = len(ch.pdp_weights)
    f_d = doppler_hz(ch.speed_kmh, ch.carrier_hz)
    block = synth_fading(n_taps * n_rx * n_tx, n_steps, 2e-3, f_d, rng)
    block = block.reshape(n_taps, n_rx, n_tx, n_steps)
    block *= np.sqrt(np.asarray(ch.pdp_weights))[:, None, None, None]
    return block


def _gain_to_db_const(gain: np.ndarray, ch: ChannelParams) -> np.ndarray:
    """dB SINR at 0 dBm for a per-TTI link gain array: the power term is
    added later as plain dB."""
    scale = ch.sf * ch.path_gain_lin / ch.denominator_w
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(gain * scale)


def estimation_loss_db(f_d_hz: float, window_s: float) -> float:
    """Effective-SINR penalty of pilot-aided channel estimation.

    The estimate taken over one averaging window decorrelates from the
    instantaneous channel by rho = J0(2 pi f_d w); the matched-filter
    mismatch costs about rho^2 in post-combining SINR. Clipped so a deep
    null in J0 cannot produce an unbounded penalty."""
    rho = abs(bessel_j0(2.0 * np.pi * f_d_hz * window_s))
    return -20.0 * np.log10(max(rho, 0.05))


def run(sc: ScenarioConfig) -> tuple[RunMetrics, list[TtiRecord]]:
    """Simulate one scenario; deterministic for a fixed seed."""
    rng = np.random.default_rng(sc.seed)
    if sc.antenna_mode == MIMO:
        return _run_mimo(sc, rng)
    return _run_single_stream(sc, rng)


# --------------------------------------------------------------- 1-stream


def _run_single_stream(sc: ScenarioConfig, rng) -> tuple[RunMetrics, list[TtiRecord]]:
    ch, cfg, pm, table = sc.channel, sc.controller, sc.power_model, sc.table
    n_rx = 2 if sc.antenna_mode == SIMO else 1
    T = sc.duration_ttis
    delay = sc.feedback_delay_ttis
    ts = cfg.tti_ms * 1e-3

    block = _weighted_block(ch, n_rx, 1, T, rng)
    gain = np.sum(np.abs(block) ** 2, axis=(0, 1, 2))
    loss = estimation_loss_db(doppler_hz(ch.speed_kmh, ch.carrier_hz), sc.pilot_window_s)
    c_db = (_gain_to_db_const(gain, ch) - loss).tolist()

    thr = [float(x) for x in table.thresholds_db]
    tbs = [int(e.tbs_bits) for e in table.entries]
    n_levels = len(thr)
    overhead = pm.overhead_w
    eta = pm.eta

    acc = _Accounting(sc.collect_trace)
    meas_cqi = [0] * T
    meas_p = [0.0] * T
    outcome_due: list[tuple[bool, int, int, int] | None] = [None] * (T + delay + 1)
    retx: tuple[int, int, int] | None = None  # (mcs, tbs, retx_count)

    strategy = sc.strategy
    st = new_controller_state(cfg, sc.baseline_power_dbm)
    last_sample_ee = 0.0

    for t in range(T):
        if t >= delay:
            fb_cqi = meas_cqi[t - delay]
            fb_p = meas_p[t - delay]
        else:
            fb_cqi, fb_p = 0, None
        arriving = outcome_due[t]
        ack_flag = arriving[0] if arriving is not None else None

        # every applied trigger decision counts as a reconfiguration,
        # even one that lands on the values already in force: it is the
        # signaling event that costs, not the numeric delta
        reconfigured = False
        if strategy == SEMI_STATIC:
            st, dec = on_tti(
                st,
                TtiFeedback(fb_cqi, ack_flag, fb_p, last_sample_ee),
                table,
                cfg,
                pm,
            )
            if dec.action == RECONFIGURE:
                reconfigured = True
                acc.reconfigs += 1
            p_cfg = st.power_dbm
            serve = dec.mcs
        elif strategy == PER_TTI_OPTIMAL:
            if ack_flag is not None:
                update_offset(st, ack_flag, cfg)
            if fb_cqi >= 1:
                sel = select_optimal(fb_p, fb_cqi, st.offset_db, table, cfg, pm)
                st.power_dbm = sel.power_dbm
                st.mcs = sel.mcs
                reconfigured = True
                acc.reconfigs += 1
                serve = sel.mcs
            else:
                serve = 0
            p_cfg = st.power_dbm
        else:  # FixedBaseline: hold power, conventional link adaptation
            # with the same ACK/NACK outer loop backing off the served MCS
            if ack_flag is not None:
                update_offset(st, ack_flag, cfg)
            p_cfg = sc.baseline_power_dbm
            if fb_cqi >= 1:
                serve = bisect_right(thr, thr[fb_cqi - 1] - st.offset_db)
                serve = min(max(serve, 1), n_levels)
            else:
                serve = 0

        # resolve a failed block reported this TTI
        if arriving is not None and not arriving[0]:
            _, r_mcs, r_tbs, r_cnt = arriving
            if r_cnt < sc.max_retransmissions:
                retx = (r_mcs, r_tbs, r_cnt + 1)

        # transmit
        if fb_cqi >= 1 and retx is not None:
            s_mcs, s_tbs, s_cnt = retx
            retx = None
        elif fb_cqi >= 1 and serve >= 1:
            s_mcs, s_tbs, s_cnt = serve, tbs[serve - 1], 0
        else:
            s_mcs = 0

        if s_mcs >= 1:
            sinr = (p_cfg - 30.0) + c_db[t]
            ack = sinr >= thr[s_mcs - 1]
            acc.attempts += 1
            p_w = 10.0 ** ((p_cfg - 30.0) / 10.0)
            energy = ts * (p_w / eta + overhead)
            if ack:
                delivered = s_tbs
                acc.delivered += s_tbs
            else:
                delivered = 0
                acc.nacks += 1
            outcome_due[t + delay] = (ack, s_mcs, s_tbs, s_cnt)
            acc.energy_j += energy
            last_sample_ee = delivered / energy
            acc.log(
                TtiRecord(
                    t, p_cfg, s_mcs, 0,
                    OUTCOME_ACK if ack else OUTCOME_NACK,
                    delivered, energy, reconfigured,
                )
            )
        else:
            energy = ts * overhead
            acc.energy_j += energy
            last_sample_ee = 0.0
            outcome_due[t + delay] = None
            acc.log(
                TtiRecord(
                    t, float("-inf"), 0, 0, OUTCOME_IDLE, 0, energy, reconfigured
                )
            )

        # measurement for the report that arrives delay TTIs from now,
        # taken at the configured power regardless of what was sent
        meas_cqi[t] = bisect_right(thr, (p_cfg - 30.0) + c_db[t])
        meas_p[t] = p_cfg

    return acc.metrics(sc), acc.trace


# ------------------------------------------------------------------ 2x2


def _mimo_constants(sc: ScenarioConfig, rng):
    """Per-PCI dB constants: nulled stream 1/2 and combined single-stream,
    each shaped (4, T)."""
    ch = sc.channel
    T = sc.duration_ttis
    block = _weighted_block(ch, 2, 2, T, rng)
    loss = estimation_loss_db(doppler_hz(ch.speed_kmh, ch.carrier_hz), sc.pilot_window_s)
    a1 = np.empty((4, T))
    a2 = np.empty((4, T))
    a_single = np.empty((4, T))
    for pci, w in enumerate(pci_codebook()):
        e1, e2, comb = stream_gain_series(block, w)
        a1[pci] = _gain_to_db_const(e1, ch) - loss
        a2[pci] = _gain_to_db_const(e2, ch) - loss
        a_single[pci] = _gain_to_db_const(comb, ch) - loss
    return a1, a2, a_single


_HALF_DB = 10.0 * np.log10(2.0)


def _mimo_hypothesis(thr_arr, tbs_arr, a1, a2, a_single, t, p_dbm):
    """Best of the eight mode/PCI hypotheses at power p_dbm for TTI t;
    ties prefer single mode, then the lower PCI."""
    off = p_dbm - 30.0
    c_single = np.searchsorted(thr_arr, a_single[:, t] + off, side="right")
    t_single = np.where(c_single > 0, tbs_arr[np.maximum(c_single - 1, 0)], 0)
    c1 = np.searchsorted(thr_arr, a1[:, t] + (off - _HALF_DB), side="right")
    c2 = np.searchsorted(thr_arr, a2[:, t] + (off - _HALF_DB), side="right")
    live = (c1 > 0) & (c2 > 0)
    t_dual = np.where(
        live, tbs_arr[np.maximum(c1 - 1, 0)] + tbs_arr[np.maximum(c2 - 1, 0)], -1
    )
    cat = np.concatenate([t_single, t_dual])
    k = int(np.argmax(cat))
    if k < 4:
        return SINGLE, k, int(c_single[k]), 0
    k -= 4
    return DUAL, k, int(c1[k]), int(c2[k])


def _run_mimo(sc: ScenarioConfig, rng) -> tuple[RunMetrics, list[TtiRecord]]:
    ch, cfg, pm, table = sc.channel, sc.controller, sc.power_model, sc.table
    T = sc.duration_ttis
    delay = sc.feedback_delay_ttis
    ts = cfg.tti_ms * 1e-3
    a1, a2, a_single = _mimo_constants(sc, rng)

    thr_arr = table.thresholds_db
    tbs_arr = table.tbs_bits
    thr = [float(x) for x in thr_arr]
    tbs = [int(e.tbs_bits) for e in table.entries]
    n_levels = len(thr)
    overhead = pm.overhead_w
    eta = pm.eta
    max_retx = sc.max_retransmissions
    strategy = sc.strategy

    acc = _Accounting(sc.collect_trace)
    feedback: list[tuple | None] = [None] * T  # (mode, pci, c1, c2, p_meas)
    outcome_due: list[list | None] = [None] * (T + delay + 1)
    retx: list[tuple[int, int, int] | None] = [None, None]  # per stream slot

    st = new_controller_state(cfg, sc.baseline_power_dbm)
    last_sample_ee = 0.0
    cfg_power = sc.baseline_power_dbm
    cfg_sig: tuple = ()  # configured (mode, levels...) for change detection

    for t in range(T):
        fb = feedback[t - delay] if t >= delay else None
        arriving = outcome_due[t] or []

        reconfigured = False
        serve_mode = None
        lvl1 = lvl2 = 0

        if strategy == FIXED_BASELINE:
            for out in arriving:
                update_offset(st, out[1], cfg)
            p_cfg = sc.baseline_power_dbm
            if fb is not None:
                mode, pci, c1, c2, _ = fb

                def _bo(c):  # outer-loop backoff on the reported level
                    lvl = bisect_right(thr, thr[c - 1] - st.offset_db)
                    return min(max(lvl, 1), n_levels)

                if mode == SINGLE and c1 >= 1:
                    serve_mode, lvl1 = SINGLE, _bo(c1)
                elif mode == DUAL:
                    serve_mode, lvl1, lvl2 = DUAL, _bo(c1), _bo(c2)
        else:
            for out in arriving:
                update_offset(st, out[1], cfg)
            st.ee_smoothed += cfg.ee_smoothing * (last_sample_ee - st.ee_smoothed)
            st.timer_ms += cfg.tti_ms
            usable = fb is not None and (fb[0] == DUAL or fb[2] >= 1)
            if usable:
                mode, pci, c1, c2, p_meas = fb
                if mode == SINGLE:
                    sel = select_optimal(p_meas, c1, st.offset_db, table, cfg, pm)
                    cand_sig = (SINGLE, sel.mcs)
                    cand_power = sel.power_dbm
                    cand_ee = sel.ee
                else:
                    dsel = select_optimal_dual(
                        p_meas,
                        MimoFeedback(DUAL, pci, c1, c2),
                        st.offset_db,
                        table,
                        cfg,
                        pm,
                        tol_db=sc.pair_tol_db,
                        shift_factor=sc.dual_shift_factor,
                    )
                    cand_sig = (DUAL,) + dsel.pair
                    cand_power = dsel.power_dbm
                    cand_ee = dsel.ee
                gap = relative_ee_difference(cand_ee, st.ee_smoothed)
                fire = (
                    strategy == PER_TTI_OPTIMAL
                    or should_trigger(gap, st.timer_ms, cfg)
                )
                if fire:
                    # the applied decision is the signaling event, counted
                    # whether or not the values moved
                    reconfigured = True
                    acc.reconfigs += 1
                    cfg_power, cfg_sig = cand_power, cand_sig
                    st.power_dbm = cand_power
                    if strategy == SEMI_STATIC:
                        st.timer_ms = 0.0
                    serve_mode = cand_sig[0]
                    if serve_mode == SINGLE:
                        lvl1 = cand_sig[1]
                    else:
                        lvl1, lvl2 = cand_sig[1], cand_sig[2]
                else:
                    # AMC at held power: follow the report, shifted by the
                    # power change since measurement, backed off by delta
                    shift = (cfg_power - p_meas) - st.offset_db
                    serve_mode = mode
                    lvl1 = bisect_right(thr, thr[c1 - 1] + shift)
                    lvl1 = min(max(lvl1, cfg.min_mcs), n_levels)
                    if mode == DUAL:
                        lvl2 = bisect_right(thr, thr[c2 - 1] + shift)
                        lvl2 = min(max(lvl2, cfg.min_mcs), n_levels)
            p_cfg = cfg_power

        # assemble per-stream transmissions (retransmissions first)
        sends = []  # (slot, mcs, tbs, retx_count, share_db)
        if serve_mode == SINGLE:
            if retx[0] is not None:
                m, b, c = retx[0]
                sends.append((0, m, b, c, 0.0))
                retx[0] = None
            elif lvl1 >= 1:
                sends.append((0, lvl1, tbs[lvl1 - 1], 0, 0.0))
        elif serve_mode == DUAL:
            for slot, lvl in ((0, lvl1), (1, lvl2)):
                if retx[slot] is not None:
                    m, b, c = retx[slot]
                    sends.append((slot, m, b, c, _HALF_DB))
                    retx[slot] = None
                elif lvl >= 1:
                    sends.append((slot, lvl, tbs[lvl - 1], 0, _HALF_DB))

        for out in arriving:
            slot, ok, m, b, cnt = out
            if not ok and cnt < max_retx and retx[slot] is None:
                retx[slot] = (m, b, cnt + 1)

        if sends:
            pci_now = fb[1]
            delivered = 0
            acks = 0
            due = []
            p_w = 10.0 ** ((p_cfg - 30.0) / 10.0)
            energy = ts * (p_w / eta + overhead)
            for slot, m, b, cnt, share in sends:
                if serve_mode == SINGLE:
                    sinr = a_single[pci_now, t] + (p_cfg - 30.0)
                else:
                    base = a1 if slot == 0 else a2
                    sinr = base[pci_now, t] + (p_cfg - 30.0 - share)
                ok = bool(sinr >= thr[m - 1])
                acc.attempts += 1
                if ok:
                    delivered += b
                    acks += 1
                else:
                    acc.nacks += 1
                due.append((slot, ok, m, b, cnt))
            outcome_due[t + delay] = due
            acc.delivered += delivered
            acc.energy_j += energy
            last_sample_ee = delivered / energy
            if acks == len(sends):
                outcome = OUTCOME_ACK
            elif acks == 0:
                outcome = OUTCOME_NACK
            else:
                outcome = OUTCOME_MIXED
            m1 = next((s[1] for s in sends if s[0] == 0), 0)
            m2 = next((s[1] for s in sends if s[0] == 1), 0)
            acc.log(
                TtiRecord(t, p_cfg, m1, m2, outcome, delivered, energy, reconfigured)
            )
        else:
            energy = ts * overhead
            acc.energy_j += energy
            last_sample_ee = 0.0
            acc.log(
                TtiRecord(
                    t, float("-inf"), 0, 0, OUTCOME_IDLE, 0, energy, reconfigured
                )
            )

        feedback[t] = _mimo_hypothesis(thr_arr, tbs_arr, a1, a2, a_single, t, p_cfg) + (
            p_cfg,
        )

    return acc.metrics(sc), acc.trace


# ------------------------------------------------------------------ sweep


@dataclass(frozen=True)
class SweepPoint:
    """Aggregated metrics of one (value, strategy-label) cell."""

    variable: str
    value: float | str
    strategy: str
    mean_ee: float
    std_ee: float
    mean_reconfigs: float
    mean_throughput: float
    repetitions: int
    ee_samples: tuple[float, ...]


_SWEEP_VARS = ("speed", "distance", "theta_min", "fixed_power", "antenna_mode")


def _derive(template: ScenarioConfig, variable, value, strategy, mode, seed):
    ch = template.channel
    cfg = template.controller
    baseline = template.baseline_power_dbm
    if variable == "speed":
        ch = replace(ch, speed_kmh=float(value))
    elif variable == "distance":
        ch = replace(ch, distance_m=float(value))
    elif variable == "theta_min":
        cfg = replace(cfg, min_mcs=int(value))
    elif variable == "fixed_power":
        baseline = float(value)
    elif variable == "antenna_mode":
        mode = str(value)
    return replace(
        template,
        channel=ch,
        controller=cfg,
        baseline_power_dbm=baseline,
        strategy=strategy,
        antenna_mode=mode,
        power_model=power_model_for_mode(mode, template.power_model),
        seed=seed,
        collect_trace=False,
    )


def _worker_count() -> int:
    raw = os.environ.get("HSDPA_EE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep(
    template: ScenarioConfig,
    variable: str,
    values,
    repetitions: int = 1,
    strategies: tuple[str, ...] | None = None,
    antenna_modes: tuple[str, ...] | None = None,
) -> list[SweepPoint]:
    """Run value x strategy x antenna-mode x repetition and aggregate.

    Repetition r uses the same derived seed in every cell, so curves
    share their channel realizations and differences are paired. The
    strategy label carries the antenna mode when more than one is swept
    (e.g. "FixedBaseline/MIMO").
    """
    if variable not in _SWEEP_VARS:
        raise ValueError(f"variable must be one of {_SWEEP_VARS}")
    values = list(values)
    if not values:
        raise ValueError("values must be non-empty")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    strategies = strategies or (template.strategy,)
    antenna_modes = antenna_modes or (template.antenna_mode,)
    seeds = [int(s) for s in np.random.SeedSequence(template.seed).generate_state(repetitions)]

    jobs = []
    for value in values:
        for mode in antenna_modes:
            for strat in strategies:
                label = strat if len(antenna_modes) == 1 else f"{strat}/{mode}"
                for rep in range(repetitions):
                    sc = _derive(template, variable, value, strat, mode, seeds[rep])
                    jobs.append((value, label, sc))

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda j: run(j[2])[0], jobs))
    else:
        results = [run(sc)[0] for _, _, sc in jobs]

    points: list[SweepPoint] = []
    by_cell: dict[tuple, list[RunMetrics]] = {}
    order: list[tuple] = []
    for (value, label, _), metrics in zip(jobs, results):
        key = (value, label)
        if key not in by_cell:
            by_cell[key] = []
            order.append(key)
        by_cell[key].append(metrics)
    for value, label in order:
        ms = by_cell[(value, label)]
        ees = np.array([m.avg_ee_bits_per_joule for m in ms])
        points.append(
            SweepPoint(
                variable=variable,
                value=value,
                strategy=label,
                mean_ee=float(ees.mean()),
                std_ee=float(ees.std(ddof=1)) if len(ees) > 1 else 0.0,
                mean_reconfigs=float(np.mean([m.reconfig_count for m in ms])),
                mean_throughput=float(np.mean([m.throughput_bps for m in ms])),
                repetitions=len(ms),
                ee_samples=tuple(float(x) for x in ees),
            )
        )
    return points
