"""Propagation, fading and decode abstractions for the HS-PDSCH link.

The downlink SINR after despreading follows the usual single-cell-plus-
background form

    sinr = SF * P_hs * g / ((1 - alpha) * I_or + I_oc + N0 * W)

with g the instantaneous link gain (path gain times aggregate fading
power, receive-combined). The denominator is treated as constant over a
run, which makes the SINR exactly linear in transmit power in dB; the
controller's power-shift arithmetic relies on that.

Fading is per-tap Rayleigh with a Jakes Doppler spectrum. Trajectories
are synthesised in the frequency domain (white complex Gaussians shaped
by the per-bin Jakes energies, then an inverse FFT), so the marginals
are exactly complex Gaussian at any sample count, and tap energy across
the synthesis block matches the power-delay profile in expectation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT_M_S",
    "PA3_DELAYS_NS",
    "PA3_POWERS_DB",
    "pa3_profile",
    "path_gain_db",
    "ChannelParams",
    "make_channel",
    "doppler_hz",
    "bessel_j0",
    "synth_fading",
    "ChannelState",
    "new_channel_state",
    "step_fading",
    "aggregate_fading_power",
    "hs_sinr_db",
    "decode",
]

SPEED_OF_LIGHT_M_S = 299_792_458.0

# ITU Pedestrian A: tap delays and relative powers
PA3_DELAYS_NS = (0.0, 110.0, 190.0, 410.0)
PA3_POWERS_DB = (0.0, -9.7, -19.2, -22.8)


def pa3_profile() -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Pedestrian-A delays (ns) and normalised linear tap weights."""
    lin = np.array([10.0 ** (p / 10.0) for p in PA3_POWERS_DB])
    lin /= lin.sum()
    return PA3_DELAYS_NS, tuple(float(w) for w in lin)


def path_gain_db(distance_m: float) -> float:
    """Distance-dependent gain in dB (negative), urban macro exponent.

    Loss model: 128.1 + 37.6 * log10(d_km).
    """
    if distance_m <= 0.0:
        raise ValueError("distance must be > 0")
    return -(128.1 + 37.6 * np.log10(distance_m / 1000.0))


@dataclass(frozen=True)
class ChannelParams:
    """Static link geometry and interference levels.

    i_or_w is the total received own-cell power and i_oc_w the received
    other-cell interference, both in watts at the terminal. They are
    held constant over a run; only the numerator of the SINR fades.
    """

    i_or_w: float
    i_oc_w: float
    sf: int = 16
    alpha: float = 0.9  # own-cell orthogonality, 1 = perfectly orthogonal
    n0_w_per_hz: float = 3.1623e-20
    bandwidth_hz: float = 5e6
    speed_kmh: float = 3.0
    carrier_hz: float = 2e9
    distance_m: float = 1000.0
    pdp_delays_ns: tuple[float, ...] = PA3_DELAYS_NS
    pdp_weights: tuple[float, ...] = field(default_factory=lambda: pa3_profile()[1])

    def __post_init__(self):
        if self.sf < 1:
            raise ValueError("spreading factor must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.i_or_w < 0.0 or self.i_oc_w < 0.0:
            raise ValueError("interference powers must be >= 0")
        if self.n0_w_per_hz <= 0.0 or self.bandwidth_hz <= 0.0:
            raise ValueError("noise density and bandwidth must be > 0")
        if self.speed_kmh < 0.0:
            raise ValueError("speed must be >= 0")
        if self.carrier_hz <= 0.0:
            raise ValueError("carrier frequency must be > 0")
        if self.distance_m <= 0.0:
            raise ValueError("distance must be > 0")
        w = np.asarray(self.pdp_weights, dtype=float)
        if len(w) == 0 or np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("pdp weights must be non-negative and sum to 1")
        if len(self.pdp_delays_ns) != len(self.pdp_weights):
            raise ValueError("pdp delays and weights must have equal length")

    @property
    def pdp(self) -> tuple[tuple[float, float], ...]:
        """(delay_ns, weight) pairs of the power-delay profile."""
        return tuple(zip(self.pdp_delays_ns, self.pdp_weights))

    @property
    def noise_w(self) -> float:
        return self.n0_w_per_hz * self.bandwidth_hz

    @property
    def denominator_w(self) -> float:
        """Constant interference-plus-noise term of the SINR."""
        return (1.0 - self.alpha) * self.i_or_w + self.i_oc_w + self.noise_w

    @property
    def path_gain_lin(self) -> float:
        return 10.0 ** (path_gain_db(self.distance_m) / 10.0)


def make_channel(
    distance_m: float,
    i_or_dbm: float,
    geometry_db: float = 5.0,
    alpha: float = 0.9,
    noise_figure_db: float = 9.0,
    speed_kmh: float = 3.0,
    **kwargs,
) -> ChannelParams:
    """Build ChannelParams from a geometry factor.

    geometry_db is I_or / (I_oc + N0 * W) in dB; the other-cell power is
    derived from it and clipped at zero when the requested geometry is
    already noise-limited.
    """
    i_or_w = 10.0 ** ((i_or_dbm - 30.0) / 10.0)
    n0 = 3.9811e-21 * 10.0 ** (noise_figure_db / 10.0)  # -174 dBm/Hz + NF
    bandwidth = kwargs.pop("bandwidth_hz", 5e6)
    denom_target = i_or_w / 10.0 ** (geometry_db / 10.0)
    i_oc_w = max(0.0, denom_target - n0 * bandwidth)
    return ChannelParams(
        i_or_w=i_or_w,
        i_oc_w=i_oc_w,
        alpha=alpha,
        n0_w_per_hz=n0,
        bandwidth_hz=bandwidth,
        speed_kmh=speed_kmh,
        distance_m=distance_m,
        **kwargs,
    )


def doppler_hz(speed_kmh: float, carrier_hz: float) -> float:
    return (speed_kmh / 3.6) * carrier_hz / SPEED_OF_LIGHT_M_S


def bessel_j0(x: float) -> float:
    """J0 for real scalar x; the fading autocorrelation kernel.

    Power series below |x| = 12 (terms fall off factorially there),
    Hankel's large-argument form above. Keeps the runtime free of a
    scipy dependency; agrees with scipy.special.j0 to ~1e-12.
    """
    ax = abs(float(x))
    if ax < 12.0:
        q = -0.25 * ax * ax
        term, total = 1.0, 1.0
        for k in range(1, 40):
            term *= q / (k * k)
            total += term
            if abs(term) < 1e-17 * abs(total):
                break
        return total
    # two-term asymptotic expansion
    z = 8.0 / ax
    p = 1.0 - 4.5 * z * z / 64.0
    q = -z / 8.0 * (1.0 - 37.5 * z * z / 384.0)
    phase = ax - 0.25 * np.pi
    return float(np.sqrt(2.0 / (np.pi * ax)) * (p * np.cos(phase) - q * np.sin(phase)))


def _jakes_bin_energies(n_fft: int, dt_s: float, f_d: float) -> np.ndarray:
    """Energy per FFT bin under the Jakes spectrum, summing to 1.

    Uses the closed-form spectral CDF (arcsine), so the band-edge
    singularities carry their exact integrated mass.
    """
    freqs = np.fft.fftfreq(n_fft, d=dt_s)
    df = 1.0 / (n_fft * dt_s)
    lo = np.clip(freqs - 0.5 * df, -f_d, f_d)
    hi = np.clip(freqs + 0.5 * df, -f_d, f_d)
    energies = (np.arcsin(hi / f_d) - np.arcsin(lo / f_d)) / np.pi
    # guard against a fully contained band (f_d < df/2): put all mass at DC
    total = energies.sum()
    if total <= 0.0:
        energies = np.zeros(n_fft)
        energies[0] = 1.0
        return energies
    return energies / total


def synth_fading(
    n_procs: int,
    n_steps: int,
    dt_s: float,
    f_d: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Unit-power Rayleigh trajectories, shape (n_procs, n_steps).

    Each row is an independent complex Gaussian process with Jakes
    Doppler autocorrelation J0(2 pi f_d tau). Zero Doppler degenerates
    to a constant draw per process.
    """
    if n_steps < 1 or n_procs < 1:
        raise ValueError("n_procs and n_steps must be >= 1")
    if dt_s <= 0.0:
        raise ValueError("dt_s must be > 0")
    if f_d < 0.0:
        raise ValueError("doppler must be >= 0")
    if f_d * dt_s < 1e-12:
        # static channel: one draw, constant over the block
        g = (rng.standard_normal((n_procs, 1)) + 1j * rng.standard_normal((n_procs, 1)))
        g *= np.sqrt(0.5)
        return np.broadcast_to(g, (n_procs, n_steps)).copy()
    n_fft = 4096
    while n_fft < n_steps:
        n_fft *= 2
    energies = _jakes_bin_energies(n_fft, dt_s, f_d)
    z = rng.standard_normal((n_procs, n_fft)) + 1j * rng.standard_normal((n_procs, n_fft))
    z *= np.sqrt(0.5)
    spectrum = z * (n_fft * np.sqrt(energies))[None, :]
    x = np.fft.ifft(spectrum, axis=1)
    return np.ascontiguousarray(x[:, :n_steps])


@dataclass
class ChannelState:
    """Mutable fading state: per-tap matrix gains plus a sample cursor.

    gains has shape (n_taps, n_rx, n_tx); tap k carries mean power
    pdp_weights[k] per antenna pair.
    """

    params: ChannelParams
    n_rx: int
    n_tx: int
    time_s: float = 0.0
    gains: np.ndarray | None = None
    _block: np.ndarray | None = field(default=None, repr=False)
    _pos: int = field(default=0, repr=False)
    _dt_s: float = field(default=0.0, repr=False)

    @property
    def n_taps(self) -> int:
        return len(self.params.pdp_weights)


def new_channel_state(
    params: ChannelParams, rng: np.random.Generator, n_rx: int = 1, n_tx: int = 1
) -> ChannelState:
    state = ChannelState(params=params, n_rx=n_rx, n_tx=n_tx)
    _refill(state, dt_s=2e-3, rng=rng, n_steps=4096)
    _load_column(state)
    return state


def _refill(state: ChannelState, dt_s: float, rng: np.random.Generator, n_steps: int):
    params = state.params
    n_procs = state.n_taps * state.n_rx * state.n_tx
    f_d = doppler_hz(params.speed_kmh, params.carrier_hz)
    block = synth_fading(n_procs, n_steps, dt_s, f_d, rng)
    scale = np.sqrt(np.asarray(params.pdp_weights))
    block = block.reshape(state.n_taps, state.n_rx, state.n_tx, n_steps)
    block *= scale[:, None, None, None]
    state._block = block
    state._pos = 0
    state._dt_s = dt_s


def _load_column(state: ChannelState):
    state.gains = state._block[:, :, :, state._pos]


def step_fading(
    state: ChannelState, dt_s: float, rng: np.random.Generator
) -> ChannelState:
    """Advance the fading by one step of dt_s and return the state.

    The state is advanced in place; trajectories are drawn lazily in
    blocks from rng. Changing dt_s mid-stream restarts the spectral
    block at the new sampling interval.
    """
    if dt_s <= 0.0:
        raise ValueError("dt_s must be > 0")
    if state._block is None or dt_s != state._dt_s:
        _refill(state, dt_s=dt_s, rng=rng, n_steps=4096)
    state._pos += 1
    if state._pos >= state._block.shape[-1]:
        _refill(state, dt_s=dt_s, rng=rng, n_steps=state._block.shape[-1])
        state._pos = 0
    state.time_s += dt_s
    _load_column(state)
    return state


def aggregate_fading_power(state: ChannelState) -> float:
    """Receive-combined aggregate fading power (MRC across rx antennas).

    Sums |h|^2 over taps and receive antennas for single-stream use;
    unit mean for one rx antenna, n_rx mean with combining.
    """
    if state.n_tx != 1:
        raise ValueError("aggregate power is defined for single-stream states")
    return float(np.sum(np.abs(state.gains) ** 2))


def hs_sinr_db(p_hs_w: float, state, params: ChannelParams) -> float:
    """Post-despreading SINR of the HS-PDSCH in dB.

    state is either a ChannelState, in which case the link gain is the
    path gain times the receive-combined aggregate fading power, or a
    bare number already holding that product.
    """
    if p_hs_w < 0.0:
        raise ValueError("transmit power must be >= 0")
    if isinstance(state, ChannelState):
        g_lin = params.path_gain_lin * aggregate_fading_power(state)
    else:
        g_lin = float(state)
    if g_lin < 0.0:
        raise ValueError("link gain must be >= 0")
    num = params.sf * p_hs_w * g_lin
    if num == 0.0:
        return -np.inf
    return 10.0 * np.log10(num / params.denominator_w)


def decode(sinr_db: float, used_cqi: int, table, rng=None, margin_db: float = 0.0) -> bool:
    """Threshold decode: ACK iff the effective SINR clears the MCS threshold.

    Deterministic given sinr and margin; rng is accepted for signature
    stability with soft decode models but unused here.
    """
    if used_cqi < 1:
        raise ValueError("decode needs a served MCS index >= 1")
    return bool(sinr_db >= table.threshold(used_cqi) - margin_db)
