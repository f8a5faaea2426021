"""Codebook beam selection at the BS and at each reflecting panel.

The BS transmit codebook is the n_b-point DFT of its array, scaled to unit
power. Each panel runs two independent DFT codebooks (2^b1 horizontal,
2^b2 vertical patterns); a panel configuration is the Kronecker product of
one pattern from each, so a joint search decomposes exactly into two
one-dimensional searches.

For a reflection i -> j -> r the achieved amplitude is

    |(e(c*phi1, m1) kron e(c*phi2, m2))^H theta|,   c = 2 d_i / wavelength,

with phi1/phi2 the differences of the departure and arrival direction
cosines along the panel axes. In continuous mode theta equals that target
pattern itself and the amplitude is exactly m1*m2; in discrete mode each
axis picks its best Dirichlet peak (ties resolved to the lowest codeword
index, matching a row-major joint search).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import steering_vector
from .scene import (
    LosMap,
    Scenario,
    bs_response_to,
    build_los_map,
    channel_bs_irs,
    channel_irs_irs,
    channel_irs_user,
    compute_angles,
)

MODES = ("discrete", "continuous")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@lru_cache(maxsize=64)
def dft_codebook(bits: int, n: int) -> np.ndarray:
    """(2^bits, n) matrix of unit-modulus steering patterns on a uniform grid."""
    size = 2 ** bits
    return np.vstack([steering_vector(2.0 * i / size, n) for i in range(size)])


@lru_cache(maxsize=16)
def bs_codebook(n_b: int) -> np.ndarray:
    """(n_b, n_b) unit-power BS transmit codebook."""
    return np.vstack(
        [steering_vector(2.0 * i / n_b, n_b) for i in range(n_b)]
    ) / math.sqrt(n_b)


def best_codeword(codebook: np.ndarray, target: np.ndarray) -> tuple[int, float]:
    """Index and amplitude of the codeword maximising |<codeword, target>|.

    Ties go to the lowest index (np.argmax semantics).
    """
    amps = np.abs(codebook.conj() @ target)
    idx = int(np.argmax(amps))
    return idx, float(amps[idx])


@dataclass(frozen=True)
class ActiveChoice:
    """BS precoder for one first-hop link (unit power, no phase offset)."""

    w: np.ndarray
    index: int | None
    amplitude: float


def search_active(scn: Scenario, j: int, mode: str = "discrete") -> ActiveChoice:
    """Best transmit beam toward first-hop panel j."""
    _check_mode(mode)
    h = bs_response_to(scn, j)
    if mode == "continuous":
        w = h / np.linalg.norm(h)
        return ActiveChoice(w=w, index=None, amplitude=float(abs(np.vdot(w, h))))
    book = bs_codebook(scn.n_b)
    idx, amp = best_codeword(book, h)
    return ActiveChoice(w=book[idx].copy(), index=idx, amplitude=amp)


@dataclass(frozen=True)
class PassiveChoice:
    """Panel configuration for one reflection, with its achieved amplitude."""

    theta: np.ndarray
    index1: int | None
    index2: int | None
    amplitude: float


def search_passive(scn: Scenario, i: int, j: int, r: int, mode: str = "discrete") -> PassiveChoice:
    """Best configuration of panel j for the reflection i -> j -> r."""
    _check_mode(mode)
    ang = compute_angles(scn, i, j, r)
    c = 2.0 * scn.d_i / scn.wavelength
    t1 = steering_vector(c * ang.phi1, scn.m1)
    t2 = steering_vector(c * ang.phi2, scn.m2)
    if mode == "continuous":
        theta = np.kron(t1, t2)
        target = theta
        return PassiveChoice(
            theta=theta,
            index1=None,
            index2=None,
            amplitude=float(abs(np.vdot(target, theta))),
        )
    i1, a1 = best_codeword(dft_codebook(scn.b1, scn.m1), t1)
    i2, a2 = best_codeword(dft_codebook(scn.b2, scn.m2), t2)
    theta = np.kron(dft_codebook(scn.b1, scn.m1)[i1], dft_codebook(scn.b2, scn.m2)[i2])
    return PassiveChoice(theta=theta, index1=i1, index2=i2, amplitude=a1 * a2)


def passive_amplitude(scn: Scenario, i: int, j: int, r: int, mode: str = "discrete") -> float:
    """Achieved reflection amplitude at panel j for i -> j -> r (no pattern)."""
    _check_mode(mode)
    if mode == "continuous":
        return float(scn.m)
    ang = compute_angles(scn, i, j, r)
    c = 2.0 * scn.d_i / scn.wavelength
    _, a1 = best_codeword(dft_codebook(scn.b1, scn.m1), steering_vector(c * ang.phi1, scn.m1))
    _, a2 = best_codeword(dft_codebook(scn.b2, scn.m2), steering_vector(c * ang.phi2, scn.m2))
    return a1 * a2


@dataclass
class GainTable:
    """Reflection amplitudes for every node triple the routing graph can use.

    Keyed by (i, j, r): signal arrives at panel j from i and leaves toward r.
    Each entry holds the achieved amplitude and the two codeword indices
    (None in continuous mode). Built once, shared by graph weighting and
    evaluation; can be written to and read back from a text file.
    """

    mode: str
    entries: dict[tuple[int, int, int], tuple[float, int | None, int | None]]

    def amplitude(self, i: int, j: int, r: int) -> float:
        return self.entries[(i, j, r)][0]

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(f"# mode {self.mode}\n")
            for (i, j, r), (amp, i1, i2) in sorted(self.entries.items()):
                a = "-" if i1 is None else str(i1)
                b = "-" if i2 is None else str(i2)
                fh.write(f"{i} {j} {r} {amp!r} {a} {b}\n")

    @classmethod
    def load(cls, path: str) -> "GainTable":
        entries: dict[tuple[int, int, int], tuple[float, int | None, int | None]] = {}
        mode = "discrete"
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line.startswith("#"):
                    mode = line.split()[-1]
                    continue
                if not line:
                    continue
                i, j, r, amp, a, b = line.split()
                entries[(int(i), int(j), int(r))] = (
                    float(amp),
                    None if a == "-" else int(a),
                    None if b == "-" else int(b),
                )
        return cls(mode=mode, entries=entries)


def build_gain_table(scn: Scenario, los: LosMap | None = None, mode: str = "discrete") -> GainTable:
    """Amplitudes for all triples (i, j, r) reachable in the routing graph:
    i -> j a BS-panel or nearer-to-farther panel link, j -> r a panel or user
    link, all line-of-sight."""
    _check_mode(mode)
    if los is None:
        los = build_los_map(scn)
    dist0 = {i: scn.distance(0, i) for i in scn.irs_ids}
    entries: dict[tuple[int, int, int], tuple[float, int | None, int | None]] = {}
    for j in scn.irs_ids:
        ins = [0] if los.is_los(0, j) else []
        ins += [i for i in scn.irs_ids if los.is_los(i, j) and dist0[j] > dist0[i]]
        outs = [r for r in scn.irs_ids if los.is_los(j, r) and dist0[r] > dist0[j]]
        outs += [u for u in scn.user_ids if los.is_los(j, u)]
        for i in ins:
            for r in outs:
                if mode == "continuous":
                    entries[(i, j, r)] = (float(scn.m), None, None)
                else:
                    choice = search_passive(scn, i, j, r, mode)
                    entries[(i, j, r)] = (choice.amplitude, choice.index1, choice.index2)
    return GainTable(mode=mode, entries=entries)


@dataclass(frozen=True)
class RouteBeams:
    """All beams along one BS -> panels -> user route."""

    path: tuple[int, ...]
    w: np.ndarray                       # BS precoder incl. phase compensation
    thetas: dict[int, np.ndarray]       # panel id -> configuration vector
    active: ActiveChoice
    passives: dict[int, PassiveChoice]
    hop_distances: tuple[float, ...]
    phase_offset: float                 # phase advance applied to w
    mode: str

    @property
    def total_distance(self) -> float:
        return float(sum(self.hop_distances))

    def amplitude_product(self) -> float:
        amp = self.active.amplitude
        for p in self.passives.values():
            amp *= p.amplitude
        return amp


def route_hops(scn: Scenario, path: tuple[int, ...]) -> tuple[float, ...]:
    return tuple(scn.distance(a, b) for a, b in zip(path[:-1], path[1:]))


def configure_route(scn: Scenario, path: tuple[int, ...], mode: str = "discrete") -> RouteBeams:
    """Select all beams for a route (0, j_1, ..., j_n, user).

    The BS precoder carries a phase advance of 2*pi/lambda times the summed
    hop length, cancelling the propagation phases of the route; with
    continuous beams the end-to-end channel becomes real positive.
    """
    _check_mode(mode)
    if len(path) < 3 or path[0] != 0:
        raise ValueError(f"route must read (0, panels..., user), got {path}")
    if scn.kind(path[-1]) != "user":
        raise ValueError(f"route must end at a user, got node {path[-1]}")
    for j in path[1:-1]:
        if scn.kind(j) != "irs":
            raise ValueError(f"interior route node {j} is not a panel")

    active = search_active(scn, path[1], mode)
    passives: dict[int, PassiveChoice] = {}
    thetas: dict[int, np.ndarray] = {}
    for prev, j, nxt in zip(path[:-2], path[1:-1], path[2:]):
        choice = search_passive(scn, prev, j, nxt, mode)
        passives[j] = choice
        thetas[j] = choice.theta
    hops = route_hops(scn, path)
    phase = 2.0 * math.pi * sum(hops) / scn.wavelength
    w = active.w * np.exp(1j * phase)
    return RouteBeams(
        path=tuple(path),
        w=w,
        thetas=thetas,
        active=active,
        passives=passives,
        hop_distances=hops,
        phase_offset=phase,
        mode=mode,
    )


def route_gain(scn: Scenario, beams: RouteBeams) -> float:
    """Closed-form end-to-end power gain of a configured route."""
    n_reflect = len(beams.path) - 2
    dist_sq = 1.0
    for d in beams.hop_distances:
        dist_sq *= d * d
    return scn.beta ** (n_reflect + 1) * beams.amplitude_product() ** 2 / dist_sq


def route_gain_idealized(scn: Scenario, path: tuple[int, ...], mode: str = "discrete") -> float:
    """Route gain with the first hop replaced by its favorable-propagation
    value n_b (exact when the first-hop beams are mutually orthogonal)."""
    _check_mode(mode)
    n_reflect = len(path) - 2
    amp_sq = float(scn.n_b)
    for prev, j, nxt in zip(path[:-2], path[1:-1], path[2:]):
        amp_sq *= passive_amplitude(scn, prev, j, nxt, mode) ** 2
    dist_sq = 1.0
    for d in route_hops(scn, path):
        dist_sq *= d * d
    return scn.beta ** (n_reflect + 1) * amp_sq / dist_sq


def cascade_response(scn: Scenario, beams: RouteBeams) -> complex:
    """End-to-end complex channel of a configured route, by explicit matrix
    products through every hop (no closed form)."""
    path = beams.path
    v = channel_bs_irs(scn, path[1]) @ beams.w
    v = beams.thetas[path[1]] * v
    for prev, j in zip(path[1:-2], path[2:-1]):
        v = channel_irs_irs(scn, prev, j) @ v
        v = beams.thetas[j] * v
    return complex(channel_irs_user(scn, path[-2], path[-1]) @ v)
