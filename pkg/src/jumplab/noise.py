"""Frozen driving noise: a Brownian path plus the atoms of a Poisson random measure.

Every draw is keyed by ``(seed, stream name)`` so the Brownian part, the
Poisson part and the Brownian-bridge fill-in at atom times never share
random numbers. Two solvers fed the same :class:`NoiseRealization` see
exactly the same W and the same atoms.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate, special

MEASURE_KINDS = ("lebesgue_on_interval", "stable_symmetric", "stable_positive")


class TruncationError(ValueError):
    """Raised when a requested jump window carries infinite intensity mass."""


def stream_rng(seed: int, stream: str) -> np.random.Generator:
    """Generator for one named sub-stream of a root seed."""
    key = zlib.crc32(stream.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(key,))))


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimeGrid:
    t_end: float
    base_step: float
    knots: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        if self.base_step <= 0:
            raise ValueError("base_step must be positive")
        if k.ndim != 1 or k.size == 0 or k[0] != 0.0 or k[-1] != self.t_end:
            raise ValueError("knots must start at 0 and end at t_end")
        if np.any(np.diff(k) <= 0):
            raise ValueError("knots must be strictly increasing")
        object.__setattr__(self, "knots", _readonly(k.copy()))

    @classmethod
    def uniform(cls, t_end: float, base_step: float) -> "TimeGrid":
        """Knots ``0, h, 2h, ...`` closed off at ``t_end`` (last step may be shorter)."""
        t_end = float(t_end)
        if t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if t_end == 0.0:
            return cls(0.0, float(base_step), np.zeros(1))
        n = max(1, int(math.ceil(t_end / base_step - 1e-9)))
        knots = np.arange(n + 1, dtype=float) * base_step
        knots[-1] = t_end
        return cls(t_end, float(base_step), knots)

    def __len__(self):
        return self.knots.size


@dataclass(frozen=True)
class LevyMeasure:
    """Jump intensity ``lambda(dz)`` restricted to ``z_min <= |z| <= z_max``.

    ``stable_positive`` lives on ``z > 0`` only. Lebesgue windows may start
    at ``z_min = 0``; stable windows may not (the mass near 0 is infinite).
    """

    kind: str
    z_min: float
    z_max: float
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.z_min < 0 or self.z_max < self.z_min:
            raise ValueError("need 0 <= z_min <= z_max")
        if self.kind == "lebesgue_on_interval":
            if math.isinf(self.z_max):
                raise TruncationError("Lebesgue window needs a finite z_max")
            return
        if self.alpha is None or not 0.0 < self.alpha < 2.0:
            raise ValueError("stable measures need alpha in (0, 2)")
        if self.kind == "stable_positive" and not 1.0 < self.alpha < 2.0:
            raise ValueError("stable_positive needs alpha in (1, 2)")
        if self.z_min == 0.0 and self.z_max > 0.0:
            raise TruncationError(
                "stable measure has infinite mass near 0: set z_min > 0 (small-jump truncation)"
            )

    @property
    def sides(self) -> int:
        return 1 if self.kind == "stable_positive" else 2

    def density(self, z):
        """Density of lambda with respect to Lebesgue measure (window not applied)."""
        if self.kind == "lebesgue_on_interval":
            return np.ones_like(np.asarray(z, dtype=float))
        return np.abs(z) ** (-self.alpha - 1.0)

    def _radial_moment(self, p: float) -> float:
        # int_{z_min}^{z_max} r^p * density(r) dr
        lo, hi = self.z_min, self.z_max
        if lo == hi:
            return 0.0
        if self.kind == "lebesgue_on_interval":
            return (hi ** (p + 1.0) - lo ** (p + 1.0)) / (p + 1.0)
        e = p - self.alpha
        if e == 0.0:
            return math.log(hi / lo)
        top = 0.0 if (math.isinf(hi) and e < 0) else hi**e
        return (top - lo**e) / e

    def mass(self) -> float:
        """Total lambda-mass of the window."""
        return self.sides * self._radial_moment(0.0)

    def first_moment(self) -> float:
        """``int z lambda(dz)`` over the window (zero for symmetric windows)."""
        if self.sides == 2:
            return 0.0
        if self.alpha is not None and self.alpha <= 1.0 and math.isinf(self.z_max):
            return math.inf
        return self._radial_moment(1.0)

    def pieces(self) -> list[tuple[float, float]]:
        """The window as a list of closed z-intervals."""
        lo, hi = self.z_min, self.z_max
        if lo == hi:
            return []
        if self.sides == 1:
            return [(lo, hi)]
        if lo == 0.0:
            return [(-hi, hi)]
        return [(-hi, -lo), (lo, hi)]

    def describe(self) -> dict:
        return {"kind": self.kind, "z_min": self.z_min, "z_max": self.z_max, "alpha": self.alpha}


@dataclass(frozen=True, eq=False)
class BrownianPath:
    grid: TimeGrid
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class PoissonAtoms:
    times: np.ndarray
    marks: np.ndarray
    measure: LevyMeasure
    t_end: float

    def __len__(self):
        return self.times.size

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.marks.tolist()))


def sample_brownian(grid: TimeGrid, seed: int) -> BrownianPath:
    rng = stream_rng(seed, "brownian")
    dt = np.diff(grid.knots)
    w = np.zeros(grid.knots.size)
    if dt.size:
        w[1:] = np.cumsum(np.sqrt(dt) * rng.standard_normal(dt.size))
    return BrownianPath(grid, _readonly(w))


def _sample_marks(measure: LevyMeasure, n: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(n)
    lo, hi = measure.z_min, measure.z_max
    if measure.kind == "lebesgue_on_interval":
        r = lo + u * (hi - lo)
    else:
        a = measure.alpha
        top = 0.0 if math.isinf(hi) else hi ** (-a)
        r = (lo ** (-a) - u * (lo ** (-a) - top)) ** (-1.0 / a)
    if measure.sides == 2:
        r = np.where(rng.random(n) < 0.5, -r, r)
    return r


def sample_poisson_atoms(measure: LevyMeasure, t_end: float, seed: int) -> PoissonAtoms:
    """Atoms of a Poisson random measure with intensity ``ds * lambda(dz)`` on the window."""
    mass = measure.mass()
    if not math.isfinite(mass):
        raise TruncationError("window has infinite lambda-mass")
    rng = stream_rng(seed, "poisson")
    n = int(rng.poisson(mass * t_end)) if mass > 0 and t_end > 0 else 0
    times = t_end * (1.0 - rng.random(n))  # in (0, t_end]
    order = np.argsort(times, kind="stable")
    marks = _sample_marks(measure, n, rng)
    return PoissonAtoms(_readonly(times[order]), _readonly(marks[order]), measure, float(t_end))


def atoms_from_list(measure: LevyMeasure, t_end: float, atoms: Iterable[tuple[float, float]]) -> PoissonAtoms:
    """Hand-built atom list (tests, forced big jumps). Order of equal times is kept."""
    pairs = list(atoms)
    times = np.array([s for s, _ in pairs], dtype=float)
    marks = np.array([z for _, z in pairs], dtype=float)
    if np.any((times <= 0) | (times > t_end)):
        raise ValueError("atom times must lie in (0, t_end]")
    order = np.argsort(times, kind="stable")
    return PoissonAtoms(_readonly(times[order]), _readonly(marks[order]), measure, float(t_end))


@dataclass(frozen=True, eq=False)
class NoiseRealization:
    """One frozen draw of (W, mu) plus its jump-adapted merged grid.

    ``times``/``w_merged`` interleave base knots and atom times; at a time
    shared by a base knot and an atom the base knot comes first, and tied
    atoms keep draw order (zero-length steps). ``bridge`` holds W at the
    atom times, filled in by a Brownian bridge from its own stream.
    """

    seed: int
    w: BrownianPath
    atoms: PoissonAtoms
    bridge: np.ndarray
    times: np.ndarray = field(init=False)
    w_merged: np.ndarray = field(init=False)
    atom_index: np.ndarray = field(init=False)

    def __post_init__(self):
        knots = self.w.grid.knots
        m = len(self.atoms)
        t = np.concatenate([knots, self.atoms.times])
        order = np.argsort(t, kind="stable")
        idx = np.concatenate([np.full(knots.size, -1, dtype=np.int64), np.arange(m, dtype=np.int64)])
        wv = np.concatenate([self.w.values, np.asarray(self.bridge, dtype=float)])
        object.__setattr__(self, "times", _readonly(t[order]))
        object.__setattr__(self, "w_merged", _readonly(wv[order]))
        object.__setattr__(self, "atom_index", _readonly(idx[order]))

    @property
    def grid(self) -> TimeGrid:
        return self.w.grid

    @property
    def measure(self) -> LevyMeasure:
        return self.atoms.measure

    @property
    def t_end(self) -> float:
        return self.w.grid.t_end

    def increments(self):
        """Per-step arrays ``(dt, dw, is_atom, z)`` over the merged grid."""
        dt = np.diff(self.times)
        dw = np.diff(self.w_merged)
        ai = self.atom_index[1:]
        is_atom = (ai >= 0).astype(np.uint8)
        z = np.where(ai >= 0, self.atoms.marks[np.maximum(ai, 0)] if len(self.atoms) else 0.0, 0.0)
        return dt, dw, is_atom, z

    def to_text(self) -> str:
        g = self.w.grid
        ms = self.measure
        head = (
            f"jumplab-noise v1 seed={self.seed} t_end={g.t_end!r} base_step={g.base_step!r} "
            f"kind={ms.kind} z_min={ms.z_min!r} z_max={ms.z_max!r} alpha={ms.alpha!r} "
            f"knots={g.knots.size} atoms={len(self.atoms)}"
        )
        lines = [head]
        lines += [f"K {t!r} {w!r}" for t, w in zip(g.knots.tolist(), self.w.values.tolist())]
        lines += [
            f"A {s!r} {z!r} {w!r}"
            for s, z, w in zip(self.atoms.times.tolist(), self.atoms.marks.tolist(), self.bridge.tolist())
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "NoiseRealization":
        lines = text.strip("\n").split("\n")
        fields = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
        alpha = None if fields["alpha"] == "None" else float(fields["alpha"])
        measure = LevyMeasure(fields["kind"], float(fields["z_min"]), float(fields["z_max"]), alpha)
        kt, kw, at, az, aw = [], [], [], [], []
        for line in lines[1:]:
            tag, *vals = line.split()
            if tag == "K":
                kt.append(float(vals[0]))
                kw.append(float(vals[1]))
            elif tag == "A":
                at.append(float(vals[0]))
                az.append(float(vals[1]))
                aw.append(float(vals[2]))
            else:
                raise ValueError(f"bad noise record {line!r}")
        t_end = float(fields["t_end"])
        grid = TimeGrid(t_end, float(fields["base_step"]), np.array(kt))
        atoms = PoissonAtoms(_readonly(np.array(at)), _readonly(np.array(az)), measure, t_end)
        return cls(int(fields["seed"]), BrownianPath(grid, _readonly(np.array(kw))), atoms, _readonly(np.array(aw)))


def _bridge_values(path: BrownianPath, atom_times: np.ndarray, seed: int) -> np.ndarray:
    knots, w = path.grid.knots, path.values
    xi = stream_rng(seed, "bridge").standard_normal(atom_times.size)
    out = np.empty(atom_times.size)
    prev_cell, tl, wl = -1, 0.0, 0.0
    for j, s in enumerate(atom_times.tolist()):
        i = int(np.searchsorted(knots, s, side="left"))
        if i < knots.size and knots[i] == s:
            out[j] = w[i]
            prev_cell = -1
            continue
        cell = i - 1
        if cell != prev_cell:
            tl, wl = knots[cell], w[cell]
            prev_cell = cell
        tr, wr = knots[i], w[i]
        if s == tl:
            out[j] = wl
            continue
        mean = wl + (s - tl) / (tr - tl) * (wr - wl)
        var = (s - tl) * (tr - s) / (tr - tl)
        out[j] = mean + math.sqrt(var) * xi[j]
        tl, wl = s, out[j]
    return _readonly(out)


def realize(grid: TimeGrid, measure: LevyMeasure, seed: int, atoms: PoissonAtoms | None = None) -> NoiseRealization:
    """Sample (or adopt ``atoms``) and freeze a full noise realization."""
    w = sample_brownian(grid, seed)
    if atoms is None:
        atoms = sample_poisson_atoms(measure, grid.t_end, seed)
    return NoiseRealization(int(seed), w, atoms, _bridge_values(w, atoms.times, seed))


# --- stable-law diagnostics -------------------------------------------------

DEFAULT_FREQUENCIES = (0.5, 1.0, 2.0)


def truncated_exponent(measure: LevyMeasure, theta: float) -> complex:
    """``int (e^{i theta z} - 1 - i theta z) lambda(dz)`` over the window, by quadrature."""
    a = measure.alpha
    re = im = 0.0
    for lo, hi in measure.pieces():
        sgn = 1.0 if lo >= 0 else -1.0
        rlo, rhi = (lo, hi) if sgn > 0 else (-hi, -lo)
        # split at r = 1 so the weighted QAWO/QAWF rules see a tame weight
        segs = [(rlo, min(rhi, 1.0)), (max(rlo, 1.0), rhi)]
        for s0, s1 in segs:
            if s1 <= s0:
                continue
            w = lambda r: r ** (-a - 1.0)
            if math.isinf(s1):
                c = integrate.quad(w, s0, s1, weight="cos", wvar=theta)[0]
                s = integrate.quad(w, s0, s1, weight="sin", wvar=theta)[0]
            else:
                c = integrate.quad(w, s0, s1, weight="cos", wvar=theta, limit=500)[0]
                s = integrate.quad(w, s0, s1, weight="sin", wvar=theta, limit=500)[0]
            m0 = (s0 ** (-a) - (0.0 if math.isinf(s1) else s1 ** (-a))) / a
            re += c - m0
            if measure.sides == 1:
                # symmetric windows: odd parts cancel exactly
                m1 = ((0.0 if math.isinf(s1) else s1 ** (1.0 - a)) - s0 ** (1.0 - a)) / (1.0 - a)
                im += sgn * (s - theta * m1)
    return complex(re, im)


def stable_exponent(measure: LevyMeasure, theta: float) -> complex:
    """Untruncated exponent of the compensated stable measure (closed form)."""
    a = measure.alpha
    if measure.kind == "stable_positive":
        return complex(special.gamma(-a) * (-1j * theta) ** a)
    if a == 1.0:
        return complex(-math.pi * abs(theta))
    return complex(-2.0 * abs(theta) ** a * special.gamma(1.0 - a) * math.cos(math.pi * a / 2.0) / a)


@dataclass(frozen=True)
class StableDiagnostic:
    frequencies: tuple[float, ...]
    empirical: tuple[complex, ...]
    truncated: tuple[complex, ...]
    untruncated: tuple[complex, ...]
    max_abs_deviation: float
    truncation_error: float
    n_paths: int


def stable_increment_check(
    atoms: PoissonAtoms | Sequence[PoissonAtoms],
    measure: LevyMeasure,
    t: float,
    frequencies: Sequence[float] = DEFAULT_FREQUENCIES,
) -> StableDiagnostic:
    """Compare the empirical characteristic function of the compensated jump sum
    ``sum z - t * int z lambda(dz)`` (one sample per realization) against the
    truncated Levy-Khintchine formula for the same window.
    """
    if measure.kind not in ("stable_symmetric", "stable_positive"):
        raise ValueError(f"stable_increment_check does not support {measure.kind!r}")
    reps = [atoms] if isinstance(atoms, PoissonAtoms) else list(atoms)
    comp = t * measure.first_moment()
    sums = np.array([float(np.sum(a.marks[a.times <= t])) - comp for a in reps])
    emp, tru, full = [], [], []
    for th in frequencies:
        emp.append(complex(np.mean(np.exp(1j * th * sums))))
        tru.append(complex(np.exp(t * truncated_exponent(measure, th))))
        full.append(complex(np.exp(t * stable_exponent(measure, th))))
    dev = max(abs(e - c) for e, c in zip(emp, tru))
    trunc = max(abs(c - f) for c, f in zip(tru, full))
    return StableDiagnostic(tuple(frequencies), tuple(emp), tuple(tru), tuple(full), dev, trunc, len(reps))
