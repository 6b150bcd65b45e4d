"""Jump-adapted Euler scheme with explicit small-jump compensation.

Between atoms:  X <- X + sigma(X) dW + b(X) dt - dt * C(X),  C(x) = int F(x, z) lambda(dz)
At an atom:     X <- X- + F(X-, z)

Atom times are knots of the merged grid, so every jump sees its exact
left limit. Coupled runs read one frozen :class:`NoiseRealization`.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .model import JUMP_NONE, SdeSpec, quadrature_compensator
from .noise import NoiseRealization

STATUS_NAMES = {kernels.DONE: "done", kernels.ABORTED: "aborted", kernels.STOPPED: "stopped"}


@dataclass(frozen=True)
class SolveConfig:
    base_step: float = 1e-3
    guard: float = 1e6
    compensator: str | None = None  # "analytic", "quadrature", or None for analytic-if-available

    def __post_init__(self):
        if not self.base_step > 0:
            raise ValueError("base_step must be positive")
        if self.compensator not in (None, "analytic", "quadrature"):
            raise ValueError(f"unknown compensator mode {self.compensator!r}")


@dataclass(frozen=True, eq=False)
class JumpPath:
    """Cadlag path on the merged grid. ``values`` are post-jump at atom knots,
    ``pre`` holds left limits, ``delta`` the jump sizes (0 off atoms)."""

    times: np.ndarray
    values: np.ndarray
    pre: np.ndarray
    delta: np.ndarray
    is_atom: np.ndarray
    z: np.ndarray
    status: int = kernels.DONE
    segments: int = 1

    @property
    def aborted(self) -> bool:
        return self.status == kernels.ABORTED

    @property
    def abort_record(self) -> dict | None:
        if not self.aborted:
            return None
        return {"time": float(self.times[-1]), "value": float(self.values[-1]), "knot": int(self.times.size - 1)}

    @property
    def jump_marks(self) -> list[tuple[float, float, float, float]]:
        """``(s, X_{s-}, delta X_s, z)`` for every atom applied."""
        idx = np.flatnonzero(self.is_atom)
        return [(float(self.times[i]), float(self.pre[i]), float(self.delta[i]), float(self.z[i])) for i in idx]

    def __len__(self):
        return self.values.size

    def until(self, t: float) -> "JumpPath":
        """Restriction to knots with time <= t."""
        n = int(np.searchsorted(self.times, t, side="right"))
        return JumpPath(self.times[:n], self.values[:n], self.pre[:n], self.delta[:n],
                        self.is_atom[:n], self.z[:n], self.status, self.segments)

    def to_csv(self, fh=None) -> str | None:
        """Columns ``t, X, is_atom, z, delta_X`` (z empty off atoms)."""
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "X", "is_atom", "z", "delta_X"])
        for t, x, a, z, d in zip(self.times.tolist(), self.values.tolist(), self.is_atom.tolist(),
                                 self.z.tolist(), self.delta.tolist()):
            w.writerow([repr(t), repr(x), int(a), repr(z) if a else "", repr(d)])
        return out.getvalue() if fh is None else None


def from_values(times, values, jumps: dict[int, float] | None = None) -> JumpPath:
    """Build a path from knot values; ``jumps`` maps knot index -> jump size.

    Used for hand-constructed test paths: the left limit at a jump knot is
    ``values[k] - jump``.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    pre = values.copy()
    delta = np.zeros_like(values)
    is_atom = np.zeros(values.size, dtype=np.uint8)
    z = np.full(values.size, np.nan)
    for k, d in (jumps or {}).items():
        delta[k] = d
        pre[k] = values[k] - d
        is_atom[k] = 1
        z[k] = 0.0
    return JumpPath(times, values, pre, delta, is_atom, z)


def _jump_free(spec: SdeSpec) -> bool:
    return spec.native is not None and spec.native.jump_kind == JUMP_NONE


def _check_compatible(spec: SdeSpec, noise: NoiseRealization):
    if _jump_free(spec):
        return
    if spec.measure != noise.measure:
        raise ValueError(
            f"spec {spec.label!r} measure {spec.measure.describe()} differs from noise {noise.measure.describe()}"
        )


def _run(spec: SdeSpec, x0: float, cfg: SolveConfig, dt, dw, is_atom, z, threshold: float):
    mode = cfg.compensator
    if mode == "analytic" and spec.compensator is None:
        raise ValueError(f"spec {spec.label!r} has no closed-form compensator")
    if mode is None:
        mode = "analytic" if spec.compensator is not None else "quadrature"
    if mode == "analytic" and spec.native is not None:
        form = spec.native
        return kernels.euler_native(form.kinds, form.param_array, float(x0), dt, dw, is_atom, z,
                                    float(cfg.guard), float(threshold))
    if mode == "analytic":
        comp = spec.compensator
    else:
        comp = functools.lru_cache(maxsize=None)(lambda x: quadrature_compensator(spec, x))
    return kernels.euler_generic(spec.sigma, spec.b, spec.jump, comp, float(x0), dt, dw, is_atom, z,
                                 float(cfg.guard), float(threshold))


def _assemble(noise: NoiseRealization, values, pre, delta, status, segments=1) -> JumpPath:
    n = values.size
    ai = noise.atom_index[:n]
    is_atom = (ai >= 0).astype(np.uint8)
    marks = noise.atoms.marks
    z = np.where(ai >= 0, marks[np.maximum(ai, 0)] if marks.size else np.nan, np.nan)
    return JumpPath(noise.times[:n], values, pre, delta, is_atom, z, status, segments)


def solve(spec: SdeSpec, noise: NoiseRealization, x0: float, cfg: SolveConfig = SolveConfig()) -> JumpPath:
    """One Euler path of ``spec`` driven by ``noise`` from ``x0``."""
    if not abs(x0) < cfg.guard:
        raise ValueError("explosion guard must exceed |x0|")
    _check_compatible(spec, noise)
    dt, dw, is_atom, z = noise.increments()
    values, pre, delta, status = _run(spec, x0, cfg, dt, dw, is_atom, z, math.inf)
    return _assemble(noise, values, pre, delta, status)


def coupled_solve(specs: Sequence[SdeSpec], x0s: Sequence[float], noise: NoiseRealization,
                  cfg: SolveConfig = SolveConfig()) -> tuple[JumpPath, JumpPath]:
    """Two legs on one read-only realization."""
    s1, s2 = specs
    if not (_jump_free(s1) or _jump_free(s2)) and s1.measure != s2.measure:
        raise ValueError("coupled specs must share the jump measure")
    p1 = solve(s1, noise, x0s[0], cfg)
    p2 = solve(s2, noise, x0s[1], cfg)
    n = min(len(p1), len(p2))
    # both legs must have consumed the same atoms
    assert np.array_equal(p1.is_atom[:n], p2.is_atom[:n])
    assert np.array_equal(p1.z[:n], p2.z[:n], equal_nan=True)
    return p1, p2


def segmented_solve(spec: SdeSpec, noise: NoiseRealization, x0: float, cfg: SolveConfig = SolveConfig(),
                    big_jump_threshold: float = 1.0) -> JumpPath:
    """Solve up to each big jump (|dX| >= threshold), apply it, restart.

    The restart uses the noise shifted to the jump time: the remaining
    Brownian increments and atoms, in the same order. Increments are sliced,
    never recomputed from shifted times, so the result equals :func:`solve`
    bit for bit.
    """
    if not abs(x0) < cfg.guard:
        raise ValueError("explosion guard must exceed |x0|")
    _check_compatible(spec, noise)
    dt, dw, is_atom, z = noise.increments()
    start, x = 0, float(x0)
    vals, pres, dels = [], [], []
    segments, status = 1, kernels.DONE
    while True:
        v, p, d, status = _run(spec, x, cfg, dt[start:], dw[start:], is_atom[start:], z[start:],
                               big_jump_threshold)
        skip = 0 if start == 0 else 1
        vals.append(v[skip:])
        pres.append(p[skip:])
        dels.append(d[skip:])
        start += v.size - 1
        x = float(v[-1])
        if status != kernels.STOPPED:
            break
        segments += 1
        if start >= dt.size:
            break
    if status == kernels.STOPPED:
        status = kernels.DONE
    return _assemble(noise, np.concatenate(vals), np.concatenate(pres), np.concatenate(dels), status, segments)
