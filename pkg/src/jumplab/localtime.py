"""Quadratic variation, Tanaka local time, slanted local time, the
occupation-density check, and the smoothing sequence phi_n for |x|.

Sign convention throughout: sign(x) = 1 if x > 0, -1 if x <= 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from . import kernels
from .model import (FAIL, INCONCLUSIVE, PASS, ConditionReport, ModulusH, SdeSpec, integrate_lambda)
from .solver import JumpPath


@dataclass(frozen=True)
class QuadraticVariation:
    """Cumulative ``[X]`` per knot, split into jump and continuous parts.

    The continuous increment of a step is the squared move before any jump
    at its right knot; ``total - jump - continuous`` is the sum of the
    cross terms ``2 * (diffusive move) * (jump)``.
    """

    times: np.ndarray
    total: np.ndarray
    jump: np.ndarray
    continuous: np.ndarray


def quadratic_variation(path: JumpPath) -> QuadraticVariation:
    v = path.values
    d_total = np.diff(v) ** 2
    d_jump = path.delta[1:] ** 2
    d_cont = (path.pre[1:] - v[:-1]) ** 2
    z = np.zeros(1)
    return QuadraticVariation(
        path.times,
        np.concatenate([z, np.cumsum(d_total)]),
        np.concatenate([z, np.cumsum(d_jump)]),
        np.concatenate([z, np.cumsum(d_cont)]),
    )


@dataclass(frozen=True)
class LocalTimeEstimate:
    level: float
    horizon: float
    value: float
    abs_end: float
    abs_start: float
    sign_integral: float
    jump_correction: float | None  # None for the slanted variant

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _estimate(path: JumpPath, a: float, t: float | None, slanted: bool) -> LocalTimeEstimate:
    if t is not None:
        path = path.until(t)
    v = path.values
    sign_int, jump_sum = kernels.tanaka_terms(v, path.pre, path.delta, path.is_atom, float(a))
    t1 = abs(float(v[-1]) - a)
    t2 = abs(float(v[0]) - a)
    if slanted:
        value = t1 - t2 - sign_int
        jump_sum = None
    else:
        value = t1 - t2 - sign_int - jump_sum
    return LocalTimeEstimate(float(a), float(path.times[-1]), value, t1, t2, sign_int, jump_sum)


def tanaka_local_time(path: JumpPath, a: float = 0.0, t: float | None = None) -> LocalTimeEstimate:
    """Discrete Tanaka formula for ``L^a_t``.

    The stochastic integral uses left-knot signs for the diffusive part of
    each step and ``sign(X_{s-} - a)`` for the jump part; the jump sum uses
    the exact pre/post values recorded at atoms.
    """
    return _estimate(path, a, t, slanted=False)


def slanted_local_time(path: JumpPath, a: float = 0.0, t: float | None = None) -> LocalTimeEstimate:
    """Like :func:`tanaka_local_time` without the jump-correction sum."""
    return _estimate(path, a, t, slanted=True)


def local_time_levels(path: JumpPath, levels: Sequence[float]) -> np.ndarray:
    """``L^a_T`` for every level in ``levels`` (vectorised over levels)."""
    a = np.asarray(levels, dtype=float)[:, None]
    v = path.values
    left, pre, d = v[:-1], path.pre[1:], path.delta[1:]
    s_left = np.where(left - a > 0.0, 1.0, -1.0)
    s_pre = np.where(pre - a > 0.0, 1.0, -1.0)
    sign_int = np.sum(s_left * (pre - left) + s_pre * d, axis=1)
    mask = path.is_atom[1:].astype(bool)
    jump = np.sum((np.abs(v[1:][mask] - a) - np.abs(pre[mask] - a)) - s_pre[:, mask] * d[mask], axis=1)
    return np.abs(v[-1] - a[:, 0]) - np.abs(v[0] - a[:, 0]) - sign_int - jump


@dataclass(frozen=True)
class OccupationCheck:
    lhs: float
    rhs: float
    relative_gap: float
    n_levels: int
    level_range: tuple[float, float]
    quadrature: str = "trapezoid"


def occupation_identity_check(path: JumpPath, f: Callable = None, level_grid=None,
                              n_levels: int = 200) -> OccupationCheck:
    """Both sides of ``int L^a_t f(a) da = int f(X_{s-}) d[X]^c_s``.

    Left side: trapezoid rule in ``a`` over ``level_grid`` (default: ``n_levels``
    equispaced levels spanning the path's range). Right side: left-knot
    ``f`` times continuous quadratic-variation increments.
    """
    f = f or (lambda a: np.ones_like(np.asarray(a, dtype=float)))
    if level_grid is None:
        lo = float(min(path.values.min(), path.pre.min()))
        hi = float(max(path.values.max(), path.pre.max()))
        if hi == lo:
            hi = lo + 1.0
        level_grid = np.linspace(lo, hi, n_levels)
    levels = np.asarray(level_grid, dtype=float)
    lt = local_time_levels(path, levels)
    lhs = float(integrate.trapezoid(lt * f(levels), levels))
    d_cont = (path.pre[1:] - path.values[:-1]) ** 2
    rhs = float(np.sum(f(path.values[:-1]) * d_cont))
    scale = max(abs(lhs), abs(rhs))
    gap = abs(lhs - rhs) / scale if scale > 0 else 0.0
    return OccupationCheck(lhs, rhs, gap, levels.size, (float(levels[0]), float(levels[-1])))


# --- the phi_n sequence ------------------------------------------------------------

TAPER = 0.25  # fraction of the support (in s-units) used by each linear ramp
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _vectorize(h: Callable) -> Callable:
    try:
        out = h(np.array([0.5, 0.25]))
        if np.shape(out) == (2,):
            return lambda u: np.asarray(h(np.asarray(u, dtype=float)), dtype=float)
    except Exception:
        pass
    vh = np.vectorize(lambda u: float(h(float(u))), otypes=[float])
    return vh


def _gl(fn, a, b):
    """8-point Gauss-Legendre on each ``[a_i, b_i]`` (arrays)."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    mid, half = (a + b) / 2.0, (b - a) / 2.0
    return np.sum(_GL_W * fn(mid + half * _GL_X), axis=-1) * half[..., 0]


def _inv_h2_integral(hv: Callable, lo: float, hi: float) -> float:
    # int_lo^hi du / h(u)^2 in log coordinates
    val, _ = integrate.quad(lambda s: math.exp(s) / float(hv(math.exp(s))) ** 2, math.log(lo), math.log(hi),
                            epsrel=1e-12, epsabs=0.0, limit=200)
    return val


def _taper(s):
    return np.minimum(1.0, np.minimum(s / TAPER, (1.0 - s) / TAPER)).clip(0.0, 1.0)


def _taper_cdf(s):
    w = TAPER
    s = np.clip(s, 0.0, 1.0)
    return np.where(s <= w, s * s / (2 * w),
                    np.where(s <= 1 - w, w / 2 + (s - w), (1 - w) - (1 - s) ** 2 / (2 * w)))


@dataclass(eq=False)
class PhiSequence:
    """``phi_n(x) = int_0^|x| int_0^y psi_n(u) du dy`` with ``psi_n`` supported
    on ``(a_n, a_{n-1})`` and bounded by ``2 / (n h(u)^2)``.

    ``breakpoints`` holds ``a_0 > a_1 > ... > a_n``.
    """

    h: ModulusH
    n: int
    breakpoints: np.ndarray
    _nodes: np.ndarray = field(repr=False, default=None)
    _s: np.ndarray = field(repr=False, default=None)
    _phi: np.ndarray = field(repr=False, default=None)
    _hv: Callable = field(repr=False, default=None)
    _norm: float = field(repr=False, default=1.0)

    @property
    def lo(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def hi(self) -> float:
        return float(self.breakpoints[-2])

    def _s_of(self, y: np.ndarray, cell: np.ndarray) -> np.ndarray:
        n, hv = self.n, self._hv
        base = self._nodes[cell]
        return self._s[cell] + _gl(lambda u: 1.0 / (n * hv(u) ** 2), base, y) / self._norm

    def _psi_cdf(self, y: np.ndarray, cell: np.ndarray) -> np.ndarray:
        return _taper_cdf(self._s_of(y, cell)) / (1.0 - TAPER)

    def _cells(self, y):
        return np.clip(np.searchsorted(self._nodes, y, side="right") - 1, 0, self._nodes.size - 2)

    def dphi(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.abs(x)
        inside = (y > self.lo) & (y < self.hi)
        out = np.where(y >= self.hi, 1.0, 0.0)
        if np.any(inside):
            yi = y[inside]
            out[inside] = self._psi_cdf(yi, self._cells(yi))
        return np.where(x > 0, out, -out)

    def d2phi(self, x) -> np.ndarray:
        y = np.abs(np.asarray(x, dtype=float))
        inside = (y > self.lo) & (y < self.hi)
        out = np.zeros_like(y)
        if np.any(inside):
            yi = y[inside]
            s = self._s_of(yi, self._cells(yi))
            out[inside] = _taper(s) / ((1.0 - TAPER) * self.n * self._hv(yi) ** 2 * self._norm)
        return out

    def phi(self, x) -> np.ndarray:
        y = np.abs(np.asarray(x, dtype=float))
        out = np.where(y >= self.hi, y - (self.hi - self._phi[-1]), 0.0)
        inside = (y > self.lo) & (y < self.hi)
        if np.any(inside):
            yi = y[inside]
            cell = self._cells(yi)
            base = self._nodes[cell]
            # nested Gauss-Legendre: outer over [node, y], inner s(u) per outer point
            mid, half = (base + yi) / 2.0, (yi - base) / 2.0
            u = mid[:, None] + half[:, None] * _GL_X
            inner = self._psi_cdf(u.ravel(), np.repeat(cell, _GL_X.size)).reshape(u.shape)
            out[inside] = self._phi[cell] + np.sum(_GL_W * inner, axis=1) * half
        return out


def _breakpoints(h: ModulusH, n: int, hv: Callable) -> np.ndarray:
    a = [float(h.eps0)]
    for k in range(1, n + 1):
        upper = a[-1]
        target = float(k)

        def g(log_lo):
            return _inv_h2_integral(hv, math.exp(log_lo), upper) - target

        hi_log = math.log(upper)
        lo_log = hi_log - 1.0
        while g(lo_log) < 0.0:
            lo_log -= 2.0 * (hi_log - lo_log)
            if lo_log < math.log(1e-300):
                raise ArithmeticError(
                    f"cannot place breakpoint a_{k}: int du/h^2 stays below {k} (modulus too flat or Osgood fails)"
                )
        root = optimize.bisect(g, lo_log, hi_log, xtol=1e-14, rtol=1e-15, maxiter=400)
        a.append(math.exp(root))
    return np.array(a)


def build_phi(h: ModulusH, n: int, n_nodes: int = 1025) -> PhiSequence:
    """Construct ``phi_n`` for modulus ``h`` (requires ``int_0 du/h^2 = infinity``)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    hv = _vectorize(h.h)
    bps = _breakpoints(h, n, hv)
    lo, hi = bps[-1], bps[-2]
    nodes = np.geomspace(lo, hi, n_nodes)
    nodes[0], nodes[-1] = lo, hi
    seq = PhiSequence(h, n, bps, nodes)
    seq._hv = hv
    cell_s = _gl(lambda u: 1.0 / (n * hv(u) ** 2), nodes[:-1], nodes[1:])
    s = np.concatenate([[0.0], np.cumsum(cell_s)])
    seq._norm = float(s[-1])  # 1 up to bisection tolerance; renormalised so s(a_{n-1}) = 1
    seq._s = s / seq._norm
    cells = np.arange(n_nodes - 1)
    mid, half = (nodes[:-1] + nodes[1:]) / 2.0, (nodes[1:] - nodes[:-1]) / 2.0
    u = mid[:, None] + half[:, None] * _GL_X
    inner = seq._psi_cdf(u.ravel(), np.repeat(cells, _GL_X.size)).reshape(u.shape)
    seq._phi = np.concatenate([[0.0], np.cumsum(np.sum(_GL_W * inner, axis=1) * half)])
    return seq


def check_phi_properties(phi: PhiSequence, mesh=None, tol: float = 1e-12) -> ConditionReport:
    """(a) envelope ``0 <= |z| - phi_n(z) <= a_{n-1}``; (b) ``|phi_n'| <= 1``; ``phi_n'' >= 0``."""
    if mesh is None:
        mesh = np.linspace(-2.0 * phi.breakpoints[0], 2.0 * phi.breakpoints[0], 1001)
    z = np.asarray(mesh, dtype=float)
    gap = np.abs(z) - phi.phi(z)
    d1 = phi.dphi(z)
    d2 = phi.d2phi(z)
    checks = {
        "envelope_low": gap >= -tol,
        "envelope_high": gap <= phi.hi + tol,
        "slope": np.abs(d1) <= 1.0 + tol,
        "convex": d2 >= 0.0,
        "phi_zero": np.abs(phi.phi(np.zeros(1)))[0] <= tol,
    }
    for name, ok in checks.items():
        ok = np.atleast_1d(ok)
        if not ok.all():
            i = int(np.argmin(ok))
            return ConditionReport(f"phi_{name}", FAIL, float(z[i]) if ok.size == z.size else 0.0,
                                   None, {"n": phi.n})
    return ConditionReport("phi_properties", PASS, None, float(gap.max()), {"n": phi.n, "a_n_minus_1": phi.hi})


def check_prop4_condition_c(sigma: Callable, phi: PhiSequence, state_pairs) -> ConditionReport:
    """``phi_n''(x - y) (sigma(x) - sigma(y))^2 <= 2/n`` on the given pairs."""
    pairs = np.asarray(state_pairs, dtype=float)
    ds = np.array([sigma(float(x)) - sigma(float(y)) for x, y in pairs])
    val = phi.d2phi(pairs[:, 0] - pairs[:, 1]) * ds**2
    i = int(np.argmax(val))
    bound = 2.0 / phi.n
    verdict = PASS if val[i] <= bound else FAIL
    return ConditionReport("phi_diffusion_bound", verdict, tuple(pairs[i].tolist()), float(val[i]), {"bound": bound, "n": phi.n})


def _kink_marks(spec: SdeSpec, phi: PhiSequence, x: float, y: float, n_scan: int = 257) -> list[float]:
    """Marks z where ``x - y + F(x,z) - F(y,z)`` crosses a kink of ``phi_n``
    (0, +-a_n, +-a_{n-1}), located by a scan plus root refinement."""
    kinks = (0.0, phi.lo, -phi.lo, phi.hi, -phi.hi)
    d = x - y

    def w(z):
        return d + spec.big_f(x, z) - spec.big_f(y, z)

    out = []
    for lo, hi in spec.measure.pieces():
        lo, hi = max(lo, spec.z_support[0]), min(hi, spec.z_support[1])
        if not hi > lo:
            continue
        if lo > 0 and math.isfinite(hi):
            zs = np.geomspace(lo, hi, n_scan)
        elif hi < 0 and math.isfinite(lo):
            zs = -np.geomspace(-hi, -lo, n_scan)[::-1]
        else:
            zs = np.linspace(lo, min(hi, 1e6), n_scan)
        ws = np.array([w(float(z)) for z in zs])
        for c in kinks:
            r = ws - c
            for i in np.flatnonzero(np.sign(r[:-1]) * np.sign(r[1:]) < 0):
                out.append(optimize.brentq(lambda z: w(z) - c, zs[i], zs[i + 1], xtol=1e-14))
    return sorted(out)


def phi_jump_integral(spec: SdeSpec, phi: PhiSequence, x: float, y: float) -> tuple[float, bool]:
    """``int [phi(D + dF) - phi(D) - phi'(D) dF] lambda(dz)`` with ``D = x - y``.

    The window is split at the kinks of the integrand so each piece is smooth.
    """
    d = x - y
    p0 = float(phi.phi(np.array([d]))[0])
    d1 = float(phi.dphi(np.array([d]))[0])

    def integrand(z):
        df = spec.big_f(x, z) - spec.big_f(y, z)
        if df == 0.0:
            return 0.0
        return float(phi.phi(np.array([d + df]))[0]) - p0 - d1 * df

    lo, hi = spec.z_support
    cuts = [lo] + [z for z in _kink_marks(spec, phi, x, y) if lo < z < hi] + [hi]
    total, ok = 0.0, True
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b > a:
            val, good = integrate_lambda(spec.measure, integrand, (a, b), epsrel=1e-6, epsabs=1e-14)
            total += val
            ok &= good
    return total, ok


def check_prop4_condition_d(spec: SdeSpec, phis: Sequence[PhiSequence], state_pairs,
                            decay: float = 0.1, tol: float | None = None,
                            slack: float = 1e-9) -> ConditionReport:
    """Max over pairs of the condition-(d) integral for each phi_n in ``phis``.

    Pass when the maxima are non-increasing in n (up to ``slack``) and the
    last one is at most ``decay`` times the first (and at most ``tol`` when
    given). A single pair only feels the phi_n whose curvature band contains
    ``x - y``, so the pair set should cover gaps across all bands.
    """
    maxima, worst_pairs = [], []
    for phi in phis:
        best, wp = 0.0, None
        for x, y in np.asarray(state_pairs, dtype=float).tolist():
            val, ok = phi_jump_integral(spec, phi, x, y)
            if not ok:
                return ConditionReport("phi_jump_decay", INCONCLUSIVE, (x, y), None, {"n": phi.n})
            if abs(val) > best or wp is None:
                best, wp = abs(val), (x, y)
        maxima.append(best)
        worst_pairs.append(wp)
    ns = [p.n for p in phis]
    meta = {"n": ns, "maxima": maxima, "decay": decay, "tol": tol}
    for i in range(1, len(maxima)):
        if maxima[i] > maxima[i - 1] + slack:
            return ConditionReport("phi_jump_decay", FAIL, worst_pairs[i], maxima[i], meta)
    ok = maxima[-1] <= decay * maxima[0] + slack and (tol is None or maxima[-1] <= tol)
    return ConditionReport("phi_jump_decay", PASS if ok else FAIL, worst_pairs[-1], maxima[-1], meta)
