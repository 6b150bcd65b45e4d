"""Coefficients ``(sigma, b, F)`` of a jump SDE, numerical hypothesis checkers,
and the built-in model zoo.

Checkers sample; they do not prove. A ``pass`` means "no violation on the
sampled set", a ``fail`` always carries the offending point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy import integrate

from .noise import LevyMeasure

QUAD_EPSREL = 1e-6

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


# --- native coefficient forms ------------------------------------------------
# Every built-in model is a combination of these component formulas. The
# compiled kernel evaluates them in C; the functions below are the Python
# twins and must stay expression-for-expression identical.

SIGMA_AFFINE, SIGMA_SQRT, SIGMA_SIGN = 0, 1, 2
JUMP_NONE, JUMP_CONST, JUMP_PRODUCT, JUMP_STABLE_LIKE = 0, 1, 2, 3
G_ZERO, G_CONST, G_LINEAR, G_CLAMP = 0, 1, 2, 3

G_KINDS = {"zero": G_ZERO, "const": G_CONST, "linear": G_LINEAR, "clamp": G_CLAMP}


def sign(x: float) -> float:
    """+1 for x > 0, -1 for x <= 0."""
    return 1.0 if x > 0.0 else -1.0


@dataclass(frozen=True)
class NativeForm:
    """Kind codes ``(sigma, jump, G)`` plus an 8-slot parameter vector.

    params: [s0, s1, b0, b1, j0, j1, j2, j3]
      sigma affine: s0 + s1*x;  sqrt: s0*sqrt(min(|x|, s1));  sign: s0*sign(x)
      drift: b0 + b1*x
      jump const: F = j0, C = j0*j1 (j1 = lambda-mass)
      jump product: F = z*G(x), C = G(x)*j2 (j2 = first moment), G param j0
      jump stable_like: alpha(x) = j0 + (j1-j0)*(0.5*(1+tanh x)), window [j2, j3]
    """

    sigma_kind: int
    jump_kind: int
    g_kind: int
    params: tuple[float, ...]

    @property
    def kinds(self) -> np.ndarray:
        return np.array([self.sigma_kind, self.jump_kind, self.g_kind], dtype=np.int64)

    @property
    def param_array(self) -> np.ndarray:
        return np.array(self.params, dtype=float)


def _g_value(kind: int, p: float, x: float) -> float:
    if kind == G_ZERO:
        return 0.0
    if kind == G_CONST:
        return p
    if kind == G_LINEAR:
        return p * x
    return min(max(x, 0.0), p)


def _stable_like_alpha(lo: float, hi: float, x: float) -> float:
    return lo + (hi - lo) * (0.5 * (1.0 + math.tanh(x)))


def native_callables(form: NativeForm):
    """Python ``(sigma, b, F, C)`` for a native form."""
    s0, s1, b0, b1, j0, j1, j2, j3 = form.params
    sk, jk, gk = form.sigma_kind, form.jump_kind, form.g_kind

    if sk == SIGMA_AFFINE:
        def sigma(x):
            return s0 + s1 * x
    elif sk == SIGMA_SQRT:
        def sigma(x):
            return s0 * math.sqrt(min(abs(x), s1))
    else:
        def sigma(x):
            return s0 * (1.0 if x > 0.0 else -1.0)

    def b(x):
        return b0 + b1 * x

    if jk == JUMP_NONE:
        def big_f(x, z):
            return 0.0

        def comp(x):
            return 0.0
    elif jk == JUMP_CONST:
        def big_f(x, z):
            return j0

        def comp(x):
            return j0 * j1
    elif jk == JUMP_PRODUCT:
        def big_f(x, z):
            return z * _g_value(gk, j0, x)

        def comp(x):
            return _g_value(gk, j0, x) * j2
    else:
        def big_f(x, z):
            a = _stable_like_alpha(j0, j1, x)
            return abs(z) ** (-(1.0 + a))

        def comp(x):
            a = _stable_like_alpha(j0, j1, x)
            return 2.0 * (j2 ** (-a) - j3 ** (-a)) / a

    return sigma, b, big_f, comp


# --- specs -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SdeSpec:
    """``dX = sigma(X)dW + b(X)dt + int F(X-, z)(mu - nu)(dz, dt)``.

    ``big_f`` is taken to vanish outside ``z_support``. ``compensator`` is the
    closed form of ``int F(x, z) lambda(dz)`` over the measure window, when known.
    """

    sigma: Callable[[float], float]
    b: Callable[[float], float]
    big_f: Callable[[float, float], float]
    measure: LevyMeasure
    z_support: tuple[float, float]
    label: str
    compensator: Callable[[float], float] | None = None
    native: NativeForm | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.z_support
        if lo > hi:
            raise ValueError("z_support must be an interval")
        zm = self.measure.z_max
        if lo < -zm or hi > zm:
            raise ValueError(f"z_support {self.z_support} not inside [-z_max, z_max]")

    def jump(self, x: float, z: float) -> float:
        lo, hi = self.z_support
        if z < lo or z > hi:
            return 0.0
        return self.big_f(x, z)

    def describe(self) -> dict:
        return {"label": self.label, "params": dict(self.params), "measure": self.measure.describe()}


@dataclass(frozen=True)
class ModulusH:
    """Continuity modulus ``h`` on ``(0, eps0]``."""

    h: Callable
    eps0: float = 1.0
    label: str = "h"

    def __call__(self, u):
        return self.h(u)


def power_modulus(p: float, eps0: float = 1.0) -> ModulusH:
    """``h(u) = u**p``; works on floats, numpy arrays and mpmath numbers."""
    return ModulusH(lambda u: u**p, eps0, f"u^{p}")


@dataclass
class ConditionReport:
    name: str
    verdict: str
    witness: object = None
    estimate: float | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, tuple):
            w = list(w)
        return {"name": self.name, "verdict": self.verdict, "witness": w,
                "estimate": self.estimate, "metadata": self.metadata}


# --- lambda integrals ----------------------------------------------------------


def integrate_lambda(measure: LevyMeasure, g: Callable[[float], float], z_support=None,
                     epsrel: float = QUAD_EPSREL, epsabs: float = 0.0) -> tuple[float, bool]:
    """``int g(z) lambda(dz)`` over window and support; returns ``(value, converged)``."""
    lo_s, hi_s = z_support if z_support is not None else (-math.inf, math.inf)
    total, ok = 0.0, True
    for lo, hi in measure.pieces():
        a, b = max(lo, lo_s), min(hi, hi_s)
        if b <= a:
            continue
        if measure.kind == "lebesgue_on_interval":
            f = g
        else:
            alpha = measure.alpha

            def f(z, _g=g):
                return _g(z) * abs(z) ** (-alpha - 1.0)
        points = [0.0] if a < 0.0 < b else None
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                if points and not (math.isinf(a) or math.isinf(b)):
                    val, _ = integrate.quad(f, a, b, epsrel=epsrel, epsabs=epsabs, limit=200, points=points)
                else:
                    val, _ = integrate.quad(f, a, b, epsrel=epsrel, epsabs=epsabs, limit=200)
            except integrate.IntegrationWarning:
                ok = False
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    val, _ = integrate.quad(f, a, b, epsrel=epsrel, epsabs=epsabs, limit=200)
        total += val
    return total, ok and math.isfinite(total)


def quadrature_compensator(spec: SdeSpec, x: float) -> float:
    val, ok = integrate_lambda(spec.measure, lambda z: spec.big_f(x, z), spec.z_support)
    if not ok:
        raise ArithmeticError(f"compensator quadrature failed at x={x!r}")
    return val


# --- sampling -------------------------------------------------------------------


def sample_pairs(box: tuple[float, float], n: int, seed: int = 0) -> np.ndarray:
    """``n`` state pairs from ``box``; the first ``k`` pairs do not depend on ``n``.

    A third are uniform pairs, a third are close pairs with log-uniform gaps,
    and a third cluster log-uniformly around 0 (when 0 is in the box).
    """
    lo, hi = box
    if not hi > lo:
        raise ValueError("state box must be nonempty")
    width = hi - lo
    u = np.random.Generator(np.random.PCG64(seed)).random((n, 5))
    x = lo + u[:, 1] * width
    y = lo + u[:, 2] * width
    gap = width * 10.0 ** (-12.0 * u[:, 3]) * np.where(u[:, 4] < 0.5, -1.0, 1.0)
    close = np.clip(x + gap, lo, hi)
    mode = u[:, 0]
    y = np.where((mode >= 1 / 3) & (mode < 2 / 3), close, y)
    if lo <= 0.0 <= hi:
        scale = max(abs(lo), abs(hi))
        xs = np.clip(np.where(u[:, 3] < 0.5, -1.0, 1.0) * scale * 10.0 ** (-12.0 * u[:, 1]), lo, hi)
        ys = np.clip(np.where(u[:, 4] < 0.5, -1.0, 1.0) * scale * 10.0 ** (-12.0 * u[:, 2]), lo, hi)
        near = mode >= 2 / 3
        x = np.where(near, xs, x)
        y = np.where(near, ys, y)
    return np.column_stack([x, y])


def sample_points(box: tuple[float, float], n: int, seed: int = 0) -> np.ndarray:
    pts = sample_pairs(box, n, seed)[:, 0]
    return np.concatenate([[box[0], box[1]], pts])


RESOLVABLE_GAP = 1e-7


def _resolvable(pairs: np.ndarray, rel: float = RESOLVABLE_GAP) -> np.ndarray:
    """Drop pairs whose relative gap is below ``rel``: coefficient differences
    there are rounding noise, and quadrature of that noise cannot converge."""
    scale = np.maximum(np.abs(pairs[:, 0]), np.abs(pairs[:, 1]))
    return pairs[np.abs(pairs[:, 0] - pairs[:, 1]) > rel * scale]


def _quotient_check(name, pairs, diff, ceiling):
    best, witness = 0.0, None
    for x, y in pairs:
        if x == y:
            continue
        d = diff(x, y)
        if d is None or not math.isfinite(d):
            return ConditionReport(name, INCONCLUSIVE, (float(x), float(y)), None,
                                   {"reason": "non-finite coefficient value"})
        q = float(d / abs(x - y))
        if q > best or witness is None:
            best, witness = q, (float(x), float(y))
    verdict = PASS if best <= ceiling else FAIL
    return ConditionReport(name, verdict, witness, best, {"ceiling": ceiling, "n_pairs": len(pairs)})


def check_lipschitz_b(spec: SdeSpec, state_box, n_samples: int = 2000, ceiling: float = 1e3,
                      seed: int = 0) -> ConditionReport:
    """Largest ``|b(x) - b(y)| / |x - y|`` seen over sampled pairs."""
    pairs = _resolvable(sample_pairs(state_box, n_samples, seed))

    def diff(x, y):
        bx, by = spec.b(float(x)), spec.b(float(y))
        if not (math.isfinite(bx) and math.isfinite(by)):
            return None
        return abs(bx - by)

    return _quotient_check("lipschitz_b", pairs, diff, ceiling)


def check_F_L1_lipschitz(spec: SdeSpec, state_box, n_samples: int = 300, ceiling: float = 1e3,
                         seed: int = 0) -> ConditionReport:
    """Largest ``int |F(x,z) - F(y,z)| lambda(dz) / |x - y|`` over sampled pairs."""
    pairs = _resolvable(sample_pairs(state_box, n_samples, seed))
    failed = []

    def diff(x, y):
        x, y = float(x), float(y)
        val, ok = integrate_lambda(spec.measure, lambda z: abs(spec.big_f(x, z) - spec.big_f(y, z)),
                                   spec.z_support)
        if not ok:
            failed.append((x, y))
            return None
        return val

    rep = _quotient_check("F_L1_lipschitz", pairs, diff, ceiling)
    if failed:
        rep.metadata["reason"] = "quadrature did not converge"
    return rep


def check_linear_growth(spec: SdeSpec, state_box, n_samples: int = 500, ceiling: float = 1e3,
                        seed: int = 0) -> ConditionReport:
    """Largest ``(b^2 + sigma^2 + int F^2 dlambda) / (1 + x^2)`` over sampled states."""
    best, witness = -1.0, None
    for x in sample_points(state_box, n_samples, seed).tolist():
        f2, ok = integrate_lambda(spec.measure, lambda z: spec.big_f(x, z) ** 2, spec.z_support)
        if not ok:
            return ConditionReport("linear_growth", INCONCLUSIVE, x, None, {"reason": "quadrature did not converge"})
        r = (spec.b(x) ** 2 + spec.sigma(x) ** 2 + f2) / (1.0 + x * x)
        if not math.isfinite(r):
            return ConditionReport("linear_growth", INCONCLUSIVE, x, None, {"reason": "non-finite value"})
        if r > best:
            best, witness = r, x
    verdict = PASS if best <= ceiling else FAIL
    return ConditionReport("linear_growth", verdict, witness, best, {"ceiling": ceiling})


def check_combined_modulus(spec: SdeSpec, h: ModulusH, state_box, n_samples: int = 300,
                           seed: int = 0, rtol: float = 1e-9) -> ConditionReport:
    """``|b(x)-b(y)|^2 + int |F(x,z)-F(y,z)|^2 lambda(dz) <= h(|x-y|)^2`` on sampled pairs."""
    worst, witness = -math.inf, None
    for x, y in _resolvable(sample_pairs(state_box, n_samples, seed)).tolist():
        if x == y:
            continue
        f2, ok = integrate_lambda(spec.measure, lambda z: (spec.big_f(x, z) - spec.big_f(y, z)) ** 2,
                                  spec.z_support)
        if not ok:
            return ConditionReport("combined_modulus", INCONCLUSIVE, (x, y), None,
                                   {"reason": "quadrature did not converge"})
        lhs = (spec.b(x) - spec.b(y)) ** 2 + f2
        rhs = float(h(abs(x - y))) ** 2
        excess = lhs - rhs * (1.0 + rtol) - QUAD_EPSREL * f2
        if excess > worst:
            worst, witness = excess, (x, y)
    verdict = PASS if worst <= 0.0 else FAIL
    return ConditionReport("combined_modulus", verdict, witness, worst, {"modulus": h.label})


def check_monotone_jump_map(spec: SdeSpec, neighborhood=(-1.0, 1.0), z_samples: Sequence[float] = (),
                            n_mesh: int = 2001) -> ConditionReport:
    """``x -> x + F(x, z)`` nondecreasing on a mesh of the neighbourhood, for each sampled z."""
    lo, hi = neighborhood
    if not lo <= 0.0 <= hi:
        raise ValueError("neighborhood must contain 0")
    xs = np.linspace(lo, hi, n_mesh).tolist()
    zs = list(z_samples) or _default_z_samples(spec.measure)
    for z in zs:
        prev_x = prev_g = None
        for x in xs:
            g = x + spec.jump(x, z)
            if prev_g is not None and g < prev_g:
                return ConditionReport("monotone_jump_map", FAIL, (prev_x, x, float(z)), prev_g - g,
                                       {"neighborhood": [lo, hi]})
            prev_x, prev_g = x, g
    return ConditionReport("monotone_jump_map", PASS, None, 0.0,
                           {"neighborhood": [lo, hi], "n_z": len(zs), "n_mesh": n_mesh})


def _default_z_samples(measure: LevyMeasure, n: int = 21) -> list[float]:
    out = []
    for lo, hi in measure.pieces():
        hi = min(hi, 1e3)
        if lo > 0:
            out += np.geomspace(lo, hi, n).tolist()
        elif hi < 0:
            out += (-np.geomspace(-hi, -lo, n)).tolist()
        else:
            out += np.linspace(lo, hi, n).tolist()
    return out


def check_osgood(h: ModulusH, eps: float | None = None, refinement_levels: int = 600,
                 ratio: float = 10.0, threshold: float = 1e3, cauchy_tol: float = 1e-6,
                 cauchy_levels: int = 3, increment_floor: float = 1e-3) -> ConditionReport:
    """Numerical divergence test for ``int_0^eps du / h(u)^2``.

    Partial integrals over ``[eps * ratio**-k, eps]`` are accumulated level
    by level (16-point Gauss-Legendre in ``log u`` per level, mpmath numbers
    so levels far below the double range stay representable). Pass: the
    partial integral exceeds ``threshold`` while the latest increments stay
    above ``increment_floor``. Fail: ``cauchy_levels`` consecutive increments
    below ``cauchy_tol``. Otherwise inconclusive.
    """
    eps = h.eps0 if eps is None else eps
    nodes, weights = np.polynomial.legendre.leggauss(16)
    nodes = [mpmath.mpf(float(v)) for v in (nodes + 1.0) / 2.0]
    weights = [mpmath.mpf(float(v)) / 2 for v in weights]
    log_ratio = mpmath.log(ratio)

    def ev(u):
        try:
            v = h(u)
        except TypeError:
            v = h(float(u))
        return mpmath.mpf(v) if not isinstance(v, mpmath.mpf) else v

    with mpmath.workdps(30):
        upper = mpmath.log(mpmath.mpf(eps))
        total = mpmath.mpf(0)
        incs: list[float] = []
        for level in range(1, refinement_levels + 1):
            lower = upper - log_ratio
            inc = mpmath.mpf(0)
            for s, w in zip(nodes, weights):
                u = mpmath.exp(lower + s * log_ratio)
                hv = ev(u)
                if not hv > 0:
                    raise ValueError(f"modulus must be positive on (0, eps], got h({mpmath.nstr(u, 5)}) = {hv}")
                inc += w * u / hv**2
            inc *= log_ratio
            total += inc
            incs.append(float(inc))
            upper = lower
            recent = incs[-cauchy_levels:]
            meta = {"levels": level, "ratio": ratio, "partial_integral": float(total),
                    "last_increments": recent}
            if total > threshold and len(recent) == cauchy_levels and min(recent) > increment_floor:
                return ConditionReport("osgood", PASS, None, float(total), meta)
            if len(recent) == cauchy_levels and max(recent) < cauchy_tol:
                return ConditionReport("osgood", FAIL, float(mpmath.exp(upper)), float(total), meta)
    return ConditionReport("osgood", INCONCLUSIVE, None, float(total), meta)


def check_stable_like_alpha(spec: SdeSpec, box=(-10.0, 10.0), n_mesh: int = 2001) -> ConditionReport:
    """The stable-like index must be increasing and stay inside (0, 2)."""
    lo, hi = spec.params["alpha_lo"], spec.params["alpha_hi"]
    xs = np.linspace(box[0], box[1], n_mesh)
    al = np.array([_stable_like_alpha(lo, hi, float(x)) for x in xs])
    if np.any(np.diff(al) < 0):
        i = int(np.argmax(np.diff(al) < 0))
        return ConditionReport("stable_like_alpha", FAIL, (float(xs[i]), float(xs[i + 1])))
    if not (al.min() > 0.0 and al.max() < 2.0):
        return ConditionReport("stable_like_alpha", FAIL, float(xs[np.argmax((al <= 0) | (al >= 2))]))
    return ConditionReport("stable_like_alpha", PASS, None, None, {"min": float(al.min()), "max": float(al.max())})


# --- built-in models -------------------------------------------------------------

BUILTIN_MODELS = {
    "gbm": ("sigma = vol*x, b = mu*x, no jumps", ["mu", "vol"]),
    "affine": ("sigma = s0 + s1*x, b = b0 + b1*x, no jumps", ["s0", "s1", "b0", "b1"]),
    "constant_jump": ("F = c on |z| <= 1 (Lebesgue), sigma = b = 0", ["c"]),
    "tanaka_sign": ("sigma = sign(x) with sign(0) = -1, b = F = 0", []),
    "spectrally_positive": ("F = z*G(x) under |z|^(-alpha-1) dz on z > 0; optional constant drift/vol",
                            ["g", "alpha", "drift", "vol", "z_min", "z_max"]),
    "stable_like": ("F = |z|^-(1+alpha(x)), alpha increasing from alpha_lo to alpha_hi, sigma = b = 0",
                    ["alpha_lo", "alpha_hi", "z_min", "z_max"]),
    "sqrt_jump": ("sigma = vol*sqrt(min(|x|, cap)), b = drift, F = z*G(x) on z > 0 (Osgood + monotone jumps)",
                  ["vol", "cap", "drift", "g", "alpha", "z_min", "z_max"]),
}


def parse_g(g) -> tuple[int, float]:
    """``'clamp:1'`` -> ``(G_CLAMP, 1.0)``; also accepts ``(kind, param)`` tuples."""
    if isinstance(g, tuple):
        kind, p = g
    else:
        kind, _, p = str(g).partition(":")
    kind = kind.strip()
    if kind not in G_KINDS:
        raise KeyError(f"unknown G family {kind!r}")
    return G_KINDS[kind], float(p) if p not in ("", None) else 0.0


def _empty_measure() -> LevyMeasure:
    return LevyMeasure("lebesgue_on_interval", 0.0, 0.0)


def _build(label, form, measure, z_support, params):
    sigma, b, big_f, comp = native_callables(form)
    return SdeSpec(sigma, b, big_f, measure, z_support, label, comp, form, params)


def builtin(label: str, measure: LevyMeasure | None = None, **params) -> SdeSpec:
    """Construct a built-in model by name.

    Jump-free models adopt ``measure`` (default: empty window) so they can
    share noise with any jump model.
    """
    p = {k: float(v) if isinstance(v, (int, float)) else v for k, v in params.items()}
    if label == "gbm":
        mu, vol = p.get("mu", 0.05), p.get("vol", 0.2)
        form = NativeForm(SIGMA_AFFINE, JUMP_NONE, G_ZERO, (0.0, vol, 0.0, mu, 0.0, 0.0, 0.0, 0.0))
        return _build(label, form, measure or _empty_measure(), (0.0, 0.0), {"mu": mu, "vol": vol})
    if label == "affine":
        s0, s1, b0, b1 = (p.get(k, 0.0) for k in ("s0", "s1", "b0", "b1"))
        form = NativeForm(SIGMA_AFFINE, JUMP_NONE, G_ZERO, (s0, s1, b0, b1, 0.0, 0.0, 0.0, 0.0))
        return _build(label, form, measure or _empty_measure(), (0.0, 0.0),
                      {"s0": s0, "s1": s1, "b0": b0, "b1": b1})
    if label == "tanaka_sign":
        form = NativeForm(SIGMA_SIGN, JUMP_NONE, G_ZERO, (1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))
        return _build(label, form, measure or _empty_measure(), (0.0, 0.0), {})
    if label == "constant_jump":
        c = p.get("c", 1.0)
        m = LevyMeasure("lebesgue_on_interval", 0.0, 1.0)
        if measure is not None and measure != m:
            raise ValueError("constant_jump uses the Lebesgue window |z| <= 1")
        form = NativeForm(SIGMA_AFFINE, JUMP_CONST, G_ZERO, (0.0, 0.0, 0.0, 0.0, c, m.mass(), 0.0, 0.0))
        return _build(label, form, m, (-1.0, 1.0), {"c": c})
    if label in ("spectrally_positive", "sqrt_jump"):
        gk, gp = parse_g(p.get("g", "linear:1"))
        alpha = p.get("alpha", 1.5)
        m = measure or LevyMeasure("stable_positive", p.get("z_min", 0.01), p.get("z_max", 100.0), alpha)
        if m.kind != "stable_positive":
            raise ValueError(f"{label} needs a stable_positive measure")
        if m.alpha != alpha and "alpha" in p:
            raise ValueError("alpha does not match the measure")
        b0 = p.get("drift", 0.0)
        if label == "spectrally_positive":
            vol = p.get("vol", 0.0)
            sig = (SIGMA_AFFINE, vol, 0.0)
        else:
            vol, cap = p.get("vol", 1.0), p.get("cap", 1e6)
            sig = (SIGMA_SQRT, vol, cap)
        form = NativeForm(sig[0], JUMP_PRODUCT, gk, (sig[1], sig[2], b0, 0.0, gp, 0.0, m.first_moment(), 0.0))
        extra = {"g": p.get("g", "linear:1"), "alpha": m.alpha, "drift": b0, "vol": vol}
        if label == "sqrt_jump":
            extra["cap"] = cap
        return _build(label, form, m, (m.z_min, m.z_max), extra)
    if label == "stable_like":
        lo, hi = p.get("alpha_lo", 0.5), p.get("alpha_hi", 1.5)
        if not 0.0 < lo <= hi < 2.0:
            raise ValueError("need 0 < alpha_lo <= alpha_hi < 2")
        m = measure or LevyMeasure("lebesgue_on_interval", p.get("z_min", 0.1), p.get("z_max", 1.0))
        if m.kind != "lebesgue_on_interval" or m.z_min <= 0.0:
            raise ValueError("stable_like uses a Lebesgue window with z_min > 0")
        form = NativeForm(SIGMA_AFFINE, JUMP_STABLE_LIKE, G_ZERO, (0.0, 0.0, 0.0, 0.0, lo, hi, m.z_min, m.z_max))
        return _build(label, form, m, (-m.z_max, m.z_max), {"alpha_lo": lo, "alpha_hi": hi})
    raise KeyError(f"unknown model {label!r}")


def custom(sigma, b, big_f, measure: LevyMeasure, z_support=None, label: str = "custom",
           compensator=None) -> SdeSpec:
    """User-supplied coefficients (always run on the pure-Python kernel)."""
    if z_support is None:
        z_support = (-measure.z_max, measure.z_max)
    return SdeSpec(sigma, b, big_f, measure, z_support, label, compensator)


def g_function(g) -> Callable[[float], float]:
    kind, p = parse_g(g)
    return lambda x: _g_value(kind, p, x)
