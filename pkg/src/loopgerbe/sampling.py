"""Seeded random objects for tests and the command-line checks.

Everything is driven by a counter-based generator so a seed pins the
whole scenario.  Loops, tangents and paths are built from finite
Fourier/polynomial profiles so that exact theta-derivative and
velocity payloads ride along; coefficients are damped with harmonic
number to keep the objects resolvable on coarse grids.
"""

from __future__ import annotations

import numpy as np

from .liegroup import Group
from .loops import (Fn, GridFun, LoopPoint, PathInLoopGroup, ThetaGrid,
                    TrigPoly, path_from_factors, product_loop)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


class RecordingRNG:
    """Wraps a generator and logs every draw.

    The log serialises as plain JSON, so a report consumer can rebuild
    the exact fixtures without reimplementing the generator; feed the
    log back through ReplayRNG to rerun a check on the recorded values.
    """

    def __init__(self, rng):
        self._rng = rng
        self.log = []

    def _record(self, method, out):
        self.log.append({"method": method, "values": np.asarray(out).tolist()})
        return out

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._record("uniform", self._rng.uniform(low, high, size))

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._record("normal", self._rng.normal(loc, scale, size))

    def integers(self, low, high=None, size=None):
        return self._record("integers", self._rng.integers(low, high, size))


class ReplayRNG:
    """Serves draws from a RecordingRNG log instead of a generator."""

    def __init__(self, log):
        self._log = list(log)
        self._i = 0

    def _next(self, method, dtype):
        if self._i >= len(self._log):
            raise ValueError("fixture log exhausted")
        entry = self._log[self._i]
        self._i += 1
        if entry["method"] != method:
            raise ValueError("fixture log out of order: expected %s, have %s"
                             % (entry["method"], method))
        vals = np.asarray(entry["values"], dtype=dtype)
        return vals if vals.ndim else dtype(vals)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._next("uniform", float)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._next("normal", float)

    def integers(self, low, high=None, size=None):
        return self._next("integers", int)


def _coeffs(rng: np.random.Generator, k: int, scale: float) -> np.ndarray:
    return rng.uniform(-scale, scale, size=k)


def random_algebra(rng: np.random.Generator, group: Group, scale: float = 0.7) -> np.ndarray:
    return group.from_coeffs(_coeffs(rng, group.dim, scale))


def random_trig(rng: np.random.Generator, harmonics: int = 2, scale: float = 0.5,
                with_const: bool = True) -> TrigPoly:
    damp = 1.0 / np.arange(1, harmonics + 1) ** 2
    a0 = float(rng.uniform(-scale, scale)) if with_const else 0.0
    ac = tuple(_coeffs(rng, harmonics, scale) * damp)
    bs = tuple(_coeffs(rng, harmonics, scale) * damp)
    return TrigPoly(a0, ac, bs)


def random_based_profile(rng: np.random.Generator, harmonics: int = 2,
                         scale: float = 0.5) -> Fn:
    """A trig profile shifted to vanish at 0 (hence at 2 pi as well)."""
    return Fn.based(random_trig(rng, harmonics, scale).as_fn())


def random_loop(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                nfactors: int = 2, harmonics: int = 2, scale: float = 0.5,
                closed: bool = False, based: bool = False) -> LoopPoint:
    """Product of single-generator factors exp(f_j(theta) xi_j), exact Z."""
    factors = []
    for _ in range(nfactors):
        tp = random_trig(rng, harmonics, scale)
        prof = Fn.based(tp.as_fn()) if based else tp.as_fn()
        factors.append((prof, random_algebra(rng, group)))
    return product_loop(grid, factors, closed)


def random_loop_tangent(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                        harmonics: int = 2, scale: float = 0.5,
                        closed: bool = False, based: bool = False) -> GridFun:
    """Algebra-valued loop with exact derivative payload.

    based=True pins the value at theta = 0 (and 2 pi) to zero.
    """
    terms = []
    for a in range(group.dim):
        tp = random_trig(rng, harmonics, scale)
        prof = Fn.based(tp.as_fn()) if based else tp.as_fn()
        terms.append((prof, group.basis[a]))
    return GridFun.from_profiles(grid, terms, closed)


# ---------------------------------------------------------------------------
# points of the path fibration
#
# A path-fibration point is a closed-grid loop-group element p with
# p(0) = identity; its projection is the endpoint p(2 pi).  Tangents are
# closed-grid algebra loops vanishing at 0; vertical ones vanish at
# 2 pi too.


def random_path_point(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                      nfactors: int = 2, harmonics: int = 2,
                      scale: float = 0.5) -> LoopPoint:
    factors = []
    for j in range(nfactors):
        prof = Fn.add(random_based_profile(rng, harmonics, scale),
                      Fn.ramp(float(rng.uniform(-scale, scale))))
        factors.append((prof, random_algebra(rng, group)))
    return product_loop(grid, factors, closed=True)


def random_path_tangent(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                        harmonics: int = 2, scale: float = 0.5,
                        endpoint="free") -> GridFun:
    """Closed-grid tangent vanishing at theta = 0.

    endpoint: "free" draws the 2 pi value, "zero" makes the tangent
    vertical, an algebra matrix pins the 2 pi value exactly.
    """
    if isinstance(endpoint, str) and endpoint == "free":
        end = random_algebra(rng, group, scale)
    elif isinstance(endpoint, str) and endpoint == "zero":
        end = np.zeros((group.n, group.n), dtype=complex)
    else:
        end = np.asarray(endpoint)
    terms = [(Fn.ramp(1.0), end)]
    for a in range(group.dim):
        terms.append((random_based_profile(rng, harmonics, scale), group.basis[a]))
    return GridFun.from_profiles(grid, terms, closed=True)


def random_path_fibre_points(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                             q: int, nfactors: int = 2) -> tuple:
    """q points of one fibre: p_1 random, the rest p_1 times based loops."""
    p1 = random_path_point(rng, grid, group, nfactors)
    pts = [p1]
    for _ in range(q - 1):
        gam = random_loop(rng, grid, group, nfactors=1, closed=True, based=True)
        pts.append(p1.mul(gam))
    return tuple(pts)


def random_path_fibre_tangent(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                              q: int, harmonics: int = 2, scale: float = 0.5) -> tuple:
    """One tangent to the q-fold fibre product: slots share the 2 pi value."""
    end = random_algebra(rng, group, scale)
    return tuple(random_path_tangent(rng, grid, group, harmonics, scale, endpoint=end)
                 for _ in range(q))


# ---------------------------------------------------------------------------
# paths and disks in the loop group


def random_unit_profile(rng: np.random.Generator, scale: float = 0.8) -> Fn:
    """Smooth profile on [0, 1] vanishing at 0 (for path factors)."""
    c = _coeffs(rng, 4, scale)

    def val(s):
        s = np.asarray(s, dtype=float)
        return (c[0] * s + c[1] * s * s + c[2] * np.sin(np.pi * s)
                + c[3] * (1.0 - np.cos(np.pi * s)))

    def dval(s):
        s = np.asarray(s, dtype=float)
        return (c[0] + 2.0 * c[1] * s + c[2] * np.pi * np.cos(np.pi * s)
                + c[3] * np.pi * np.sin(np.pi * s))

    return Fn(val, dval)


def random_pinned_profile(rng: np.random.Generator, scale: float = 0.8) -> Fn:
    """Smooth profile on [0, 1] vanishing at both ends (for disk spokes)."""
    c = _coeffs(rng, 3, scale)

    def val(s):
        s = np.asarray(s, dtype=float)
        return (c[0] * np.sin(np.pi * s) + c[1] * np.sin(2.0 * np.pi * s)
                + c[2] * s * (1.0 - s))

    def dval(s):
        s = np.asarray(s, dtype=float)
        return (c[0] * np.pi * np.cos(np.pi * s)
                + c[1] * 2.0 * np.pi * np.cos(2.0 * np.pi * s)
                + c[2] * (1.0 - 2.0 * s))

    return Fn(val, dval)


def random_group_path(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                      npath: int, nfactors: int = 2, harmonics: int = 2,
                      scale: float = 0.5, based_loops: bool = False) -> PathInLoopGroup:
    """Path from the identity in the loop group with exact velocities."""
    factors = []
    for _ in range(nfactors):
        X = random_loop_tangent(rng, grid, group, harmonics, scale, based=based_loops)
        factors.append((random_unit_profile(rng), X))
    return path_from_factors(grid, factors, npath)


def random_disk_terms(rng: np.random.Generator, grid: ThetaGrid, group: Group,
                      nterms: int = 2, harmonics: int = 2, scale: float = 0.6) -> list:
    """Generator terms (sigma_j, X_j) for a disk with boundary loop
    s -> exp(xi(s)), xi(s) = sum_j sigma_j(s) X_j, xi(0) = xi(1) = 0."""
    return [(random_pinned_profile(rng, scale),
             random_loop_tangent(rng, grid, group, harmonics, scale))
            for _ in range(nterms)]
