"""Loops and paths in a compact group, sampled on a circle grid.

Two grid flavours appear.  Periodic grids carry N nodes theta_j = 2 pi j/N
with the node at 2 pi identified with 0; loops in the group and their
tangents live here, differentiation is trigonometric (FFT) and the
quadrature is the periodic trapezoid rule, both spectrally accurate for
smooth periodic data.  Closed grids carry N+1 nodes including both ends;
identity-based paths (which need not close up) live here, differentiation
falls back to 4th-order finite differences and quadrature to composite
Simpson.  Objects built from closed-form data carry exact derivative
payloads which take precedence over either numerical route.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .liegroup import (
    adjoint,
    adjoint_inv,
    bracket,
    dexp_right,
    exp_alg,
    group_inv,
    project_algebra,
)

# default differentiation for periodic grid data lacking an exact payload;
# "fd4" is the finite-difference fallback selectable from the CLI config
_DTHETA_MODE = "spectral"


def set_dtheta_mode(mode: str) -> None:
    global _DTHETA_MODE
    if mode not in ("spectral", "fd4"):
        raise ValueError(f"unknown differentiation mode {mode!r}")
    _DTHETA_MODE = mode


def get_dtheta_mode() -> str:
    return _DTHETA_MODE


# ---------------------------------------------------------------------------
# closed-form scalar profiles


@dataclass(frozen=True)
class Fn:
    """A scalar function of theta (or of a path parameter) with exact derivative."""

    val: Callable[[np.ndarray], np.ndarray]
    dval: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        return self.val(t)

    @staticmethod
    def zero() -> "Fn":
        return Fn(lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                  lambda t: np.zeros_like(np.asarray(t, dtype=float)))

    @staticmethod
    def ramp(c: float = 1.0, period: float = 2.0 * np.pi) -> "Fn":
        """c * t / period: vanishes at 0, reaches c at the period end."""
        return Fn(lambda t, c=c: c * np.asarray(t, dtype=float) / period,
                  lambda t, c=c: np.full_like(np.asarray(t, dtype=float), c / period))

    @staticmethod
    def scale(f: "Fn", c: float) -> "Fn":
        return Fn(lambda t: c * f.val(t), lambda t: c * f.dval(t))

    @staticmethod
    def add(*fs: "Fn") -> "Fn":
        return Fn(lambda t: sum(f.val(t) for f in fs),
                  lambda t: sum(f.dval(t) for f in fs))

    @staticmethod
    def based(f: "Fn", at: float = 0.0) -> "Fn":
        """f shifted by a constant so that the result vanishes at `at`."""
        c = float(f.val(np.asarray(at, dtype=float)))
        return Fn(lambda t: f.val(t) - c, f.dval)


@dataclass(frozen=True)
class TrigPoly:
    """Finite Fourier sum a0 + sum_m (ac[m] cos((m+1) t) + bs[m] sin((m+1) t))."""

    a0: float = 0.0
    ac: tuple = ()
    bs: tuple = ()

    def val(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.a0)
        for m, a in enumerate(self.ac, start=1):
            out = out + a * np.cos(m * t)
        for m, b in enumerate(self.bs, start=1):
            out = out + b * np.sin(m * t)
        return out

    def dval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for m, a in enumerate(self.ac, start=1):
            out = out - m * a * np.sin(m * t)
        for m, b in enumerate(self.bs, start=1):
            out = out + m * b * np.cos(m * t)
        return out

    def __call__(self, t):
        return self.val(t)

    def as_fn(self) -> Fn:
        return Fn(self.val, self.dval)


# ---------------------------------------------------------------------------
# grids, differentiation, quadrature


@dataclass(frozen=True)
class ThetaGrid:
    """Uniform grid on [0, 2 pi] with N subintervals."""

    n: int

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise ValueError("grid size must be even and at least 8")

    @property
    def h(self) -> float:
        return 2.0 * np.pi / self.n

    @property
    def nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    @property
    def closed_nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n + 1) / self.n


def spectral_dtheta(vals: np.ndarray) -> np.ndarray:
    """FFT derivative along axis 0 of periodic samples.

    The Nyquist mode is dropped: its derivative is not representable on
    the grid, and for resolved data its coefficient is at roundoff.
    """
    n = vals.shape[0]
    k = np.fft.fftfreq(n, d=1.0 / n)
    k[n // 2] = 0.0
    shape = (n,) + (1,) * (vals.ndim - 1)
    spec = np.fft.fft(vals, axis=0)
    return np.fft.ifft(1j * k.reshape(shape) * spec, axis=0)


def fd4_dtheta_periodic(vals: np.ndarray, h: float) -> np.ndarray:
    return (-np.roll(vals, -2, 0) + 8 * np.roll(vals, -1, 0)
            - 8 * np.roll(vals, 1, 0) + np.roll(vals, 2, 0)) / (12.0 * h)


_FD4_LEFT = np.array([[-25, 48, -36, 16, -3],
                      [-3, -10, 18, -6, 1]], dtype=float) / 12.0


def fd4_dtheta_closed(vals: np.ndarray, h: float) -> np.ndarray:
    """4th-order derivative on a closed grid, one-sided at the ends."""
    out = np.empty_like(vals)
    out[2:-2] = (-vals[4:] + 8 * vals[3:-1] - 8 * vals[1:-3] + vals[:-4]) / (12.0 * h)
    for r in range(2):
        out[r] = sum(c * vals[j] for j, c in enumerate(_FD4_LEFT[r])) / h
        out[-1 - r] = -sum(c * vals[-1 - j] for j, c in enumerate(_FD4_LEFT[r])) / h
    return out


def quad_s1(samples: np.ndarray) -> np.ndarray:
    """Periodic trapezoid rule over the N-node grid: (2 pi / N) * sum."""
    samples = np.asarray(samples)
    return samples.sum(axis=0) * (2.0 * np.pi / samples.shape[0])


def _simpson_weights(m: int) -> np.ndarray:
    """Composite Simpson weights for m nodes, unit spacing.

    For an odd interval count the last three intervals use the 3/8 rule,
    keeping the whole rule 4th order.
    """
    if m < 2:
        raise ValueError("need at least two nodes")
    if m == 2:
        return np.array([0.5, 0.5])
    w = np.zeros(m)
    intervals = m - 1
    if intervals % 2 == 0:
        w[0] = w[-1] = 1.0 / 3.0
        w[1:-1:2] = 4.0 / 3.0
        w[2:-1:2] = 2.0 / 3.0
    else:
        head = _simpson_weights(m - 3) if m - 3 >= 2 else None
        if head is not None:
            w[: m - 3] += head
        w[m - 4 :] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 / 8.0)
    return w


def quad_closed(samples: np.ndarray, h: float) -> np.ndarray:
    """Composite Simpson over a closed grid with spacing h."""
    samples = np.asarray(samples)
    w = _simpson_weights(samples.shape[0]) * h
    return np.tensordot(w, samples, axes=(0, 0))


def quad_unit(samples: np.ndarray) -> np.ndarray:
    """Composite Simpson over [0, 1] on equally spaced nodes."""
    samples = np.asarray(samples)
    return quad_closed(samples, 1.0 / (samples.shape[0] - 1))


# ---------------------------------------------------------------------------
# algebra-valued grid functions


@dataclass
class GridFun:
    """A matrix-valued function sampled on the theta grid.

    Tangent vectors to loop groups appear here in left-trivialised form:
    the samples are algebra elements.  `dvals` is an optional exact theta
    derivative used in preference to numerical differentiation.
    """

    grid: ThetaGrid
    vals: np.ndarray
    closed: bool = False
    dvals: Optional[np.ndarray] = None

    def __post_init__(self):
        want = self.grid.n + 1 if self.closed else self.grid.n
        if self.vals.shape[0] != want:
            raise ValueError(f"expected {want} nodes, got {self.vals.shape[0]}")

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.closed_nodes if self.closed else self.grid.nodes

    def _like(self, vals, dvals=None) -> "GridFun":
        return GridFun(self.grid, vals, self.closed, dvals)

    def _check(self, other: "GridFun"):
        if self.grid.n != other.grid.n or self.closed != other.closed:
            raise ValueError("grid mismatch")

    def __add__(self, other: "GridFun") -> "GridFun":
        self._check(other)
        d = None
        if self.dvals is not None and other.dvals is not None:
            d = self.dvals + other.dvals
        return self._like(self.vals + other.vals, d)

    def __sub__(self, other: "GridFun") -> "GridFun":
        return self + (-other)

    def __neg__(self) -> "GridFun":
        return self._like(-self.vals, None if self.dvals is None else -self.dvals)

    def __mul__(self, c) -> "GridFun":
        c = complex(c)
        return self._like(c * self.vals, None if self.dvals is None else c * self.dvals)

    __rmul__ = __mul__

    def scale_profile(self, c: np.ndarray, dc: Optional[np.ndarray] = None) -> "GridFun":
        """Multiply node-wise by a scalar profile c(theta); product rule for dvals."""
        cv = np.asarray(c)[:, None, None]
        d = None
        if self.dvals is not None and dc is not None:
            d = np.asarray(dc)[:, None, None] * self.vals + cv * self.dvals
        return self._like(cv * self.vals, d)

    def dtheta(self) -> "GridFun":
        if self.dvals is not None:
            return self._like(self.dvals)
        if self.closed:
            return self._like(fd4_dtheta_closed(self.vals, self.grid.h))
        if _DTHETA_MODE == "fd4":
            return self._like(fd4_dtheta_periodic(self.vals, self.grid.h))
        return self._like(spectral_dtheta(self.vals))

    def interp(self, theta: float) -> np.ndarray:
        """Trigonometric interpolation at an off-grid angle (periodic only)."""
        if self.closed:
            raise ValueError("trigonometric interpolation needs periodic data")
        n = self.grid.n
        spec = np.fft.fft(self.vals, axis=0) / n
        k = np.fft.fftfreq(n, d=1.0 / n)
        phase = np.exp(1j * k * theta)
        # split the Nyquist coefficient between +n/2 and -n/2
        phase[n // 2] = np.cos(n // 2 * theta)
        return np.tensordot(phase, spec, axes=(0, 0))

    @staticmethod
    def from_profiles(grid: ThetaGrid, terms: Sequence[tuple], closed: bool = False) -> "GridFun":
        """sum_j f_j(theta) X_j for closed-form profiles f_j and fixed X_j."""
        t = grid.closed_nodes if closed else grid.nodes
        n = terms[0][1].shape[-1]
        vals = np.zeros((t.size, n, n), dtype=complex)
        dvals = np.zeros_like(vals)
        for f, X in terms:
            vals += np.asarray(f.val(t))[:, None, None] * X
            dvals += np.asarray(f.dval(t))[:, None, None] * X
        return GridFun(grid, vals, closed, dvals)

    @staticmethod
    def zero(grid: ThetaGrid, n: int, closed: bool = False) -> "GridFun":
        m = grid.n + 1 if closed else grid.n
        z = np.zeros((m, n, n), dtype=complex)
        return GridFun(grid, z, closed, z.copy())


def pair_samples(X: GridFun, Y: GridFun) -> np.ndarray:
    """Node-wise invariant pairing <X, Y> = -tr(X Y); shape (nodes,)."""
    X._check(Y)
    return -np.einsum("tij,tji->t", X.vals, Y.vals)


def quad_pair(X: GridFun, Y: GridFun) -> complex:
    """Integral over theta of <X, Y>, using the rule matching the grid flavour."""
    s = pair_samples(X, Y)
    if X.closed:
        return complex(quad_closed(s, X.grid.h))
    return complex(quad_s1(s))


# ---------------------------------------------------------------------------
# group-valued loops and identity-based paths


@dataclass
class LoopPoint:
    """A group-valued function of theta.

    Periodic instances are loops; closed instances with vals[0] = identity
    are the points of the path fibration.  `zvals` caches the exact right
    logarithmic derivative Z(g) = (d_theta g) g^(-1) when it is known in
    closed form; group multiplication and flows propagate it.
    """

    grid: ThetaGrid
    vals: np.ndarray
    closed: bool = False
    zvals: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.vals.shape[-1]

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.closed_nodes if self.closed else self.grid.nodes

    def _check(self, other: "LoopPoint"):
        if self.grid.n != other.grid.n or self.closed != other.closed:
            raise ValueError("grid mismatch")

    def inv(self) -> "LoopPoint":
        zi = None if self.zvals is None else -adjoint_inv(self.vals, self.zvals)
        return LoopPoint(self.grid, group_inv(self.vals), self.closed, zi)

    def mul(self, other: "LoopPoint") -> "LoopPoint":
        """Pointwise product; Z(gh) = Z(g) + Ad(g) Z(h)."""
        self._check(other)
        z = None
        if self.zvals is not None and other.zvals is not None:
            z = self.zvals + adjoint(self.vals, other.zvals)
        return LoopPoint(self.grid, self.vals @ other.vals, self.closed, z)

    def z(self) -> GridFun:
        """Right logarithmic derivative Z(g) = (d_theta g) g^(-1)."""
        if self.zvals is not None:
            return GridFun(self.grid, self.zvals, self.closed)
        if self.closed:
            dv = fd4_dtheta_closed(self.vals, self.grid.h)
        elif _DTHETA_MODE == "fd4":
            dv = fd4_dtheta_periodic(self.vals, self.grid.h)
        else:
            dv = spectral_dtheta(self.vals)
        return GridFun(self.grid, project_algebra(dv @ group_inv(self.vals)), self.closed)

    def log_derivative(self) -> GridFun:
        """Left logarithmic derivative g^(-1) d_theta g = Ad(g^(-1)) Z(g)."""
        zz = self.z()
        return GridFun(self.grid, adjoint_inv(self.vals, zz.vals), self.closed)

    def flow(self, X: GridFun, t: float) -> "LoopPoint":
        """The point g exp(t X), with the Z payload carried along exactly."""
        if X.closed != self.closed or X.grid.n != self.grid.n:
            raise ValueError("grid mismatch")
        e = exp_alg(X.vals, t)
        z = None
        if self.zvals is not None and X.dvals is not None:
            z = self.zvals + adjoint(self.vals, dexp_right(t * X.vals, t * X.dvals))
        return LoopPoint(self.grid, self.vals @ e, self.closed, z)

    def endpoint(self) -> np.ndarray:
        if not self.closed:
            raise ValueError("endpoint is defined for closed-grid paths")
        return self.vals[-1]

    @staticmethod
    def identity(grid: ThetaGrid, n: int, closed: bool = False) -> "LoopPoint":
        m = grid.n + 1 if closed else grid.n
        vals = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n)).copy()
        return LoopPoint(grid, vals, closed, np.zeros_like(vals))

    @staticmethod
    def constant(grid: ThetaGrid, k: np.ndarray, closed: bool = False) -> "LoopPoint":
        m = grid.n + 1 if closed else grid.n
        vals = np.broadcast_to(np.asarray(k, dtype=complex), (m, k.shape[0], k.shape[0])).copy()
        return LoopPoint(grid, vals, closed, np.zeros_like(vals))


def loop_mul(g: LoopPoint, h: LoopPoint) -> LoopPoint:
    return g.mul(h)


def loop_inv(g: LoopPoint) -> LoopPoint:
    return g.inv()


def dtheta(x):
    """Derivative along the loop parameter: Z(g) for points, d/dtheta for vectors."""
    if isinstance(x, LoopPoint):
        return x.z()
    if isinstance(x, GridFun):
        return x.dtheta()
    raise TypeError(f"cannot differentiate {type(x).__name__}")


def conj_loop(h: LoopPoint, X: GridFun, inverse: bool = True) -> GridFun:
    """Ad(h^(-1)) X (or Ad(h) X) node-wise, with the exact derivative when known.

    d_theta Ad(h^(-1)) X = Ad(h^(-1)) (d_theta X + [X, Z(h)]).
    """
    if inverse:
        vals = adjoint_inv(h.vals, X.vals)
    else:
        vals = adjoint(h.vals, X.vals)
    d = None
    if X.dvals is not None and h.zvals is not None:
        if inverse:
            d = adjoint_inv(h.vals, X.dvals + bracket(X.vals, h.zvals))
        else:
            d = adjoint(h.vals, X.dvals + bracket(h.zvals, X.vals))
    return GridFun(X.grid, vals, X.closed, d)


# ---------------------------------------------------------------------------
# closed-form loops


@dataclass(frozen=True)
class AnalyticLoop:
    """exp(f(theta) xi) for a fixed algebra direction xi and scalar profile f."""

    xi: np.ndarray
    profile: TrigPoly

    def realize(self, grid: ThetaGrid, closed: bool = False) -> LoopPoint:
        t = grid.closed_nodes if closed else grid.nodes
        f = np.asarray(self.profile.val(t))
        df = np.asarray(self.profile.dval(t))
        vals = exp_alg(f[:, None, None] * self.xi)
        # single generator: Z = f'(theta) xi exactly
        z = df[:, None, None] * np.broadcast_to(self.xi, vals.shape)
        return LoopPoint(grid, vals, closed, np.ascontiguousarray(z))


def product_loop(grid: ThetaGrid, factors: Sequence[tuple], closed: bool = False) -> LoopPoint:
    """Product of single-generator loops exp(f_j xi_j), exact Z payload.

    Each factor is (profile, xi) where profile provides val/dval.
    """
    out = None
    for f, xi in factors:
        t = grid.closed_nodes if closed else grid.nodes
        fv = np.asarray(f.val(t))
        dfv = np.asarray(f.dval(t))
        vals = exp_alg(fv[:, None, None] * xi)
        z = np.ascontiguousarray(dfv[:, None, None] * np.broadcast_to(xi, vals.shape))
        lp = LoopPoint(grid, vals, closed, z)
        out = lp if out is None else out.mul(lp)
    if out is None:
        raise ValueError("need at least one factor")
    return out


# ---------------------------------------------------------------------------
# paths in the loop group


@dataclass
class PathInLoopGroup:
    """A path [0, 1] -> loop group, sampled at M parameter nodes.

    `vels` optionally carries exact left-trivialised velocities; the
    `velocity` method is the generic 4th-order finite-difference route.
    """

    sgrid: np.ndarray
    loops: list
    vels: Optional[list] = None

    @property
    def m(self) -> int:
        return len(self.loops)

    def endpoint(self) -> LoopPoint:
        return self.loops[-1]

    def velocity(self, i: int) -> GridFun:
        """Left-trivialised s-derivative at node i (4th-order differences)."""
        ds = self.sgrid[1] - self.sgrid[0]
        m = self.m
        if m < 5:
            raise ValueError("need at least 5 path nodes")
        stack = [lp.vals for lp in self.loops]
        if 2 <= i <= m - 3:
            raw = (-stack[i + 2] + 8 * stack[i + 1] - 8 * stack[i - 1] + stack[i - 2]) / (12 * ds)
        elif i < 2:
            # rows are anchored at the boundary node, not at i
            raw = sum(c * stack[j] for j, c in enumerate(_FD4_LEFT[i])) / ds
        else:
            r = m - 1 - i
            raw = -sum(c * stack[m - 1 - j] for j, c in enumerate(_FD4_LEFT[r])) / ds
        g = self.loops[i]
        ltriv = project_algebra(group_inv(g.vals) @ raw)
        return GridFun(g.grid, ltriv, g.closed)

    def velocity_exact(self, i: int) -> GridFun:
        if self.vels is None:
            return self.velocity(i)
        return self.vels[i]

    def mul(self, other: "PathInLoopGroup") -> "PathInLoopGroup":
        """Pointwise product path; velocities compose as Ad(h^(-1)) f' + h'."""
        loops = [f.mul(g) for f, g in zip(self.loops, other.loops)]
        vels = None
        if self.vels is not None and other.vels is not None:
            vels = [conj_loop(h, vf) + vg
                    for h, vf, vg in zip(other.loops, self.vels, other.vels)]
        return PathInLoopGroup(self.sgrid, loops, vels)


def path_from_factors(grid: ThetaGrid, factors: Sequence[tuple], npath: int,
                      closed: bool = False) -> PathInLoopGroup:
    """Path s -> prod_j exp(sigma_j(s) X_j) with exact velocities.

    factors: sequence of (sigma, X) with sigma a scalar profile on [0, 1]
    vanishing at 0 and X a GridFun algebra loop.  The left-trivialised
    velocity is sum_j Ad((prod_{l>j} E_l)^(-1))(sigma_j'(s) X_j).
    """
    sgrid = np.linspace(0.0, 1.0, npath)
    n = factors[0][1].vals.shape[-1]
    loops, vels = [], []
    for s in sgrid:
        pieces = []
        for sigma, X in factors:
            sv = float(sigma.val(np.asarray(s)))
            dsv = float(sigma.dval(np.asarray(s)))
            e = exp_alg(X.vals, sv)
            z = None
            if X.dvals is not None:
                z = dexp_right(sv * X.vals, sv * X.dvals)
            pieces.append((LoopPoint(grid, e, closed, z), dsv, X))
        lp = pieces[0][0]
        for q, _, _ in pieces[1:]:
            lp = lp.mul(q)
        vel = GridFun.zero(grid, n, closed)
        for j, (_, dsv, X) in enumerate(pieces):
            term = GridFun(grid, dsv * X.vals, closed,
                           None if X.dvals is None else dsv * X.dvals)
            for q, _, _ in pieces[j + 1:]:
                term = conj_loop(q, term)
            vel = vel + term
        loops.append(lp)
        vels.append(vel)
    return PathInLoopGroup(sgrid, loops, vels)


def path_endpoint(f: PathInLoopGroup) -> LoopPoint:
    return f.endpoint()


def path_velocity(f: PathInLoopGroup, i: int) -> GridFun:
    return f.velocity(i)


# ---------------------------------------------------------------------------
# text fixtures

# One line per grid node; a group element is written as 2 n^2 reals,
# row-major with real and imaginary parts interleaved.


def save_loop(path, lp: LoopPoint) -> None:
    n = lp.n
    rows = []
    for mat in lp.vals:
        flat = mat.reshape(-1)
        row = np.empty(2 * n * n)
        row[0::2] = flat.real
        row[1::2] = flat.imag
        rows.append(" ".join(repr(float(x)) for x in row))
    Path(path).write_text("\n".join(rows) + "\n")


def load_loop(path, closed: bool = False) -> LoopPoint:
    rows = [np.array([float(x) for x in line.split()])
            for line in Path(path).read_text().strip().splitlines()]
    width = rows[0].size
    n = int(round(np.sqrt(width / 2)))
    if 2 * n * n != width:
        raise ValueError(f"line width {width} is not 2 n^2")
    vals = np.empty((len(rows), n, n), dtype=complex)
    for i, row in enumerate(rows):
        vals[i] = (row[0::2] + 1j * row[1::2]).reshape(n, n)
    m = len(rows) - 1 if closed else len(rows)
    return LoopPoint(ThetaGrid(m), vals, closed)


def save_analytic_loop(path, loop: AnalyticLoop, group) -> None:
    xi_coeffs = group.coeffs(loop.xi)
    p = loop.profile
    lines = [
        f"group {group.name}",
        "xi " + " ".join(repr(float(c)) for c in xi_coeffs),
        f"a0 {float(p.a0)!r}",
        "cos " + " ".join(repr(float(c)) for c in p.ac),
        "sin " + " ".join(repr(float(c)) for c in p.bs),
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def load_analytic_loop(path):
    from .liegroup import group_by_name

    fields = {}
    for line in Path(path).read_text().strip().splitlines():
        key, _, rest = line.partition(" ")
        fields[key] = rest.strip()
    group = group_by_name(fields["group"])
    xi = group.from_coeffs([float(x) for x in fields["xi"].split()])
    poly = TrigPoly(
        a0=float(fields["a0"]),
        ac=tuple(float(x) for x in fields["cos"].split()) if fields.get("cos") else (),
        bs=tuple(float(x) for x in fields["sin"].split()) if fields.get("sin") else (),
    )
    return AnalyticLoop(xi, poly)
