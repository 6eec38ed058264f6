"""Spatial grids, differential operators, and the amplitude/action decomposition.

Fields are plain 1-D numpy arrays aligned to a Grid.  Real fields carry
densities (P), amplitudes (R) and actions (S); complex fields carry the
wavefunction psi.  The decomposition psi = R * exp(i S / hbar) and its
inverse live here because every other module consumes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as _field

import numpy as np
from scipy.integrate import cumulative_trapezoid

PERIODIC = "periodic"
DIRICHLET = "dirichlet-zero"

# Quotients grad(P)/P and grad(R)/R are singular at wavefunction nodes.
# Points with R < NODE_FLOOR_REL * max(R) are masked out of any quotient.
NODE_FLOOR_REL = 1e-6

RealField = np.ndarray
ComplexField = np.ndarray


@dataclass(frozen=True)
class Constants:
    """Physical constants of a scenario.

    kT is not free: the thermostat temperature is pinned to hbar * omega.
    """

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega", "kB"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"Constants.{name} must be strictly positive")

    @property
    def kT(self) -> float:
        return self.hbar * self.omega


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D mesh.

    Periodic grids omit the duplicate endpoint: x covers [x0, x0 + length)
    with spacing length / n.  Dirichlet grids include both endpoints with
    spacing length / (n - 1); fields there are expected to vanish at the
    walls when used as wavefunctions.
    """

    n_points: int
    length: float
    boundary: str = PERIODIC
    x0: float = 0.0

    def __post_init__(self):
        if self.n_points < 16:
            raise ValueError("grid needs at least 16 points")
        if self.length <= 0.0:
            raise ValueError("grid length must be positive")
        if self.boundary not in (PERIODIC, DIRICHLET):
            raise ValueError(f"unknown boundary kind: {self.boundary!r}")

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    @property
    def spacing(self) -> float:
        if self.periodic:
            return self.length / self.n_points
        return self.length / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.spacing * np.arange(self.n_points)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers of the discrete Fourier basis (periodic only)."""
        if not self.periodic:
            raise ValueError("wavenumbers are defined for periodic grids only")
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)


def make_grid(n: int, length: float, boundary: str = PERIODIC,
              x0: float | None = None) -> Grid:
    """Build a grid centered on the origin unless x0 is given."""
    if x0 is None:
        x0 = -0.5 * length
    return Grid(n_points=int(n), length=float(length), boundary=boundary, x0=float(x0))


def check_field(f: np.ndarray, g: Grid) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim != 1 or f.shape[0] != g.n_points:
        raise ValueError(
            f"field length {f.shape} does not match grid with {g.n_points} points")
    return f


def _spectral_gradient(f: np.ndarray, g: Grid) -> np.ndarray:
    k = g.wavenumbers()
    ik = 1j * k
    if g.n_points % 2 == 0:
        # First derivative of the unpaired Nyquist mode is ambiguous; drop it.
        ik[g.n_points // 2] = 0.0
    out = np.fft.ifft(ik * np.fft.fft(f))
    if np.isrealobj(f):
        return out.real
    return out


def _fd_gradient(f: np.ndarray, g: Grid) -> np.ndarray:
    return np.gradient(f, g.spacing, edge_order=2)


def gradient(f: np.ndarray, g: Grid) -> np.ndarray:
    """d/dx: spectral on periodic grids, 2nd-order differences otherwise."""
    f = check_field(f, g)
    if g.periodic:
        return _spectral_gradient(f, g)
    return _fd_gradient(f, g)


def laplacian(f: np.ndarray, g: Grid) -> np.ndarray:
    """d2/dx2, consistent with gradient to discretization order."""
    f = check_field(f, g)
    if g.periodic:
        k = g.wavenumbers()
        out = np.fft.ifft(-(k * k) * np.fft.fft(f))
        return out.real if np.isrealobj(f) else out
    dx2 = g.spacing ** 2
    out = np.empty_like(f, dtype=complex if np.iscomplexobj(f) else float)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / dx2
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dx2
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / dx2
    return out


def integrate(f: np.ndarray, g: Grid) -> float:
    """Quadrature consistent with the boundary kind."""
    f = check_field(f, g)
    if g.periodic:
        return complex(np.sum(f) * g.spacing).real if np.iscomplexobj(f) \
            else float(np.sum(f) * g.spacing)
    if np.iscomplexobj(f):
        return complex(np.trapezoid(f, dx=g.spacing)).real
    return float(np.trapezoid(f, dx=g.spacing))


def integrate_complex(f: np.ndarray, g: Grid) -> complex:
    f = check_field(f, g)
    if g.periodic:
        return complex(np.sum(f) * g.spacing)
    return complex(np.trapezoid(f, dx=g.spacing))


def node_mask(R: np.ndarray, rel_floor: float = NODE_FLOOR_REL) -> np.ndarray:
    """Boolean mask of points safely away from amplitude nodes."""
    R = np.abs(np.asarray(R))
    return R >= rel_floor * R.max()


def norm_squared(psi: np.ndarray, g: Grid) -> float:
    return integrate(np.abs(psi) ** 2, g)


@dataclass
class MadelungBundle:
    """Coherent (R, S, P) triple with P = R^2 and unit normalization.

    grad_S caches the action gradient m*v computed directly from psi at
    decomposition time; spatial differentiation of S itself is avoided
    because S picks up a non-periodic linear part for traveling states.
    """

    R: RealField
    S: RealField
    P: RealField
    grad_S: RealField | None = None

    def check(self, g: Grid, rtol: float = 1e-8, norm_tol: float = 1e-6) -> None:
        for f in (self.R, self.S, self.P):
            check_field(f, g)
        if np.any(self.P < -rtol * self.P.max()):
            raise ValueError("density P has negative values")
        scale = max(self.P.max(), 1e-300)
        if np.max(np.abs(self.P - self.R ** 2)) > rtol * scale:
            raise ValueError("bundle violates P = R^2")
        total = integrate(self.P, g)
        if abs(total - 1.0) > norm_tol:
            raise ValueError(f"density not normalized: integral = {total}")


def _raw_compose(R: np.ndarray, S: np.ndarray, hbar: float) -> np.ndarray:
    return R * np.exp(1j * S / hbar)


def action_gradient(b: MadelungBundle, g: Grid, c: Constants) -> np.ndarray:
    """grad S = hbar * Im(grad(psi)/psi), masked to zero near nodes.

    Differentiates the composed psi, which stays periodic/smooth even when
    S itself carries a linear (winding) part.
    """
    if b.grad_S is not None:
        return b.grad_S
    psi = _raw_compose(b.R, b.S, c.hbar)
    return _current_quotient(psi, g, c)


def _current_quotient(psi: np.ndarray, g: Grid, c: Constants) -> np.ndarray:
    """hbar * Im(psi' / psi) with the denominator floored at the node level.

    The floor keeps the quotient finite and continuous through near-node
    regions so it can be antidifferentiated without ringing; values below
    the node floor are not trustworthy and stay masked downstream.
    """
    dpsi = gradient(psi, g)
    P = np.abs(psi) ** 2
    floor = (NODE_FLOOR_REL ** 2) * P.max()
    return c.hbar * np.imag(np.conj(psi) * dpsi) / np.maximum(P, floor)


def velocity_field(b: MadelungBundle, g: Grid, c: Constants) -> np.ndarray:
    """Convective velocity v = grad(S)/m."""
    return action_gradient(b, g, c) / c.mass


def decompose(psi: ComplexField, g: Grid, c: Constants) -> MadelungBundle:
    """Split a normalized psi into amplitude R, action S and density P.

    S is recovered by integrating the velocity field m*v = hbar*Im(psi'*/psi)
    from the density maximum, where the additive constant is pinned to
    hbar * arg(psi).  Integrating the current avoids phase unwrapping, which
    is ill-posed at nodes.
    """
    psi = check_field(np.asarray(psi, dtype=complex), g)
    nrm = norm_squared(psi, g)
    if nrm < 1e-12:
        raise ValueError("cannot decompose an (almost) all-zero field")
    if abs(nrm - 1.0) > 1e-6:
        raise ValueError(f"psi is not normalized: |psi|^2 integrates to {nrm}")

    R = np.abs(psi)
    P = R ** 2
    grad_S = _current_quotient(psi, g, c)

    if g.periodic:
        # Split off the mean (winding) part; antidifferentiate the periodic
        # remainder spectrally, then add the linear part back.
        mean = grad_S.mean()
        per_hat = np.fft.fft(grad_S - mean)
        k = g.wavenumbers()
        denom = np.where(k == 0.0, 1.0, 1j * k)
        per_hat[k == 0.0] = 0.0
        S_raw = mean * (g.x - g.x[0]) + np.fft.ifft(per_hat / denom).real
    else:
        S_raw = cumulative_trapezoid(grad_S, g.x, initial=0.0)

    i0 = int(np.argmax(P))
    S = S_raw - S_raw[i0] + c.hbar * float(np.angle(psi[i0]))
    return MadelungBundle(R=R, S=S, P=P, grad_S=grad_S)


def compose(b: MadelungBundle, g: Grid, c: Constants) -> ComplexField:
    """psi = R * exp(i S / hbar).  Rejects bundles violating the invariants."""
    b.check(g)
    return _raw_compose(b.R, b.S, c.hbar)


def align_action_in_time(bundles: list[MadelungBundle], c: Constants) -> list[MadelungBundle]:
    """Remove frame-to-frame 2*pi*hbar branch jumps of the action constant.

    Each decomposed frame fixes S only modulo 2*pi*hbar (through arg psi).
    Time derivatives of S need the same branch across frames; anchor at the
    point that stays farthest from nodes over the whole sequence.
    """
    if not bundles:
        return bundles
    P_min = np.min(np.stack([b.P for b in bundles]), axis=0)
    anchor = int(np.argmax(P_min))
    period = 2.0 * np.pi * c.hbar
    out = [bundles[0]]
    for b in bundles[1:]:
        jump = period * np.round((out[-1].S[anchor] - b.S[anchor]) / period)
        if jump != 0.0:
            b = MadelungBundle(R=b.R, S=b.S + jump, P=b.P, grad_S=b.grad_S)
        out.append(b)
    return out
