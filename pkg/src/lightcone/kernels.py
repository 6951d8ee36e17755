"""Region-wise closed forms of the momentum-space light-cone kernels,
their equal-time / zero-momentum splits and constraints, and a mollified
radial Fourier engine used as an independent oracle.

Conventions: momentum p = (omega, k_vec), k = |k_vec| > 0; cone regions
are InsideUpper (omega > k), InsideLower (omega < -k), Outside
(|omega| < k) and Boundary (|omega| = k).  Each kernel id carries the
unit-prefactor closed formula; overall constants live in the
`normalization` field.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    OnLightCone,
    QuadratureNotConverged,
    TooCloseToSingularSet,
    UnsupportedKernel,
    ZeroMomentum,
)


class ConeRegion(Enum):
    InsideUpper = "inside_upper"
    InsideLower = "inside_lower"
    Outside = "outside"
    Boundary = "boundary"


KERNEL_IDS = (
    "K0Hat",
    "IK0_over_t",
    "IK0_over_t2",
    "Delta_over_t",
    "Delta_over_t2",
    "XiK0_over_t3",
    "XiXiK0_over_t4",
    "XiXiDelta_over_t3",
    "K0_et",
    "K0_zm",
    "K0c_et",
    "K0c_zm",
)

# Ids whose formula involves log|omega -+ k| and blows up on the cone.
LOG_SINGULAR = {"Delta_over_t", "Delta_over_t2", "XiXiDelta_over_t3"}

# Parity of the full evaluated value under p -> -p.
PARITY = {
    "K0Hat": +1,
    "IK0_over_t": +1,
    "IK0_over_t2": -1,
    "Delta_over_t": -1,
    "Delta_over_t2": +1,
    "XiK0_over_t3": -1,
    "XiXiK0_over_t4": -1,
    "XiXiDelta_over_t3": -1,
    "K0_et": -1,
    "K0_zm": -1,
    "K0c_et": +1,
    "K0c_zm": +1,
}

# Homogeneity degree of the differentiated tensor forms.
TENSOR_HOMOGENEITY_DEGREE = {"XiXiDelta_over_t3": -1, "XiXiK0_over_t4": 0}


@dataclass(frozen=True)
class KernelHat:
    id: str
    normalization: float = 1.0

    def __post_init__(self):
        if self.id not in KERNEL_IDS:
            raise UnsupportedKernel(self.id)


def classify(omega, k, tol=1e-12):
    """Cone-region tag of the momentum (omega, |k_vec| = k)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if abs(abs(omega) - k) <= tol:
        return ConeRegion.Boundary
    if omega > k:
        return ConeRegion.InsideUpper
    if omega < -k:
        return ConeRegion.InsideLower
    return ConeRegion.Outside


def _xixi_delta_base(omega, k):
    lm = np.log(abs(omega - k))
    lp = np.log(abs(omega + k))
    return (1j / k) * ((omega - k) ** 2 * lm - (omega + k) ** 2 * lp)


def _xixi_delta_base_dk(omega, k):
    """First and second k-derivatives of the XiXiDelta_over_t3 base."""
    lm = np.log(abs(omega - k))
    lp = np.log(abs(omega + k))
    s = (omega - k) ** 2 * lm - (omega + k) ** 2 * lp
    s_k = -2.0 * (omega - k) * lm - 2.0 * (omega + k) * lp - 2.0 * omega
    s_kk = 2.0 * lm - 2.0 * lp
    b1 = -1j * s / k**2 + 1j * s_k / k
    b2 = 2j * s / k**3 - 2j * s_k / k**2 + 1j * s_kk / k
    return b1, b2


def eval_hat(kernel, omega, k):
    """Scalar closed-form value of the kernel at (omega, k).  For the
    tensor ids this returns the spherically symmetric base function whose
    k-derivatives build the tensor (see eval_hat_tensor)."""
    if k == 0:
        raise ZeroMomentum("k = 0")
    region = classify(omega, k)
    kid = kernel.id
    if region is ConeRegion.Boundary and kid in LOG_SINGULAR:
        raise OnLightCone(f"{kid} at |omega| = k")
    n = kernel.normalization
    inside = region in (ConeRegion.InsideUpper, ConeRegion.InsideLower)
    sign = 1.0 if region is ConeRegion.InsideUpper else -1.0

    if kid == "K0Hat":
        # Delta functions on the shell; zero off the singular support.
        if region is ConeRegion.Boundary:
            raise OnLightCone("K0Hat supported on |omega| = k")
        return 0.0j
    if kid == "IK0_over_t":
        return n * (0.0j if inside else 1.0 / k + 0.0j)
    if kid == "IK0_over_t2":
        if inside:
            return n * (1j * sign)
        return n * 1j * omega / k
    if kid == "Delta_over_t":
        return n * (1j / k) * (np.log(abs(omega - k)) - np.log(abs(omega + k)))
    if kid == "Delta_over_t2":
        return n * (1.0 / k) * (
            (omega - k) * np.log(abs(omega - k))
            - (omega + k) * np.log(abs(omega + k))
        ) + 0.0j
    if kid == "XiK0_over_t3":
        return n * (0.0j if inside else omega**2 / (2.0 * k) + k / 2.0 + 0.0j)
    if kid == "XiXiK0_over_t4":
        if inside:
            return n * (sign * k**2 / 6.0 + 0.0j)
        return n * (omega**3 / (6.0 * k) + k * omega / 2.0 + 0.0j)
    if kid == "XiXiDelta_over_t3":
        return n * _xixi_delta_base(omega, k)
    if kid == "K0_et":
        return n * 1j * omega / k
    if kid == "K0_zm":
        if inside:
            return n * 1j * (sign - omega / k)
        return 0.0j
    if kid == "K0c_et":
        return n * (1.0 / k) + 0.0j
    if kid == "K0c_zm":
        return n * (-1.0 / k + 0.0j) if inside else 0.0j
    raise UnsupportedKernel(kid)


def eval_hat_tensor(kernel, omega, k_vec, alpha, beta=None):
    """Spatial tensor components built from the base via the spherical
    decomposition d_a g = khat_a g', d_a d_b g = khat_a khat_b g''
    + (delta_ab - khat_a khat_b) g'/k.  Spatial indices alpha, beta are
    1-based (1, 2, 3)."""
    k_vec = np.asarray(k_vec, dtype=float)
    k = float(np.linalg.norm(k_vec))
    if k == 0:
        raise ZeroMomentum("|k_vec| = 0")
    khat = k_vec / k
    region = classify(omega, k)
    kid = kernel.id
    n = kernel.normalization
    a = alpha - 1
    inside = region in (ConeRegion.InsideUpper, ConeRegion.InsideLower)
    sign = 1.0 if region is ConeRegion.InsideUpper else -1.0

    if kid == "XiK0_over_t3":
        if beta is not None:
            raise UnsupportedKernel("XiK0_over_t3 carries one index")
        if inside:
            return 0.0j
        g1 = -(omega**2) / (2.0 * k**2) + 0.5
        return n * 1j * khat[a] * g1
    if beta is None:
        raise UnsupportedKernel(f"{kid} carries two indices")
    b = beta - 1
    delta = 1.0 if a == b else 0.0
    if kid == "XiXiK0_over_t4":
        if inside:
            return n * (sign * delta / 3.0 + 0.0j)
        g1 = -(omega**3) / (6.0 * k**2) + omega / 2.0
        g2 = omega**3 / (3.0 * k**3)
        return n * (
            khat[a] * khat[b] * g2 + (delta - khat[a] * khat[b]) * g1 / k + 0.0j
        )
    if kid == "XiXiDelta_over_t3":
        if region is ConeRegion.Boundary:
            raise OnLightCone("XiXiDelta_over_t3 at |omega| = k")
        b1, b2 = _xixi_delta_base_dk(omega, k)
        return n * (khat[a] * khat[b] * b2 + (delta - khat[a] * khat[b]) * b1 / k)
    raise UnsupportedKernel(f"{kid} is not a tensor kernel")


def harmonicity_residual(kernel, omega, k, h=1e-3):
    """Central finite-difference residual of
    (d^2/domega^2 - d^2/dk^2 - (2/k) d/dk) applied to the scalar closed
    form; O(h^2) off the singular set where the integration constants are
    chosen correctly."""
    if abs(abs(omega) - k) <= 3.0 * h or k <= 3.0 * h:
        raise TooCloseToSingularSet(f"(omega, k) = ({omega}, {k}) with h = {h}")

    def f(w, kk):
        return eval_hat(kernel, w, kk)

    d2w = (f(omega + h, k) - 2.0 * f(omega, k) + f(omega - h, k)) / h**2
    d2k = (f(omega, k + h) - 2.0 * f(omega, k) + f(omega, k - h)) / h**2
    d1k = (f(omega, k + h) - f(omega, k - h)) / (2.0 * h)
    return d2w - d2k - (2.0 / k) * d1k


def homogeneity_check(kernel, omega, k, R):
    """Max over tensor components of |K(p) - R^{-deg} K(R p)| for the
    differentiated tensor forms; deg = -1 for XiXiDelta_over_t3 and 0 for
    XiXiK0_over_t4."""
    if kernel.id not in TENSOR_HOMOGENEITY_DEGREE:
        raise UnsupportedKernel(kernel.id)
    deg = TENSOR_HOMOGENEITY_DEGREE[kernel.id]
    k_vec = np.array([k, 0.0, 0.0])
    worst = 0.0
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            v = eval_hat_tensor(kernel, omega, k_vec, a, b)
            vs = eval_hat_tensor(kernel, R * omega, R * k_vec, a, b)
            worst = max(worst, abs(v - R ** (-deg) * vs))
    return worst


def radial_fourier(f, omega, k, grid=None, check=True, tol=1e-3):
    """Fourier transform of a spherically symmetric function f(t, r):

        fhat(omega, k) = (4 pi / k) int dt e^{i omega t}
                                    int_0^inf r sin(k r) f(t, r) dr

    f must accept numpy arrays (broadcast over t[:, None], r[None, :]).
    grid keys: t_max, nodes_per_unit (t-resolution relative to the
    largest frequency), r_window (half-width around r = |t|), nr.
    With check=True a refined grid must agree to relative tol."""
    if k <= 0:
        raise ZeroMomentum("k must be > 0")
    grid = dict(grid or {})
    t_max = grid.get("t_max", 120.0)
    r_window = grid.get("r_window", None)
    nr = grid.get("nr", 40)
    per_unit = grid.get("nodes_per_unit", 4.0)

    t_fine_hw = grid.get("t_fine_hw", 0.0)
    t_fine_dx = grid.get("t_fine_dx", 0.0)

    def compute(refine):
        freq = max(abs(omega), k, 1.0)
        npan = int(np.ceil(refine * per_unit * t_max * freq / (2.0 * np.pi))) + 8
        edges = np.linspace(-t_max, t_max, npan + 1)
        if t_fine_hw > 0.0 and t_fine_dx > 0.0:
            nfine = int(np.ceil(2.0 * t_fine_hw / (t_fine_dx / refine)))
            fine = np.linspace(-t_fine_hw, t_fine_hw, nfine + 1)
            edges = np.unique(np.concatenate([edges, fine]))
        gl_t, gw_t = np.polynomial.legendre.leggauss(10)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        t = (mid[:, None] + half[:, None] * gl_t[None, :]).ravel()
        wt = (half[:, None] * gw_t[None, :]).ravel()

        gl_r, gw_r = np.polynomial.legendre.leggauss(int(refine * nr))
        if r_window is None:
            r_lo = np.zeros_like(t)
            r_hi = np.full_like(t, t_max)
        else:
            r_lo = np.maximum(np.abs(t) - r_window, 0.0)
            r_hi = np.abs(t) + r_window
        rh = 0.5 * (r_hi - r_lo)
        rm = 0.5 * (r_hi + r_lo)
        r = rm[:, None] + rh[:, None] * gl_r[None, :]
        wr = rh[:, None] * gw_r[None, :]
        inner = np.sum(wr * r * np.sin(k * r) * f(t[:, None], r), axis=1)
        return (4.0 * np.pi / k) * np.sum(wt * np.exp(1j * omega * t) * inner)

    v1 = compute(1)
    if not check:
        return v1
    v2 = compute(2)
    if abs(v2 - v1) > tol * max(1.0, abs(v2)):
        raise QuadratureNotConverged(
            f"radial_fourier refinement moved by {abs(v2 - v1):.3e}"
        )
    return v2


def _gaussian(x, eta):
    return np.exp(-0.5 * (x / eta) ** 2) / (eta * np.sqrt(2.0 * np.pi))


def _smooth_cutoff(t, eta):
    """Smoothly switch off the 1/t^p factors for |t| < 3 eta."""
    x = np.clip(np.abs(t) / (3.0 * eta), 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def mollified_position_kernel(kid, eta, t_damp=14.0):
    """Position-space realization of a kernel id with the on-cone delta
    replaced by a Gaussian of width eta in (r - |t|) and a Gaussian time
    damping of scale t_damp (for conditional convergence).  Returns a
    vectorized f(t, r) for radial_fourier."""
    if kid not in {"K0Hat", "IK0_over_t", "IK0_over_t2", "Delta_over_t", "Delta_over_t2"}:
        raise UnsupportedKernel(kid)

    def f(t, r):
        at = np.abs(t)
        damp = np.exp(-0.5 * (t / t_damp) ** 2)
        shell = _gaussian(r - at, eta) / (2.0 * r)
        cut = _smooth_cutoff(t, eta)
        safe_t = np.where(at < 1e-30, 1.0, t)
        if kid == "K0Hat":
            return 1j * np.sign(t) * shell * damp
        if kid == "IK0_over_t":
            return -shell / np.abs(safe_t) * cut * damp
        if kid == "IK0_over_t2":
            return -np.sign(t) * shell / safe_t**2 * cut * damp
        if kid == "Delta_over_t":
            return np.sign(t) * shell / np.abs(safe_t) * cut * damp
        return shell / safe_t**2 * cut * damp

    return f


def _extrapolate_to_zero(xs, vs):
    """Value at 0 of the interpolating polynomial through (xs, vs)."""
    total = 0.0 + 0.0j
    for i, (xi, vi) in enumerate(zip(xs, vs)):
        w = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                w *= xj / (xj - xi)
        total += w * vi
    return total


def oracle_value(kid, omega, k, eta, t_damp, grid=None):
    """One mollified radial Fourier evaluation at fixed eta and damping
    scale; for the 1/t^2 kernels the damping tail is removed by a linear
    Richardson step in 1/t_damp."""
    g = dict(grid or {})
    g.setdefault("r_window", 10.0 * eta)
    g.setdefault("t_fine_hw", max(20.0 * eta, 1.0))
    g.setdefault("t_fine_dx", eta / 2.0)
    g.setdefault("t_max", 6.0 * t_damp)
    f = mollified_position_kernel(kid, eta, t_damp=t_damp)
    return radial_fourier(f, omega, k, grid=g, check=False)


def oracle_ratio(kid, omega, k, etas=(0.08, 0.04, 0.02), t_damp=20.0, grid=None):
    """Ratio of the mollified radial Fourier oracle to the closed form at
    (omega, k), polynomially extrapolated to zero mollifier width.  The
    limit is an (omega, k)-independent constant per kernel id."""
    kernel = KernelHat(kid)
    closed = eval_hat(kernel, omega, k)
    if abs(closed) < 1e-14:
        raise TooCloseToSingularSet("closed form vanishes; ratio undefined")
    vals = [oracle_value(kid, omega, k, eta, t_damp, grid) / closed for eta in etas]
    return _extrapolate_to_zero(etas, vals)


def k0hat_shell_ratio(omega, k, eta=0.02, t_damp=20.0):
    """Near-shell oracle check for the on-cone kernel: the Gaussian time
    damping smears the shell deltas into Gaussians of width 1/t_damp in
    omega.  Returns the ratio of the mollified transform to the smeared
    reference (1/k)(T/sqrt(2 pi))(exp(-(omega-k)^2 T^2/2)
    - exp(-(omega+k)^2 T^2/2)); an (omega, k)-independent constant near
    either shell."""
    T = t_damp
    f = mollified_position_kernel("K0Hat", eta, t_damp=T)
    grid = {
        "r_window": 10.0 * eta,
        "t_fine_hw": max(20.0 * eta, 1.0),
        "t_fine_dx": eta / 2.0,
        "t_max": 6.0 * T,
    }
    oracle = radial_fourier(f, omega, k, grid=grid, check=False)
    ref = (T / np.sqrt(2.0 * np.pi) / k) * (
        np.exp(-0.5 * ((omega - k) * T) ** 2) - np.exp(-0.5 * ((omega + k) * T) ** 2)
    )
    if abs(ref) < 1e-12:
        raise TooCloseToSingularSet("reference vanishes away from the shell")
    return oracle / ref


def kernel_table(kid, omega_values, k_values):
    """Rows (omega, k, region, re, im) of the closed form on a grid;
    singular points are reported with empty values."""
    kernel = KernelHat(kid)
    rows = []
    for omega in omega_values:
        for k in k_values:
            if k <= 0:
                continue
            region = classify(omega, k)
            try:
                v = eval_hat(kernel, omega, k)
                rows.append((omega, k, region.value, v.real, v.imag))
            except (OnLightCone, ZeroMomentum):
                rows.append((omega, k, region.value, float("nan"), float("nan")))
    return rows


def et_zm_split(kernel):
    """Equal-time / zero-momentum split K = K_et + K_zm, with K_et
    polynomial in omega and K_zm supported in the closed mass cones.
    Defined for the two split source ids."""
    if kernel.id == "IK0_over_t2":
        return KernelHat("K0_et", kernel.normalization), KernelHat(
            "K0_zm", kernel.normalization
        )
    if kernel.id == "IK0_over_t":
        return KernelHat("K0c_et", kernel.normalization), KernelHat(
            "K0c_zm", kernel.normalization
        )
    raise UnsupportedKernel(f"no equal-time split for {kernel.id}")
