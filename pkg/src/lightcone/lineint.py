"""Piecewise (alpha, beta) line-integral weight functions, their
subtraction/compactification identities, nested and unbounded line
integrals, and the damped oracle for the antisymmetric bi-distribution.

The piecewise functions are bilinear polynomials c0 + c1*a + c2*b + c3*a*b
on finitely many regions (interval x interval, optionally cut by the
diagonal).  All region coefficients are integers, so evaluation on
rational inputs is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import QuadratureNotConverged, TailNotNegligible, TooCloseToSingularSet

# Half-plane tags for regions cut by the diagonal.
ABOVE = "b>a"
BELOW = "a>b"


@dataclass(frozen=True)
class Region:
    """One region: alpha-interval x beta-interval, optional diagonal cut,
    and the bilinear polynomial (c0, c1, c2, c3).  Intervals are
    closed-below / open-above; None means unbounded.  Interval endpoints
    may also reference the other variable via the diagonal cut only."""

    a_lo: object
    a_hi: object
    b_lo: object
    b_hi: object
    halfplane: object  # None, ABOVE, or BELOW
    coeffs: tuple

    def contains(self, a, b):
        if self.a_lo is not None and not a >= self.a_lo:
            return False
        if self.a_hi is not None and not a < self.a_hi:
            return False
        if self.b_lo is not None and not b >= self.b_lo:
            return False
        if self.b_hi is not None and not b < self.b_hi:
            return False
        if self.halfplane == ABOVE and not b > a:
            return False
        if self.halfplane == BELOW and not a > b:
            return False
        return True

    def value(self, a, b):
        c0, c1, c2, c3 = self.coeffs
        return c0 + c1 * a + c2 * b + c3 * a * b


@dataclass(frozen=True)
class PiecewisePoly2:
    regions: tuple

    def __call__(self, a, b):
        total = 0 * a
        for r in self.regions:
            if r.contains(a, b):
                total = total + r.value(a, b)
        return total


def _r(a_lo, a_hi, b_lo, b_hi, halfplane, coeffs):
    return Region(a_lo, a_hi, b_lo, b_hi, halfplane, tuple(coeffs))


# Sawtooth-type weight with four regions around the unit square.
J = PiecewisePoly2((
    _r(1, None, 0, 1, None, (0, 1, 3, -4)),
    _r(None, 0, 0, 1, None, (0, -3, -1, 4)),
    _r(1, None, 1, None, BELOW, (0, 4, 4, -8)),
    _r(None, 0, None, 0, ABOVE, (0, -4, -4, 8)),
))

# Odd companion weight supported left/right of the unit square.
I = PiecewisePoly2((
    _r(1, None, 0, 1, None, (-1, 1, 1, 0)),
    _r(None, 0, 0, 1, None, (1, -1, -1, 0)),
))

# 2*(a + b - 2ab) * Theta(ab) * sign(a - b): same-sign quadrants cut by
# the diagonal.
U = PiecewisePoly2((
    _r(0, None, 0, None, BELOW, (0, 2, 2, -4)),
    _r(0, None, 0, None, ABOVE, (0, -2, -2, 4)),
    _r(None, 0, None, 0, BELOW, (0, 2, 2, -4)),
    _r(None, 0, None, 0, ABOVE, (0, -2, -2, 4)),
))

# Compactified weight: (a - b) on the unit square plus
# (4ab - 2a - 2b) * sign(b - a) on the rest of the same-sign quadrants.
JTILDE = PiecewisePoly2((
    _r(0, 1, 0, 1, None, (0, 1, -1, 0)),
    _r(1, None, 0, 1, None, (0, 2, 2, -4)),
    _r(1, None, 1, None, BELOW, (0, 2, 2, -4)),
    _r(1, None, 1, None, ABOVE, (0, -2, -2, 4)),
    _r(0, 1, 1, None, None, (0, -2, -2, 4)),
    _r(None, 0, None, 0, BELOW, (0, 2, 2, -4)),
    _r(None, 0, None, 0, ABOVE, (0, -2, -2, 4)),
))

# Odd difference weight: JTILDE - U restricted to the unit square.
V = PiecewisePoly2((
    _r(None, None, None, None, BELOW, (0, -1, -3, 4)),
    _r(None, None, None, None, ABOVE, (0, 3, 1, -4)),
))

_FUNCTIONS = {"J": J, "I": I, "U": U, "Jtilde": JTILDE, "V": V}

# Subtraction steps reducing J to JTILDE (each is a single-region
# piecewise polynomial; their sum differs from J - JTILDE on a null set
# only).
SUBTRACTIONS = (
    PiecewisePoly2((_r(None, None, 0, 1, None, (0, -3, -1, 4)),)),
    PiecewisePoly2((_r(None, 0, None, None, None, (0, -2, -2, 4)),)),
    PiecewisePoly2((_r(None, None, 0, None, None, (0, 2, 2, -4)),)),
)


def eval_piecewise(fn, a, b):
    """Evaluate one of the named piecewise functions J, I, U, Jtilde, V.

    Exact on Fraction/int inputs; region boundaries follow the
    closed-below / open-above convention."""
    return _FUNCTIONS[fn](a, b)


def jtilde_from_j():
    """Return (JTILDE, subtraction steps): J - P1 - P2 - P3 = JTILDE
    pointwise away from region boundaries."""
    return JTILDE, SUBTRACTIONS


def compact_identity_residual(samples):
    """Max over samples of |JTILDE(a,b) - U(a,b) - V(a,b)*chi(a,b)| with chi
    the indicator of the half-open unit square [0,1)^2 (matching the
    closed-below / open-above region convention); zero in exact
    arithmetic."""
    worst = Fraction(0)
    for a, b in samples:
        chi = 1 if (0 <= a < 1 and 0 <= b < 1) else 0
        res = abs(JTILDE(a, b) - U(a, b) - V(a, b) * chi)
        if res > worst:
            worst = res
    return worst


def _weight(tau, p, q, r):
    return tau**p * (1.0 - tau) ** q * (tau - tau * tau) ** r


def nested_line_integral(F, G, x, y, w1, w2, order=48, tol=1e-9):
    """Nested segment integral

        int_0^1 dtau w1(tau) int_0^1 dtau~ w2(tau~) F(z) G(z~)

    with z = tau*y + (1-tau)*x and z~ = tau~*y + (1-tau~)*z, weights
    w(tau) = tau^p (1-tau)^q (tau - tau^2)^r given as triples (p, q, r).
    Gauss-Legendre tensor quadrature with an order-refinement check."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def compute(n):
        nodes, weights = np.polynomial.legendre.leggauss(n)
        tau = 0.5 * (nodes + 1.0)
        wq = 0.5 * weights
        wa = wq * _weight(tau, *w1)
        wb = wq * _weight(tau, *w2)
        total = 0.0 + 0.0j
        for i, t in enumerate(tau):
            z = t * y + (1.0 - t) * x
            fz = F(z)
            inner = 0.0 + 0.0j
            for j, tt in enumerate(tau):
                zt = tt * y + (1.0 - tt) * z
                inner += wb[j] * G(zt)
            total += wa[i] * fz * inner
        return total

    v1 = compute(order)
    v2 = compute(order + order // 2)
    if abs(v2 - v1) > tol * max(1.0, abs(v2)):
        raise QuadratureNotConverged(
            f"nested line integral: refinement moved by {abs(v2 - v1):.3e}"
        )
    return v2


def unbounded_line_integral(j, x, direction, cutoff, tail_tol=1e-6, order=60):
    """Weighted line integral of a current j along the null ray through x:

        int_-cutoff^cutoff a^2 sign(a) (j^0 - dir . j_vec)(x0 + a, x_vec + a dir) da

    j maps a spacetime point (4 floats) to a real 4-vector j^k.  The tail
    beyond the cutoff is estimated on [cutoff, 2 cutoff]; if it is not
    negligible against tail_tol the integral is rejected."""
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    xi = np.concatenate(([1.0], direction))

    def integrand(a):
        point = x + a * xi
        jk = np.asarray(j(point), dtype=float)
        contraction = jk[0] - direction @ jk[1:]
        return a * a * np.sign(a) * contraction

    def panel(lo, hi, n):
        nodes, weights = np.polynomial.legendre.leggauss(n)
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        return half * sum(w * integrand(mid + half * t) for t, w in zip(nodes, weights))

    npanels = 8
    total = 0.0
    for k in range(npanels):
        lo = -cutoff + 2.0 * cutoff * k / npanels
        hi = -cutoff + 2.0 * cutoff * (k + 1) / npanels
        total += panel(lo, hi, order)
    tail = abs(panel(cutoff, 2.0 * cutoff, order)) + abs(
        panel(-2.0 * cutoff, -cutoff, order)
    )
    if tail > tail_tol * max(1.0, abs(total)):
        raise TailNotNegligible(f"tail estimate {tail:.3e} beyond cutoff {cutoff}")
    return total


def _half_line_nodes(w, damping, upper=None):
    """Panelized Gauss nodes on [0, upper] resolving oscillations of
    frequency w under exponential damping."""
    if upper is None:
        upper = 40.0 / damping
    npanels = int(np.ceil(upper * max(abs(w), damping, 0.25) / 2.5))
    npanels = min(max(npanels, 16), 200_000)
    edges = np.linspace(0.0, upper, npanels + 1)
    nodes, weights = np.polynomial.legendre.leggauss(12)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    a = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    wq = (half[:, None] * weights[None, :]).ravel()
    return a, wq


def _damped_sign_block(w, damping, upper=None):
    """Numerical int sign(a) exp(-i a w - damping |a|) da
    = -2i int_0^inf exp(-damping a) sin(a w) da."""
    a, wq = _half_line_nodes(w, damping, upper)
    return -2j * np.sum(wq * np.exp(-damping * a) * np.sin(a * w))


def _damped_delta_block(w, damping, upper=None):
    """Numerical int exp(-i a w - damping |a|) da
    = 2 int_0^inf exp(-damping a) cos(a w) da = 2 damping/(w^2+damping^2)."""
    a, wq = _half_line_nodes(w, damping, upper)
    return 2.0 * np.sum(wq * np.exp(-damping * a) * np.cos(a * w))


DAMPING_LADDER = (1e-1, 5e-2, 2.5e-2)


def bidist_A_oracle(u, v, damping=None):
    """Damped evaluation of the antisymmetric bi-distribution built from
    4 Theta(ab) sign(a - b) = sign(a) - sign(b) - 2 sign(a - b):

        A_eps(u, v) = E(u) D(v) - D(u) E(v) - 2 E(u) D(u + v)

    with E the damped odd block and D the damped delta block, both
    computed by quadrature.  With damping=None the ladder (1e-1, 5e-2,
    2.5e-2) is evaluated and linearly Richardson-extrapolated to zero
    damping."""
    ladder = DAMPING_LADDER if damping is None else (damping,)
    for w in (u, v, u + v, u - v):
        if abs(w) <= max(ladder):
            raise TooCloseToSingularSet(f"argument {w} within damping of singular set")

    def assemble(eps):
        eu = _damped_sign_block(u, eps)
        ev = _damped_sign_block(v, eps)
        du = _damped_delta_block(u, eps)
        dv = _damped_delta_block(v, eps)
        duv = _damped_delta_block(u + v, eps)
        return eu * dv - du * ev - 2.0 * eu * duv

    values = [assemble(eps) for eps in ladder]
    if len(values) == 1:
        return values[0]
    # Linear extrapolation in damping from the two finest rungs.
    e1, e2 = ladder[-2], ladder[-1]
    v1, v2 = values[-2], values[-1]
    return v2 + (v2 - v1) * e2 / (e1 - e2)


def damped_sign_block(w, damping):
    """Public quadrature oracle for int sign(a) exp(-i a w - damping|a|) da."""
    return _damped_sign_block(w, damping)


def damped_delta_block(w, damping):
    """Public quadrature oracle for int exp(-i a w - damping|a|) da."""
    return _damped_delta_block(w, damping)
