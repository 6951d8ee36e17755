"""Finite mode-set representations of on-shell Maxwell potentials and Dirac
wave functions in a periodic spatial box of side L.

Conventions: metric (+,-,-,-); a Maxwell mode stores contravariant
components (p, eps) of a complex plane wave eps * exp(-i p.x); the real
potential is the mode plus its conjugate, symmetrized on evaluation.
A Dirac mode is a plane-wave solution a * exp(-i k.x) with
k0 = shell * omega(kvec), omega(kvec) = sqrt(|kvec|^2 + m^2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .clifford import ETA, minkowski, slash
from .errors import ConfigInvalid, InvalidMode, ShellViolation

ONSHELL_TOL = 1e-9

DEFAULT_BOX = 32.0 * np.pi


def lower(v):
    """Covariant components of a contravariant four-vector."""
    return ETA @ np.asarray(v, dtype=complex)


@dataclass(frozen=True)
class MaxwellMode:
    """A null plane-wave potential mode eps * exp(-i p.x) in Lorenz gauge."""

    p: tuple
    eps: tuple

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        eps = np.asarray(self.eps, dtype=complex)
        if p.shape != (4,) or eps.shape != (4,):
            raise InvalidMode("p and eps must be four-vectors")
        scale = float(np.sum(p * p))
        if scale == 0.0:
            raise InvalidMode("zero momentum")
        if abs(minkowski(p, p)) > ONSHELL_TOL * scale:
            raise InvalidMode(f"momentum off the light cone: p^2 = {minkowski(p, p):.3e}")
        if abs(minkowski(p, eps)) > ONSHELL_TOL * max(1.0, float(np.sum(np.abs(eps) ** 2))):
            raise InvalidMode("polarization violates the Lorenz gauge condition")
        object.__setattr__(self, "p", tuple(float(c) for c in p))
        object.__setattr__(self, "eps", tuple(complex(c) for c in eps))

    @property
    def p_arr(self):
        return np.asarray(self.p, dtype=float)

    @property
    def eps_arr(self):
        return np.asarray(self.eps, dtype=complex)


def field_tensor_hat(mode):
    """Covariant field tensor F_{jk} = -i (p_j eps_k - eps_j p_k) of one mode.

    Antisymmetric, and F_{ij} p^j = 0 by the null and gauge conditions."""
    p_low = lower(mode.p_arr)
    e_low = lower(mode.eps_arr)
    return -1j * (np.outer(p_low, e_low) - np.outer(e_low, p_low))


@dataclass(frozen=True)
class MaxwellField:
    """A real Maxwell field: stored modes plus (implicitly) their conjugates."""

    modes: tuple
    box: float = DEFAULT_BOX

    def __post_init__(self):
        if self.box <= 0:
            raise InvalidMode("box side must be positive")
        for mode in self.modes:
            n = np.asarray(mode.p[1:]) * self.box / (2.0 * np.pi)
            if np.max(np.abs(n - np.round(n))) > 1e-9:
                raise InvalidMode(f"spatial momentum {mode.p[1:]} not box-quantized")
        object.__setattr__(self, "modes", tuple(self.modes))

    def terms(self):
        """Complex exponential terms (eps, p) with the potential
        A(x) = sum eps * exp(-i(p0 t - pvec.x)); includes conjugates."""
        out = []
        for mode in self.modes:
            out.append((mode.eps_arr, mode.p_arr))
            out.append((np.conj(mode.eps_arr), -mode.p_arr))
        return out


@dataclass(frozen=True)
class DiracMode:
    """A plane-wave Dirac solution a * exp(-i(k0 t - kvec.x)) of mass m
    with k0 = shell * omega(kvec)."""

    shell: int
    kvec: tuple
    a: tuple
    m: float

    def __post_init__(self):
        if self.shell not in (1, -1):
            raise InvalidMode("shell must be +1 or -1")
        if self.m <= 0:
            raise InvalidMode("mass must be positive")
        kvec = np.asarray(self.kvec, dtype=float)
        a = np.asarray(self.a, dtype=complex)
        if kvec.shape != (3,) or a.shape != (4,):
            raise InvalidMode("kvec must be a 3-vector and a a 4-spinor")
        norm = np.linalg.norm(a)
        if norm == 0.0:
            raise InvalidMode("zero amplitude")
        k = np.concatenate(([self.k0_of(kvec)], kvec))
        residual = np.linalg.norm((slash(k) - self.m * np.eye(4)) @ a)
        if residual > ONSHELL_TOL * self.m * norm:
            raise InvalidMode(f"amplitude off the mass shell: residual {residual:.3e}")
        object.__setattr__(self, "kvec", tuple(float(c) for c in kvec))
        object.__setattr__(self, "a", tuple(complex(c) for c in a))

    def k0_of(self, kvec):
        return self.shell * np.sqrt(float(np.dot(kvec, kvec)) + self.m**2)

    @property
    def omega(self):
        return np.sqrt(float(np.dot(self.kvec, self.kvec)) + self.m**2)

    @property
    def k0(self):
        return self.shell * self.omega

    @property
    def kvec_arr(self):
        return np.asarray(self.kvec, dtype=float)

    @property
    def a_arr(self):
        return np.asarray(self.a, dtype=complex)

    def at(self, x):
        """Value of the mode at a spacetime point x = (t, xvec)."""
        x = np.asarray(x, dtype=float)
        phase = np.exp(-1j * (self.k0 * x[0] - np.dot(self.kvec_arr, x[1:])))
        return self.a_arr * phase


def dirac_basis(shell, kvec, m):
    """Two orthonormalized amplitude spinors spanning the solutions of
    (k_slash - m) a = 0 at k0 = shell * omega(kvec)."""
    kvec = np.asarray(kvec, dtype=float)
    omega = np.sqrt(float(np.dot(kvec, kvec)) + m * m)
    k = np.concatenate(([shell * omega], kvec))
    proj = slash(k) + m * np.eye(4)
    seeds = (0, 1) if shell > 0 else (2, 3)
    basis = []
    for i in seeds:
        b = proj[:, i].copy()
        for prev in basis:
            b -= np.vdot(prev, b) * prev
        basis.append(b / np.linalg.norm(b))
    return basis


@dataclass(frozen=True)
class FermionicJet:
    """A fermionic perturbation (delta_psi, psi): finite Dirac mode sets of
    equal mass.  With the sea-excitation flag, psi lives on the lower and
    delta_psi on the upper mass shell."""

    psi: tuple
    delta_psi: tuple
    m: float
    sea_excitation: bool = True

    def __post_init__(self):
        for mode in tuple(self.psi) + tuple(self.delta_psi):
            if abs(mode.m - self.m) > 1e-12 * self.m:
                raise InvalidMode("all modes must share the jet mass")
        if self.sea_excitation:
            if any(mode.shell != -1 for mode in self.psi):
                raise ShellViolation("psi modes must lie on the lower mass shell")
            if any(mode.shell != 1 for mode in self.delta_psi):
                raise ShellViolation("delta_psi modes must lie on the upper mass shell")
        object.__setattr__(self, "psi", tuple(self.psi))
        object.__setattr__(self, "delta_psi", tuple(self.delta_psi))

    def psi_at(self, x):
        return sum((mode.at(x) for mode in self.psi), np.zeros(4, dtype=complex))

    def delta_psi_at(self, x):
        return sum((mode.at(x) for mode in self.delta_psi), np.zeros(4, dtype=complex))


def pairing_predicates(jet_u, jet_v, tol=1e-9):
    """Enumerate mode quadruples with equal momentum transfer
    p(delta_psi_u) - p(psi_u) = p(delta_psi_v) - p(psi_v) and flag those
    violating the matching frequency relation."""
    quadruples = []
    flagged = []
    for du in jet_u.delta_psi:
        for pu in jet_u.psi:
            for dv in jet_v.delta_psi:
                for pv in jet_v.psi:
                    dp_u = du.kvec_arr - pu.kvec_arr
                    dp_v = dv.kvec_arr - pv.kvec_arr
                    if np.max(np.abs(dp_u - dp_v)) > tol:
                        continue
                    quad = (du, pu, dv, pv)
                    quadruples.append(quad)
                    dw_u = du.k0 - pu.k0
                    dw_v = dv.k0 - pv.k0
                    if abs(dw_u - dw_v) > tol:
                        flagged.append(quad)
    return {
        "quadruples": quadruples,
        "flagged": flagged,
        "implication_holds": not flagged,
    }


def time_translate(obj, dt):
    """Translate a mode, field, or jet forward in time by dt: every mode
    amplitude picks up the phase exp(-i p0 dt)."""
    if isinstance(obj, MaxwellMode):
        phase = np.exp(-1j * obj.p[0] * dt)
        return MaxwellMode(obj.p, tuple(phase * e for e in obj.eps))
    if isinstance(obj, MaxwellField):
        return MaxwellField(tuple(time_translate(m, dt) for m in obj.modes), obj.box)
    if isinstance(obj, DiracMode):
        phase = np.exp(-1j * obj.k0 * dt)
        return replace(obj, a=tuple(phase * c for c in obj.a))
    if isinstance(obj, FermionicJet):
        return replace(
            obj,
            psi=tuple(time_translate(m, dt) for m in obj.psi),
            delta_psi=tuple(time_translate(m, dt) for m in obj.delta_psi),
        )
    raise TypeError(f"cannot time-translate {type(obj).__name__}")


def _dirac_mode_from_json(entry, box, mass):
    try:
        shell = int(entry["shell"])
        n = np.asarray(entry["n"], dtype=float)
        a = np.asarray(entry["a_re"], dtype=float) + 1j * np.asarray(
            entry["a_im"], dtype=float
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad Dirac mode entry: {exc}") from exc
    kvec = 2.0 * np.pi * n / box
    try:
        return DiracMode(shell, tuple(kvec), tuple(a), mass)
    except InvalidMode as exc:
        raise ConfigInvalid(str(exc)) from exc


def load_config(source):
    """Load and validate a field configuration.

    Accepts a path to a JSON file or an already-parsed dict of the form
    { "box": L, "mass": m,
      "maxwell": [{"p": [..4], "eps_re": [..4], "eps_im": [..4]}, ...],
      "jets": [{"psi": [mode...], "delta_psi": [mode...]}, ...] }
    with Dirac modes {"shell": +-1, "n": [3 ints], "a_re": [..4], "a_im": [..4]}.

    Returns (box, mass, maxwell_fields, jets): each maxwell entry becomes a
    single-mode MaxwellField."""
    if isinstance(source, dict):
        raw = source
    else:
        try:
            with open(source) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read configuration: {exc}") from exc
    try:
        box = float(raw["box"])
        mass = float(raw["mass"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"missing or bad box/mass: {exc}") from exc
    if box <= 0 or mass <= 0:
        raise ConfigInvalid("box and mass must be positive")
    fields_out = []
    for entry in raw.get("maxwell", []):
        try:
            p = tuple(float(c) for c in entry["p"])
            eps = tuple(
                float(r) + 1j * float(i)
                for r, i in zip(entry["eps_re"], entry["eps_im"])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad maxwell entry: {exc}") from exc
        try:
            fields_out.append(MaxwellField((MaxwellMode(p, eps),), box))
        except InvalidMode as exc:
            raise ConfigInvalid(str(exc)) from exc
    jets_out = []
    for entry in raw.get("jets", []):
        psi = tuple(_dirac_mode_from_json(e, box, mass) for e in entry.get("psi", []))
        delta = tuple(
            _dirac_mode_from_json(e, box, mass) for e in entry.get("delta_psi", [])
        )
        try:
            jets_out.append(FermionicJet(psi, delta, mass))
        except (InvalidMode, ShellViolation) as exc:
            raise ConfigInvalid(str(exc)) from exc
    return box, mass, fields_out, jets_out
