"""Time steppers for a HamiltonianAction: Crank-Nicolson (sparse solve),
Strang splitting (exact kinetic exponentials through DST / dense eigenbases),
and a short-iterative-Lanczos exponential for machine-accurate stepping.

All three are unitary: CN by construction of the Cayley form, Strang because
every factor is a unitary multiplication in some orthonormal basis, Lanczos up
to its convergence tolerance (kept at ~1e-13).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grids import dst_forward
from .hamiltonian import HamiltonianAction

CRANK_NICOLSON = "crank-nicolson"
STRANG = "strang"
KRYLOV = "krylov"
SCHEMES = (CRANK_NICOLSON, STRANG, KRYLOV)


class PropagationError(RuntimeError):
    pass


def _check_finite(psi: np.ndarray, context: str):
    if not np.all(np.isfinite(psi.view(float))):
        raise PropagationError(f"NaN/Inf detected during {context}")


class StrangStepper:
    """exp(-i dt V/2) exp(-i dt T) exp(-i dt V/2); kinetic factors are exact
    because the per-axis kinetic operators commute."""

    def __init__(self, h: HamiltonianAction, dt: float):
        self.h = h
        self.dt = dt
        self._spectra = h.axis_spectra()
        self._kin_phase = [np.exp(-1j * dt * ev) for ev, _ in self._spectra]
        self._v_version = None
        self._v_phase = None

    def _refresh_potential(self):
        if self._v_version != self.h.potential_version:
            self._v_phase = np.exp(-0.5j * self.dt * self.h.potential)
            self._v_version = self.h.potential_version

    def _kinetic_full_step(self, psi: np.ndarray) -> np.ndarray:
        for i, (ax, (ev, u)) in enumerate(zip(self.h.axes, self._spectra)):
            phase = self._kin_phase[i]
            if u is None:
                g = ax.grid
                sl = [slice(None)] * psi.ndim
                sl[i] = g.interior
                sl = tuple(sl)
                work = dst_forward(psi[sl], axis=i)
                shape = [1] * psi.ndim
                shape[i] = -1
                work *= phase.reshape(shape)
                psi[sl] = dst_forward(work, axis=i)
            else:
                w = np.tensordot(u.conj().T, np.moveaxis(psi, i, 0), axes=(1, 0))
                shape = [-1] + [1] * (psi.ndim - 1)
                w *= phase.reshape(shape)
                w = np.tensordot(u, w, axes=(1, 0))
                psi = np.ascontiguousarray(np.moveaxis(w, 0, i))
        return psi

    def step(self, psi: np.ndarray) -> np.ndarray:
        self._refresh_potential()
        psi = self._v_phase * psi
        psi = self._kinetic_full_step(psi)
        psi *= self._v_phase
        return psi


class CrankNicolsonStepper:
    """Cayley form (1 + i dt H/2)^-1 (1 - i dt H/2) via sparse LU on the
    active points; refactors whenever the potential changes."""

    def __init__(self, h: HamiltonianAction, dt: float):
        self.h = h
        self.dt = dt
        self._v_version = None
        self._solve = None
        self._rhs = None

    def _refresh(self):
        if self._v_version == self.h.potential_version:
            return
        hs = self.h.sparse_active()
        n = hs.shape[0]
        eye = sp.identity(n, format="csc")
        a = (eye + 0.5j * self.dt * hs).tocsc()
        self._rhs = (eye - 0.5j * self.dt * hs).tocsr()
        try:
            self._solve = spla.splu(a).solve
        except RuntimeError as exc:  # pragma: no cover
            raise PropagationError(f"Crank-Nicolson linear solve failed: {exc}")
        self._v_version = self.h.potential_version

    def step(self, psi: np.ndarray) -> np.ndarray:
        self._refresh()
        sl = self.h.active_slices()
        act = psi[sl]
        vec = self._solve(self._rhs @ act.ravel())
        out = psi.copy()
        out[sl] = vec.reshape(act.shape)
        return out


class KrylovStepper:
    """Short iterative Lanczos: psi -> exp(-i dt H) psi converged to tol."""

    def __init__(self, h: HamiltonianAction, dt: float, tol: float = 1e-13, m_max: int = 60):
        self.h = h
        self.dt = dt
        self.tol = tol
        self.m_max = m_max

    def step(self, psi: np.ndarray) -> np.ndarray:
        h, dt = self.h, self.dt
        beta0 = np.sqrt(np.vdot(psi, psi).real)
        vjs = [psi / beta0]
        alphas: list[float] = []
        betas: list[float] = []
        w = h.apply(vjs[0])
        a = np.vdot(vjs[0], w).real
        alphas.append(a)
        w = w - a * vjs[0]
        y = None
        err = np.inf
        for _ in range(1, self.m_max + 1):
            b = np.sqrt(np.vdot(w, w).real)
            tmat = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
            ev, u = np.linalg.eigh(tmat)
            y = u @ (np.exp(-1j * dt * ev) * u[0])
            err = abs(b * y[-1]) if y.size else 0.0
            if err < self.tol or b < 1e-14:
                break
            betas.append(b)
            v = w / b
            # full reorthogonalization: cheap at these subspace sizes
            for vj in vjs:
                v = v - np.vdot(vj, v) * vj
            v = v / np.sqrt(np.vdot(v, v).real)
            vjs.append(v)
            w = h.apply(v)
            a = np.vdot(v, w).real
            alphas.append(a)
            w = w - a * v - betas[-1] * vjs[-2]
        else:
            raise PropagationError(
                f"Krylov step did not converge (err {err:.2e}, m={self.m_max}); reduce dt")
        out = np.zeros_like(psi)
        for c, vj in zip(y, vjs):
            out += c * vj
        return beta0 * out


def make_stepper(scheme: str, h: HamiltonianAction, dt: float):
    if scheme == STRANG:
        return StrangStepper(h, dt)
    if scheme == CRANK_NICOLSON:
        return CrankNicolsonStepper(h, dt)
    if scheme == KRYLOV:
        return KrylovStepper(h, dt)
    raise ValueError(f"unknown scheme {scheme!r}; pick one of {SCHEMES}")


# ---------------------------------------------------------------------------
# imaginary time
# ---------------------------------------------------------------------------

class ImaginaryStrangStepper:
    """exp(-dtau V/2) exp(-dtau T) exp(-dtau V/2); unconditionally stable."""

    def __init__(self, h: HamiltonianAction, dtau: float):
        self.h = h
        self.dtau = dtau
        self._spectra = h.axis_spectra()
        self._kin_decay = [np.exp(-dtau * ev) for ev, _ in self._spectra]
        self._v_version = None
        self._v_decay = None

    def _refresh_potential(self):
        if self._v_version != self.h.potential_version:
            vmin = float(np.min(self.h.potential))
            self._v_decay = np.exp(-0.5 * self.dtau * (self.h.potential - vmin))
            self._v_version = self.h.potential_version

    def step(self, psi: np.ndarray) -> np.ndarray:
        self._refresh_potential()
        psi = self._v_decay * psi
        for i, (ax, (ev, u)) in enumerate(zip(self.h.axes, self._spectra)):
            decay = self._kin_decay[i]
            if u is None:
                g = ax.grid
                sl = [slice(None)] * psi.ndim
                sl[i] = g.interior
                sl = tuple(sl)
                work = dst_forward(psi[sl], axis=i)
                shape = [1] * psi.ndim
                shape[i] = -1
                work *= decay.reshape(shape)
                psi[sl] = dst_forward(work, axis=i)
            else:
                w = np.tensordot(u.conj().T, np.moveaxis(psi, i, 0), axes=(1, 0))
                shape = [-1] + [1] * (psi.ndim - 1)
                w *= decay.reshape(shape)
                w = np.tensordot(u, w, axes=(1, 0))
                psi = np.ascontiguousarray(np.moveaxis(w, 0, i))
        psi *= self._v_decay
        return psi
