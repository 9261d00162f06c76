"""Jit-compiled inner loops (internal).

Public entry points live in forces.py and integrator.py. All kernels work
on structure-of-arrays views (contiguous x, y, z, vx, vy, vz) so the pair
loops vectorize. Accumulation order is fixed (row-major over ordered pairs),
which makes single-threaded runs bitwise reproducible.
"""

from __future__ import annotations

import numpy as np
from numba import njit

#: squared pair distance below which 1/r is treated as singular
R2_SINGULAR = 1e-18
#: bound on sum of squared velocities/coordinates; NaN and inf fail it too
BLOWUP_LIMIT = 1e24

STATUS_OK = 0
STATUS_BLOWUP = 1
STATUS_SINGULAR = 2


@njit(cache=True, fastmath=True, error_model="numpy")
def coulomb_trap_forces(x, y, z, nu2, box, fx, fy, fz):
    """Direct O(N^2) force sum, minimal image along x, transverse trap nu2.

    Fills fx, fy, fz in place and returns the smallest squared pair
    distance encountered (1e300 when N == 1).
    """
    n = x.shape[0]
    inv_box = 1.0 / box
    min_r2 = 1e300
    for j in range(n):
        xj = x[j]
        yj = y[j]
        zj = z[j]
        ax = 0.0
        ay = 0.0
        az = 0.0
        mj = 1e300
        for k in range(n):
            dx = xj - x[k]
            dx -= box * np.rint(dx * inv_box)
            dy = yj - y[k]
            dz = zj - z[k]
            mask = 1.0 if k != j else 0.0
            # self term gets r2 = 1 and zero weight, keeping the loop branchless
            r2 = dx * dx + dy * dy + dz * dz + (1.0 - mask)
            mj = min(mj, r2 + (1.0 - mask) * 1e300)
            inv3 = mask / (r2 * np.sqrt(r2))
            ax += dx * inv3
            ay += dy * inv3
            az += dz * inv3
        min_r2 = min(min_r2, mj)
        fx[j] = ax
        fy[j] = ay - nu2 * yj
        fz[j] = az - nu2 * zj
    return min_r2


@njit(cache=True, fastmath=True, error_model="numpy")
def potential_energy_kernel(x, y, z, nu2, box):
    """Trap plus pair Coulomb energy; returns (energy, min squared distance)."""
    n = x.shape[0]
    inv_box = 1.0 / box
    energy = 0.0
    min_r2 = 1e300
    for j in range(n):
        energy += 0.5 * nu2 * (y[j] * y[j] + z[j] * z[j])
        for k in range(j + 1, n):
            dx = x[j] - x[k]
            dx -= box * np.rint(dx * inv_box)
            dy = y[j] - y[k]
            dz = z[j] - z[k]
            r2 = dx * dx + dy * dy + dz * dz
            min_r2 = min(min_r2, r2)
            energy += 1.0 / np.sqrt(r2)
    return energy, min_r2


@njit(cache=True)
def advance_chunk(x, y, z, vx, vy, vz, fx, fy, fz, nu2, box, dt,
                  ou_c, ou_drift, sig_v, k1, k2, noise):
    """Advance len(nu2) - 1 steps of half-kick / damped free flight / half-kick.

    On entry fx, fy, fz must hold the forces for the current positions at
    nu2[0]; on exit they hold the forces for the final positions at nu2[-1],
    so consecutive chunks chain without recomputation.

    noise has shape (steps, 2, 3, n): slot 0 drives the velocity update,
    slot 1 the extra position noise; the flight applies the exact
    Ornstein-Uhlenbeck one-step map with correlated position/velocity
    increments (coefficients precomputed by the caller).

    Returns (status, step, min_r2): status 0 on success, 1 on blow-up,
    2 on a near-coincident pair; step is the offending step index.
    """
    n = x.shape[0]
    n_steps = nu2.shape[0] - 1
    half = 0.5 * dt
    min_r2 = 1e300
    for s in range(n_steps):
        for i in range(n):
            vx[i] += half * fx[i]
            vy[i] += half * fy[i]
            vz[i] += half * fz[i]
        for i in range(n):
            gvx = noise[s, 0, 0, i]
            gvy = noise[s, 0, 1, i]
            gvz = noise[s, 0, 2, i]
            nx = x[i] + ou_drift * vx[i] + k1 * gvx + k2 * noise[s, 1, 0, i]
            ny = y[i] + ou_drift * vy[i] + k1 * gvy + k2 * noise[s, 1, 1, i]
            nz = z[i] + ou_drift * vz[i] + k1 * gvz + k2 * noise[s, 1, 2, i]
            vx[i] = ou_c * vx[i] + sig_v * gvx
            vy[i] = ou_c * vy[i] + sig_v * gvy
            vz[i] = ou_c * vz[i] + sig_v * gvz
            x[i] = nx - box * np.floor(nx / box)
            y[i] = ny
            z[i] = nz
        total = 0.0
        for i in range(n):
            total += (vx[i] * vx[i] + vy[i] * vy[i] + vz[i] * vz[i]
                      + x[i] * x[i] + y[i] * y[i] + z[i] * z[i])
        if not (total < BLOWUP_LIMIT):
            return STATUS_BLOWUP, s, min_r2
        r2 = coulomb_trap_forces(x, y, z, nu2[s + 1], box, fx, fy, fz)
        min_r2 = min(min_r2, r2)
        if r2 < R2_SINGULAR:
            return STATUS_SINGULAR, s, min_r2
        for i in range(n):
            vx[i] += half * fx[i]
            vy[i] += half * fy[i]
            vz[i] += half * fz[i]
    return STATUS_OK, n_steps, min_r2
