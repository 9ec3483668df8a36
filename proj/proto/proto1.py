#!/usr/bin/env python3
"""Prototype: measure P(N=1) for the scaled FHN SDE under different
spike-classification semantics, at the Fig-8 parameter points."""
import numpy as np

SQ3 = np.sqrt(3.0)

def run_point(mu_t, sigma_t, eps=1e-4, n_paths=4000, dt=1e-3, seed=1,
              z_top=1.5, track_first_step_only=True):
    rng = np.random.default_rng(seed)
    s1 = sigma_t / np.sqrt(2.0)
    s2 = sigma_t / np.sqrt(2.0)
    se = np.sqrt(eps)
    xi_P, z_P = -mu_t, 0.5
    rho = 0.05
    # entry state: riding the nullcline into the left edge
    xi = np.full(n_paths, -3.0)
    z = 0.5 + se * 9.0 + rng.normal(0, 0.05, n_paths)   # z_nc(-3) = 1/2 + 9*sqrt(eps)
    phi = np.zeros(n_paths)
    hitF = np.zeros(n_paths, dtype=bool)
    done = np.zeros(n_paths, dtype=bool)
    outcome = np.zeros(n_paths, dtype=np.int8)  # 1 spike(N=1), 2 rotation(N>=2)
    touched_top = np.zeros(n_paths, dtype=bool)    # would have left D via top
    touched_left = np.zeros(n_paths, dtype=bool)   # would have left D via left side
    sdt = np.sqrt(dt)
    t = 0.0
    while not done.all() and t < 200.0:
        act = ~done
        W1 = rng.normal(0, sdt, act.sum())
        W2 = rng.normal(0, sdt, act.sum())
        x_, z_, p_ = xi[act], z[act], phi[act]
        dxi = (0.5 - z_ + se * (-x_**3 / 3.0)) * dt + s1 * W1
        dz = (mu_t + 2.0 * x_ * z_ + se * (2.0 * x_**4 / 3.0)) * dt \
             - 2.0 * s1 * x_ * W1 + s2 * W2
        xn, zn = x_ + dxi, z_ + dz
        # winding around P (only meaningful after F-hit; cheap to track always)
        a0 = np.arctan2(z_ - z_P, x_ - xi_P)
        a1 = np.arctan2(zn - z_P, xn - xi_P)
        dphi = np.mod(a1 - a0 + np.pi, 2 * np.pi) - np.pi
        pn = p_ + dphi
        # F-hit: crossing z=0.5 with xi in [-3, xi_P - rho]
        crossF = ((z_ - 0.5) * (zn - 0.5) < 0) & (xn <= xi_P - rho) & (xn >= -3.0)
        h = hitF[act].copy()
        newly = crossF & ~h
        pn[newly] = 0.0
        h |= crossF
        # confirmed spike: z deep below separatrix
        spike = zn < -0.5
        # rotation complete: phi >= 2*pi (only counts after F was hit)
        rot = h & (pn >= 2 * np.pi)
        touched_top[np.flatnonzero(act)[zn > z_top]] = True
        touched_left[np.flatnonzero(act)[xn < -3.0]] = True
        idx = np.flatnonzero(act)
        fin_s = idx[spike]
        fin_r = idx[rot & ~spike]
        outcome[fin_s] = 1
        outcome[fin_r] = 2
        done[fin_s] = True
        done[fin_r] = True
        xi[act], z[act], phi[act] = xn, zn, pn
        hitF[act] = h
        t += dt
    n_s = (outcome == 1).sum()
    n_r = (outcome == 2).sum()
    n_und = (outcome == 0).sum()
    p1 = n_s / max(n_s + n_r, 1)
    return p1, touched_top.mean(), touched_left.mean(), n_und

def Phi(x):
    from math import erf, sqrt
    return 0.5 * (1 + erf(x / sqrt(2)))

if __name__ == "__main__":
    pi4 = np.pi ** 0.25
    print(f"{'mu_t':>7} {'sigma':>6} {'Phi':>8} {'P1_hat':>8} {'se':>7} "
          f"{'top%':>6} {'left%':>6} {'undone':>6}")
    for mu_t in [0.12, 0.05, 0.01, -0.09]:
        st = 0.1
        p1, top, left, und = run_point(mu_t, st)
        phi = Phi(-pi4 * mu_t / st)
        se = np.sqrt(phi * (1 - phi) / 4000)
        print(f"{mu_t:7.3f} {st:6.2f} {phi:8.4f} {p1:8.4f} {se:7.4f} "
              f"{100*top:6.1f} {100*left:6.1f} {und:6d}")
