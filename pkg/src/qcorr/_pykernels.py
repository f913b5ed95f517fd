"""Pure-Python implementations of the hot kernels.

This module is the reference for ``_ckernels.pyx``: both expose the same
functions with the same algorithms, and the test-suite checks that they agree.
It is selected automatically when the compiled extension is unavailable.
"""
import math

import numpy as np

from . import constants as C

_I2 = np.eye(2, dtype=complex)
_PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------
def _jacobi_sym3(m):
    a = [[float(m[i][j]) for j in range(3)] for i in range(3)]
    fro = math.sqrt(sum(a[i][j] ** 2 for i in range(3) for j in range(3)))
    for _ in range(C.JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0 * (a[0][1] ** 2 + a[0][2] ** 2 + a[1][2] ** 2))
        if off <= C.JACOBI3_OFF_TOL * max(fro, 1e-300):
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p][q]
            if apq == 0.0:
                continue
            theta = 0.5 * math.atan2(2.0 * apq, a[q][q] - a[p][p])
            c, s = math.cos(theta), math.sin(theta)
            for k in range(3):
                akp, akq = a[k][p], a[k][q]
                a[k][p] = c * akp - s * akq
                a[k][q] = s * akp + c * akq
            for k in range(3):
                apk, aqk = a[p][k], a[q][k]
                a[p][k] = c * apk - s * aqk
                a[q][k] = s * apk + c * aqk
            a[p][q] = a[q][p] = 0.0
    return sorted((a[0][0], a[1][1], a[2][2]), reverse=True)


def eig_sym3(m):
    """Eigenvalues of a real symmetric 3x3 matrix, sorted descending."""
    a00, a01, a02 = float(m[0][0]), float(m[0][1]), float(m[0][2])
    a11, a12, a22 = float(m[1][1]), float(m[1][2]), float(m[2][2])
    q = (a00 + a11 + a22) / 3.0
    p1 = a01 * a01 + a02 * a02 + a12 * a12
    b00, b11, b22 = a00 - q, a11 - q, a22 - q
    p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * p1
    if p2 == 0.0:
        return np.array([q, q, q])
    p = math.sqrt(p2 / 6.0)
    det = (
        b00 * (b11 * b22 - a12 * a12)
        - a01 * (a01 * b22 - a12 * a02)
        + a02 * (a01 * a12 - b11 * a02)
    )
    r = det / (2.0 * p * p * p)
    if 1.0 - abs(r) < C.EIG3_DISCRIMINANT_TOL:
        return np.array(_jacobi_sym3(m))
    phi = math.acos(r) / 3.0
    l1 = q + 2.0 * p * math.cos(phi)
    l3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    l2 = 3.0 * q - l1 - l3
    return np.array(sorted((l1, l2, l3), reverse=True))


def eig_herm4(m):
    """Eigenvalues of a 4x4 Hermitian matrix by cyclic complex Jacobi."""
    a = np.array(m, dtype=complex)
    fro = math.sqrt(float(np.sum(np.abs(a) ** 2)))
    tol = C.JACOBI4_OFF_TOL * max(1.0, fro)
    for _ in range(C.JACOBI_MAX_SWEEPS):
        off = math.sqrt(float(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)))
        if off < tol:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                z = a[p, q]
                r = abs(z)
                if r == 0.0:
                    continue
                ph = z / r
                theta = 0.5 * math.atan2(2.0 * r, a[q, q].real - a[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                # U = diag(1, conj(ph)) on (p, q) followed by a real rotation
                u_pp, u_pq = c, s
                u_qp, u_qq = -s * ph.conjugate(), c * ph.conjugate()
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = colp * u_pp + colq * u_qp
                a[:, q] = colp * u_pq + colq * u_qq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = rowp * u_pp + rowq * u_qp.conjugate()
                a[q, :] = rowp * u_pq + rowq * u_qq.conjugate()
                a[p, q] = a[q, p] = 0.0
    return np.array(sorted(np.real(np.diag(a)), reverse=True))


# ---------------------------------------------------------------------------
# measurement disturbance and sphere search
# ---------------------------------------------------------------------------
def disturbance(rho, n):
    """Squared Hilbert-Schmidt distance between rho and its measured version.

    The measurement is the projective measurement on qubit A along the Bloch
    direction ``n``; uses rho - Pi(rho) = P rho + rho P - 2 P rho P.
    """
    proj = 0.5 * (_I2 + n[0] * _PAULI[0] + n[1] * _PAULI[1] + n[2] * _PAULI[2])
    p4 = np.kron(proj, _I2)
    prho = p4 @ rho
    diff = prho + rho @ p4 - 2.0 * prho @ p4
    return float(np.vdot(diff, diff).real)


def grid_scan(rho, dirs, maximize):
    """Best lattice direction index and its value (lowest index wins ties)."""
    dirs = np.asarray(dirs, dtype=float)
    proj = 0.5 * (_I2[None] + np.einsum("ka,aij->kij", dirs, _PAULI))
    p4 = np.einsum("kij,lm->kiljm", proj, _I2).reshape(-1, 4, 4)
    prho = p4 @ rho
    diff = prho + rho @ p4 - 2.0 * prho @ p4
    vals = np.sum(np.abs(diff) ** 2, axis=(1, 2))
    idx = int(np.argmax(vals) if maximize else np.argmin(vals))
    return idx, float(vals[idx])


def _tangent_basis(n):
    if abs(n[0]) < 0.9:
        e1 = np.cross(n, (1.0, 0.0, 0.0))
    else:
        e1 = np.cross(n, (0.0, 1.0, 0.0))
    e1 = e1 / math.sqrt(float(e1 @ e1))
    e2 = np.cross(n, e1)
    return e1, e2


def _chart(n0, e1, e2, a, b):
    v = n0 + a * e1 + b * e2
    return v / math.sqrt(float(v @ v))


def sphere_search(rho, dirs, maximize, tol):
    """Optimize the measurement disturbance over the Bloch sphere.

    Lattice scan, then rounds of golden-section line searches along the
    principal axes of a finite-difference Hessian in a local tangent chart.
    Returns ``(value, direction)``.
    """
    rho = np.asarray(rho, dtype=complex)
    sign = -1.0 if maximize else 1.0
    idx, _ = grid_scan(rho, dirs, maximize)
    n0 = np.array(dirs[idx], dtype=float)
    n0 = n0 / math.sqrt(float(n0 @ n0))
    g_best = sign * disturbance(rho, n0)
    h = C.HESSIAN_STEP
    w = C.REFINE_WINDOW

    for rnd in range(C.REFINE_MAX_ROUNDS):
        g_start = g_best
        e1, e2 = _tangent_basis(n0)

        def g(a, b):
            return sign * disturbance(rho, _chart(n0, e1, e2, a, b))

        gpa, gma, gpb, gmb = g(h, 0.0), g(-h, 0.0), g(0.0, h), g(0.0, -h)
        gpp, gmm = g(h, h), g(-h, -h)
        h11 = (gpa - 2.0 * g_best + gma) / (h * h)
        h22 = (gpb - 2.0 * g_best + gmb) / (h * h)
        h12 = (gpp + gmm - gpa - gma - gpb - gmb + 2.0 * g_best) / (2.0 * h * h)
        theta = 0.5 * math.atan2(2.0 * h12, h11 - h22)
        ct, st = math.cos(theta), math.sin(theta)
        ca, cb = 0.0, 0.0
        for ua, ub in ((ct, st), (-st, ct)):
            lo, hi = -w, w
            x1 = hi - _INVPHI * (hi - lo)
            x2 = lo + _INVPHI * (hi - lo)
            f1 = g(ca + x1 * ua, cb + x1 * ub)
            f2 = g(ca + x2 * ua, cb + x2 * ub)
            for _ in range(C.GOLDEN_ITERS):
                if f1 <= f2:
                    hi, x2, f2 = x2, x1, f1
                    x1 = hi - _INVPHI * (hi - lo)
                    f1 = g(ca + x1 * ua, cb + x1 * ub)
                else:
                    lo, x1, f1 = x1, x2, f2
                    x2 = lo + _INVPHI * (hi - lo)
                    f2 = g(ca + x2 * ua, cb + x2 * ub)
            s, fs = (x1, f1) if f1 <= f2 else (x2, f2)
            if fs < g_best:
                ca, cb, g_best = ca + s * ua, cb + s * ub, fs
        n0 = _chart(n0, e1, e2, ca, cb)
        if rnd + 1 >= C.REFINE_MIN_ROUNDS and g_start - g_best <= tol:
            break
    return sign * g_best, n0


# ---------------------------------------------------------------------------
# batched closed forms
# ---------------------------------------------------------------------------
def bloch_batch(rhos):
    """Local vector x and correlation matrix T for a stack of 4x4 states."""
    r = np.asarray(rhos, dtype=complex).reshape(-1, 2, 2, 2, 2)
    x = 0.5 * np.einsum("nikjk,aji->na", r, _PAULI).real
    t = 0.5 * np.einsum("nikjl,aji,blk->nab", r, _PAULI, _PAULI).real
    return x, t


def closed_forms(rhos, eps_x):
    """MIN, geometric discord and |x| for a stack of states."""
    xs, ts = bloch_batch(rhos)
    n = xs.shape[0]
    mins, gds, xnorm = np.empty(n), np.empty(n), np.empty(n)
    for k in range(n):
        x, t = xs[k], ts[k]
        tt = t @ t.T
        xn2 = float(x @ x)
        tr = float(np.trace(tt))
        xnorm[k] = math.sqrt(xn2)
        if xnorm[k] > eps_x:
            mn = tr - float(x @ tt @ x) / xn2
        else:
            mn = tr - eig_sym3(tt)[2]
        gd = xn2 + tr - eig_sym3(np.outer(x, x) + tt)[0]
        mins[k] = mn if mn > 0.0 else 0.0
        gds[k] = gd if gd > 0.0 else 0.0
    return mins, gds, xnorm
