# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors ``_pykernels`` function for function."""
import numpy as np

from libc.math cimport sqrt, acos, cos, sin, atan2, fabs, M_PI

from . import constants as C

cdef extern from "<complex.h>" nogil:
    double creal(double complex z)
    double cimag(double complex z)
    double complex conj(double complex z)
    double cabs(double complex z)

cdef double EIG3_DISC = C.EIG3_DISCRIMINANT_TOL
cdef double JAC3_TOL = C.JACOBI3_OFF_TOL
cdef double JAC4_TOL = C.JACOBI4_OFF_TOL
cdef int JAC_SWEEPS = C.JACOBI_MAX_SWEEPS
cdef int GOLDEN_ITERS = C.GOLDEN_ITERS
cdef int MIN_ROUNDS = C.REFINE_MIN_ROUNDS
cdef int MAX_ROUNDS = C.REFINE_MAX_ROUNDS
cdef double WINDOW = C.REFINE_WINDOW
cdef double HSTEP = C.HESSIAN_STEP
cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------
cdef void _sort3_desc(double* v) noexcept nogil:
    cdef double t
    if v[0] < v[1]:
        t = v[0]; v[0] = v[1]; v[1] = t
    if v[1] < v[2]:
        t = v[1]; v[1] = v[2]; v[2] = t
    if v[0] < v[1]:
        t = v[0]; v[0] = v[1]; v[1] = t


cdef void _jacobi_sym3(const double* m, double* out) noexcept nogil:
    cdef double a[9]
    cdef int i, k, p, q, sweep, pair
    cdef double fro = 0.0, off, apq, theta, c, s, x, y
    cdef int pp[3]
    cdef int qq[3]
    pp[0] = 0; qq[0] = 1; pp[1] = 0; qq[1] = 2; pp[2] = 1; qq[2] = 2
    for i in range(9):
        a[i] = m[i]
        fro += m[i] * m[i]
    fro = sqrt(fro)
    if fro < 1e-300:
        fro = 1e-300
    for sweep in range(JAC_SWEEPS):
        off = sqrt(2.0 * (a[1] * a[1] + a[2] * a[2] + a[5] * a[5]))
        if off <= JAC3_TOL * fro:
            break
        for pair in range(3):
            p = pp[pair]; q = qq[pair]
            apq = a[3 * p + q]
            if apq == 0.0:
                continue
            theta = 0.5 * atan2(2.0 * apq, a[3 * q + q] - a[3 * p + p])
            c = cos(theta); s = sin(theta)
            for k in range(3):
                x = a[3 * k + p]; y = a[3 * k + q]
                a[3 * k + p] = c * x - s * y
                a[3 * k + q] = s * x + c * y
            for k in range(3):
                x = a[3 * p + k]; y = a[3 * q + k]
                a[3 * p + k] = c * x - s * y
                a[3 * q + k] = s * x + c * y
            a[3 * p + q] = 0.0
            a[3 * q + p] = 0.0
    out[0] = a[0]; out[1] = a[4]; out[2] = a[8]
    _sort3_desc(out)


cdef void _eig_sym3(const double* m, double* out) noexcept nogil:
    cdef double a00 = m[0], a01 = m[1], a02 = m[2]
    cdef double a11 = m[4], a12 = m[5], a22 = m[8]
    cdef double q = (a00 + a11 + a22) / 3.0
    cdef double p1 = a01 * a01 + a02 * a02 + a12 * a12
    cdef double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q
    cdef double p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * p1
    cdef double p, det, r, phi, l1, l3
    if p2 == 0.0:
        out[0] = q; out[1] = q; out[2] = q
        return
    p = sqrt(p2 / 6.0)
    det = (b00 * (b11 * b22 - a12 * a12)
           - a01 * (a01 * b22 - a12 * a02)
           + a02 * (a01 * a12 - b11 * a02))
    r = det / (2.0 * p * p * p)
    if 1.0 - fabs(r) < EIG3_DISC:
        _jacobi_sym3(m, out)
        return
    phi = acos(r) / 3.0
    l1 = q + 2.0 * p * cos(phi)
    l3 = q + 2.0 * p * cos(phi + 2.0 * M_PI / 3.0)
    out[0] = l1; out[1] = 3.0 * q - l1 - l3; out[2] = l3
    _sort3_desc(out)


def eig_sym3(m):
    """Eigenvalues of a real symmetric 3x3 matrix, sorted descending."""
    cdef const double[:, ::1] mv = np.ascontiguousarray(m, dtype=float)
    cdef double out[3]
    _eig_sym3(&mv[0, 0], out)
    return np.array([out[0], out[1], out[2]])


cdef void _eig_herm4(double complex* a, double* out) noexcept nogil:
    cdef int i, j, k, p, q, sweep
    cdef double fro = 0.0, off, tol, r, theta, c, s
    cdef double complex z, ph, u_pp, u_pq, u_qp, u_qq, x, y
    for i in range(16):
        fro += creal(a[i]) * creal(a[i]) + cimag(a[i]) * cimag(a[i])
    fro = sqrt(fro)
    tol = JAC4_TOL * (fro if fro > 1.0 else 1.0)
    for sweep in range(JAC_SWEEPS):
        off = 0.0
        for i in range(4):
            for j in range(4):
                if i != j:
                    off += creal(a[4 * i + j]) * creal(a[4 * i + j]) + cimag(a[4 * i + j]) * cimag(a[4 * i + j])
        if sqrt(off) < tol:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                z = a[4 * p + q]
                r = cabs(z)
                if r == 0.0:
                    continue
                ph = z / r
                theta = 0.5 * atan2(2.0 * r, creal(a[4 * q + q]) - creal(a[4 * p + p]))
                c = cos(theta); s = sin(theta)
                u_pp = c; u_pq = s
                u_qp = -s * conj(ph); u_qq = c * conj(ph)
                for k in range(4):
                    x = a[4 * k + p]; y = a[4 * k + q]
                    a[4 * k + p] = x * u_pp + y * u_qp
                    a[4 * k + q] = x * u_pq + y * u_qq
                for k in range(4):
                    x = a[4 * p + k]; y = a[4 * q + k]
                    a[4 * p + k] = x * u_pp + y * conj(u_qp)
                    a[4 * q + k] = x * u_pq + y * conj(u_qq)
                a[4 * p + q] = 0.0
                a[4 * q + p] = 0.0
    for i in range(4):
        out[i] = creal(a[5 * i])
    # insertion sort, descending
    for i in range(1, 4):
        r = out[i]
        j = i - 1
        while j >= 0 and out[j] < r:
            out[j + 1] = out[j]
            j -= 1
        out[j + 1] = r


def eig_herm4(m):
    """Eigenvalues of a 4x4 Hermitian matrix by cyclic complex Jacobi."""
    cdef double complex[:, ::1] mv = np.array(m, dtype=complex, order="C")
    cdef double out[4]
    _eig_herm4(&mv[0, 0], out)
    return np.array([out[0], out[1], out[2], out[3]])


# ---------------------------------------------------------------------------
# measurement disturbance and sphere search
# ---------------------------------------------------------------------------
cdef double _disturbance(const double complex* rho, double nx, double ny, double nz) noexcept nogil:
    cdef double complex P[4]
    cdef double complex Q[16]
    cdef double complex d
    cdef int i, k, j, l, col, row
    cdef double total = 0.0
    P[0] = 0.5 * (1.0 + nz)
    P[1] = 0.5 * (nx - 1j * ny)
    P[2] = 0.5 * (nx + 1j * ny)
    P[3] = 0.5 * (1.0 - nz)
    # Q = (P x I) rho
    for i in range(2):
        for k in range(2):
            for col in range(4):
                Q[4 * (2 * i + k) + col] = P[2 * i] * rho[4 * k + col] + P[2 * i + 1] * rho[4 * (2 + k) + col]
    # diff = Q + rho (P x I) - 2 Q (P x I)
    for row in range(4):
        for j in range(2):
            for l in range(2):
                d = (Q[4 * row + 2 * j + l]
                     + rho[4 * row + l] * P[j] + rho[4 * row + 2 + l] * P[2 + j]
                     - 2.0 * (Q[4 * row + l] * P[j] + Q[4 * row + 2 + l] * P[2 + j]))
                total += creal(d) * creal(d) + cimag(d) * cimag(d)
    return total


def disturbance(rho, n):
    """Squared Hilbert-Schmidt distance between rho and its measured version."""
    cdef const double complex[:, ::1] rv = np.ascontiguousarray(rho, dtype=complex)
    return _disturbance(&rv[0, 0], float(n[0]), float(n[1]), float(n[2]))


cdef int _grid_scan(const double complex* rho, const double* dirs, int ndir,
                    int maximize, double* best) noexcept nogil:
    cdef int k, idx = 0
    cdef double v
    best[0] = _disturbance(rho, dirs[0], dirs[1], dirs[2])
    for k in range(1, ndir):
        v = _disturbance(rho, dirs[3 * k], dirs[3 * k + 1], dirs[3 * k + 2])
        if (maximize and v > best[0]) or (not maximize and v < best[0]):
            best[0] = v
            idx = k
    return idx


def grid_scan(rho, dirs, maximize):
    """Best lattice direction index and its value (lowest index wins ties)."""
    cdef const double complex[:, ::1] rv = np.ascontiguousarray(rho, dtype=complex)
    cdef const double[:, ::1] dv = np.ascontiguousarray(dirs, dtype=float)
    cdef double best
    cdef int idx = _grid_scan(&rv[0, 0], &dv[0, 0], dv.shape[0], 1 if maximize else 0, &best)
    return idx, best


cdef inline void _cross(const double* a, const double* b, double* out) noexcept nogil:
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


cdef void _tangent_basis(const double* n, double* e1, double* e2) noexcept nogil:
    cdef double ax[3]
    cdef double nn
    if fabs(n[0]) < 0.9:
        ax[0] = 1.0; ax[1] = 0.0; ax[2] = 0.0
    else:
        ax[0] = 0.0; ax[1] = 1.0; ax[2] = 0.0
    _cross(n, ax, e1)
    nn = sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2])
    e1[0] /= nn; e1[1] /= nn; e1[2] /= nn
    _cross(n, e1, e2)


cdef inline void _chart(const double* n0, const double* e1, const double* e2,
                        double a, double b, double* out) noexcept nogil:
    cdef int i
    cdef double nn
    for i in range(3):
        out[i] = n0[i] + a * e1[i] + b * e2[i]
    nn = sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2])
    for i in range(3):
        out[i] /= nn


cdef inline double _g(const double complex* rho, double sign, const double* n0,
                      const double* e1, const double* e2, double a, double b) noexcept nogil:
    cdef double v[3]
    _chart(n0, e1, e2, a, b, v)
    return sign * _disturbance(rho, v[0], v[1], v[2])


cdef double _sphere_search(const double complex* rho, const double* dirs, int ndir,
                           int maximize, double tol, double* n0) noexcept nogil:
    cdef double sign = -1.0 if maximize else 1.0
    cdef double grid_best, g_best, g_start, nn
    cdef double e1[3]
    cdef double e2[3]
    cdef double h = HSTEP, w = WINDOW
    cdef double gpa, gma, gpb, gmb, gpp, gmm, h11, h22, h12, theta, ct, st
    cdef double ca, cb, ua, ub, lo, hi, x1, x2, f1, f2, s, fs
    cdef int idx, rnd, ax, it
    idx = _grid_scan(rho, dirs, ndir, maximize, &grid_best)
    n0[0] = dirs[3 * idx]; n0[1] = dirs[3 * idx + 1]; n0[2] = dirs[3 * idx + 2]
    nn = sqrt(n0[0] * n0[0] + n0[1] * n0[1] + n0[2] * n0[2])
    n0[0] /= nn; n0[1] /= nn; n0[2] /= nn
    g_best = sign * _disturbance(rho, n0[0], n0[1], n0[2])

    for rnd in range(MAX_ROUNDS):
        g_start = g_best
        _tangent_basis(n0, e1, e2)
        gpa = _g(rho, sign, n0, e1, e2, h, 0.0)
        gma = _g(rho, sign, n0, e1, e2, -h, 0.0)
        gpb = _g(rho, sign, n0, e1, e2, 0.0, h)
        gmb = _g(rho, sign, n0, e1, e2, 0.0, -h)
        gpp = _g(rho, sign, n0, e1, e2, h, h)
        gmm = _g(rho, sign, n0, e1, e2, -h, -h)
        h11 = (gpa - 2.0 * g_best + gma) / (h * h)
        h22 = (gpb - 2.0 * g_best + gmb) / (h * h)
        h12 = (gpp + gmm - gpa - gma - gpb - gmb + 2.0 * g_best) / (2.0 * h * h)
        theta = 0.5 * atan2(2.0 * h12, h11 - h22)
        ct = cos(theta); st = sin(theta)
        ca = 0.0; cb = 0.0
        for ax in range(2):
            if ax == 0:
                ua = ct; ub = st
            else:
                ua = -st; ub = ct
            lo = -w; hi = w
            x1 = hi - INVPHI * (hi - lo)
            x2 = lo + INVPHI * (hi - lo)
            f1 = _g(rho, sign, n0, e1, e2, ca + x1 * ua, cb + x1 * ub)
            f2 = _g(rho, sign, n0, e1, e2, ca + x2 * ua, cb + x2 * ub)
            for it in range(GOLDEN_ITERS):
                if f1 <= f2:
                    hi = x2; x2 = x1; f2 = f1
                    x1 = hi - INVPHI * (hi - lo)
                    f1 = _g(rho, sign, n0, e1, e2, ca + x1 * ua, cb + x1 * ub)
                else:
                    lo = x1; x1 = x2; f1 = f2
                    x2 = lo + INVPHI * (hi - lo)
                    f2 = _g(rho, sign, n0, e1, e2, ca + x2 * ua, cb + x2 * ub)
            if f1 <= f2:
                s = x1; fs = f1
            else:
                s = x2; fs = f2
            if fs < g_best:
                ca = ca + s * ua; cb = cb + s * ub; g_best = fs
        _chart(n0, e1, e2, ca, cb, n0)
        if rnd + 1 >= MIN_ROUNDS and g_start - g_best <= tol:
            break
    return sign * g_best


def sphere_search(rho, dirs, maximize, tol):
    """Optimize the measurement disturbance over the Bloch sphere.

    Same algorithm as the pure-Python kernel; the search runs without the GIL.
    """
    cdef const double complex[:, ::1] rv = np.ascontiguousarray(rho, dtype=complex)
    cdef const double[:, ::1] dv = np.ascontiguousarray(dirs, dtype=float)
    cdef double n[3]
    cdef double value
    cdef int mx = 1 if maximize else 0
    cdef double ctol = tol
    with nogil:
        value = _sphere_search(&rv[0, 0], &dv[0, 0], dv.shape[0], mx, ctol, n)
    return value, np.array([n[0], n[1], n[2]])


# ---------------------------------------------------------------------------
# batched closed forms
# ---------------------------------------------------------------------------
cdef void _bloch(const double complex* r, double* x, double* t) noexcept nogil:
    # x_a = (1/2) tr(rho sigma_a x I), t_ab = (1/2) tr(rho sigma_a x sigma_b)
    # rows/cols indexed 2i+k (i: qubit A, k: qubit B)
    cdef double complex s01_a = r[2] + r[7]      # rho[0,2] + rho[1,3]
    cdef double d_a = creal(r[0]) + creal(r[5]) - creal(r[10]) - creal(r[15])
    cdef double complex s01_b = r[1] + r[11]     # rho[0,1] + rho[2,3]
    cdef double d_b = creal(r[0]) - creal(r[5]) + creal(r[10]) - creal(r[15])
    x[0] = creal(s01_a)
    x[1] = -cimag(s01_a)
    x[2] = 0.5 * d_a
    # blocks: rho[0,3], rho[1,2]
    cdef double complex r03 = r[3], r12 = r[6]
    cdef double complex r01 = r[1], r23 = r[11], r02 = r[2], r13 = r[7]
    t[0] = creal(r03) + creal(r12)          # xx
    t[1] = -cimag(r03) + cimag(r12)         # xy
    t[2] = creal(r02) - creal(r13)          # xz
    t[3] = -cimag(r03) - cimag(r12)         # yx
    t[4] = -creal(r03) + creal(r12)         # yy
    t[5] = -cimag(r02) + cimag(r13)         # yz
    t[6] = creal(r01) - creal(r23)          # zx
    t[7] = -cimag(r01) + cimag(r23)         # zy
    t[8] = 0.5 * (creal(r[0]) - creal(r[5]) - creal(r[10]) + creal(r[15]))  # zz


def bloch_batch(rhos):
    """Local vector x and correlation matrix T for a stack of 4x4 states."""
    cdef const double complex[:, :, ::1] rv = np.ascontiguousarray(
        np.asarray(rhos, dtype=complex).reshape(-1, 4, 4))
    cdef Py_ssize_t n = rv.shape[0], k
    xs = np.empty((n, 3))
    ts = np.empty((n, 3, 3))
    cdef double[:, ::1] xv = xs
    cdef double[:, :, ::1] tv = ts
    for k in range(n):
        _bloch(&rv[k, 0, 0], &xv[k, 0], &tv[k, 0, 0])
    return xs, ts


def closed_forms(rhos, double eps_x):
    """MIN, geometric discord and |x| for a stack of states."""
    cdef const double complex[:, :, ::1] rv = np.ascontiguousarray(
        np.asarray(rhos, dtype=complex).reshape(-1, 4, 4))
    cdef Py_ssize_t n = rv.shape[0], k
    mins = np.empty(n)
    gds = np.empty(n)
    xns = np.empty(n)
    cdef double[::1] mv = mins, gv = gds, xnv = xns
    cdef double x[3]
    cdef double t[9]
    cdef double tt[9]
    cdef double m2[9]
    cdef double ev[3]
    cdef double xn2, tr, quad, mn, gd, acc
    cdef int i, j, l
    with nogil:
        for k in range(n):
            _bloch(&rv[k, 0, 0], x, t)
            for i in range(3):
                for j in range(3):
                    acc = 0.0
                    for l in range(3):
                        acc = acc + t[3 * i + l] * t[3 * j + l]
                    tt[3 * i + j] = acc
            xn2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
            tr = tt[0] + tt[4] + tt[8]
            xnv[k] = sqrt(xn2)
            if xnv[k] > eps_x:
                quad = 0.0
                for i in range(3):
                    for j in range(3):
                        quad = quad + x[i] * tt[3 * i + j] * x[j]
                mn = tr - quad / xn2
            else:
                _eig_sym3(tt, ev)
                mn = tr - ev[2]
            for i in range(3):
                for j in range(3):
                    m2[3 * i + j] = tt[3 * i + j] + x[i] * x[j]
            _eig_sym3(m2, ev)
            gd = xn2 + tr - ev[0]
            mv[k] = mn if mn > 0.0 else 0.0
            gv[k] = gd if gd > 0.0 else 0.0
    return mins, gds, xns
