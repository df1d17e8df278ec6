# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (double precision only).

Step-for-step mirror of :mod:`polyfiber._pykernels`; the two must return
the same status codes and agree to rounding on the endpoints.
"""

from libc.stdint cimport int64_t

cdef extern from "complex.h" nogil:
    double cabs(double complex)

cdef enum:
    MAXN = 32

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef int SUCCESS = 0
cdef int NEAR_END = 1
cdef int FAILED = 2
cdef int DIVERGED = 3
cdef int MAX_STEPS = 4


def zero_sum_masks(re_parts, im_parts):
    cdef int n = len(re_parts)
    if n > 62:
        raise ValueError("at most 62 residues")
    cdef int64_t[64] vr
    cdef int64_t[64] vi
    cdef int i
    for i in range(n):
        vr[i] = re_parts[i]
        vi[i] = im_parts[i]
    cdef unsigned long long full = (1ULL << n) - 1
    cdef unsigned long long gray = 0, g, top = 1ULL << n
    cdef int64_t sr = 0, si = 0
    cdef int bit
    out = []
    g = 1
    while g < top:
        bit = __builtin_ctzll(g)
        gray ^= 1ULL << bit
        if (gray >> bit) & 1ULL:
            sr += vr[bit]
            si += vi[bit]
        else:
            sr -= vr[bit]
            si -= vi[bit]
        if sr == 0 and si == 0 and gray != full:
            out.append(gray)
        g += 1
    out.sort()
    return out


cdef struct Hom:
    int n
    double complex m[MAXN]
    double complex p[MAXN]
    double complex gamma


cdef inline double vnorm(double complex* v, int n) nogil:
    cdef double best = 0.0, a
    cdef int i
    for i in range(n):
        a = cabs(v[i])
        if a > best:
            best = a
    return best


cdef int solve(double complex* a, double complex* b, double complex* x, int n) nogil:
    """Gaussian elimination with partial pivoting on an n x n row-major
    matrix; destroys a and b.  Returns 0 when exactly singular."""
    cdef int col, r, c, piv
    cdef double best, v
    cdef double complex tmp, f, inv, s
    for col in range(n):
        piv = col
        best = cabs(a[col * n + col])
        for r in range(col + 1, n):
            v = cabs(a[r * n + col])
            if v > best:
                best = v
                piv = r
        if best == 0.0:
            return 0
        if piv != col:
            for c in range(n):
                tmp = a[col * n + c]
                a[col * n + c] = a[piv * n + c]
                a[piv * n + c] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        inv = 1.0 / a[col * n + col]
        for r in range(col + 1, n):
            f = a[r * n + col] * inv
            if f != 0:
                for c in range(col, n):
                    a[r * n + c] = a[r * n + c] - f * a[col * n + c]
                b[r] = b[r] - f * b[col]
    for r in range(n - 1, -1, -1):
        s = b[r]
        for c in range(r + 1, n):
            s = s - a[r * n + c] * x[c]
        x[r] = s / a[r * n + r]
    return 1


cdef void powers(Hom* h, double complex* x, double complex* pw) nogil:
    # pw[i * n + k] = x_i ** k, k = 0..n-1
    cdef int n = h.n, i, k
    for i in range(n):
        pw[i * n] = 1.0
        if n > 1:
            pw[i * n + 1] = x[i]
        for k in range(2, n):
            pw[i * n + k] = pw[i * n + k - 1] * x[i]


cdef void jacobian(Hom* h, double complex* pw, double t, double complex* jac) nogil:
    cdef int n = h.n, k, i
    cdef double complex gt = h.gamma * t
    cdef double s = 1.0 - t
    for k in range(1, n):
        for i in range(n):
            jac[(k - 1) * n + i] = s * k * h.m[i] * pw[i * n + k - 1]
        jac[(k - 1) * n + k - 1] = jac[(k - 1) * n + k - 1] + gt * k * pw[(k - 1) * n + k - 1]
        jac[(k - 1) * n + n - 1] = jac[(k - 1) * n + n - 1] - gt * k * pw[(n - 1) * n + k - 1]
    for i in range(n):
        jac[(n - 1) * n + i] = h.p[i]


cdef int velocity(Hom* h, double complex* x, double t, double complex* out) nogil:
    cdef int n = h.n, k, i
    cdef double complex pw[MAXN * MAXN]
    cdef double complex jac[MAXN * MAXN]
    cdef double complex rhs[MAXN]
    cdef double complex f, g
    powers(h, x, pw)
    for k in range(1, n):
        f = 0
        for i in range(n):
            f = f + h.m[i] * pw[i * n + k]
        g = pw[(k - 1) * n + k] - pw[(n - 1) * n + k]
        rhs[k - 1] = -(h.gamma * g - f)
    rhs[n - 1] = 0
    jacobian(h, pw, t, jac)
    return solve(jac, rhs, out, n)


cdef int newton_step(Hom* h, double complex* x, double t, double complex* out) nogil:
    cdef int n = h.n, k, i
    cdef double complex pw[MAXN * MAXN]
    cdef double complex jac[MAXN * MAXN]
    cdef double complex rhs[MAXN]
    cdef double complex f, g, lin
    cdef double complex gt = h.gamma * t
    cdef double s = 1.0 - t
    powers(h, x, pw)
    for k in range(1, n):
        f = 0
        for i in range(n):
            f = f + h.m[i] * pw[i * n + k]
        g = pw[(k - 1) * n + k] - pw[(n - 1) * n + k]
        rhs[k - 1] = -(s * f + gt * g)
    lin = -1.0
    for i in range(n):
        lin = lin + h.p[i] * x[i]
    rhs[n - 1] = -lin
    jacobian(h, pw, t, jac)
    return solve(jac, rhs, out, n)


cdef int rk4(Hom* h, double complex* x, double t, double dt, double complex* out) nogil:
    cdef int n = h.n, i
    cdef double complex k1[MAXN]
    cdef double complex k2[MAXN]
    cdef double complex k3[MAXN]
    cdef double complex k4[MAXN]
    cdef double complex y[MAXN]
    cdef double half = dt / 2
    if not velocity(h, x, t, k1):
        return 0
    for i in range(n):
        y[i] = x[i] + half * k1[i]
    if not velocity(h, y, t + half, k2):
        return 0
    for i in range(n):
        y[i] = x[i] + half * k2[i]
    if not velocity(h, y, t + half, k3):
        return 0
    for i in range(n):
        y[i] = x[i] + dt * k3[i]
    if not velocity(h, y, t + dt, k4):
        return 0
    cdef double w = dt / 6
    for i in range(n):
        out[i] = x[i] + w * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
    return 1


cdef int correct(Hom* h, double complex* x, double t, double tol, int max_iter) nogil:
    cdef int n = h.n, it, i
    cdef double complex dx[MAXN]
    cdef double size, prev = -1.0
    for it in range(max_iter):
        if not newton_step(h, x, t, dx):
            return 0
        for i in range(n):
            x[i] = x[i] + dx[i]
        size = vnorm(dx, n)
        if size <= tol * (1 + vnorm(x, n)):
            return 1
        if prev >= 0 and size > 0.5 * prev:
            return 0
        prev = size
    return 0


def track_path(m, patch, gamma, start, double tol=1e-10, double h_init=0.02,
               double h_min=1e-14, double h_max=0.1, int max_steps=20000,
               double t_near=1e-6, double blowup=1e8, int max_newton=3,
               double t0=1.0):
    cdef Hom h
    cdef int n = len(m), i
    if n < 2 or n > MAXN:
        raise ValueError("unsupported system size")
    h.n = n
    h.gamma = gamma
    for i in range(n):
        h.m[i] = m[i]
        h.p[i] = patch[i]
    cdef double complex x[MAXN]
    cdef double complex xp[MAXN]
    for i in range(n):
        x[i] = start[i]
    cdef double t = t0, t1, step = min(h_init, t0)
    cdef int streak = 0, steps = 0, ok, status = SUCCESS
    with nogil:
        while t > 0:
            if steps >= max_steps:
                status = MAX_STEPS
                break
            steps += 1
            if step >= t:
                step = t
                t1 = 0.0
            else:
                t1 = t - step
            ok = rk4(&h, x, t, t1 - t, xp)
            if ok:
                ok = correct(&h, xp, t1, tol, max_newton)
            if ok:
                for i in range(n):
                    x[i] = xp[i]
                t = t1
                streak += 1
                if streak >= 3:
                    step = min(2 * step, h_max)
                    streak = 0
                if vnorm(x, n) > blowup:
                    status = DIVERGED
                    break
            else:
                step = step / 2
                streak = 0
                if step < h_min:
                    status = NEAR_END if t < t_near else FAILED
                    break
    return [x[i] for i in range(n)], t, status, steps
