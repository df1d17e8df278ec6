"""Pure-Python implementations of the hot kernels.

These are the reference versions.  :mod:`polyfiber._ckernels` mirrors them
step for step in Cython for double precision; the Python versions also run
unchanged on :class:`mpmath.mpc` scalars, which is how the extended
precision tier works.
"""

SUCCESS = 0
NEAR_END = 1
FAILED = 2
DIVERGED = 3
MAX_STEPS = 4


def zero_sum_masks(re_parts, im_parts):
    """Bit masks of the nonempty proper subsets whose (re, im) sums vanish.

    Walks all subsets in Gray-code order so each step adds or removes one
    element.  Masks are returned in increasing numeric order.
    """
    n = len(re_parts)
    full = (1 << n) - 1
    out = []
    gray = 0
    sr = 0
    si = 0
    for g in range(1, 1 << n):
        bit = (g & -g).bit_length() - 1
        gray ^= 1 << bit
        if gray >> bit & 1:
            sr += re_parts[bit]
            si += im_parts[bit]
        else:
            sr -= re_parts[bit]
            si -= im_parts[bit]
        if sr == 0 and si == 0 and gray != full:
            out.append(gray)
    out.sort()
    return out


def _solve(a, b):
    """Solve ``a x = b`` in place-free Gaussian elimination with partial
    pivoting.  Returns None for an exactly singular matrix."""
    n = len(b)
    a = [row[:] for row in a]
    b = b[:]
    for col in range(n):
        piv = col
        best = abs(a[col][col])
        for r in range(col + 1, n):
            v = abs(a[r][col])
            if v > best:
                best, piv = v, r
        if not best:
            return None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        inv = 1 / a[col][col]
        row_c = a[col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                row_r = a[r]
                for c in range(col, n):
                    row_r[c] -= f * row_c[c]
                b[r] -= f * b[col]
    x = [0] * n
    for r in range(n - 1, -1, -1):
        s = b[r]
        row = a[r]
        for c in range(r + 1, n):
            s -= row[c] * x[c]
        x[r] = s / row[r]
    return x


def _norm(v):
    return max(abs(z) for z in v)


class _Homotopy:
    """``H(x, t) = (1 - t) F(x) + gamma t G(x)`` with a linear patch.

    ``F_k(x) = sum_i m_i x_i^k`` for ``k = 1..n-1`` (homogeneous in n
    unknowns), ``G_k(x) = x_k^k - x_n^k``, last row ``p . x - 1``.
    """

    def __init__(self, m, patch, gamma):
        self.m = list(m)
        self.p = list(patch)
        self.gamma = gamma
        self.n = len(self.m)

    def _powers(self, x):
        n = self.n
        pw = []
        for xi in x:
            row = [1, xi]
            for _ in range(2, n):
                row.append(row[-1] * xi)
            pw.append(row)
        return pw

    def values(self, x, t, pw=None):
        n = self.n
        pw = pw or self._powers(x)
        m = self.m
        gt = self.gamma * t
        s = 1 - t
        out = []
        for k in range(1, n):
            f = 0
            for i in range(n):
                f += m[i] * pw[i][k]
            g = pw[k - 1][k] - pw[n - 1][k]
            out.append(s * f + gt * g)
        lin = -1
        for i in range(n):
            lin += self.p[i] * x[i]
        out.append(lin)
        return out

    def dt(self, x, pw):
        n = self.n
        m = self.m
        out = []
        for k in range(1, n):
            f = 0
            for i in range(n):
                f += m[i] * pw[i][k]
            g = pw[k - 1][k] - pw[n - 1][k]
            out.append(self.gamma * g - f)
        out.append(0)
        return out

    def jacobian(self, x, t, pw):
        n = self.n
        m = self.m
        gt = self.gamma * t
        s = 1 - t
        jac = []
        for k in range(1, n):
            row = [s * k * m[i] * pw[i][k - 1] for i in range(n)]
            row[k - 1] += gt * k * pw[k - 1][k - 1]
            row[n - 1] -= gt * k * pw[n - 1][k - 1]
            jac.append(row)
        jac.append(list(self.p))
        return jac

    def velocity(self, x, t):
        pw = self._powers(x)
        rhs = [-v for v in self.dt(x, pw)]
        return _solve(self.jacobian(x, t, pw), rhs)

    def newton_step(self, x, t):
        pw = self._powers(x)
        rhs = [-v for v in self.values(x, t, pw)]
        return _solve(self.jacobian(x, t, pw), rhs)


def _rk4(hom, x, t, dt):
    k1 = hom.velocity(x, t)
    if k1 is None:
        return None
    half = dt / 2
    k2 = hom.velocity([a + half * b for a, b in zip(x, k1)], t + half)
    if k2 is None:
        return None
    k3 = hom.velocity([a + half * b for a, b in zip(x, k2)], t + half)
    if k3 is None:
        return None
    k4 = hom.velocity([a + dt * b for a, b in zip(x, k3)], t + dt)
    if k4 is None:
        return None
    w = dt / 6
    return [a + w * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(x, k1, k2, k3, k4)]


def _correct(hom, x, t, tol, max_iter):
    prev = None
    for _ in range(max_iter):
        dx = hom.newton_step(x, t)
        if dx is None:
            return x, False
        x = [a + b for a, b in zip(x, dx)]
        size = _norm(dx)
        if size <= tol * (1 + _norm(x)):
            return x, True
        if prev is not None and size > 0.5 * prev:
            return x, False
        prev = size
    return x, False


def track_path(m, patch, gamma, start, tol=1e-10, h_init=0.02, h_min=1e-14,
               h_max=0.1, max_steps=20000, t_near=1e-6, blowup=1e8, max_newton=3, t0=1):
    """Track one path of the homotopy from t=1 to t=0.

    ``t0`` lets a path resume from a point already on it at ``t = t0``.
    Returns ``(x, t, status, steps)`` where ``status`` is one of the module
    level status codes.  ``x`` is the last accepted point at parameter ``t``.
    """
    hom = _Homotopy(m, patch, gamma)
    one = gamma.real * 0 + 1
    t = t0 * one
    x = list(start)
    h = min(h_init * one, t)
    streak = 0
    steps = 0
    while t > 0:
        if steps >= max_steps:
            return x, t, MAX_STEPS, steps
        steps += 1
        if h >= t:
            h = t
            t1 = 0 * t
        else:
            t1 = t - h
        xp = _rk4(hom, x, t, t1 - t)
        ok = False
        if xp is not None:
            xc, ok = _correct(hom, xp, t1, tol, max_newton)
        if ok:
            x = xc
            t = t1
            streak += 1
            if streak >= 3:
                h = min(2 * h, h_max * one)
                streak = 0
            if _norm(x) > blowup:
                return x, t, DIVERGED, steps
        else:
            h = h / 2
            streak = 0
            if h < h_min:
                return x, t, NEAR_END if t < t_near else FAILED, steps
    return x, t, SUCCESS, steps
