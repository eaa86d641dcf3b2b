"""Reference computations written independently of the package internals.

Matrix functions go through numpy.linalg.eigh instead of the package's
Jacobi solver, and the scalar claim formulas are spelled out term by term
with plain floats.
"""

import math

import numpy as np


def random_hermitian(rng, n, lo=-5.0, hi=5.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    lam = rng.uniform(lo, hi, size=n)
    m = (q * lam) @ q.conj().T
    return 0.5 * (m + m.conj().T)


def random_unit(rng, n):
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


def eigh_apply(f, m):
    lam, u = np.linalg.eigh(np.asarray(m))
    return (u * f(lam)) @ u.conj().T


def qf(m, x):
    return float(np.real(np.vdot(x, np.asarray(m) @ x)))


def jensen_gap(f, a, x, f0=0.0):
    """<f(A)x,x> - f(<Ax,x>) - <f(|A - <Ax,x>|)x,x> - f0 with the identity map."""
    s = qf(a, x)
    shifted = np.asarray(a) - s * np.eye(len(x))
    return qf(eigh_apply(f, a), x) - f(s) - qf(eigh_apply(lambda t: f(np.abs(t)), shifted), x) - f0


def popoviciu_scalar(x, y, z, f):
    """f((x+y+z)/3) + (f(x)+f(y)+f(z))/3 - (2/3)(f((x+z)/2) + f((y+z)/2) + f((x+y)/2))."""
    big = f((x + y + z) / 3) + (f(x) + f(y) + f(z)) / 3
    small = 2 / 3 * (f((x + z) / 2) + f((y + z) / 2) + f((x + y) / 2))
    return big, small


def popoviciu_super_scalar(a, b, d, f):
    """Dimension-one form of the superquadratic Popoviciu claim (identity map).

    Returns (lhs, rhs): rhs adds to the pairwise terms one third of the six
    correction terms f(|a - (b+d)/2|), ... and f(|(2a-b-d)/6|), ...
    """
    big, small = popoviciu_scalar(a, b, d, f)
    corr = (
        f(abs(a - (b + d) / 2)) + f(abs(d - (a + b) / 2)) + f(abs(b - (a + d) / 2))
        + f(abs((2 * a - b - d) / 6)) + f(abs((2 * d - a - b) / 6)) + f(abs((2 * b - a - d) / 6))
    )
    return big, small + corr / 3


def hlawka_scalar(x, y, z):
    return abs(x) + abs(y) + abs(z) + abs(x + y + z) - abs(x + z) - abs(z + y) - abs(x + y)


def sq_residual(f, df, x, t):
    return f(t) - f(x) - df(x) * (t - x) - f(abs(t - x))


def power(p):
    return lambda t: np.abs(t) ** p if np.ndim(t) else abs(t) ** p


def relu_power(p):
    return lambda t: np.maximum(t, 0.0) ** p


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
