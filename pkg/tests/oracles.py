"""Independent dense oracles for the matrix-free implementation.

Everything here assembles explicit matrices entry by entry (column scatter,
the transpose of how the package's row formulas are written) and replays the
algorithms with dense algebra.  Tests compare the matrix-free package against
these; the package itself never imports this module.
"""

import numpy as np


def dense_operator(n: int) -> np.ndarray:
    """Scaled level operator as a dense matrix."""
    k = n.bit_length() - 1
    inv_h2 = float(4 ** k)
    a = 2.0 * np.eye(n) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)
    a[0, 0] = 3.0
    a[n - 1, n - 1] = 3.0
    return a * inv_h2


def dense_restriction(n_fine: int) -> np.ndarray:
    """Pair-average restriction, built by column scatter."""
    n = n_fine // 2
    p0 = np.zeros((n_fine, n))
    p0[0, 0] = 1.0
    p0[1, 0] = 1.0
    p0[n_fine - 2, n - 1] = 1.0
    p0[n_fine - 1, n - 1] = 1.0
    for j in range(1, n - 1):
        rows = 2 * j
        p0[rows:rows + 2, j] = 1.0
    return 0.5 * p0.T


def dense_prolong_correction(n_coarse: int) -> np.ndarray:
    """Correction prolongation, built by column scatter."""
    m = 2 * n_coarse
    p = np.zeros((m, n_coarse))
    p[1, 0] = 3.0
    p[m - 2, n_coarse - 1] = 3.0
    p[0, 0] = 2.0
    p[m - 1, n_coarse - 1] = 2.0
    if m > 2:
        p[2, 0] = 1.0
        p[m - 3, n_coarse - 1] = 1.0
    for j in range(1, n_coarse - 1):
        top = 2 * j - 1
        p[top:top + 4, j] = [1.0, 3.0, 3.0, 1.0]
    return 0.25 * p


def dense_prolong_fmg(n_coarse: int) -> np.ndarray:
    """High-order prolongation with its eight special boundary rows."""
    nf = 2 * n_coarse
    p = np.zeros((nf, n_coarse))
    p[0, 0:2] = [70.0, -2.0]
    p[1, 0:3] = [112.0, 35.0, -5.0]
    p[2, 0:3] = [40.0, 105.0, -7.0]
    p[3, 0:4] = [-7.0, 105.0, 35.0, -5.0]
    for row in range(4, nf - 4, 2):
        q = row // 2
        p[row, q - 2:q + 2] = [-5.0, 35.0, 105.0, -7.0]
        p[row + 1, q - 1:q + 3] = [-7.0, 105.0, 35.0, -5.0]
    p[nf - 4, n_coarse - 4:] = [-5.0, 35.0, 105.0, -7.0]
    p[nf - 3, n_coarse - 3:] = [-7.0, 105.0, 40.0]
    p[nf - 2, n_coarse - 3:] = [-5.0, 35.0, 112.0]
    p[nf - 1, n_coarse - 2:] = [-2.0, 70.0]
    return p / 128.0


def dense_tau(u_fine: np.ndarray) -> np.ndarray:
    n = len(u_fine)
    rest = dense_restriction(n)
    return dense_operator(n // 2) @ (rest @ u_fine) - rest @ (
        dense_operator(n) @ u_fine
    )


def dense_coarse_rhs(f_fine: np.ndarray, u_fine: np.ndarray) -> np.ndarray:
    return dense_restriction(len(f_fine)) @ f_fine + dense_tau(u_fine)


def gs_replay(
    u: np.ndarray,
    f: np.ndarray,
    window: tuple[int, int],
    forward: bool = True,
) -> np.ndarray:
    """Gauss-Seidel by full dense-row dot products."""
    mat = dense_operator(len(u))
    out = np.array(u, dtype=float, copy=True)
    idx = range(window[0], window[1])
    if not forward:
        idx = reversed(idx)
    for i in idx:
        out[i] += (f[i] - mat[i, :] @ out) / mat[i, i]
    return out


def kaczmarz_replay(
    u: np.ndarray,
    u_coarse: np.ndarray,
    window: tuple[int, int],
    forward: bool = True,
) -> np.ndarray:
    """Kaczmarz projections via dense restriction rows."""
    rest = dense_restriction(len(u))
    diag = np.diag(rest @ rest.T)
    out = np.array(u, dtype=float, copy=True)
    idx = range(window[0] // 2, window[1] // 2)
    if not forward:
        idx = reversed(idx)
    for j in idx:
        r = u_coarse[j] - rest[j, :] @ out
        out = out + rest[j, :] * (r / diag[j])
    return out


def smooth_replay(
    u: np.ndarray,
    f: np.ndarray,
    patches,
    ns: int,
    u_coarse: np.ndarray | None = None,
) -> np.ndarray:
    """Additive patch smoother replayed with the dense kernels above."""
    out = np.empty_like(np.asarray(u, dtype=float))
    for patch in patches:
        local = np.array(u, dtype=float, copy=True)
        forward = True
        for _ in range(ns):
            if u_coarse is not None:
                local = kaczmarz_replay(local, u_coarse, patch.extended, forward)
            local = gs_replay(local, f, patch.extended, forward)
            forward = not forward
        lo, hi = patch.owned
        out[lo:hi] = local[lo:hi]
    return out


def direct_replay(f: np.ndarray) -> np.ndarray:
    """Dense factorization solve of the level operator."""
    return np.linalg.solve(dense_operator(len(f)), np.asarray(f, dtype=float))


def fmg_replay(m: int, m0: int, n_sr: int, ns: int, patches_of, forcing):
    """Dense replay of the whole FMG pass; returns per-level solutions.

    ``patches_of(n)`` supplies the patch list per level size, so the caller
    controls the halo mode.
    """
    f = {m: np.asarray(forcing, dtype=float)}
    for k in range(m - 1, m0 - 1, -1):
        f[k] = dense_restriction(2 ** (k + 1)) @ f[k + 1]
    rhs = dict(f)

    def smooth(level, u, with_cr=None):
        n = 2 ** level
        if level == m0:
            return direct_replay(rhs[level])
        return smooth_replay(u, rhs[level], patches_of(n), ns, u_coarse=with_cr)

    u = {m0: direct_replay(rhs[m0])}
    for k in range(m0, m):
        u[k + 1] = dense_prolong_fmg(2 ** k) @ u[k]
        rhs[k + 1] = f[k + 1]
        u[k + 1] = smooth(k + 1, u[k + 1])
        for l in range(k + 1, m0, -1):
            rest = dense_restriction(2 ** l)
            u[l - 1] = rest @ u[l]
            rhs[l - 1] = dense_coarse_rhs(rhs[l], u[l])
            u[l - 1] = smooth(l - 1, u[l - 1])
        for l in range(m0, k + 1):
            if l + 1 <= m - n_sr:
                corr = u[l] - dense_restriction(2 ** (l + 1)) @ u[l + 1]
                u[l + 1] = u[l + 1] + dense_prolong_correction(2 ** l) @ corr
                u[l + 1] = smooth(l + 1, u[l + 1])
            else:
                u[l + 1] = dense_prolong_fmg(2 ** l) @ u[l]
                u[l + 1] = smooth(l + 1, u[l + 1], with_cr=u[l])
    return u
