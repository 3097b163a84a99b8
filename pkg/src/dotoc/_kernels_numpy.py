"""Pure-numpy reference implementations of the hot kernels.

Shared conventions (both backends):

* matrices are C-contiguous complex128, shape (dim, dim), dim = 2^n
* site masks are single-bit int64 values; site 1 is the most significant bit
* ``channel``: 0 none, 1 amplitude damping, 2 phase damping, 3 depolarizing
* ``raising``: True for the adjoint dissipator (amplitude damping only;
  the gain term uses sigma+ . sigma- instead of sigma- . sigma+)

``rhs_apply`` writes the full master-equation right-hand side

    out = ci * [H, x] + sum_k (Gamma/2) (2 L x L' - x L'L - L'L x)

where ci is +-1j (picture and direction folded in by the caller), H is the
Ising Hamiltonian split into a diagonal (ZZ and Z terms, ``hdiag``) plus
transverse-field flips ``-g * X_i`` for the bit masks in ``xmasks``, and the
dissipator for each single-bit mask in ``dmasks`` is evaluated elementwise
with the paper's channel normalizations folded in.
"""

import numpy as np


def _v6(a, m):
    # split row and column indices at bit m: (hi, bit, lo) x (hi, bit, lo)
    dim = a.shape[0]
    hi = dim // (2 * m)
    return a.reshape(hi, 2, m, hi, 2, m)


def rhs_apply(x, out, ci, hdiag, g, xmasks, gamma, channel, raising, dmasks, dunion):
    np.multiply(x, hdiag[:, None], out=out)
    out -= x * hdiag[None, :]
    for m in xmasks:
        xm = _v6(x, int(m))
        om = _v6(out, int(m))
        om -= g * xm[:, ::-1]
        om += g * xm[:, :, :, :, ::-1]
    out *= ci

    if channel == 2:  # phase: -Gamma * x on entries whose bit differs, per site
        for m in dmasks:
            ov = _v6(out, int(m))
            xv = _v6(x, int(m))
            ov[:, 0, :, :, 1] -= gamma * xv[:, 0, :, :, 1]
            ov[:, 1, :, :, 0] -= gamma * xv[:, 1, :, :, 0]
    elif channel == 3:  # depolarizing: Gamma/4 * (sum_a sigma_a x sigma_a - 3x) per site
        for m in dmasks:
            ov = _v6(out, int(m))
            xv = _v6(x, int(m))
            ov[:, 0, :, :, 1] -= gamma * xv[:, 0, :, :, 1]
            ov[:, 1, :, :, 0] -= gamma * xv[:, 1, :, :, 0]
            ov[:, 0, :, :, 0] += 0.5 * gamma * (xv[:, 1, :, :, 1] - xv[:, 0, :, :, 0])
            ov[:, 1, :, :, 1] += 0.5 * gamma * (xv[:, 0, :, :, 0] - xv[:, 1, :, :, 1])
    elif channel == 1:  # amplitude: Gamma * (2 sigma-+ x sigma+- - {P0, x}) per site
        for m in dmasks:
            ov = _v6(out, int(m))
            xv = _v6(x, int(m))
            ov[:, 0] -= gamma * xv[:, 0]
            ov[:, :, :, :, 0] -= gamma * xv[:, :, :, :, 0]
            if raising:
                ov[:, 0, :, :, 0] += 2.0 * gamma * xv[:, 1, :, :, 1]
            else:
                ov[:, 1, :, :, 1] += 2.0 * gamma * xv[:, 0, :, :, 0]


def axpy(out, a, s, b):
    """out = a + s * b (elementwise)."""
    np.multiply(b, s, out=out)
    out += a


def axpy_acc(acc, s, k):
    """acc += s * k (elementwise)."""
    acc += s * k


def symmetrize(x):
    """x = (x + x') / 2 in place."""
    x += x.conj().T
    x *= 0.5


def zpair_partials(x, yt, zmasks):
    """Per-row partial sums of the signed trace pairing.

    Returns a (dim, len(zmasks)+1) complex array ``p`` with

        p[r, j] = sum_c x[r, c] * yt[r, c] * s_j(r) * s_j(c)
        p[r, -1] = sum_c x[r, c] * yt[r, c]

    where s_j(i) = +1 / -1 as bit zmasks[j] of i is 0 / 1.  Column sums give
    tr(X Z_j Y Z_j) and tr(X Y) for yt = Y transposed.
    """
    dim = x.shape[0]
    k = len(zmasks)
    u = x * yt
    parts = np.empty((dim, k + 1), dtype=np.complex128)
    if k:
        idx = np.arange(dim, dtype=np.int64)
        signs = np.empty((dim, k))
        for j, m in enumerate(zmasks):
            signs[:, j] = 1.0 - 2.0 * ((idx & int(m)) != 0)
        parts[:, :k] = (u @ signs) * signs
    parts[:, k] = u.sum(axis=1)
    return parts
