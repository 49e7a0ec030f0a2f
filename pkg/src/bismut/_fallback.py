"""Vectorized numpy engine: reference implementation of the path simulator.

Matches the compiled kernel operation for operation (same random stream, same
update order); the compiled kernel exists because this loop is the hot spot.
All arrays are float64; Philox state is explicit uint32/uint64 numpy math.
"""

import numpy as np
from scipy.special import ndtri

PHILOX_M0 = np.uint64(0xD2511F53)
PHILOX_M1 = np.uint64(0xCD9E8D57)
PHILOX_W0 = np.uint32(0x9E3779B9)
PHILOX_W1 = np.uint32(0xBB67AE85)
U64_TO_UNIT = 1.0 / 9007199254740992.0  # 2^-53


def philox4x32_10(c0, c1, c2, c3, k0, k1):
    """One batch of Philox4x32-10 blocks; counters are uint32 arrays."""
    k0 = int(k0)
    k1 = int(k1)
    for _ in range(10):
        p0 = PHILOX_M0 * c0.astype(np.uint64)
        p1 = PHILOX_M1 * c2.astype(np.uint64)
        hi0 = (p0 >> np.uint64(32)).astype(np.uint32)
        lo0 = p0.astype(np.uint32)
        hi1 = (p1 >> np.uint64(32)).astype(np.uint32)
        lo1 = p1.astype(np.uint32)
        c0 = hi1 ^ c1 ^ np.uint32(k0)
        c1 = lo1
        c2 = hi0 ^ c3 ^ np.uint32(k1)
        c3 = lo0
        k0 = (k0 + 0x9E3779B9) & 0xFFFFFFFF
        k1 = (k1 + 0xBB67AE85) & 0xFFFFFFFF
    return c0, c1, c2, c3


def gaussian_block(seed, first_path, count, n_values):
    """Standard normals for ``count`` consecutive paths, (count, n_values).

    Value j of path i is block (j >> 1), half (j & 1) of the path's Philox
    stream pushed through the inverse normal CDF; see the engine module for
    the full contract.
    """
    seed = np.uint64(seed)
    n_blocks = (n_values + 1) // 2
    paths = np.uint64(first_path) + np.arange(count, dtype=np.uint64)
    blocks = np.arange(n_blocks, dtype=np.uint64)

    c0 = np.broadcast_to(blocks.astype(np.uint32), (count, n_blocks)).copy()
    c1 = np.broadcast_to((blocks >> np.uint64(32)).astype(np.uint32), (count, n_blocks)).copy()
    c2 = np.broadcast_to(paths.astype(np.uint32)[:, None], (count, n_blocks)).copy()
    c3 = np.broadcast_to((paths >> np.uint64(32)).astype(np.uint32)[:, None], (count, n_blocks)).copy()
    k0 = np.uint32(seed & np.uint64(0xFFFFFFFF))
    k1 = np.uint32(seed >> np.uint64(32))

    o0, o1, o2, o3 = philox4x32_10(c0, c1, c2, c3, k0, k1)
    u64a = (o1.astype(np.uint64) << np.uint64(32)) | o0.astype(np.uint64)
    u64b = (o3.astype(np.uint64) << np.uint64(32)) | o2.astype(np.uint64)

    vals = np.empty((count, 2 * n_blocks))
    vals[:, 0::2] = _ndtri_open(u64a)
    vals[:, 1::2] = _ndtri_open(u64b)
    return vals[:, :n_values]


def _ndtri_open(u64):
    u = ((u64 >> np.uint64(11)).astype(np.float64) + 0.5) * U64_TO_UNIT
    return ndtri(u)


def simulate_chunk_numpy(model, x0, T, n_steps, seed, first_path, count, k,
                         increments, chk_steps, v_basis, w_basis):
    """Simulate a chunk of paths; returns the raw engine output tuple."""
    d = model.dimension
    e = model.embedding_dim
    h = T / n_steps
    sqrt_h = np.sqrt(h)
    kvals, kdots = k.tables(n_steps)
    kind = model.kind
    kappa = model.curvature
    cz = model.drift_coefficient
    lam = model.ricci_rate
    efac = np.exp(-lam * h / 2.0)
    K = -lam
    B = count

    if increments is None:
        xi = gaussian_block(seed, first_path, B, n_steps * d).reshape(B, n_steps, d)
    else:
        xi = increments

    V = np.eye(d) if v_basis is None else np.asarray(v_basis, dtype=float)
    W = np.eye(d) if w_basis is None else np.asarray(w_basis, dtype=float)
    identity_bases = v_basis is None and w_basis is None
    G0 = V.T @ W                       # <V e_i, W e_j>
    v_colsq = np.sum(V * V, axis=0)    # |V e_i|^2 for the QV accumulator
    has_w = kappa != 0.0 or model.h3_scale != 0.0
    if model.h3_scale != 0.0:
        from .geometry import h3_tensor_array
        T3VW = np.einsum("kpq,pi,qj->kij", h3_tensor_array(model), V, W)
    trivial_flat = kind == "euclidean" and cz == 0.0

    # The damped transport is deterministic: q_m = efac^m.  Precompute the
    # per-step scalars exactly as the kernel's sequential products do.
    rfac = efac * np.exp(-K * h / 2.0)
    q_path = np.empty(n_steps + 1)
    rho = 1.0
    qmax_scalar = 1.0
    q_path[0] = 1.0
    for m in range(n_steps):
        q_path[m + 1] = q_path[m] * efac
        rho *= rfac
        if rho > qmax_scalar:
            qmax_scalar = rho

    x = np.tile(x0, (B, 1))
    if trivial_flat:
        disp = np.zeros((B, e))
    F = np.tile(model.frame_at(x0), (B, 1, 1))  # (B, e, d)
    Av = np.zeros((B, d))
    Aw = np.zeros((B, d))
    C = np.zeros((B, d, d))
    D = np.zeros((B, d, d))
    M = np.zeros((B, d, d, d)) if has_w else None  # M[b, :, i, j]
    qv = np.zeros((B, d))

    for m in range(n_steps):
        kk = kvals[m]
        kd = kdots[m]
        q = q_path[m]
        dB = sqrt_h * xi[:, m, :]

        VtdB = dB @ V                   # (V^T dB)_i = dB . V e_i
        WtdB = dB @ W
        dAv = (kd * q) * VtdB
        dAw = (kd * q) * WtdB
        C += Av[:, :, None] * dAw[:, None, :]
        if has_w:
            # D uses M and q before this step's updates (Ito left point)
            D += (kd * q) * np.einsum("bkij,bk->bij", M, dB)
            if kappa != 0.0:
                M += (kappa * kk * q) * (
                    dB[:, :, None, None] * G0[None, None, :, :]
                    - WtdB[:, None, None, :] * V[None, :, :, None]
                )
            if model.h3_scale != 0.0:
                M -= (0.5 * h * kk * q) * T3VW[None, :, :, :]
        Av += dAv
        Aw += dAw
        qv += (kd * kd * h * q * q) * v_colsq[None, :]

        # geodesic move
        if kind == "euclidean":
            if trivial_flat:
                disp += dB
            else:
                x += dB - (0.5 * h * cz) * x
        else:
            Xa = np.einsum("bed,bd->be", F, dB)
            tau = np.linalg.norm(dB, axis=1)
            move = tau > 0.0
            tau_safe = np.where(move, tau, 1.0)
            u = Xa / tau_safe[:, None]
            r = model.radius
            if kind == "sphere":
                ct = np.cos(tau / r)
                st = np.sin(tau / r)
                x_new = ct[:, None] * x + (r * st)[:, None] * u
                wu = np.einsum("bed,be->bd", F, u)
                shift = (ct - 1.0)[:, None] * u - (st / r)[:, None] * x
            else:
                ch = np.cosh(tau / r)
                sh = np.sinh(tau / r)
                x_new = ch[:, None] * x + (r * sh)[:, None] * u
                uJ = u.copy()
                uJ[:, -1] = -uJ[:, -1]          # Minkowski dual of u
                wu = np.einsum("bed,be->bd", F, uJ)
                shift = (ch - 1.0)[:, None] * u + (sh / r)[:, None] * x
            x = np.where(move[:, None], x_new, x)
            F = F + shift[:, :, None] * wu[:, None, :]
            x, F = _renormalize(model, x, F, move)

    if trivial_flat:
        x = x0[None, :] + disp
    q_out = np.full(B, q_path[n_steps])
    qmax = np.full(B, qmax_scalar)
    n_chk = 0 if chk_steps is None else len(chk_steps)
    qchk = np.broadcast_to(q_path[chk_steps], (B, n_chk)).copy() if n_chk else None
    valid = np.isfinite(x).all(axis=1)
    for arr in (Av, C, D):
        valid &= np.isfinite(arr).reshape(B, -1).all(axis=1)
    return (x, q_out, Av, C, D, qv, qmax, valid.astype(np.uint8), qchk)


def _renormalize(model, x, F, move):
    """Project points back to the constraint set and re-orthonormalize frames."""
    if model.kind == "sphere":
        x = x * (model.radius / np.linalg.norm(x, axis=1, keepdims=True))[:, :]
        dot = lambda a, b: np.einsum("be,be->b", a, b)
        x_dual = x
    else:
        qf = -(np.sum(x[:, :-1] ** 2, axis=1) - x[:, -1] ** 2)
        x = x * (model.radius / np.sqrt(qf))[:, None]
        x_dual = x.copy()
        x_dual[:, -1] = -x_dual[:, -1]

        def dot(a, b):
            return np.sum(a[:, :-1] * b[:, :-1], axis=1) - a[:, -1] * b[:, -1]

    r2 = model.radius ** 2 if model.kind == "sphere" else -model.radius ** 2
    cols = []
    for j in range(F.shape[2]):
        w = F[:, :, j] - (np.einsum("be,be->b", x_dual, F[:, :, j]) / r2)[:, None] * x
        for c in cols:
            w = w - dot(c, w)[:, None] * c
        w = w / np.sqrt(dot(w, w))[:, None]
        cols.append(w)
    return x, np.stack(cols, axis=2)
