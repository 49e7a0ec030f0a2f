# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled engine: per-path hot loop of the geodesic random walk.

Mirrors bismut._fallback operation for operation -- same Philox4x32-10 +
inverse-CDF random stream, same accumulator update order -- so the two
backends agree to floating-point noise.  Only identity weight bases are
supported here; general bases run on the numpy engine.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, cosh, exp, isfinite, sin, sinh, sqrt
from libc.stdlib cimport free, malloc
from scipy.special.cython_special cimport ndtri

cnp.import_array()

DEF MAXD = 8   # frame dimension cap (spec-practical is d <= 5)
DEF MAXE = 9

cdef double U64_TO_UNIT = 1.0 / 9007199254740992.0  # 2^-53


cdef inline void _philox_block(unsigned long long blk, unsigned int p_lo,
                               unsigned int p_hi, unsigned int k0_, unsigned int k1_,
                               unsigned long long* out) nogil:
    """One Philox4x32-10 block -> two u64 words."""
    cdef unsigned int c0 = <unsigned int>(blk & 0xFFFFFFFFULL)
    cdef unsigned int c1 = <unsigned int>(blk >> 32)
    cdef unsigned int c2 = p_lo
    cdef unsigned int c3 = p_hi
    cdef unsigned int k0 = k0_, k1 = k1_
    cdef unsigned long long p0, p1
    cdef int r
    for r in range(10):
        p0 = <unsigned long long>0xD2511F53u * c0
        p1 = <unsigned long long>0xCD9E8D57u * c2
        c0 = (<unsigned int>(p1 >> 32)) ^ c1 ^ k0
        c1 = <unsigned int>p1
        c2 = (<unsigned int>(p0 >> 32)) ^ c3 ^ k1
        c3 = <unsigned int>p0
        k0 += 0x9E3779B9u
        k1 += 0xBB67AE85u
    out[0] = (<unsigned long long>c1 << 32) | c0
    out[1] = (<unsigned long long>c3 << 32) | c2


cdef void _fill_gaussians(unsigned long long seed, unsigned long long path,
                          int n_values, double* out) nogil:
    """Fill one path's standard normals; 4 blocks interleaved for throughput."""
    cdef unsigned int k0 = <unsigned int>(seed & 0xFFFFFFFFULL)
    cdef unsigned int k1 = <unsigned int>(seed >> 32)
    cdef unsigned int p_lo = <unsigned int>(path & 0xFFFFFFFFULL)
    cdef unsigned int p_hi = <unsigned int>(path >> 32)
    cdef int n_blocks = (n_values + 1) // 2
    cdef int quad = n_blocks // 4
    cdef unsigned long long blk = 0
    cdef unsigned long long w[8]
    cdef unsigned int a0,a1,a2,a3, b0,b1,b2,b3, c0,c1,c2,c3, d0,d1,d2,d3
    cdef unsigned int x0, x1
    cdef unsigned long long pa, pb, pc, pd
    cdef int r, i, j
    for i in range(quad):
        a0 = <unsigned int>(blk & 0xFFFFFFFFULL); a1 = <unsigned int>(blk >> 32)
        b0 = <unsigned int>((blk+1) & 0xFFFFFFFFULL); b1 = <unsigned int>((blk+1) >> 32)
        c0 = <unsigned int>((blk+2) & 0xFFFFFFFFULL); c1 = <unsigned int>((blk+2) >> 32)
        d0 = <unsigned int>((blk+3) & 0xFFFFFFFFULL); d1 = <unsigned int>((blk+3) >> 32)
        a2 = p_lo; b2 = p_lo; c2 = p_lo; d2 = p_lo
        a3 = p_hi; b3 = p_hi; c3 = p_hi; d3 = p_hi
        x0 = k0; x1 = k1
        for r in range(10):
            pa = <unsigned long long>0xD2511F53u * a0
            a0 = (<unsigned int>((<unsigned long long>0xCD9E8D57u * a2) >> 32)) ^ a1 ^ x0
            a1 = <unsigned int>(<unsigned long long>0xCD9E8D57u * a2)
            a2 = (<unsigned int>(pa >> 32)) ^ a3 ^ x1
            a3 = <unsigned int>pa
            pb = <unsigned long long>0xD2511F53u * b0
            b0 = (<unsigned int>((<unsigned long long>0xCD9E8D57u * b2) >> 32)) ^ b1 ^ x0
            b1 = <unsigned int>(<unsigned long long>0xCD9E8D57u * b2)
            b2 = (<unsigned int>(pb >> 32)) ^ b3 ^ x1
            b3 = <unsigned int>pb
            pc = <unsigned long long>0xD2511F53u * c0
            c0 = (<unsigned int>((<unsigned long long>0xCD9E8D57u * c2) >> 32)) ^ c1 ^ x0
            c1 = <unsigned int>(<unsigned long long>0xCD9E8D57u * c2)
            c2 = (<unsigned int>(pc >> 32)) ^ c3 ^ x1
            c3 = <unsigned int>pc
            pd = <unsigned long long>0xD2511F53u * d0
            d0 = (<unsigned int>((<unsigned long long>0xCD9E8D57u * d2) >> 32)) ^ d1 ^ x0
            d1 = <unsigned int>(<unsigned long long>0xCD9E8D57u * d2)
            d2 = (<unsigned int>(pd >> 32)) ^ d3 ^ x1
            d3 = <unsigned int>pd
            x0 += 0x9E3779B9u
            x1 += 0xBB67AE85u
        w[0] = (<unsigned long long>a1 << 32) | a0
        w[1] = (<unsigned long long>a3 << 32) | a2
        w[2] = (<unsigned long long>b1 << 32) | b0
        w[3] = (<unsigned long long>b3 << 32) | b2
        w[4] = (<unsigned long long>c1 << 32) | c0
        w[5] = (<unsigned long long>c3 << 32) | c2
        w[6] = (<unsigned long long>d1 << 32) | d0
        w[7] = (<unsigned long long>d3 << 32) | d2
        for j in range(8):
            r = <int>(2*blk) + j
            if r < n_values:
                out[r] = ndtri(((w[j] >> 11) + 0.5) * U64_TO_UNIT)
        blk += 4
    while blk < <unsigned long long>n_blocks:
        _philox_block(blk, p_lo, p_hi, k0, k1, w)
        i = <int>(2*blk)
        out[i] = ndtri(((w[0] >> 11) + 0.5) * U64_TO_UNIT)
        if i + 1 < n_values:
            out[i+1] = ndtri(((w[1] >> 11) + 0.5) * U64_TO_UNIT)
        blk += 1


def gaussian_block_kernel(seed, first_path, int count, int n_values):
    """(count, n_values) standard normals; matches the numpy engine bitwise."""
    out = np.empty((count, n_values), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef unsigned long long s = <unsigned long long>seed
    cdef unsigned long long fp = <unsigned long long>first_path
    cdef int p
    with nogil:
        for p in range(count):
            _fill_gaussians(s, fp + <unsigned long long>p, n_values, &o[p, 0])
    return out


def simulate_chunk_kernel(int kind, double kappa, double radius, double cz,
                          double efac, double K, double h, int n, int d, int e,
                          double[::1] kvals, double[::1] kdots,
                          double[:, :, ::1] T3,
                          double[::1] x0, double[:, ::1] F0,
                          seed, first_path, int count,
                          double[:, :, ::1] increments,
                          long long[::1] chk_steps):
    """Simulate ``count`` paths; returns the raw engine output tuple.

    kind: 0 euclidean, 1 sphere, 2 hyperbolic.  efac = exp(-lam h / 2) is the
    exact per-step damped-transport factor, K = -lam the Ricci constant.
    """
    if d > MAXD or e > MAXE:
        raise ValueError(f"kernel supports dimension <= {MAXD}")
    if kvals.shape[0] != n or kdots.shape[0] != n:
        raise ValueError("weight tables must have length n")

    cdef bint has_h3 = T3.shape[0] > 0
    cdef bint has_w = (kappa != 0.0) or has_h3
    cdef bint trivial_flat = (kind == 0) and (cz == 0.0)
    cdef bint gen_rng = increments.shape[0] == 0
    cdef int n_chk = chk_steps.shape[0]

    endpoint = np.empty((count, e), dtype=np.float64)
    qout = np.empty(count, dtype=np.float64)
    aout = np.zeros((count, d), dtype=np.float64)
    cout = np.zeros((count, d, d), dtype=np.float64)
    dout = np.zeros((count, d, d), dtype=np.float64)
    qvout = np.zeros((count, d), dtype=np.float64)
    qmaxout = np.empty(count, dtype=np.float64)
    validout = np.empty(count, dtype=np.uint8)
    qchk_arr = np.empty((count, n_chk), dtype=np.float64) if n_chk else None

    cdef double[:, ::1] mv_end = endpoint
    cdef double[::1] mv_q = qout
    cdef double[:, ::1] mv_a = aout
    cdef double[:, :, ::1] mv_c = cout
    cdef double[:, :, ::1] mv_d = dout
    cdef double[:, ::1] mv_qv = qvout
    cdef double[::1] mv_qmax = qmaxout
    cdef unsigned char[::1] mv_valid = validout
    cdef double[:, ::1] mv_qchk = qchk_arr if n_chk else np.empty((1, 1))

    cdef unsigned long long s = <unsigned long long>seed
    cdef unsigned long long fp = <unsigned long long>first_path

    cdef double sqrt_h = sqrt(h)
    cdef double gfac = exp(-K * h / 2.0)     # bound-ratio decay per step
    cdef double rfac = efac * gfac           # rho = q * e^{-K t / 2} update
    cdef double half_h_cz = 0.5 * h * cz
    cdef double h3fac = 0.5 * h

    cdef double* xi = <double*> malloc(sizeof(double) * n * d)
    if xi == NULL:
        raise MemoryError()

    # per-path state (stack)
    cdef double x[MAXE]
    cdef double disp[MAXE]
    cdef double F[MAXE][MAXD]
    cdef double A[MAXD]
    cdef double C[MAXD][MAXD]
    cdef double Dm[MAXD][MAXD]
    cdef double M[MAXD][MAXD][MAXD]
    cdef double qv[MAXD]
    cdef double dB[MAXD]
    cdef double u[MAXE]
    cdef double wu[MAXD]
    cdef double xold[MAXE]
    cdef double q, rho, qmax, kk, kd, acc, tau, fac1, fac2, nrm, g, sgn
    cdef double ckk, dq
    cdef int p, m, i, j, kcomp, ei, chk_pos, ok

    with nogil:
        for p in range(count):
            if gen_rng:
                _fill_gaussians(s, fp + <unsigned long long>p, n * d, xi)
            else:
                for i in range(n):
                    for j in range(d):
                        xi[i*d + j] = increments[p, i, j]

            # init state
            for ei in range(e):
                x[ei] = x0[ei]
                disp[ei] = 0.0
                for j in range(d):
                    F[ei][j] = F0[ei, j]
            q = 1.0
            rho = 1.0
            qmax = 1.0
            for i in range(d):
                A[i] = 0.0
                qv[i] = 0.0
                for j in range(d):
                    C[i][j] = 0.0
                    Dm[i][j] = 0.0
                    if has_w:
                        for kcomp in range(d):
                            M[kcomp][i][j] = 0.0
            chk_pos = 0
            if n_chk > 0 and chk_steps[0] == 0:
                mv_qchk[p, 0] = 1.0
                chk_pos = 1

            for m in range(n):
                kk = kvals[m]
                kd = kdots[m]
                for j in range(d):
                    dB[j] = sqrt_h * xi[m*d + j]

                # C before A update (Ito left point)
                for i in range(d):
                    for j in range(d):
                        C[i][j] += A[i] * (kd * q * dB[j])
                if has_w:
                    # D with pre-update M
                    for i in range(d):
                        for j in range(d):
                            acc = 0.0
                            for kcomp in range(d):
                                acc += M[kcomp][i][j] * dB[kcomp]
                            Dm[i][j] += kd * q * acc
                    if kappa != 0.0:
                        ckk = kappa * kk * q
                        for i in range(d):
                            for kcomp in range(d):
                                M[kcomp][i][i] += ckk * dB[kcomp]
                            for j in range(d):
                                M[i][i][j] -= ckk * dB[j]
                    if has_h3:
                        ckk = h3fac * kk * q
                        for kcomp in range(d):
                            for i in range(d):
                                for j in range(d):
                                    M[kcomp][i][j] -= ckk * T3[kcomp, i, j]
                for j in range(d):
                    A[j] += kd * q * dB[j]
                dq = kd * kd * h * q * q
                for i in range(d):
                    qv[i] += dq
                q *= efac
                rho *= rfac
                if rho > qmax:
                    qmax = rho
                if chk_pos < n_chk and chk_steps[chk_pos] == <long long>(m + 1):
                    mv_qchk[p, chk_pos] = q
                    chk_pos += 1

                # geodesic move
                if kind == 0:
                    if trivial_flat:
                        for j in range(d):
                            disp[j] += dB[j]
                    else:
                        for j in range(d):
                            x[j] += dB[j] - half_h_cz * x[j]
                else:
                    tau = 0.0
                    for j in range(d):
                        tau += dB[j] * dB[j]
                    tau = sqrt(tau)
                    if tau > 0.0:
                        for ei in range(e):
                            acc = 0.0
                            for j in range(d):
                                acc += F[ei][j] * dB[j]
                            u[ei] = acc / tau
                            xold[ei] = x[ei]
                        if kind == 1:
                            fac1 = cos(tau / radius)
                            fac2 = sin(tau / radius)
                        else:
                            fac1 = cosh(tau / radius)
                            fac2 = sinh(tau / radius)
                        for j in range(d):
                            acc = 0.0
                            for ei in range(e - 1):
                                acc += F[ei][j] * u[ei]
                            if kind == 1:
                                acc += F[e-1][j] * u[e-1]
                            else:
                                acc -= F[e-1][j] * u[e-1]
                            wu[j] = acc
                        if kind == 1:
                            for ei in range(e):
                                x[ei] = fac1 * xold[ei] + radius * fac2 * u[ei]
                                g = (fac1 - 1.0) * u[ei] - (fac2 / radius) * xold[ei]
                                for j in range(d):
                                    F[ei][j] += g * wu[j]
                        else:
                            for ei in range(e):
                                x[ei] = fac1 * xold[ei] + radius * fac2 * u[ei]
                                g = (fac1 - 1.0) * u[ei] + (fac2 / radius) * xold[ei]
                                for j in range(d):
                                    F[ei][j] += g * wu[j]
                        # renormalize point
                        if kind == 1:
                            nrm = 0.0
                            for ei in range(e):
                                nrm += x[ei] * x[ei]
                            nrm = radius / sqrt(nrm)
                            sgn = radius * radius
                        else:
                            nrm = 0.0
                            for ei in range(e - 1):
                                nrm += x[ei] * x[ei]
                            nrm = x[e-1] * x[e-1] - nrm
                            nrm = radius / sqrt(nrm)
                            sgn = -radius * radius
                        for ei in range(e):
                            x[ei] *= nrm
                        # tangent-project and Gram-Schmidt the frame
                        for j in range(d):
                            acc = 0.0
                            for ei in range(e - 1):
                                acc += x[ei] * F[ei][j]
                            if kind == 1:
                                acc += x[e-1] * F[e-1][j]
                            else:
                                acc -= x[e-1] * F[e-1][j]
                            acc /= sgn
                            for ei in range(e):
                                F[ei][j] -= acc * x[ei]
                            for i in range(j):
                                acc = 0.0
                                for ei in range(e - 1):
                                    acc += F[ei][i] * F[ei][j]
                                if kind == 1:
                                    acc += F[e-1][i] * F[e-1][j]
                                else:
                                    acc -= F[e-1][i] * F[e-1][j]
                                for ei in range(e):
                                    F[ei][j] -= acc * F[ei][i]
                            acc = 0.0
                            for ei in range(e - 1):
                                acc += F[ei][j] * F[ei][j]
                            if kind == 1:
                                acc += F[e-1][j] * F[e-1][j]
                            else:
                                acc -= F[e-1][j] * F[e-1][j]
                            acc = 1.0 / sqrt(acc)
                            for ei in range(e):
                                F[ei][j] *= acc

            # write outputs
            if trivial_flat:
                for ei in range(e):
                    x[ei] = x0[ei] + disp[ei]
            ok = 1
            for ei in range(e):
                mv_end[p, ei] = x[ei]
                if not isfinite(x[ei]):
                    ok = 0
            mv_q[p] = q
            if not isfinite(q):
                ok = 0
            for i in range(d):
                mv_a[p, i] = A[i]
                mv_qv[p, i] = qv[i]
                if not isfinite(A[i]):
                    ok = 0
                for j in range(d):
                    mv_c[p, i, j] = C[i][j]
                    mv_d[p, i, j] = Dm[i][j]
                    if not isfinite(C[i][j]) or not isfinite(Dm[i][j]):
                        ok = 0
            mv_qmax[p] = qmax
            mv_valid[p] = ok

    free(xi)
    return (endpoint, qout, aout, cout, dout, qvout, qmaxout, validout, qchk_arr)
