# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Results must match _pykernels bit for bit."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

NAME = "cython"


cdef inline void _haar_level(double[:, ::1] src, int side, double[:, ::1] ca,
                             double *ch, double *cv) noexcept nogil:
    # One level on the top-left side x side region of src; ch/cv receive the
    # first cell's details (only used at the last level).
    cdef int i, j, half = side // 2
    cdef double p00, p01, p10, p11
    for i in range(half):
        for j in range(half):
            p00 = src[2 * i, 2 * j]
            p01 = src[2 * i, 2 * j + 1]
            p10 = src[2 * i + 1, 2 * j]
            p11 = src[2 * i + 1, 2 * j + 1]
            ca[i, j] = (((p00 + p01) + p10) + p11) / 2.0
            if i == 0 and j == 0:
                ch[0] = (((p00 + p01) - p10) - p11) / 2.0
                cv[0] = (((p00 - p01) + p10) - p11) / 2.0


def block_analysis(x):
    cdef double[:, ::1] img = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    if h % 8 or w % 8:
        raise ValueError(f"dimensions must be multiples of 8, got {w}x{h}")
    cdef Py_ssize_t hb = h // 8, wb = w // 8, nb = hb * wb
    l1_arr = np.empty((nb, 16), dtype=np.float64)
    l3_arr = np.empty((nb, 3), dtype=np.float64)
    cdef double[:, ::1] l1 = l1_arr
    cdef double[:, ::1] l3 = l3_arr
    cdef double[:, ::1] blk = np.empty((8, 8))
    cdef double[:, ::1] a1 = np.empty((4, 4))
    cdef double[:, ::1] a2 = np.empty((2, 2))
    cdef double[:, ::1] a3 = np.empty((1, 1))
    cdef double dh, dv
    cdef Py_ssize_t bi, bj, k, r, c
    with nogil:
        for bi in range(hb):
            for bj in range(wb):
                k = bi * wb + bj
                for r in range(8):
                    for c in range(8):
                        blk[r, c] = img[bi * 8 + r, bj * 8 + c]
                _haar_level(blk, 8, a1, &dh, &dv)
                _haar_level(a1, 4, a2, &dh, &dv)
                _haar_level(a2, 2, a3, &dh, &dv)
                for r in range(4):
                    for c in range(4):
                        l1[k, r * 4 + c] = a1[r, c]
                l3[k, 0] = a3[0, 0]
                l3[k, 1] = dh
                l3[k, 2] = dv
    return l1_arr, l3_arr


def nms(mag_in, bins_in):
    cdef double[:, ::1] mag = np.ascontiguousarray(mag_in, dtype=np.float64)
    cdef signed char[:, ::1] bins = np.ascontiguousarray(bins_in, dtype=np.int8)
    cdef Py_ssize_t h = mag.shape[0], w = mag.shape[1], r, c
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef int dr, dc
    cdef signed char b
    cdef double m, fwd, bwd
    with nogil:
        for r in range(h):
            for c in range(w):
                m = mag[r, c]
                if m <= 0:
                    continue
                b = bins[r, c]
                if b == 0:
                    dr = 0; dc = 1
                elif b == 1:
                    dr = 1; dc = 1
                elif b == 2:
                    dr = 1; dc = 0
                else:
                    dr = 1; dc = -1
                fwd = 0.0
                bwd = 0.0
                if 0 <= r + dr < h and 0 <= c + dc < w:
                    fwd = mag[r + dr, c + dc]
                if 0 <= r - dr < h and 0 <= c - dc < w:
                    bwd = mag[r - dr, c - dc]
                if m >= fwd and m >= bwd:
                    out[r, c] = m
    return out_arr


def hysteresis(strong_in, weak_in):
    cdef cnp.uint8_t[:, ::1] strong = np.ascontiguousarray(strong_in, dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] weak = np.ascontiguousarray(weak_in, dtype=np.uint8)
    cdef Py_ssize_t h = weak.shape[0], w = weak.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef cnp.intp_t[::1] stack = np.empty(h * w, dtype=np.intp)
    cdef Py_ssize_t top = 0, r, c, rr, cc, p
    cdef int dr, dc
    with nogil:
        for r in range(h):
            for c in range(w):
                if strong[r, c] and weak[r, c] and not out[r, c]:
                    out[r, c] = 1
                    stack[top] = r * w + c
                    top += 1
                    while top > 0:
                        top -= 1
                        p = stack[top]
                        rr = p // w
                        cc = p % w
                        for dr in range(-1, 2):
                            for dc in range(-1, 2):
                                if 0 <= rr + dr < h and 0 <= cc + dc < w:
                                    if weak[rr + dr, cc + dc] and not out[rr + dr, cc + dc]:
                                        out[rr + dr, cc + dc] = 1
                                        stack[top] = (rr + dr) * w + cc + dc
                                        top += 1
    return out_arr.astype(bool)


def median_filter(img_in, int side):
    # Running histogram along each row: one column leaves and one enters per
    # step, and the median moves from its previous value.
    cdef int rad = side // 2
    cdef cnp.uint8_t[:, ::1] img = np.ascontiguousarray(img_in, dtype=np.uint8)
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef int hist[256]
    cdef int r, c, i, j, rr, col, v, m, below
    cdef int need = (side * side) // 2 + 1
    cdef int hi = <int>h - 1, wi = <int>w - 1
    with nogil:
        for r in range(<int>h):
            for v in range(256):
                hist[v] = 0
            for i in range(-rad, rad + 1):
                rr = min(max(r + i, 0), hi)
                for j in range(-rad, rad + 1):
                    hist[img[rr, min(max(j, 0), wi)]] += 1
            m = 0
            below = 0
            while below + hist[m] < need:
                below += hist[m]
                m += 1
            out[r, 0] = m
            for c in range(1, <int>w):
                for i in range(-rad, rad + 1):
                    rr = min(max(r + i, 0), hi)
                    col = max(c - rad - 1, 0)
                    v = img[rr, col]
                    hist[v] -= 1
                    if v < m:
                        below -= 1
                    col = min(c + rad, wi)
                    v = img[rr, col]
                    hist[v] += 1
                    if v < m:
                        below += 1
                # below counts values < m; the median is the first m with
                # below < need <= below + hist[m]
                while below >= need:
                    m -= 1
                    below -= hist[m]
                while below + hist[m] < need:
                    below += hist[m]
                    m += 1
                out[r, c] = m
    return out_arr
