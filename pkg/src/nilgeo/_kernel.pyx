# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernel over Z[i]; mirrors ``_kernel_py`` exactly."""

from math import gcd

BACKEND = "cython"


cdef object _content_real(list re):
    cdef Py_ssize_t k, n = len(re)
    cdef object g = 0
    cdef object x
    for k in range(n):
        x = re[k]
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


cdef tuple _gauss_gcd(object ar, object ai, object br, object bi):
    cdef object n, tr, ti, qr, qi, rr, ri
    while br or bi:
        n = br * br + bi * bi
        tr = ar * br + ai * bi
        ti = ai * br - ar * bi
        qr = (2 * tr + n) // (2 * n)
        qi = (2 * ti + n) // (2 * n)
        rr = ar - (qr * br - qi * bi)
        ri = ai - (qr * bi + qi * br)
        ar, ai, br, bi = br, bi, rr, ri
    return ar, ai


cdef tuple _content_complex(list re, list im):
    cdef Py_ssize_t k, n = len(re)
    cdef object gr = 0, gi = 0
    for k in range(n):
        if re[k] or im[k]:
            gr, gi = _gauss_gcd(re[k], im[k], gr, gi)
            if gr * gr + gi * gi == 1:
                return 1, 0
    while (gr or gi) and not (gr > 0 and gi >= 0):
        gr, gi = -gi, gr
    return gr, gi


cdef void _normalize(list re, list im):
    cdef Py_ssize_t k, n = len(re)
    cdef object g, gr, gi, xr, xi
    if im is None:
        g = _content_real(re)
        if g > 1:
            for k in range(n):
                if re[k]:
                    re[k] = re[k] // g
        return
    gr, gi = _content_complex(re, im)
    if gi == 0 and gr <= 1:
        return
    g = gr * gr + gi * gi
    for k in range(n):
        xr = re[k]
        xi = im[k]
        if xr or xi:
            re[k] = (xr * gr + xi * gi) // g
            im[k] = (xi * gr - xr * gi) // g


cdef void _eliminate_real(list target, list pivot_row, Py_ssize_t c):
    cdef object p = pivot_row[c]
    cdef object e = target[c]
    cdef object t, s
    cdef Py_ssize_t k, n = len(target)
    for k in range(n):
        t = target[k]
        s = pivot_row[k]
        if s:
            target[k] = p * t - e * s
        elif t:
            target[k] = p * t
    _normalize(target, None)


cdef void _eliminate_complex(list tre, list tim, list pre, list pim, Py_ssize_t c):
    cdef object pr = pre[c]
    cdef object pi = pim[c]
    cdef object er = tre[c]
    cdef object ei = tim[c]
    cdef object xr, xi, sr, si
    cdef Py_ssize_t k, n = len(tre)
    for k in range(n):
        xr = tre[k]
        xi = tim[k]
        sr = pre[k]
        si = pim[k]
        if sr or si:
            tre[k] = pr * xr - pi * xi - (er * sr - ei * si)
            tim[k] = pr * xi + pi * xr - (er * si + ei * sr)
        elif xr or xi:
            tre[k] = pr * xr - pi * xi
            tim[k] = pr * xi + pi * xr
    _normalize(tre, tim)


def gauss_jordan(list re, im, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(re)
    cdef bint complex_mode = im is not None
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, j, found
    cdef list rowre, rowim
    for c in range(ncols):
        if r >= nrows:
            break
        found = -1
        for j in range(r, nrows):
            rowre = re[j]
            if rowre[c]:
                found = j
                break
            if complex_mode:
                rowim = im[j]
                if rowim[c]:
                    found = j
                    break
        if found < 0:
            continue
        if found != r:
            re[r], re[found] = re[found], re[r]
            if complex_mode:
                im[r], im[found] = im[found], im[r]
        _normalize(re[r], im[r] if complex_mode else None)
        for j in range(nrows):
            if j == r:
                continue
            rowre = re[j]
            if complex_mode:
                rowim = im[j]
                if rowre[c] or rowim[c]:
                    _eliminate_complex(rowre, rowim, re[r], im[r], c)
            elif rowre[c]:
                _eliminate_real(rowre, re[r], c)
        pivots.append(c)
        r += 1
    del re[r:]
    if complex_mode:
        del im[r:]
    return re, im, pivots


def reduce_row(list basis_re, basis_im, list pivots, list vre, vim):
    cdef bint complex_mode = vim is not None
    cdef Py_ssize_t idx, c, k, n = len(vre)
    cdef list wim
    if complex_mode:
        wim = vim
    for idx in range(len(pivots)):
        c = pivots[idx]
        if complex_mode:
            if vre[c] or wim[c]:
                _eliminate_complex(vre, wim, basis_re[idx], basis_im[idx], c)
        elif vre[c]:
            _eliminate_real(vre, basis_re[idx], c)
    for k in range(n):
        if vre[k] or (complex_mode and wim[k]):
            _normalize(vre, wim if complex_mode else None)
            return k
    return -1
