"""Pure-Python elimination kernel over Z[i].

Rows are lists of Python ints: a real part and, for complex input, an
imaginary part of the same length (``im is None`` selects the real path).
Elimination is fraction-free; every updated row is divided by the gcd of its
components (taken in Z[i] for complex rows) so that entries stay small.  The
compiled twin in ``_kernel.pyx`` implements the same functions with the same
results.
"""

from math import gcd

BACKEND = "python"


def _content_real(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def _gauss_gcd(ar, ai, br, bi):
    """Euclid in Z[i] with nearest-integer quotients."""
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


def _content_complex(re, im):
    """Gaussian gcd of the row, as the associate with re > 0, im >= 0."""
    gr = gi = 0
    for k in range(len(re)):
        if re[k] or im[k]:
            gr, gi = _gauss_gcd(re[k], im[k], gr, gi)
            if gr * gr + gi * gi == 1:
                return 1, 0
    while (gr or gi) and not (gr > 0 and gi >= 0):
        gr, gi = -gi, gr
    return gr, gi


def _normalize_real(row):
    g = _content_real(row)
    if g > 1:
        for k in range(len(row)):
            if row[k]:
                row[k] //= g


def _normalize_complex(re, im):
    gr, gi = _content_complex(re, im)
    if gi == 0 and gr <= 1:
        return
    n = gr * gr + gi * gi
    for k in range(len(re)):
        xr = re[k]
        xi = im[k]
        if xr or xi:
            # x * conj(g) / N(g), exact
            re[k] = (xr * gr + xi * gi) // n
            im[k] = (xi * gr - xr * gi) // n


def _eliminate_real(target, pivot_row, c):
    # target <- p*target - e*pivot_row, zeroing column c
    p = pivot_row[c]
    e = target[c]
    n = len(target)
    for k in range(n):
        t = target[k]
        s = pivot_row[k]
        if s:
            target[k] = p * t - e * s
        elif t:
            target[k] = p * t
    _normalize_real(target)


def _eliminate_complex(tre, tim, pre, pim, c):
    pr = pre[c]
    pi = pim[c]
    er = tre[c]
    ei = tim[c]
    n = len(tre)
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
    _normalize_complex(tre, tim)


def gauss_jordan(re, im, ncols):
    """Reduce rows in place to reduced echelon form (up to row scaling).

    Pivot rule: leftmost column, then the topmost remaining row holding a
    nonzero entry in it.  Returns ``(re, im, pivots)`` where only the first
    ``len(pivots)`` rows are kept.
    """
    nrows = len(re)
    complex_mode = im is not None
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        found = -1
        for j in range(r, nrows):
            if re[j][c] or (complex_mode and im[j][c]):
                found = j
                break
        if found < 0:
            continue
        if found != r:
            re[r], re[found] = re[found], re[r]
            if complex_mode:
                im[r], im[found] = im[found], im[r]
        if complex_mode:
            _normalize_complex(re[r], im[r])
        else:
            _normalize_real(re[r])
        for j in range(nrows):
            if j == r:
                continue
            if complex_mode:
                if re[j][c] or im[j][c]:
                    _eliminate_complex(re[j], im[j], re[r], im[r], c)
            elif re[j][c]:
                _eliminate_real(re[j], re[r], c)
        pivots.append(c)
        r += 1
    del re[r:]
    if complex_mode:
        del im[r:]
    return re, im, pivots


def reduce_row(basis_re, basis_im, pivots, vre, vim):
    """Reduce ``v`` against echelon rows (pivot columns increasing).

    Returns the index of the first nonzero column of the reduced vector, or
    -1 when ``v`` lies in the span.  ``v`` is modified in place.
    """
    complex_mode = vim is not None
    for idx in range(len(pivots)):
        c = pivots[idx]
        if complex_mode:
            if vre[c] or vim[c]:
                _eliminate_complex(vre, vim, basis_re[idx], basis_im[idx], c)
        elif vre[c]:
            _eliminate_real(vre, basis_re[idx], c)
    for k in range(len(vre)):
        if vre[k] or (complex_mode and vim[k]):
            if complex_mode:
                _normalize_complex(vre, vim)
            else:
                _normalize_real(vre)
            return k
    return -1
