"""Pure-Python reference implementation of the scan kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
extension is unavailable or ``NESTLAB_PURE=1`` is set.
"""

STAIRCASE = 0
STRICT = 1


def _image_ok(minc, maxc, m, mode):
    running = 0
    prev = 0
    for R in range(1, m + 1):
        hi = maxc[R]
        if hi == 0:
            continue
        lo = minc[R]
        if mode == STAIRCASE:
            if running > lo:
                return False
            if hi > running:
                running = hi
        else:
            if lo != hi or lo <= prev:
                return False
            prev = lo
    return True


def _aslist(seq):
    return seq.tolist() if hasattr(seq, "tolist") else list(seq)


def cellset_ok(rows, cols, m, mode):
    """True iff the cell set ``zip(rows, cols)`` on ``m`` atoms passes ``mode``."""
    minc = [m + 1] * (m + 1)
    maxc = [0] * (m + 1)
    for R, C in zip(rows, cols):
        if C < minc[R]:
            minc[R] = C
        if C > maxc[R]:
            maxc[R] = C
    return _image_ok(minc, maxc, m, mode)


def scan_images(sup_rows, sup_cols, offsets, fmap, m, mode):
    """Index of the first support whose image under all summands fails ``mode``.

    Supports are stored flat: support ``k`` is the cells
    ``(sup_rows[i], sup_cols[i])`` for ``offsets[k] <= i < offsets[k+1]``.
    ``fmap[s][a]`` is the codomain atom of domain atom ``a`` under summand ``s``.
    Returns -1 when every image passes.
    """
    sup_rows, sup_cols, offsets = _aslist(sup_rows), _aslist(sup_cols), _aslist(offsets)
    fmap = [_aslist(f) for f in fmap]
    nsup = len(offsets) - 1
    mu = len(fmap)
    for k in range(nsup):
        minc = [m + 1] * (m + 1)
        maxc = [0] * (m + 1)
        for i in range(offsets[k], offsets[k + 1]):
            a = sup_rows[i]
            b = sup_cols[i]
            for s in range(mu):
                f = fmap[s]
                R = f[a]
                C = f[b]
                if C < minc[R]:
                    minc[R] = C
                if C > maxc[R]:
                    maxc[R] = C
        if not _image_ok(minc, maxc, m, mode):
            return k
    return -1
