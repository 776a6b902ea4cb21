# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel twin.

Mirrors _kernels_py operation for operation so both produce bit-identical
results; keep the two in sync when editing either.
"""

from libc.math cimport atan2, cos, fabs, floor, pow, sin
from libc.stdlib cimport free, malloc

TWO_PI = 6.283185307179586
# Angular slack for boundary ownership decisions, in radians.
ANGLE_EPS = 1e-9

cdef double _TWO_PI = 6.283185307179586
cdef double _ANGLE_EPS = 1e-9


cpdef double azimuth(double dx, double dy):
    """Clockwise angle from the +y axis, in [0, 2*pi)."""
    cdef double az = atan2(dx, dy)
    if az < 0.0:
        az += _TWO_PI
        # A negative angle below one ulp rounds back up to the full turn.
        if az >= _TWO_PI:
            az = 0.0
    return az


cpdef long cone_index(double dx, double dy, long k):
    """Index of the cone (k equal wedges, cone 0 centred on +y, labels clockwise)
    containing the vector. A vector within ANGLE_EPS of a boundary belongs to the
    counter-clockwise (lower-index) cone."""
    cdef double az = atan2(dx, dy)
    if az < 0.0:
        az += _TWO_PI
    cdef double theta = _TWO_PI / k
    cdef double t = (az - 0.5 * theta) / theta
    cdef double m = floor(t + 0.5)
    cdef long i
    if fabs(t - m) * theta <= _ANGLE_EPS:
        i = <long> m
    else:
        i = <long> floor(t) + 1
    return i % k


cpdef double theta_projection_len(double dx, double dy, long k):
    """Length of the vector's projection onto the bisector of its own cone."""
    cdef long i = cone_index(dx, dy, k)
    cdef double bis = i * (_TWO_PI / k)
    return dx * sin(bis) + dy * cos(bis)


cpdef bint point_in_tri(double px, double py, double ax, double ay,
                        double bx, double by, double cx, double cy, double eps):
    """Closed point-in-triangle test with eps slack: points up to eps outside an
    edge (true distance) still count as inside."""
    cdef double area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    cdef double tx, ty
    if area2 < 0.0:
        tx = bx
        ty = by
        bx = cx
        by = cy
        cx = tx
        cy = ty
    if not _left_ok(px, py, ax, ay, bx, by, eps):
        return False
    if not _left_ok(px, py, bx, by, cx, cy, eps):
        return False
    if not _left_ok(px, py, cx, cy, ax, ay, eps):
        return False
    return True


cdef bint _left_ok(double px, double py, double x1, double y1,
                   double x2, double y2, double eps):
    cdef double ex = x2 - x1
    cdef double ey = y2 - y1
    cdef double cross = ex * (py - y1) - ey * (px - x1)
    cdef double ln = pow(ex * ex + ey * ey, 0.5)
    return cross >= -eps * ln


def cone_edges(xs, ys, long k, bint use_projection, long cone_mask):
    """Closest-per-cone edge scan.

    For every vertex u and every cone i (restricted to cone_mask bits when
    cone_mask is nonzero) return (u, i, v) where v minimises
    (projection, squared distance, index) when use_projection is true, else
    (squared distance, index). Indices are positions in xs/ys.
    """
    cdef Py_ssize_t n = len(xs)
    cdef double theta = _TWO_PI / k
    cdef Py_ssize_t size = n * k
    cdef double* cxs = <double*> malloc(n * sizeof(double))
    cdef double* cys = <double*> malloc(n * sizeof(double))
    cdef double* bk1 = <double*> malloc(size * sizeof(double))
    cdef double* bk2 = <double*> malloc(size * sizeof(double))
    cdef long* bv = <long*> malloc(size * sizeof(long))
    if cxs == NULL or cys == NULL or bk1 == NULL or bk2 == NULL or bv == NULL:
        free(cxs)
        free(cys)
        free(bk1)
        free(bk2)
        free(bv)
        raise MemoryError()
    cdef Py_ssize_t u, v, idx
    cdef long i, w
    cdef double xu, yu, dx, dy, d2, bis, k1, k2
    try:
        for u in range(n):
            cxs[u] = xs[u]
            cys[u] = ys[u]
        for idx in range(size):
            bv[idx] = -1
            bk1[idx] = 0.0
            bk2[idx] = 0.0
        for u in range(n):
            xu = cxs[u]
            yu = cys[u]
            for v in range(n):
                if v == u:
                    continue
                dx = cxs[v] - xu
                dy = cys[v] - yu
                i = cone_index(dx, dy, k)
                if cone_mask != 0 and not (cone_mask >> i) & 1:
                    continue
                d2 = dx * dx + dy * dy
                if use_projection:
                    bis = i * theta
                    k1 = dx * sin(bis) + dy * cos(bis)
                    k2 = d2
                else:
                    k1 = d2
                    k2 = 0.0
                idx = u * k + i
                w = bv[idx]
                if (
                    w < 0
                    or k1 < bk1[idx]
                    or (k1 == bk1[idx] and (k2 < bk2[idx] or (k2 == bk2[idx] and v < w)))
                ):
                    bk1[idx] = k1
                    bk2[idx] = k2
                    bv[idx] = <long> v
        out = []
        for u in range(n):
            for i in range(k):
                w = bv[u * k + i]
                if w >= 0:
                    out.append((u, i, w))
        return out
    finally:
        free(cxs)
        free(cys)
        free(bk1)
        free(bk2)
        free(bv)
