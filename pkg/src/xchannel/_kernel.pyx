# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernel: all six bounds and delta certificates per point.

Mirrors the scalar formulas in ``xchannel.bounds`` operation for operation so
that results agree bit for bit with point evaluations.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log2, pow, isnan, INFINITY

cnp.import_array()

cdef double BOUNDARY_RTOL = 1e-12

cdef enum:
    OK = 0
    B2_ABOVE_ONE = 1
    A2_NOT_ABOVE_THRESHOLD = 2
    BOUNDARY = 3
    A2_BELOW_ONE = 4
    B2_NOT_BELOW_THRESHOLD = 5


cdef inline double _mac1(double a2, double p1, double p2) nogil:
    return 0.5 * log2(1.0 + p1 + a2 * p2)


cdef inline int _status_a(double a2, double b2, double p1) nogil:
    cdef double q, lim
    if b2 > 1.0:
        return B2_ABOVE_ONE
    q = p1 + 1.0
    lim = q * q
    if a2 <= lim:
        return A2_NOT_ABOVE_THRESHOLD
    if a2 - lim <= BOUNDARY_RTOL * lim:
        return BOUNDARY
    return OK


cdef inline int _status_b(double a2, double b2, double p2) nogil:
    cdef double s, lim
    if a2 < 1.0:
        return A2_BELOW_ONE
    s = a2 * p2 + 1.0
    lim = 1.0 / (s * s)
    if b2 >= lim:
        return B2_NOT_BELOW_THRESHOLD
    if lim - b2 <= BOUNDARY_RTOL * lim:
        return BOUNDARY
    return OK


cdef void _side(double a2, double b2, double p1, double p2, double delta,
                double *mac, signed char *status, double *gap, double *value,
                unsigned char *cert) nogil:
    cdef double q, s, t, thr
    cdef int k
    mac[0] = _mac1(a2, p1, p2)
    status[0] = _status_a(a2, b2, p1)
    status[1] = _status_b(a2, b2, p2)
    status[2] = OK if a2 >= 1.0 else A2_BELOW_ONE
    q = p1 + 1.0
    s = a2 * p2 + 1.0
    gap[0] = 0.5 * log2((1.0 - q / a2) / (1.0 - q * q / a2)) if status[0] == OK else 0.0
    gap[1] = 0.5 * log2((1.0 - b2 * s) / (1.0 - b2 * s * s)) if status[1] == OK else 0.0
    gap[2] = 0.5 * log2(1.0 + b2 * p1) if status[2] == OK else 0.0
    for k in range(3):
        value[k] = mac[0] + gap[k]
    cert[0] = 0
    cert[1] = 0
    cert[2] = 0
    if not (delta > 0.0):
        return
    t = pow(2.0, 2.0 * delta)
    thr = q * (q * t - 1.0) / (t - 1.0)
    if b2 <= 1.0 and a2 > thr:
        cert[0] = 1
    if a2 >= 1.0:
        thr = (t - 1.0) / ((s * t - 1.0) * s)
        if b2 < thr:
            cert[1] = 1
        thr = INFINITY if p1 == 0.0 else (t - 1.0) / p1
        if b2 < thr:
            cert[2] = 1


def evaluate_grid(a2_in, b2_in, double p1, double p2, double delta=0.0):
    """Evaluate both sides at each ``(a2[i], b2[i])``.

    Returns ``(mac, status, gap, value, cert)``: ``mac`` has shape ``(n, 2)``
    (receiver 1, receiver 2); the others have shape ``(n, 6)`` in kind order
    A1, B1, C1, A2, B2, C2. ``gap`` and ``value`` are NaN where ``status`` is
    nonzero. ``cert`` is all zero unless ``delta > 0``.
    """
    cdef double[::1] a2 = np.ascontiguousarray(a2_in, dtype=np.float64)
    cdef double[::1] b2 = np.ascontiguousarray(b2_in, dtype=np.float64)
    cdef Py_ssize_t n = a2.shape[0]
    if b2.shape[0] != n:
        raise ValueError("a2 and b2 must have the same length")
    mac_arr = np.empty((n, 2), dtype=np.float64)
    status_arr = np.empty((n, 6), dtype=np.int8)
    gap_arr = np.empty((n, 6), dtype=np.float64)
    value_arr = np.empty((n, 6), dtype=np.float64)
    cert_arr = np.empty((n, 6), dtype=np.uint8)
    cdef double[:, ::1] mac = mac_arr
    cdef signed char[:, ::1] status = status_arr
    cdef double[:, ::1] gap = gap_arr
    cdef double[:, ::1] value = value_arr
    cdef unsigned char[:, ::1] cert = cert_arr
    cdef Py_ssize_t i
    cdef int k
    cdef double nan = float("nan")
    with nogil:
        for i in range(n):
            _side(a2[i], b2[i], p1, p2, delta,
                  &mac[i, 0], &status[i, 0], &gap[i, 0], &value[i, 0], &cert[i, 0])
            _side(b2[i], a2[i], p2, p1, delta,
                  &mac[i, 1], &status[i, 3], &gap[i, 3], &value[i, 3], &cert[i, 3])
            for k in range(6):
                if status[i, k] != OK:
                    gap[i, k] = nan
                    value[i, k] = nan
    return mac_arr, status_arr, gap_arr, value_arr, cert_arr
