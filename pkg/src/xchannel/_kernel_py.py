"""Pure-Python grid kernel, used when the compiled extension is unavailable."""
import math

import numpy as np

from xchannel import bounds


def _certificates(a2, b2, p1, p2, delta):
    if not delta > 0.0:
        return (0, 0, 0)
    cert_a = b2 <= 1.0 and a2 > bounds.delta_threshold_a(p1, delta)
    cert_b = cert_c = False
    if a2 >= 1.0:
        cert_b = b2 < bounds.delta_threshold_b(a2, p2, delta)
        cert_c = b2 < bounds.delta_threshold_c(p1, delta)
    return (int(cert_a), int(cert_b), int(cert_c))


def evaluate_grid(a2_in, b2_in, p1, p2, delta=0.0):
    """Same contract as the compiled ``evaluate_grid``."""
    a2 = np.ascontiguousarray(a2_in, dtype=np.float64)
    b2 = np.ascontiguousarray(b2_in, dtype=np.float64)
    n = a2.shape[0]
    if b2.shape[0] != n:
        raise ValueError("a2 and b2 must have the same length")
    p1 = float(p1)
    p2 = float(p2)
    delta = float(delta)
    mac = np.empty((n, 2))
    status = np.empty((n, 6), dtype=np.int8)
    gap = np.empty((n, 6))
    cert = np.empty((n, 6), dtype=np.uint8)
    for i, (x, y) in enumerate(zip(a2.tolist(), b2.tolist())):
        m1, s1, g1 = bounds.side_one_raw(x, y, p1, p2)
        m2, s2, g2 = bounds.side_one_raw(y, x, p2, p1)
        mac[i] = (m1, m2)
        status[i] = s1 + s2
        gap[i] = g1 + g2
        cert[i] = _certificates(x, y, p1, p2, delta) + _certificates(y, x, p2, p1, delta)
    value = np.where(status == bounds.OK, gap + np.repeat(mac, 3, axis=1), math.nan)
    return mac, status, gap, value, cert
