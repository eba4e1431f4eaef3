"""Shared independent oracles for the test suite.

The free-particle oracle is computed from first principles (straight-line
inertial motion rotated back by the accumulated angle), never via the
simulator's own transforms.
"""

import math

from coriolis_sim.vec import Vec3


def free_particle_rot(t: float, v_in0: Vec3, omega_z: float, r_in0: Vec3 = Vec3()) -> Vec3:
    """Closed-form rotating-frame position of a free particle.

    Inertial motion is r_in(t) = r_in0 + v_in0 * t; the rotating-frame view
    is that point rotated by -omega*t about +z.
    """
    x = r_in0.x + v_in0.x * t
    y = r_in0.y + v_in0.y * t
    a = -omega_z * t
    c, s = math.cos(a), math.sin(a)
    return Vec3(c * x - s * y, s * x + c * y, 0.0)


def max_line_residual(points) -> float:
    """Max perpendicular distance of 2D points from their least-squares line.

    Principal-component fit via the covariance matrix; independent of any
    simulator code.
    """
    n = len(points)
    mx = sum(p.x for p in points) / n
    my = sum(p.y for p in points) / n
    sxx = sum((p.x - mx) ** 2 for p in points) / n
    syy = sum((p.y - my) ** 2 for p in points) / n
    sxy = sum((p.x - mx) * (p.y - my) for p in points) / n
    # eigenvector of the largest eigenvalue of [[sxx, sxy], [sxy, syy]]
    half_trace = 0.5 * (sxx + syy)
    det = sxx * syy - sxy * sxy
    lam = half_trace + math.sqrt(max(half_trace * half_trace - det, 0.0))
    if abs(sxy) > 1e-300:
        dx, dy = lam - syy, sxy
    elif sxx >= syy:
        dx, dy = 1.0, 0.0
    else:
        dx, dy = 0.0, 1.0
    norm = math.hypot(dx, dy)
    dx, dy = dx / norm, dy / norm
    # residual = component perpendicular to the line direction
    return max(abs(-(p.x - mx) * dy + (p.y - my) * dx) for p in points)
