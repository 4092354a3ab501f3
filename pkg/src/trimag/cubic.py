"""Depressed complex cubics: closed-form roots and the companion oracle.

The eigenvalue problem of the three-mode system reduces to a depressed
cubic  x**3 + c1*x + c0 = 0  with complex coefficients (the quadratic term
vanishes because the trace is removed).  The closed form below evaluates
the classical two-radical solution with a stable branch pairing, then
Newton-polishes every root.  An independent companion-matrix eigensolve is
provided as the cross-check oracle.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

# primitive cube root of unity
_W = complex(-0.5, math.sqrt(3.0) / 2.0)

#: residual bound for a polished root, scaled by the coefficient magnitude
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of x**3 + c1*x + c0 = 0.

    c0 carries (rad/us)**3, c1 carries (rad/us)**2 when the cubic comes
    from the three-mode eigenproblem; the solver itself is unit-agnostic.
    """

    c0: complex
    c1: complex

    def scale(self) -> float:
        """Natural magnitude of a root, used to normalize residuals."""
        return max(1.0, abs(self.c0) ** (1.0 / 3.0), abs(self.c1) ** 0.5)


@dataclass(frozen=True)
class ComplexTriple:
    """The three (biased) eigenvalues of the cubic, in rad/us."""

    omega0: complex
    omega1: complex
    omega2: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.omega0, self.omega1, self.omega2], dtype=complex)

    def __iter__(self):
        return iter((self.omega0, self.omega1, self.omega2))


def _residual(x: complex, coeffs: CubicCoeffs) -> complex:
    return x * x * x + coeffs.c1 * x + coeffs.c0


def _newton_polish(x: complex, coeffs: CubicCoeffs, iterations: int = 4) -> complex:
    # accept a step only if it reduces |f|: at (near-)multiple roots the
    # residual is rounding-noise dominated and a raw step can wander O(1)
    best = abs(_residual(x, coeffs))
    for _ in range(iterations):
        if best == 0.0:
            break
        fp = 3.0 * x * x + coeffs.c1
        if fp == 0:
            break
        candidate = x - _residual(x, coeffs) / fp
        value = abs(_residual(candidate, coeffs))
        if value >= best:
            break
        x, best = candidate, value
    return x


def cardano_roots(coeffs: CubicCoeffs) -> ComplexTriple:
    """All three roots of x**3 + c1*x + c0 = 0 by the closed form.

    Writing x = u + v with 3*u*v = -c1, u**3 and v**3 are the roots of a
    quadratic; the larger-magnitude radical is taken through the principal
    cube root and its partner through v = -c1/(3u), which fixes the branch
    pairing unambiguously.  Each root is Newton-polished afterwards so the
    residual |x^3 + c1 x + c0| stays below RESIDUAL_TOL * scale**3.
    """
    c0, c1 = complex(coeffs.c0), complex(coeffs.c1)
    if c0 == 0 and c1 == 0:
        z = 0j
        return ComplexTriple(z, z, z)

    disc = cmath.sqrt(c0 * c0 / 4.0 + c1 * c1 * c1 / 27.0)
    z_plus = -c0 / 2.0 + disc
    z_minus = -c0 / 2.0 - disc
    # both radicals vanish only when c0 = c1 = 0, handled above
    z = z_plus if abs(z_plus) >= abs(z_minus) else z_minus
    u = z ** (1.0 / 3.0)
    v = -c1 / (3.0 * u)
    roots = (u + v,
             _W * u + _W.conjugate() * v,
             _W.conjugate() * u + _W * v)

    polished = tuple(_newton_polish(r, coeffs) for r in roots)
    return ComplexTriple(*polished)


def companion_roots(coeffs: CubicCoeffs) -> ComplexTriple:
    """Independent oracle: eigenvalues of the companion matrix."""
    c = np.array(
        [[0.0, 0.0, -coeffs.c0],
         [1.0, 0.0, -coeffs.c1],
         [0.0, 1.0, 0.0]], dtype=complex)
    ev = np.linalg.eigvals(c)
    return ComplexTriple(ev[0], ev[1], ev[2])


def max_residual(triple: ComplexTriple, coeffs: CubicCoeffs) -> float:
    return max(abs(_residual(x, coeffs)) for x in triple)


def multiset_distance(a: ComplexTriple, b: ComplexTriple) -> float:
    """Smallest max-elementwise distance over all pairings of two triples."""
    av, bv = a.as_array(), b.as_array()
    best = math.inf
    for perm in itertools.permutations(range(3)):
        d = float(np.max(np.abs(av[list(perm)] - bv)))
        best = min(best, d)
    return best


def ep2_discriminant(coeffs: CubicCoeffs) -> complex:
    """27*c0**2 + 4*c1**3; zero exactly where two roots merge."""
    return 27.0 * coeffs.c0 * coeffs.c0 + 4.0 * coeffs.c1 ** 3


def match_to_previous(roots: np.ndarray, previous: np.ndarray) -> np.ndarray:
    """Reorder three roots to continue three tracked branches.

    Minimal-total-distance assignment over the six permutations; used for
    nearest-neighbor continuation of eigenvalue surfaces across parameter
    sweeps.
    """
    best_perm, best_cost = None, math.inf
    for perm in itertools.permutations(range(3)):
        cost = float(np.sum(np.abs(roots[list(perm)] - previous)))
        if cost < best_cost:
            best_cost, best_perm = cost, perm
    return roots[list(best_perm)]
