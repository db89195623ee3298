"""Quaternion arithmetic in symplectic form.

A quaternion ``q = x0 + x1 i + x2 j + x3 k`` is stored as the complex pair
``q = z0 + z1 j`` with ``z0 = x0 + x1 i`` and ``z1 = x2 + x3 i``. Products follow
from the single commutation rule ``j z = conj(z) j``.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from numbers import Number
from typing import Tuple

from .errors import NumericDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Quaternion:
    z0: complex = 0j
    z1: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "z0", complex(self.z0))
        object.__setattr__(self, "z1", complex(self.z1))

    # ----------------- constructors -----------------

    @classmethod
    def from_components(cls, x0: float, x1: float, x2: float, x3: float) -> "Quaternion":
        return cls(complex(x0, x1), complex(x2, x3))

    # ----------------- read-only views -----------------

    @property
    def components(self) -> Tuple[float, float, float, float]:
        """Four-real view ``(x0, x1, x2, x3)`` over the basis ``1, i, j, k``."""
        return (self.z0.real, self.z0.imag, self.z1.real, self.z1.imag)

    @property
    def real(self) -> float:
        return self.z0.real

    def norm_squared(self) -> float:
        return abs(self.z0) ** 2 + abs(self.z1) ** 2

    def norm(self) -> float:
        return self.norm_squared() ** 0.5

    def __abs__(self) -> float:
        return self.norm()

    # ----------------- arithmetic -----------------

    def __add__(self, other: object) -> "Quaternion":
        q = _coerce(other)
        if q is None:
            return NotImplemented
        return Quaternion(self.z0 + q.z0, self.z1 + q.z1)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Quaternion":
        q = _coerce(other)
        if q is None:
            return NotImplemented
        return Quaternion(self.z0 - q.z0, self.z1 - q.z1)

    def __rsub__(self, other: object) -> "Quaternion":
        q = _coerce(other)
        if q is None:
            return NotImplemented
        return q - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.z0, -self.z1)

    def __mul__(self, other: object) -> "Quaternion":
        q = _coerce(other)
        if q is None:
            return NotImplemented
        return multiply(self, q)

    def __rmul__(self, other: object) -> "Quaternion":
        q = _coerce(other)
        if q is None:
            return NotImplemented
        return multiply(q, self)

    def __truediv__(self, other: object) -> "Quaternion":
        # Only real divisors; quaternion division is order-dependent.
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return Quaternion(self.z0 / other, self.z1 / other)
        return NotImplemented

    def __str__(self) -> str:
        x0, x1, x2, x3 = self.components
        return f"({x0:+.6g} {x1:+.6g}i {x2:+.6g}j {x3:+.6g}k)"


def _coerce(value: object) -> Quaternion | None:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, Number) and not isinstance(value, bool):
        return Quaternion(complex(value), 0j)  # type: ignore[arg-type]
    return None


# Basis units
ONE = Quaternion(1.0, 0j)
UNIT_I = Quaternion(1j, 0j)
UNIT_J = Quaternion(0j, 1.0)
UNIT_K = Quaternion(0j, 1j)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def multiply(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``.

    For ``p = a + b j`` and ``q = c + d j``:
    ``p q = (a c - b conj(d)) + (a d + b conj(c)) j``.
    """
    a, b = p.z0, p.z1
    c, d = q.z0, q.z1
    return Quaternion(a * c - b * d.conjugate(), a * d + b * c.conjugate())


def conjugate(q: Quaternion) -> Quaternion:
    return Quaternion(q.z0.conjugate(), -q.z1)


def inverse(q: Quaternion) -> Quaternion:
    norm2 = q.norm_squared()
    if norm2 == 0.0:
        raise NumericDomainError("cannot invert a zero-norm quaternion")
    return Quaternion(q.z0.conjugate() / norm2, -q.z1 / norm2)


def im_i(q: Quaternion) -> float:
    """Coefficient of the ``i`` basis element."""
    return q.z0.imag


def complex_phase(angle: float) -> Quaternion:
    """``e^{i angle}`` placed in the complex slot."""
    return Quaternion(cmath.exp(1j * angle), 0j)


def is_close(p: Quaternion, q: Quaternion, *, abs_tol: float = 1e-12) -> bool:
    """Componentwise comparison, absolute tolerance."""
    return abs(p.z0 - q.z0) <= abs_tol and abs(p.z1 - q.z1) <= abs_tol
