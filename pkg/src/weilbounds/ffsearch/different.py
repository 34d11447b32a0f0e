"""Local contribution to the different of a characteristic-3 triple cover.

The cover is z^3 - f z = g over an elliptic function field, already in the
normal form where (f, g) is well-conditioned at P: either ord_P g is prime
to 3 or 2 ord_P g >= 3 ord_P f.
"""

from __future__ import annotations

from ..exact import DomainError


def well_conditioned(ord_f: int, ord_g: int) -> bool:
    return ord_g % 3 != 0 or 2 * ord_g >= 3 * ord_f


def different_contribution(ord_f: int, ord_g: int, parity_regularized: bool = False) -> int:
    """Exponent of P in the different, from the orders of f and g at P.

    For odd ord_f the caller passes the order of the regularised g_P
    (g shifted by c^3 - c f) and sets ``parity_regularized``.  Inputs that
    are not well-conditioned raise DomainError; this includes the constant-f
    case with a triple pole of g, which the normal form cannot remove.
    """
    if not well_conditioned(ord_f, ord_g):
        if ord_f == 0 and ord_g == -3:
            raise DomainError("exceptional case: constant f with a triple pole of g")
        if ord_f % 2 and not parity_regularized:
            raise DomainError("odd ord f: pass the order of the regularised g_P")
        raise DomainError(f"(ord f, ord g) = ({ord_f}, {ord_g}) is not well-conditioned")
    m = 3 * ord_f - 2 * ord_g
    if m > 0:
        return 2 + m
    return ord_f % 2
