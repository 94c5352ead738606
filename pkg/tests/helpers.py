"""Shared checks for analytic derivatives against finite differences."""

from wronskia.numkit import ScalarFunction, central_derivative

FD_STEP = 1e-4


class _Lowered(ScalarFunction):
    """deriv(j) of this wrapper is deriv(j + shift) of the wrapped function."""

    def __init__(self, f, shift):
        super().__init__(f.domain, f"{f.name}^({shift})")
        self.f, self.shift = f, shift

    def _deriv(self, k, t):
        return self.f.deriv(k + self.shift, t)


def fd_mismatch(f, points, h=FD_STEP):
    """Worst gap between deriv(k) and a central difference of deriv(k-1),
    k = 1..3, measured against max(1, |f^(k)|) at each point."""
    worst = 0.0
    for k in (1, 2, 3):
        lower = _Lowered(f, k - 1)
        for t in points:
            exact = float(f.deriv(k, t))
            approx = central_derivative(lower, 1, float(t), h)
            worst = max(worst, abs(exact - approx) / max(1.0, abs(exact)))
    return worst
