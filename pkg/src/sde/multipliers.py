"""
Linear multipliers theta(t) with analytic derivatives.

Built-ins: constant c, a*sin(b t) and a/(1+t^2). Each carries its bound L,
its smoothness and the closed-form integral used as the x_t oracle.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

from config.settings import SimulationConfig
from src.utils.errors import DomainError, SmoothnessError


@dataclass(frozen=True)
class Multiplier:
    """A test function theta(.) with derivatives and bound L"""
    name: str
    func: Callable[[np.ndarray], np.ndarray]
    derivative_func: Callable[[np.ndarray, int], np.ndarray]
    bound: float
    k_max: int
    integral_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: dict = field(default_factory=dict)

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    def deriv(self, t, order: int):
        """theta^(order)(t); order 0 is theta itself"""
        if order < 0:
            raise DomainError(f"derivative order must be nonnegative, got {order}")
        if order > self.k_max:
            raise SmoothnessError(
                f"multiplier '{self.name}' supplies derivatives up to order {self.k_max}, asked for {order}"
            )
        if order == 0:
            return self(t)
        return self.derivative_func(np.asarray(t, dtype=float), order)

    def integral(self, t):
        """int_0^t theta(s) ds"""
        if self.integral_func is not None:
            return self.integral_func(np.asarray(t, dtype=float))
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        values = np.array([integrate.quad(lambda s: float(self(s)), 0.0, ti)[0] for ti in t_arr])
        return values[0] if np.ndim(t) == 0 else values

    def check_bound(self, horizon: float, bound: Optional[float] = None,
                    n_points: int = SimulationConfig.BOUND_CHECK_POINTS) -> Tuple[float, bool]:
        """Max |theta| on a dense grid of [0, T] and whether it respects the bound"""
        limit = self.bound if bound is None else bound
        t = np.linspace(0.0, horizon, n_points)
        max_abs = float(np.max(np.abs(self(t))))
        return max_abs, max_abs <= limit * (1.0 + 1e-12)


def constant_multiplier(c: float) -> Multiplier:
    return Multiplier(
        name='constant',
        func=lambda t: np.full_like(t, c, dtype=float),
        derivative_func=lambda t, order: np.zeros_like(t, dtype=float),
        bound=abs(c),
        k_max=16,
        integral_func=lambda t: c * t,
        params={'a': c},
    )


def sine_multiplier(a: float = 1.0, b: float = 1.0) -> Multiplier:
    """theta(t) = a sin(b t); the j-th derivative is a b^j sin(b t + j pi/2)"""
    if b == 0.0:
        return constant_multiplier(0.0)
    return Multiplier(
        name='sine',
        func=lambda t: a * np.sin(b * t),
        derivative_func=lambda t, order: a * b ** order * np.sin(b * t + order * np.pi / 2.0),
        bound=abs(a),
        k_max=16,
        integral_func=lambda t: (a / b) * (1.0 - np.cos(b * t)),
        params={'a': a, 'b': b},
    )


def _rational_derivative(a: float):
    def derivative(t: np.ndarray, order: int) -> np.ndarray:
        q = 1.0 + t * t
        if order == 1:
            return -2.0 * a * t / q ** 2
        if order == 2:
            return a * (6.0 * t * t - 2.0) / q ** 3
        if order == 3:
            return 24.0 * a * t * (1.0 - t * t) / q ** 4
        if order == 4:
            return 24.0 * a * (5.0 * t ** 4 - 10.0 * t * t + 1.0) / q ** 5
        raise SmoothnessError(f"rational multiplier has no closed-form derivative of order {order}")
    return derivative


def rational_multiplier(a: float = 1.0) -> Multiplier:
    """theta(t) = a / (1 + t^2)"""
    return Multiplier(
        name='rational',
        func=lambda t: a / (1.0 + t * t),
        derivative_func=_rational_derivative(a),
        bound=abs(a),
        k_max=4,
        integral_func=lambda t: a * np.arctan(t),
        params={'a': a},
    )


MULTIPLIER_BUILDERS = {
    'constant': lambda a, b: constant_multiplier(a),
    'sine': lambda a, b: sine_multiplier(a, b),
    'rational': lambda a, b: rational_multiplier(a),
}


def make_multiplier(name: str, a: float = 1.0, b: float = 1.0) -> Multiplier:
    """Look up a built-in multiplier by id"""
    try:
        builder = MULTIPLIER_BUILDERS[name]
    except KeyError:
        raise DomainError(
            f"unknown multiplier '{name}', expected one of {sorted(MULTIPLIER_BUILDERS)}"
        ) from None
    return builder(a, b)
