"""
Kernel functions G with vanishing moments.

Every kernel lives on a finite support [A, B] with A < 0 < B, integrates to
one, and for order k has int u^j G(u) du = 0 for j = 1..k. Built-in kernels
are polynomials on [-1, 1]; their moments are certified by Gauss-Legendre
quadrature, which is exact for polynomial integrands of the degrees used
here. The alpha-integrals of G_+ and G_- are computed adaptively with the
kernel's sign changes passed as breakpoints.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss
from scipy import integrate, optimize

from config.settings import KernelConfig
from src.utils.errors import DomainError, KernelError
from src.utils.logger import get_logger

logger = get_logger(__name__)


@lru_cache(maxsize=8)
def _gauss_legendre(n_nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(n_nodes)


@dataclass
class Kernel:
    """A compactly supported kernel with cached moment data"""
    family: str
    order: int
    support: Tuple[float, float]
    func: Callable[[np.ndarray], np.ndarray]
    polynomial: Optional[Polynomial] = None
    moments: Tuple[float, ...] = ()
    abs_moment_next: float = float('nan')
    _alpha_cache: Dict[float, Tuple[float, float, float]] = field(default_factory=dict, repr=False)

    @property
    def lower(self) -> float:
        return self.support[0]

    @property
    def upper(self) -> float:
        return self.support[1]

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        inside = (u >= self.lower) & (u <= self.upper)
        return np.where(inside, self.func(u), 0.0)

    def moment(self, j: int) -> float:
        """M_j from the cache when available"""
        if 0 <= j < len(self.moments):
            return self.moments[j]
        return kernel_moment(self, j)

    def is_nonnegative(self) -> bool:
        u = np.linspace(self.lower, self.upper, KernelConfig.ROOT_SCAN_POINTS)
        return bool(np.min(self(u)) >= 0.0)

    def describe(self) -> dict:
        return {
            'family': self.family,
            'A': self.lower,
            'B': self.upper,
            'k': self.order,
            **{f'M{j}': m for j, m in enumerate(self.moments)},
        }


def _integrate_polynomial_moment(G: Kernel, j: int) -> float:
    """Gauss-Legendre on [A, B]; exact while deg(G) + j < 2 * nodes"""
    n_nodes = KernelConfig.GAUSS_LEGENDRE_NODES
    if G.polynomial is not None:
        n_nodes = max(n_nodes, (G.polynomial.degree() + j) // 2 + 1)
    nodes, weights = _gauss_legendre(n_nodes)
    half = 0.5 * G.width
    u = G.lower + half * (nodes + 1.0)
    return float(half * np.sum(weights * u ** j * G.func(u)))


def kernel_moment(G: Kernel, j: int) -> float:
    """M_j = int_A^B u^j G(u) du"""
    if j < 0:
        raise DomainError(f"moment order must be nonnegative, got {j}")
    if G.polynomial is not None:
        return _integrate_polynomial_moment(G, j)
    value, error = integrate.quad(
        lambda u: u ** j * float(G.func(np.asarray(u))), G.lower, G.upper,
        epsabs=KernelConfig.QUADRATURE_TOL, epsrel=KernelConfig.QUADRATURE_TOL,
        limit=KernelConfig.QUADRATURE_LIMIT, points=kernel_roots(G) or None,
    )
    return float(value)


def kernel_roots(G: Kernel) -> list:
    """Interior sign changes of G on (A, B), isolated by bracketing + brentq"""
    if G.polynomial is not None:
        roots = G.polynomial.roots()
        real = roots[np.abs(roots.imag) < 1e-12].real
        return sorted(float(r) for r in real if G.lower < r < G.upper)

    u = np.linspace(G.lower, G.upper, KernelConfig.ROOT_SCAN_POINTS)
    values = G.func(u)
    roots = []
    for i in range(len(u) - 1):
        left, right = values[i], values[i + 1]
        if left == 0.0 and G.lower < u[i] < G.upper:
            roots.append(float(u[i]))
        elif left * right < 0.0:
            try:
                roots.append(float(optimize.brentq(lambda s: float(G.func(np.asarray(s))), u[i], u[i + 1])))
            except (ValueError, RuntimeError) as e:
                raise KernelError(f"could not isolate a root of '{G.family}' in [{u[i]}, {u[i + 1]}]: {e}")
    return roots


def _power_integral(G: Kernel, part: Callable[[float], float], breakpoints: list) -> float:
    value, error = integrate.quad(
        part, G.lower, G.upper,
        epsabs=KernelConfig.QUADRATURE_TOL, epsrel=KernelConfig.QUADRATURE_TOL,
        limit=KernelConfig.QUADRATURE_LIMIT, points=breakpoints or None,
    )
    if error > 10.0 * KernelConfig.QUADRATURE_TOL * max(1.0, abs(value)):
        logger.warning(f"alpha-integral of '{G.family}' kernel has quadrature error {error:.2e}")
    return float(value)


def kernel_alpha_integrals(G: Kernel, alpha: float) -> Tuple[float, float, float]:
    """(int |G|^a, int (G_+)^a, int (G_-)^a) over the support"""
    if not (1.0 < alpha <= 2.0):
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    if alpha in G._alpha_cache:
        return G._alpha_cache[alpha]

    breakpoints = kernel_roots(G)

    def g(u: float) -> float:
        return float(G.func(np.asarray(u)))

    pos = _power_integral(G, lambda u: max(g(u), 0.0) ** alpha, breakpoints)
    neg = _power_integral(G, lambda u: max(-g(u), 0.0) ** alpha, breakpoints)
    total = _power_integral(G, lambda u: abs(g(u)) ** alpha, breakpoints)

    if abs(pos + neg - total) > KernelConfig.MOMENT_TOL:
        raise KernelError(
            f"alpha-integrals of '{G.family}' disagree: pos + neg = {pos + neg:.15g}, abs = {total:.15g}"
        )
    G._alpha_cache[alpha] = (total, pos, neg)
    return total, pos, neg


def rescaled_moment(G: Kernel, j: int, h: float) -> float:
    """j-th moment of u -> G(u/h)/h over [hA, hB]; equals h^j M_j"""
    if h <= 0.0:
        raise DomainError(f"scale must be positive, got {h}")
    n_nodes = KernelConfig.GAUSS_LEGENDRE_NODES
    nodes, weights = _gauss_legendre(n_nodes)
    lo, hi = h * G.lower, h * G.upper
    half = 0.5 * (hi - lo)
    u = lo + half * (nodes + 1.0)
    return float(half * np.sum(weights * u ** j * G.func(u / h) / h))


def _polynomial_order_coefficients(k: int, support: Tuple[float, float]) -> np.ndarray:
    """Solve M_0 = 1, M_j = 0 (j = 1..k) for G(u) = sum_l a_l u^l on the support"""
    lo, hi = support
    size = k + 1
    # Gram matrix of monomials: int u^(j+l) du over [lo, hi]
    gram = np.empty((size, size))
    for j in range(size):
        for l in range(size):
            p = j + l + 1
            gram[j, l] = (hi ** p - lo ** p) / p
    rhs = np.zeros(size)
    rhs[0] = 1.0
    try:
        coefficients = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as e:
        raise KernelError(f"moment system for order {k} is singular: {e}")
    return coefficients


def _certify(G: Kernel) -> None:
    moments = G.moments
    if abs(moments[0] - 1.0) >= KernelConfig.MOMENT_TOL:
        raise KernelError(f"'{G.family}' kernel has M_0 = {moments[0]!r}, expected 1")
    for j in range(1, G.order + 1):
        if abs(moments[j]) >= KernelConfig.MOMENT_TOL:
            raise KernelError(f"'{G.family}' kernel of order {G.order} has M_{j} = {moments[j]!r}")
    if G.order >= 2 and G.is_nonnegative():
        raise KernelError(f"'{G.family}' kernel of order {G.order} must change sign")


def build_kernel(family: str, order: int, func: Callable, support: Tuple[float, float],
                 polynomial: Optional[Polynomial] = None) -> Kernel:
    """Wrap a kernel function, cache its moments M_0..M_{k+1} and certify it"""
    lo, hi = support
    if not (lo < 0.0 < hi):
        raise KernelError(f"support must satisfy A < 0 < B, got [{lo}, {hi}]")
    G = Kernel(family=family, order=order, support=(float(lo), float(hi)), func=func, polynomial=polynomial)
    G.moments = tuple(kernel_moment(G, j) for j in range(order + 2))
    G.abs_moment_next = float(integrate.quad(
        lambda u: abs(float(func(np.asarray(u))) * u ** (order + 1)), lo, hi,
        epsabs=KernelConfig.QUADRATURE_TOL, epsrel=KernelConfig.QUADRATURE_TOL,
        limit=KernelConfig.QUADRATURE_LIMIT, points=kernel_roots(G) or None,
    )[0])
    _certify(G)
    logger.debug(f"Certified kernel {G.describe()}")
    return G


def make_kernel(k: int, family: str = "polynomial") -> Kernel:
    """
    Construct a certified kernel of order k on [-1, 1].

    Args:
        k: number of vanishing moments after M_0
        family: 'uniform', 'epanechnikov' (k <= 1 by symmetry) or
                'polynomial' (any k, the degree-k solution of the moment system)

    Returns:
        Kernel with cached moments M_0..M_{k+1}
    """
    if k < 0:
        raise DomainError(f"kernel order must be nonnegative, got {k}")
    family = family.strip().lower()
    if family == "polynomial_order_k":
        family = "polynomial"
    support = KernelConfig.SUPPORT

    if family == "uniform":
        coefficients = np.array([0.5])
    elif family == "epanechnikov":
        coefficients = np.array([0.75, 0.0, -0.75])
    elif family == "polynomial":
        coefficients = _polynomial_order_coefficients(k, support)
    else:
        raise KernelError(f"unknown kernel family '{family}', expected one of {KernelConfig.FAMILIES}")

    if family in ("uniform", "epanechnikov") and k > 1:
        raise KernelError(f"'{family}' kernel is nonnegative and cannot have order {k} > 1")

    coefficients = np.where(np.abs(coefficients) < 1e-14 * np.max(np.abs(coefficients)), 0.0, coefficients)
    polynomial = Polynomial(coefficients).trim()
    return build_kernel(family, k, polynomial, support, polynomial)
