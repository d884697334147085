"""
Macroscopic-limit (n -> infinity) results for the nearest-neighbour chain:
even-odd threshold and log-negativity density, and the half-half PPT
sufficient condition built from Fourier-coefficient bounds.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigvals
from scipy.optimize import bisect, brentq
from scipy.special import zeta

from src.errors import CouplingOutOfRange, NoCrossing, QuadratureNoConvergence, ValidationError
from src.gaussian_thermal import GaussianThermalSpec, ZERO_T_CUTOFF

logger = logging.getLogger(__name__)

# Bracket used by every threshold search
T_BRACKET = (1e-4, 50.0)

MIN_GRID = 64
MAX_GRID = 2 ** 18
COEFF_TOLERANCE = 1e-12
DERIVATIVE_GRID = 2 ** 14
TAIL_FRACTION = 1e-10
# Coefficients below this fraction of max(1, |v_0|) are roundoff
NOISE_FLOOR = 1e-14


@dataclass(frozen=True)
class LimitParams:
    """
    Parameters of the half-half sufficient condition in the macroscopic limit

    m is the partial-sum order and s the integration-by-parts order; the
    defaults m=10, s=3 are the canonical configuration.
    """
    c: float
    T: float
    m: int = 10
    s: int = 3

    def __post_init__(self):
        _check_coupling(self.c)
        _check_temperature(self.T)
        if self.m < 1:
            raise ValidationError(f"Partial-sum order m must be positive, got {self.m}")
        if not 2 <= self.s <= 8:
            raise ValidationError(f"Integration-by-parts order s must lie in [2, 8], got {self.s}")


def _check_coupling(c: float) -> None:
    if not 0.0 <= c < 0.5:
        raise CouplingOutOfRange(f"Coupling c must lie in [0, 1/2), got {c}")


def _check_temperature(T: float) -> None:
    if not T > 0:
        raise ValidationError(f"Temperature must be > 0 in the macroscopic limit, got {T}")


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValidationError(f"sign must be +1 or -1, got {sign}")
    return sign


def d_pm(x, c: float, T: float, sign: int):
    """
    Symbol d^+-(x) = (1 - 2c cos x)^(+-1/2) tanh(sqrt(1 - 2c cos x)/2T)

    Args:
        x (float or ndarray): Angle(s) in [0, 2π)
        c (float): Coupling in [0, 1/2)
        T (float): Temperature > 0
        sign (int): +1 for d^+, -1 for d^-

    Returns:
        float or ndarray: Value(s) of the symbol
    """
    _check_temperature(T)
    _check_coupling(c)
    sign = _check_sign(sign)
    lam = 1.0 - 2.0 * c * np.cos(x)
    return lam ** (0.5 * sign) * np.tanh(np.sqrt(lam) / (2.0 * T))


def _trapezoid_coefficients(c: float, T: float, sign: int, size: int) -> np.ndarray:
    x = 2.0 * np.pi * np.arange(size) / size
    return np.fft.rfft(d_pm(x, c, T, sign)).real / size


@lru_cache(maxsize=512)
def _converged_coefficients(c: float, T: float, sign: int, l_max: int) -> np.ndarray:
    size = MIN_GRID
    while size <= 2 * l_max:
        size *= 2
    previous = _trapezoid_coefficients(c, T, sign, size)[:l_max + 1]
    while size <= MAX_GRID:
        size *= 2
        current = _trapezoid_coefficients(c, T, sign, size)[:l_max + 1]
        if np.max(np.abs(current - previous)) < COEFF_TOLERANCE:
            current.setflags(write=False)
            return current
        previous = current
    raise QuadratureNoConvergence(
        f"Fourier coefficients of d^{'+' if sign > 0 else '-'} (c={c}, T={T}) did not converge by grid size {MAX_GRID}"
    )


def fourier_coefficients(c: float, T: float, sign: int, l_max: int) -> np.ndarray:
    """
    Fourier coefficients v_0..v_lmax of the symbol d^+-(x)

    Trapezoidal quadrature on a uniform periodic grid, refined by doubling
    until successive grids agree to 1e-12. The symbol is even, so the
    coefficients are real and v_-l = v_l.

    Returns:
        ndarray: Read-only vector of length l_max + 1
    """
    _check_temperature(T)
    _check_coupling(c)
    if l_max < 0:
        raise ValidationError(f"l_max must be >= 0, got {l_max}")
    return _converged_coefficients(float(c), float(T), _check_sign(sign), int(l_max))


def fourier_coeff(l: int, c: float, T: float, sign: int) -> float:
    """Single Fourier coefficient v_l^+- of the symbol"""
    if l < 0:
        raise ValidationError(f"Fourier index must be >= 0, got {l}")
    return float(fourier_coefficients(c, T, sign, l)[l])


def partial_sums(c: float, T: float, m: int) -> Tuple[float, float]:
    """
    Partial sums of the absolute Fourier coefficients

    Returns:
        tuple: (S^+_m, S^-_m) with S^+_m = |v_0^+| + 2 sum_(l=1..m) |v_l^+|
        and S^-_m = sum_(l=1..m) |v_l^-|
    """
    plus = np.abs(fourier_coefficients(c, T, 1, m))
    minus = np.abs(fourier_coefficients(c, T, -1, m))
    return float(plus[0] + 2.0 * plus[1:].sum()), float(minus[1:].sum())


def periodic_abs_integral(values: np.ndarray, step: float) -> float:
    """
    Integral of |g| over one period from samples of g on a uniform grid

    Each segment integrates the absolute value of the linear interpolant,
    so sign changes inside a segment are handled exactly.
    """
    left = np.asarray(values, dtype=float)
    right = np.roll(left, -1)
    same_sign = left * right >= 0.0
    magnitude = np.abs(left) + np.abs(right)
    safe = np.where(magnitude > 0.0, magnitude, 1.0)
    segments = np.where(same_sign, 0.5 * magnitude, 0.5 * (left ** 2 + right ** 2) / safe)
    return float(step * segments.sum())


def derivative_bound(c: float, T: float, s: int, sign: int, grid: int = DERIVATIVE_GRID) -> float:
    """
    C_s^+- = integral over [0, 2π) of |d^s/dx^s d^+-(x)|

    The derivative comes from spectral differentiation of the truncated
    Fourier series. Coefficients at roundoff level are dropped, and the
    truncation keeps the weighted tail sum |v_l| l^s below 1e-10 of its total.

    Args:
        c (float): Coupling in [0, 1/2)
        T (float): Temperature > 0
        s (int): Derivative order
        sign (int): +1 or -1
        grid (int): Number of points the derivative is sampled on

    Returns:
        float: C_s >= 0
    """
    if s < 1:
        raise ValidationError(f"Derivative order must be >= 1, got {s}")
    cutoff = 64
    while True:
        coeffs = fourier_coefficients(c, T, sign, cutoff)
        floor = NOISE_FLOOR * max(1.0, abs(float(coeffs[0])))
        coeffs = np.where(np.abs(coeffs) < floor, 0.0, coeffs)
        orders = np.arange(cutoff + 1, dtype=float)
        weighted = np.abs(coeffs) * orders ** s
        total = weighted.sum()
        if total == 0.0:
            return 0.0
        tail = weighted[cutoff // 2 + 1:].sum()
        if tail == 0.0 or tail < TAIL_FRACTION * total:
            break
        cutoff *= 2
        if cutoff > MAX_GRID // 4:
            raise QuadratureNoConvergence(
                f"Fourier series of d^{'+' if sign > 0 else '-'} (c={c}, T={T}) too slowly decaying for s={s}"
            )
    if 2 * cutoff >= grid:
        grid = 4 * cutoff

    spectrum = np.zeros(grid // 2 + 1, dtype=complex)
    spectrum[:cutoff + 1] = grid * coeffs * (1j * orders) ** s
    derivative = np.fft.irfft(spectrum, n=grid)
    return periodic_abs_integral(derivative, 2.0 * np.pi / grid)


def hurwitz_zeta(s: int, a: float) -> float:
    """
    Hurwitz zeta function zeta(s, a) = sum_(k>=0) (k + a)^(-s)

    Args:
        s (int): Order >= 2
        a (float): Shift > 0

    Returns:
        float: zeta(s, a)
    """
    if s < 2:
        raise ValidationError(f"Hurwitz zeta order must be >= 2, got {s}")
    if not a > 0:
        raise ValidationError(f"Hurwitz zeta shift must be > 0, got {a}")
    return float(zeta(s, a))


def hurwitz_zeta_upper_bound(s: int, a: float) -> float:
    """Integral-comparison bound a^(-s) + a^(1-s)/(s-1) >= zeta(s, a)"""
    return a ** (-s) + a ** (1 - s) / (s - 1)


def lambda_min_W(c: float, T: float) -> float:
    """
    Smallest eigenvalue of W(T) in the macroscopic limit

    (e^(sqrt(1+2c)/T) + 1)/(e^(sqrt(1+2c)/T) - 1) = coth(sqrt(1+2c)/2T)
    """
    _check_coupling(c)
    _check_temperature(T)
    if T < ZERO_T_CUTOFF:
        return 1.0
    return float(1.0 / np.tanh(np.sqrt(1.0 + 2.0 * c) / (2.0 * T)))


def halfhalf_limit_lhs(params: LimitParams) -> float:
    """
    Left side of the macroscopic half-half PPT sufficient condition

    2 (S^+_m + C_s^+ zeta(s,m+1)/π)(S^-_m + C_s^- zeta(s,m+1)/2π) + λ_min[W]^(-2)
    """
    s_plus, s_minus = partial_sums(params.c, params.T, params.m)
    c_plus = derivative_bound(params.c, params.T, params.s, 1)
    c_minus = derivative_bound(params.c, params.T, params.s, -1)
    tail = hurwitz_zeta(params.s, params.m + 1)
    norm_omega_plus = s_plus + c_plus * tail / np.pi
    norm_x = s_minus + c_minus * tail / (2.0 * np.pi)
    return float(2.0 * norm_omega_plus * norm_x + lambda_min_W(params.c, params.T) ** -2)


def halfhalf_ppt_sufficient_limit(params: LimitParams) -> bool:
    """
    True when the half-half log-negativity vanishes in the macroscopic limit

    False means the bound gives no conclusion.
    """
    return halfhalf_limit_lhs(params) < 1.0


def threshold_halfhalf_upper(c: float, m: int = 10, s: int = 3,
                             bracket: Tuple[float, float] = T_BRACKET, tol: float = 1e-6) -> float:
    """
    Upper bound on the half-half threshold temperature in the macroscopic limit

    Returns the smallest T above which the sufficient condition holds, found by
    a coarse log-spaced scan followed by bisection on the last crossing.

    Args:
        c (float): Coupling in [0, 1/2)
        m (int): Partial-sum order
        s (int): Integration-by-parts order
        bracket (tuple): Search interval (T_low, T_high)
        tol (float): Absolute bisection tolerance in T

    Returns:
        float: T_bound, or 0.0 when the condition holds on the whole bracket
    """
    _check_coupling(c)
    t_low, t_high = bracket

    def excess(T: float) -> float:
        return halfhalf_limit_lhs(LimitParams(c=c, T=T, m=m, s=s)) - 1.0

    grid = np.geomspace(t_low, t_high, 32)
    values = np.array([excess(T) for T in grid])
    if values[-1] >= 0.0:
        raise NoCrossing(f"Half-half sufficient condition never holds for c={c} below T={t_high}", t_max=t_high)
    failing = np.flatnonzero(values >= 0.0)
    if failing.size == 0:
        logger.info(f"Half-half sufficient condition holds on the whole bracket for c={c}")
        return 0.0
    if np.any(np.diff(values) > 0.0):
        logger.warning(f"Left side of the half-half condition is not monotone in T for c={c}; using the last crossing")
    last = int(failing[-1])
    return float(bisect(excess, grid[last], grid[last + 1], xtol=tol))


def even_odd_f0(c: float, T: float) -> float:
    """Largest even-odd eigenvalue f(0) = sqrt((1+2c)/(1-2c)) tanh(sqrt(1-2c)/2T) tanh(sqrt(1+2c)/2T)"""
    ratio = np.sqrt((1.0 + 2.0 * c) / (1.0 - 2.0 * c))
    if T < ZERO_T_CUTOFF:
        return float(ratio)
    return float(ratio * np.tanh(np.sqrt(1.0 - 2.0 * c) / (2.0 * T)) * np.tanh(np.sqrt(1.0 + 2.0 * c) / (2.0 * T)))


def threshold_even_odd_limit(c: float, bracket: Tuple[float, float] = T_BRACKET, tol: float = 1e-8) -> float:
    """
    Even-odd threshold temperature, root of f(0, c, T) = 1

    It does not depend on the chain length. Returns 0.0 for c = 0, where the
    state is a product state at every temperature.
    """
    _check_coupling(c)
    if c == 0.0:
        logger.info("No even-odd entanglement at c=0; threshold is 0")
        return 0.0
    t_low, t_high = bracket

    def excess(T: float) -> float:
        return even_odd_f0(c, T) - 1.0

    if excess(t_high) > 0.0:
        raise NoCrossing(f"Even-odd partition still entangled at T={t_high} for c={c}", t_max=t_high)
    return float(bisect(excess, t_low, t_high, xtol=tol))


def _even_odd_symbol(x: float, c: float, T: float) -> float:
    low = 1.0 - 2.0 * c * np.cos(x)
    high = 1.0 + 2.0 * c * np.cos(x)
    ratio = np.sqrt(high / low)
    if T < ZERO_T_CUTOFF:
        return float(ratio)
    return float(ratio * np.tanh(np.sqrt(low) / (2.0 * T)) * np.tanh(np.sqrt(high) / (2.0 * T)))


def logneg_density_limit(c: float, T: float) -> float:
    """
    Even-odd log-negativity per oscillator in the macroscopic limit

    (1/2π) times the integral of log2 f(x) over {x : f(x) > 1}; the region is
    symmetric around x = 0, so n times the result matches the finite-n sum.

    Args:
        c (float): Coupling in [0, 1/2)
        T (float): Temperature >= 0

    Returns:
        float: E_l / n, zero above the even-odd threshold
    """
    _check_coupling(c)
    if T < 0:
        raise ValidationError(f"Temperature must be >= 0, got {T}")
    if c == 0.0 or _even_odd_symbol(0.0, c, T) <= 1.0:
        return 0.0

    def excess(x: float) -> float:
        return _even_odd_symbol(x, c, T) - 1.0

    if excess(0.5 * np.pi) >= 0.0:
        crossing = 0.5 * np.pi
    else:
        crossing = brentq(excess, 0.0, 0.5 * np.pi, xtol=1e-10)
    integral, _ = quad(lambda x: np.log2(_even_odd_symbol(x, c, T)), 0.0, crossing, epsabs=1e-13, epsrel=1e-11)
    return float(integral / np.pi)


def x_matrix(spec: GaussianThermalSpec) -> np.ndarray:
    """
    X: the blocks of omega^- coupling the two contiguous halves, zero elsewhere
    """
    omega_minus, _ = spec.omega_matrices()
    half = spec.n // 2
    x = np.zeros_like(omega_minus)
    x[:half, half:] = omega_minus[:half, half:]
    x[half:, :half] = omega_minus[half:, :half]
    return x


def x_row_sum_norm(spec: GaussianThermalSpec) -> float:
    """Maximum row sum norm of X"""
    return float(np.abs(x_matrix(spec)).sum(axis=1).max())


def halfhalf_finite_lhs(spec: GaussianThermalSpec) -> float:
    """Left side λ_min[W(T)]^(-2) + 2 max_i |λ_i[X omega^+]| of the finite-n condition"""
    _, omega_plus = spec.omega_matrices()
    radius = float(np.max(np.abs(eigvals(x_matrix(spec) @ omega_plus))))
    return spec.min_thermal_weight() ** -2 + 2.0 * radius


def halfhalf_ppt_sufficient_finite(spec: GaussianThermalSpec) -> bool:
    """
    Finite-n sufficient condition for a PPT half-half partition

    True guarantees E_l = 0 for the contiguous half split at this (n, c, T).
    """
    return halfhalf_finite_lhs(spec) < 1.0


def residual_tail(c: float, T: float, n: int) -> float:
    """Sum of |v_l^-| for l = n/4+1 .. n/2, the row-identification error for X"""
    coeffs = fourier_coefficients(c, T, -1, n // 2)
    return float(np.abs(coeffs[n // 4 + 1:]).sum())
