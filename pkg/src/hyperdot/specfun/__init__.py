"""Numeric substrate: Bessel functions, zeros, polynomials and LogReal."""

from .bessel import (
    bessel_j,
    bessel_j_deriv,
    bessel_j_derivatives,
    hankel_modulus_sq,
    kernel_order,
    log_abs_bessel_j,
    log_abs_radial_kernel,
    radial_kernel,
    radial_kernel_deriv,
)
from .logreal import LogReal, log_sum, sum_logreals
from .polynomials import digamma, gegenbauer, laguerre, ln_gamma
from .zeros import (
    ZERO_TABLE,
    ZeroTable,
    bessel_zero,
    bessel_zeros,
    bessel_zeros_through,
    default_cache_path,
    neumann_zero,
    neumann_zeros,
    neumann_zeros_through,
)

__all__ = [
    "LogReal", "ZERO_TABLE", "ZeroTable", "bessel_j", "bessel_j_deriv",
    "bessel_j_derivatives", "bessel_zero", "bessel_zeros", "bessel_zeros_through",
    "default_cache_path", "digamma", "gegenbauer", "hankel_modulus_sq", "kernel_order",
    "laguerre", "ln_gamma", "log_abs_bessel_j", "log_abs_radial_kernel", "log_sum",
    "neumann_zero", "neumann_zeros", "neumann_zeros_through", "radial_kernel",
    "radial_kernel_deriv", "sum_logreals",
]
