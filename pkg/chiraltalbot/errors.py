# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Error types, each carrying a diagnostic code and the CLI exit code
"""


class ChiralTalbotError(Exception):
    """Base error of the package"""
    code = "error"
    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self):
        if not self.details:
            return self.message
        extra = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{self.message} ({extra})"


class ConfigError(ChiralTalbotError):
    """Invalid configuration or geometry"""
    code = "config"
    exit_code = 2


class DomainError(ConfigError, ValueError):
    """Physical input outside the domain of a formula"""
    code = "domain"


class SlitClosureError(ConfigError):
    """CP cutoff closes the slit completely"""
    code = "slit_closure"


class NyquistError(ConfigError):
    """Wave grid too coarse for the free-flight phase"""
    code = "nyquist"


class NumericalError(ChiralTalbotError):
    """Numerical method failed to reach its tolerance"""
    code = "numerical"
    exit_code = 3


class QuadratureError(NumericalError):
    code = "quadrature"


class TruncationError(NumericalError):
    code = "truncation"


class OracleMismatchError(ChiralTalbotError):
    """Wave-optics oracle disagrees with the coefficient engine"""
    code = "oracle"
    exit_code = 4
