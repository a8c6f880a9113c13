"""
Custom exceptions for drinfeld-lab
"""

from typing import Any, Dict, Optional


class DrinfeldLabException(Exception):
    """Base exception for drinfeld-lab"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class DomainError(DrinfeldLabException):
    """Operation called outside its mathematical domain"""

    def __init__(self, message: str = "Domain error", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class NonEtaleError(DomainError):
    """Torsion level meets the characteristic"""

    def __init__(self, message: str = "level meets characteristic", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class TorsionGeneratorError(DomainError):
    """A generator of M is a torsion point"""

    def __init__(
        self,
        message: str = "torsion generator",
        generator: Any = None,
        killer: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.generator = generator
        self.killer = killer
        details = dict(details or {})
        details.setdefault("generator", repr(generator))
        details.setdefault("killed_by", repr(killer))
        super().__init__(message, details)


class BadReductionError(DrinfeldLabException):
    """Reduction at a place is not defined"""

    def __init__(
        self,
        message: str = "bad reduction at place",
        place: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.place = place
        details = dict(details or {})
        details.setdefault("place", repr(place))
        super().__init__(message, details)


class EnumerationCapError(DrinfeldLabException):
    """A brute-force enumeration exceeded its configured cap"""

    def __init__(
        self,
        message: str = "enumeration cap exceeded",
        cap: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.cap = cap
        details = dict(details or {})
        details.setdefault("cap", cap)
        super().__init__(message, details)


class AmbientCapError(DrinfeldLabException):
    """No ambient extension below the degree cap contains the torsion"""

    def __init__(
        self,
        message: str = "ambient extension degree cap exceeded",
        cap: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.cap = cap
        details = dict(details or {})
        details.setdefault("cap", cap)
        super().__init__(message, details)


class UnderSampleError(DrinfeldLabException):
    """Too few usable places for a statistical test"""

    def __init__(
        self,
        message: str = "too few usable places",
        usable: int = 0,
        required: int = 0,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.usable = usable
        self.required = required
        details = dict(details or {})
        details.setdefault("usable", usable)
        details.setdefault("required", required)
        super().__init__(message, details)


class ConfigurationError(DrinfeldLabException):
    """Experiment or application configuration error"""

    def __init__(self, message: str = "Configuration error", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class CacheError(DrinfeldLabException):
    """Unreadable cache entry"""

    def __init__(self, message: str = "Cache error", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
