"""
Experiment Tasks Module

One module per experiment kind. Each experiment inherits from Experiment
and registers itself with the @register_experiment decorator; modules in
this package are discovered and imported by the registry.
"""

__all__ = []
