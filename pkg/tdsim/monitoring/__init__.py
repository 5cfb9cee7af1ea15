from .resources import ResourceMonitor, operator_bytes

__all__ = ["ResourceMonitor", "operator_bytes"]
