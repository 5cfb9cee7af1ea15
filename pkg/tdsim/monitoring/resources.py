"""Resource checks for dense simulation."""

from datetime import datetime
from typing import Any, Dict

import psutil

from ..utils.logger import get_logger
from ..validation.config import get_settings

logger = get_logger(__name__)

COMPLEX_BYTES = 16
# dense operators alive at once while composing a circuit
WORKING_COPIES = 4


def operator_bytes(n_qubits: int) -> int:
    """Memory of one dense complex operator on ``n_qubits`` qubits."""
    return COMPLEX_BYTES * 4 ** n_qubits


class ResourceMonitor:
    def __init__(self):
        """Initialize the resource monitor."""
        self.start_time = datetime.now()

    def get_system_health(self) -> Dict[str, Any]:
        """Get system health metrics.

        Returns:
            Dict[str, Any]: System health metrics.
        """
        return {
            "cpu_usage": psutil.cpu_percent(),
            "memory_usage": psutil.virtual_memory().percent,
            "memory_available": psutil.virtual_memory().available,
            "cpu_count": psutil.cpu_count(),
            "max_qubits": get_settings().max_qubits,
            "uptime": str(datetime.now() - self.start_time),
        }

    def required_bytes(self, n_qubits: int, workers: int = 1) -> int:
        return WORKING_COPIES * operator_bytes(n_qubits) * max(workers, 1)

    def check_register(self, n_qubits: int, workers: int = 1) -> bool:
        """Whether ``workers`` concurrent simulations of ``n_qubits`` fit in available memory."""
        required = self.required_bytes(n_qubits, workers)
        available = psutil.virtual_memory().available
        fits = required <= available
        if not fits:
            logger.warning(
                "register may not fit in memory",
                n_qubits=n_qubits,
                workers=workers,
                required=required,
                available=available,
            )
        return fits

    def get_process_usage(self) -> Dict[str, Any]:
        """Resident memory and CPU time of the current process."""
        try:
            process = psutil.Process()
            times = process.cpu_times()
            return {
                "rss": process.memory_info().rss,
                "cpu_time": times.user + times.system,
            }
        except psutil.Error as e:
            return {"error": str(e)}
