import logging
import os
import sys
from datetime import datetime
from typing import Optional, Union

ROOT_LOGGER = "tdsim"


class Logger:
    def __init__(
        self,
        name: str,
        log_file: Optional[str] = None,
        level: Optional[Union[int, str]] = None,
        console: bool = False
    ):
        """Initialize the logger.

        Handlers are only attached when ``console`` or ``log_file`` is given, so
        library modules can create wrappers freely and let records propagate
        to the ``tdsim`` logger configured by the CLI.
        """
        self.logger = logging.getLogger(name)
        if level is not None:
            self.logger.setLevel(level)
        self.log_file = log_file

        file_formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        console_formatter = logging.Formatter(
            '%(levelname)s: %(message)s'
        )

        if console and not self._has_handler(logging.StreamHandler):
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(console_formatter)
            self.logger.addHandler(console_handler)

        if log_file and not self._has_handler(logging.FileHandler):
            directory = os.path.dirname(log_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(file_formatter)
            self.logger.addHandler(file_handler)

    def info(self, message: str, **kwargs) -> None:
        """Log info message."""
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs) -> None:
        """Log warning message."""
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs) -> None:
        """Log error message."""
        self._log(logging.ERROR, message, **kwargs)

    def debug(self, message: str, **kwargs) -> None:
        """Log debug message."""
        self._log(logging.DEBUG, message, **kwargs)

    def _has_handler(self, kind: type) -> bool:
        # FileHandler subclasses StreamHandler
        for handler in self.logger.handlers:
            if kind is logging.StreamHandler and isinstance(
                handler, logging.FileHandler
            ):
                continue
            if isinstance(handler, kind):
                return True
        return False

    def _log(self, level: int, message: str, **kwargs) -> None:
        """Internal logging method with metadata."""
        if not self.logger.isEnabledFor(level):
            return
        metadata = {
            "timestamp": datetime.now().isoformat(),
            **kwargs
        }
        self.logger.log(level, f"{message} | {metadata}")


def get_logger(name: str) -> Logger:
    """Return a handler-less wrapper for a library module."""
    return Logger(name)


def configure_logging(
    level: Union[int, str] = logging.INFO,
    log_file: Optional[str] = None
) -> Logger:
    """Install console (and optional file) handlers on the package logger."""
    return Logger(ROOT_LOGGER, log_file=log_file, level=level, console=True)
