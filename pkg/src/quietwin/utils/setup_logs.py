import logging

from rich.logging import RichHandler

from quietwin.console import console

VERBOSITY_LEVELS = {
    0: logging.ERROR,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}


def setup_logs(*, verbose_level: int) -> None:
    logging.getLogger().setLevel(logging.CRITICAL)

    app_logger = logging.getLogger("quietwin")
    app_logger.setLevel(VERBOSITY_LEVELS.get(verbose_level, logging.DEBUG))
    # One handler per process across repeated invocations.
    if not any(isinstance(h, RichHandler) for h in app_logger.handlers):
        app_logger.addHandler(RichHandler(console=console, rich_tracebacks=True))
