"""
Command-line entry point: logging setup and sub-command registration.
"""
import logging
import sys
from typing import Optional

import click
from colorama import Fore, Style, just_fix_windows_console

from gravcorr import __version__
from gravcorr.commands import asymptote, evolve, physical, plot, steady, sweep
from gravcorr.config import config
from gravcorr.utils.memory_monitor import get_process_memory_info

# ================================================================================
# LOGGING
# ================================================================================

LEVEL_COLORS = {
    logging.DEBUG: Style.DIM,
    logging.INFO: "",
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.RED + Style.BRIGHT,
}


class ColorFormatter(logging.Formatter):
    """Console formatter that colours the level name."""

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        color = LEVEL_COLORS.get(record.levelno, "")
        return f"{color}{text}{Style.RESET_ALL}" if color else text


def setup_logging(level: Optional[int] = None, log_file: Optional[str] = None) -> logging.Logger:
    """
    Set up the ``gravcorr`` logger.

    Args:
        level: Console log level (default from config)
        log_file: Optional path of a detailed DEBUG log

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger('gravcorr')
    logger.setLevel(logging.DEBUG)
    logger.propagate = False

    # Clear any existing handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(config.log_level() if level is None else level)
    console_pattern = '%(levelname)s: %(message)s'
    if config.use_color() and sys.stderr.isatty():
        just_fix_windows_console()
        console_handler.setFormatter(ColorFormatter(console_pattern))
    else:
        console_handler.setFormatter(logging.Formatter(console_pattern))
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, mode='w', encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s | %(levelname)-8s | %(funcName)-25s | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        logger.addHandler(file_handler)

    return logger


# ================================================================================
# CLI
# ================================================================================

@click.group()
@click.version_option(__version__, prog_name="gravcorr")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Console log level (default: GRAVCORR_LOG_LEVEL or INFO).")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None,
              help="Also write a detailed DEBUG log to this file.")
@click.option("--verbose", "-v", is_flag=True, default=False, help="Shorthand for --log-level DEBUG.")
def cli(log_level, log_file, verbose):
    """Correlations of two gravitationally coupled oscillators under classical channels."""
    level = logging.DEBUG if verbose else (getattr(logging, log_level.upper()) if log_level else None)
    logger = setup_logging(level, log_file or config.LOG_FILE)
    if verbose:
        memory = get_process_memory_info()
        logger.debug(f"Process memory: {memory['process_memory_mb']:.2f} MB "
                     f"({memory['process_memory_percent']:.1f}%), "
                     f"system available: {memory['system_available_mb']:.2f} MB")


cli.add_command(evolve.evolve)
cli.add_command(steady.steady)
cli.add_command(sweep.sweep)
cli.add_command(asymptote.asymptote)
cli.add_command(plot.plot)
cli.add_command(physical.physical)


def main() -> None:
    cli(prog_name="gravcorr")


if __name__ == "__main__":
    main()
