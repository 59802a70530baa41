"""
Output files are written to a temporary sibling and moved into place, so a
failed run never leaves a truncated CSV or SVG behind.
"""
import logging
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Generator, TextIO, Union

logger = logging.getLogger(__name__)


@contextmanager
def atomic_text_file(path: Union[str, Path], prefix: str = '.gravcorr_') -> Generator[TextIO, None, None]:
    """
    Context manager yielding a text handle whose content replaces ``path`` on success.

    Args:
        path: Destination file
        prefix: Name prefix of the temporary sibling

    Yields:
        TextIO: handle opened with ``newline='\\n'`` and UTF-8 encoding

    Example:
        with atomic_text_file("out.csv") as fh:
            fh.write(render_csv(header, rows))
    """
    path = Path(path)
    directory = path.parent if str(path.parent) else Path('.')
    temp_fd, temp_path = tempfile.mkstemp(suffix=path.suffix, prefix=prefix, dir=directory)
    logger.debug(f"Created temporary file: {temp_path}")

    try:
        with os.fdopen(temp_fd, 'w', encoding='utf-8', newline='\n') as handle:
            yield handle
        os.replace(temp_path, path)
        logger.debug(f"Wrote {path}")
    except BaseException:
        if os.path.exists(temp_path):
            try:
                os.unlink(temp_path)
                logger.debug(f"Cleaned up temporary file: {temp_path}")
            except OSError as e:
                logger.warning(f"⚠️ Failed to clean up temporary file {temp_path}: {e}")
        raise


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    with atomic_text_file(path) as handle:
        handle.write(text)
