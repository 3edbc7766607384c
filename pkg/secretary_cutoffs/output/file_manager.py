"""
File management for result files
"""

import logging
import os
from pathlib import Path
from typing import Optional


class FileManager:
    """Write result files without leaving partial content behind"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    @staticmethod
    def ensure_parent_dir(file_path: Path) -> None:
        """
        Ensure parent directory exists

        Args:
            file_path: File path to check
        """
        file_path.parent.mkdir(parents=True, exist_ok=True)

    def write_atomic(self, output_file: Path, content: str) -> None:
        """
        Atomically replace output_file with content

        1. Write content to a temporary sibling
        2. Rename it over the output file
        3. Delete the temporary file if anything failed

        Args:
            output_file: Destination path
            content: Text to write (UTF-8, '\\n' line endings)

        Raises:
            OSError: If the file cannot be written
        """
        self.ensure_parent_dir(output_file)
        temp_file = output_file.parent / f".tmp_{output_file.name}"
        try:
            with open(temp_file, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(content)
            os.replace(temp_file, output_file)
            self.logger.debug(f"Wrote {len(content)} characters to {output_file}")
        finally:
            self.cleanup(temp_file)

    def read_text(self, input_file: Path) -> Optional[str]:
        """
        Read a UTF-8 file

        Returns:
            File content or None if the file does not exist
        """
        if not input_file.exists():
            return None
        return input_file.read_text(encoding="utf-8")

    def cleanup(self, temp_file: Optional[Path]) -> None:
        try:
            if temp_file and temp_file.exists():
                temp_file.unlink()
                self.logger.debug(f"Removed temp file: {temp_file}")
        except OSError as e:
            self.logger.warning(f"Error removing temp file {temp_file}: {e}")
