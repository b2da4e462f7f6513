"""
The module contains functions working with paths to directories used
in this project.

"""


import os

from common.constants import OUT_DIR, OUT_DIR_VARIABLE
from common.utils import get_default


class PathProcessor:

    def __init__(self, path: str) -> None:
        self.path = path

    def create_parent_dirs(self) -> None:
        """Create parent directories for the path, if they do not exist."""
        parent = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(parent, exist_ok=True)


def get_out_dir(out_dir: str = None) -> str:
    """Returns the output directory: explicit argument,
    then environment variable, then the project default."""
    return get_default(
        out_dir,
        os.environ.get(OUT_DIR_VARIABLE, OUT_DIR),
    )


def get_paths(
        data_name: str,
        format_name='.json',
        out_dir: str = None,
        suffix: str = None,
):
    """Returns path of the file that will be saved."""
    full_name = data_name if not suffix else f'{data_name}_{suffix}'
    result_path = os.path.join(
        get_out_dir(out_dir),
        f'{full_name}{format_name}',
    )
    PathProcessor(result_path).create_parent_dirs()
    return result_path
