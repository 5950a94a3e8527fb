"""
loader of json file,
which ignores comments starting with "#" and allows nested files
whenever the "json_file" keyword is detected
"""

__all__ = ["json_loader", ]
__date__ = "2024-03-11"
__license__ = "GPLv3"
__version__ = "1.0.0"

import os
import json

from .. import constants as const
from .orderloss_logging import logger


def scrub_dict(obj, bad_key="#"):
    """
    Remove comments from a dictionary, where comments are keys that
    have a hash symbol ('#') anywhere in them.
    """
    if isinstance(obj, dict):
        for key in list(obj.keys()):
            if bad_key in key:
                del obj[key]
            else:
                scrub_dict(obj[key], bad_key)
    elif isinstance(obj, list):
        for i in reversed(range(len(obj))):
            if obj[i] == bad_key:
                del obj[i]
            else:
                scrub_dict(obj[i], bad_key)


def substitutes_files(data, filename, json_file_branch):
    """
    searches for json_file keywords in the dictionary, and loads the connected files.

    Parameters
    ----------
    data: dict
        dictionary where files should be substituted
    filename : str
        name of the file data was read from, used to resolve relative paths
    json_file_branch : list
        files already on the include chain
    """
    for value in data.values():
        if isinstance(value, dict):
            substitutes_files(value, filename, json_file_branch)

    json_file = data.pop('json_file', None)
    if json_file is None:
        return

    for directory in ['', os.path.dirname(filename), const.DEFAULT_CONFIG_DIR]:
        file = os.path.join(directory, json_file)
        if os.path.isfile(file):
            break
    else:
        msg = f"{json_file} can not found (specified in {filename})"
        logger.critical(msg)
        raise FileNotFoundError(msg)

    included = json_loader(file, json_file_branch + [filename])
    included.pop('_filename', None)
    for key, value in included.items():
        data.setdefault(key, value)


def json_loader(filename, json_file_branch=None):
    """
    Custom JSON loader that removes comments and substitutes included files.
    Keys already present take precedence over keys from an included file.

    Parameters
    ----------
    filename : str
        filename of the json file
    json_file_branch : list
        used to detect recursions

    Returns
    -------
    data: dict
        loaded json file without comments
    """
    if json_file_branch is None:
        json_file_branch = []

    if filename in json_file_branch:
        msg = f"infinite loop detected in:\n {' -> '.join(json_file_branch)} -> {filename}"
        logger.critical(msg)
        raise RecursionError(msg)

    with open(filename) as handle:
        data = json.load(handle)

    substitutes_files(data, filename, json_file_branch)
    scrub_dict(data, '#')
    data['_filename'] = filename
    return data
