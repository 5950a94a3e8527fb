"""
Writer for result tables.
CSV files carry a header row, json files are line delimited records.
Numbers are written with 12 significant digits, undefined values as empty / null.
"""
__all__ = ["write_table", "format_records", "write_json_lines"]
__date__ = "2024-03-11"
__license__ = "GPLv3"
__version__ = "1.0.0"

import io
import json
import sys
from typing import Optional, Dict, Any, List

import numpy as np
import pandas

from .orderloss_logging import logger
from .. import constants as const


def _round(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return None
        return float(f"{value:.{const.SIGNIFICANT_DIGITS}g}")
    return value


def format_records(df: pandas.DataFrame) -> List[Dict[str, Any]]:
    """ records of df with rounded floats and NaN replaced by None """
    return [{key: _round(value) for key, value in record.items()}
            for record in df.to_dict(orient='records')]


def _to_text(df: pandas.DataFrame, fmt: str, footer: Optional[Dict[str, Any]]) -> str:
    if fmt == 'csv':
        text = df.to_csv(index=False, header=True, float_format=const.FLOAT_FORMAT,
                         na_rep='', lineterminator='\n')
        if footer:
            for key, value in footer.items():
                value = _round(value)
                text += f"# {key} = {'' if value is None else value}\n"
        return text

    if fmt == 'json':
        lines = [json.dumps(record) for record in format_records(df)]
        if footer:
            lines.append(json.dumps({key: _round(value) for key, value in footer.items()}))
        return ''.join(f"{line}\n" for line in lines)

    msg = f"Invalid output format {fmt!r}"
    logger.critical(msg)
    raise ValueError(msg)


def write_table(df: pandas.DataFrame, fmt: str, filename: Optional[str] = None,
                footer: Optional[Dict[str, Any]] = None, stream: io.TextIOBase = None) -> str:
    """
    write df (and an optional footer) to filename or to stdout.

    Parameters
    ----------
    df : DataFrame
        rows to write
    fmt : str
        'csv' or 'json'
    filename : str or None
        output file, stdout if None
    footer : dict or None
        summary values appended as '# key = value' lines (csv)
        or as a final record (json)
    stream : text stream
        used instead of stdout if filename is None

    Returns
    -------
    text : str
        the written text
    """
    text = _to_text(df, fmt, footer)
    if filename is None:
        (stream or sys.stdout).write(text)
    else:
        logger.log(25, f'write result to "{filename}"')
        with open(filename, 'w', newline='') as f:
            f.write(text)
    return text


def write_json_lines(records: List[Dict[str, Any]], filename: str) -> str:
    """ write records as line delimited json with rounded floats """
    lines = [json.dumps({key: _round(value) for key, value in record.items()})
             for record in records]
    text = ''.join(f"{line}\n" for line in lines)
    with open(filename, 'w', newline='') as f:
        f.write(text)
    return text
