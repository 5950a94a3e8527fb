"""
This module consist the logging class of orderloss.
It mainly works like a standard python logger.
But can change the logging location and provides functions
to create sections in the logfile.
"""

__all__ = ["OrderLossLogger", "logger", "log_block_table"]
__date__ = "2024-03-11"
__license__ = "GPLv3"
__version__ = "1.1"

import logging
import os
import shutil
import tempfile
from datetime import datetime

import pandas

LENGTH = 75


class OrderLossLogger(logging.Logger):
    """
    Logger with a stream handler (stderr) and an optional file handler.

    Level 15 is used for detailed numbers, 25 for headline results.
    """

    def __init__(self, name, level=logging.INFO):
        super().__init__(name, logging.DEBUG)

        self.stream_level = level
        self.file_level = level - 5

        # stream handler, stderr keeps stdout free for results
        self.stream_logger = logging.StreamHandler()
        self.stream_logger.setLevel(level)

        self.file_formatter = logging.Formatter('%(message)s')
        self.stream_formatter = logging.Formatter('%(message)s')

        self.stream_logger.setFormatter(self.stream_formatter)
        self.addHandler(self.stream_logger)

        self.file_logging_enabled = False
        self.current_file = None
        self.filelogger = None

    def set_stream_level(self, stream_level: int):
        self.stream_level = stream_level
        self.stream_logger.setLevel(stream_level)

    def setup_file_logging(self, stream_level, file_level=None):
        """
        sets up the file logging into a temporary file.
        use update_location to move it next to the results.

        Parameters
        ----------
        stream_level : int
            set level for stream
        file_level: int or None
            set level for the file
            if None it will be stream_level - 5
        """
        self.file_level = stream_level - 5 if file_level is None else file_level
        self.set_stream_level(stream_level)
        if self.file_logging_enabled:
            self.filelogger.setLevel(self.file_level)
            return

        self.current_file = tempfile.NamedTemporaryFile(mode='w+', delete=True)
        self.filelogger = logging.FileHandler(self.current_file.name)
        self.filelogger.setLevel(self.file_level)
        self.filelogger.setFormatter(self.file_formatter)
        self.addHandler(self.filelogger)
        self.file_logging_enabled = True

        now = datetime.now()
        self.info(f'Execution Date: {now.strftime("%d-%m-%Y %H:%M:%S")}')

    def create_info_section(self, msg):
        if len(msg) > LENGTH - 6:
            updated_msg = f"## {msg} ##"
        else:
            ll = LENGTH - len(msg) - 2
            updated_msg = f"{'#' * (ll // 2)} {msg} {'#' * ((ll + 1) // 2)}"

        if self.file_logging_enabled:
            self.filelogger.stream.write(f"\n{updated_msg}\n")
        if self.stream_level <= 25:
            self.stream_logger.stream.write(f"\n{updated_msg}\n")

    def create_info_subsection(self, msg, level=25):
        if len(msg) > LENGTH - 2:
            updated_msg = f"# {msg} --"
        else:
            ll = LENGTH - len(msg) - 3
            updated_msg = f"# {msg} {'-' * ll}"

        if self.file_logging_enabled:
            self.filelogger.stream.write(f"\n{updated_msg}\n")
        if self.stream_level <= level:
            self.stream_logger.stream.write(f"\n{updated_msg}\n")

    def save_log_file(self, file_path):
        self.filelogger.flush()
        self.current_file.seek(0)
        with open(file_path, 'w') as f:
            shutil.copyfileobj(self.current_file, f)

    def update_location(self, filename):
        """
        Copy the log written so far to a new location
        and continue logging there.

        Parameters
        ----------
        filename : str
            new logging location
        """
        if not self.file_logging_enabled:
            return
        dirname = os.path.dirname(filename)
        if dirname:
            os.makedirs(dirname, exist_ok=True)
        self.save_log_file(filename)
        self.remove_file_handler()
        self.filelogger = logging.FileHandler(filename, mode='a')
        self.filelogger.setLevel(self.file_level)
        self.filelogger.setFormatter(self.file_formatter)
        self.addHandler(self.filelogger)

    def remove_file_handler(self):
        if self.filelogger:
            self.removeHandler(self.filelogger)
            self.filelogger.close()
            self.filelogger = None

    def cleanup(self):
        if self.file_logging_enabled:
            self.remove_file_handler()
            self.current_file.close()
            self.current_file = None
            self.file_logging_enabled = False

    def flush(self):
        for handler in self.handlers:
            handler.flush()


logger = OrderLossLogger('orderloss')


def log_block_table(df: pandas.DataFrame, var_name: str, level: int = 15):
    """ log a table of per-sector values as json like lines """
    logger.log(level, f'# {var_name}:')
    if len(df) == 0:
        logger.log(level, f'# {var_name} is empty')
        return

    logger.log(level, f'{var_name} = [')
    for record in df.to_dict(orient='records'):
        items = ', '.join(
            f'"{key}": {value:.6g}' if isinstance(value, float) else f'"{key}": {value}'
            for key, value in record.items())
        logger.log(level, f'    {{{items}}},')
    logger.log(level, '    ]')
