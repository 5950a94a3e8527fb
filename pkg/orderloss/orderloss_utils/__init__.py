from .orderloss_logging import logger, log_block_table
from .json_loader import json_loader
from .orderloss_control import parser, RunConfig, Tolerances, ModuleKwargs, load_config, \
    build_run_config
from .get_subclass import get_subclass
from .output_writer import write_table, format_records, write_json_lines
