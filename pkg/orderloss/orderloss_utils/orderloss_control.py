"""
This file contains the run configuration of orderloss.
Its task is to merge the default config file, an optional user config file
and the command line flags into a validated RunConfig object.
"""
__all__ = ["RunConfig", "Tolerances", "ModuleKwargs", "parser", "load_config", "build_run_config"]
__date__ = "2024-03-11"
__license__ = "GPLv3"
__version__ = "1.0.0"

import argparse
import json
from fractions import Fraction
from typing import Optional, Tuple, List, Dict, Any, Literal

import numpy as np
from pydantic import BaseModel, validator, root_validator, Extra

from .json_loader import json_loader
from .orderloss_logging import logger
from .. import constants as const

COMMANDS = ("table", "sweep", "distill", "verify", "info")


class ModuleKwargs(BaseModel, extra=Extra.allow):
    """ selection of a pluggable module by name plus its init keywords """
    name: str

    @property
    def init_kwargs(self) -> Dict[str, Any]:
        fields = list(self.__fields__.keys())
        return {k: v for k, v in self.__dict__.items() if k not in fields}


class Tolerances(BaseModel, extra=Extra.forbid):
    """ thresholds of the acceptance suite run by `verify` """
    closed_form: float = 1e-9
    spectrum: float = 1e-10
    grid: float = 1e-10
    ratio: float = 1e-9
    trace_distance: float = 1e-10
    mutual_information: float = 1e-10
    probability: float = 1e-10
    fidelity: float = 1e-10
    basis: float = 1e-10
    certificate: float = 1e-10
    # Monte Carlo frequencies must lie within this many standard errors
    mc_sigma: float = 3.0

    def override(self, value: float) -> "Tolerances":
        """ replace every threshold by value """
        return Tolerances(**{key: value for key in self.__fields__})


class RunConfig(BaseModel, extra=Extra.forbid):
    """
    Validated settings for one command line run.

    alpha, alpha_sq and grid are mutually exclusive.
    Without any of them the maximally entangled case alpha = 1/sqrt(2) is used.
    """
    command: Literal["table", "sweep", "distill", "verify", "info"]
    J: int = 1
    alpha: Optional[float] = None
    alpha_sq: Optional[str] = None
    grid: Optional[Tuple[float, float, int]] = None
    seed: int = 42
    shots: Optional[int] = None
    format: Literal["json", "csv"] = "csv"
    output: Optional[str] = None
    trace: Optional[str] = None
    big: bool = False
    eigensolver_kwargs: ModuleKwargs = ModuleKwargs(name="Jacobi")
    tolerances: Tolerances = Tolerances()
    verify_shots: int = 100000
    verify_alphas: List[float] = [0.0, 0.3, float(const.MAX_ENTANGLED_ALPHA), 0.9, 1.0]
    verify_grid_count: int = 101

    @validator('J')
    def check_j(cls, value):
        if not 1 <= value <= const.CLOSED_FORM_MAX_J:
            raise ValueError(f"J must be in [1, {const.CLOSED_FORM_MAX_J}], got {value}")
        return value

    @validator('alpha')
    def check_alpha(cls, value):
        if value is not None and not 0 <= value <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {value}")
        return value

    @validator('alpha_sq')
    def check_alpha_sq(cls, value):
        if value is None:
            return value
        weight = Fraction(value)
        if not 0 <= weight <= 1:
            raise ValueError(f"alpha_sq must be in [0, 1], got {value}")
        return value

    @validator('grid')
    def check_grid(cls, value):
        if value is None:
            return value
        start, stop, count = value
        if count < 2:
            raise ValueError(f"grid count must be >= 2, got {count}")
        if not 0 <= start < stop <= 1:
            raise ValueError(f"grid must satisfy 0 <= start < stop <= 1, got {start}, {stop}")
        return value

    @validator('shots', 'verify_shots')
    def check_shots(cls, value):
        if value is not None and value < 1:
            raise ValueError(f"shots must be >= 1, got {value}")
        return value

    @validator('verify_grid_count')
    def check_grid_count(cls, value):
        if value < 2:
            raise ValueError(f"grid count must be >= 2, got {value}")
        return value

    @root_validator(skip_on_failure=True)
    def check_exclusive(cls, values):
        given = [key for key in ('alpha', 'alpha_sq', 'grid') if values.get(key) is not None]
        if len(given) > 1:
            raise ValueError(f"{' and '.join(given)} can not be combined")
        if values.get('grid') is not None and values['command'] in ('table', 'distill'):
            raise ValueError(f"{values['command']} takes --alpha or --alpha-sq, not --grid")
        return values

    def schmidt(self, alpha: Optional[float] = None):
        """ SchmidtParam of this run (alpha overrides the configured value) """
        from ..states import SchmidtParam
        if alpha is not None:
            return SchmidtParam.from_alpha(alpha)
        if self.alpha_sq is not None:
            return SchmidtParam.from_alpha_sq(self.alpha_sq)
        if self.alpha is not None:
            return SchmidtParam.from_alpha(self.alpha)
        return SchmidtParam.from_alpha_sq("1/2")

    def alphas(self) -> np.ndarray:
        """ monotone alpha grid, or the single configured alpha """
        if self.grid is not None:
            start, stop, count = self.grid
            return np.linspace(start, stop, count)
        return np.array([self.schmidt().alpha])

    def resolve_seed(self) -> int:
        """ seed 0 means: draw a seed from the entropy source and log it """
        if self.seed == 0:
            seed = int(np.random.SeedSequence().entropy % (2 ** 63 - 1)) or 1
            logger.info(f"seed 0 given, drawn seed = {seed}")
            return seed
        return self.seed

    def log_settings(self):
        logger.create_info_subsection('settings of this run', 20)
        logger.info(json.dumps(self.dict(), indent=4, default=str))


def load_config(config_file: Optional[str] = None,
                default_config: str = const.DEFAULT_CONFIG_FILE) -> Dict[str, Any]:
    """
    read the categories of the default config file and
    update them with the (flat or categorized) user config file.

    Returns
    -------
    settings : dict
        flat dictionary of settings
    """
    settings = {}
    categories = {}
    default = json_loader(default_config)
    for cat, item in default.items():
        if cat.startswith("_"):
            continue
        settings.update(item)
        categories[cat] = list(item.keys())

    if config_file is None:
        return settings

    logger.info(f"# read configuration from {config_file!r}")
    specified = json_loader(config_file)
    for cat, items in categories.items():
        spec_dict = specified.get(cat, specified)
        for item in items:
            if item in spec_dict:
                settings[item] = spec_dict[item]
    unknown = {key for key in specified if not key.startswith('_')} \
        - set(categories) - {item for items in categories.values() for item in items}
    if unknown:
        msg = f"unknown settings in {config_file}: {sorted(unknown)}"
        logger.critical(msg)
        raise ValueError(msg)
    return settings


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """ merge defaults, --config file and command line flags """
    settings = load_config(getattr(args, 'config', None))
    flags = {key: value for key, value in vars(args).items()
             if value is not None and key in RunConfig.__fields__}
    if flags.get('big') is False:
        flags.pop('big')
    settings.update(flags)
    if flags.get('grid') is not None:
        settings['grid'] = tuple(flags['grid'])

    override = getattr(args, 'tolerance_override', None)
    config = RunConfig.parse_obj(settings)
    if override is not None:
        logger.warning(f"all tolerances overridden with {override}")
        config = config.copy(update={'tolerances': config.tolerances.override(override)})
    return config


def _grid(values: List[str]) -> Tuple[float, float, int]:
    start, stop, count = values
    return float(start), float(stop), int(count)


def parser(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """ orderloss control and help interface """

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--J', dest='J', type=int, help="number of pairs is N = 2J")
    alpha_group = common.add_mutually_exclusive_group()
    alpha_group.add_argument('--alpha', type=float, help="Schmidt coefficient alpha in [0, 1]")
    alpha_group.add_argument('--alpha-sq', dest='alpha_sq', type=str,
                             help="exact Schmidt weight alpha^2, e.g. 1/2 or 0.36")
    alpha_group.add_argument('--grid', nargs=3, metavar=('START', 'STOP', 'COUNT'),
                             help="alpha grid as in numpy.linspace(START, STOP, COUNT)")
    common.add_argument('--seed', type=int, help="seed of the Philox generator (0: random)")
    common.add_argument('--shots', type=int, help="number of Monte Carlo shots")
    common.add_argument('--format', choices=['json', 'csv'], help="output format")
    common.add_argument('--output', '-o', help="output file (default: stdout)")
    common.add_argument('--trace', help="write the trace of one protocol run as json lines")
    common.add_argument('--big', action='store_true', default=None,
                        help="allow brute force with 4J = 12 qubits (several GB of memory)")
    common.add_argument('--config', help="json config file overriding the defaults")
    common.add_argument('--tolerance-override', dest='tolerance_override', type=float,
                        help=argparse.SUPPRESS)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0)
    verbosity.add_argument("-q", "--quiet", action="count", default=0)

    parser_ = argparse.ArgumentParser(
        prog="orderloss",
        description="Distillable entanglement and information loss "
                    "when the order of Bob's qubits is lost")
    sub = parser_.add_subparsers(dest='command', required=True)
    sub.add_parser('table', parents=[common], help="per-sector table d_j, p_j, yield")
    sub.add_parser('sweep', parents=[common], help="E_D, delta_I and ratio over an alpha grid")
    sub.add_parser('distill', parents=[common], help="simulate the distillation protocol")
    sub.add_parser('verify', parents=[common], help="run the acceptance suite")
    sub.add_parser('info', parents=[common], help="version and supported ranges")

    args = parser_.parse_args(argv)
    if args.grid is not None:
        try:
            args.grid = _grid(args.grid)
        except ValueError:
            parser_.error(f"invalid --grid {' '.join(args.grid)}")
    return args
