""" run orderloss from the command line """
from .orderloss_main import cli

cli()
