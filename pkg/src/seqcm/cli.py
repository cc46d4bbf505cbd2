""" Command-line interface for seqcm """
import copy
import logging
import logging.config
import sys

import click

from seqcm import __version__
from seqcm.config import DEFAULT_RETRY_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_SETTINGS
from seqcm.exceptions import SeqcmError, SessionParseError
from seqcm.fixtures import fixtures, get_fixture
from seqcm.report import run_command
from seqcm.session import parse_input

logger = logging.getLogger(__name__)

EXIT_ENGINE_ERROR = 1
EXIT_PARSE_ERROR = 2

log_config = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'detailed': {
            'class': 'logging.Formatter',
            'format': '%(asctime)s %(name)-20s %(levelname)-8s'
            '%(processName)-10s %(message)s'
        },
    },
    'handlers': {
        'file': {
            'class': 'logging.FileHandler',
            'filename': 'seqcm.log',
            'mode': 'w',
            'formatter': 'detailed',
        },
    },
    'loggers': {
        'seqcm': {
            'level': 'DEBUG',
            'handlers': ['file'],
        },
    },
    'root': {
        'level': 'INFO',
        'handlers': [],
    },
}


def configure_logging(log_file, verbose):
    config = copy.deepcopy(log_config)
    config['handlers']['file']['filename'] = log_file
    if verbose:
        config['handlers']['stderr'] = {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'detailed',
            'level': 'INFO',
        }
        config['loggers']['seqcm']['handlers'].append('stderr')
    try:
        logging.config.dictConfig(config)
    except ValueError:
        click.echo('could not configure file logging (insufficient permissions?)', err=True)


def fail(message, code):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.command()
@click.version_option(__version__)
@click.argument("filename", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--fixture", "fixture_name", metavar="NAME", help="Run a bundled fixture instead of a file.")
@click.option("--list-fixtures", is_flag=True, help="List the bundled fixtures and exit.")
@click.option("--seed", type=click.INT, default=DEFAULT_SEED, show_default=True,
              help="Seed for sampled linear forms.")
@click.option("--samples", type=click.INT, default=DEFAULT_SAMPLES, show_default=True,
              help="Number of sampled systems of parameters.")
@click.option("--budget", type=click.INT, default=DEFAULT_RETRY_BUDGET, show_default=True,
              help="Candidate evaluations allowed per witness search.")
@click.option("--format", "output_format", type=click.Choice(["human", "json"]), default="human",
              show_default=True, help="Report format.")
@click.option("--log-file", default="seqcm.log", show_default=True, type=click.Path(dir_okay=False),
              help="Where to write the debug log.")
@click.option("--verbose", is_flag=True, help="Also log progress to stderr.")
@click.option("--timing", is_flag=True, help="Include wall-clock timings in the report.")
def cli(filename, fixture_name, list_fixtures, seed, samples, budget, output_format, log_file, verbose,
        timing):
    """
    Sequentially Cohen-Macaulay profiles of S/I for monomial ideals I.
    FILENAME is a session file: a ring, ideals, elements and commands.
    """
    if list_fixtures:
        width = max(len(f.name) for f in fixtures())
        for fixture in fixtures():
            click.echo(f"{fixture.name:{width}}  {fixture.title}")
        return
    if (filename is None) == (fixture_name is None):
        raise click.UsageError("give either FILENAME or --fixture")

    configure_logging(log_file, verbose)
    try:
        settings = DEFAULT_SETTINGS.with_overrides(seed=seed, samples=samples, retry_budget=budget)
    except ValueError as e:
        raise click.UsageError(str(e)) from e

    try:
        if fixture_name is not None:
            fixture = get_fixture(fixture_name)
            source = fixture.filename
            text = fixture.text
        else:
            source = filename
            with open(filename, encoding="utf-8") as f:
                text = f.read()
    except UnicodeDecodeError:
        fail(f"{source} is not UTF-8 text", EXIT_PARSE_ERROR)
    except SeqcmError as e:
        fail(e, EXIT_PARSE_ERROR)

    try:
        session = parse_input(text)
    except SessionParseError as e:
        logger.error(f"{source}: {e}")
        fail(f"{source}: {e}", EXIT_PARSE_ERROR)

    try:
        doc = run_command(session, settings, source=source, timing=timing)
    except SeqcmError as e:
        fail(e, EXIT_ENGINE_ERROR)
    except Exception as e:  # pylint: disable=broad-except
        logger.exception("unexpected failure")
        fail(f"internal error: {e}", EXIT_ENGINE_ERROR)

    if output_format == "json":
        click.echo(doc.to_json(), nl=False)
    else:
        click.echo(doc.to_human(), nl=False)
