"""Command-line driver for fairscore."""

import logging
import sys

import click

from fairscore import __version__
from fairscore.config import Config
from fairscore.errors import EXIT_INTERNAL, EXIT_USAGE, FairscoreError
from fairscore.log import setup_logging

logger = logging.getLogger(__name__)


class FairscoreGroup(click.Group):
    """Click group that turns fairscore errors into the documented exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (click.exceptions.Exit, click.exceptions.Abort):
            raise
        except click.UsageError as e:
            e.show()
            ctx.exit(EXIT_USAGE)
        except click.ClickException:
            raise
        except FairscoreError as e:
            logger.debug("command failed", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            ctx.exit(e.exit_code)
        except Exception:
            logger.exception("unexpected failure")
            ctx.exit(EXIT_INTERNAL)


def create_cli() -> click.Group:
    """CLI factory: the group with every command registered."""

    @click.group(cls=FairscoreGroup)
    @click.version_option(__version__, prog_name="fairscore")
    @click.option("--log-level", default=None, help="Logging level (default from FAIRSCORE_LOG_LEVEL).")
    @click.option("--log-json/--no-log-json", default=None, help="JSON log lines on stderr.")
    def cli(log_level, log_json):
        """Group-fair score repair by optimal transport."""
        setup_logging(log_level or Config.LOG_LEVEL, Config.LOG_JSON if log_json is None else log_json)
        Config.validate()

    # Register commands
    from fairscore.commands.generate import generate
    from fairscore.commands.repair import repair_command
    from fairscore.commands.evaluate import evaluate_command
    from fairscore.commands.sweep import sweep
    cli.add_command(generate)
    cli.add_command(repair_command)
    cli.add_command(evaluate_command)
    cli.add_command(sweep)

    return cli


def main(argv=None) -> int:
    """Console entry point; returns the process exit code."""
    try:
        code = create_cli().main(args=argv, prog_name="fairscore", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
