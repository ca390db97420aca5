import logging
from typing import Any, Dict

from django.core.management.base import BaseCommand, CommandError

from ..exceptions import StirlingError
from ..exports import render_csv, render_json, write_output
from ..serializers import RunConfig, RunConfigSerializer

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
CRITERIA_FAILURE = 1


class StirlingCommand(BaseCommand):
    """Shared option handling and output for the stirling_* commands."""

    command_name = None

    def add_output_arguments(self, parser, formats=('csv',)):
        parser.add_argument('--out', default='', help='Output file; stdout when omitted.')
        parser.add_argument('--format', choices=formats, default=formats[0])

    def load_config(self, data: Dict[str, Any]) -> RunConfig:
        serializer = RunConfigSerializer(data={'command': self.command_name, **data})
        if not serializer.is_valid():
            raise CommandError(f"invalid options: {dict(serializer.errors)}", returncode=USAGE_ERROR)
        return serializer.save()

    def config_echo(self, config: RunConfig, *keys) -> Dict[str, Any]:
        return {key: getattr(config, key) for key in keys}

    def emit(self, config: RunConfig, echo: Dict[str, Any], header=None, rows=None, payload=None):
        if config.format == 'json':
            text = render_json(self.command_name, echo, payload)
        else:
            text = render_csv(self.command_name, echo, header, rows)
        try:
            write_output(text, config.out, self.stdout)
        except OSError as e:
            raise CommandError(f"cannot write {config.out}: {e}", returncode=USAGE_ERROR)
        if config.out:
            logger.info(f"Wrote {self.command_name} output to {config.out}")

    def library_call(self, func, *args, **kwargs):
        """Run a library call, turning domain errors into usage errors."""
        try:
            return func(*args, **kwargs)
        except StirlingError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)
