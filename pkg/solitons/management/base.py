import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from solitons.config import FORMATS, build_config
from solitons.exceptions import ConfigError, EvaluationError, ExprSyntaxError
from solitons.runner import EXIT_CONFIG, EXIT_EVALUATION, EXIT_OK, run

logger = logging.getLogger(__name__)


class LabCommand(BaseCommand):
    """Shared flag set and exit-status handling of the laboratory commands."""
    mode = None

    def add_arguments(self, parser):
        parser.add_argument('--family', help='catalog family id (see catalog_list)')
        parser.add_argument('--param', action='append', metavar='NAME=VALUE',
                            help='family or expression parameter, repeatable')
        parser.add_argument('--metric-file', dest='metric_file', metavar='PATH',
                            help='config file with [metric], [problem] and other sections')
        parser.add_argument('--phi', help='Walker function phi(x, y)')
        parser.add_argument('--potential', help='potential f as an expression')
        parser.add_argument('--lambda', dest='lambda', type=float, help='soliton constant')
        parser.add_argument('--samples', type=int, help='number of sample points')
        parser.add_argument('--seed', type=int, help='sampling seed')
        parser.add_argument('--box', action='append', nargs='+', metavar='COORD=LO:HI',
                            help='sampling interval, repeatable')
        parser.add_argument('--tol', action='append', metavar='CHECK=VALUE',
                            help='tolerance override, repeatable')
        parser.add_argument('--format', choices=FORMATS, help='output format')
        parser.add_argument('--out', metavar='PATH', help='write the report here instead of stdout')

    def handle(self, *args, **options):
        try:
            config = build_config(self.mode, options)
            result = run(config)
        except (ConfigError, ExprSyntaxError) as exc:
            raise CommandError(str(exc), returncode=EXIT_CONFIG) from exc
        except EvaluationError as exc:
            logger.warning('evaluation failed: %s', exc)
            raise CommandError(str(exc), returncode=EXIT_EVALUATION) from exc

        if config.out:
            Path(config.out).write_text(result.output)
        else:
            self.stdout.write(result.output, ending='')
        if result.status != EXIT_OK:
            raise CommandError(f'{self.mode} finished with status {result.status}',
                               returncode=result.status)
