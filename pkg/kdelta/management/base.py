import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from ..catalog import build_config, catalog_names, load_config
from ..exceptions import (
    BuilderError,
    CatalogError,
    KStabilityError,
    LatticeError,
    RecipeValidationError,
    ZariskiError,
)
from ..serializers import canonical_json
from ..utils.constants import ErrorMessages, ExitCode, OutputFormat

logger = logging.getLogger(__name__)

VALIDATION_ERRORS = (RecipeValidationError, CatalogError, BuilderError, LatticeError)
COMPUTATION_ERRORS = (ZariskiError, KStabilityError)


def describe_error(exc):
    """One line: the message, then the located errors if any."""
    if not exc.errors:
        return exc.message
    details = '; '.join(f'{where}: {message}' for where, message in sorted(exc.errors.items(), key=str))
    return f'{exc.message} ({details})'


def int_list(value, name):
    try:
        items = [int(item) for item in str(value).split(',') if item.strip()]
    except ValueError:
        raise CommandError(f'--{name} must be a comma-separated list of integers, got {value!r}',
                           returncode=ExitCode.VALIDATION)
    return items


class KDeltaCommand(BaseCommand):
    """Shared source, output and error handling for the engine's commands."""

    requires_system_checks = []
    formats = (OutputFormat.JSON.value,)
    default_format = OutputFormat.JSON.value

    def add_source_arguments(self, parser):
        parser.add_argument('recipe', nargs='?', help='Path to a recipe JSON file.')
        parser.add_argument('--catalog', help=f'Catalog configuration: {", ".join(catalog_names())}.')
        parser.add_argument('--n', type=int, help='First parameter of a parametric configuration.')
        parser.add_argument('--m', type=int, help='Second parameter of a parametric configuration.')

    def add_flag_argument(self, parser):
        parser.add_argument('--flag', help='Label of the flag curve.')

    def add_output_arguments(self, parser):
        parser.add_argument('--format', choices=self.formats, default=self.default_format)
        parser.add_argument('--out', help='Write to this path instead of stdout.')

    def execute(self, *args, **options):
        if settings.KDELTA_NO_COLOR:
            options['no_color'] = True
        return super().execute(*args, **options)

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except VALIDATION_ERRORS as exc:
            logger.error('%s: %s', type(exc).__name__, describe_error(exc))
            raise CommandError(describe_error(exc), returncode=ExitCode.VALIDATION)
        except COMPUTATION_ERRORS as exc:
            logger.error('%s: %s', type(exc).__name__, describe_error(exc))
            raise CommandError(describe_error(exc), returncode=ExitCode.COMPUTATION)

    def run(self, **options):
        raise NotImplementedError('subclasses of KDeltaCommand must provide a run() method')

    # --- helpers ---

    def require_flag(self, options):
        if not options.get('flag'):
            raise CommandError('--flag is required', returncode=ExitCode.VALIDATION)
        return options['flag']

    def load_source(self, options):
        recipe_path, catalog = options.get('recipe'), options.get('catalog')
        if bool(recipe_path) == bool(catalog):
            raise CommandError(str(ErrorMessages.SOURCE_REQUIRED), returncode=ExitCode.VALIDATION)
        if catalog:
            params = [value for value in (options.get('n'), options.get('m')) if value is not None]
            return build_config(catalog, *params)
        try:
            data = json.loads(Path(recipe_path).read_text(encoding='utf-8'))
        except (OSError, ValueError) as exc:
            logger.error('Cannot read recipe %s: %s', recipe_path, exc)
            raise RecipeValidationError({'recipe': str(ErrorMessages.RECIPE_UNREADABLE)})
        if isinstance(data, dict) and data.get('steps') == []:
            raise RecipeValidationError({'steps': str(ErrorMessages.EMPTY_RECIPE)})
        return load_config(data)

    def emit(self, text, options):
        out = options.get('out')
        if out:
            Path(out).write_text(text + '\n', encoding='utf-8')
            self.stderr.write(self.style.SUCCESS(f'Wrote {out}'))
        else:
            self.stdout.write(text)

    def emit_json(self, data, options):
        self.emit(canonical_json(data), options)
