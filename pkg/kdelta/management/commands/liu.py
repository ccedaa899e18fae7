from django.core.management.base import CommandError

from ...catalog.formulas import group_order, volume_formula
from ...kstab import liu_test
from ...lattice import to_rational
from ...serializers import format_rational
from ...utils.constants import ExitCode, LiuVerdict, OutputFormat
from ..base import KDeltaCommand


class Command(KDeltaCommand):
    help = 'Normalized volume test: excluded when the anticanonical volume exceeds 9/|G|.'
    formats = ('text', OutputFormat.JSON.value)
    default_format = 'text'

    def add_arguments(self, parser):
        parser.add_argument('--volume', help='Anticanonical volume as "p/q".')
        parser.add_argument('--group-order', type=int, help='Order of the local fundamental group.')
        parser.add_argument('--n', type=int)
        parser.add_argument('--m', type=int)
        parser.add_argument('--k', type=int)
        self.add_output_arguments(parser)

    def run(self, **options):
        triple = [options.get(key) for key in ('n', 'm', 'k')]
        if all(value is not None for value in triple):
            volume, order = volume_formula(*triple), group_order(*triple[:2])
        elif options.get('volume') is not None and options.get('group_order') is not None:
            volume, order = to_rational(options['volume']), options['group_order']
        else:
            raise CommandError('give --volume and --group-order, or --n, --m and --k',
                               returncode=ExitCode.VALIDATION)
        verdict = liu_test(volume, order)
        if options['format'] == OutputFormat.JSON.value:
            self.emit_json({
                'volume': format_rational(volume),
                'group_order': order,
                'threshold': format_rational(to_rational(f'9/{order}')),
                'verdict': verdict.value,
            }, options)
            return
        style = self.style.ERROR if verdict == LiuVerdict.EXCLUDED_UNSTABLE else self.style.SUCCESS
        self.emit(style(verdict.value), options)
