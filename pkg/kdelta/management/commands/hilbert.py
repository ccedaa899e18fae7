from django.core.management.base import CommandError

from ...catalog.hilbert import RationalSeries, hilbert_series_check
from ...utils.constants import ExitCode, OutputFormat
from ..base import KDeltaCommand, int_list


class Command(KDeltaCommand):
    help = 'Compare the Hilbert series of a weighted complete intersection with another expression.'
    formats = ('text', OutputFormat.JSON.value)
    default_format = 'text'

    def add_arguments(self, parser):
        parser.add_argument('--weights', required=True, help='Comma-separated weights, e.g. 1,1,1,3.')
        parser.add_argument('--degrees', default='', help='Comma-separated relation degrees.')
        parser.add_argument('--order', type=int, default=50)
        parser.add_argument('--alternative-numerator', help='Comma-separated numerator coefficients.')
        parser.add_argument('--alternative-weights', help='Comma-separated denominator weights.')
        self.add_output_arguments(parser)

    def run(self, **options):
        weights = int_list(options['weights'], 'weights')
        degrees = int_list(options['degrees'], 'degrees')
        alternative = None
        numerator, denominator = options.get('alternative_numerator'), options.get('alternative_weights')
        if (numerator is None) != (denominator is None):
            raise CommandError('--alternative-numerator and --alternative-weights go together',
                               returncode=ExitCode.VALIDATION)
        if numerator is not None:
            alternative = RationalSeries(tuple(int_list(numerator, 'alternative-numerator')),
                                         tuple(int_list(denominator, 'alternative-weights')))
        agree = hilbert_series_check(weights, degrees, options['order'], alternative)
        if options['format'] == OutputFormat.JSON.value:
            self.emit_json({'weights': weights, 'degrees': degrees, 'order': options['order'],
                            'agree': agree}, options)
        else:
            self.emit(self.style.SUCCESS('agree') if agree else self.style.ERROR('differ'), options)
