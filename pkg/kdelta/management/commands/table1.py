from django.conf import settings

from ...catalog import table1
from ...serializers import TableGroupSerializer
from ...tasks import classify_in_parallel
from ...utils.constants import OutputFormat
from ..base import KDeltaCommand

TSV_HEADER = 'pair\tk\tstatus\tevidence'


def render_tsv(groups):
    lines = [TSV_HEADER]
    lines += [f'{g.pair}\t{g.k}\t{g.status.value}\t{",".join(g.evidence_kinds)}' for g in groups]
    return '\n'.join(lines)


class Command(KDeltaCommand):
    help = 'Regenerate the K-stability table of the surfaces S_{n,m}^k.'
    formats = (OutputFormat.TSV.value, OutputFormat.JSON.value)
    default_format = OutputFormat.TSV.value

    def add_arguments(self, parser):
        parser.add_argument('--jobs', type=int, default=None,
                            help='Number of row batches fanned out through Celery (default: 1, in-process).')
        parser.add_argument('--max-sum', type=int, default=None,
                            help='Largest n+m enumerated for the n+m >= 8 group.')
        self.add_output_arguments(parser)

    def run(self, **options):
        jobs = options['jobs'] or settings.KDELTA_DEFAULT_JOBS
        classify_many = None
        if jobs > 1:
            def classify_many(triples):
                return classify_in_parallel(triples, jobs)
        groups = table1(options['max_sum'], classify_many=classify_many)
        if options['format'] == OutputFormat.JSON.value:
            self.emit_json({'groups': TableGroupSerializer(groups, many=True).data}, options)
        else:
            self.emit(render_tsv(groups), options)
