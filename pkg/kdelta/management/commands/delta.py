from ...kstab import delta_lower_bound
from ...serializers import DeltaReportSerializer, format_rational
from ...utils.constants import OutputFormat
from ..base import KDeltaCommand


class Command(KDeltaCommand):
    help = 'Local delta lower bound at the point under a flag curve.'
    formats = (OutputFormat.JSON.value, OutputFormat.TSV.value)

    def add_arguments(self, parser):
        self.add_source_arguments(parser)
        self.add_flag_argument(parser)
        self.add_output_arguments(parser)

    def run(self, **options):
        flag = self.require_flag(options)
        config = self.load_source(options)
        setup = config.setup(flag)
        report = delta_lower_bound(config.stages[setup.stage], flag, setup.points)
        if options['format'] == OutputFormat.TSV.value:
            lines = ['point\tS_W\tmode\tquotient']
            lines += [f'{e.point}\t{format_rational(e.s_w)}\t{e.mode.value}\t{format_rational(e.quotient)}'
                      for e in report.entries]
            lines.append(f'A/S\t{format_rational(report.ratio)}')
            lines.append(f'delta_lower_bound\t{format_rational(report.delta_lower_bound)}\t'
                         f'{report.bound_mode.value}\t{report.verdict.value}')
            self.emit('\n'.join(lines), options)
        else:
            self.emit_json(DeltaReportSerializer(report).data, options)
