from ...exceptions import CatalogError
from ...serializers import ModelDumpSerializer
from ..base import KDeltaCommand


class Command(KDeltaCommand):
    help = 'Build a surface model from a recipe or catalog configuration and dump its intersection data.'

    def add_arguments(self, parser):
        self.add_source_arguments(parser)
        parser.add_argument('--stage', default='final', help='Checkpoint stage to dump (default: final).')
        self.add_output_arguments(parser)

    def run(self, **options):
        config = self.load_source(options)
        stage = options['stage']
        if stage not in config.stages:
            raise CatalogError(f'unknown stage {stage!r}', {'stage': sorted(config.stages)})
        model = config.stages[stage]
        mismatches = config.verify()
        if mismatches:
            raise CatalogError('declared intersection data does not match the model',
                               {f'{c.stage}:{c.kind}{list(c.args)}': str(actual) for c, actual in mismatches})
        self.emit_json(ModelDumpSerializer(model).data, options)
