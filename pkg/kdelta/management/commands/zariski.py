from ...serializers import ZariskiPathSerializer
from ...zariski import zariski_path
from ..base import KDeltaCommand


class Command(KDeltaCommand):
    help = 'Chamber decomposition of the pulled back anticanonical class minus t times a flag curve.'

    def add_arguments(self, parser):
        self.add_source_arguments(parser)
        self.add_flag_argument(parser)
        self.add_output_arguments(parser)

    def run(self, **options):
        flag = self.require_flag(options)
        config = self.load_source(options)
        path = zariski_path(config.model_for(flag), flag)
        self.emit_json(ZariskiPathSerializer(path).data, options)
