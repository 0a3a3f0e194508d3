# cli/management/commands/sweep.py
import pandas as pd

from experiments.models import EstimateRecord
from experiments.montecarlo import CSV_COLUMNS

from cli.outputs import frame_to_csv

from .estimate import Command as EstimateCommand


class Command(EstimateCommand):
    help = ('Barre una rejilla de λ, una lista de pares y un calendario de radios; '
            'con --from-db reexporta las filas guardadas.')

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--lambda-grid', help='Rejilla lo:hi:step')
        parser.add_argument('--from-db', action='store_true',
                            help='Exporta las estimaciones guardadas en lugar de calcular')

    def handle(self, *args, **options):
        if options.get('from_db'):
            records = EstimateRecord.objects.all()
            if options.get('label'):
                records = records.filter(label=options['label'])
            frame = pd.DataFrame([r.as_row() for r in records], columns=CSV_COLUMNS)
            self.emit(frame_to_csv(frame), options.get('out'))
            return
        super().handle(*args, **options)
