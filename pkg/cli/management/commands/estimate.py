# cli/management/commands/estimate.py
from engine.growth import ModelConfig
from experiments.models import EstimateRecord
from experiments.montecarlo import results_frame, sweep
from lattice.exceptions import RichardsonError

from cli.base import RichardsonCommand
from cli.forms import EstimateForm
from cli.outputs import frame_to_csv


class Command(RichardsonCommand):
    help = 'Estima la probabilidad de coexistencia truncada y escribe una tabla CSV.'
    form_class = EstimateForm

    def add_arguments(self, parser):
        parser.add_argument('--dim', type=int, default=2)
        parser.add_argument('--lambda', dest='lam', type=float, default=1.0)
        parser.add_argument('--init1', default='')
        parser.add_argument('--init2', default='')
        parser.add_argument('--pairs', help='Catálogo JSON [{"label", "init1", "init2"}]')
        parser.add_argument('--radius', type=int)
        parser.add_argument('--radius-schedule', help='Radios separados por comas, p. ej. 10,20,30')
        parser.add_argument('--reps', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--threads', type=int)
        parser.add_argument('--allow-infertile', action='store_true')
        parser.add_argument('--label', default='')
        parser.add_argument('--save', action='store_true', help='Guarda cada fila en la base de datos')
        parser.add_argument('--out', help='Archivo CSV de salida')

    def estimates(self, data):
        _, xi1, xi2 = data['pair_list'][0]
        base = ModelConfig(data['dim'], data['lambdas'][0], xi1, xi2)
        return sweep(base, data['radii'], data['reps'], data['seed'], lambdas=data['lambdas'],
                     pairs=data['pair_list'], parallelism=data['threads'],
                     allow_infertile=data['allow_infertile'])

    def handle(self, *args, **options):
        data = self.validate(options)
        try:
            results = self.estimates(data)
        except RichardsonError as exc:
            raise self.usage_error(exc)
        if options.get('save'):
            EstimateRecord.objects.bulk_create(EstimateRecord.from_result(r) for r in results)
            self.stderr.write(f'{len(results)} filas guardadas')
        self.emit(frame_to_csv(results_frame(results)), options.get('out'))
