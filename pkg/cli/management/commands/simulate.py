# cli/management/commands/simulate.py
import logging

from django.conf import settings

from engine.growth import StopCondition, simulate, snapshot
from lattice.exceptions import RichardsonError
from randomness.streams import CONSTRUCTIONS, SHARED

from cli.base import RichardsonCommand
from cli.forms import SimulateForm
from cli.outputs import finite_or_never, snapshot_grid, to_json, trace_document
from cli.parsing import format_site_set

logger = logging.getLogger(__name__)


class Command(RichardsonCommand):
    help = 'Simula una corrida del modelo de dos tipos y escribe la traza y una instantánea.'
    form_class = SimulateForm

    def add_arguments(self, parser):
        parser.add_argument('--dim', type=int, default=2)
        parser.add_argument('--lambda1', type=float, default=1.0)
        parser.add_argument('--lambda2', type=float, default=1.0)
        parser.add_argument('--init1', default='')
        parser.add_argument('--init2', default='')
        parser.add_argument('--radius', type=int)
        parser.add_argument('--max-events', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--construction', default=SHARED, choices=CONSTRUCTIONS)
        parser.add_argument('--trace', help='Archivo JSON de la traza')
        parser.add_argument('--snapshot', help='Archivo de texto con la rejilla final')
        parser.add_argument('--snapshot-time', type=float,
                            help='Instante de la instantánea (por defecto, el final)')

    def handle(self, *args, **options):
        data = self.validate(options)
        config, reduction = data['config'], data['reduction']
        try:
            stop = StopCondition(data['radius'], data['max_events'])
            trace = simulate(config, data['seed'], stop, data['construction'],
                             block=settings.RICHARDSON_STREAM_BLOCK)
        except RichardsonError as exc:
            raise self.usage_error(exc)
        logger.info('Corrida %s: %s tras %d eventos', config.digest(), trace.outcome, len(trace.events))

        inputs = {
            'dimension': data['dim'],
            'lambda1': data['lambda1'],
            'lambda2': data['lambda2'],
            'init1': format_site_set(data['init1']),
            'init2': format_site_set(data['init2']),
            'radius': data['radius'],
            'max_events': data['max_events'],
            'seed': data['seed'],
            'construction': data['construction'],
            'snapshot_time': data.get('snapshot_time'),
            'stream_block': settings.RICHARDSON_STREAM_BLOCK,
        }
        document = trace_document(trace, inputs, reduction.to_dict(), self.version)
        if options.get('trace'):
            self.emit(to_json(document), options['trace'])

        when = data.get('snapshot_time')
        gamma1, gamma2 = snapshot(trace, trace.horizon if when is None else when)
        if options.get('snapshot'):
            self.emit(snapshot_grid(gamma1, gamma2), options['snapshot'])

        self.stdout.write(to_json({
            'outcome': trace.outcome,
            'n_events': len(trace.events),
            'horizon': finite_or_never(trace.horizon),
            'final_time': trace.events[-1].time if trace.events else 0.0,
            'gamma1': len(gamma1),
            'gamma2': len(gamma2),
            'relabel': reduction.relabel,
            'config_digest': config.digest(),
        }), ending='')
