# cli/management/commands/couple.py
from coupling.coupled import (
    SHARED_FROM_START, VARIANTS, CoupledRun, CouplingMode, lemma1_precondition, summarize,
)
from coupling.inclusions import check_inclusions, check_path_transfer
from engine.growth import StopCondition
from lattice.exceptions import RichardsonError

from cli.base import RichardsonCommand
from cli.forms import CoupleForm
from cli.outputs import to_json
from cli.parsing import format_site_set

NOT_APPLICABLE = 'not-applicable'


class Command(RichardsonCommand):
    help = ('Corre varios procesos acoplados y, con --check-lemma1, verifica las inclusiones '
            'entre los dos primeros; sale con 1 si alguna falla.')
    form_class = CoupleForm

    def add_arguments(self, parser):
        parser.add_argument('--mode', default=SHARED_FROM_START, choices=VARIANTS)
        parser.add_argument('--dim', type=int, default=2)
        parser.add_argument('--lambda', dest='lam', type=float, default=1.0)
        parser.add_argument('--init', action='append', default=[],
                            help='Par "ξ_1|ξ_2", p. ej. "(0,0)|(1,0)"; repetir por proceso')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--horizon', type=int, default=2000, help='Máximo de pasos fusionados')
        parser.add_argument('--radius', type=int)
        parser.add_argument('--check-lemma1', action='store_true')
        parser.add_argument('--out', help='Archivo JSON del reporte')

    def handle(self, *args, **options):
        data = self.validate(options, pairs=options.get('init'))
        configs = data['configs']
        a, b = configs[0], configs[1]
        if data['check_lemma1'] and not lemma1_precondition(a.xi1, a.xi2, b.xi1, b.xi2):
            raise self.usage_error('Los dos primeros pares no cumplen la hipótesis de inclusión')

        mode = CouplingMode.until_tau(configs) if data['until_tau'] else CouplingMode()
        try:
            stop = StopCondition(radius=data['radius'], max_events=data['horizon'])
            coupled = CoupledRun(configs, data['seed'], mode)
            traces = coupled.run(stop)
        except RichardsonError as exc:
            raise self.usage_error(exc)

        report = {
            'header': {
                'artifact': 'richardson-coupling',
                'version': self.version,
                'inputs': {
                    'mode': data['mode'],
                    'dimension': data['dim'],
                    'lambda': data['lam'],
                    'init': [[format_site_set(c.xi1), format_site_set(c.xi2)] for c in configs],
                    'seed': data['seed'],
                    'horizon': data['horizon'],
                    'radius': data['radius'],
                },
            },
            'coupling': summarize(coupled).to_dict(),
        }
        passed = True
        if data['check_lemma1']:
            passed = self._check(coupled, traces, report)
        self.emit(to_json(report), options.get('out'))
        if not passed:
            raise self.negative('Alguna inclusión falla')

    def _check(self, coupled, traces, report) -> bool:
        trace_a, trace_b = traces[0], traces[1]
        if coupled.tau is None and coupled.mode.variant != SHARED_FROM_START:
            report['inclusions'] = NOT_APPLICABLE
            report['reason'] = 'τ no se alcanzó antes del horizonte'
            return True
        since = coupled.tau or 0.0
        if coupled.state_at_tau is not None:
            (a1, a2), (b1, b2) = coupled.state_at_tau[0], coupled.state_at_tau[1]
            if not lemma1_precondition(a1, a2, b1, b2):
                report['inclusions'] = NOT_APPLICABLE
                report['reason'] = 'Los estados en τ no cumplen la hipótesis de inclusión'
                return True
        inclusions = check_inclusions(trace_a, trace_b, since=since)
        report['inclusions'] = inclusions.to_dict()
        passed = inclusions.passed
        if since == 0.0:
            paths = check_path_transfer(trace_a, trace_b)
            report['path_transfer'] = paths.to_dict()
            passed = passed and paths.passed
        return passed
