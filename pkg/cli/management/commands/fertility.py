# cli/management/commands/fertility.py
from topology.fertility import FERTILE, fertility_verdict

from cli.base import RichardsonCommand
from cli.forms import FertilityForm


class Command(RichardsonCommand):
    help = 'Decide si el par (ξ_1, ξ_2) es fértil; sale con 0 si lo es y con 1 si no.'
    form_class = FertilityForm

    def add_arguments(self, parser):
        parser.add_argument('--dim', type=int, default=2)
        parser.add_argument('--init1', required=True, help='Sitios de tipo 1, p. ej. "(0,0);(2,1)"')
        parser.add_argument('--init2', required=True, help='Sitios de tipo 2')

    def handle(self, *args, **options):
        data = self.validate(options)
        verdict = fertility_verdict(data['init1'], data['init2'])
        self.stdout.write(verdict)
        if verdict != FERTILE:
            raise self.negative(verdict)
