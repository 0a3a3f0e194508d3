# cli/forms.py
from django import forms
from django.conf import settings

from coupling.coupled import UNTIL_TAU, VARIANTS
from engine.growth import ModelConfig, reduce_rates
from lattice.exceptions import RichardsonError
from lattice.geometry import MIN_DIMENSION
from randomness.seeds import MAX_SEED
from randomness.streams import CONSTRUCTIONS, SHARED

from .parsing import load_pairs, parse_lambda_grid, parse_radius_schedule, parse_site_set


class SiteSetField(forms.CharField):
    """Campo de texto con sitios ``(0,0);(2,1)``; devuelve un frozenset de tuplas."""

    def __init__(self, **kwargs):
        kwargs.setdefault('required', False)
        kwargs.setdefault('strip', True)
        super().__init__(**kwargs)

    def to_python(self, value):
        value = super().to_python(value)
        try:
            return parse_site_set(value)
        except ValueError as exc:
            raise forms.ValidationError(str(exc))


def _choices(values):
    return [(v, v) for v in values]


class SeedMixin(forms.Form):
    seed = forms.IntegerField(required=False, min_value=0, max_value=MAX_SEED)

    def clean_seed(self):
        seed = self.cleaned_data.get('seed')
        return settings.RICHARDSON_DEFAULT_SEED if seed is None else seed


class PairForm(forms.Form):
    dim = forms.IntegerField(min_value=MIN_DIMENSION, initial=2)
    init1 = SiteSetField()
    init2 = SiteSetField()

    def clean(self):
        cleaned = super().clean()
        d = cleaned.get('dim')
        for name in ('init1', 'init2'):
            sites = cleaned.get(name) or frozenset()
            if d is not None and any(len(x) != d for x in sites):
                self.add_error(name, f'Los sitios deben tener dimensión {d}.')
        xi1, xi2 = cleaned.get('init1'), cleaned.get('init2')
        if xi1 is not None and xi2 is not None and xi1 & xi2:
            raise forms.ValidationError('ξ_1 y ξ_2 no pueden compartir sitios.')
        return cleaned


class FertilityForm(PairForm):

    def clean(self):
        cleaned = super().clean()
        if not self.errors and (not cleaned.get('init1') or not cleaned.get('init2')):
            raise forms.ValidationError('La fertilidad necesita ξ_1 y ξ_2 no vacíos.')
        return cleaned


def _check_radius(radius):
    if radius is not None and radius > settings.RICHARDSON_MAX_COORD:
        raise forms.ValidationError(f'El radio no puede superar {settings.RICHARDSON_MAX_COORD}.')
    return radius


class SimulateForm(SeedMixin, PairForm):
    lambda1 = forms.FloatField(min_value=0, required=False)
    lambda2 = forms.FloatField(min_value=0, required=False)
    radius = forms.IntegerField(min_value=1, required=False)
    max_events = forms.IntegerField(min_value=0, required=False)
    construction = forms.ChoiceField(choices=_choices(CONSTRUCTIONS), required=False)
    snapshot_time = forms.FloatField(min_value=0, required=False)

    def clean_lambda1(self):
        value = self.cleaned_data.get('lambda1')
        return 1.0 if value is None else value

    def clean_lambda2(self):
        value = self.cleaned_data.get('lambda2')
        return 1.0 if value is None else value

    def clean_radius(self):
        return _check_radius(self.cleaned_data.get('radius'))

    def clean_construction(self):
        return self.cleaned_data.get('construction') or SHARED

    def clean(self):
        cleaned = super().clean()
        if self.errors:
            return cleaned
        if cleaned.get('radius') is None and cleaned.get('max_events') is None:
            raise forms.ValidationError('Indique --radius o --max-events.')
        try:
            reduction = reduce_rates(cleaned['lambda1'], cleaned['lambda2'])
            xi1, xi2 = cleaned['init1'], cleaned['init2']
            if reduction.relabel:
                xi1, xi2 = xi2, xi1
            cleaned['reduction'] = reduction
            cleaned['config'] = ModelConfig(cleaned['dim'], reduction.lam, xi1, xi2)
        except RichardsonError as exc:
            raise forms.ValidationError(str(exc))
        return cleaned


class CoupleForm(SeedMixin, forms.Form):
    """Dos o más pares ``ξ_1|ξ_2`` que comparten dimensión y λ."""

    dim = forms.IntegerField(min_value=MIN_DIMENSION, initial=2)
    lam = forms.FloatField(min_value=0, max_value=1, required=False)
    mode = forms.ChoiceField(choices=_choices(VARIANTS), required=False)
    horizon = forms.IntegerField(min_value=0, required=False)
    radius = forms.IntegerField(min_value=1, required=False)
    check_lemma1 = forms.BooleanField(required=False)

    def __init__(self, data=None, pairs=None, **kwargs):
        super().__init__(data, **kwargs)
        self.pairs = list(pairs or [])

    def clean_lam(self):
        value = self.cleaned_data.get('lam')
        return 1.0 if value is None else value

    def clean_mode(self):
        return self.cleaned_data.get('mode') or VARIANTS[0]

    def clean_horizon(self):
        value = self.cleaned_data.get('horizon')
        return 2000 if value is None else value

    def clean_radius(self):
        return _check_radius(self.cleaned_data.get('radius'))

    def clean(self):
        cleaned = super().clean()
        if self.errors:
            return cleaned
        if len(self.pairs) < 2:
            raise forms.ValidationError('Hacen falta al menos dos --init de la forma "ξ_1|ξ_2".')
        configs = []
        for text in self.pairs:
            if text.count('|') != 1:
                raise forms.ValidationError(f'Par mal formado: {text!r}.')
            left, right = text.split('|')
            try:
                xi1, xi2 = parse_site_set(left, cleaned['dim']), parse_site_set(right, cleaned['dim'])
                configs.append(ModelConfig(cleaned['dim'], cleaned['lam'], xi1, xi2))
            except (ValueError, RichardsonError) as exc:
                raise forms.ValidationError(f'Par {text!r}: {exc}')
        cleaned['configs'] = configs
        cleaned['until_tau'] = cleaned['mode'] == UNTIL_TAU
        return cleaned


class EstimateForm(SeedMixin, PairForm):
    lam = forms.FloatField(min_value=0, max_value=1, required=False)
    lambda_grid = forms.CharField(required=False)
    pairs = forms.CharField(required=False)
    radius = forms.IntegerField(min_value=1, required=False)
    radius_schedule = forms.CharField(required=False)
    reps = forms.IntegerField(min_value=1)
    threads = forms.IntegerField(min_value=1, required=False)
    allow_infertile = forms.BooleanField(required=False)
    label = forms.CharField(max_length=100, required=False)

    def clean_lambda_grid(self):
        text = self.cleaned_data.get('lambda_grid')
        if not text:
            return None
        try:
            grid = parse_lambda_grid(text)
        except ValueError as exc:
            raise forms.ValidationError(str(exc))
        if grid[0] < 0 or grid[-1] > 1:
            raise forms.ValidationError('Los valores de λ deben estar en [0, 1].')
        return grid

    def clean_radius_schedule(self):
        text = self.cleaned_data.get('radius_schedule')
        if not text:
            return None
        try:
            radii = parse_radius_schedule(text)
        except ValueError as exc:
            raise forms.ValidationError(str(exc))
        if min(radii) < 1:
            raise forms.ValidationError('Los radios deben ser positivos.')
        for radius in radii:
            _check_radius(radius)
        return radii

    def clean_threads(self):
        value = self.cleaned_data.get('threads')
        return settings.RICHARDSON_DEFAULT_THREADS if value is None else value

    def clean(self):
        cleaned = super().clean()
        if self.errors:
            return cleaned
        if cleaned.get('lambda_grid'):
            cleaned['lambdas'] = cleaned['lambda_grid']
        else:
            cleaned['lambdas'] = [1.0 if cleaned.get('lam') is None else cleaned['lam']]
        if cleaned.get('radius_schedule'):
            cleaned['radii'] = cleaned['radius_schedule']
        elif cleaned.get('radius') is not None:
            cleaned['radii'] = [_check_radius(cleaned['radius'])]
        else:
            raise forms.ValidationError('Indique --radius o --radius-schedule.')
        if cleaned.get('pairs'):
            try:
                cleaned['pair_list'] = load_pairs(cleaned['pairs'], cleaned['dim'])
            except (ValueError, RichardsonError) as exc:
                raise forms.ValidationError(f'Catálogo de pares inválido: {exc}')
        else:
            cleaned['pair_list'] = [(cleaned.get('label') or '', cleaned['init1'], cleaned['init2'])]
        for label, xi1, xi2 in cleaned['pair_list']:
            if not xi1 or not xi2:
                raise forms.ValidationError(f'El par {label or "dado"} necesita ξ_1 y ξ_2 no vacíos.')
            if xi1 & xi2:
                raise forms.ValidationError(f'El par {label or "dado"} tiene sitios compartidos.')
        return cleaned
