# cli/base.py
import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from lattice.exceptions import RichardsonError

from .outputs import write_text

logger = logging.getLogger(__name__)

NEGATIVE = 1
USAGE = 2
IO_ERROR = 3


class RichardsonCommand(BaseCommand):
    """Base de los comandos: valida con un formulario y traduce errores a códigos de salida.

    0 éxito, 1 veredicto negativo, 2 error de uso o de configuración, 3 error
    de entrada/salida.
    """

    form_class = None

    def form_data(self, options) -> dict:
        return {k: v for k, v in options.items() if v is not None}

    def validate(self, options, **kwargs) -> dict:
        try:
            form = self.form_class(self.form_data(options), **kwargs)
            valid = form.is_valid()
        except OSError as exc:
            raise CommandError(f'No se pudo leer la entrada: {exc}', returncode=IO_ERROR)
        if not valid:
            errors = '; '.join(
                f'{field}: {" ".join(messages)}' if field != '__all__' else ' '.join(messages)
                for field, messages in form.errors.items()
            )
            raise CommandError(f'Entrada inválida: {errors}', returncode=USAGE)
        logger.info('%s con %s', self.__module__.rsplit('.', 1)[-1],
                    {k: v for k, v in form.cleaned_data.items() if not k.startswith('_')})
        return form.cleaned_data

    def usage_error(self, exc: RichardsonError | str):
        return CommandError(str(exc), returncode=USAGE)

    def negative(self, message: str):
        return CommandError(message, returncode=NEGATIVE)

    def emit(self, text: str, path: str | None = None) -> None:
        """Escribe ``text`` en ``path`` o, si no hay ruta, en la salida estándar."""
        if not path:
            self.stdout.write(text, ending='')
            return
        try:
            write_text(path, text)
        except OSError as exc:
            raise CommandError(f'No se pudo escribir {path}: {exc}', returncode=IO_ERROR)

    @property
    def version(self) -> str:
        return settings.RICHARDSON_VERSION
