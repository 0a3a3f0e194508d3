from django.apps import AppConfig


class RandomnessConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'randomness'
