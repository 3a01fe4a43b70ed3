from django.apps import AppConfig


class RelgasConfig(AppConfig):
    name = 'relgas'
    verbose_name = 'Relativistic ideal gases'
