"""
Settings for the relgas app are namespaced in the RELGAS setting.
For example your project's `settings.py` file might look like this:

RELGAS = {
    'RTOL': 1e-10,
    'K_MAX': 64,
}

Any key that is missing falls back to the defaults below. When Django is not
configured at all (the numerical modules imported as a plain library) the
defaults are used as they are.
"""
from django.conf import settings

DEFAULTS = {
    'RTOL': 1e-10,
    'SERIES_MAX_TERMS': 5000,
    'K_MAX': 64,
    'QUAD_RTOL': 1e-13,
    'QUAD_MAX_SUBDIVISIONS': 500,
    'WORKERS': 4,
}


class RelgasSettings:
    def __init__(self, defaults=None):
        self.defaults = defaults or DEFAULTS

    @property
    def user_settings(self):
        if not settings.configured:
            return {}
        return getattr(settings, 'RELGAS', {})

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError("Invalid relgas setting: '%s'" % attr)
        return self.user_settings.get(attr, self.defaults[attr])


relgas_settings = RelgasSettings(DEFAULTS)
