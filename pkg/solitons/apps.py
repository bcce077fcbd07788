from django.apps import AppConfig


class SolitonsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'solitons'
    verbose_name = 'Lorentzian gradient Ricci soliton verification'
