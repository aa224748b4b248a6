from django.apps import AppConfig


class GomConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gom'
    verbose_name = 'Сигнатуры и доказательства'
