from django.core.exceptions import ValidationError
from .services.corpus import library_from_settings
from .services.exceptions import GomError, GomSyntaxError

def validate_gom_source(value):
  from .models import GomModule

  try:
    loaded = library_from_settings(GomModule.sources()).check_text('<source>', value)
  except GomSyntaxError as e:
    raise ValidationError(f'Синтаксическая ошибка: {e}')
  except GomError as e:
    raise ValidationError(f'Модуль не может быть загружен: {e.message}')
  if not loaded.accepted:
    raise ValidationError([d.format('<source>') for d in loaded.report.diagnostics])

def validate_proof_config(value):
  if not isinstance(value, dict):
    raise ValidationError('Параметры поиска должны быть объектом.')
  for key in ('max_depth', 'max_frontier'):
    if key in value and (not isinstance(value[key], int) or value[key] <= 0):
      raise ValidationError(f'{key} должно быть положительным целым числом.')
  if value.get('strategy', 'bfs') not in ('bfs', 'dfs'):
    raise ValidationError('Стратегия поиска должна быть bfs или dfs.')
