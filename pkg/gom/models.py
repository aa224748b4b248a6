from django.db import models
from .validators import validate_gom_source, validate_proof_config

class GomModule(models.Model):
  name = models.CharField(max_length=100, unique=True, verbose_name='Имя модуля')
  source = models.TextField(validators=[validate_gom_source], verbose_name='Исходный текст')
  created_at = models.DateTimeField(auto_now_add=True, verbose_name='Создан')

  class Meta:
    verbose_name = 'Модуль сигнатуры'
    verbose_name_plural = 'Модули сигнатур'
    ordering = ['name']

  def __str__(self):
    return self.name

  @classmethod
  def sources(cls):
    return dict(cls.objects.values_list('name', 'source'))

class ProofRun(models.Model):
  IN_PROGRESS = 'in_progress'
  PROVED = 'proved'
  REFUTED = 'refuted'
  BOUND_EXCEEDED = 'bound_exceeded'
  ERROR = 'error'

  expression = models.TextField(verbose_name='Цель')
  config = models.JSONField(default=dict, blank=True, validators=[validate_proof_config],
                            verbose_name='Параметры поиска')
  status = models.CharField(max_length=50,
                            choices=[(IN_PROGRESS, 'В работе'), (PROVED, 'Доказано'), (REFUTED, 'Опровергнуто'),
                                     (BOUND_EXCEEDED, 'Превышен предел'), (ERROR, 'Ошибка')],
                            default=IN_PROGRESS, verbose_name='Статус')
  steps = models.JSONField(default=list, blank=True, verbose_name='Шаги вывода')
  explored = models.IntegerField(default=0, verbose_name='Просмотрено состояний')
  error_message = models.TextField(blank=True, null=True)
  created_at = models.DateTimeField(auto_now_add=True)

  class Meta:
    verbose_name = 'Поиск доказательства'
    verbose_name_plural = 'Поиски доказательств'
    ordering = ['-created_at']

  def __str__(self):
    return f"Proof of {self.expression}: {self.status}"
