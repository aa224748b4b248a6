from django.contrib import admin
from django.utils.html import format_html, format_html_join
from .models import GomModule, ProofRun

@admin.register(GomModule)
class GomModuleAdmin(admin.ModelAdmin):
  list_display = ('name', 'created_at')
  search_fields = ['name']

  def changelist_view(self, request, extra_context=None):
    extra_context = {'title': 'Выберите модуль чтобы изменить'}
    return super(GomModuleAdmin, self).changelist_view(request, extra_context=extra_context)

@admin.register(ProofRun)
class ProofRunAdmin(admin.ModelAdmin):
  list_display = ('id', 'expression', 'status', 'explored', 'get_steps', 'created_at')
  list_filter = ['status']
  readonly_fields = ['steps_table']

  def get_steps(self, obj):
    return len(obj.steps or [])

  get_steps.short_description = 'Шагов'

  def steps_table(self, obj):
    if not obj.steps:
      return '-'
    rows = format_html_join(
      '', '<tr><td>{}</td><td>{}</td><td>{}</td></tr>',
      ((step['rule'], '.'.join(map(str, step['position'])) or 'root', step['after']) for step in obj.steps),
    )
    return format_html('<table>{}</table>', rows)

  steps_table.short_description = 'Вывод'
