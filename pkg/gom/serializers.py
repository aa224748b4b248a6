from rest_framework import serializers
from .models import GomModule, ProofRun

class GomModuleSerializer(serializers.ModelSerializer):
  class Meta:
    model = GomModule
    fields = ['id', 'name', 'source', 'created_at']
    read_only_fields = ['created_at']

class NormalizeSerializer(serializers.Serializer):
  module = serializers.CharField(help_text='Имя встроенного или сохранённого модуля')
  expr = serializers.CharField(help_text='Терм в функциональной записи')

class MatchSerializer(NormalizeSerializer):
  pattern = serializers.CharField(help_text='Образец, например conc(X1*,zero,X2*)')
  all = serializers.BooleanField(default=False, help_text='Вернуть все решения')

class ProveSerializer(serializers.Serializer):
  expr = serializers.CharField(help_text='Цель сорта Struc')
  depth = serializers.IntegerField(required=False, min_value=1)
  frontier = serializers.IntegerField(required=False, min_value=1)
  pruning = serializers.BooleanField(required=False, allow_null=True, default=None)
  strategy = serializers.ChoiceField(choices=['bfs', 'dfs'], required=False)
  demorgan = serializers.BooleanField(default=False)

  def to_config(self):
    data = self.validated_data
    config = {
      'max_depth': data.get('depth'),
      'max_frontier': data.get('frontier'),
      'can_react_pruning': data.get('pruning'),
      'strategy': data.get('strategy'),
    }
    return {key: value for key, value in config.items() if value is not None}

class ProofRunSerializer(serializers.ModelSerializer):
  class Meta:
    model = ProofRun
    fields = ['id', 'expression', 'config', 'status', 'steps', 'explored', 'error_message', 'created_at']
