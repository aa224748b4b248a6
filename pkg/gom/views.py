import logging
from rest_framework import viewsets, status, mixins
from rest_framework.views import APIView
from rest_framework.response import Response
from .models import GomModule, ProofRun
from .serializers import (GomModuleSerializer,
                          NormalizeSerializer,
                          MatchSerializer,
                          ProveSerializer,
                          ProofRunSerializer)
from celery.result import AsyncResult
from .celery_tasks import prove_task
from .services.corpus import BUILTIN_MODULES, factory_from_settings, library_from_settings
from .services.exceptions import GomError, GomSyntaxError, ModuleRejected, RecursionBudgetExceeded
from .services.pipeline import match, normalize, solution_dict
from .services.term_store import print_term
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

logger = logging.getLogger(__name__)

ERROR_RESPONSES = {
  400: openapi.Response(description='Неправильный запрос', examples={
    'application/json': {
      'error': "1:5: expected ')', found 'end of input'"
    }
  }),
  422: openapi.Response(description='Нормализация не завершилась', examples={
    'application/json': {
      'error': "normalization of 'not' exceeded 10000 nested hook calls"
    }
  }),
}

def module_library():
  return library_from_settings(GomModule.sources())

def load_module(name):
  """Только встроенные и сохранённые модули, без путей файловой системы."""
  library = module_library()
  if name not in BUILTIN_MODULES and name not in library.sources:
    raise GomModule.DoesNotExist(name)
  return library.load(name)

def run_pipeline(action):
  """Общая обработка ошибок конвейера: 400 для ошибок ввода, 422 для расходимости."""
  try:
    return Response(action(), status=status.HTTP_200_OK)
  except RecursionBudgetExceeded as e:
    return Response({'error': e.message}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
  except ModuleRejected as e:
    return Response({'error': e.message, 'diagnostics': [d.format(e.name) for d in e.diagnostics]},
                    status=status.HTTP_400_BAD_REQUEST)
  except GomSyntaxError as e:
    return Response({'error': str(e)}, status=status.HTTP_400_BAD_REQUEST)
  except GomError as e:
    return Response({'error': e.message, 'code': e.code}, status=status.HTTP_400_BAD_REQUEST)
  except GomModule.DoesNotExist:
    return Response({'error': 'Модуль не найден.'}, status=status.HTTP_404_NOT_FOUND)
  except Exception as e:
    logger.exception('pipeline failure')
    return Response({'error': f'Произошла ошибка: {str(e)}'}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)

class GomModuleViewSet(mixins.ListModelMixin,
                       mixins.CreateModelMixin,
                       mixins.RetrieveModelMixin,
                       viewsets.GenericViewSet):
  queryset = GomModule.objects.all()
  serializer_class = GomModuleSerializer
  lookup_field = 'name'
  http_method_names = ['get', 'post']

  @swagger_auto_schema(
    operation_description='Получить список сохранённых модулей сигнатур',
    operation_summary='Список модулей',
    tags=['Модули сигнатур'],
    responses={200: GomModuleSerializer(many=True)},
  )
  def list(self, request, *args, **kwargs):
    """
    Возвращает список всех сохранённых модулей.
    """
    return super().list(request, *args, **kwargs)

  @swagger_auto_schema(
    operation_description='Сохранить модуль сигнатуры. Текст проверяется разбором, импортом и валидацией.',
    operation_summary='Добавление модуля',
    tags=['Модули сигнатур'],
    request_body=GomModuleSerializer,
    responses={201: GomModuleSerializer}
  )
  def create(self, request, *args, **kwargs):
    """
    Создаёт модуль с уникальным именем; ошибки валидации возвращаются как диагностики.
    """
    return super().create(request, *args, **kwargs)

  @swagger_auto_schema(
    operation_description='Получить исходный текст модуля',
    operation_summary='Данные модуля',
    tags=['Модули сигнатур'],
    responses={200: GomModuleSerializer}
  )
  def retrieve(self, request, *args, **kwargs):
    return super().retrieve(request, *args, **kwargs)

class ModuleCheckView(APIView):
  @swagger_auto_schema(
    operation_description='Проверить встроенный (boolean, struct, nat, struct_neg) или сохранённый модуль',
    operation_summary='Валидация модуля',
    tags=['Модули сигнатур'],
    responses={
      200: openapi.Response(description='Отчёт валидации', examples={
        'application/json': {
          'module': 'Struct',
          'accepted': True,
          'diagnostics': []
        }
      }),
      404: openapi.Response(description='Модуль не найден', examples={
        'application/json': {
          'error': 'Модуль не найден.'
        }
      }),
    }
  )
  def get(self, request, name):
    library = module_library()
    if name not in BUILTIN_MODULES and name not in library.sources:
      return Response({'error': 'Модуль не найден.'}, status=status.HTTP_404_NOT_FOUND)

    def check():
      loaded = library.check(name)
      return {
        'module': loaded.module.name,
        'accepted': loaded.accepted,
        'diagnostics': [d.format(name) for d in loaded.report.diagnostics],
      }

    return run_pipeline(check)

class NormalizeView(APIView):
  @swagger_auto_schema(
    operation_description='Построить каноническую форму терма через хуки модуля',
    operation_summary='Нормализация терма',
    tags=['Термы'],
    request_body=NormalizeSerializer,
    responses={
      200: openapi.Response(description='Каноническая форма', examples={
        'application/json': {
          'term': 'par(concPar(a,b,c))'
        }
      }),
      **ERROR_RESPONSES,
    }
  )
  def post(self, request):
    serializer = NormalizeSerializer(data=request.data)
    if not serializer.is_valid():
      return Response({'error': serializer.errors}, status=status.HTTP_400_BAD_REQUEST)
    data = serializer.validated_data

    def run():
      factory = factory_from_settings(load_module(data['module']))
      return {'term': print_term(normalize(factory, data['expr']))}

    return run_pipeline(run)

class MatchView(APIView):
  @swagger_auto_schema(
    operation_description='Сопоставить образец с канонической формой терма (списки сопоставляются по ассоциативности)',
    operation_summary='Сопоставление с образцом',
    tags=['Термы'],
    request_body=MatchSerializer,
    responses={
      200: openapi.Response(description='Решения', examples={
        'application/json': {
          'solutions': [{'X1*': [], 'X2*': []}],
          'count': 1
        }
      }),
      **ERROR_RESPONSES,
    }
  )
  def post(self, request):
    serializer = MatchSerializer(data=request.data)
    if not serializer.is_valid():
      return Response({'error': serializer.errors}, status=status.HTTP_400_BAD_REQUEST)
    data = serializer.validated_data

    def run():
      factory = factory_from_settings(load_module(data['module']))
      solutions = match(factory, data['pattern'], data['expr'], data['all'])
      return {'solutions': [solution_dict(s) for s in solutions], 'count': len(solutions)}

    return run_pipeline(run)

class ProveView(APIView):
  @swagger_auto_schema(
    operation_description='Запуск фонового поиска доказательства в системе BV',
    operation_summary='Запуск поиска доказательства',
    tags=['Доказательства'],
    request_body=ProveSerializer,
    responses={
      202: openapi.Response(description='Поиск доказательства запущен', examples={
        'application/json': {
          'task_id': '1234567890',
          'run_id': 1,
          'status': 'Поиск доказательства выполняется'
        }
      }),
      400: openapi.Response(description='Неправильный запрос', examples={
        'application/json': {
          'error': 'Некорректные параметры поиска.'
        }
      }),
    }
  )
  def post(self, request):
    serializer = ProveSerializer(data=request.data)
    if not serializer.is_valid():
      return Response({'error': serializer.errors}, status=status.HTTP_400_BAD_REQUEST)

    try:
      run = ProofRun.objects.create(expression=serializer.validated_data['expr'], config=serializer.to_config())
      task = prove_task.delay(run.id, serializer.validated_data['demorgan'])

      return Response({'task_id': task.id, 'run_id': run.id, 'status': 'Поиск доказательства выполняется'},
                      status=status.HTTP_202_ACCEPTED)
    except Exception as e:
      logger.exception('failed to start proof run')
      return Response({'error': f'Произошла ошибка: {str(e)}'}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)

class TaskResultView(APIView):
  @swagger_auto_schema(
    operation_description='Получить статус выполнения поиска доказательства',
    operation_summary='Результат поиска доказательства',
    tags=['Доказательства'],
    manual_parameters=[
      openapi.Parameter(
        'task_id',
        openapi.IN_PATH,
        description='ID задачи для получения статуса',
        type=openapi.TYPE_STRING
      )
    ],
    responses={
      200: openapi.Response(
        description='Статус выполнения задачи',
        examples={
          'application/json': {
            'status': 'Поиск доказательства завершён',
            'data': {
              'run_id': 1,
              'status': 'proved',
              'summary': 'PROVED in 1 steps',
              'steps': [
                {
                  'rule': 'ai_down',
                  'position': [],
                  'before': 'par(concPar(a,neg(a)))',
                  'after': 'o'
                }
              ],
              'explored': 1,
              'generated': 1
            }
          }
        }
      ),
      400: openapi.Response(description='Неизвестное состояние поиска', examples={
        'application/json': {
          'status': 'Неизвестное состояние поиска доказательства'
        }
      })
    }
  )
  def get(self, request, task_id):
    task_result = AsyncResult(task_id)

    if task_result.state == 'PENDING':
      return Response({'status': 'Поиск доказательства в очереди на выполнение'}, status=status.HTTP_200_OK)

    elif task_result.state == 'STARTED':
      return Response({'status': 'Поиск доказательства выполняется'}, status=status.HTTP_200_OK)

    elif task_result.state == 'SUCCESS':
      return Response({'status': 'Поиск доказательства завершён', 'data': task_result.result},
                      status=status.HTTP_200_OK)

    elif task_result.state == 'FAILURE':
      return Response({'status': 'Ошибка поиска доказательства', 'error': str(task_result.result)},
                      status=status.HTTP_500_INTERNAL_SERVER_ERROR)

    return Response({'status': 'Неизвестное состояние поиска доказательства'}, status=status.HTTP_400_BAD_REQUEST)

class ProofRunViewSet(viewsets.ReadOnlyModelViewSet):
  queryset = ProofRun.objects.all()
  serializer_class = ProofRunSerializer

  @swagger_auto_schema(
    operation_description='Получить список запусков поиска доказательств',
    operation_summary='Список запусков',
    tags=['Доказательства'],
    responses={200: ProofRunSerializer(many=True)}
  )
  def list(self, request, *args, **kwargs):
    return super().list(request, *args, **kwargs)

  @swagger_auto_schema(
    operation_description='Получить запуск поиска доказательства с шагами вывода',
    operation_summary='Данные запуска',
    tags=['Доказательства'],
    responses={200: ProofRunSerializer}
  )
  def retrieve(self, request, *args, **kwargs):
    return super().retrieve(request, *args, **kwargs)
