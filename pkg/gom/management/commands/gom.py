from enum import IntEnum

from django.core.management.base import BaseCommand, CommandError

from gom.services.bv_prover import ProofStatus, SearchConfig
from gom.services.corpus import factory_from_settings, library_from_settings
from gom.services.exceptions import (ArityMismatch, GomError, GomSyntaxError, ModuleRejected,
                                     RecursionBudgetExceeded, SortMismatch, StarOutsideVariadic,
                                     UnknownOperator)
from gom.services.pipeline import match, normalize, prove
from gom.services.term_store import print_term


class ExitCode(IntEnum):
  OK = 0
  NEGATIVE = 1
  INPUT_ERROR = 2
  DIVERGENCE = 3
  BOUND = 4


class Command(BaseCommand):
  help = 'Проверка сигнатур, нормализация и сопоставление термов, поиск доказательств в BV'

  def add_arguments(self, parser):
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', help='Проверить модуль сигнатуры')
    check.add_argument('module', help='Путь к .gom файлу или имя встроенного модуля')

    norm = commands.add_parser('norm', help='Каноническая форма терма')
    norm.add_argument('module')
    norm.add_argument('--expr', required=True)

    match_cmd = commands.add_parser('match', help='Сопоставление образца с термом')
    match_cmd.add_argument('module')
    match_cmd.add_argument('--pattern', required=True)
    match_cmd.add_argument('--expr', required=True)
    match_cmd.add_argument('--all', action='store_true', dest='all_solutions')

    prove_cmd = commands.add_parser('prove', help='Поиск доказательства в системе BV')
    prove_cmd.add_argument('--expr', required=True)
    prove_cmd.add_argument('--depth', type=int)
    prove_cmd.add_argument('--frontier', type=int)
    prove_cmd.add_argument('--no-pruning', action='store_true')
    prove_cmd.add_argument('--dfs', action='store_true')
    prove_cmd.add_argument('--demorgan', action='store_true',
                           help='Загрузить struct_neg с хуком де Моргана для neg')

  def handle(self, *args, **options):
    handler = getattr(self, 'handle_' + options['command'])
    code = handler(options)
    if code != ExitCode.OK:
      raise SystemExit(int(code))

  # вспомогательные методы

  def fail(self, message, code):
    raise CommandError(message, returncode=int(code))

  def load(self, ref):
    library = library_from_settings()
    try:
      return library.load(ref)
    except OSError as e:
      self.fail(f'{ref}: {e.strerror or e}', ExitCode.INPUT_ERROR)
    except GomSyntaxError as e:
      self.fail(f'{ref}:{e.line}:{e.column}: {e.code}: {e.message}', ExitCode.INPUT_ERROR)
    except ModuleRejected as e:
      for diagnostic in e.diagnostics:
        self.stderr.write(diagnostic.format(ref))
      self.fail(str(e), ExitCode.INPUT_ERROR)
    except GomError as e:
      self.fail(f'{ref}: {e.code}: {e.message}', ExitCode.INPUT_ERROR)

  def factory(self, ref):
    return factory_from_settings(self.load(ref))

  # команды

  def handle_check(self, options):
    ref = options['module']
    library = library_from_settings()
    try:
      loaded = library.check(ref)
    except OSError as e:
      self.fail(f'{ref}: {e.strerror or e}', ExitCode.INPUT_ERROR)
    except GomSyntaxError as e:
      self.stderr.write(f'{ref}:{e.line}:{e.column}: {e.code}: {e.message}')
      return ExitCode.INPUT_ERROR
    except GomError as e:
      self.stderr.write(f'{ref}: {e.code}: {e.message}')
      return ExitCode.INPUT_ERROR
    if not loaded.accepted:
      self.stderr.write(loaded.report.format(loaded.filename))
      return ExitCode.NEGATIVE
    return ExitCode.OK

  def handle_norm(self, options):
    factory = self.factory(options['module'])
    try:
      node = normalize(factory, options['expr'])
    except GomSyntaxError as e:
      self.fail(str(e), ExitCode.INPUT_ERROR)
    except RecursionBudgetExceeded as e:
      self.fail(e.message, ExitCode.DIVERGENCE)
    except (ArityMismatch, SortMismatch, UnknownOperator) as e:
      self.stderr.write(e.message)
      return ExitCode.NEGATIVE
    self.stdout.write(print_term(node))
    return ExitCode.OK

  def handle_match(self, options):
    factory = self.factory(options['module'])
    all_solutions = options['all_solutions']
    try:
      solutions = match(factory, options['pattern'], options['expr'], all_solutions)
    except (GomSyntaxError, StarOutsideVariadic, UnknownOperator) as e:
      self.fail(str(e), ExitCode.INPUT_ERROR)
    except RecursionBudgetExceeded as e:
      self.fail(e.message, ExitCode.DIVERGENCE)
    except GomError as e:
      self.stderr.write(e.message)
      return ExitCode.NEGATIVE
    if not solutions:
      self.stdout.write('no match')
      return ExitCode.NEGATIVE
    for s in solutions:
      self.stdout.write(s.format())
    if all_solutions:
      self.stdout.write(f'{len(solutions)} solution(s)')
    return ExitCode.OK

  def handle_prove(self, options):
    try:
      config = SearchConfig.from_settings(
        max_depth=options['depth'],
        max_frontier=options['frontier'],
        can_react_pruning=False if options['no_pruning'] else None,
        strategy='dfs' if options['dfs'] else None,
      )
    except ValueError as e:
      self.fail(str(e), ExitCode.INPUT_ERROR)
    factory = self.factory('struct_neg' if options['demorgan'] else 'struct')
    try:
      trace = prove(factory, options['expr'], config)
    except RecursionBudgetExceeded as e:
      self.fail(e.message, ExitCode.DIVERGENCE)
    except GomError as e:
      self.fail(str(e), ExitCode.INPUT_ERROR)
    self.stdout.write(trace.format())
    return {
      ProofStatus.PROVED: ExitCode.OK,
      ProofStatus.REFUTED: ExitCode.NEGATIVE,
      ProofStatus.NOT_PROVED: ExitCode.BOUND,
    }[trace.status]
