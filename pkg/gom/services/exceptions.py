class GomError(Exception):
  code = 'GomError'

  def __init__(self, message=''):
    super().__init__(message)
    self.message = message


class GomSyntaxError(GomError):
  code = 'SyntaxError'

  def __init__(self, line, column, expected, found=None):
    self.line = line
    self.column = column
    self.expected = tuple(sorted(set(expected)))
    self.found = found
    what = ', '.join(self.expected) or 'nothing'
    text = f'expected {what}'
    if found is not None:
      text += f", found '{found}'"
    super().__init__(text)

  def __str__(self):
    return f'{self.line}:{self.column}: {self.message}'


class StarOutsideVariadic(GomError):
  code = 'StarOutsideVariadic'

  def __init__(self, name, line=0, column=0):
    self.name = name
    self.line = line
    self.column = column
    super().__init__(f"star variable '{name}*' is not a direct argument of a variadic operator")


class UnknownImport(GomError):
  code = 'UnknownImport'

  def __init__(self, name):
    self.name = name
    super().__init__(f"unknown module '{name}' in imports")


class ImportCycle(GomError):
  code = 'ImportCycle'

  def __init__(self, path):
    self.path = list(path)
    super().__init__('import cycle: ' + ' -> '.join(self.path))


class NameClash(GomError):
  code = 'NameClash'

  def __init__(self, operator, modules):
    self.operator = operator
    self.modules = list(modules)
    super().__init__(f"operator '{operator}' declared in several modules: {', '.join(self.modules)}")


class UnknownOperator(GomError):
  code = 'UnknownOperator'

  def __init__(self, name):
    self.name = name
    super().__init__(f"unknown operator '{name}'")


class ArityMismatch(GomError):
  code = 'ArityMismatch'

  def __init__(self, operator, expected, got):
    self.operator = operator
    self.expected = expected
    self.got = got
    super().__init__(f"operator '{operator}' takes {expected} argument(s), got {got}")


class SortMismatch(GomError):
  code = 'SortMismatch'

  def __init__(self, operator, expected, got):
    self.operator = operator
    self.expected = expected
    self.got = got
    super().__init__(f"operator '{operator}' expects sort {expected}, got {got}")


class StoreMismatch(GomError):
  code = 'StoreMismatch'

  def __init__(self):
    super().__init__('terms belong to different stores')


class UnboundVariable(GomError):
  code = 'UnboundVariable'

  def __init__(self, name):
    self.name = name
    super().__init__(f"variable '{name}' is not bound")


class RecursionBudgetExceeded(GomError):
  code = 'RecursionBudgetExceeded'

  def __init__(self, operator, budget):
    self.operator = operator
    self.budget = budget
    super().__init__(f"normalization of '{operator}' exceeded {budget} nested hook calls; "
                     "the hook system is probably not terminating")


class StepBudgetExceeded(GomError):
  code = 'StepBudgetExceeded'

  def __init__(self, budget):
    self.budget = budget
    super().__init__(f'strategy exceeded {budget} rule firings')


class InvalidGoalSort(GomError):
  code = 'InvalidGoalSort'

  def __init__(self, sort):
    self.sort = sort
    super().__init__(f'goal must be of sort Struc, got {sort}')


class ModuleRejected(GomError):
  """Загрузчик отклонил модуль с ошибками валидации."""
  code = 'ModuleRejected'

  def __init__(self, name, diagnostics):
    self.name = name
    self.diagnostics = list(diagnostics)
    super().__init__(f"module '{name}' has {len(self.diagnostics)} error(s)")
