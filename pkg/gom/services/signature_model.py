"""
Модули сигнатур в памяти: сорта, операторы и хуки, разрешение импортов
и валидация.
"""
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Tuple

from .builtins import DEFAULT_REGISTRY, BuiltinRegistry
from .exceptions import ImportCycle, NameClash, UnknownImport
from .matcher import Appl, Raw, StarVar, TupleTemplate, Var, Wildcard, pattern_variables

logger = logging.getLogger(__name__)

FIXED_HOOKS = ('make', 'make_before', 'make_after')
INSERT_HOOKS = ('make_insert', 'make_before_insert', 'make_after_insert')
HOOK_KINDS = FIXED_HOOKS + INSERT_HOOKS

# предикаты, доступные в guard без объявления в factory
CORE_PREDICATES = {
  'lt': 2, 'leq': 2, 'gt': 2, 'geq': 2,
  'is_empty': 1, 'non_empty': 1, 'dual': 2,
}
# аргументы: термы или списки
TERM_PREDICATES = ('lt', 'leq', 'gt', 'geq', 'dual')
LIST_PREDICATES = ('is_empty', 'non_empty')


@dataclass(frozen=True)
class SortDecl:
  name: str
  origin: str = field(default='', compare=False)
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class OperatorDecl:
  name: str
  result_sort: str
  slots: Tuple[Tuple[str, str], ...] = ()
  element_sort: Optional[str] = None
  origin: str = field(default='', compare=False)
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)

  @property
  def variadic(self):
    return self.element_sort is not None

  @property
  def arity(self):
    return None if self.variadic else len(self.slots)


@dataclass(frozen=True)
class GuardExpr:
  predicate: str
  arguments: Tuple = ()
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RuleClause:
  patterns: Tuple
  guard: Optional[GuardExpr]
  action: object
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class HookDecl:
  operator: str
  kind: str
  params: Tuple[str, ...]
  body: Tuple[RuleClause, ...] = ()
  origin: str = field(default='', compare=False)
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)

  @property
  def is_insert(self):
    return self.kind in INSERT_HOOKS

  @property
  def is_after(self):
    return self.kind in ('make_after', 'make_after_insert')

  @property
  def is_before(self):
    return self.kind in ('make_before', 'make_before_insert')


@dataclass(frozen=True)
class SignatureModule:
  name: str
  imports: Tuple[str, ...] = ()
  sorts: Tuple[SortDecl, ...] = ()
  operators: Tuple[OperatorDecl, ...] = ()
  hooks: Tuple[HookDecl, ...] = ()
  factory: Tuple[str, ...] = ()
  builtins: BuiltinRegistry = DEFAULT_REGISTRY
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)

  @cached_property
  def operator_table(self):
    return {op.name: op for op in self.operators}

  @cached_property
  def sort_names(self):
    return {sort.name for sort in self.sorts}

  def hook(self, operator, kind):
    for hook in self.hooks:
      if hook.operator == operator and hook.kind == kind:
        return hook
    return None


@dataclass(frozen=True)
class Diagnostic:
  line: int
  column: int
  code: str
  message: str

  def format(self, filename='<input>'):
    return f'{filename}:{self.line}:{self.column}: {self.code}: {self.message}'


@dataclass(frozen=True)
class ValidationReport:
  module: str
  diagnostics: Tuple[Diagnostic, ...] = ()

  @property
  def accepted(self):
    return not self.diagnostics

  def format(self, filename='<input>'):
    return '\n'.join(d.format(filename) for d in self.diagnostics)


def classify(node, operators):
  """
  Голые идентификаторы констант превращаются в образцы операторов. Тела
  хуков разбираются до разрешения импортов, поэтому классификация
  повторяется, когда таблица операторов заполнена.
  """
  if isinstance(node, Var) and node.name in operators:
    return Appl(node.name, (), node.line, node.column)
  if isinstance(node, Appl):
    return replace(node, children=tuple(classify(c, operators) for c in node.children))
  if isinstance(node, Raw):
    return replace(node, children=tuple(classify(c, operators) for c in node.children))
  if isinstance(node, TupleTemplate):
    return replace(node, items=tuple(classify(c, operators) for c in node.items))
  return node


def classify_hook(hook, operators):
  body = []
  for clause in hook.body:
    guard = clause.guard
    if guard is not None:
      guard = replace(guard, arguments=tuple(classify(a, operators) for a in guard.arguments))
    body.append(replace(
      clause,
      patterns=tuple(classify(p, operators) for p in clause.patterns),
      guard=guard,
      action=classify(clause.action, operators),
    ))
  return replace(hook, body=tuple(body))


def resolve_imports(module: SignatureModule, available) -> SignatureModule:
  """
  Модуль, таблицы которого включают все транзитивно импортированные
  объявления. `available` это набор модулей или словарь имя -> модуль.
  """
  if isinstance(available, dict):
    by_name = dict(available)
  else:
    by_name = {m.name: m for m in available}
  by_name.setdefault(module.name, module)

  order = []
  visiting = []
  done = set()

  def visit(current):
    if current.name in visiting:
      start = visiting.index(current.name)
      raise ImportCycle(visiting[start:])
    if current.name in done:
      return
    visiting.append(current.name)
    for name in current.imports:
      if name not in by_name:
        raise UnknownImport(name)
      visit(by_name[name])
    visiting.pop()
    done.add(current.name)
    order.append(current)

  visit(module)
  if len(order) == 1:
    return module

  sorts, operators, hooks, factory = [], [], [], []
  table = {}
  seen_sorts = set()
  # собственные объявления модуля идут первыми
  for source in [order[-1]] + order[:-1]:
    for sort in source.sorts:
      if sort.name not in seen_sorts:
        seen_sorts.add(sort.name)
        sorts.append(sort if sort.origin else replace(sort, origin=source.name))
    for op in source.operators:
      origin = op.origin or source.name
      known = table.get(op.name)
      if known is not None:
        if known.origin != origin:
          raise NameClash(op.name, [known.origin, origin])
        if origin != source.name:
          continue
      op = replace(op, origin=origin)
      table.setdefault(op.name, op)
      # повтор внутри одного модуля оставляем для validate
      operators.append(op)
    for hook in source.hooks:
      origin = hook.origin or source.name
      if origin != source.name and any(h.origin == origin and h == hook for h in hooks):
        continue
      hooks.append(replace(hook, origin=origin))
    for name in source.factory:
      if name not in factory:
        factory.append(name)

  resolved = replace(
    module,
    sorts=tuple(sorts),
    operators=tuple(operators),
    hooks=tuple(classify_hook(h, table) for h in hooks),
    factory=tuple(factory),
  )
  logger.debug('module %s resolved with %d imported module(s)', module.name, len(order) - 1)
  return resolved


class _Validator:
  def __init__(self, module):
    self.module = module
    self.operators = module.operator_table
    self.sorts = module.sort_names
    self.list_sorts = {op.result_sort for op in module.operators if op.variadic}
    self.diagnostics = []

  def error(self, node, code, message):
    self.diagnostics.append(Diagnostic(getattr(node, 'line', 0), getattr(node, 'column', 0), code, message))

  def run(self):
    self.check_sorts()
    self.check_operators()
    self.check_factory()
    self.check_hooks()
    self.diagnostics.sort(key=lambda d: (d.line, d.column, d.code, d.message))
    return ValidationReport(self.module.name, tuple(self.diagnostics))

  def check_sorts(self):
    seen = {}
    for sort in self.module.sorts:
      if sort.name in seen and seen[sort.name] == sort.origin:
        self.error(sort, 'DuplicateSort', f"sort '{sort.name}' declared twice")
      seen[sort.name] = sort.origin

  def check_operators(self):
    seen = set()
    for op in self.module.operators:
      if op.name in seen:
        self.error(op, 'DuplicateOperator', f"operator '{op.name}' declared twice")
      seen.add(op.name)
      if op.result_sort not in self.sorts:
        self.error(op, 'UnknownSort', f"unknown sort '{op.result_sort}' in result of '{op.name}'")
      if op.variadic:
        if op.element_sort not in self.sorts:
          self.error(op, 'UnknownSort', f"unknown sort '{op.element_sort}' in arguments of '{op.name}'")
        continue
      slot_names = set()
      for slot, sort in op.slots:
        if slot in slot_names:
          self.error(op, 'DuplicateSlot', f"slot '{slot}' repeated in '{op.name}'")
        slot_names.add(slot)
        if sort not in self.sorts:
          self.error(op, 'UnknownSort', f"unknown sort '{sort}' in slot '{slot}' of '{op.name}'")

  def check_factory(self):
    known = self.module.builtins.names()
    for name in self.module.factory:
      if name not in known:
        self.error(self.module, 'UnknownBuiltin', f"unknown factory builtin '{name}'")

  def check_hooks(self):
    seen = set()
    for hook in self.module.hooks:
      op = self.operators.get(hook.operator)
      if op is None:
        self.error(hook, 'UnknownOperator', f"hook on unknown operator '{hook.operator}'")
        continue
      key = (hook.operator, hook.kind)
      if key in seen:
        self.error(hook, 'DuplicateHook', f"second {hook.kind} hook for '{hook.operator}'")
      seen.add(key)
      if hook.is_insert != op.variadic:
        expected = 'variadic' if hook.is_insert else 'fixed-arity'
        self.error(hook, 'HookKindMismatch',
                   f"{hook.kind} hook requires a {expected} operator, '{op.name}' is not")
        continue
      expected_params = 2 if hook.is_insert else op.arity
      if len(hook.params) != expected_params:
        self.error(hook, 'HookArity',
                   f"{hook.kind} hook of '{op.name}' takes {expected_params} parameter(s), got {len(hook.params)}")
        continue
      for param in hook.params:
        if param in self.operators:
          self.error(hook, 'ParamShadowsOperator', f"hook parameter '{param}' names an operator")
      for clause in hook.body:
        self.check_clause(hook, op, clause)

  def check_clause(self, hook, op, clause):
    expected = 1 if hook.is_after else len(hook.params)
    if len(clause.patterns) != expected:
      self.error(clause, 'ClauseArity',
                 f'{hook.kind} clause needs {expected} pattern(s), got {len(clause.patterns)}')
    names, stars = set(hook.params), set()
    for pattern in clause.patterns:
      self.check_pattern(pattern, top=True)
      n, s = pattern_variables(pattern)
      names |= n
      stars |= s
    if clause.guard is not None:
      self.check_guard(clause.guard, names, stars, self.variable_sorts(hook, op, clause))
    self.check_action(hook, op, clause.action, names, stars)

  def variable_sorts(self, hook, op, clause):
    """Сорта переменных клаузы: параметры хука и переменные образцов."""
    params = (op.element_sort, op.result_sort) if op.variadic else tuple(sort for _, sort in op.slots)
    sorts = dict(zip(hook.params, params))
    tops = (op.result_sort,) if hook.is_after else params
    for pattern, sort in zip(clause.patterns, tops):
      self._bind_sorts(pattern, sort, sorts)
    return sorts

  def _bind_sorts(self, p, sort, sorts):
    if isinstance(p, Var):
      sorts.setdefault(p.name, sort)
    elif isinstance(p, Appl):
      decl = self.operators.get(p.operator)
      if decl is None:
        return
      if decl.variadic:
        child_sorts = [decl.element_sort] * len(p.children)
      else:
        child_sorts = [s for _, s in decl.slots]
      for child, child_sort in zip(p.children, child_sorts):
        self._bind_sorts(child, child_sort, sorts)

  def is_list_argument(self, arg, sorts):
    if isinstance(arg, Var):
      return sorts.get(arg.name) in self.list_sorts
    if isinstance(arg, Appl):
      decl = self.operators.get(arg.operator)
      return decl is not None and decl.variadic
    return False

  def check_pattern(self, p, top=False, variadic_parent=False):
    if isinstance(p, StarVar):
      if not variadic_parent:
        self.error(p, 'StarOutsideVariadic', f"star variable '{p.name}*' outside a variadic argument list")
    elif isinstance(p, (Raw, TupleTemplate)):
      self.error(p, 'RawOutsideAction', 'raw(...) and tuples are only allowed as clause actions')
    elif isinstance(p, Appl):
      decl = self.operators.get(p.operator)
      if decl is None:
        self.error(p, 'UnknownOperator', f"unknown operator '{p.operator}'")
        return
      if not decl.variadic and len(p.children) != decl.arity:
        self.error(p, 'ArityMismatch', f"'{p.operator}' takes {decl.arity} argument(s), got {len(p.children)}")
      for child in p.children:
        self.check_pattern(child, variadic_parent=decl.variadic)

  def check_template(self, t, names, stars, variadic_parent=False):
    if isinstance(t, Wildcard):
      self.error(t, 'WildcardInTemplate', "'_' cannot be instantiated")
    elif isinstance(t, Var):
      if t.name not in names:
        self.error(t, 'UnboundVariable', f"variable '{t.name}' is not bound")
    elif isinstance(t, StarVar):
      if not variadic_parent:
        self.error(t, 'StarOutsideVariadic', f"star variable '{t.name}*' outside a variadic argument list")
      elif t.name not in stars and t.name not in names:
        self.error(t, 'UnboundVariable', f"variable '{t.name}*' is not bound")
    elif isinstance(t, (Raw, TupleTemplate)):
      self.error(t, 'RawOutsideAction', 'raw(...) and tuples are only allowed as clause actions')
    elif isinstance(t, Appl):
      decl = self.operators.get(t.operator)
      if decl is None:
        self.error(t, 'UnknownOperator', f"unknown operator '{t.operator}'")
        return
      if not decl.variadic and len(t.children) != decl.arity:
        self.error(t, 'ArityMismatch', f"'{t.operator}' takes {decl.arity} argument(s), got {len(t.children)}")
      for child in t.children:
        self.check_template(child, names, stars, variadic_parent=decl.variadic)

  def check_guard(self, guard, names, stars, sorts):
    predicate = guard.predicate
    arity = CORE_PREDICATES.get(predicate)
    if arity is None:
      if predicate not in self.module.factory or predicate not in self.module.builtins.predicates:
        self.error(guard, 'UnknownPredicate', f"predicate '{predicate}' is neither core nor a declared factory builtin")
        return
    elif len(guard.arguments) != arity:
      self.error(guard, 'ArityMismatch', f"predicate '{predicate}' takes {arity} argument(s)")
    for arg in guard.arguments:
      if isinstance(arg, StarVar):
        if arg.name not in stars and arg.name not in names:
          self.error(arg, 'UnboundVariable', f"variable '{arg.name}*' is not bound")
        if predicate in TERM_PREDICATES:
          self.error(arg, 'GuardArgumentKind', f"predicate '{predicate}' compares terms, got '{arg.name}*'")
        continue
      self.check_template(arg, names, stars)
      if predicate in LIST_PREDICATES and not self.is_list_argument(arg, sorts):
        self.error(arg, 'GuardArgumentKind', f"predicate '{predicate}' needs a list or a star variable")

  def check_action(self, hook, op, action, names, stars):
    if isinstance(action, Raw):
      if hook.kind not in ('make', 'make_insert'):
        self.error(action, 'RawOutsideAction', f'raw(...) is not allowed in {hook.kind} hooks')
        return
      expected = 2 if hook.is_insert else op.arity
      if len(action.children) != expected:
        self.error(action, 'ArityMismatch', f'raw(...) of {op.name} takes {expected} argument(s)')
      for child in action.children:
        self.check_template(child, names, stars)
    elif isinstance(action, TupleTemplate):
      if not hook.is_before:
        self.error(action, 'RawOutsideAction', 'argument tuples are only produced by make_before hooks')
        return
      if len(action.items) != len(hook.params):
        self.error(action, 'ClauseArity', f'{hook.kind} must produce {len(hook.params)} argument(s)')
      for item in action.items:
        self.check_template(item, names, stars)
    else:
      if hook.is_before:
        self.error(action, 'ClauseArity', f'{hook.kind} actions must be argument tuples')
      self.check_template(action, names, stars)


def validate(module: SignatureModule) -> ValidationReport:
  report = _Validator(module).run()
  logger.debug('module %s validated: %d diagnostic(s)', module.name, len(report.diagnostics))
  return report
