"""
Умные конструкторы. Каждый терм строится через хуки своего оператора,
поэтому всё, что выдаёт фабрика, находится в канонической форме.

  build:  make_before -> make -> make_after
  insert: make_before_insert -> make_insert -> make_after_insert

Клаузы проверяются по порядку текста: срабатывает первая, чьи образцы
сопоставились и условие выполнено; если ни одна не сработала, аргументы
интернируются как есть.
"""
import logging
import threading
from typing import Sequence

from .exceptions import (ArityMismatch, RecursionBudgetExceeded, SortMismatch, UnboundVariable,
                         UnknownOperator)
from .matcher import Appl, Raw, StarVar, Substitution, apply_substitution, match_tuple
from .signature_model import SignatureModule
from .term_store import NodeRef, Ordering, TermStore

logger = logging.getLogger(__name__)

DEFAULT_RECURSION_BUDGET = 10_000


class Factory:
  def __init__(self, module: SignatureModule, store: TermStore = None,
               recursion_budget: int = DEFAULT_RECURSION_BUDGET):
    if recursion_budget <= 0:
      raise ValueError('recursion_budget must be positive')
    self.module = module
    self.store = store if store is not None else TermStore(module.operator_table)
    self.recursion_budget = recursion_budget
    self.registry = module.builtins
    self.hooks = {}
    for hook in module.hooks:
      self.hooks.setdefault((hook.operator, hook.kind), hook)
    self._local = threading.local()
    # списки, выданные insert: их повторная свёртка даёт тот же узел
    self._folded = set()

  def operator(self, name):
    decl = self.module.operator_table.get(name)
    if decl is None:
      raise UnknownOperator(name)
    return decl

  # глубина вложенных входов в конвейер

  def _enter(self, operator):
    local = self._local
    depth = getattr(local, 'depth', 0) + 1
    if depth > self.recursion_budget:
      logger.warning('hook budget of %d exhausted while building %s', self.recursion_budget, operator)
      raise RecursionBudgetExceeded(operator, self.recursion_budget)
    local.depth = depth

  def _leave(self):
    self._local.depth -= 1

  def _guarded(self, operator, pipeline, *args):
    self._enter(operator)
    try:
      return pipeline(*args)
    except RecursionError:
      raise RecursionBudgetExceeded(operator, self.recursion_budget) from None
    finally:
      self._leave()

  # проверки

  def _check_args(self, decl, args):
    if decl.variadic:
      raise ArityMismatch(decl.name, 'a list of', len(args))
    if len(args) != decl.arity:
      raise ArityMismatch(decl.name, decl.arity, len(args))
    for (_, sort), arg in zip(decl.slots, args):
      if arg.sort != sort:
        raise SortMismatch(decl.name, sort, arg.sort)

  def _check_result(self, decl, node):
    if node.sort != decl.result_sort:
      raise SortMismatch(decl.name, decl.result_sort, node.sort)
    return node

  # охранные условия

  def _guard_value(self, arg, s):
    if isinstance(arg, StarVar):
      return s.lookup_star(arg.name)
    return apply_substitution(arg, s, self)

  def guard_holds(self, guard, s: Substitution) -> bool:
    if guard is None:
      return True
    values = [self._guard_value(arg, s) for arg in guard.arguments]
    name = guard.predicate
    if name in ('lt', 'leq', 'gt', 'geq'):
      order = self.registry.comparator(values[0], values[1])
      return {
        'lt': order == Ordering.LESS,
        'leq': order != Ordering.GREATER,
        'gt': order == Ordering.GREATER,
        'geq': order != Ordering.LESS,
      }[name]
    if name == 'is_empty':
      return len(_elements(values[0])) == 0
    if name == 'non_empty':
      return len(_elements(values[0])) > 0
    return bool(self.registry.predicate(name)(*values))

  def _fire(self, hook, subjects, params_bound):
    """Первая клауза, чьи образцы сопоставились и условие выполнено."""
    if hook is None:
      return None
    initial = Substitution(dict(zip(hook.params, params_bound)))
    for clause in hook.body:
      for s in match_tuple(clause.patterns, subjects, initial):
        if self.guard_holds(clause.guard, s):
          return clause, s
    return None

  # конструкторы

  def build(self, operator: str, args: Sequence[NodeRef]) -> NodeRef:
    return self._guarded(operator, self._build, operator, tuple(args))

  def _build(self, operator, args):
    decl = self.operator(operator)
    self._check_args(decl, args)

    fired = self._fire(self.hooks.get((operator, 'make_before')), args, args)
    if fired is not None:
      clause, s = fired
      args = tuple(apply_substitution(item, s, self) for item in clause.action.items)
      self._check_args(decl, args)

    fired = self._fire(self.hooks.get((operator, 'make')), args, args)
    if fired is None:
      node = self.store.intern(operator, args)
    else:
      clause, s = fired
      if isinstance(clause.action, Raw):
        node = self.raw_in_hook(operator, [apply_substitution(c, s, self) for c in clause.action.children])
      else:
        node = apply_substitution(clause.action, s, self)
    self._check_result(decl, node)

    after = self.hooks.get((operator, 'make_after'))
    fired = self._fire(after, (node,), args)
    if fired is not None:
      clause, s = fired
      node = self._check_result(decl, apply_substitution(clause.action, s, self))
    return node

  def empty(self, operator: str) -> NodeRef:
    """Пустой список аргументов вариадического оператора, начало каждой свёртки."""
    decl = self.operator(operator)
    if not decl.variadic:
      raise ArityMismatch(operator, decl.arity, 0)
    node = self.store.intern(operator, ())
    self._folded.add(node)
    return node

  def folded_list(self, operator, elements):
    """Узел списка над `elements`, ранее выданный этой фабрикой, или None."""
    node = self.store.find(operator, elements)
    return node if node in self._folded else None

  def insert(self, operator: str, element: NodeRef, list_node: NodeRef) -> NodeRef:
    return self._guarded(operator, self._insert, operator, element, list_node)

  def _check_insert(self, decl, element, list_node):
    if not decl.variadic:
      raise ArityMismatch(decl.name, decl.arity, 'a list')
    if element.sort != decl.element_sort:
      raise SortMismatch(decl.name, decl.element_sort, element.sort)
    if list_node.operator != decl.name:
      raise SortMismatch(decl.name, decl.result_sort, list_node.operator)

  def _insert(self, operator, element, list_node):
    """
    Конвейер insert. Клауза `raw(head, op(e, tail*))` над уже свёрнутым
    хвостом продолжается как insert(e, tail) в этом же цикле; в `pending`
    лежат головы, которые добавляются после внутренней вставки.
    """
    decl = self.operator(operator)
    pending = []
    try:
      while True:
        self._check_insert(decl, element, list_node)
        pair = (element, list_node)
        fired = self._fire(self.hooks.get((operator, 'make_before_insert')), pair, pair)
        if fired is not None:
          clause, s = fired
          element, list_node = (apply_substitution(item, s, self) for item in clause.action.items)
          self._check_insert(decl, element, list_node)
          pair = (element, list_node)

        fired = self._fire(self.hooks.get((operator, 'make_insert')), pair, pair)
        if fired is None:
          node = self.raw_in_hook(operator, pair, insert=True)
          break
        clause, s = fired
        if not isinstance(clause.action, Raw):
          node = apply_substitution(clause.action, s, self)
          break
        head_template, tail_template = clause.action.children
        head = apply_substitution(head_template, s, self)
        nested = self._nested_insert(operator, tail_template, s)
        if nested is None:
          tail = apply_substitution(tail_template, s, self)
          self._check_insert(decl, head, tail)
          node = self.raw_in_hook(operator, (head, tail), insert=True)
          break
        self._enter(operator)
        pending.append((head, pair))
        element, list_node = nested

      node = self._after_insert(decl, node, pair)
      while pending:
        head, pair = pending.pop()
        self._leave()
        self._check_insert(decl, head, node)
        node = self._after_insert(decl, self.raw_in_hook(operator, (head, node), insert=True), pair)
      return node
    finally:
      for _ in pending:
        self._leave()

  def _nested_insert(self, operator, template, s):
    """(e, tail), если `template` имеет вид `op(e, tail*)`, а хвост уже свёрнут."""
    if not isinstance(template, Appl) or template.operator != operator or len(template.children) != 2:
      return None
    first, rest = template.children
    if isinstance(first, StarVar) or not isinstance(rest, StarVar):
      return None
    seed = self.folded_list(operator, s.lookup_star(rest.name))
    if seed is None:
      return None
    return apply_substitution(first, s, self), seed

  def _after_insert(self, decl, node, pair):
    self._check_result(decl, node)
    fired = self._fire(self.hooks.get((decl.name, 'make_after_insert')), (node,), pair)
    if fired is not None:
      clause, s = fired
      node = self._check_result(decl, apply_substitution(clause.action, s, self))
    self._folded.add(node)
    return node

  def raw_in_hook(self, operator, args, insert=False) -> NodeRef:
    """
    Конструктор по умолчанию из сработавшей клаузы: интернирует, не заходя
    повторно в хук своего оператора. Для insert `args` это (элемент, список),
    элемент добавляется в начало.
    """
    if insert:
      element, list_node = args
      return self.store.intern(operator, (element,) + list_node.children)
    return self.store.intern(operator, tuple(args))

  def build_variadic(self, operator: str, elements: Sequence[NodeRef], seed: NodeRef = None) -> NodeRef:
    """Правая свёртка `insert` от `seed`, по умолчанию от пустого списка."""
    return self._guarded(operator, self._build_variadic, operator, tuple(elements), seed)

  def _build_variadic(self, operator, elements, seed):
    node = self.empty(operator) if seed is None else seed
    for element in reversed(elements):
      node = self.insert(operator, element, node)
    return node

  def build_surface(self, t) -> NodeRef:
    decl = self.operator(t.head)
    children = [self.build_surface(c) for c in t.children]
    if decl.variadic:
      return self.build_variadic(t.head, children)
    if len(children) != decl.arity:
      raise ArityMismatch(t.head, decl.arity, len(children))
    return self.build(t.head, children)

  def rebuild(self, node: NodeRef, children: Sequence[NodeRef]) -> NodeRef:
    """Тот же оператор над новыми детьми, через хуки."""
    if node.decl.variadic:
      return self.build_variadic(node.operator, children)
    return self.build(node.operator, children)


def _elements(value):
  if isinstance(value, NodeRef):
    if not value.decl.variadic:
      raise UnboundVariable(value.operator + '*')
    return value.children
  return value
