"""
Комбинаторы обхода над каноническими термами.

Стратегия, применённая к терму, либо успешна и даёт терм (возможно новый),
либо неуспешна; неуспех это значение None, а не исключение. Дети всегда
пересобираются через фабрику, поэтому переписывание ниже корня заново
нормализует всех предков на обратном пути.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from .exceptions import StepBudgetExceeded
from .matcher import apply_substitution, iter_matches
from .term_store import NodeRef

logger = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 1_000_000

FAILURE = None


class Budget:
  def __init__(self, limit=DEFAULT_STEP_BUDGET):
    self.limit = limit
    self.used = 0

  @classmethod
  def from_settings(cls):
    from django.conf import settings

    return cls(settings.GOM_STEP_BUDGET)

  def spend(self):
    self.used += 1
    if self.used > self.limit:
      raise StepBudgetExceeded(self.limit)


class Strategy:
  def run(self, t: NodeRef, factory, budget: Budget) -> Optional[NodeRef]:
    raise NotImplementedError


class Identity(Strategy):
  def run(self, t, factory, budget):
    return t


class Fail(Strategy):
  def run(self, t, factory, budget):
    return FAILURE


@dataclass(frozen=True)
class Sequence(Strategy):
  first: Strategy
  then: Strategy

  def run(self, t, factory, budget):
    r = self.first.run(t, factory, budget)
    if r is FAILURE:
      return FAILURE
    return self.then.run(r, factory, budget)


@dataclass(frozen=True)
class Choice(Strategy):
  first: Strategy
  otherwise: Strategy

  def run(self, t, factory, budget):
    r = self.first.run(t, factory, budget)
    if r is not FAILURE:
      return r
    return self.otherwise.run(t, factory, budget)


@dataclass(frozen=True)
class All(Strategy):
  body: Strategy

  def run(self, t, factory, budget):
    children = []
    for child in t.children:
      r = self.body.run(child, factory, budget)
      if r is FAILURE:
        return FAILURE
      children.append(r)
    if all(a is b for a, b in zip(children, t.children)):
      return t
    return factory.rebuild(t, children)


@dataclass(frozen=True)
class One(Strategy):
  body: Strategy

  def run(self, t, factory, budget):
    for i, child in enumerate(t.children):
      r = self.body.run(child, factory, budget)
      if r is not FAILURE:
        children = list(t.children)
        children[i] = r
        return factory.rebuild(t, children)
    return FAILURE


@dataclass(frozen=True)
class Congruence(Strategy):
  operator: str
  arguments: Tuple[Strategy, ...]

  def run(self, t, factory, budget):
    if t.operator != self.operator or len(t.children) != len(self.arguments):
      return FAILURE
    children = []
    for child, s in zip(t.children, self.arguments):
      r = s.run(child, factory, budget)
      if r is FAILURE:
        return FAILURE
      children.append(r)
    return factory.rebuild(t, children)


@dataclass(frozen=True)
class Rule(Strategy):
  pattern: object
  template: object
  guard: object = None

  def run(self, t, factory, budget):
    for s in iter_matches(self.pattern, t):
      if factory.guard_holds(self.guard, s):
        budget.spend()
        return apply_substitution(self.template, s, factory)
    return FAILURE


@dataclass(eq=False)
class Mu(Strategy):
  """Рекурсивная стратегия: `body` получает саму стратегию."""
  body: Callable[[Strategy], Strategy]
  _unfolded: Strategy = field(default=None, repr=False)

  def run(self, t, factory, budget):
    if self._unfolded is None:
      self._unfolded = self.body(self)
    return self._unfolded.run(t, factory, budget)


@dataclass(frozen=True)
class Hit:
  """Одно совпадение, найденное обходом collect."""
  root: NodeRef
  position: Tuple[int, ...]
  subterm: NodeRef
  substitution: object
  factory: object

  def rebuild(self, replacement: NodeRef) -> NodeRef:
    """Корень с заменой в этой позиции, пересобранный вдоль пути."""
    return replace_at(self.factory, self.root, self.position, replacement)


@dataclass(frozen=True)
class Collect(Strategy):
  pattern: object
  action: Callable[[Hit, 'ResultSink'], None]
  guard: object = None

  def run(self, t, factory, budget):
    sink = ResultSink()
    self.visit(t, (), t, factory, sink)
    return t if sink else FAILURE

  def visit(self, root, position, subterm, factory, sink):
    for s in iter_matches(self.pattern, subterm):
      if factory.guard_holds(self.guard, s):
        self.action(Hit(root, position, subterm, s, factory), sink)


class ResultSink:
  """Упорядоченные результаты без повторов; термы сравниваются по идентичности."""

  def __init__(self):
    self._seen = set()
    self.items = []

  def add(self, item):
    if item not in self._seen:
      self._seen.add(item)
      self.items.append(item)

  def __contains__(self, item):
    return item in self._seen

  def __iter__(self):
    return iter(self.items)

  def __len__(self):
    return len(self.items)


identity = Identity()
fail = Fail()


def sequence(*strategies):
  result = strategies[-1]
  for s in reversed(strategies[:-1]):
    result = Sequence(s, result)
  return result


def choice(*strategies):
  result = strategies[-1]
  for s in reversed(strategies[:-1]):
    result = Choice(s, result)
  return result


def attempt(s):
  return Choice(s, identity)


def top_down(s):
  return Mu(lambda x: Sequence(s, All(x)))


def bottom_up(s):
  return Mu(lambda x: Sequence(All(x), s))


def innermost(s):
  return Mu(lambda x: Sequence(All(x), attempt(Sequence(s, x))))


def apply(s: Strategy, t: NodeRef, factory, budget: Budget = None) -> Optional[NodeRef]:
  """Запуск стратегии; без явного бюджета действует настройка GOM_STEP_BUDGET."""
  return s.run(t, factory, budget if budget is not None else Budget.from_settings())


def positions(t: NodeRef, prefix=()):
  """Пары (позиция, подтерм) в прямом порядке обхода."""
  yield prefix, t
  for i, child in enumerate(t.children):
    yield from positions(child, prefix + (i,))


def subterm_at(t: NodeRef, position):
  for i in position:
    t = t.children[i]
  return t


def replace_at(factory, root: NodeRef, position, replacement: NodeRef) -> NodeRef:
  if not position:
    return replacement
  head, rest = position[0], position[1:]
  children = list(root.children)
  children[head] = replace_at(factory, children[head], rest, replacement)
  return factory.rebuild(root, children)


def collect_everywhere(c: Collect, t: NodeRef, sink: ResultSink, factory) -> ResultSink:
  for position, subterm in positions(t):
    c.visit(t, position, subterm, factory, sink)
  return sink
