"""
Поиск доказательств в системе BV над каноническими структурами.

Поиск идёт от цели (заключения) к единице `o`, правила ai-down, switch и
q-down применяются во всех позициях. Термы канонические (без единиц,
сплющенные, отсортированные), поэтому для par и copar хватает
ассоциативного сопоставления списков, а множество посещённых точное.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

from . import builtins
from .exceptions import InvalidGoalSort
from .gom_parser import parse_pattern
from .strategy_lib import Collect, ResultSink, collect_everywhere
from .term_store import NodeRef, Ordering, compare_terms

logger = logging.getLogger(__name__)

UNIT = 'o'
STRUC = 'Struc'
WRAPPERS = {'par': 'concPar', 'cop': 'concCop', 'seq': 'concSeq'}
LISTS = {lst: wrapper for wrapper, lst in WRAPPERS.items()}

AI_DOWN = 'ai_down'
SWITCH_LEFT = 'switch_left'
SWITCH_RIGHT = 'switch_right'
Q_DOWN = 'q_down'


class ProofStatus(str, Enum):
  PROVED = 'proved'
  NOT_PROVED = 'not-proved-within-bounds'
  REFUTED = 'refuted-by-exhaustion'


@dataclass(frozen=True)
class SearchConfig:
  max_depth: int = 20
  max_frontier: int = 100_000
  can_react_pruning: bool = True
  strategy: str = 'bfs'
  deduplicate: bool = True

  def __post_init__(self):
    if self.max_depth <= 0 or self.max_frontier <= 0:
      raise ValueError('search bounds must be positive')
    if self.strategy not in ('bfs', 'dfs'):
      raise ValueError(f'unknown search strategy {self.strategy!r}')

  @classmethod
  def from_settings(cls, **overrides):
    from django.conf import settings

    values = {
      'max_depth': settings.GOM_BV_MAX_DEPTH,
      'max_frontier': settings.GOM_BV_MAX_FRONTIER,
      'can_react_pruning': settings.GOM_BV_CAN_REACT_PRUNING,
      'strategy': settings.GOM_BV_STRATEGY,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return cls(**values)


@dataclass(frozen=True)
class ProofStep:
  rule: str
  position: Tuple[int, ...]
  before: NodeRef
  after: NodeRef

  def format(self):
    return f'{self.rule} @ {format_position(self.position)} : {self.before} ==> {self.after}'


@dataclass
class ProofTrace:
  goal: NodeRef
  steps: List[ProofStep] = field(default_factory=list)
  status: ProofStatus = ProofStatus.NOT_PROVED
  explored: int = 0
  generated: int = 0

  @property
  def proved(self):
    return self.status == ProofStatus.PROVED

  def summary(self):
    if self.status == ProofStatus.PROVED:
      return f'PROVED in {len(self.steps)} steps'
    if self.status == ProofStatus.REFUTED:
      return f'REFUTED (exhausted {self.explored} states)'
    return 'NOT PROVED (bound)'

  def format(self):
    return '\n'.join([step.format() for step in self.steps] + [self.summary()])


def format_position(position):
  return '.'.join(str(i) for i in position) if position else 'root'


def is_atom(node):
  return node.sort == STRUC and not node.children and not node.decl.variadic and node.operator != UNIT


def is_canonical_structure(node: NodeRef) -> bool:
  """
  Во всех позициях терма списки без единиц, сплющены и отсортированы,
  пустых и одноэлементных обёрток нет.
  """
  stack = [node]
  while stack:
    t = stack.pop()
    stack.extend(t.children)
    if t.operator in WRAPPERS:
      if len(t.children[0].children) < 2:
        return False
    elif t.operator in LISTS:
      wrapper = LISTS[t.operator]
      for child in t.children:
        if child.operator == UNIT or child.operator == wrapper:
          return False
      if t.operator != 'concSeq':
        for left, right in zip(t.children, t.children[1:]):
          if compare_terms(left, right) == Ordering.GREATER:
            return False
  return True


class Prover:
  """Применение правил и поиск над одной фабрикой Struct."""

  def __init__(self, factory, config: SearchConfig = None):
    self.factory = factory
    self.config = config or SearchConfig()
    module = factory.module
    self.unit = factory.build(UNIT, [])
    self._dual_pair = parse_pattern('par(concPar(X1*, x, X2*, y, X3*))', module)
    self._switch_patterns = (
      parse_pattern('par(concPar(X1*, cop(concCop(R*, T*)), X2*, U, X3*))', module),
      parse_pattern('par(concPar(X1*, U, X2*, cop(concCop(R*, T*)), X3*))', module),
    )
    self._par = parse_pattern('par(concPar(X*))', module)

  # вспомогательные конструкторы

  def par(self, elements):
    return self.factory.build('par', [self.factory.build_variadic('concPar', elements)])

  def cop(self, elements):
    return self.factory.build('cop', [self.factory.build_variadic('concCop', elements)])

  def seq(self, elements):
    return self.factory.build('seq', [self.factory.build_variadic('concSeq', elements)])

  def can_react(self, part, u):
    if not self.config.can_react_pruning:
      return True
    return self.factory.registry.predicate('can_react')(list(part), u)

  # правила

  def _collect(self, pattern, action, t):
    sink = ResultSink()
    collect_everywhere(Collect(pattern, action), t, sink, self.factory)
    return sink

  def apply_ai_down(self, t: NodeRef):
    def action(hit, sink):
      s = hit.substitution
      x, y = s.bindings['x'], s.bindings['y']
      if not builtins.is_dual(x, y):
        return
      if not (is_atom(x) or is_atom(y)):
        return
      context = s.star_bindings['X1'] + s.star_bindings['X2'] + s.star_bindings['X3']
      sink.add((hit.position, hit.rebuild(self.par(context))))

    return list(self._collect(self._dual_pair, action, t))

  def switch_successors(self, t: NodeRef):
    """(правило, позиция, результат) для обеих ориентаций switch."""
    results = ResultSink()

    def action(hit, sink):
      s = hit.substitution
      moved_left, moved_right = s.star_bindings['R'], s.star_bindings['T']
      if not moved_left or not moved_right:
        return
      u = s.bindings['U']
      context = s.star_bindings['X1'] + s.star_bindings['X2'] + s.star_bindings['X3']
      for rule, moved, kept in ((SWITCH_LEFT, moved_left, moved_right),
                                (SWITCH_RIGHT, moved_right, moved_left)):
        if not self.can_react(moved, u):
          continue
        # элементы перемещаемой copar-части становятся элементами нового par
        inner = self.par([*moved, u])
        replacement = self.par([self.cop([inner, *kept]), *context])
        sink.add((rule, hit.position, hit.rebuild(replacement)))

    for pattern in self._switch_patterns:
      collect_everywhere(Collect(pattern, action), t, results, self.factory)
    return list(results)

  def apply_switch(self, t: NodeRef):
    sink = ResultSink()
    for _, position, node in self.switch_successors(t):
      sink.add((position, node))
    return list(sink)

  def _seq_splits(self, element):
    """Все способы прочитать элемент как <R;T>, включая единицу с любой стороны."""
    parts = element.children[0].children if element.operator == 'seq' else (element,)
    for k in range(len(parts) + 1):
      yield self.seq(parts[:k]), self.seq(parts[k:])

  def apply_q_down(self, t: NodeRef):
    def action(hit, sink):
      elements = hit.substitution.star_bindings['X']
      for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
          context = elements[:i] + elements[i + 1:j] + elements[j + 1:]
          for r, tt in self._seq_splits(elements[i]):
            for u, v in self._seq_splits(elements[j]):
              merged = self.seq([self.par([r, u]), self.par([tt, v])])
              sink.add((hit.position, hit.rebuild(self.par([merged, *context]))))

    return list(self._collect(self._par, action, t))

  def successors(self, t: NodeRef):
    for position, node in self.apply_ai_down(t):
      yield ProofStep(AI_DOWN, position, t, node)
    for rule, position, node in self.switch_successors(t):
      yield ProofStep(rule, position, t, node)
    for position, node in self.apply_q_down(t):
      yield ProofStep(Q_DOWN, position, t, node)

  # поиск

  def prove(self, goal: NodeRef) -> ProofTrace:
    if goal.sort != STRUC:
      raise InvalidGoalSort(goal.sort)
    cfg = self.config
    trace = ProofTrace(goal)
    if goal is self.unit:
      trace.status = ProofStatus.PROVED
      return trace

    logger.info('proof search for %s (%s, depth %d, frontier %d, pruning %s)',
                goal, cfg.strategy, cfg.max_depth, cfg.max_frontier, cfg.can_react_pruning)
    parents = {goal: None}
    pending = deque([(goal, 0)])
    take = pending.popleft if cfg.strategy == 'bfs' else pending.pop
    seen = 1
    bounded = False
    found = None

    while pending and found is None:
      state, depth = take()
      trace.explored += 1
      if depth >= cfg.max_depth:
        bounded = True
        continue
      for step in self.successors(state):
        trace.generated += 1
        node = step.after
        if cfg.deduplicate and node in parents:
          continue
        if node is self.unit:
          parents.setdefault(node, step)
          found = step
          break
        if seen >= cfg.max_frontier:
          bounded = True
          break
        parents.setdefault(node, step)
        seen += 1
        pending.append((node, depth + 1))

    if found is not None:
      steps = []
      step = found
      while step is not None:
        steps.append(step)
        step = parents[step.before]
      trace.steps = list(reversed(steps))
      trace.status = ProofStatus.PROVED
    elif bounded:
      trace.status = ProofStatus.NOT_PROVED
    else:
      trace.status = ProofStatus.REFUTED
    logger.info('proof search finished: %s after %d explored / %d generated states',
                trace.status.value, trace.explored, trace.generated)
    return trace

  def check_step(self, step: ProofStep) -> bool:
    """Повторно применяет правило к `before` и ищет `after` в позиции `position`."""
    if step.rule == AI_DOWN:
      return (step.position, step.after) in self.apply_ai_down(step.before)
    if step.rule in (SWITCH_LEFT, SWITCH_RIGHT):
      return (step.rule, step.position, step.after) in self.switch_successors(step.before)
    if step.rule == Q_DOWN:
      return (step.position, step.after) in self.apply_q_down(step.before)
    return False


def can_react(part, u, pruning=True) -> bool:
  if not pruning:
    return True
  return builtins.can_react(list(part), u)


def prove(goal: NodeRef, cfg: SearchConfig, factory) -> ProofTrace:
  return Prover(factory, cfg).prove(goal)
