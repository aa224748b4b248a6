"""
Закрытый реестр функций factory, доступных хукам: компаратор термов и
именованные предикаты для условий `where`.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict

from .term_store import compare_terms

NEGATION = 'neg'
UNIT = 'o'


def is_dual(t1, t2, negation=NEGATION):
  """Один терм совпадает с другим под ровно одним отрицанием."""
  return ((t2.operator == negation and t2.children[0] is t1)
          or (t1.operator == negation and t1.children[0] is t2))


def literals(nodes, negation=NEGATION, unit=UNIT):
  """
  Пары (имя атома, полярность), встречающиеся в термах. Атомы это
  константы, кроме единицы; под отрицанием полярность False.
  """
  found = set()
  stack = [(node, True) for node in nodes]
  while stack:
    node, positive = stack.pop()
    if node.operator == negation:
      stack.append((node.children[0], not positive))
    elif not node.children and not node.decl.variadic:
      if node.operator != unit:
        found.add((node.operator, positive))
    else:
      stack.extend((child, positive) for child in node.children)
  return found


def can_react(part, u, negation=NEGATION, unit=UNIT):
  """Какой-то атом из `part` встречает в `u` двойственный себе."""
  if not isinstance(part, (list, tuple)):
    part = (part,)
  in_u = literals((u,), negation, unit)
  return any((atom, not positive) in in_u for atom, positive in literals(part, negation, unit))


@dataclass(frozen=True)
class BuiltinRegistry:
  comparator: Callable = compare_terms
  predicates: Dict[str, Callable] = field(default_factory=lambda: {
    'dual': is_dual,
    'can_react': can_react,
  })

  def names(self):
    return {'compare_terms', *self.predicates}

  def predicate(self, name):
    return self.predicates[name]


DEFAULT_REGISTRY = BuiltinRegistry()
