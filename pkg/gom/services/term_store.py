"""
Хранилище термов с максимальным разделением.

Каждый структурно различный терм интернируется ровно один раз, поэтому
структурное равенство двух термов одного хранилища это идентичность ссылок.
"""
import itertools
import threading
from enum import IntEnum

from .exceptions import ArityMismatch, SortMismatch, StoreMismatch, UnknownOperator


class Ordering(IntEnum):
  LESS = -1
  EQUAL = 0
  GREATER = 1


class NodeRef:
  __slots__ = ('id', 'operator', 'children', 'sort', 'decl', 'store', '_printed', '__weakref__')

  def __init__(self, id, decl, children, store):
    self.id = id
    self.decl = decl
    self.operator = decl.name
    self.sort = decl.result_sort
    self.children = children
    self.store = store
    self._printed = None

  def __repr__(self):
    return f'<NodeRef #{self.id} {print_term(self)}>'

  def __str__(self):
    return print_term(self)


class TermStore:
  _store_ids = itertools.count(1)

  def __init__(self, operators):
    """`operators` отображает имена операторов в их объявления."""
    self.operators = dict(operators)
    self.store_id = next(TermStore._store_ids)
    self._table = {}
    self._lock = threading.Lock()

  def __len__(self):
    return len(self._table)

  def __contains__(self, node):
    return isinstance(node, NodeRef) and node.store is self

  def intern(self, operator, children):
    """
    Единственный узел для (operator, children).

    Только для конвейера фабрики: клиентский код строит термы через
    `hook_engine.Factory`, хуки не обходятся.
    """
    children = tuple(children)
    key = (operator, children)
    node = self._table.get(key)
    if node is not None:
      return node

    decl = self.operators.get(operator)
    if decl is None:
      raise UnknownOperator(operator)
    self._check(decl, children)

    with self._lock:
      node = self._table.get(key)
      if node is None:
        node = NodeRef(len(self._table) + 1, decl, children, self)
        self._table[key] = node
    return node

  def find(self, operator, children):
    """Уже интернированный узел для (operator, children) или None."""
    return self._table.get((operator, tuple(children)))

  def _check(self, decl, children):
    for child in children:
      if child.store is not self:
        raise StoreMismatch()
    if decl.variadic:
      for child in children:
        if child.sort != decl.element_sort:
          raise SortMismatch(decl.name, decl.element_sort, child.sort)
      return
    if len(children) != decl.arity:
      raise ArityMismatch(decl.name, decl.arity, len(children))
    for (_, sort), child in zip(decl.slots, children):
      if child.sort != sort:
        raise SortMismatch(decl.name, sort, child.sort)

  def nodes(self):
    return list(self._table.values())


def _same_store(a, b):
  if a.store is not b.store:
    raise StoreMismatch()


def node_equal(a: NodeRef, b: NodeRef) -> bool:
  _same_store(a, b)
  return a is b


def print_term(a: NodeRef) -> str:
  """
  Каноническая функциональная запись: константы без скобок, иначе
  `op(c1,...,cn)` без пробелов. Компаратор опирается именно на этот формат.
  """
  if a._printed is None:
    if not a.children and not a.decl.variadic:
      a._printed = a.operator
    else:
      a._printed = f"{a.operator}({','.join(print_term(c) for c in a.children)})"
  return a._printed


def compare_terms(a: NodeRef, b: NodeRef) -> Ordering:
  _same_store(a, b)
  if a is b:
    return Ordering.EQUAL
  pa, pb = print_term(a), print_term(b)
  if pa < pb:
    return Ordering.LESS
  if pa > pb:
    return Ordering.GREATER
  return Ordering.EQUAL


def sort_of(a: NodeRef) -> str:
  return a.sort
