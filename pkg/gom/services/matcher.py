"""
Сопоставление образцов с каноническими термами.

Операторы фиксированной арности сопоставляются синтаксически, аргументы
вариадических операторов сопоставляются по модулю ассоциативности с
нейтральным элементом (списочное сопоставление): переменные-звёздочки
связываются с подсписками, возможно пустыми.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .exceptions import UnboundVariable
from .term_store import NodeRef, print_term


@dataclass(frozen=True)
class Wildcard:
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
  name: str
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class StarVar:
  name: str
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Appl:
  operator: str
  children: Tuple = ()
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Raw:
  """Действие `raw(...)` клаузы хука: конструктор без нормализации."""
  children: Tuple = ()
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TupleTemplate:
  """Кортеж аргументов, который выдают клаузы make_before и make_before_insert."""
  items: Tuple = ()
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Substitution:
  bindings: Dict[str, NodeRef] = field(default_factory=dict)
  star_bindings: Dict[str, Tuple[NodeRef, ...]] = field(default_factory=dict)

  def bind(self, name, node):
    bindings = dict(self.bindings)
    bindings[name] = node
    return Substitution(bindings, self.star_bindings)

  def bind_star(self, name, nodes):
    star_bindings = dict(self.star_bindings)
    star_bindings[name] = tuple(nodes)
    return Substitution(self.bindings, star_bindings)

  def merged(self, other):
    return Substitution({**self.bindings, **other.bindings},
                        {**self.star_bindings, **other.star_bindings})

  def lookup(self, name):
    if name not in self.bindings:
      raise UnboundVariable(name)
    return self.bindings[name]

  def lookup_star(self, name):
    if name in self.star_bindings:
      return self.star_bindings[name]
    # `l*` раскрывает аргументы списка, связанного целиком
    if name in self.bindings and self.bindings[name].decl.variadic:
      return self.bindings[name].children
    raise UnboundVariable(name + '*')

  def format(self):
    """Пары `name=term` по имени, связи звёздочек в виде `[t,...,t]`."""
    parts = []
    for name, node in self.bindings.items():
      parts.append((name, f'{name}={print_term(node)}'))
    for name, nodes in self.star_bindings.items():
      parts.append((name, f"{name}*=[{','.join(print_term(n) for n in nodes)}]"))
    return ' '.join(text for _, text in sorted(parts))


def pattern_variables(pattern):
  """Имена, которые связывает образец: (переменные, переменные-звёздочки)."""
  names, stars = set(), set()

  def walk(p):
    if isinstance(p, Var):
      names.add(p.name)
    elif isinstance(p, StarVar):
      stars.add(p.name)
    elif isinstance(p, (Appl, Raw)):
      for child in p.children:
        walk(child)
    elif isinstance(p, TupleTemplate):
      for item in p.items:
        walk(item)

  walk(pattern)
  return names, stars


def _match(p, subject: NodeRef, s: Substitution) -> Iterator[Substitution]:
  if isinstance(p, Wildcard):
    yield s
  elif isinstance(p, Var):
    bound = s.bindings.get(p.name)
    if bound is None:
      yield s.bind(p.name, subject)
    elif bound is subject:
      yield s
  elif isinstance(p, Appl):
    if p.operator != subject.operator:
      return
    if subject.decl.variadic:
      yield from _match_list(p.children, 0, subject.children, 0, s)
    elif len(p.children) == len(subject.children):
      yield from _match_sequence(p.children, subject.children, 0, s)


def _match_sequence(patterns, subjects, index, s):
  if index == len(patterns):
    yield s
    return
  for s1 in _match(patterns[index], subjects[index], s):
    yield from _match_sequence(patterns, subjects, index + 1, s1)


def _match_list(patterns, pi, subjects, si, s):
  if pi == len(patterns):
    if si == len(subjects):
      yield s
    return
  p = patterns[pi]
  if isinstance(p, StarVar):
    bound = s.star_bindings.get(p.name)
    if bound is not None:
      end = si + len(bound)
      if end <= len(subjects) and all(a is b for a, b in zip(bound, subjects[si:end])):
        yield from _match_list(patterns, pi + 1, subjects, end, s)
      return
    if pi == len(patterns) - 1:
      yield s.bind_star(p.name, subjects[si:])
      return
    # кратчайший префикс первым
    for end in range(si, len(subjects) + 1):
      yield from _match_list(patterns, pi + 1, subjects, end,
                             s.bind_star(p.name, subjects[si:end]))
  else:
    if si == len(subjects):
      return
    for s1 in _match(p, subjects[si], s):
      yield from _match_list(patterns, pi + 1, subjects, si + 1, s1)


def match_all(p, subject: NodeRef, initial: Optional[Substitution] = None) -> List[Substitution]:
  return list(iter_matches(p, subject, initial))


def iter_matches(p, subject: NodeRef, initial: Optional[Substitution] = None) -> Iterator[Substitution]:
  return _match(p, subject, initial or Substitution())


def match_one(p, subject: NodeRef, initial: Optional[Substitution] = None) -> Optional[Substitution]:
  return next(iter_matches(p, subject, initial), None)


def match_tuple(patterns, subjects, initial: Optional[Substitution] = None) -> Iterator[Substitution]:
  """Решения для кортежа образцов, сопоставленного с кортежем термов по позициям."""
  if len(patterns) != len(subjects):
    return iter(())
  return _match_sequence(tuple(patterns), tuple(subjects), 0, initial or Substitution())


def apply_substitution(template, s: Substitution, factory) -> NodeRef:
  """Строит шаблон через фабрику, результат канонический."""
  if isinstance(template, Var):
    return s.lookup(template.name)
  if isinstance(template, Appl):
    decl = factory.operator(template.operator)
    if decl.variadic:
      children, seed = template.children, None
      # хвост, уже построенный фабрикой, не пересобирается
      if children and isinstance(children[-1], StarVar):
        seed = factory.folded_list(template.operator, s.lookup_star(children[-1].name))
        if seed is not None:
          children = children[:-1]
      elements = []
      for child in children:
        if isinstance(child, StarVar):
          elements.extend(s.lookup_star(child.name))
        else:
          elements.append(apply_substitution(child, s, factory))
      return factory.build_variadic(template.operator, elements, seed)
    args = [apply_substitution(child, s, factory) for child in template.children]
    return factory.build(template.operator, args)
  if isinstance(template, StarVar):
    raise UnboundVariable(template.name + '*')
  raise TypeError(f'{type(template).__name__} cannot be instantiated here')


def instantiate_raw(template, s: Substitution, store) -> NodeRef:
  """Строит шаблон простым интернированием, в обход всех хуков."""
  if isinstance(template, Var):
    return s.lookup(template.name)
  if isinstance(template, Appl):
    children = []
    for child in template.children:
      if isinstance(child, StarVar):
        children.extend(s.lookup_star(child.name))
      elif isinstance(child, Wildcard):
        raise TypeError('wildcard has no instance')
      else:
        children.append(instantiate_raw(child, s, store))
    return store.intern(template.operator, children)
  raise TypeError(f'{type(template).__name__} cannot be instantiated here')
