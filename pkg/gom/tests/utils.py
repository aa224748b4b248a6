from gom.services.corpus import DEFAULT_CORPUS_DIR, builtin_factory
from gom.services.gom_parser import SurfaceTerm, parse_module
from gom.services.hook_engine import Factory
from gom.services.signature_model import resolve_imports

ATOMS = ('a', 'b', 'c', 'd')
LISTS = {'par': 'concPar', 'cop': 'concCop', 'seq': 'concSeq'}


def corpus_text(name):
  return (DEFAULT_CORPUS_DIR / f'{name}.gom').read_text(encoding='utf-8')


def factory_for(text, *imports):
  """Фабрика над модулем из текста; импорты передаются разобранными модулями."""
  module = parse_module(text)
  return Factory(resolve_imports(module, imports))


def boolean():
  return builtin_factory('boolean')


def struct():
  return builtin_factory('struct')


def nat():
  return builtin_factory('nat')


def term(head, *children):
  return SurfaceTerm(head, tuple(children))


def random_boolean(rng, depth):
  if depth == 0 or rng.random() < 0.25:
    return term(rng.choice(['True', 'False']))
  op = rng.choice(['not', 'and', 'or'])
  if op == 'not':
    return term('not', random_boolean(rng, depth - 1))
  return term(op, random_boolean(rng, depth - 1), random_boolean(rng, depth - 1))


def evaluate(t):
  if t.head == 'True':
    return True
  if t.head == 'False':
    return False
  if t.head == 'not':
    return not evaluate(t.children[0])
  if t.head == 'and':
    return evaluate(t.children[0]) and evaluate(t.children[1])
  return evaluate(t.children[0]) or evaluate(t.children[1])


def evaluate_node(node):
  op = node.operator
  if op in ('True', 'False'):
    return op == 'True'
  if op == 'not':
    return not evaluate_node(node.children[0])
  if op == 'and':
    return evaluate_node(node.children[0]) and evaluate_node(node.children[1])
  return evaluate_node(node.children[0]) or evaluate_node(node.children[1])


def random_struct(rng, depth):
  """Поверхностный терм Struct, отрицания только на атомах."""
  roll = rng.random()
  if depth == 0 or roll < 0.3:
    atom = term(rng.choice(ATOMS))
    return term('neg', atom) if rng.random() < 0.4 else atom
  if roll < 0.35:
    return term('o')
  wrapper = rng.choice(list(LISTS))
  elements = [random_struct(rng, depth - 1) for _ in range(rng.randint(0, 4))]
  return term(wrapper, term(LISTS[wrapper], *elements))


def subterms(node):
  stack = [node]
  while stack:
    t = stack.pop()
    yield t
    stack.extend(t.children)
