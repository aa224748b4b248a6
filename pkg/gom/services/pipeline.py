"""
Преобразования текст -> термы, общие для management-команды, REST
представлений и задачи Celery.
"""
from .bv_prover import Prover, SearchConfig
from .gom_parser import parse_pattern, parse_term
from .matcher import iter_matches, match_all
from .term_store import print_term


def normalize(factory, expr: str):
  return factory.build_surface(parse_term(expr, factory.module))


def match(factory, pattern: str, expr: str, all_solutions=False):
  """Решения `pattern` для канонической формы `expr`."""
  p = parse_pattern(pattern, factory.module)
  subject = normalize(factory, expr)
  if all_solutions:
    return match_all(p, subject)
  first = next(iter_matches(p, subject), None)
  return [] if first is None else [first]


def solution_dict(s):
  solution = {name: print_term(node) for name, node in s.bindings.items()}
  for name, nodes in s.star_bindings.items():
    solution[name + '*'] = [print_term(n) for n in nodes]
  return dict(sorted(solution.items()))


def prove(factory, expr: str, config: SearchConfig):
  return Prover(factory, config).prove(normalize(factory, expr))


def trace_steps(trace):
  return [
    {
      'rule': step.rule,
      'position': list(step.position),
      'before': print_term(step.before),
      'after': print_term(step.after),
    }
    for step in trace.steps
  ]
