import random

from django.test import SimpleTestCase, override_settings

from gom.services import bv_prover
from gom.services.bv_prover import (AI_DOWN, Q_DOWN, SWITCH_LEFT, SWITCH_RIGHT, ProofStatus, ProofStep,
                                    Prover, SearchConfig, can_react, format_position, is_canonical_structure)
from gom.services.corpus import builtin_factory
from gom.services.exceptions import InvalidGoalSort
from gom.services.gom_parser import parse_term
from gom.services.pipeline import prove, trace_steps
from gom.services.term_store import print_term
from .utils import random_struct, struct

TWO_SEQ = 'par(concPar(seq(concSeq(a, b)), seq(concSeq(neg(a), neg(b)))))'

GOALS = [
  'par(concPar(a, neg(a)))',
  'par(concPar(a, b))',
  'par(concPar(a, neg(a), b, neg(b)))',
  'par(concPar(a, neg(a), neg(b)))',
  'seq(concSeq(a, neg(a)))',
  'cop(concCop(a, neg(a)))',
  TWO_SEQ,
  'par(concPar(cop(concCop(a, b)), neg(a), neg(b)))',
  'par(concPar(seq(concSeq(a, b)), neg(a), neg(b)))',
]


def positions(t, position=()):
  yield position, t
  for i, child in enumerate(t.children):
    yield from positions(child, position + (i,))


def replace_at(factory, t, position, node):
  if not position:
    return node
  children = list(t.children)
  children[position[0]] = replace_at(factory, children[position[0]], position[1:], node)
  return factory.rebuild(t, children)


class RuleEnumerator:
  """Все шаги ai_down, switch и q_down без отсечения, перебором по позициям."""

  def __init__(self, factory):
    self.factory = factory
    self.unit = factory.build('o', [])

  def wrap(self, operator, elements):
    return self.factory.build(operator, [self.factory.build_variadic(bv_prover.WRAPPERS[operator], elements)])

  def atom(self, t):
    return not t.children and t.operator != 'o'

  def dual(self, x, y):
    return (y.operator == 'neg' and y.children[0] is x) or (x.operator == 'neg' and x.children[0] is y)

  def splits(self, t):
    parts = t.children[0].children if t.operator == 'seq' else (t,)
    return [(self.wrap('seq', parts[:k]), self.wrap('seq', parts[k:])) for k in range(len(parts) + 1)]

  def at(self, t):
    if t.operator != 'par':
      return
    elements = t.children[0].children
    n = len(elements)
    for i in range(n):
      for j in range(n):
        if i == j:
          continue
        rest = [e for k, e in enumerate(elements) if k not in (i, j)]
        x, y = elements[i], elements[j]
        if i < j and self.dual(x, y) and (self.atom(x) or self.atom(y)):
          yield self.wrap('par', rest)
        if i < j:
          for r, tt in self.splits(x):
            for u, v in self.splits(y):
              yield self.wrap('par', [self.wrap('seq', [self.wrap('par', [r, u]), self.wrap('par', [tt, v])]), *rest])
        if x.operator == 'cop':
          parts = x.children[0].children
          for k in range(1, len(parts)):
            for moved, kept in ((parts[:k], parts[k:]), (parts[k:], parts[:k])):
              inner = self.wrap('par', [*moved, y])
              yield self.wrap('par', [self.wrap('cop', [inner, *kept]), *rest])

  def successors(self, t):
    found = set()
    for position, sub in positions(t):
      for node in self.at(sub):
        found.add((position, replace_at(self.factory, t, position, node)))
    return found

  def shortest(self, goal, limit=20):
    """Длина кратчайшего вывода поуровневым перебором, None если пространство исчерпано."""
    level, seen = {goal}, {goal}
    for depth in range(1, limit + 1):
      following = set()
      for state in level:
        for _, node in self.successors(state):
          if node is self.unit:
            return depth
          if node not in seen:
            seen.add(node)
            following.add(node)
      if not following:
        return None
      level = following
    raise AssertionError(f'no verdict for {print_term(goal)} within {limit} levels')


class ProverTestCase(SimpleTestCase):
  def setUp(self):
    self.factory = struct()
    self.prover = Prover(self.factory)
    self.unpruned = Prover(self.factory, SearchConfig(can_react_pruning=False))

  def node(self, text):
    return self.factory.build_surface(parse_term(text))

  def printed(self, results):
    return {print_term(node) for *_, node in results}

  def assert_valid_trace(self, prover, trace):
    self.assertTrue(trace.proved)
    current = trace.goal
    for step in trace.steps:
      self.assertIs(step.before, current)
      self.assertTrue(prover.check_step(step), step.format())
      current = step.after
    self.assertIs(current, prover.unit)


class RulesTest(ProverTestCase):
  def test_ai_down(self):
    self.assertEqual(self.prover.apply_ai_down(self.node('par(concPar(a, b, neg(a)))')),
                     [((), self.node('b'))])
    self.assertEqual(self.prover.apply_ai_down(self.node('par(concPar(a, neg(a)))')),
                     [((), self.prover.unit)])
    self.assertEqual(self.prover.apply_ai_down(self.node('par(concPar(a, neg(b)))')), [])

  def test_ai_down_below_the_root(self):
    t = self.node('seq(concSeq(par(concPar(a, neg(a))), b))')
    self.assertEqual(self.prover.apply_ai_down(t), [((0, 0), self.node('b'))])

  def test_switch_without_pruning(self):
    t = self.node('par(concPar(cop(concCop(a, b)), c))')
    self.assertEqual(self.printed(self.unpruned.apply_switch(t)), {
      'cop(concCop(b,par(concPar(a,c))))',
      'cop(concCop(a,par(concPar(b,c))))',
    })
    self.assertEqual(self.prover.apply_switch(t), [])

  def test_switch_splices_the_moved_part_into_the_par(self):
    t = self.node('par(concPar(cop(concCop(a, b, c)), d))')
    found = {(rule, position, print_term(node)) for rule, position, node in self.unpruned.switch_successors(t)}
    self.assertEqual(found, {
      (SWITCH_LEFT, (), 'cop(concCop(b,c,par(concPar(a,d))))'),
      (SWITCH_RIGHT, (), 'cop(concCop(a,par(concPar(b,c,d))))'),
      (SWITCH_LEFT, (), 'cop(concCop(c,par(concPar(a,b,d))))'),
      (SWITCH_RIGHT, (), 'cop(concCop(a,b,par(concPar(c,d))))'),
    })

  def test_successors_match_enumeration(self):
    enumerator = RuleEnumerator(self.factory)
    rng = random.Random(29)
    for _ in range(150):
      t = self.factory.build_surface(random_struct(rng, 3))
      found = {(step.position, step.after) for step in self.unpruned.successors(t)}
      self.assertEqual(found, enumerator.successors(t), print_term(t))

  def test_switch_with_pruning(self):
    t = self.node('par(concPar(cop(concCop(a, b)), neg(a)))')
    self.assertEqual(self.prover.switch_successors(t),
                     [(SWITCH_LEFT, (), self.node('cop(concCop(b, par(concPar(a, neg(a)))))'))])

  def test_q_down(self):
    t = self.node('par(concPar(a, b))')
    self.assertEqual(self.printed(self.prover.apply_q_down(t)),
                     {'par(concPar(a,b))', 'seq(concSeq(a,b))', 'seq(concSeq(b,a))'})
    self.assertEqual(self.prover.apply_q_down(self.node('seq(concSeq(a, b))')), [])

  def test_successor_order(self):
    t = self.node('par(concPar(cop(concCop(a, b)), neg(a), neg(b)))')
    rules = [step.rule for step in self.prover.successors(t)]
    rank = {AI_DOWN: 0, SWITCH_LEFT: 1, SWITCH_RIGHT: 1, Q_DOWN: 2}
    self.assertEqual(rules, sorted(rules, key=rank.get))
    self.assertIn(SWITCH_RIGHT, rules)

  def test_pruned_successors_are_a_subset(self):
    rng = random.Random(17)
    for _ in range(150):
      t = self.factory.build_surface(random_struct(rng, 3))
      pruned = set(self.prover.switch_successors(t))
      self.assertLessEqual(pruned, set(self.unpruned.switch_successors(t)), print_term(t))

  def test_every_step_checks(self):
    rng = random.Random(23)
    for _ in range(100):
      t = self.factory.build_surface(random_struct(rng, 3))
      for step in self.unpruned.successors(t):
        self.assertTrue(self.unpruned.check_step(step), step.format())
        self.assertTrue(is_canonical_structure(step.after), step.format())

  def test_check_step_rejects_forged_steps(self):
    t = self.node('par(concPar(a, neg(a), b))')
    self.assertFalse(self.prover.check_step(ProofStep(AI_DOWN, (), t, self.prover.unit)))
    self.assertFalse(self.prover.check_step(ProofStep('medial', (), t, self.node('b'))))
    self.assertTrue(self.prover.check_step(ProofStep(AI_DOWN, (), t, self.node('b'))))


class SearchTest(ProverTestCase):
  def test_identity_axiom(self):
    trace = self.prover.prove(self.node('par(concPar(a, neg(a)))'))
    self.assertEqual(trace.status, ProofStatus.PROVED)
    self.assertEqual(trace.format(), 'ai_down @ root : par(concPar(a,neg(a))) ==> o\nPROVED in 1 steps')

  def test_two_sequences(self):
    trace = self.prover.prove(self.node(TWO_SEQ))
    self.assertEqual([step.rule for step in trace.steps], [Q_DOWN, AI_DOWN, AI_DOWN])
    self.assert_valid_trace(self.prover, trace)

  def test_two_pairs(self):
    trace = self.prover.prove(self.node('par(concPar(a, neg(a), b, neg(b)))'))
    self.assertEqual([step.rule for step in trace.steps], [AI_DOWN, AI_DOWN])

  def test_refutations(self):
    for text in ('par(concPar(a, b))', 'seq(concSeq(a, neg(a)))', 'a'):
      with self.subTest(text):
        trace = self.prover.prove(self.node(text))
        self.assertEqual(trace.status, ProofStatus.REFUTED)
        self.assertEqual(trace.steps, [])
    trace = self.prover.prove(self.node('a'))
    self.assertEqual(trace.explored, 1)
    self.assertEqual(trace.summary(), 'REFUTED (exhausted 1 states)')

  def test_unit_goal(self):
    trace = self.prover.prove(self.prover.unit)
    self.assertTrue(trace.proved)
    self.assertEqual(trace.summary(), 'PROVED in 0 steps')

  def test_goal_sort(self):
    with self.assertRaises(InvalidGoalSort):
      self.prover.prove(self.factory.empty('concPar'))

  def test_against_level_search(self):
    enumerator = RuleEnumerator(self.factory)
    for text in GOALS:
      with self.subTest(text):
        goal = self.node(text)
        expected = enumerator.shortest(goal)
        trace = self.unpruned.prove(goal)
        if expected is None:
          self.assertEqual(trace.status, ProofStatus.REFUTED)
        else:
          self.assertEqual(len(trace.steps), expected)
          self.assert_valid_trace(self.unpruned, trace)

  def test_goal_found_at_the_frontier_bound(self):
    trace = Prover(self.factory, SearchConfig(max_frontier=1)).prove(self.node('par(concPar(a, neg(a)))'))
    self.assertEqual(trace.status, ProofStatus.PROVED)
    self.assertEqual(len(trace.steps), 1)

  def test_pruning_keeps_verdicts(self):
    for text in GOALS:
      with self.subTest(text):
        goal = self.node(text)
        self.assertEqual(self.prover.prove(goal).status, self.unpruned.prove(goal).status)

  def test_depth_first(self):
    prover = Prover(self.factory, SearchConfig(strategy='dfs'))
    self.assert_valid_trace(prover, prover.prove(self.node('par(concPar(a, neg(a)))')))
    trace = prover.prove(self.node(TWO_SEQ))
    self.assertNotEqual(trace.status, ProofStatus.REFUTED)
    if trace.proved:
      self.assert_valid_trace(prover, trace)

  def test_deduplication_saves_work(self):
    goal = self.node(TWO_SEQ)
    with_visited = self.prover.prove(goal)
    without = Prover(self.factory, SearchConfig(deduplicate=False)).prove(goal)
    self.assertTrue(without.proved)
    self.assertEqual(len(without.steps), len(with_visited.steps))
    self.assertLess(with_visited.explored, without.explored)

  def test_bounds(self):
    goal = self.node(TWO_SEQ)
    for config in (SearchConfig(max_depth=1), SearchConfig(max_frontier=2)):
      with self.subTest(config):
        trace = Prover(self.factory, config).prove(goal)
        self.assertEqual(trace.status, ProofStatus.NOT_PROVED)
        self.assertEqual(trace.summary(), 'NOT PROVED (bound)')

  def test_demorgan_goal(self):
    factory = builtin_factory('struct_neg')
    trace = prove(factory, 'par(concPar(cop(concCop(a, b)), neg(cop(concCop(a, b)))))', SearchConfig())
    self.assertTrue(trace.proved)
    self.assertEqual(trace_steps(trace)[-1]['after'], 'o')


class HelpersTest(ProverTestCase):
  def test_can_react(self):
    a, b = self.node('a'), self.node('b')
    self.assertTrue(can_react([a], self.node('neg(a)')))
    self.assertTrue(can_react([a, b], self.node('seq(concSeq(c, neg(b)))')))
    self.assertFalse(can_react([b], self.node('neg(a)')))
    self.assertTrue(can_react([b], self.node('neg(a)'), pruning=False))

  def test_canonical_structure(self):
    store = self.factory.store
    a, b = self.node('a'), self.node('b')
    self.assertTrue(is_canonical_structure(self.node('par(concPar(a, b))')))
    self.assertFalse(is_canonical_structure(store.intern('par', (store.intern('concPar', (a,)),))))
    self.assertFalse(is_canonical_structure(store.intern('concPar', (b, a))))
    self.assertFalse(is_canonical_structure(store.intern('concPar', (a, self.prover.unit))))

  def test_positions(self):
    self.assertEqual(format_position(()), 'root')
    self.assertEqual(format_position((0, 1)), '0.1')

  def test_trace_steps(self):
    trace = bv_prover.prove(self.node('par(concPar(a, neg(a)))'), SearchConfig(), self.factory)
    self.assertEqual(trace_steps(trace), [
      {'rule': 'ai_down', 'position': [], 'before': 'par(concPar(a,neg(a)))', 'after': 'o'},
    ])

  def test_config(self):
    with self.assertRaises(ValueError):
      SearchConfig(max_depth=0)
    with self.assertRaises(ValueError):
      SearchConfig(strategy='astar')

  @override_settings(GOM_BV_MAX_DEPTH=5, GOM_BV_STRATEGY='bfs')
  def test_config_from_settings(self):
    self.assertEqual(SearchConfig.from_settings().max_depth, 5)
    self.assertEqual(SearchConfig.from_settings(max_depth=None).max_depth, 5)
    config = SearchConfig.from_settings(max_depth=8, strategy='dfs')
    self.assertEqual((config.max_depth, config.strategy), (8, 'dfs'))
