from django.test import SimpleTestCase

from gom.services.exceptions import ImportCycle, NameClash, UnknownImport
from gom.services.gom_parser import parse_module
from gom.services.signature_model import resolve_imports, validate
from .utils import corpus_text

MINI = '''
module Mini
  sorts Bool
  abstract syntax
    True -> Bool
    not(b:Bool) -> Bool
'''


def codes(text, *imports):
  module = resolve_imports(parse_module(text), [parse_module(t) for t in imports])
  return [d.code for d in validate(module).diagnostics]


class ResolveImportsTest(SimpleTestCase):
  def test_module_without_imports_is_returned_unchanged(self):
    module = parse_module(corpus_text('boolean'))
    self.assertIs(resolve_imports(module, []), module)

  def test_struct_sorts(self):
    module = resolve_imports(parse_module(corpus_text('struct')), [])
    self.assertEqual(module.sort_names, {'Struc', 'StrucPar', 'StrucCop', 'StrucSeq'})

  def test_imported_tables_are_merged(self):
    struct = parse_module(corpus_text('struct'))
    module = resolve_imports(parse_module(corpus_text('struct_neg')), [struct])
    self.assertIn('concPar', module.operator_table)
    self.assertIsNotNone(module.hook('neg', 'make'))
    self.assertIsNotNone(module.hook('concPar', 'make_insert'))
    self.assertIn('can_react', module.factory)
    self.assertTrue(validate(module).accepted)

  def test_import_cycle(self):
    a = parse_module('module A imports B sorts abstract syntax')
    b = parse_module('module B imports A sorts abstract syntax')
    with self.assertRaises(ImportCycle) as ctx:
      resolve_imports(a, [a, b])
    self.assertEqual(ctx.exception.path, ['A', 'B'])

  def test_unknown_import(self):
    with self.assertRaises(UnknownImport):
      resolve_imports(parse_module('module A imports Nowhere sorts abstract syntax'), [])

  def test_name_clash(self):
    b = parse_module('module B sorts S abstract syntax f -> S')
    c = parse_module('module C sorts S abstract syntax f -> S')
    a = parse_module('module A imports B C sorts abstract syntax')
    with self.assertRaises(NameClash) as ctx:
      resolve_imports(a, [b, c])
    self.assertEqual(ctx.exception.operator, 'f')

  def test_diamond_import_is_not_a_clash(self):
    base = parse_module('module Base sorts S abstract syntax f -> S')
    left = parse_module('module Left imports Base sorts abstract syntax')
    right = parse_module('module Right imports Base sorts abstract syntax')
    top = parse_module('module Top imports Left Right sorts abstract syntax g(x:S) -> S')
    module = resolve_imports(top, [base, left, right])
    self.assertEqual(sorted(op.name for op in module.operators), ['f', 'g'])
    self.assertTrue(validate(module).accepted)


class ValidateTest(SimpleTestCase):
  def test_corpus_is_accepted(self):
    for name in ('boolean', 'struct', 'nat'):
      with self.subTest(name):
        report = validate(parse_module(corpus_text(name)))
        self.assertTrue(report.accepted, report.format(name))

  def test_unknown_sort(self):
    self.assertEqual(codes('module M sorts Bool abstract syntax f(x:Unknown) -> Bool'), ['UnknownSort'])

  def test_insert_hook_on_fixed_operator(self):
    text = MINI + 'not:make_insert(e, l) { _, _ -> l; }'
    self.assertEqual(codes(text), ['HookKindMismatch'])

  def test_fixed_hook_on_variadic_operator(self):
    text = 'module M sorts S L abstract syntax conc(S*) -> L conc:make(l) { _ -> l; }'
    self.assertEqual(codes(text), ['HookKindMismatch'])

  def test_hook_arity(self):
    self.assertEqual(codes(MINI + 'not:make(x, y) { a, b -> a; }'), ['HookArity'])

  def test_duplicates(self):
    text = 'module M sorts S S abstract syntax f -> S f -> S g(x:S, x:S) -> S'
    self.assertEqual(codes(text), ['DuplicateSort', 'DuplicateOperator', 'DuplicateSlot'])

  def test_duplicate_hook(self):
    text = MINI + 'not:make(b) { not(x) -> x; } not:make(b) { _ -> b; }'
    self.assertEqual(codes(text), ['DuplicateHook'])

  def test_clause_checks(self):
    cases = {
      'not:make(b) { not(x) -> y; }': 'UnboundVariable',
      'not:make(b) { not(x), True -> x; }': 'ClauseArity',
      'not:make(b) { not(X*) -> b; }': 'StarOutsideVariadic',
      'not:make(b) { maybe(x) -> x; }': 'UnknownOperator',
      'not:make(b) { _ where shorter(b, b) -> b; }': 'UnknownPredicate',
      'not:make(True) { _ -> True; }': 'ParamShadowsOperator',
      'not:make(b) { _ -> not(_); }': 'WildcardInTemplate',
      'not:make_after(b) { _ -> raw(b); }': 'RawOutsideAction',
      'not:make_before(b) { _ -> b; }': 'ClauseArity',
      'not:make(b) { _ -> raw(b, b); }': 'ArityMismatch',
    }
    for hook, code in cases.items():
      with self.subTest(hook):
        self.assertIn(code, codes(MINI + hook))

  def test_make_before_produces_tuples(self):
    self.assertEqual(codes(MINI + 'not:make_before(b) { not(x) -> (x); }'), [])

  def test_declared_factory_predicate(self):
    text = ('module M sorts S L abstract syntax x -> S conc(S*) -> L factory { can_react } '
            'conc:make_insert(e, l) { _, _ where can_react(e, l) -> l; }')
    self.assertEqual(codes(text), [])
    self.assertEqual(codes(text.replace('factory { can_react }', '')), ['UnknownPredicate'])

  def test_guard_argument_kinds(self):
    lists = 'module M sorts S L abstract syntax x -> S conc(S*) -> L f(a:S, b:L) -> S '
    cases = {
      'conc:make_insert(e, l) { _, conc(h, T*) where lt(e, T*) -> l; }': ['GuardArgumentKind'],
      'conc:make_insert(e, l) { _, conc(h, T*) where geq(T*, h) -> l; }': ['GuardArgumentKind'],
      'conc:make_insert(e, l) { _, _ where is_empty(e) -> l; }': ['GuardArgumentKind'],
      'conc:make_insert(e, l) { _, conc(h, T*) where non_empty(h) -> l; }': ['GuardArgumentKind'],
      'f:make(a, b) { _, _ where non_empty(a) -> a; }': ['GuardArgumentKind'],
      'conc:make_insert(e, l) { _, conc(h, T*) where geq(e, h) -> l; }': [],
      'conc:make_insert(e, l) { _, conc(h, T*) where is_empty(T*) -> l; }': [],
      'conc:make_insert(e, l) { _, _ where non_empty(l) -> l; }': [],
      'f:make(a, b) { _, _ where is_empty(b) -> a; }': [],
      'f:make(a, b) { _, k where is_empty(k) -> a; }': [],
    }
    for hook, expected in cases.items():
      with self.subTest(hook):
        self.assertEqual(codes(lists + hook), expected)

  def test_unknown_builtin(self):
    self.assertEqual(codes('module M sorts S abstract syntax factory { compareStruc }'), ['UnknownBuiltin'])

  def test_mutations_are_rejected(self):
    boolean = corpus_text('boolean')
    self.assertIn('UnknownSort', codes(boolean.replace('sorts Bool', 'sorts')))
    self.assertIn('UnknownOperator', codes(boolean.replace('not(b:Bool)', 'neg(b:Bool)')))
    struct = corpus_text('struct')
    self.assertIn('UnknownSort', codes(struct.replace('sorts Struc StrucPar', 'sorts Struc')))
    self.assertIn('UnboundVariable', codes(struct.replace('    o -> Struc\n', '')))

  def test_report_is_deterministic(self):
    text = 'module M sorts S abstract syntax f(x:A) -> B g(y:C) -> S'
    module = parse_module(text)
    first = validate(module).format('m.gom')
    self.assertEqual(first, validate(parse_module(text)).format('m.gom'))
    self.assertEqual(first.splitlines()[0], "m.gom:1:34: UnknownSort: unknown sort 'A' in slot 'x' of 'f'")
