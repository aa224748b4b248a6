"""
Разбор модулей сигнатур `.gom`, выражений термов и образцов.

Грамматика модуля:

  module Name [imports Name*] [public] sorts Sort* abstract syntax Item*

  Item   ::= Symbol [( Slot:Sort, ... )] -> Sort
           | Symbol ( Sort * ) -> Sort
           | Symbol : Kind ( Param, ... ) { Clause* }
           | factory { Builtin, ... }
           | ...
  Clause ::= Pattern (, Pattern)* [where Guard] -> Action ;
  Action ::= raw( Template, ... ) | ( Template, ... ) | Template

Комментарии от `//` до конца строки.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

from .exceptions import GomSyntaxError, StarOutsideVariadic, UnknownOperator
from .matcher import Appl, Raw, StarVar, TupleTemplate, Var, Wildcard
from .signature_model import (HOOK_KINDS, GuardExpr, HookDecl, OperatorDecl, RuleClause,
                              SignatureModule, SortDecl, classify, classify_hook)

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(r'''
    (?P<newline>\n)
  | (?P<space>[ \t\r\f]+)
  | (?P<comment>//[^\n]*)
  | (?P<ellipsis>\.\.\.)
  | (?P<arrow>->)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<wildcard>_(?![A-Za-z0-9_]))
  | (?P<punct>[(),:*{};])
''', re.VERBOSE)

EOF = 'end of input'


class Token(NamedTuple):
  kind: str
  text: str
  line: int
  column: int


@dataclass(frozen=True)
class SurfaceTerm:
  head: str
  children: Tuple['SurfaceTerm', ...] = ()
  line: int = field(default=0, compare=False)
  column: int = field(default=0, compare=False)

  def __str__(self):
    if not self.children:
      return self.head
    return f"{self.head}({','.join(str(c) for c in self.children)})"


def tokenize(text):
  tokens = []
  line, line_start, pos = 1, 0, 0
  while pos < len(text):
    m = TOKEN_RE.match(text, pos)
    if m is None:
      raise GomSyntaxError(line, pos - line_start + 1, ['token'], text[pos])
    kind = m.lastgroup
    if kind == 'newline':
      line += 1
      line_start = m.end()
    elif kind not in ('space', 'comment'):
      value = m.group()
      tokens.append(Token(value if kind == 'punct' else kind, value, line, pos - line_start + 1))
    pos = m.end()
  tokens.append(Token(EOF, '', line, pos - line_start + 1))
  return tokens


class _Parser:
  def __init__(self, text):
    self.tokens = tokenize(text)
    self.pos = 0

  @property
  def current(self):
    return self.tokens[self.pos]

  def peek(self, offset=1):
    index = min(self.pos + offset, len(self.tokens) - 1)
    return self.tokens[index]

  def advance(self):
    token = self.current
    if token.kind != EOF:
      self.pos += 1
    return token

  def fail(self, *expected):
    token = self.current
    raise GomSyntaxError(token.line, token.column, expected, token.text or EOF)

  def at(self, kind, text=None):
    token = self.current
    return token.kind == kind and (text is None or token.text == text)

  def at_keyword(self, *words):
    return self.current.kind == 'ident' and self.current.text in words

  def expect(self, kind, text=None):
    if not self.at(kind, text):
      self.fail(repr(text) if text else kind)
    return self.advance()

  def keyword(self, word):
    if not self.at_keyword(word):
      self.fail(repr(word))
    return self.advance()

  def accept(self, kind):
    if self.at(kind):
      return self.advance()
    return None

  def expect_end(self):
    if not self.at(EOF):
      self.fail(EOF)

  # модуль

  def module(self):
    start = self.keyword('module')
    name = self.expect('ident').text
    imports = []
    if self.at_keyword('imports'):
      self.advance()
      while self.at('ident') and not self.at_keyword('public', 'sorts'):
        imports.append(self.advance().text)
    if self.at_keyword('public'):
      self.advance()
    self.keyword('sorts')
    sorts = []
    while self.at('ident') and not self.at_keyword('abstract'):
      token = self.advance()
      sorts.append(SortDecl(token.text, line=token.line, column=token.column))
    self.keyword('abstract')
    self.keyword('syntax')

    operators, hooks, factory = [], [], []
    while not self.at(EOF):
      if self.accept('ellipsis') or (self.at_keyword('public') and self.advance()):
        continue
      if self.at_keyword('factory') and self.peek().kind == '{':
        factory.extend(self.factory_block())
      elif self.at('ident') and self.peek().kind == ':':
        hooks.append(self.hook())
      elif self.at('ident'):
        operators.append(self.production())
      else:
        self.fail('production', 'hook', 'factory', EOF)

    own = {op.name: op for op in operators}
    return SignatureModule(
      name=name,
      imports=tuple(imports),
      sorts=tuple(sorts),
      operators=tuple(operators),
      hooks=tuple(classify_hook(h, own) for h in hooks),
      factory=tuple(factory),
      line=start.line,
      column=start.column,
    )

  def production(self):
    symbol = self.expect('ident')
    slots, element_sort = [], None
    if self.accept('('):
      if self.at('ident') and self.peek().kind == '*':
        element_sort = self.advance().text
        self.advance()
        self.expect(')')
      elif not self.accept(')'):
        while True:
          slot = self.expect('ident').text
          self.expect(':')
          slots.append((slot, self.expect('ident').text))
          if self.accept(')'):
            break
          if not self.at(','):
            self.fail("','", "')'")
          self.advance()
    self.expect('arrow')
    result = self.expect('ident').text
    return OperatorDecl(symbol.text, result, tuple(slots), element_sort,
                        line=symbol.line, column=symbol.column)

  def factory_block(self):
    self.advance()
    self.expect('{')
    names = []
    while not self.accept('}'):
      names.append(self.expect('ident').text)
      if not self.accept(',') and not self.accept(';') and not self.at('}'):
        self.fail("','", "'}'")
    return names

  def hook(self):
    operator = self.expect('ident')
    self.expect(':')
    kind = self.expect('ident')
    if kind.text not in HOOK_KINDS:
      raise GomSyntaxError(kind.line, kind.column, HOOK_KINDS, kind.text)
    self.expect('(')
    params = []
    if not self.accept(')'):
      while True:
        params.append(self.expect('ident').text)
        if self.accept(')'):
          break
        if not self.at(','):
          self.fail("','", "')'")
        self.advance()
    self.expect('{')
    body = []
    while not self.accept('}'):
      body.append(self.clause())
    return HookDecl(operator.text, kind.text, tuple(params), tuple(body),
                    line=operator.line, column=operator.column)

  def clause(self):
    start = self.current
    patterns = [self.pattern()]
    while self.accept(','):
      patterns.append(self.pattern())
    guard = None
    if self.at_keyword('where'):
      self.advance()
      guard = self.guard()
    self.expect('arrow')
    action = self.action()
    self.expect(';')
    return RuleClause(tuple(patterns), guard, action, line=start.line, column=start.column)

  def guard(self):
    name = self.expect('ident')
    self.expect('(')
    args = self.arguments(self.template)
    return GuardExpr(name.text, tuple(args), line=name.line, column=name.column)

  def action(self):
    token = self.current
    if self.at_keyword('raw') and self.peek().kind == '(':
      self.advance()
      self.advance()
      return Raw(tuple(self.arguments(self.template)), line=token.line, column=token.column)
    if self.accept('('):
      return TupleTemplate(tuple(self.arguments(self.template)), line=token.line, column=token.column)
    return self.template()

  def arguments(self, item):
    """Элементы до закрывающей скобки включительно."""
    args = []
    if self.accept(')'):
      return args
    while True:
      args.append(item())
      if self.accept(')'):
        return args
      if not self.at(','):
        self.fail("','", "')'")
      self.advance()

  # термы и образцы

  def pattern(self):
    token = self.current
    if self.accept('wildcard'):
      return Wildcard(token.line, token.column)
    name = self.expect('ident')
    if self.accept('*'):
      return StarVar(name.text, name.line, name.column)
    if self.accept('('):
      return Appl(name.text, tuple(self.arguments(self.pattern)), name.line, name.column)
    return Var(name.text, name.line, name.column)

  def template(self):
    return self.pattern()

  def term(self):
    name = self.expect('ident')
    children = ()
    if self.accept('('):
      children = tuple(self.arguments(self.term))
    return SurfaceTerm(name.text, children, name.line, name.column)


def parse_module(text: str) -> SignatureModule:
  parser = _Parser(text)
  module = parser.module()
  parser.expect_end()
  logger.debug('parsed module %s: %d sort(s), %d operator(s), %d hook(s)',
                module.name, len(module.sorts), len(module.operators), len(module.hooks))
  return module


def parse_term(text: str, module: SignatureModule = None) -> SurfaceTerm:
  """Функциональная запись; арности и сорта проверяются при построении терма."""
  parser = _Parser(text)
  term = parser.term()
  parser.expect_end()
  return term


def _check_stars(p, operators, variadic_parent=False):
  if isinstance(p, StarVar):
    if not variadic_parent:
      raise StarOutsideVariadic(p.name, p.line, p.column)
  elif isinstance(p, Appl):
    decl = operators.get(p.operator)
    if decl is None:
      raise UnknownOperator(p.operator)
    for child in p.children:
      _check_stars(child, operators, decl.variadic)


def parse_pattern(text: str, module: SignatureModule):
  """
  Идентификаторы операторов становятся образцами операторов, `X*` это
  переменные-звёздочки, `_` это джокер, прочие идентификаторы это переменные.
  """
  parser = _Parser(text)
  pattern = parser.pattern()
  parser.expect_end()
  pattern = classify(pattern, module.operator_table)
  _check_stars(pattern, module.operator_table)
  return pattern


def format_pattern(p, constants=frozenset()):
  if isinstance(p, Wildcard):
    return '_'
  if isinstance(p, Var):
    return p.name
  if isinstance(p, StarVar):
    return p.name + '*'
  if isinstance(p, Appl):
    if not p.children and p.operator in constants:
      return p.operator
    return f"{p.operator}({', '.join(format_pattern(c, constants) for c in p.children)})"
  if isinstance(p, Raw):
    return f"raw({', '.join(format_pattern(c, constants) for c in p.children)})"
  if isinstance(p, TupleTemplate):
    return f"({', '.join(format_pattern(c, constants) for c in p.items)})"
  raise TypeError(type(p).__name__)


def format_module(module: SignatureModule) -> str:
  """Исходный текст, который разбирается обратно в структурно тот же модуль."""
  constants = frozenset(op.name for op in module.operators if not op.variadic and not op.slots)
  lines = [f'module {module.name}']
  if module.imports:
    lines.append('  imports ' + ' '.join(module.imports))
  lines.append('  sorts ' + ' '.join(s.name for s in module.sorts))
  lines.append('  abstract syntax')
  for op in module.operators:
    if op.variadic:
      lhs = f'{op.name}({op.element_sort}*)'
    elif op.slots:
      lhs = f"{op.name}({', '.join(f'{slot}:{sort}' for slot, sort in op.slots)})"
    else:
      lhs = op.name
    lines.append(f'    {lhs} -> {op.result_sort}')
  if module.factory:
    lines.append(f"    factory {{ {', '.join(module.factory)} }}")
  for hook in module.hooks:
    lines.append(f"    {hook.operator}:{hook.kind}({', '.join(hook.params)}) {{")
    for clause in hook.body:
      text = ', '.join(format_pattern(p, constants) for p in clause.patterns)
      if clause.guard is not None:
        args = ', '.join(format_pattern(a, constants) for a in clause.guard.arguments)
        text += f' where {clause.guard.predicate}({args})'
      lines.append(f'      {text} -> {format_pattern(clause.action, constants)};')
    lines.append('    }')
  return '\n'.join(lines) + '\n'
