"""
Библиотека модулей: встроенный корпус, файлы модулей и сохранённые модули,
загрузка через parse -> resolve_imports -> validate.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .exceptions import ModuleRejected
from .gom_parser import parse_module
from .hook_engine import DEFAULT_RECURSION_BUDGET, Factory
from .signature_model import ValidationReport, resolve_imports, validate

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_DIR = Path(__file__).resolve().parent.parent / 'corpus'

BUILTIN_MODULES = {
  'boolean': 'boolean.gom',
  'struct': 'struct.gom',
  'nat': 'nat.gom',
  'struct_neg': 'struct_neg.gom',
}


@dataclass(frozen=True)
class LoadedModule:
  filename: str
  module: object
  report: ValidationReport

  @property
  def accepted(self):
    return self.report.accepted


class ModuleLibrary:
  """
  Ищет модули по встроенному имени ("struct"), по пути к файлу или по имени
  сохранённого модуля. Импорты разрешаются по имени модуля ("Struct") среди
  встроенного корпуса и дополнительных источников.
  """

  def __init__(self, corpus_dir=DEFAULT_CORPUS_DIR, sources=None):
    self.corpus_dir = Path(corpus_dir)
    self.sources = dict(sources or {})
    self._parsed = {}

  def builtin_path(self, name):
    return self.corpus_dir / BUILTIN_MODULES[name]

  def _parse(self, key, text):
    if key not in self._parsed:
      self._parsed[key] = parse_module(text)
    return self._parsed[key]

  def available(self):
    """Разобранные модули по имени модуля, для разрешения импортов."""
    modules = {}
    for name in BUILTIN_MODULES:
      path = self.builtin_path(name)
      module = self._parse(str(path), path.read_text(encoding='utf-8'))
      modules[module.name] = module
    for key, text in self.sources.items():
      module = self._parse(f'source:{key}', text)
      modules.setdefault(module.name, module)
    return modules

  def read(self, ref):
    """(имя файла, текст) встроенного модуля, сохранённого модуля или файла."""
    if ref in BUILTIN_MODULES:
      path = self.builtin_path(ref)
      return str(path), path.read_text(encoding='utf-8')
    if ref in self.sources:
      return ref, self.sources[ref]
    path = Path(ref)
    return str(path), path.read_text(encoding='utf-8')

  def check_text(self, filename, text):
    module = resolve_imports(parse_module(text), self.available())
    report = validate(module)
    logger.debug('%s: %d diagnostic(s)', filename, len(report.diagnostics))
    return LoadedModule(filename, module, report)

  def check(self, ref):
    filename, text = self.read(ref)
    return self.check_text(filename, text)

  def load(self, ref):
    loaded = self.check(ref)
    if not loaded.accepted:
      raise ModuleRejected(loaded.module.name, loaded.report.diagnostics)
    return loaded.module


def make_factory(module, recursion_budget=DEFAULT_RECURSION_BUDGET):
  return Factory(module, recursion_budget=recursion_budget)


@lru_cache(maxsize=None)
def builtin_module(name, corpus_dir=DEFAULT_CORPUS_DIR):
  return ModuleLibrary(corpus_dir).load(name)


def builtin_factory(name, recursion_budget=DEFAULT_RECURSION_BUDGET, corpus_dir=DEFAULT_CORPUS_DIR):
  """Новое хранилище над закэшированным встроенным модулем."""
  return make_factory(builtin_module(name, corpus_dir), recursion_budget)


def library_from_settings(sources=None):
  from django.conf import settings

  return ModuleLibrary(settings.GOM_CORPUS_DIR, sources)


def factory_from_settings(module):
  from django.conf import settings

  return make_factory(module, settings.GOM_RECURSION_BUDGET)
