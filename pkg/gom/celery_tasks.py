import logging
from celery import shared_task
from .models import ProofRun
from .services.bv_prover import ProofStatus, SearchConfig
from .services.corpus import factory_from_settings, library_from_settings
from .services.pipeline import prove, trace_steps

logger = logging.getLogger(__name__)

RUN_STATUS = {
  ProofStatus.PROVED: ProofRun.PROVED,
  ProofStatus.REFUTED: ProofRun.REFUTED,
  ProofStatus.NOT_PROVED: ProofRun.BOUND_EXCEEDED,
}

@shared_task(bind=True)
def prove_task(self, run_id, demorgan=False):
  progress = ProofRun.objects.get(id=run_id)
  try:
    config = SearchConfig.from_settings(**progress.config)
    module = library_from_settings().load('struct_neg' if demorgan else 'struct')
    logger.info('proof run %s started for %s', run_id, progress.expression)

    trace = prove(factory_from_settings(module), progress.expression, config)

    progress.status = RUN_STATUS[trace.status]
    progress.steps = trace_steps(trace)
    progress.explored = trace.explored
    progress.save()
    logger.info('proof run %s finished: %s', run_id, progress.status)

    return {
      'run_id': run_id,
      'status': progress.status,
      'summary': trace.summary(),
      'steps': progress.steps,
      'explored': trace.explored,
      'generated': trace.generated,
    }
  except Exception as e:
    progress.status = ProofRun.ERROR
    progress.error_message = str(e)
    progress.save()
    logger.warning('proof run %s failed: %s', run_id, e)
    raise e
