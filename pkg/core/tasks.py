from celery import group, shared_task
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Dict, List, Sequence

from django.conf import settings

from .checks import run_check
from .serializers import CheckResultSerializer

logger = logging.getLogger(__name__)


@shared_task
def run_verification_check(name, suite='fast'):
    """
    Run one acceptance check and return its serialized result.
    """
    result = run_check(name, suite)
    return CheckResultSerializer(result).data


def _error_result(name, error):
    return {'name': name, 'status': 'error', 'reports': [], 'values': {}, 'error': error}


def dispatch_checks(names: Sequence[str], suite: str = 'fast') -> List[Dict[str, Any]]:
    """
    Run the named checks in parallel and return their results in the order requested.

    With STIRLING_USE_CELERY the checks run as a Celery group, otherwise on a
    local thread pool.
    """
    names = list(names)
    if not names:
        return []

    if settings.STIRLING_USE_CELERY:
        logger.info(f"Dispatching {len(names)} checks to Celery")
        job = group(run_verification_check.s(name, suite) for name in names)
        return list(job.apply_async().get(disable_sync_subtasks=False))

    results: Dict[str, Dict[str, Any]] = {}
    with ThreadPoolExecutor(max_workers=min(settings.STIRLING_WORKERS, len(names))) as executor:
        future_to_name = {executor.submit(run_check, name, suite): name for name in names}

        for future in as_completed(future_to_name):
            name = future_to_name[future]
            try:
                results[name] = dict(CheckResultSerializer(future.result()).data)
                logger.info(f"Check {name}: {results[name]['status']}")
            except Exception as e:
                logger.error(f"Exception from check {name}: {str(e)}")
                results[name] = _error_result(name, str(e))

    return [results[name] for name in names]


def summarize(results: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Counts per status; the suite passes when every check passed."""
    counts = {'passed': 0, 'failed': 0, 'error': 0}
    for result in results:
        counts[result['status']] += 1
    return {'total': len(results), **counts, 'passed_all': counts['passed'] == len(results)}
