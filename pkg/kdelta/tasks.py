import logging

from celery import group, shared_task

from .catalog.classification import classify
from .serializers import ClassificationRowSerializer

logger = logging.getLogger(__name__)


@shared_task
def classify_row(n, m, k):
    """Classify one triple and return the serialized row."""
    logger.debug('Classifying (%s, %s, %s)', n, m, k)
    return dict(ClassificationRowSerializer(classify(n, m, k)).data)


@shared_task(bind=True)
def classify_batch(self, triples):
    rows = []
    for index, (n, m, k) in enumerate(triples, start=1):
        rows.append(classify_row(n, m, k))
        if not self.request.is_eager:
            self.update_state(state='PROGRESS', meta={'current': index, 'total': len(triples)})
    return rows


def classify_in_parallel(triples, jobs):
    """Fan ``triples`` out over ``jobs`` batches; rows come back in input order."""
    triples = [tuple(triple) for triple in triples]
    if not triples:
        return []
    jobs = max(1, min(jobs, len(triples)))
    size = -(-len(triples) // jobs)
    batches = [triples[i:i + size] for i in range(0, len(triples), size)]
    logger.info('Classifying %d triples in %d batches', len(triples), len(batches))
    result = group(classify_batch.s(batch) for batch in batches).apply_async()
    # join() walks the results in submission order
    return [row for batch in result.join() for row in batch]
