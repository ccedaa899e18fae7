from unittest.mock import patch

from django.test import SimpleTestCase

from kdelta.tasks import classify_batch, classify_in_parallel, classify_row
from kdelta_project.celery import app as celery_app


@patch.object(celery_app.conf, 'task_always_eager', True)
class ClassifyTaskTests(SimpleTestCase):
    def test_single_row(self):
        row = classify_row(4, 2, 5)
        self.assertEqual(row['status'], 'K-unstable')
        self.assertEqual(row['volume'], '15/7')

    def test_batch_runs_eagerly(self):
        rows = classify_batch.apply(args=([(2, 2, 3), (3, 2, 4)],)).get()
        self.assertEqual([row['status'] for row in rows], ['strictly K-semistable', 'K-unstable'])

    def test_parallel_keeps_input_order(self):
        triples = [(3, 2, 0), (2, 2, 4), (4, 2, 5), (3, 3, 6), (5, 2, 1)]
        rows = classify_in_parallel(triples, 2)
        self.assertEqual([(row['n'], row['m'], row['k']) for row in rows], triples)
        self.assertEqual(rows[1]['status'], 'K-stable')
        self.assertEqual(rows[3]['status'], 'out-of-family')

    def test_nothing_to_do(self):
        self.assertEqual(classify_in_parallel([], 4), [])
