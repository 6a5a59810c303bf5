# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import json
import os
import sys
import tempfile
import unittest

sys.path.append('..')
from chiraltalbot.journal import SweepJournal

CELL = {"R_cgs_1e40": 1000.0, "g_e": 0.2, "delta_S": 0.01, "delta_V_max": 0.002, "error": None}


class SweepJournalTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "sweep_journal.json")

    def tearDown(self):
        self.tmp.cleanup()

    def test_record_and_resume(self):
        journal = SweepJournal(self.path, "fp1")
        self.assertFalse(journal.is_done("a"))
        journal.record("a", CELL)
        resumed = SweepJournal(self.path, "fp1")
        self.assertTrue(resumed.is_done("a"))
        self.assertEqual(resumed.get("a"), CELL)
        self.assertIsNone(resumed.get("b"))

    def test_other_config_starts_afresh(self):
        SweepJournal(self.path, "fp1").record("a", CELL)
        other = SweepJournal(self.path, "fp2")
        self.assertEqual(other.cells, {})

    def test_restore_from_backup(self):
        journal = SweepJournal(self.path, "fp1")
        journal.record("a", CELL)
        journal.create_backup()
        with open(self.path, 'w', encoding='utf-8') as f:
            f.write("{ not json")
        restored = SweepJournal(self.path, "fp1")
        self.assertTrue(restored.is_done("a"))
        with open(self.path, 'r', encoding='utf-8') as f:
            self.assertEqual(json.load(f)["fingerprint"], "fp1")

    def test_backup_rotation(self):
        journal = SweepJournal(self.path, "fp1", max_backups=2)
        journal.record("a", CELL)
        for _ in range(5):
            journal.create_backup()
        self.assertLessEqual(len(journal._backup_files()), 2)


if __name__ == '__main__':
    unittest.main()
