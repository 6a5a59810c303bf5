# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import json
import math
import os
import sys
import tempfile
import unittest

import numpy as np

sys.path.append('..')
from chiraltalbot.output import column_rows, format_number, write_csv, write_meta


class OutputTestCase(unittest.TestCase):

    def test_format_number(self):
        self.assertEqual(format_number(0.1), "0.10000000000000001")
        self.assertEqual(format_number(math.nan), "nan")
        self.assertEqual(float(format_number(1 / 3)), 1 / 3)
        self.assertEqual(format_number(np.float64(2.0)), "2")

    def test_write_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_csv(os.path.join(tmp, "sub", "fringe.csv"), ["x3_nm", "S_left", "S_right"],
                             column_rows([0.0, 1.5], [0.25, 0.5], [0.125, math.nan]))
            with open(path, 'rb') as f:
                content = f.read().decode('utf-8')
        self.assertEqual(content, "x3_nm,S_left,S_right\n0,0.25,0.125\n1.5,0.5,nan\n")

    def test_write_meta(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_meta(os.path.join(tmp, "meta.json"), {"b": np.float64(1.5), "a": math.nan, "n": np.int64(3)})
            with open(path, 'r', encoding='utf-8') as f:
                text = f.read()
            with self.assertRaises(TypeError):
                write_meta(os.path.join(tmp, "bad.json"), {"nested": {"x": 1}})
        self.assertTrue(text.endswith("\n"))
        self.assertEqual(json.loads(text), {"a": None, "b": 1.5, "n": 3})
        self.assertLess(text.index('"a"'), text.index('"b"'))

    def test_column_rows(self):
        self.assertEqual(column_rows([1, 2], [3, 4]), [[1, 3], [2, 4]])
        with self.assertRaises(ValueError):
            column_rows([1, 2], [3])


if __name__ == '__main__':
    unittest.main()
