# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Result files: CSV tables and the flat meta.json run record
"""
import csv
import json
import math
import os
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np


def format_number(value: float) -> str:
    """
    Format a number with 17 significant digits, so that it reads back bit-exactly

    Args:
        value: the number

    Returns:
        the formatted string
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".17g")


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    """Write a numeric table with "\n" line endings"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_number(v) for v in row])
    return path


def _plain(value: Any) -> Any:
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_meta(path: str, record: Dict[str, Any]) -> str:
    """Write a flat key-value run record, sorted by key"""
    flat = {str(k): _plain(v) for k, v in record.items()}
    for key, value in flat.items():
        if isinstance(value, (dict, list, tuple)):
            raise TypeError(f"meta record must be flat, '{key}' is {type(value).__name__}")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        json.dump(flat, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def column_rows(*columns: Sequence[float]) -> List[List[float]]:
    """Zip equally long columns into rows"""
    lengths = {len(c) for c in columns}
    if len(lengths) != 1:
        raise ValueError(f"columns differ in length: {sorted(lengths)}")
    return [list(row) for row in zip(*columns)]
