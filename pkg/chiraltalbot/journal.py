# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Per-cell completion journal of a sweep, so an interrupted sweep can resume
"""
import json
import os
import shutil
from datetime import datetime
from typing import Any, Dict, Optional

from loguru import logger


class SweepJournal:
    """Journal of finished sweep cells, bound to the fingerprint of the config that produced them"""

    def __init__(self, journal_file: str, fingerprint: str, max_backups: int = 10):
        """
        Initialize the journal

        Args:
            journal_file: journal path, usually inside the output directory
            fingerprint: hash of the run config; a journal written for another config is discarded
            max_backups: backups kept next to the journal
        """
        self.journal_file = journal_file
        self.backup_dir = os.path.join(os.path.dirname(os.path.abspath(self.journal_file)), "backups")
        self.fingerprint = fingerprint
        self.max_backups = max_backups
        self.cells: Dict[str, Dict[str, Any]] = {}

        os.makedirs(os.path.dirname(os.path.abspath(self.journal_file)), exist_ok=True)
        os.makedirs(self.backup_dir, exist_ok=True)
        self.load()

    def create_backup(self) -> None:
        """Copy the journal to a timestamped backup"""
        if not os.path.exists(self.journal_file):
            return
        try:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
            shutil.copy2(self.journal_file, os.path.join(self.backup_dir, f"journal_{timestamp}.json"))
            self._cleanup_old_backups()
        except OSError as e:
            logger.error(f"Failed to create journal backup: {e}")

    def _backup_files(self):
        files = [os.path.join(self.backup_dir, f) for f in os.listdir(self.backup_dir)
                 if f.startswith("journal_") and f.endswith(".json")]
        return sorted(files, key=os.path.getmtime)

    def _cleanup_old_backups(self) -> None:
        for old_file in self._backup_files()[:-self.max_backups]:
            os.remove(old_file)
            logger.debug(f"Removed old journal backup: {old_file}")

    def _read(self, path: str) -> Optional[Dict[str, Dict[str, Any]]]:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        if data.get('fingerprint') != self.fingerprint:
            return None
        return data.get('cells', {})

    def load(self) -> None:
        """Load finished cells; a journal of another config starts the sweep afresh"""
        if not os.path.exists(self.journal_file):
            return
        try:
            cells = self._read(self.journal_file)
            if cells is None:
                logger.warning(f"Journal {self.journal_file} belongs to another config, starting afresh")
                self.create_backup()
                return
            self.cells = cells
            logger.info(f"Resuming sweep: {len(self.cells)} cells already finished")
            self.create_backup()
        except (OSError, ValueError) as e:
            logger.error(f"Failed to load sweep journal: {e}")
            self._restore_from_backup()

    def _restore_from_backup(self) -> bool:
        """Load the newest readable backup of the same config"""
        for backup in reversed(self._backup_files()):
            try:
                cells = self._read(backup)
            except (OSError, ValueError):
                continue
            if cells is not None:
                self.cells = cells
                shutil.copy2(backup, self.journal_file)
                logger.info(f"Restored sweep journal from backup: {backup}")
                return True
        logger.warning("No usable journal backup, starting afresh")
        self.cells = {}
        return False

    def save(self) -> None:
        """Write the journal atomically"""
        tmp_file = self.journal_file + ".tmp"
        with open(tmp_file, 'w', encoding='utf-8') as f:
            json.dump({'fingerprint': self.fingerprint, 'cells': self.cells}, f, indent=2, sort_keys=True)
        os.replace(tmp_file, self.journal_file)

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        return self.cells.get(key)

    def is_done(self, key: str) -> bool:
        return key in self.cells

    def record(self, key: str, cell: Dict[str, Any]) -> None:
        """Store one finished cell and persist"""
        self.cells[key] = cell
        self.save()
