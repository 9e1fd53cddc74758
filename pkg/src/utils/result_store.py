"""
Result Store

Small sqlite archive of suite runs and sweep rows, so results of
earlier verification runs can be compared.
"""

import json
import logging
import sqlite3
from pathlib import Path
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class ResultStore:
    """Lightweight database for verification results."""

    def __init__(self, db_path: str = "data/results.db"):
        """Open (and create if needed) the results database.

        Args:
            db_path: Path to SQLite database file, or ":memory:"
        """
        self.db_path = db_path
        if db_path != ":memory:":
            Path(db_path).parent.mkdir(parents=True, exist_ok=True)
        self.conn = sqlite3.connect(db_path, check_same_thread=False)
        self._create_tables()

    def _create_tables(self):
        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS suite_runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                timestamp DATETIME DEFAULT CURRENT_TIMESTAMP,
                seed INTEGER,
                passed INTEGER,
                n_tests INTEGER,
                report_path TEXT
            )
        """)
        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS sweep_rows (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                timestamp DATETIME DEFAULT CURRENT_TIMESTAMP,
                run_id TEXT,
                row_json TEXT
            )
        """)
        self.conn.execute("CREATE INDEX IF NOT EXISTS idx_sweep_run ON sweep_rows(run_id)")
        self.conn.commit()

    def save_suite_run(self, seed: int, passed: bool, n_tests: int, report_path: str = "") -> int:
        """Record one suite run.

        Returns:
            Row id of the new entry
        """
        cursor = self.conn.execute("""
            INSERT INTO suite_runs (seed, passed, n_tests, report_path)
            VALUES (?, ?, ?, ?)
        """, (int(seed), int(bool(passed)), int(n_tests), str(report_path)))
        self.conn.commit()
        logger.debug(f"Suite run stored (id={cursor.lastrowid})")
        return int(cursor.lastrowid)

    def save_sweep_rows(self, run_id: str, rows: List[Dict[str, Any]]):
        """Record every row of a sweep table under one run id."""
        self.conn.executemany(
            "INSERT INTO sweep_rows (run_id, row_json) VALUES (?, ?)",
            [(run_id, json.dumps(row, default=str)) for row in rows]
        )
        self.conn.commit()
        logger.debug(f"{len(rows)} sweep rows stored for run {run_id}")

    def get_suite_runs(self, limit: int = 20) -> List[Dict[str, Any]]:
        """Most recent suite runs, newest first."""
        cursor = self.conn.execute("""
            SELECT id, timestamp, seed, passed, n_tests, report_path
            FROM suite_runs
            ORDER BY id DESC
            LIMIT ?
        """, (limit,))
        keys = ["id", "timestamp", "seed", "passed", "n_tests", "report_path"]
        return [dict(zip(keys, row)) for row in cursor.fetchall()]

    def get_sweep_rows(self, run_id: str) -> List[Dict[str, Any]]:
        cursor = self.conn.execute(
            "SELECT row_json FROM sweep_rows WHERE run_id = ? ORDER BY id", (run_id,)
        )
        return [json.loads(row[0]) for row in cursor.fetchall()]

    def close(self):
        """Close database connection."""
        self.conn.close()
