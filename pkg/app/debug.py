# ABOUTME: Debug logging utilities
# ABOUTME: Provides conditional diagnostics on stderr when DEBUG=true

import sys

from app.config import Config


def debug_log(message: str, category: str = "DEBUG") -> None:
    """
    Print debug message to stderr if DEBUG mode is enabled.

    stdout is reserved for CLI summaries and JSON.

    Args:
        message: The message to log
        category: Category prefix (e.g., "INTEGRATE", "CONDITION", "STUDY")
    """
    if Config.DEBUG:
        print(f"[{category}] {message}", file=sys.stderr, flush=True)
