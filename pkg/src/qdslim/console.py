"""
Status lines for the command line.
Everything here goes to stderr; stdout is reserved for report payloads.
"""

import sys
from typing import Any
from typing import Dict

SYMBOLS = {
    "info": "ℹ",
    "success": "✓",
    "error": "✗",
    "warning": "⚠",
}


def show_message(message: str, msg_type: str = "info") -> None:
    """
    Display a formatted message.
    Args:
        message: The message to display
        msg_type: 'info', 'success', 'error', or 'warning'
    """
    symbol = SYMBOLS.get(msg_type, "•")
    print(f"{symbol} {message}", file=sys.stderr)


def show_summary(report: Dict[str, Any]) -> None:
    """
    Summarize a campaign report: one line per (alpha, E) block with its worst margin.
    Args:
        report: CampaignResult.as_dict() output
    """
    rows = report.get("rows", [])
    blocks: Dict[str, float] = {}
    for row in rows:
        key = f"alpha={row['alpha']:g}, E={row['E']:g}"
        blocks[key] = min(blocks.get(key, float("inf")), row["margin"])

    print("=" * 50, file=sys.stderr)
    print(f"CAMPAIGN {report.get('campaign', '?').upper()}", file=sys.stderr)
    print("=" * 50, file=sys.stderr)
    for key, margin in blocks.items():
        print(f"  • {key}: worst margin {margin:.3e}", file=sys.stderr)
    status = "success" if report.get("passed") else "error"
    verdict = "all bounds hold" if report.get("passed") else "bound violated"
    show_message(f"{len(rows)} comparisons, {verdict}", status)
