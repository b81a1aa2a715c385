"""
Theme definitions for endtangle text reports.
"""

from typing import Dict

THEMES: Dict[str, Dict[str, str]] = {
    "default": {
        "info": "#94a3b8",            # Slate 400
        "error": "bold #ef4444",      # Red 500
        "success": "bold #22c55e",    # Green 500
        "warning": "#f59e0b",         # Amber 500
        "header": "bold #38bdf8",     # Sky 400
        "border": "#334155",          # Slate 700
        "accent": "#38bdf8",
        "closed": "bold #22c55e",
        "open": "bold #f97316",       # Orange 500
        "undecided": "bold #f59e0b",
        "vertex": "#e2e8f0",
    },
    "dark": {
        "info": "#6b7280",
        "error": "bold #f87171",
        "success": "bold #4ade80",
        "warning": "#fbbf24",
        "header": "bold #7dd3fc",
        "border": "#1e293b",
        "accent": "#7dd3fc",
        "closed": "bold #4ade80",
        "open": "bold #fb923c",
        "undecided": "bold #fbbf24",
        "vertex": "#f1f5f9",
    },
    "light": {
        "info": "#64748b",
        "error": "bold #dc2626",
        "success": "bold #16a34a",
        "warning": "#d97706",
        "header": "bold #0369a1",
        "border": "#cbd5e1",
        "accent": "#0369a1",
        "closed": "bold #16a34a",
        "open": "bold #ea580c",
        "undecided": "bold #d97706",
        "vertex": "#0f172a",
    },
}


def get_theme(name: str) -> Dict[str, str]:
    """Get a theme by name."""
    return THEMES.get(name, THEMES["default"])
