"""``python -m fmgsr`` runs the study CLI."""

from .cli import main_entry

main_entry()
