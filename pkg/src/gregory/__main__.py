"""python -m gregory delegates to the CLI."""

from .cli import entrypoint

entrypoint()
