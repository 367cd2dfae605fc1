"""HTTP service wrapping the experiment harness."""

from .app import app, create_app

__all__ = ["app", "create_app"]
