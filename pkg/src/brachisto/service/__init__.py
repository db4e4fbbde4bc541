"""HTTP service wrapping the solver package.

The CLI talks to this app in-process; `uvicorn brachisto.service.app:app`
serves the same surface over a socket.
"""

from .app import app, create_app

__all__ = ["app", "create_app"]
