"""HTTP service exposing the toolkit: pydantic envelopes over the core
functions, one POST endpoint per operation, GET /health for liveness."""

from .app import app

__all__ = ["app"]
