"""HTTP embedding sidecar: token-level or pooled sentence vectors."""

from .app import create_app
from .config import SidecarConfig
from .encoders import HashEncoder, build_encoder

__version__ = "0.1.0"

__all__ = ["HashEncoder", "SidecarConfig", "build_encoder", "create_app"]
