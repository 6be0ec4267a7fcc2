"""Run the sidecar under uvicorn: ``python -m patsim_sidecar``."""

from __future__ import annotations

import argparse
import logging

import uvicorn

from .app import create_app
from .config import SidecarConfig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="patsim-sidecar", description=__doc__)
    parser.add_argument("--host", default=None)
    parser.add_argument("--port", type=int, default=None)
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO)
    config = SidecarConfig.load()
    uvicorn.run(
        create_app(config),
        host=args.host or config.host,
        port=args.port if args.port is not None else config.port,
        log_level="info",
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
