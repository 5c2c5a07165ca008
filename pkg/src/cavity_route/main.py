"""Cavity Route 入口点"""

import logging
import sys

from cavity_route.adapters.inbound.cli import run_command

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: int = logging.INFO) -> None:
    """日志写到 stderr，stdout 只留给结果输出"""
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main() -> None:
    """主入口"""
    configure_logging()
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
