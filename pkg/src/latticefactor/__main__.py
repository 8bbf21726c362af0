#!/usr/bin/env python3
"""Main entry point for latticefactor."""

import logging
import sys
from typing import List, Optional


def setup_logging(debug: bool = False) -> None:
    """Configure logging."""
    level = logging.DEBUG if debug else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Run the latticefactor command line and return its exit code."""
    import click

    from .cli import cli

    try:
        return cli.main(args=argv, prog_name="latticefactor", standalone_mode=False) or 0
    except click.ClickException as e:
        e.show()
        return 2
    except click.Abort:
        return 1
    except SystemExit as e:
        return int(e.code or 0)
    except Exception as e:
        logging.getLogger(__name__).error("Error running latticefactor: %s", e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
