"""Entry point for the zenerwave CLI.

Allows running the package as ``python -m zenerwave``.
"""

from .cli import main

if __name__ == "__main__":  # pragma: no cover
    main()
