"""Entry point: ``python main.py <verb> ...``."""

import sys

from dotenv import load_dotenv

# Load .env before importing project modules so settings see it.
load_dotenv()

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
