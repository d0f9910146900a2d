"""
Create (or with --reset, recreate) the run ledger schema

    python -m src.database.init_db [--reset]
"""
import argparse
from typing import List, Optional

from ..config import DATABASE_URL
from .database import init_db, reset_database


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Initialize the simulation run ledger")
    parser.add_argument("--reset", action="store_true", help="Drop every recorded run first")
    args = parser.parse_args(argv)

    print(f"Initializing run ledger at {DATABASE_URL}...")
    if args.reset:
        reset_database()
    else:
        init_db()
    print("Run ledger initialization complete!")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
