#!/usr/bin/env python3
"""
Database initialization script for the mcmp run store.
Run this script to create the database and tables.
"""

import io

from app.crud.run_crud import RunCRUD
from app.database.connection import create_database, get_session
from app.multicut.instance import parse_instance
from app.multicut.solver import solve
from app.schemas.solver import SolveConfig

SAMPLE_INSTANCES = {
    "triangle.txt": "MULTICUT 3 3\n0 1 -2\n0 2 1\n1 2 1\n",
    "k4_odd_wheel.txt": "MULTICUT 4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 -1\n1 3 -1\n2 3 -1\n",
}


def initialize_app():
    """Create the run store tables."""
    print("Creating database and tables...")
    create_database()
    print("Database initialized successfully!")


def create_sample_data():
    """Solve the bundled sample instances and store the runs."""
    db = get_session()

    try:
        print("Solving sample instances...")
        config = SolveConfig.from_settings()
        for name, text in SAMPLE_INSTANCES.items():
            instance = parse_instance(io.StringIO(text))
            result = solve(instance, config)
            run = RunCRUD.create_from_result(db, name, instance, result, config.tighten)
            print(f"✓ Stored run {run.id}: {name} LB={result.lower_bound:g} UB={result.upper_bound:g} status={result.status}")

    except Exception as e:
        print(f"❌ Error creating sample data: {e}")
        db.rollback()
    finally:
        db.close()


if __name__ == "__main__":
    import sys

    initialize_app()

    if len(sys.argv) > 1 and sys.argv[1] == "--sample":
        create_sample_data()
    else:
        print("\nTo store sample runs, run: python init_db.py --sample")
