import os
import sys

import numpy as np
import pytest
from fastapi.testclient import TestClient
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

# Add the app directory to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, project_root)

# Keep the app lifespan away from the on-disk run store
os.environ.setdefault("DATABASE_URL", "sqlite:///:memory:")

from app.multicut.instance import MulticutInstance  # noqa: E402

TRIANGLE_TEXT = "MULTICUT 3 3\n0 1 -2\n0 2 1\n1 2 1\n"
K4_TEXT = "MULTICUT 4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 -1\n1 3 -1\n2 3 -1\n"


def random_instance(rng: np.random.Generator, node_count: int, density: float = 0.6, scale: float = 1.0) -> MulticutInstance:
    """Connected-ish random instance with Gaussian costs; always contains a spanning path."""
    edges = [(i, i + 1, float(rng.normal(scale=scale))) for i in range(node_count - 1)]
    for u in range(node_count):
        for v in range(u + 2, node_count):
            if rng.random() < density:
                edges.append((u, v, float(rng.normal(scale=scale))))
    return MulticutInstance.from_edges(node_count, edges)


@pytest.fixture
def triangle_instance():
    """Triangle with one repulsive edge of cost -2 and two attractive edges of cost 1."""
    return MulticutInstance.from_edges(3, [(0, 1, -2.0), (0, 2, 1.0), (1, 2, 1.0)])


@pytest.fixture
def k4_instance():
    """K4 with attractive spokes from node 0 and a repulsive rim 1-2-3."""
    return MulticutInstance.from_edges(4, [
        (0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0),
        (1, 2, -1.0), (1, 3, -1.0), (2, 3, -1.0),
    ])


@pytest.fixture
def square_instance():
    """Chordless 4-cycle with one repulsive edge."""
    return MulticutInstance.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, -2.0)])


@pytest.fixture
def house_instance():
    """Square 0-1-2-3 with a roof node 4 over the edge 2-3."""
    return MulticutInstance.from_edges(5, [
        (0, 1, 1.0), (1, 2, -1.0), (2, 3, 2.0), (0, 3, -1.0), (2, 4, 0.5), (3, 4, -0.5),
    ])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def instance_file(tmp_path):
    """Write instance text to a temporary file and return its path."""
    def write(text: str, name: str = "instance.txt"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return write


@pytest.fixture
def db_session():
    """Create a clean database session for each test."""
    # Import inside fixture to avoid circular imports
    from app.database.connection import Base

    # Use in-memory SQLite for tests; one shared connection so the
    # TestClient worker thread sees the same database
    engine = create_engine(
        "sqlite:///:memory:",
        connect_args={"check_same_thread": False},
        poolclass=StaticPool,
    )

    # IMPORT MODELS so tables are registered with Base
    from app.models.run import SolveRun, ConvergencePoint  # noqa: F401

    Base.metadata.drop_all(engine)  # Clean start
    Base.metadata.create_all(engine)

    Session = sessionmaker(bind=engine)
    session = Session()

    try:
        yield session
    finally:
        session.close()


@pytest.fixture
def app(db_session):
    """Create a FastAPI app with overridden dependencies."""
    from app.main import app
    from app.database.connection import get_db

    def override_get_db():
        try:
            yield db_session
        finally:
            pass

    app.dependency_overrides[get_db] = override_get_db
    yield app
    app.dependency_overrides.clear()


@pytest.fixture
def client(app):
    """Create a test client using the app fixture."""
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def make_random_instance():
    return random_instance
