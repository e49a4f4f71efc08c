from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker
from sqlalchemy.pool import StaticPool

from app.config import settings

Base = declarative_base()

DATABASE_URL = settings.database_url

# Single engine instance
_engine = None


def get_engine():
    global _engine
    if _engine is None:
        if DATABASE_URL.startswith("sqlite") and ":memory:" in DATABASE_URL:
            # An in-memory database lives in one connection; every thread must share it
            _engine = create_engine(
                DATABASE_URL, echo=False, connect_args={"check_same_thread": False}, poolclass=StaticPool
            )
        elif DATABASE_URL.startswith("sqlite"):
            # SQLite takes no pooling parameters; the service shares connections across threads
            _engine = create_engine(DATABASE_URL, echo=False, connect_args={"check_same_thread": False})
        else:
            _engine = create_engine(
                DATABASE_URL,
                echo=False,
                pool_size=5,
                max_overflow=10,
                pool_timeout=30,
                pool_recycle=1800
            )
    return _engine


def create_database():
    """Create the run store tables."""
    # Import models here to ensure they're registered with Base
    from app.models import run

    engine = get_engine()
    Base.metadata.create_all(bind=engine)
    return engine


def get_session():
    """Get a database session."""
    engine = get_engine()
    SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    return SessionLocal()


def get_db():
    """Dependency to get DB session for FastAPI."""
    db = get_session()
    try:
        yield db
    finally:
        db.close()
