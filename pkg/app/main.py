import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.database.connection import create_database
from app.routers import runs

logger = logging.getLogger(__name__)


# Initialize database on startup
@asynccontextmanager
async def lifespan(app: FastAPI):
    try:
        create_database()
        logger.info("run store initialized")
    except Exception:
        logger.exception("failed to initialize the run store")
    yield


app = FastAPI(
    title="mcmp",
    description="Minimum cost multicut solver by message passing, with a store of solve runs",
    version="0.1.0",
    docs_url="/api/docs",
    redoc_url="/api/redoc",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(runs.router)


@app.get("/")
def read_root():
    """Service description."""
    return {
        "name": app.title,
        "description": app.description,
        "docs": app.docs_url,
        "endpoints": {
            "POST /runs/": "upload a MULTICUT instance file and solve it (form fields: tighten, max_iterations, epsilon)",
            "GET /runs/": "list stored runs",
            "GET /runs/{run_id}": "run with its convergence records",
            "GET /runs/{run_id}/plot": "SVG convergence plot",
            "DELETE /runs/{run_id}": "delete a run",
        },
    }
